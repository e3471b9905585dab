#pragma once

// N-way interleaving of independent rANS coders over one shared digit stream.
//
// Position i of the message is coded on lane i mod N. The encoder walks the
// message backwards and every lane pushes onto the same emission stack; the
// decoder walks forwards and every lane pulls from the same cursor. Nothing
// but the per-lane final states needs to travel with the payload.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "iec/digits.hpp"
#include "iec/error.hpp"
#include "iec/rans.hpp"
#include "iec/symbol_table.hpp"

namespace iec {

using Digit = std::uint16_t;

/// Coded body shared by every interleaved stream: one final encoder state
/// per lane, the message length, and the digits in decoder read order.
struct InterleavedStream {
    std::vector<std::uint32_t> final_states;
    std::uint64_t message_length = 0;
    std::vector<Digit> payload;

    [[nodiscard]] std::size_t lanes() const noexcept { return final_states.size(); }

    friend bool operator==(const InterleavedStream&, const InterleavedStream&) = default;
};

/// Called after every group of `lanes` decoded symbols (and after a short
/// final group) with the lane states and the shared read position.
using StepObserver = std::function<void(std::span<const std::uint32_t> states, std::size_t read_pos)>;

struct DecodeReport {
    std::size_t digits_read = 0;
    /// Unread payload digits after the last symbol; a warning, not an error.
    std::size_t trailing_digits = 0;
};

namespace detail {

inline void require_lanes(std::size_t lanes) {
    if (lanes == 0 || lanes > 0xFFFF)
        throw error(errc::invalid_argument, "lane count must be in [1, 65535], got " + std::to_string(lanes));
}

inline void require_encodable(std::span<const std::uint8_t> msg, const SymbolTable& table) {
    for (std::size_t i = 0; i < msg.size(); ++i)
        if (!table.encodable(msg[i]))
            throw error(errc::unencodable_symbol,
                        "symbol " + std::to_string(msg[i]) + " at position " + std::to_string(i));
}

template <RenormVariant V>
void require_start_states(const InterleavedStream& stream) {
    for (auto x : stream.final_states)
        if (x < V::lower_bound || std::uint64_t{x} >= (std::uint64_t{V::lower_bound} << V::radix_bits))
            throw error(errc::bad_format, "lane state " + std::to_string(x) + " outside the normalized interval");
}

/// Upper bound on digits one symbol can pull in while decoding.
template <RenormVariant V>
constexpr std::size_t kMaxDigitsPerSymbol = (32 + V::radix_bits - 1) / V::radix_bits;

template <RenormVariant V, std::size_t N>
void decode_fixed(const SymbolTable& table, const InterleavedStream& stream, std::uint8_t* out,
                  DigitReader<Digit>& source) {
    std::array<std::uint32_t, N> x;
    for (std::size_t k = 0; k < N; ++k) x[k] = stream.final_states[k];
    const std::size_t len = stream.message_length;
    const std::size_t full = len - len % N;
    const SlotEntry* slots = table.slots().data();
    const std::uint32_t slot_mask = table.total() - 1;
    const unsigned scale = table.scale_bits();
    const Digit* digits = source.data().data();
    const std::size_t avail = source.data().size();
    std::size_t pos = source.position();
    constexpr std::size_t group_digits = N * kMaxDigitsPerSymbol<V>;

    std::size_t i = 0;
    // Unchecked while a whole group cannot run past the end of the payload.
    if (single_renorm<V>(scale)) {
        for (; i < full && avail - pos >= group_digits; i += N) {
            for (std::size_t k = 0; k < N; ++k) {
                const SlotEntry e = slots[x[k] & slot_mask];
                const std::uint32_t v = e.freq * (x[k] >> scale) + e.bias;
                const bool renorm = v < V::lower_bound;
                const std::uint32_t pulled = (v << V::radix_bits) | digits[pos];
                x[k] = renorm ? pulled : v;
                pos += renorm;
                out[i + k] = e.symbol;
            }
        }
    } else {
        for (; i < full && avail - pos >= group_digits; i += N) {
            for (std::size_t k = 0; k < N; ++k) {
                const SlotEntry e = slots[x[k] & slot_mask];
                std::uint32_t v = e.freq * (x[k] >> scale) + e.bias;
                while (v < V::lower_bound) v = (v << V::radix_bits) | digits[pos++];
                x[k] = v;
                out[i + k] = e.symbol;
            }
        }
    }
    source.advance(pos - source.position());
    for (; i < len; ++i) {
        auto& state = x[i % N];
        auto [s, next] = decode_symbol_renorm<V>(state, table, source);
        state = next;
        out[i] = s;
    }
}

} // namespace detail

template <RenormVariant V>
InterleavedStream encode_interleaved(std::span<const std::uint8_t> msg, const SymbolTable& table,
                                     std::size_t lanes) {
    detail::require_lanes(lanes);
    require_compatible<V>(table);
    detail::require_encodable(msg, table);

    std::vector<std::uint32_t> x(lanes, V::lower_bound);
    DigitSink<Digit> sink(msg.size() / 2 + 16);
    for (std::size_t i = msg.size(); i-- > 0;) {
        auto& state = x[i % lanes];
        state = encode_symbol_renorm<V>(state, msg[i], table, sink);
    }
    return {std::move(x), msg.size(), std::move(sink).finish()};
}

template <RenormVariant V>
std::vector<std::uint8_t> decode_interleaved(const SymbolTable& table, const InterleavedStream& stream,
                                             const StepObserver* observer = nullptr,
                                             DecodeReport* report = nullptr) {
    const std::size_t lanes = stream.lanes();
    detail::require_lanes(lanes);
    require_compatible<V>(table);
    detail::require_start_states<V>(stream);

    std::vector<std::uint8_t> out(stream.message_length);
    DigitReader<Digit> source(stream.payload);

    if (observer == nullptr && (lanes == 1 || lanes == 2 || lanes == 4 || lanes == 8)) {
        switch (lanes) {
        case 1: detail::decode_fixed<V, 1>(table, stream, out.data(), source); break;
        case 2: detail::decode_fixed<V, 2>(table, stream, out.data(), source); break;
        case 4: detail::decode_fixed<V, 4>(table, stream, out.data(), source); break;
        default: detail::decode_fixed<V, 8>(table, stream, out.data(), source); break;
        }
    } else {
        std::vector<std::uint32_t> x = stream.final_states;
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto& state = x[i % lanes];
            auto [s, next] = decode_symbol_renorm<V>(state, table, source);
            state = next;
            out[i] = s;
            if (observer && ((i + 1) % lanes == 0 || i + 1 == out.size())) (*observer)(x, source.position());
        }
    }
    if (report) *report = {source.position(), source.remaining()};
    return out;
}

// Bypass coding: raw values written straight into the shared stream. A value
// of `width` bits takes ceil(width / radix_bits) digits, most significant
// digit first in read order.

template <RenormVariant V>
void encode_raw_bits(std::uint32_t value, unsigned width, DigitSink<Digit>& sink) {
    if (width > 32) throw error(errc::invalid_argument, "raw value wider than 32 bits");
    if (width < 32 && (value >> width) != 0)
        throw error(errc::invalid_argument, "raw value does not fit in " + std::to_string(width) + " bits");
    for (unsigned done = 0; done < width; done += V::radix_bits) {
        sink.emit(static_cast<Digit>(value & kDigitMask<V>));
        value = V::radix_bits >= 32 ? 0 : value >> V::radix_bits;
    }
}

template <RenormVariant V>
std::uint32_t decode_raw_bits(unsigned width, DigitReader<Digit>& source) {
    if (width > 32) throw error(errc::invalid_argument, "raw value wider than 32 bits");
    std::uint64_t value = 0;
    for (unsigned done = 0; done < width; done += V::radix_bits) value = (value << V::radix_bits) | source.read();
    return static_cast<std::uint32_t>(value);
}

/// A coded symbol plus the raw value that follows it in the stream.
struct BypassSymbol {
    std::uint8_t symbol = 0;
    std::uint32_t extra = 0;

    friend bool operator==(const BypassSymbol&, const BypassSymbol&) = default;
};

/// Interleaved coding where symbol s is followed by `widths[s]` raw bits. The
/// encoder writes the raw bits just before coding the symbol (in its backward
/// pass), so the decoder finds them right after decoding it.
template <RenormVariant V>
InterleavedStream encode_interleaved_bypass(std::span<const BypassSymbol> msg, const SymbolTable& table,
                                            std::span<const std::uint8_t> widths, std::size_t lanes) {
    detail::require_lanes(lanes);
    require_compatible<V>(table);
    if (widths.size() < table.size()) throw error(errc::invalid_argument, "bypass width table too short");

    std::vector<std::uint32_t> x(lanes, V::lower_bound);
    DigitSink<Digit> sink;
    for (std::size_t i = msg.size(); i-- > 0;) {
        const auto& item = msg[i];
        if (!table.encodable(item.symbol))
            throw error(errc::unencodable_symbol, "symbol " + std::to_string(item.symbol));
        encode_raw_bits<V>(item.extra, widths[item.symbol], sink);
        auto& state = x[i % lanes];
        state = encode_symbol_renorm<V>(state, item.symbol, table, sink);
    }
    return {std::move(x), msg.size(), std::move(sink).finish()};
}

template <RenormVariant V>
std::vector<BypassSymbol> decode_interleaved_bypass(const SymbolTable& table, const InterleavedStream& stream,
                                                    std::span<const std::uint8_t> widths,
                                                    const StepObserver* observer = nullptr) {
    const std::size_t lanes = stream.lanes();
    detail::require_lanes(lanes);
    require_compatible<V>(table);
    detail::require_start_states<V>(stream);
    if (widths.size() < table.size()) throw error(errc::invalid_argument, "bypass width table too short");

    std::vector<BypassSymbol> out(stream.message_length);
    std::vector<std::uint32_t> x = stream.final_states;
    DigitReader<Digit> source(stream.payload);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& state = x[i % lanes];
        auto [s, next] = decode_symbol_renorm<V>(state, table, source);
        state = next;
        out[i] = {s, decode_raw_bits<V>(widths[s], source)};
        if (observer && ((i + 1) % lanes == 0 || i + 1 == out.size())) (*observer)(x, source.position());
    }
    return out;
}

} // namespace iec
