#pragma once

// Lane-parallel rANS, written as the vector program a SIMD unit or a GPU warp
// would run: every lane applies the coding function, a ballot forms the mask
// of lanes that need renormalization, and a prefix popcount over that mask
// gives each lane its offset into the shared digit stream.
//
// Only the single-renormalization regime (radix >= m) is supported. In that
// regime the lane decoder consumes digits in exactly the order the serial
// interleaved decoder does, so both read the same bitstream for any lane count.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iec/container.hpp"
#include "iec/digits.hpp"
#include "iec/error.hpp"
#include "iec/interleave.hpp"
#include "iec/rans.hpp"
#include "iec/symbol_table.hpp"

namespace iec {

inline constexpr std::size_t kMaxLanes = 32;

/// Bit i set iff lane i takes part in this step's renormalization.
struct RenormMask {
    std::uint32_t bits = 0;

    [[nodiscard]] bool test(std::size_t lane) const noexcept { return (bits >> lane) & 1u; }
    [[nodiscard]] unsigned count() const noexcept { return static_cast<unsigned>(std::popcount(bits)); }

    friend bool operator==(const RenormMask&, const RenormMask&) = default;
};

[[nodiscard]] constexpr std::uint32_t lane_bits(std::size_t lanes) noexcept {
    return lanes >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << lanes) - 1;
}

/// Digits consumed (or produced) by lanes below `lane` in this step.
[[nodiscard]] inline unsigned lane_offset(RenormMask mask, std::size_t lane) noexcept {
    const std::uint32_t below = lane >= 32 ? mask.bits : mask.bits & ((std::uint32_t{1} << lane) - 1);
    return static_cast<unsigned>(std::popcount(below));
}

/// One logical decoder (or encoder) made of up to 32 lanes sharing one
/// position in the digit stream.
class LaneSet {
public:
    LaneSet() = default;

    explicit LaneSet(std::span<const std::uint32_t> states, std::size_t position = 0) : lanes_(states.size()),
                                                                                         position_(position) {
        if (states.empty() || states.size() > kMaxLanes)
            throw error(errc::invalid_argument, "lane count must be in [1, 32], got " + std::to_string(states.size()));
        std::copy(states.begin(), states.end(), x_.begin());
    }

    [[nodiscard]] std::size_t size() const noexcept { return lanes_; }
    [[nodiscard]] std::size_t position() const noexcept { return position_; }
    [[nodiscard]] std::span<std::uint32_t> states() noexcept { return {x_.data(), lanes_}; }
    [[nodiscard]] std::span<const std::uint32_t> states() const noexcept { return {x_.data(), lanes_}; }

    void advance(std::size_t digits) noexcept { position_ += digits; }

private:
    std::array<std::uint32_t, kMaxLanes> x_{};
    std::size_t lanes_ = 0;
    std::size_t position_ = 0;
};

template <class Pred>
[[nodiscard]] RenormMask ballot(std::span<const std::uint32_t> values, Pred&& pred) {
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < values.size() && i < kMaxLanes; ++i)
        bits |= static_cast<std::uint32_t>(static_cast<bool>(pred(values[i]))) << i;
    return {bits};
}

/// Mask construction without a ballot instruction: every lane sets or clears
/// its own bit of a shared word with atomic or/and. The word may hold stale
/// bits from earlier use; every lane overwrites its own bit, and bits past the
/// last lane are discarded. `order` lists the lanes in the order they run.
template <class Pred>
[[nodiscard]] RenormMask ballot_shared_memory(std::span<const std::uint32_t> values, Pred&& pred,
                                              std::uint32_t stale = ~std::uint32_t{0},
                                              std::span<const unsigned> order = {}) {
    std::atomic<std::uint32_t> shared{stale};
    auto run_lane = [&](std::size_t i) {
        const std::uint32_t bit = std::uint32_t{1} << i;
        if (pred(values[i]))
            shared.fetch_or(bit, std::memory_order_relaxed);
        else
            shared.fetch_and(~bit, std::memory_order_relaxed);
    };
    if (order.empty()) {
        for (std::size_t i = 0; i < values.size(); ++i) run_lane(i);
    } else {
        for (auto i : order) run_lane(i);
    }
    std::atomic_thread_fence(std::memory_order_acq_rel);
    return {shared.load() & lane_bits(values.size())};
}

/// Lane i receives source[pos + lane_offset(mask, i)] if its mask bit is set,
/// zero otherwise. Only masked lanes touch the source.
template <class Source>
[[nodiscard]] std::array<std::uint32_t, kMaxLanes> packed_load(const Source& source, std::size_t pos,
                                                               RenormMask mask, std::size_t lanes) {
    if (pos + mask.count() > source.size())
        throw error(errc::truncated_stream, "packed load of " + std::to_string(mask.count()) + " digits at " +
                                                std::to_string(pos));
    std::array<std::uint32_t, kMaxLanes> out{};
    for (std::size_t i = 0; i < lanes; ++i)
        if (mask.test(i)) out[i] = source[pos + lane_offset(mask, i)];
    return out;
}

/// Inverse of packed_load on the emission stack: the masked lanes' values
/// take popcount(mask) fresh slots, lane 0's digit on top so that it is the
/// first one read back.
inline void packed_store(DigitSink<Digit>& sink, RenormMask mask, std::span<const std::uint32_t> values) {
    const unsigned count = mask.count();
    if (count == 0) return;
    const std::size_t base = sink.grow(count);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (mask.test(i)) sink[base + (count - 1 - lane_offset(mask, i))] = static_cast<Digit>(values[i]);
}

namespace detail {

template <RenormVariant V>
void require_single_renorm(const SymbolTable& table) {
    require_compatible<V>(table);
    if (!single_renorm<V>(table.scale_bits()))
        throw error(errc::unsupported_variant, "radix 2^" + std::to_string(V::radix_bits) + " below m = 2^" +
                                                   std::to_string(table.scale_bits()));
}

} // namespace detail

/// Decodes one symbol on each of the first out.size() lanes.
template <RenormVariant V>
RenormMask decode_step(LaneSet& lanes, const SymbolTable& table, std::span<const Digit> payload,
                       std::span<std::uint8_t> out) {
    const std::size_t active = out.size();
    auto x = lanes.states();
    const std::uint32_t slot_mask = table.total() - 1;
    const unsigned scale = table.scale_bits();

    for (std::size_t i = 0; i < active; ++i) {
        const SlotEntry& e = table.slot(x[i] & slot_mask);
        x[i] = e.freq * (x[i] >> scale) + e.bias;
        out[i] = e.symbol;
    }

    const RenormMask mask = ballot(x.first(active), [](std::uint32_t v) { return v < V::lower_bound; });
    const auto loaded = packed_load(payload, lanes.position(), mask, active);
    for (std::size_t i = 0; i < active; ++i) x[i] = mask.test(i) ? (x[i] << V::radix_bits) | loaded[i] : x[i];
    lanes.advance(mask.count());
    return mask;
}

/// Encodes symbols[i] on lane i; the exact inverse of decode_step.
template <RenormVariant V>
RenormMask encode_step(LaneSet& lanes, std::span<const std::uint8_t> symbols, const SymbolTable& table,
                       DigitSink<Digit>& sink) {
    const std::size_t active = symbols.size();
    auto x = lanes.states();
    const unsigned scale = table.scale_bits();

    std::array<std::uint32_t, kMaxLanes> freq{};
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < active; ++i) {
        freq[i] = table.freq(symbols[i]);
        if (freq[i] == 0)
            throw error(errc::unencodable_symbol, "symbol " + std::to_string(symbols[i]) + " has zero frequency");
        bits |= static_cast<std::uint32_t>(x[i] >= encode_threshold<V>(freq[i], scale)) << i;
    }
    const RenormMask mask{bits};

    std::array<std::uint32_t, kMaxLanes> low{};
    for (std::size_t i = 0; i < active; ++i) low[i] = x[i] & kDigitMask<V>;
    packed_store(sink, mask, std::span<const std::uint32_t>(low.data(), active));

    for (std::size_t i = 0; i < active; ++i) {
        const std::uint32_t v = mask.test(i) ? x[i] >> V::radix_bits : x[i];
        x[i] = ((v / freq[i]) << scale) + table.cum(symbols[i]) + (v % freq[i]);
    }
    lanes.advance(mask.count());
    return mask;
}

template <RenormVariant V>
InterleavedStream encode_lanes_full(std::span<const std::uint8_t> msg, const SymbolTable& table, std::size_t lanes) {
    if (lanes == 0 || lanes > kMaxLanes)
        throw error(errc::invalid_argument, "lane count must be in [1, 32], got " + std::to_string(lanes));
    detail::require_single_renorm<V>(table);
    detail::require_encodable(msg, table);

    const std::vector<std::uint32_t> initial(lanes, V::lower_bound);
    LaneSet set(initial);
    DigitSink<Digit> sink(msg.size() / 2 + 16);
    const std::size_t groups = (msg.size() + lanes - 1) / lanes;
    for (std::size_t g = groups; g-- > 0;) {
        const std::size_t begin = g * lanes;
        const std::size_t active = std::min(lanes, msg.size() - begin);
        encode_step<V>(set, msg.subspan(begin, active), table, sink);
    }
    const auto states = set.states();
    return {{states.begin(), states.end()}, msg.size(), std::move(sink).finish()};
}

template <RenormVariant V>
std::vector<std::uint8_t> decode_lanes_full(const SymbolTable& table, const InterleavedStream& stream,
                                            const StepObserver* observer = nullptr,
                                            DecodeReport* report = nullptr) {
    const std::size_t lanes = stream.lanes();
    if (lanes == 0 || lanes > kMaxLanes)
        throw error(errc::invalid_argument, "lane decoder supports 1 to 32 lanes, got " + std::to_string(lanes));
    detail::require_single_renorm<V>(table);
    detail::require_start_states<V>(stream);

    LaneSet set(stream.final_states);
    std::vector<std::uint8_t> out(stream.message_length);
    const std::span<const Digit> payload(stream.payload);
    for (std::size_t begin = 0; begin < out.size(); begin += lanes) {
        const std::size_t active = std::min(lanes, out.size() - begin);
        decode_step<V>(set, table, payload, std::span<std::uint8_t>(out).subspan(begin, active));
        if (observer) (*observer)(set.states(), set.position());
    }
    if (report) *report = {set.position(), payload.size() - set.position()};
    return out;
}

/// Container entry point; byte8 containers are rejected because their
/// multi-digit renormalizations are laid out depth-first.
[[nodiscard]] inline std::vector<std::uint8_t> decode_lanes_full(const StreamContainer& c,
                                                                 const StepObserver* observer = nullptr,
                                                                 DecodeReport* report = nullptr) {
    if (c.variant != VariantTag::word16)
        throw error(errc::unsupported_variant, std::string(to_string(c.variant)) + " container");
    return decode_lanes_full<Word16>(c.table, c.stream, observer, report);
}

[[nodiscard]] inline StreamContainer encode_lanes_full(std::span<const std::uint8_t> msg, const SymbolTable& table,
                                                       std::size_t lanes) {
    return {VariantTag::word16, table, encode_lanes_full<Word16>(msg, table, lanes)};
}

} // namespace iec
