#pragma once

// StreamContainer wire format, all fields little-endian:
//
//   offset  size     field
//   0       4        magic "IEC1"
//   4       1        version (1)
//   5       1        variant (0 = byte8, 1 = word16)
//   6       2        lane count N
//   8       8        message length in symbols
//   16      1+2+2n   frequency table: scale_bits u8, n u16, n x u16 frequencies
//   ..      4N       final encoder state per lane (u32)
//   ..      rest     payload digits in read order: bytes (byte8) or u16 (word16)
//
// The payload runs to the end of the container; there is no interleaving
// metadata anywhere in it.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iec/digits.hpp"
#include "iec/error.hpp"
#include "iec/interleave.hpp"
#include "iec/rans.hpp"
#include "iec/symbol_table.hpp"

namespace iec {

inline constexpr std::array<std::uint8_t, 4> kContainerMagic = {'I', 'E', 'C', '1'};
inline constexpr std::uint8_t kContainerVersion = 1;

struct StreamContainer {
    VariantTag variant = VariantTag::word16;
    SymbolTable table;
    InterleavedStream stream;

    friend bool operator==(const StreamContainer&, const StreamContainer&) = default;
};

/// Calls fn(Byte8{}) or fn(Word16{}) for a runtime variant tag.
template <class Fn>
decltype(auto) visit_variant(VariantTag tag, Fn&& fn) {
    switch (tag) {
    case VariantTag::byte8: return fn(Byte8{});
    case VariantTag::word16: return fn(Word16{});
    }
    throw error(errc::bad_format, "unknown variant tag " + std::to_string(static_cast<int>(tag)));
}

[[nodiscard]] inline std::size_t header_size(const StreamContainer& c) {
    return 4 + 1 + 1 + 2 + 8 + (1 + 2 + 2 * c.table.size()) + 4 * c.stream.lanes();
}

[[nodiscard]] inline std::size_t payload_bytes(const StreamContainer& c) {
    return c.stream.payload.size() * (c.variant == VariantTag::byte8 ? 1 : 2);
}

[[nodiscard]] inline std::vector<std::uint8_t> serialize(const StreamContainer& c) {
    if (c.stream.lanes() == 0 || c.stream.lanes() > 0xFFFF)
        throw error(errc::invalid_argument, "lane count out of range");
    ByteWriter out;
    out.bytes().reserve(header_size(c) + payload_bytes(c));
    out.raw(kContainerMagic);
    out.u8(kContainerVersion);
    out.u8(static_cast<std::uint8_t>(c.variant));
    out.u16(static_cast<std::uint16_t>(c.stream.lanes()));
    out.u64(c.stream.message_length);
    c.table.serialize(out);
    for (auto x : c.stream.final_states) out.u32(x);
    if (c.variant == VariantTag::byte8) {
        for (auto d : c.stream.payload) out.u8(static_cast<std::uint8_t>(d));
    } else {
        for (auto d : c.stream.payload) out.u16(d);
    }
    return std::move(out).take();
}

[[nodiscard]] inline StreamContainer parse_container(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    if (bytes.size() < kContainerMagic.size() ||
        !std::equal(kContainerMagic.begin(), kContainerMagic.end(), bytes.begin()))
        throw error(errc::bad_format, "missing IEC1 magic");
    in.raw(kContainerMagic.size());
    const auto version = in.u8();
    if (version != kContainerVersion) throw error(errc::bad_format, "unsupported version " + std::to_string(version));
    const auto tag = in.u8();
    if (tag > 1) throw error(errc::bad_format, "unknown variant tag " + std::to_string(tag));

    StreamContainer c;
    c.variant = static_cast<VariantTag>(tag);
    const std::size_t lanes = in.u16();
    if (lanes == 0) throw error(errc::bad_format, "zero lanes");
    c.stream.message_length = in.u64();
    c.table = SymbolTable::parse(in);
    c.stream.final_states.resize(lanes);
    for (auto& x : c.stream.final_states) x = in.u32();

    visit_variant(c.variant, [&](auto v) {
        using V = decltype(v);
        if (V::lower_bound % c.table.total() != 0)
            throw error(errc::bad_format, "table scale incompatible with variant");
        detail::require_start_states<V>(c.stream);
    });

    const auto rest = in.rest();
    if (c.variant == VariantTag::byte8) {
        c.stream.payload.assign(rest.begin(), rest.end());
    } else {
        if (rest.size() % 2 != 0) throw error(errc::truncated_stream, "payload ends in the middle of a word");
        c.stream.payload.resize(rest.size() / 2);
        for (std::size_t i = 0; i < c.stream.payload.size(); ++i)
            c.stream.payload[i] = static_cast<Digit>(rest[2 * i] | (rest[2 * i + 1] << 8));
    }
    return c;
}

[[nodiscard]] inline StreamContainer encode_interleaved(std::span<const std::uint8_t> msg, const SymbolTable& table,
                                                        std::size_t lanes, VariantTag variant) {
    StreamContainer c{variant, table, {}};
    c.stream = visit_variant(variant, [&](auto v) { return encode_interleaved<decltype(v)>(msg, table, lanes); });
    return c;
}

[[nodiscard]] inline std::vector<std::uint8_t> decode_interleaved(const StreamContainer& c,
                                                                  const StepObserver* observer = nullptr,
                                                                  DecodeReport* report = nullptr) {
    return visit_variant(c.variant, [&](auto v) {
        return decode_interleaved<decltype(v)>(c.table, c.stream, observer, report);
    });
}

} // namespace iec
