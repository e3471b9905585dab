#pragma once

// rANS over a static SymbolTable:
//
//   code(s, x)   = floor(x / f_s) * m + B_s + (x mod f_s)
//   decode(x)    = (s, f_s * floor(x / m) + (x mod m) - B_s),  s = slot_to_symbol[x mod m]
//
// with streaming renormalization into [L, b*L). Two wire variants exist: byte8
// (b = 2^8, L = 2^23) and word16 (b = 2^16, L = 2^16). With word16 and
// m <= 2^16 we have b >= m, so every symbol moves at most one digit.

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>

#include "iec/ans_core.hpp"
#include "iec/digits.hpp"
#include "iec/error.hpp"
#include "iec/symbol_table.hpp"

namespace iec {

enum class VariantTag : std::uint8_t { byte8 = 0, word16 = 1 };

inline const char* to_string(VariantTag tag) noexcept {
    return tag == VariantTag::byte8 ? "byte8" : "word16";
}

template <class V>
concept RenormVariant = requires {
    { V::radix_bits } -> std::convertible_to<unsigned>;
    { V::lower_bound } -> std::convertible_to<std::uint32_t>;
} && (V::radix_bits >= 1) && (V::radix_bits <= 16) &&
    ((std::uint64_t{V::lower_bound} << V::radix_bits) <= (std::uint64_t{1} << 32));

struct Byte8 {
    static constexpr unsigned radix_bits = 8;
    static constexpr std::uint32_t lower_bound = std::uint32_t{1} << 23;
    static constexpr VariantTag tag = VariantTag::byte8;
};

struct Word16 {
    static constexpr unsigned radix_bits = 16;
    static constexpr std::uint32_t lower_bound = std::uint32_t{1} << 16;
    static constexpr VariantTag tag = VariantTag::word16;
};

template <RenormVariant V>
inline constexpr std::uint32_t kRadix = std::uint32_t{1} << V::radix_bits;

template <RenormVariant V>
inline constexpr std::uint32_t kDigitMask = kRadix<V> - 1;

/// Table/variant compatibility: L must be a multiple of m so that every
/// precursor interval {f*L/m, ..., b*f*L/m - 1} is b-unique.
template <RenormVariant V>
void require_compatible(const SymbolTable& table) {
    if (V::lower_bound % table.total() != 0)
        throw error(errc::invalid_argument, "normalization bound is not a multiple of 2^" +
                                                std::to_string(table.scale_bits()));
}

template <RenormVariant V>
[[nodiscard]] constexpr bool single_renorm(unsigned scale_bits) noexcept {
    return V::radix_bits >= scale_bits;
}

[[nodiscard]] inline std::uint64_t rans_code(const SymbolTable& table, std::uint8_t s, std::uint64_t x) {
    const std::uint64_t f = table.freq(s);
    return ((x / f) << table.scale_bits()) + table.cum(s) + (x % f);
}

[[nodiscard]] inline Decoded rans_decode(const SymbolTable& table, std::uint64_t x) {
    const std::uint32_t slot = static_cast<std::uint32_t>(x & (table.total() - 1));
    const std::uint8_t s = table.symbol_at(slot);
    return {s, table.freq(s) * (x >> table.scale_bits()) + slot - table.cum(s)};
}

/// Exclusive upper bound of the precursor interval of a symbol with frequency f.
template <RenormVariant V>
[[nodiscard]] inline std::uint64_t encode_threshold(std::uint32_t f, unsigned scale_bits) noexcept {
    return (std::uint64_t{V::lower_bound >> scale_bits} << V::radix_bits) * f;
}

template <RenormVariant V, class Sink>
inline std::uint32_t encode_symbol_renorm(std::uint32_t x, std::uint8_t s, const SymbolTable& table, Sink& sink,
                                          unsigned* iterations = nullptr) {
    const std::uint32_t f = table.freq(s);
    if (f == 0) throw error(errc::unencodable_symbol, "symbol " + std::to_string(s) + " has zero frequency");
    const std::uint64_t x_max = encode_threshold<V>(f, table.scale_bits());
    unsigned n = 0;
    while (x >= x_max) {
        sink.emit(static_cast<typename Sink::digit_type>(x & kDigitMask<V>));
        x >>= V::radix_bits;
        ++n;
    }
    if (iterations) *iterations = n;
    return ((x / f) << table.scale_bits()) + table.cum(s) + (x % f);
}

template <RenormVariant V, class Source>
inline std::pair<std::uint8_t, std::uint32_t> decode_symbol_renorm(std::uint32_t x, const SymbolTable& table,
                                                                   Source& source, unsigned* iterations = nullptr) {
    const SlotEntry& e = table.slot(x & (table.total() - 1));
    x = e.freq * (x >> table.scale_bits()) + e.bias;
    const std::uint8_t s = e.symbol;
    unsigned n = 0;
    while (x < V::lower_bound) {
        x = (x << V::radix_bits) | source.read();
        ++n;
    }
    if (iterations) *iterations = n;
    return {s, x};
}

/// Presents a table plus variant as an AnsCoder so the generic precursor and
/// b-uniqueness machinery can audit it.
template <RenormVariant V>
class RansCoder {
public:
    explicit RansCoder(const SymbolTable& table) : table_(&table) { require_compatible<V>(table); }

    [[nodiscard]] std::size_t alphabet_size() const noexcept { return table_->size(); }
    [[nodiscard]] std::uint64_t lower_bound() const noexcept { return V::lower_bound; }
    [[nodiscard]] std::uint64_t radix() const noexcept { return kRadix<V>; }
    [[nodiscard]] std::uint64_t code(Symbol s, std::uint64_t x) const {
        return rans_code(*table_, static_cast<std::uint8_t>(s), x);
    }
    [[nodiscard]] Decoded decode(std::uint64_t x) const { return rans_decode(*table_, x); }

private:
    const SymbolTable* table_;
};

} // namespace iec
