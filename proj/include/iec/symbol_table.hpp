#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "iec/digits.hpp"
#include "iec/error.hpp"

namespace iec {

inline constexpr unsigned kMinScaleBits = 1;
inline constexpr unsigned kMaxScaleBits = 16;
inline constexpr unsigned kDefaultScaleBits = 14;
inline constexpr std::size_t kMaxAlphabet = 256;

namespace detail {
__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;
} // namespace detail

/// Largest-remainder apportionment of `counts` onto 2^scale_bits.
///
/// Every symbol that occurs gets at least 1. A shortfall is filled one unit at
/// a time on the symbol with the largest ideal - f; an excess (caused by the
/// floor of 1) is removed from the symbol with the largest f - ideal that can
/// still spare a unit. Ties go to the lowest symbol index.
[[nodiscard]] inline std::vector<std::uint32_t> quantize(std::span<const std::uint64_t> counts,
                                                         unsigned scale_bits) {
    if (scale_bits < kMinScaleBits || scale_bits > kMaxScaleBits)
        throw error(errc::invalid_argument, "scale_bits must be in [1, 16], got " + std::to_string(scale_bits));
    const std::uint64_t m = std::uint64_t{1} << scale_bits;

    detail::u128 total = 0;
    std::size_t present = 0;
    for (auto c : counts) {
        total += c;
        present += c != 0;
    }
    if (present == 0) throw error(errc::invalid_argument, "no symbol has a nonzero count");
    if (present > m)
        throw error(errc::alphabet_too_large,
                    std::to_string(present) + " symbols cannot share " + std::to_string(m) + " slots");

    const std::size_t n = counts.size();
    std::vector<std::uint32_t> freq(n, 0);
    std::uint64_t sum = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (counts[s] == 0) continue;
        auto f = static_cast<std::uint64_t>((static_cast<detail::u128>(counts[s]) * m) / total);
        if (f == 0) f = 1;
        freq[s] = static_cast<std::uint32_t>(f);
        sum += f;
    }

    // (ideal - f) * total, exact.
    auto surplus = [&](std::size_t s) -> detail::i128 {
        return static_cast<detail::i128>(static_cast<detail::u128>(counts[s]) * m) -
               static_cast<detail::i128>(static_cast<detail::u128>(freq[s]) * total);
    };

    while (sum < m) {
        std::size_t best = n;
        for (std::size_t s = 0; s < n; ++s) {
            if (counts[s] == 0) continue;
            if (best == n || surplus(s) > surplus(best)) best = s;
        }
        ++freq[best];
        ++sum;
    }
    while (sum > m) {
        std::size_t best = n;
        for (std::size_t s = 0; s < n; ++s) {
            if (freq[s] <= 1) continue;
            if (best == n || surplus(s) < surplus(best)) best = s;
        }
        --freq[best];
        --sum;
    }
    return freq;
}

/// Decoder view of one slot: its symbol, that symbol's frequency, and the
/// slot's offset from the symbol's cumulative start.
struct SlotEntry {
    std::uint32_t freq = 0;
    std::uint16_t bias = 0;
    std::uint8_t symbol = 0;
};

/// Static order-0 model: quantized frequencies over m = 2^scale_bits slots,
/// cumulative starts, and a dense slot -> symbol map for decoding.
class SymbolTable {
public:
    SymbolTable() = default;

    SymbolTable(std::vector<std::uint32_t> freq, unsigned scale_bits) : scale_bits_(scale_bits) {
        if (scale_bits < kMinScaleBits || scale_bits > kMaxScaleBits)
            throw error(errc::invalid_argument, "scale_bits must be in [1, 16]");
        if (freq.empty() || freq.size() > kMaxAlphabet)
            throw error(errc::invalid_argument, "alphabet size must be in [1, 256]");
        const std::uint32_t m = total();
        cum_.assign(freq.size() + 1, 0);
        for (std::size_t s = 0; s < freq.size(); ++s) {
            cum_[s + 1] = cum_[s] + freq[s];
            if (cum_[s + 1] > m) break;
        }
        if (cum_.back() != m)
            throw error(errc::invalid_argument, "frequencies do not sum to 2^scale_bits");
        freq_ = std::move(freq);
        slots_.resize(m);
        for (std::size_t s = 0; s < freq_.size(); ++s)
            for (std::uint32_t j = cum_[s]; j < cum_[s + 1]; ++j)
                slots_[j] = {freq_[s], static_cast<std::uint16_t>(j - cum_[s]), static_cast<std::uint8_t>(s)};
    }

    static SymbolTable from_counts(std::span<const std::uint64_t> counts, unsigned scale_bits) {
        return SymbolTable(quantize(counts, scale_bits), scale_bits);
    }

    /// Histogram over the full byte alphabet.
    static SymbolTable from_bytes(std::span<const std::uint8_t> data, unsigned scale_bits) {
        std::vector<std::uint64_t> counts(kMaxAlphabet, 0);
        for (auto b : data) ++counts[b];
        if (data.empty()) counts[0] = 1;
        return from_counts(counts, scale_bits);
    }

    [[nodiscard]] unsigned scale_bits() const noexcept { return scale_bits_; }
    [[nodiscard]] std::uint32_t total() const noexcept { return std::uint32_t{1} << scale_bits_; }
    [[nodiscard]] std::size_t size() const noexcept { return freq_.size(); }
    [[nodiscard]] std::uint32_t freq(std::size_t s) const noexcept { return freq_[s]; }
    [[nodiscard]] std::uint32_t cum(std::size_t s) const noexcept { return cum_[s]; }
    [[nodiscard]] std::uint8_t symbol_at(std::uint32_t slot) const noexcept { return slots_[slot].symbol; }
    [[nodiscard]] const SlotEntry& slot(std::uint32_t slot) const noexcept { return slots_[slot]; }
    [[nodiscard]] std::span<const std::uint32_t> freqs() const noexcept { return freq_; }
    [[nodiscard]] std::span<const std::uint32_t> cums() const noexcept { return cum_; }
    [[nodiscard]] std::span<const SlotEntry> slots() const noexcept { return slots_; }

    [[nodiscard]] bool encodable(std::size_t s) const noexcept { return s < freq_.size() && freq_[s] != 0; }

    /// Ideal code length of `msg` under this model: sum of -log2(f_s / m).
    [[nodiscard]] double cost_bits(std::span<const std::uint8_t> msg) const {
        std::vector<std::uint64_t> hist(freq_.size(), 0);
        for (auto s : msg) ++hist.at(s);
        double bits = 0.0;
        for (std::size_t s = 0; s < hist.size(); ++s) {
            if (hist[s] == 0) continue;
            if (freq_[s] == 0) throw error(errc::unencodable_symbol, "symbol " + std::to_string(s));
            bits += static_cast<double>(hist[s]) * (scale_bits_ - std::log2(static_cast<double>(freq_[s])));
        }
        return bits;
    }

    // Wire form: scale_bits u8, n u16, then n frequencies as u16.
    void serialize(ByteWriter& out) const {
        out.u8(static_cast<std::uint8_t>(scale_bits_));
        out.u16(static_cast<std::uint16_t>(freq_.size()));
        for (auto f : freq_) {
            if (f > 0xFFFF)
                throw error(errc::invalid_argument, "frequency " + std::to_string(f) + " does not fit 16 bits");
            out.u16(static_cast<std::uint16_t>(f));
        }
    }

    static SymbolTable parse(ByteReader& in) {
        const unsigned scale_bits = in.u8();
        const std::size_t n = in.u16();
        if (scale_bits < kMinScaleBits || scale_bits > kMaxScaleBits)
            throw error(errc::bad_format, "frequency table scale_bits " + std::to_string(scale_bits));
        if (n == 0 || n > kMaxAlphabet) throw error(errc::bad_format, "frequency table size " + std::to_string(n));
        std::vector<std::uint32_t> freq(n);
        std::uint64_t sum = 0;
        for (auto& f : freq) {
            f = in.u16();
            sum += f;
        }
        if (sum != (std::uint64_t{1} << scale_bits))
            throw error(errc::bad_format, "frequency table does not sum to 2^scale_bits");
        return SymbolTable(std::move(freq), scale_bits);
    }

    friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
        return a.scale_bits_ == b.scale_bits_ && a.freq_ == b.freq_;
    }

private:
    unsigned scale_bits_ = kDefaultScaleBits;
    std::vector<std::uint32_t> freq_;
    std::vector<std::uint32_t> cum_;
    std::vector<SlotEntry> slots_;
};

} // namespace iec
