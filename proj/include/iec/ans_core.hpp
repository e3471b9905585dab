#pragma once

// Generic streaming ANS over an arbitrary pair of coding functions.
//
// A coder is a pair (code, decode) with code(s, x) = x' and decode(x') = (s, x),
// plus a normalized interval I = [L, b*L). The encoder keeps its state in I by
// emitting base-b digits before coding a symbol; the decoder reads the same
// digits back after decoding it. Encoder and decoder only stay in lockstep when
// every precursor set {x : code(s, x) in I} has the form {k, ..., b*k - 1}.
//
// This module is the reference path: it works on any coder satisfying
// AnsCoder and records full state traces. The rANS module provides the fast
// specialized versions.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iec/digits.hpp"
#include "iec/error.hpp"

namespace iec {

using Symbol = std::uint32_t;
using CoderState = std::uint32_t;

struct Decoded {
    Symbol symbol;
    std::uint64_t state;

    friend bool operator==(const Decoded&, const Decoded&) = default;
};

template <class C>
concept AnsCoder = requires(const C& c, Symbol s, std::uint64_t x) {
    { c.alphabet_size() } -> std::convertible_to<std::size_t>;
    { c.lower_bound() } -> std::convertible_to<std::uint64_t>;
    { c.radix() } -> std::convertible_to<std::uint64_t>;
    { c.code(s, x) } -> std::convertible_to<std::uint64_t>;
    { c.decode(x) } -> std::convertible_to<Decoded>;
};

/// Type-erased coder built from two callables. States are carried in 64 bits
/// while probing so that code(s, x) may leave the 32-bit range without wrapping.
class CoderSpec {
public:
    using CodeFn = std::function<std::uint64_t(Symbol, std::uint64_t)>;
    using DecodeFn = std::function<Decoded(std::uint64_t)>;

    CoderSpec(std::size_t alphabet_size, std::uint64_t lower_bound, std::uint64_t radix, CodeFn code,
              DecodeFn decode)
        : alphabet_size_(alphabet_size), lower_bound_(lower_bound), radix_(radix), code_(std::move(code)),
          decode_(std::move(decode)) {
        if (radix_ < 2) throw error(errc::invalid_argument, "radix must be at least 2");
        if (lower_bound_ < 1) throw error(errc::invalid_argument, "lower bound must be positive");
        if (radix_ * lower_bound_ > (std::uint64_t{1} << 32))
            throw error(errc::invalid_argument, "normalized interval does not fit a 32-bit state");
        if (alphabet_size_ == 0) throw error(errc::invalid_argument, "empty alphabet");
    }

    [[nodiscard]] std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    [[nodiscard]] std::uint64_t lower_bound() const noexcept { return lower_bound_; }
    [[nodiscard]] std::uint64_t radix() const noexcept { return radix_; }
    [[nodiscard]] std::uint64_t code(Symbol s, std::uint64_t x) const { return code_(s, x); }
    [[nodiscard]] Decoded decode(std::uint64_t x) const { return decode_(x); }

private:
    std::size_t alphabet_size_;
    std::uint64_t lower_bound_;
    std::uint64_t radix_;
    CodeFn code_;
    DecodeFn decode_;
};

/// The two-symbol coder with p(a) = 1/4, p(b) = 3/4 on I = [16, 32), b = 2.
/// Symbol 0 is `a`, symbol 1 is `b`.
inline CoderSpec two_symbol_toy_coder() {
    return CoderSpec(
        2, 16, 2,
        [](Symbol s, std::uint64_t x) -> std::uint64_t {
            if (s == 0) return 4 * x;
            return 4 * (x / 3) + (x % 3) + 1;
        },
        [](std::uint64_t x) -> Decoded {
            if (x % 4 == 0) return {0, x / 4};
            return {1, 3 * (x / 4) + (x % 4) - 1};
        });
}

/// Inclusive integer interval.
struct Interval {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    [[nodiscard]] bool contains(std::uint64_t x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] std::uint64_t size() const noexcept { return hi - lo + 1; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

template <AnsCoder C>
[[nodiscard]] Interval normalized_interval(const C& coder) {
    return {coder.lower_bound(), coder.radix() * coder.lower_bound() - 1};
}

/// ceil(log_b(b*L)): the most digits a b-unique coder can move per symbol.
[[nodiscard]] inline unsigned max_digits_per_symbol(std::uint64_t lower_bound, std::uint64_t radix) {
    unsigned digits = 0;
    std::uint64_t reach = 1;
    const std::uint64_t top = radix * lower_bound;
    while (reach < top) {
        reach *= radix;
        ++digits;
    }
    return digits;
}

template <AnsCoder C>
CoderState encode_symbol(const C& coder, Symbol s, CoderState x, DigitSink<std::uint32_t>& sink,
                         unsigned* emitted = nullptr) {
    if (s >= coder.alphabet_size())
        throw error(errc::unencodable_symbol, "symbol " + std::to_string(s) + " outside alphabet");
    const Interval I = normalized_interval(coder);
    const std::uint64_t b = coder.radix();
    const unsigned limit = max_digits_per_symbol(coder.lower_bound(), b) + 1;

    std::uint64_t state = x;
    unsigned count = 0;
    while (!I.contains(coder.code(s, state))) {
        if (count == limit || state == 0)
            throw error(errc::non_b_unique, "encoder renormalization did not terminate for symbol " +
                                                std::to_string(s));
        sink.emit(static_cast<std::uint32_t>(state % b));
        state /= b;
        ++count;
    }
    if (emitted) *emitted = count;
    return static_cast<CoderState>(coder.code(s, state));
}

template <AnsCoder C>
std::pair<Symbol, CoderState> decode_symbol(const C& coder, CoderState x, DigitReader<std::uint32_t>& source,
                                            unsigned* consumed = nullptr) {
    const Interval I = normalized_interval(coder);
    const std::uint64_t b = coder.radix();
    const unsigned limit = max_digits_per_symbol(coder.lower_bound(), b) + 1;

    const Decoded d = coder.decode(x);
    std::uint64_t state = d.state;
    unsigned count = 0;
    while (!I.contains(state)) {
        if (state > I.hi || count == limit)
            throw error(errc::non_b_unique, "decoder renormalization left the normalized interval");
        state = b * state + source.read();
        ++count;
    }
    if (consumed) *consumed = count;
    return {d.symbol, static_cast<CoderState>(state)};
}

struct EncodedMessage {
    CoderState final_state = 0;
    std::vector<std::uint32_t> digits; // decoder read order
    /// Encoder states: x0 first, then the state after each encode (encoder order).
    std::vector<CoderState> states;
    /// Digits emitted per encode call, in encoder order.
    std::vector<unsigned> digit_counts;
};

/// Encodes back to front; x0 defaults to L.
template <AnsCoder C>
EncodedMessage encode_message(const C& coder, std::span<const Symbol> msg, std::optional<CoderState> x0 = {}) {
    EncodedMessage out;
    CoderState x = x0 ? *x0 : static_cast<CoderState>(coder.lower_bound());
    if (!normalized_interval(coder).contains(x))
        throw error(errc::invalid_argument, "initial state outside the normalized interval");

    DigitSink<std::uint32_t> sink;
    out.states.reserve(msg.size() + 1);
    out.digit_counts.reserve(msg.size());
    out.states.push_back(x);
    for (std::size_t i = msg.size(); i-- > 0;) {
        unsigned emitted = 0;
        x = encode_symbol(coder, msg[i], x, sink, &emitted);
        out.states.push_back(x);
        out.digit_counts.push_back(emitted);
    }
    out.final_state = x;
    out.digits = std::move(sink).finish();
    return out;
}

struct DecodedMessage {
    std::vector<Symbol> symbols;
    /// Decoder states: the start state first, then the state after each decode.
    std::vector<CoderState> states;
    std::vector<unsigned> digit_counts;
    /// Digits left unread after `len` symbols. Not an error: containers may pad.
    std::size_t trailing_digits = 0;
};

template <AnsCoder C>
DecodedMessage decode_message(const C& coder, CoderState final_state, std::span<const std::uint32_t> digits,
                              std::size_t len) {
    if (!normalized_interval(coder).contains(final_state))
        throw error(errc::bad_format, "start state outside the normalized interval");
    DecodedMessage out;
    out.symbols.reserve(len);
    out.states.reserve(len + 1);
    out.digit_counts.reserve(len);
    out.states.push_back(final_state);

    DigitReader<std::uint32_t> source(digits);
    CoderState x = final_state;
    for (std::size_t i = 0; i < len; ++i) {
        unsigned consumed = 0;
        auto [s, next] = decode_symbol(coder, x, source, &consumed);
        x = next;
        out.symbols.push_back(s);
        out.states.push_back(x);
        out.digit_counts.push_back(consumed);
    }
    out.trailing_digits = source.remaining();
    return out;
}

/// {x : code(s, x) in I}. Relies on code being strictly increasing in x, so the
/// set is contiguous and both ends can be found by bisection over [0, b*L).
template <AnsCoder C>
Interval precursor_set(const C& coder, Symbol s) {
    const Interval I = normalized_interval(coder);
    // First x with code(s, x) >= L.
    std::uint64_t lo = 0;
    std::uint64_t hi = I.hi + 1;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (coder.code(s, mid) >= I.lo)
            hi = mid;
        else
            lo = mid + 1;
    }
    const std::uint64_t first = lo;
    // First x with code(s, x) > b*L - 1.
    hi = I.hi + 1;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (coder.code(s, mid) > I.hi)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == first || first > I.hi)
        throw error(errc::unencodable_symbol, "empty precursor set for symbol " + std::to_string(s));
    return {first, lo - 1};
}

/// True iff the set is {k, ..., b*k - 1} for some k >= 1.
[[nodiscard]] inline bool check_b_unique(const Interval& set, std::uint64_t radix) noexcept {
    return set.lo >= 1 && set.hi == radix * set.lo - 1;
}

} // namespace iec
