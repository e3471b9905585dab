#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "iec/ans_core.hpp"
#include "iec/rans.hpp"
#include "oracles.hpp"

namespace {

using iec::Symbol;
constexpr Symbol A = 0;
constexpr Symbol B = 1;

const std::vector<Symbol> kBabba = {B, A, B, B, A};

TEST(AnsCoreToy, OracleReproducesFrozenGoldenTrace) {
    // Frozen from the hand simulation; the oracle must agree before the
    // library is held to the same numbers.
    const auto t = oracle::simulate_toy_encoder({1, 0, 1, 1, 0});
    EXPECT_EQ(t.final_state, 19u);
    EXPECT_EQ(t.read_order, (std::vector<int>{0, 1, 0, 0, 0}));
    EXPECT_EQ(t.enc_states, (std::vector<std::uint64_t>{16, 16, 22, 30, 28, 19}));
}

TEST(AnsCoreToy, CoderMatchesDirectFormulas) {
    const auto coder = iec::two_symbol_toy_coder();
    for (std::uint64_t x = 0; x < 200; ++x) {
        EXPECT_EQ(coder.code(A, x), oracle::toy_code(0, x));
        EXPECT_EQ(coder.code(B, x), oracle::toy_code(1, x));
        const auto d = coder.decode(x + 1);
        const auto o = oracle::toy_decode(x + 1);
        EXPECT_EQ(d.symbol, static_cast<Symbol>(o.first));
        EXPECT_EQ(d.state, o.second);
    }
}

TEST(AnsCoreToy, EncodeSymbolExamples) {
    const auto coder = iec::two_symbol_toy_coder();
    {
        iec::DigitSink<std::uint32_t> sink;
        EXPECT_EQ(iec::encode_symbol(coder, A, 16, sink), 16u);
        EXPECT_EQ(std::vector<std::uint32_t>(sink.emitted().begin(), sink.emitted().end()),
                  (std::vector<std::uint32_t>{0, 0}));
    }
    {
        iec::DigitSink<std::uint32_t> sink;
        EXPECT_EQ(iec::encode_symbol(coder, B, 16, sink), 22u);
        EXPECT_EQ(sink.size(), 0u);
    }
    {
        iec::DigitSink<std::uint32_t> sink;
        EXPECT_EQ(iec::encode_symbol(coder, B, 28, sink), 19u);
        EXPECT_EQ(std::vector<std::uint32_t>(sink.emitted().begin(), sink.emitted().end()),
                  (std::vector<std::uint32_t>{0}));
    }
}

TEST(AnsCoreToy, DecodeSymbolExamples) {
    const auto coder = iec::two_symbol_toy_coder();
    {
        const std::vector<std::uint32_t> digits{0};
        iec::DigitReader<std::uint32_t> src(digits);
        EXPECT_EQ(iec::decode_symbol(coder, 19, src), (std::pair<Symbol, iec::CoderState>{B, 28}));
        EXPECT_TRUE(src.exhausted());
    }
    {
        iec::DigitReader<std::uint32_t> src;
        EXPECT_EQ(iec::decode_symbol(coder, 22, src), (std::pair<Symbol, iec::CoderState>{B, 16}));
    }
    {
        const std::vector<std::uint32_t> digits{1, 0};
        iec::DigitReader<std::uint32_t> src(digits);
        EXPECT_EQ(iec::decode_symbol(coder, 28, src), (std::pair<Symbol, iec::CoderState>{A, 30}));
        EXPECT_EQ(src.position(), 2u);
    }
}

TEST(AnsCoreToy, EncodeMessageGoldenTrace) {
    const auto coder = iec::two_symbol_toy_coder();
    const auto enc = iec::encode_message(coder, kBabba, 16u);
    EXPECT_EQ(enc.final_state, 19u);
    EXPECT_EQ(enc.digits, (std::vector<std::uint32_t>{0, 1, 0, 0, 0}));
    EXPECT_EQ(enc.states, (std::vector<iec::CoderState>{16, 16, 22, 30, 28, 19}));
}

TEST(AnsCoreToy, EncodeMessageSmallCases) {
    const auto coder = iec::two_symbol_toy_coder();
    const auto empty = iec::encode_message(coder, std::vector<Symbol>{}, 20u);
    EXPECT_EQ(empty.final_state, 20u);
    EXPECT_TRUE(empty.digits.empty());

    const auto single = iec::encode_message(coder, std::vector<Symbol>{A});
    EXPECT_EQ(single.final_state, 16u);
    EXPECT_EQ(single.digits, (std::vector<std::uint32_t>{0, 0}));
}

TEST(AnsCoreToy, DecodeMessageGoldenTrace) {
    const auto coder = iec::two_symbol_toy_coder();
    const auto dec = iec::decode_message(coder, 19, std::vector<std::uint32_t>{0, 1, 0, 0, 0}, 5);
    EXPECT_EQ(dec.symbols, kBabba);
    EXPECT_EQ(dec.states, (std::vector<iec::CoderState>{19, 28, 30, 22, 16, 16}));
    EXPECT_EQ(dec.trailing_digits, 0u);

    EXPECT_TRUE(iec::decode_message(coder, 16, std::vector<std::uint32_t>{}, 0).symbols.empty());
    EXPECT_EQ(iec::decode_message(coder, 16, std::vector<std::uint32_t>{0, 0}, 1).symbols, std::vector<Symbol>{A});
}

TEST(AnsCoreToy, StateAndIoSymmetry) {
    const auto coder = iec::two_symbol_toy_coder();
    const auto enc = iec::encode_message(coder, kBabba);
    const auto dec = iec::decode_message(coder, enc.final_state, enc.digits, kBabba.size());
    EXPECT_EQ(std::vector<iec::CoderState>(enc.states.rbegin(), enc.states.rend()), dec.states);
    EXPECT_EQ(std::vector<unsigned>(enc.digit_counts.rbegin(), enc.digit_counts.rend()), dec.digit_counts);
}

TEST(AnsCoreToy, TrailingDigitsAreReportedNotFatal) {
    const auto coder = iec::two_symbol_toy_coder();
    const auto dec = iec::decode_message(coder, 19, std::vector<std::uint32_t>{0, 1, 0, 0, 0, 1, 1}, 5);
    EXPECT_EQ(dec.symbols, kBabba);
    EXPECT_EQ(dec.trailing_digits, 2u);
}

TEST(AnsCoreToy, TruncatedStream) {
    const auto coder = iec::two_symbol_toy_coder();
    try {
        (void)iec::decode_message(coder, 19, std::vector<std::uint32_t>{0, 1, 0}, 5);
        FAIL() << "expected truncation";
    } catch (const iec::error& e) {
        EXPECT_EQ(e.code(), iec::errc::truncated_stream);
    }
}

TEST(AnsCoreToy, PrecursorSets) {
    const auto coder = iec::two_symbol_toy_coder();
    EXPECT_EQ(iec::precursor_set(coder, A), (iec::Interval{4, 7}));
    EXPECT_EQ(iec::precursor_set(coder, B), (iec::Interval{12, 23}));
    for (int s = 0; s < 2; ++s) {
        const auto scan = oracle::scan_precursors([s](std::uint64_t x) { return oracle::toy_code(s, x); }, 16, 2);
        ASSERT_TRUE(scan.contiguous);
        EXPECT_EQ(iec::precursor_set(coder, static_cast<Symbol>(s)), (iec::Interval{scan.lo, scan.hi}));
    }
}

TEST(AnsCore, PrecursorOfIdentityCoderIsTheNormalizedInterval) {
    const iec::CoderSpec identity(
        1, 100, 3, [](Symbol, std::uint64_t x) { return x; },
        [](std::uint64_t x) { return iec::Decoded{0, x}; });
    EXPECT_EQ(iec::precursor_set(identity, 0), (iec::Interval{100, 299}));
    EXPECT_TRUE(iec::check_b_unique(iec::precursor_set(identity, 0), 3));
}

TEST(AnsCore, CheckBUnique) {
    EXPECT_TRUE(iec::check_b_unique({4, 7}, 2));
    EXPECT_TRUE(iec::check_b_unique({12, 23}, 2));
    EXPECT_FALSE(iec::check_b_unique({4, 6}, 2));
    EXPECT_FALSE(iec::check_b_unique({0, 0}, 2));
    EXPECT_TRUE(iec::check_b_unique({1, 255}, 256));
}

TEST(AnsCore, EmptyPrecursorSetIsUnencodable) {
    const iec::CoderSpec sparse(
        1, 16, 2, [](Symbol, std::uint64_t x) { return 64 * x; },
        [](std::uint64_t x) { return iec::Decoded{0, x / 64}; });
    try {
        (void)iec::precursor_set(sparse, 0);
        FAIL();
    } catch (const iec::error& e) {
        EXPECT_EQ(e.code(), iec::errc::unencodable_symbol);
    }
    iec::DigitSink<std::uint32_t> sink;
    try {
        (void)iec::encode_symbol(sparse, 0, 16, sink);
        FAIL();
    } catch (const iec::error& e) {
        EXPECT_EQ(e.code(), iec::errc::non_b_unique);
    }
}

TEST(AnsCore, RejectsBadParameters) {
    auto code = [](Symbol, std::uint64_t x) { return x; };
    auto decode = [](std::uint64_t x) { return iec::Decoded{0, x}; };
    EXPECT_THROW(iec::CoderSpec(1, 16, 1, code, decode), iec::error);
    EXPECT_THROW(iec::CoderSpec(1, 0, 2, code, decode), iec::error);
    EXPECT_THROW(iec::CoderSpec(1, std::uint64_t{1} << 32, 2, code, decode), iec::error);
    const auto coder = iec::two_symbol_toy_coder();
    EXPECT_THROW((void)iec::encode_message(coder, kBabba, 40u), iec::error);
    iec::DigitSink<std::uint32_t> sink;
    EXPECT_THROW((void)iec::encode_symbol(coder, 2, 16, sink), iec::error);
}

TEST(AnsCoreToy, GrowthFactors) {
    const auto coder = iec::two_symbol_toy_coder();
    const double eps = 1.0 / 16.0;
    for (std::uint64_t x = 16; x < 4096; ++x) {
        EXPECT_EQ(coder.code(A, x), 4 * x);
        const double ratio = static_cast<double>(coder.code(B, x)) / static_cast<double>(x);
        EXPECT_GE(ratio, 4.0 / 3.0 - eps);
        EXPECT_LE(ratio, 4.0 / 3.0 + eps);
    }
}

TEST(AnsCoreProperty, RoundTripAndDigitBoundOnToyCoder) {
    const auto coder = iec::two_symbol_toy_coder();
    const unsigned bound = iec::max_digits_per_symbol(16, 2);
    EXPECT_EQ(bound, 5u);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Symbol> msg(rng() % 200);
        for (auto& s : msg) s = (rng() % 4 == 0) ? A : B;
        const auto x0 = static_cast<iec::CoderState>(16 + rng() % 16);
        const auto enc = iec::encode_message(coder, msg, x0);
        for (auto c : enc.digit_counts) EXPECT_LE(c, bound);
        const auto dec = iec::decode_message(coder, enc.final_state, enc.digits, msg.size());
        ASSERT_EQ(dec.symbols, msg);
        EXPECT_EQ(dec.states.back(), x0);
        EXPECT_EQ(dec.trailing_digits, 0u);
        EXPECT_EQ(std::vector<iec::CoderState>(enc.states.rbegin(), enc.states.rend()), dec.states);
    }
}

// A b-unique rANS coder on an odd radix and a small interval, run through the
// generic path.
struct Radix4 {
    static constexpr unsigned radix_bits = 2;
    static constexpr std::uint32_t lower_bound = 64;
};

TEST(AnsCoreProperty, RoundTripOnGenericRansCoders) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        const auto table = iec::SymbolTable::from_counts(oracle::random_counts(rng, n, 50), 4);
        const iec::RansCoder<Radix4> coder(table);
        for (Symbol s = 0; s < n; ++s) {
            if (!table.encodable(s)) continue;
            EXPECT_TRUE(iec::check_b_unique(iec::precursor_set(coder, s), 4));
        }
        std::vector<Symbol> msg(rng() % 300);
        for (auto& s : msg) {
            do s = static_cast<Symbol>(rng() % n);
            while (!table.encodable(s));
        }
        const auto enc = iec::encode_message(coder, msg);
        const auto dec = iec::decode_message(coder, enc.final_state, enc.digits, msg.size());
        ASSERT_EQ(dec.symbols, msg);
    }
}

} // namespace
