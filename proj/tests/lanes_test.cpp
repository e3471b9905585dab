#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "iec/container.hpp"
#include "iec/lanes.hpp"
#include "oracles.hpp"

namespace {

// Records which indices were touched.
struct CountingSource {
    std::vector<std::uint32_t> data;
    mutable std::vector<std::size_t> touched;

    std::size_t size() const { return data.size(); }
    std::uint32_t operator[](std::size_t i) const {
        touched.push_back(i);
        return data[i];
    }
};

TEST(Ballot, Examples) {
    const std::vector<std::uint32_t> v{1, 0, 5, 9};
    EXPECT_EQ(iec::ballot(v, [](std::uint32_t x) { return x != 0; }).bits, 0b1101u);
    EXPECT_EQ(iec::ballot(v, [](std::uint32_t) { return false; }).bits, 0u);
    const std::vector<std::uint32_t> all(32, 1);
    EXPECT_EQ(iec::ballot(all, [](std::uint32_t x) { return x == 1; }).bits, 0xFFFFFFFFu);
    EXPECT_EQ(iec::RenormMask{0b1101}.count(), 3u);
}

TEST(BallotProperty, SharedMemoryFallbackMatches) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 32;
        std::vector<std::uint32_t> v(n);
        for (auto& x : v) x = static_cast<std::uint32_t>(rng() % 4);
        std::vector<unsigned> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        auto pred = [](std::uint32_t x) { return x < 2; };
        const auto expected = iec::ballot(v, pred);
        EXPECT_EQ(iec::ballot_shared_memory(v, pred, static_cast<std::uint32_t>(rng()), order), expected);
        EXPECT_EQ(iec::ballot_shared_memory(v, pred), expected);
    }
}

TEST(LaneOffset, Examples) {
    const iec::RenormMask m{0b1101};
    EXPECT_EQ(iec::lane_offset(m, 0), 0u);
    EXPECT_EQ(iec::lane_offset(m, 2), 1u);
    EXPECT_EQ(iec::lane_offset(m, 3), 2u);
    EXPECT_EQ(iec::lane_offset(iec::RenormMask{0xFFFFFFFF}, 31), 31u);
    EXPECT_EQ(iec::lane_bits(32), 0xFFFFFFFFu);
    EXPECT_EQ(iec::lane_bits(3), 0b111u);
}

TEST(LaneOffsetProperty, MatchesPopcountOracle) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto bits = static_cast<std::uint32_t>(rng());
        const unsigned lane = static_cast<unsigned>(rng() % 32);
        ASSERT_EQ(iec::lane_offset(iec::RenormMask{bits}, lane), oracle::popcount_below(bits, lane));
    }
}

TEST(PackedLoad, Example) {
    CountingSource src{{100, 101, 102, 103, 104}, {}};
    const auto out = iec::packed_load(src, 1, iec::RenormMask{0b1101}, 4);
    EXPECT_EQ(out[0], 101u);
    EXPECT_EQ(out[1], 0u);
    EXPECT_EQ(out[2], 102u);
    EXPECT_EQ(out[3], 103u);
    EXPECT_EQ(src.touched, (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_THROW((void)iec::packed_load(src, 3, iec::RenormMask{0b1101}, 4), iec::error);
}

TEST(PackedLoadProperty, AccessesDependOnlyOnMask) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t lanes = 1 + rng() % 32;
        const iec::RenormMask mask{static_cast<std::uint32_t>(rng()) & iec::lane_bits(lanes)};
        CountingSource a{std::vector<std::uint32_t>(64), {}};
        CountingSource b{std::vector<std::uint32_t>(64), {}};
        for (auto& x : a.data) x = static_cast<std::uint32_t>(rng());
        for (auto& x : b.data) x = static_cast<std::uint32_t>(rng());
        const std::size_t pos = rng() % 16;
        (void)iec::packed_load(a, pos, mask, lanes);
        (void)iec::packed_load(b, pos, mask, lanes);
        EXPECT_EQ(a.touched, b.touched);
        std::vector<std::size_t> contiguous(mask.count());
        std::iota(contiguous.begin(), contiguous.end(), pos);
        EXPECT_EQ(a.touched, contiguous);
    }
}

TEST(PackedStore, InverseOfPackedLoad) {
    iec::DigitSink<iec::Digit> sink;
    const std::vector<std::uint32_t> values{7, 8, 9, 10};
    iec::packed_store(sink, iec::RenormMask{0b1101}, values);
    const auto digits = std::move(sink).finish();
    EXPECT_EQ(digits, (std::vector<iec::Digit>{7, 9, 10}));
    const auto back = iec::packed_load(digits, 0, iec::RenormMask{0b1101}, 4);
    EXPECT_EQ(back[0], 7u);
    EXPECT_EQ(back[2], 9u);
    EXPECT_EQ(back[3], 10u);
}

TEST(DecodeStep, SkewedTableExample) {
    // f = {1, 2^14 - 1}: a lane decoding symbol 0 from x = 2^16 drops to 4
    // and pulls one digit; a lane decoding symbol 1 stays in range.
    const iec::SymbolTable t({1, (1u << 14) - 1}, 14);
    const std::vector<std::uint32_t> x{1u << 16, (1u << 18) + 1};
    iec::LaneSet lanes(x, 0);
    const std::vector<iec::Digit> payload{0xABCD};
    std::vector<std::uint8_t> out(2);
    const auto mask = iec::decode_step<iec::Word16>(lanes, t, payload, out);
    EXPECT_EQ(mask.bits, 0b01u);
    EXPECT_EQ(out, (std::vector<std::uint8_t>{0, 1}));
    EXPECT_EQ(lanes.states()[0], (4u << 16) | 0xABCD);
    EXPECT_EQ(lanes.states()[1], ((1u << 14) - 1) * 16);
    EXPECT_EQ(lanes.position(), 1u);
}

TEST(DecodeStep, MatchesSerialDecodePerLane) {
    std::mt19937_64 rng(24);
    const auto t = iec::SymbolTable::from_counts(oracle::random_counts(rng, 40), 14);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 32;
        std::vector<std::uint32_t> x(n);
        for (auto& v : x) v = (1u << 16) + static_cast<std::uint32_t>(rng() % ((1ull << 32) - (1u << 16)));
        std::vector<iec::Digit> payload(n);
        for (auto& d : payload) d = static_cast<iec::Digit>(rng());

        iec::LaneSet lanes(x);
        std::vector<std::uint8_t> out(n);
        (void)iec::decode_step<iec::Word16>(lanes, t, payload, out);

        iec::DigitReader<iec::Digit> serial(payload);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [s, next] = iec::decode_symbol_renorm<iec::Word16>(x[i], t, serial);
            ASSERT_EQ(out[i], s);
            ASSERT_EQ(lanes.states()[i], next);
        }
        EXPECT_EQ(lanes.position(), serial.position());
    }
}

TEST(EncodeStep, InverseOfDecodeStep) {
    std::mt19937_64 rng(25);
    const auto t = iec::SymbolTable::from_counts(oracle::random_counts(rng, 200), 16);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 32;
        std::vector<std::uint32_t> x(n);
        for (auto& v : x) v = (1u << 16) + static_cast<std::uint32_t>(rng() % ((1ull << 32) - (1u << 16)));
        const auto symbols = oracle::sample(rng, {t.freqs().begin(), t.freqs().end()}, n);

        iec::LaneSet enc(x);
        iec::DigitSink<iec::Digit> sink;
        const auto emask = iec::encode_step<iec::Word16>(enc, symbols, t, sink);
        const auto payload = std::move(sink).finish();
        ASSERT_EQ(payload.size(), emask.count());

        iec::LaneSet dec(enc.states());
        std::vector<std::uint8_t> out(n);
        const auto dmask = iec::decode_step<iec::Word16>(dec, t, payload, out);
        EXPECT_EQ(dmask, emask);
        EXPECT_EQ(out, symbols);
        EXPECT_TRUE(std::equal(x.begin(), x.end(), dec.states().begin()));
    }
}

TEST(LanesFull, ByteIdenticalToSerialInterleave) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 60; ++trial) {
        const auto t = iec::SymbolTable::from_counts(oracle::random_counts(rng, 1 + rng() % 256),
                                                     8 + static_cast<unsigned>(rng() % 9));
        const auto msg = oracle::sample(rng, {t.freqs().begin(), t.freqs().end()}, rng() % 3000);
        const std::size_t lanes = 1 + rng() % 32;
        const auto a = iec::encode_lanes_full<iec::Word16>(msg, t, lanes);
        const auto b = iec::encode_interleaved<iec::Word16>(msg, t, lanes);
        ASSERT_EQ(a, b) << "trial " << trial;
        ASSERT_EQ(iec::decode_lanes_full<iec::Word16>(t, a), msg);
    }
}

TEST(LanesFull, LockstepSnapshotsMatchSerial) {
    std::mt19937_64 rng(27);
    const auto t = iec::SymbolTable::from_counts(oracle::random_counts(rng, 100), 15);
    const auto msg = oracle::sample(rng, {t.freqs().begin(), t.freqs().end()}, 10007);
    for (std::size_t lanes : {1u, 3u, 8u, 32u}) {
        const auto s = iec::encode_interleaved<iec::Word16>(msg, t, lanes);
        using Snap = std::pair<std::vector<std::uint32_t>, std::size_t>;
        std::vector<Snap> a, b;
        iec::StepObserver oa = [&](std::span<const std::uint32_t> x, std::size_t p) {
            a.emplace_back(std::vector<std::uint32_t>(x.begin(), x.end()), p);
        };
        iec::StepObserver ob = [&](std::span<const std::uint32_t> x, std::size_t p) {
            b.emplace_back(std::vector<std::uint32_t>(x.begin(), x.end()), p);
        };
        iec::DecodeReport ra, rb;
        EXPECT_EQ(iec::decode_lanes_full<iec::Word16>(t, s, &oa, &ra), msg);
        EXPECT_EQ(iec::decode_interleaved<iec::Word16>(t, s, &ob, &rb), msg);
        EXPECT_EQ(a, b);
        EXPECT_EQ(ra.digits_read, rb.digits_read);
    }
}

TEST(LanesFull, RejectsUnsupportedInputs) {
    const auto t = iec::SymbolTable::from_bytes(std::vector<std::uint8_t>{1, 2, 3}, 12);
    const std::vector<std::uint8_t> msg{1, 2, 3};
    const auto byte8 = iec::encode_interleaved(msg, t, 2, iec::VariantTag::byte8);
    try {
        (void)iec::decode_lanes_full(byte8);
        FAIL();
    } catch (const iec::error& e) {
        EXPECT_EQ(e.code(), iec::errc::unsupported_variant);
    }
    try {
        (void)iec::encode_lanes_full<iec::Byte8>(msg, t, 2);
        FAIL();
    } catch (const iec::error& e) {
        EXPECT_EQ(e.code(), iec::errc::unsupported_variant);
    }
    EXPECT_THROW((void)iec::encode_lanes_full<iec::Word16>(msg, t, 33), iec::error);
    EXPECT_THROW((void)iec::encode_lanes_full<iec::Word16>(msg, t, 0), iec::error);

    const auto word16 = iec::encode_lanes_full(msg, t, 2);
    EXPECT_EQ(iec::decode_lanes_full(word16), msg);
    EXPECT_EQ(iec::decode_interleaved(word16), msg);
}

TEST(LanesFull, TruncatedPayloadThrows) {
    std::mt19937_64 rng(28);
    const auto t = iec::SymbolTable::from_counts(oracle::random_counts(rng, 20), 12);
    const auto msg = oracle::sample(rng, {t.freqs().begin(), t.freqs().end()}, 4000);
    auto s = iec::encode_lanes_full<iec::Word16>(msg, t, 4);
    s.payload.resize(s.payload.size() / 3);
    try {
        (void)iec::decode_lanes_full<iec::Word16>(t, s);
        FAIL();
    } catch (const iec::error& e) {
        EXPECT_EQ(e.code(), iec::errc::truncated_stream);
    }
}

} // namespace
