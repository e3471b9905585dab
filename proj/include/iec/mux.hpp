#pragma once

// Metadata-free multiplexing for arbitrary entropy coders.
//
// Each stream is encoded into its own buffer. The muxer then replays the
// receiver: it runs every stream's decoder in schedule order against that
// stream's buffer and tees each byte the decoder reads into one output. The
// result holds every stream's bytes in exactly the order the receiver's
// decoders will ask for them, so nothing needs to be added to the payload.
//
// Flushing bounds encoder memory: with a flush interval F, every stream
// closes its current segment at each multiple of F schedule steps. Replay can
// then drain everything up to that point. Both sides derive the segment
// boundaries from the schedule, so they are not transmitted either.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iec/container.hpp"
#include "iec/digits.hpp"
#include "iec/error.hpp"
#include "iec/rans.hpp"
#include "iec/symbol_table.hpp"

namespace iec {

/// Byte cursor over one buffer. An instrumented reader also appends every
/// byte it hands out to `tee`.
class InstrumentedReader {
public:
    explicit InstrumentedReader(std::span<const std::uint8_t> bytes, std::size_t pos = 0,
                                std::vector<std::uint8_t>* tee = nullptr) noexcept
        : bytes_(bytes), pos_(pos), tee_(tee) {}

    std::uint8_t read_byte() {
        if (pos_ >= bytes_.size())
            throw error(errc::truncated_stream, "stream exhausted after " + std::to_string(pos_) + " bytes");
        const std::uint8_t b = bytes_[pos_++];
        if (tee_) tee_->push_back(b);
        return b;
    }

    std::uint32_t read_le(unsigned width) {
        std::uint32_t v = 0;
        for (unsigned i = 0; i < width; ++i) v |= std::uint32_t{read_byte()} << (8 * i);
        return v;
    }

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    std::vector<std::uint8_t>* tee_ = nullptr;
};

/// Decoding session for one stream. The same session is driven either by
/// the muxer (reader over the stream's own buffer, teeing) or by the
/// receiver (reader over the muxed stream).
class SymbolDecoder {
public:
    virtual ~SymbolDecoder() = default;
    /// Called before the first symbol of every segment.
    virtual void begin_segment(InstrumentedReader& in, bool leading) = 0;
    virtual Symbol decode(InstrumentedReader& in) = 0;
};

class PluggableCoder {
public:
    virtual ~PluggableCoder() = default;

    [[nodiscard]] virtual std::string name() const = 0;

    /// Encodes one segment and appends its bytes, in read order, to `out`.
    /// The leading segment may park start-up data in `header` instead.
    virtual void encode_segment(std::span<const Symbol> symbols, bool leading, std::vector<std::uint8_t>& out,
                                std::vector<std::uint8_t>& header) const = 0;

    [[nodiscard]] virtual std::unique_ptr<SymbolDecoder> make_decoder(std::span<const std::uint8_t> header) const = 0;

    /// Upper bound on the bytes one extra flush adds to the stream.
    [[nodiscard]] virtual std::size_t flush_cost_bytes() const = 0;
    /// Upper bound on the coded bytes of a single symbol.
    [[nodiscard]] virtual std::size_t max_symbol_bytes() const = 0;
};

using CoderSet = std::span<const std::unique_ptr<PluggableCoder>>;

// ---------------------------------------------------------------------------
// rANS stream coder

/// rANS on a byte buffer. The leading segment's final state goes into the
/// header; every later segment carries its start state in-band (u32 LE).
template <RenormVariant V>
class RansStreamCoder final : public PluggableCoder {
public:
    explicit RansStreamCoder(SymbolTable table) : table_(std::move(table)) { require_compatible<V>(table_); }

    [[nodiscard]] std::string name() const override { return std::string("rans-") + to_string(V::tag); }

    void encode_segment(std::span<const Symbol> symbols, bool leading, std::vector<std::uint8_t>& out,
                        std::vector<std::uint8_t>& header) const override {
        std::uint32_t x = V::lower_bound;
        DigitSink<Digit> sink;
        for (std::size_t i = symbols.size(); i-- > 0;) {
            if (symbols[i] >= table_.size() || !table_.encodable(symbols[i]))
                throw error(errc::unencodable_symbol, "symbol " + std::to_string(symbols[i]));
            x = encode_symbol_renorm<V>(x, static_cast<std::uint8_t>(symbols[i]), table_, sink);
        }
        auto put_state = [x](std::vector<std::uint8_t>& dst) {
            for (int i = 0; i < 4; ++i) dst.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
        };
        if (leading) {
            header.clear();
            put_state(header);
        } else {
            put_state(out);
        }
        for (auto d : std::move(sink).finish())
            for (unsigned i = 0; i < kDigitBytes; ++i) out.push_back(static_cast<std::uint8_t>(d >> (8 * i)));
    }

    [[nodiscard]] std::unique_ptr<SymbolDecoder> make_decoder(std::span<const std::uint8_t> header) const override {
        return std::make_unique<Decoder>(table_, header);
    }

    [[nodiscard]] std::size_t flush_cost_bytes() const override { return 4 + kDigitBytes; }
    [[nodiscard]] std::size_t max_symbol_bytes() const override { return (table_.scale_bits() + 7) / 8 + 1; }

    [[nodiscard]] const SymbolTable& table() const noexcept { return table_; }

private:
    static constexpr unsigned kDigitBytes = (V::radix_bits + 7) / 8;

    class Decoder final : public SymbolDecoder {
    public:
        Decoder(const SymbolTable& table, std::span<const std::uint8_t> header) : table_(table) {
            if (!header.empty()) {
                if (header.size() != 4) throw error(errc::bad_format, "rANS stream header must be 4 bytes");
                leading_state_ = 0;
                for (int i = 0; i < 4; ++i) leading_state_ |= std::uint32_t{header[i]} << (8 * i);
            }
        }

        void begin_segment(InstrumentedReader& in, bool leading) override {
            x_ = leading ? leading_state_ : in.read_le(4);
            if (x_ < V::lower_bound || std::uint64_t{x_} >= (std::uint64_t{V::lower_bound} << V::radix_bits))
                throw error(errc::bad_format, "rANS segment state outside the normalized interval");
        }

        Symbol decode(InstrumentedReader& in) override {
            DigitPort port{in};
            auto [s, next] = decode_symbol_renorm<V>(x_, table_, port);
            x_ = next;
            return s;
        }

    private:
        struct DigitPort {
            InstrumentedReader& in;
            std::uint32_t read() { return in.read_le(kDigitBytes); }
        };

        const SymbolTable& table_;
        std::uint32_t leading_state_ = 0;
        std::uint32_t x_ = 0;
    };

    SymbolTable table_;
};

// ---------------------------------------------------------------------------
// Raw bit coder

/// Fixed-width raw values packed LSB-first into bytes. A flush pads the last
/// byte with zero bits.
class RawBitsCoder final : public PluggableCoder {
public:
    explicit RawBitsCoder(unsigned width) : width_(width) {
        if (width == 0 || width > 32) throw error(errc::invalid_argument, "raw width must be in [1, 32]");
    }

    [[nodiscard]] std::string name() const override { return "raw" + std::to_string(width_); }

    void encode_segment(std::span<const Symbol> symbols, bool /*leading*/, std::vector<std::uint8_t>& out,
                        std::vector<std::uint8_t>& /*header*/) const override {
        std::uint64_t acc = 0;
        unsigned bits = 0;
        for (auto v : symbols) {
            if (width_ < 32 && (v >> width_) != 0)
                throw error(errc::unencodable_symbol, "value " + std::to_string(v) + " wider than " +
                                                          std::to_string(width_) + " bits");
            acc |= std::uint64_t{v} << bits;
            bits += width_;
            while (bits >= 8) {
                out.push_back(static_cast<std::uint8_t>(acc));
                acc >>= 8;
                bits -= 8;
            }
        }
        if (bits > 0) out.push_back(static_cast<std::uint8_t>(acc));
    }

    [[nodiscard]] std::unique_ptr<SymbolDecoder> make_decoder(std::span<const std::uint8_t>) const override {
        return std::make_unique<Decoder>(width_);
    }

    [[nodiscard]] std::size_t flush_cost_bytes() const override { return 1; }
    [[nodiscard]] std::size_t max_symbol_bytes() const override { return (width_ + 7) / 8; }

private:
    class Decoder final : public SymbolDecoder {
    public:
        explicit Decoder(unsigned width) : width_(width) {}

        void begin_segment(InstrumentedReader&, bool) override {
            acc_ = 0;
            bits_ = 0;
        }

        Symbol decode(InstrumentedReader& in) override {
            while (bits_ < width_) {
                acc_ |= std::uint64_t{in.read_byte()} << bits_;
                bits_ += 8;
            }
            const std::uint64_t mask = width_ == 32 ? 0xFFFFFFFFull : (std::uint64_t{1} << width_) - 1;
            const auto v = static_cast<Symbol>(acc_ & mask);
            acc_ >>= width_;
            bits_ -= width_;
            return v;
        }

    private:
        unsigned width_;
        std::uint64_t acc_ = 0;
        unsigned bits_ = 0;
    };

    unsigned width_;
};

// ---------------------------------------------------------------------------
// Schedules

/// Stream id per decode step.
using MuxSchedule = std::vector<std::uint16_t>;

/// Cycles over the streams, skipping those that have run out of symbols.
[[nodiscard]] inline MuxSchedule round_robin_schedule(std::span<const std::size_t> counts) {
    MuxSchedule schedule;
    std::size_t total = 0;
    for (auto c : counts) total += c;
    schedule.reserve(total);
    std::vector<std::size_t> left(counts.begin(), counts.end());
    while (schedule.size() < total)
        for (std::size_t j = 0; j < left.size(); ++j)
            if (left[j] > 0) {
                --left[j];
                schedule.push_back(static_cast<std::uint16_t>(j));
            }
    return schedule;
}

[[nodiscard]] inline MuxSchedule round_robin_schedule(std::span<const std::vector<Symbol>> messages) {
    std::vector<std::size_t> counts;
    for (const auto& m : messages) counts.push_back(m.size());
    return round_robin_schedule(counts);
}

namespace detail {

/// Per-step segment bookkeeping derived from the schedule alone:
/// starts_segment[t] is set when step t opens a new segment of its stream.
struct SegmentPlan {
    std::vector<bool> starts_segment;
    std::vector<bool> leading;
};

inline SegmentPlan plan_segments(const MuxSchedule& schedule, std::size_t streams, std::uint64_t flush_interval) {
    SegmentPlan plan;
    plan.starts_segment.resize(schedule.size());
    plan.leading.resize(schedule.size());
    constexpr std::uint64_t none = ~std::uint64_t{0};
    std::vector<std::uint64_t> last_segment(streams, none);
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        const std::size_t j = schedule[t];
        if (j >= streams) throw error(errc::schedule_mismatch, "schedule names stream " + std::to_string(j));
        const std::uint64_t seg = flush_interval == 0 ? 0 : t / flush_interval;
        if (last_segment[j] != seg) {
            plan.starts_segment[t] = true;
            plan.leading[t] = last_segment[j] == none;
            last_segment[j] = seg;
        }
    }
    return plan;
}

inline void require_schedule_counts(const MuxSchedule& schedule, std::span<const std::vector<Symbol>> messages) {
    std::vector<std::size_t> counts(messages.size(), 0);
    for (auto j : schedule) {
        if (j >= messages.size()) throw error(errc::schedule_mismatch, "schedule names stream " + std::to_string(j));
        ++counts[j];
    }
    for (std::size_t j = 0; j < messages.size(); ++j)
        if (counts[j] != messages[j].size())
            throw error(errc::schedule_mismatch, "stream " + std::to_string(j) + " has " +
                                                     std::to_string(messages[j].size()) + " symbols, schedule has " +
                                                     std::to_string(counts[j]));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Encoding and muxing

struct EncodedStream {
    std::vector<std::uint8_t> header;
    std::vector<std::uint8_t> bytes;
    std::uint64_t symbols = 0;

    friend bool operator==(const EncodedStream&, const EncodedStream&) = default;
};

/// Encodes every stream into its own buffer. With a schedule and a nonzero
/// flush interval, each stream is cut into the segments that interval implies.
[[nodiscard]] inline std::vector<EncodedStream> encode_multistream(std::span<const std::vector<Symbol>> messages,
                                                                   CoderSet coders, const MuxSchedule* schedule = nullptr,
                                                                   std::uint64_t flush_interval = 0) {
    if (coders.size() != messages.size())
        throw error(errc::invalid_argument, "need exactly one coder per stream");
    std::vector<EncodedStream> out(messages.size());
    if (schedule == nullptr || flush_interval == 0) {
        for (std::size_t j = 0; j < messages.size(); ++j) {
            out[j].symbols = messages[j].size();
            if (!messages[j].empty()) coders[j]->encode_segment(messages[j], true, out[j].bytes, out[j].header);
        }
        return out;
    }

    detail::require_schedule_counts(*schedule, messages);
    const auto plan = detail::plan_segments(*schedule, messages.size(), flush_interval);
    std::vector<std::size_t> next(messages.size(), 0);
    std::vector<std::size_t> seg_begin(messages.size(), 0);
    std::vector<bool> seg_leading(messages.size(), true);
    auto close = [&](std::size_t j) {
        if (next[j] == seg_begin[j]) return;
        std::span<const Symbol> seg(messages[j].data() + seg_begin[j], next[j] - seg_begin[j]);
        coders[j]->encode_segment(seg, seg_leading[j], out[j].bytes, out[j].header);
    };
    for (std::size_t t = 0; t < schedule->size(); ++t) {
        const std::size_t j = (*schedule)[t];
        if (plan.starts_segment[t]) {
            close(j);
            seg_begin[j] = next[j];
            seg_leading[j] = plan.leading[t];
        }
        ++next[j];
    }
    for (std::size_t j = 0; j < messages.size(); ++j) {
        close(j);
        out[j].symbols = messages[j].size();
    }
    return out;
}

/// Replays the receiver over the per-stream buffers and returns every byte
/// it reads, in read order.
[[nodiscard]] inline std::vector<std::uint8_t> mux(std::span<const EncodedStream> streams, CoderSet coders,
                                                   const MuxSchedule& schedule, std::uint64_t flush_interval = 0) {
    if (coders.size() != streams.size()) throw error(errc::invalid_argument, "need exactly one coder per stream");
    const auto plan = detail::plan_segments(schedule, streams.size(), flush_interval);
    std::vector<std::uint64_t> steps(streams.size(), 0);
    for (auto j : schedule) ++steps[j];
    for (std::size_t j = 0; j < streams.size(); ++j)
        if (steps[j] != streams[j].symbols)
            throw error(errc::schedule_mismatch, "stream " + std::to_string(j) + " has " +
                                                     std::to_string(streams[j].symbols) + " symbols, schedule has " +
                                                     std::to_string(steps[j]));

    std::vector<std::uint8_t> output;
    std::size_t total = 0;
    for (const auto& s : streams) total += s.bytes.size();
    output.reserve(total);

    std::vector<std::unique_ptr<SymbolDecoder>> decoders;
    std::vector<InstrumentedReader> readers;
    for (std::size_t j = 0; j < streams.size(); ++j) {
        decoders.push_back(coders[j]->make_decoder(streams[j].header));
        readers.emplace_back(streams[j].bytes, 0, &output);
    }
    try {
        for (std::size_t t = 0; t < schedule.size(); ++t) {
            const std::size_t j = schedule[t];
            if (plan.starts_segment[t]) decoders[j]->begin_segment(readers[j], plan.leading[t]);
            (void)decoders[j]->decode(readers[j]);
        }
    } catch (const error& e) {
        if (e.code() != errc::truncated_stream) throw;
        throw error(errc::schedule_mismatch, e.what());
    }
    for (std::size_t j = 0; j < streams.size(); ++j)
        if (readers[j].remaining() != 0)
            throw error(errc::schedule_mismatch, "stream " + std::to_string(j) + " has " +
                                                     std::to_string(readers[j].remaining()) + " unread bytes");
    return output;
}

/// Receiver side: every stream's decoder reads from the one muxed stream
/// exactly when the schedule says so. A wrong schedule is not detected here;
/// it only shows up as decoded messages that differ from the originals.
[[nodiscard]] inline std::vector<std::vector<Symbol>> demux_decode(std::span<const std::uint8_t> muxed,
                                                                   std::span<const std::vector<std::uint8_t>> headers,
                                                                   CoderSet coders, const MuxSchedule& schedule,
                                                                   std::uint64_t flush_interval = 0) {
    if (coders.size() != headers.size()) throw error(errc::invalid_argument, "need exactly one coder per stream");
    const auto plan = detail::plan_segments(schedule, headers.size(), flush_interval);

    std::vector<std::unique_ptr<SymbolDecoder>> decoders;
    for (std::size_t j = 0; j < headers.size(); ++j) decoders.push_back(coders[j]->make_decoder(headers[j]));
    std::vector<std::vector<Symbol>> messages(headers.size());
    InstrumentedReader in(muxed);
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        const std::size_t j = schedule[t];
        if (plan.starts_segment[t]) decoders[j]->begin_segment(in, plan.leading[t]);
        messages[j].push_back(decoders[j]->decode(in));
    }
    return messages;
}

// ---------------------------------------------------------------------------
// Muxed container
//
//   magic "IEM1" | version u8 (1) | stream count u16 | flush interval u64 (0 = none)
//   per stream: symbol count u64 | header length u32 | header bytes
//   payload length u64 | payload
//
// All integers little-endian. The schedule is agreed out of band.

inline constexpr std::array<std::uint8_t, 4> kMuxMagic = {'I', 'E', 'M', '1'};
inline constexpr std::uint8_t kMuxVersion = 1;

struct MuxedContainer {
    std::uint64_t flush_interval = 0;
    std::vector<std::uint64_t> symbol_counts;
    std::vector<std::vector<std::uint8_t>> headers;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const MuxedContainer&, const MuxedContainer&) = default;
};

[[nodiscard]] inline std::vector<std::uint8_t> serialize(const MuxedContainer& c) {
    if (c.headers.size() != c.symbol_counts.size() || c.headers.size() > 0xFFFF)
        throw error(errc::invalid_argument, "malformed muxed container");
    ByteWriter out;
    out.raw(kMuxMagic);
    out.u8(kMuxVersion);
    out.u16(static_cast<std::uint16_t>(c.headers.size()));
    out.u64(c.flush_interval);
    for (std::size_t j = 0; j < c.headers.size(); ++j) {
        out.u64(c.symbol_counts[j]);
        out.u32(static_cast<std::uint32_t>(c.headers[j].size()));
        out.raw(c.headers[j]);
    }
    out.u64(c.payload.size());
    out.raw(c.payload);
    return std::move(out).take();
}

[[nodiscard]] inline MuxedContainer parse_muxed(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMuxMagic.size() || !std::equal(kMuxMagic.begin(), kMuxMagic.end(), bytes.begin()))
        throw error(errc::bad_format, "missing IEM1 magic");
    ByteReader in(bytes);
    in.raw(kMuxMagic.size());
    if (in.u8() != kMuxVersion) throw error(errc::bad_format, "unsupported muxed container version");
    MuxedContainer c;
    const std::size_t streams = in.u16();
    c.flush_interval = in.u64();
    for (std::size_t j = 0; j < streams; ++j) {
        c.symbol_counts.push_back(in.u64());
        const auto len = in.u32();
        const auto blob = in.raw(len);
        c.headers.emplace_back(blob.begin(), blob.end());
    }
    const auto len = in.u64();
    if (len > in.remaining()) throw error(errc::truncated_stream, "muxed payload shorter than declared");
    const auto payload = in.raw(static_cast<std::size_t>(len));
    c.payload.assign(payload.begin(), payload.end());
    return c;
}

// ---------------------------------------------------------------------------
// Incremental muxing with periodic flushes

struct MuxBudget {
    std::uint64_t flush_interval = 0;
    /// Most coded bytes waiting for the replay at any time.
    std::size_t max_buffered_bytes = 0;
    /// Most input symbols waiting for their segment to close at any time.
    std::size_t max_pending_symbols = 0;
    /// Segments beyond each stream's leading one.
    std::size_t flushes = 0;
};

struct MuxResult {
    MuxedContainer container;
    MuxBudget budget;
};

/// Encodes and muxes in alternating phases. Symbols arrive in schedule order;
/// at every multiple of `flush_interval` steps (0 = only at the end) all
/// streams close their segment and the replay drains everything up to that
/// step. The returned budget reports the buffering this needed.
[[nodiscard]] inline MuxResult mux_with_flush(std::span<const std::vector<Symbol>> messages, CoderSet coders,
                                              const MuxSchedule& schedule, std::uint64_t flush_interval) {
    if (coders.size() != messages.size()) throw error(errc::invalid_argument, "need exactly one coder per stream");
    detail::require_schedule_counts(schedule, messages);
    const std::size_t streams = messages.size();
    const auto plan = detail::plan_segments(schedule, streams, flush_interval);

    MuxResult result;
    auto& budget = result.budget;
    budget.flush_interval = flush_interval;
    result.container.flush_interval = flush_interval;
    result.container.headers.resize(streams);
    for (const auto& m : messages) result.container.symbol_counts.push_back(m.size());
    auto& output = result.container.payload;

    std::vector<std::vector<std::uint8_t>> buffered(streams);
    std::vector<std::size_t> consumed(streams, 0);
    std::vector<std::size_t> next(streams, 0);
    std::vector<std::size_t> seg_begin(streams, 0);
    std::vector<bool> seg_leading(streams, true);
    std::vector<bool> seg_open(streams, false);
    std::vector<std::unique_ptr<SymbolDecoder>> decoders(streams);
    std::size_t pending = 0;
    std::size_t replayed = 0;

    auto close_segment = [&](std::size_t j) {
        if (!seg_open[j] || next[j] == seg_begin[j]) return;
        std::span<const Symbol> seg(messages[j].data() + seg_begin[j], next[j] - seg_begin[j]);
        coders[j]->encode_segment(seg, seg_leading[j], buffered[j], result.container.headers[j]);
        if (seg_leading[j])
            decoders[j] = coders[j]->make_decoder(result.container.headers[j]);
        else
            ++budget.flushes;
        seg_open[j] = false;
    };

    auto replay_until = [&](std::size_t end) {
        std::size_t buffered_bytes = 0;
        for (std::size_t j = 0; j < streams; ++j) buffered_bytes += buffered[j].size() - consumed[j];
        budget.max_buffered_bytes = std::max(budget.max_buffered_bytes, buffered_bytes);

        std::vector<InstrumentedReader> readers;
        for (std::size_t j = 0; j < streams; ++j) readers.emplace_back(buffered[j], consumed[j], &output);
        for (; replayed < end; ++replayed) {
            const std::size_t j = schedule[replayed];
            if (plan.starts_segment[replayed]) decoders[j]->begin_segment(readers[j], plan.leading[replayed]);
            (void)decoders[j]->decode(readers[j]);
        }
        for (std::size_t j = 0; j < streams; ++j) {
            buffered[j].erase(buffered[j].begin(),
                              buffered[j].begin() + static_cast<std::ptrdiff_t>(readers[j].position()));
            consumed[j] = 0;
        }
    };

    for (std::size_t t = 0; t < schedule.size(); ++t) {
        const std::size_t j = schedule[t];
        if (plan.starts_segment[t]) {
            close_segment(j);
            seg_begin[j] = next[j];
            seg_leading[j] = plan.leading[t];
            seg_open[j] = true;
        }
        ++next[j];
        ++pending;
        const bool boundary = flush_interval != 0 && (t + 1) % flush_interval == 0;
        if (boundary || t + 1 == schedule.size()) {
            budget.max_pending_symbols = std::max(budget.max_pending_symbols, pending);
            for (std::size_t k = 0; k < streams; ++k) close_segment(k);
            pending = 0;
            replay_until(t + 1);
        }
    }
    return result;
}

/// Decodes a muxed container with the schedule both sides agreed on.
[[nodiscard]] inline std::vector<std::vector<Symbol>> demux_decode(const MuxedContainer& c, CoderSet coders,
                                                                   const MuxSchedule& schedule) {
    if (c.headers.size() != coders.size()) throw error(errc::invalid_argument, "need exactly one coder per stream");
    return demux_decode(c.payload, c.headers, coders, schedule, c.flush_interval);
}

} // namespace iec
