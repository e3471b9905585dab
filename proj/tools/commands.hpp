#pragma once

// Subcommand implementations for the iec tool. Every command writes its
// report to the given stream and returns the process exit code.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "iec/container.hpp"
#include "iec/error.hpp"
#include "iec/lanes.hpp"

namespace iec::cli {

enum exit_code : int { ok = 0, verification_failed = 1, format_error = 2, io_error = 3 };

[[nodiscard]] inline int exit_code_for(errc code) noexcept { return code == errc::io ? io_error : format_error; }

[[nodiscard]] inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io, "cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw error(errc::io, "cannot read " + path);
    return data;
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw error(errc::io, "cannot write " + path);
}

[[nodiscard]] inline VariantTag parse_variant(const std::string& name) {
    if (name == "byte8") return VariantTag::byte8;
    if (name == "word16") return VariantTag::word16;
    throw error(errc::invalid_argument, "unknown variant " + name);
}

/// Order-0 entropy of a histogram in bits.
[[nodiscard]] inline double entropy_bits(std::span<const std::uint64_t> hist) {
    double total = 0;
    for (auto h : hist) total += static_cast<double>(h);
    double bits = 0;
    for (auto h : hist)
        if (h) bits -= static_cast<double>(h) * std::log2(static_cast<double>(h) / total);
    return bits;
}

// ---------------------------------------------------------------------------

struct EncodeOptions {
    std::size_t lanes = 8;
    VariantTag variant = VariantTag::word16;
    unsigned scale_bits = kDefaultScaleBits;
};

[[nodiscard]] inline StreamContainer encode_bytes(std::span<const std::uint8_t> data, const EncodeOptions& opt) {
    const auto table = SymbolTable::from_bytes(data, opt.scale_bits);
    return encode_interleaved(data, table, opt.lanes, opt.variant);
}

inline int cmd_encode(const std::string& in_path, const std::string& out_path, const EncodeOptions& opt,
                      std::ostream& log) {
    try {
        const auto data = read_file(in_path);
        const auto bytes = serialize(encode_bytes(data, opt));
        write_file(out_path, bytes);
        log << in_path << ": " << data.size() << " -> " << bytes.size() << " bytes\n";
        return ok;
    } catch (const error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

// ---------------------------------------------------------------------------

enum class DecodeMode { serial, lanes };

[[nodiscard]] inline DecodeMode parse_mode(const std::string& name) {
    if (name == "serial") return DecodeMode::serial;
    if (name == "lanes") return DecodeMode::lanes;
    throw error(errc::invalid_argument, "unknown decode mode " + name);
}

[[nodiscard]] inline std::vector<std::uint8_t> decode_container(const StreamContainer& c, DecodeMode mode,
                                                                const StepObserver* observer = nullptr,
                                                                DecodeReport* report = nullptr) {
    return mode == DecodeMode::lanes ? decode_lanes_full(c, observer, report) : decode_interleaved(c, observer, report);
}

inline int cmd_decode(const std::string& in_path, const std::string& out_path, DecodeMode mode, std::ostream& log) {
    try {
        const auto c = parse_container(read_file(in_path));
        DecodeReport report;
        const auto data = decode_container(c, mode, nullptr, &report);
        if (report.trailing_digits != 0)
            log << "warning: " << report.trailing_digits << " unread payload digits\n";
        write_file(out_path, data);
        return ok;
    } catch (const error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

// ---------------------------------------------------------------------------

namespace detail {

using Snapshot = std::pair<std::vector<std::uint32_t>, std::size_t>;

struct Checker {
    std::ostream& out;
    bool all_passed = true;

    void report(const std::string& name, bool passed, const std::string& detail = {}) {
        all_passed = all_passed && passed;
        out << (passed ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) out << ": " << detail;
        out << '\n';
    }

    template <class Fn>
    void run(const std::string& name, Fn&& fn) {
        try {
            const std::string problem = fn();
            report(name, problem.empty(), problem);
        } catch (const std::exception& e) {
            report(name, false, e.what());
        }
    }
};

inline std::vector<Snapshot> decode_snapshots(const StreamContainer& c, DecodeMode mode,
                                              std::vector<std::uint8_t>& out, DecodeReport& report) {
    std::vector<Snapshot> snaps;
    const StepObserver obs = [&](std::span<const std::uint32_t> x, std::size_t pos) {
        snaps.emplace_back(std::vector<std::uint32_t>(x.begin(), x.end()), pos);
    };
    out = decode_container(c, mode, &obs, &report);
    return snaps;
}

/// Decodes a container both ways and checks the two decoders agree step by
/// step; returns an empty string on success.
inline std::string check_lockstep(const StreamContainer& c, std::vector<std::uint8_t>* decoded) {
    std::vector<std::uint8_t> a, b;
    DecodeReport ra, rb;
    const auto sa = decode_snapshots(c, DecodeMode::serial, a, ra);
    const auto sb = decode_snapshots(c, DecodeMode::lanes, b, rb);
    if (a != b) return "decoded outputs differ";
    if (sa != sb) return "lane states or read positions diverge";
    if (ra.digits_read != rb.digits_read) return "decoders consumed different digit counts";
    if (decoded) *decoded = std::move(a);
    return {};
}

} // namespace detail

/// Raw input: encode with 1, 2, 4 and 8 lanes and check every decoder.
/// Container input: decode it, check the decoders agree, and check that
/// re-encoding reproduces it bit for bit.
inline int cmd_verify(const std::string& path, std::ostream& out) {
    std::vector<std::uint8_t> data;
    try {
        data = read_file(path);
    } catch (const error& e) {
        out << "error: " << e.what() << '\n';
        return io_error;
    }
    detail::Checker check{out};

    const bool is_container = data.size() >= kContainerMagic.size() &&
                              std::equal(kContainerMagic.begin(), kContainerMagic.end(), data.begin());
    if (is_container) {
        check.run("container parses and re-encodes identically", [&]() -> std::string {
            const auto c = parse_container(data);
            DecodeReport report;
            const auto decoded = decode_interleaved(c, nullptr, &report);
            if (report.trailing_digits != 0) return std::to_string(report.trailing_digits) + " unread digits";
            if (serialize(encode_interleaved(decoded, c.table, c.stream.lanes(), c.variant)) != data)
                return "re-encoding differs from the container";
            return {};
        });
        check.run("serial and lane decoders agree", [&]() -> std::string {
            const auto c = parse_container(data);
            if (c.variant != VariantTag::word16 || c.stream.lanes() > kMaxLanes) {
                out << "SKIP lane decoder does not take this container\n";
                return {};
            }
            return detail::check_lockstep(c, nullptr);
        });
    } else {
        for (std::size_t lanes : {1u, 2u, 4u, 8u}) {
            const std::string tag = "N=" + std::to_string(lanes);
            check.run(tag + " word16 serial round trip", [&]() -> std::string {
                const auto c = parse_container(serialize(encode_bytes(data, {lanes, VariantTag::word16})));
                return decode_interleaved(c) == data ? "" : "output differs";
            });
            check.run(tag + " word16 lanes round trip and lockstep", [&]() -> std::string {
                const auto c = parse_container(serialize(encode_bytes(data, {lanes, VariantTag::word16})));
                std::vector<std::uint8_t> decoded;
                auto problem = detail::check_lockstep(c, &decoded);
                if (problem.empty() && decoded != data) problem = "output differs";
                if (problem.empty() && encode_lanes_full(data, c.table, lanes) != c)
                    problem = "lane encoder output differs";
                return problem;
            });
            check.run(tag + " byte8 serial round trip", [&]() -> std::string {
                const auto c = parse_container(serialize(encode_bytes(data, {lanes, VariantTag::byte8})));
                return decode_interleaved(c) == data ? "" : "output differs";
            });
        }
    }
    out << (check.all_passed ? "all checks passed" : "verification failed") << '\n';
    return check.all_passed ? ok : verification_failed;
}

// ---------------------------------------------------------------------------

struct BenchOptions {
    std::size_t repeats = 5;
    std::size_t lanes = 8;
    unsigned scale_bits = kDefaultScaleBits;
    std::size_t jobs = 1;
};

struct BenchMode {
    std::string name;
    std::size_t compressed = 0;
    double seconds = 0;
    double mib_per_s = 0;
    double speedup = 0;
};

struct BenchRow {
    std::string file;
    std::size_t size = 0;
    double entropy_bits = 0;
    std::vector<BenchMode> modes;
    std::string error;
};

namespace detail {

template <class Fn>
double best_of(std::size_t repeats, Fn&& fn) {
    fn();
    double best = 1e300;
    for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

} // namespace detail

/// Times serial, 2-way interleaved and N-lane decodes of one buffer.
[[nodiscard]] inline BenchRow bench_buffer(const std::string& name, std::span<const std::uint8_t> data,
                                           const BenchOptions& opt) {
    BenchRow row{name, data.size(), 0, {}, {}};
    std::vector<std::uint64_t> hist(256, 0);
    for (auto b : data) ++hist[b];
    row.entropy_bits = entropy_bits(hist);

    const auto table = SymbolTable::from_bytes(data, opt.scale_bits);
    struct Plan {
        std::string name;
        std::size_t lanes;
        DecodeMode mode;
    };
    const std::vector<Plan> plans{{"serial", 1, DecodeMode::serial},
                                  {"2-way", 2, DecodeMode::serial},
                                  {std::to_string(opt.lanes) + "-lane", opt.lanes, DecodeMode::lanes}};
    volatile std::uint8_t sink = 0;
    for (const auto& p : plans) {
        const auto c = encode_interleaved(data, table, p.lanes, VariantTag::word16);
        BenchMode m{p.name, serialize(c).size(), 0, 0, 0};
        m.seconds = detail::best_of(opt.repeats, [&] {
            const auto out = decode_container(c, p.mode);
            if (!out.empty()) sink = sink + out.back();
        });
        m.mib_per_s = m.seconds > 0 ? static_cast<double>(data.size()) / (1024.0 * 1024.0) / m.seconds : 0;
        row.modes.push_back(m);
    }
    for (auto& m : row.modes)
        m.speedup = row.modes[0].mib_per_s > 0 ? m.mib_per_s / row.modes[0].mib_per_s : 0;
    return row;
}

inline void print_bench(const std::vector<BenchRow>& rows, std::ostream& out) {
    if (rows.empty()) return;
    std::vector<std::string> mode_names;
    for (const auto& r : rows)
        if (r.error.empty()) {
            for (const auto& m : r.modes) mode_names.push_back(m.name);
            break;
        }

    out << std::left << std::setw(16) << "File" << std::right << std::setw(12) << "Size" << std::setw(12)
        << "Compressed" << std::setw(10) << "bits/B";
    for (const auto& n : mode_names) out << std::setw(16) << (n + " MiB/s") << std::setw(9) << "x";
    out << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(16) << std::filesystem::path(r.file).filename().string() << std::right;
        if (!r.error.empty()) {
            out << "  error: " << r.error << '\n';
            continue;
        }
        out << std::setw(12) << r.size << std::setw(12) << r.modes[0].compressed << std::setw(10) << std::fixed
            << std::setprecision(3) << (r.size ? r.entropy_bits / static_cast<double>(r.size) : 0.0);
        for (const auto& m : r.modes)
            out << std::setw(16) << std::setprecision(1) << m.mib_per_s << std::setw(8) << std::setprecision(2)
                << m.speedup << 'x';
        out << '\n';
    }
    for (const auto& r : rows) {
        if (!r.error.empty()) continue;
        if (r.size < (std::size_t{1} << 16))
            out << "note: " << r.file << " is under 64 KiB; timings include warmup noise\n";
        for (const auto& m : r.modes)
            out << "bench\t" << r.file << '\t' << m.name << '\t' << r.size << '\t' << m.compressed << '\t'
                << std::setprecision(6) << m.seconds << '\t' << std::setprecision(2) << m.mib_per_s << '\t'
                << std::setprecision(3) << m.speedup << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

inline int cmd_bench(const std::vector<std::string>& paths, const BenchOptions& opt, std::ostream& out) {
    std::vector<BenchRow> rows(paths.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> io_failed{false};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < paths.size();) {
            try {
                const auto data = read_file(paths[i]);
                rows[i] = bench_buffer(paths[i], data, opt);
            } catch (const error& e) {
                rows[i] = BenchRow{paths[i], 0, 0, {}, e.what()};
                if (e.code() == errc::io) io_failed = true;
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(opt.jobs, 1, std::max<std::size_t>(paths.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    print_bench(rows, out);
    return io_failed ? io_error : ok;
}

// ---------------------------------------------------------------------------

/// Entropy the model assigns to a message of the container's length, using
/// the quantized frequencies as the distribution.
[[nodiscard]] inline double table_entropy_bits(const StreamContainer& c) {
    std::vector<std::uint64_t> f(c.table.freqs().begin(), c.table.freqs().end());
    const double per_symbol = entropy_bits(f) / static_cast<double>(c.table.total());
    return per_symbol * static_cast<double>(c.stream.message_length);
}

inline int cmd_inspect(const std::string& path, std::ostream& out) {
    try {
        const auto bytes = read_file(path);
        const auto c = parse_container(bytes);
        std::size_t used = 0;
        std::uint32_t largest = 0;
        for (auto f : c.table.freqs()) {
            used += f != 0;
            largest = std::max(largest, f);
        }
        const double h = table_entropy_bits(c);
        out << "variant        " << to_string(c.variant) << '\n'
            << "lanes          " << c.stream.lanes() << '\n'
            << "message bytes  " << c.stream.message_length << '\n'
            << "scale bits     " << c.table.scale_bits() << '\n'
            << "alphabet       " << c.table.size() << " (" << used << " used, largest f = " << largest << ")\n"
            << "header bytes   " << header_size(c) << '\n'
            << "payload bytes  " << payload_bytes(c) << '\n'
            << "file bytes     " << bytes.size() << '\n'
            << "states        ";
        for (auto x : c.stream.final_states) out << ' ' << x;
        out << '\n' << std::fixed << std::setprecision(1) << "entropy bits   " << h << " (" << std::setprecision(4)
            << (c.stream.message_length ? h / static_cast<double>(c.stream.message_length) : 0.0)
            << " bits/byte)\n";
        out.unsetf(std::ios::floatfield);
        return ok;
    } catch (const error& e) {
        out << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

} // namespace iec::cli
