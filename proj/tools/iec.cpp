#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace iec::cli;

    CLI::App app{"Interleaved rANS entropy coder"};
    app.require_subcommand(1);

    EncodeOptions enc;
    std::string variant = "word16";
    std::string input, output;
    auto* encode = app.add_subcommand("encode", "Compress a file into an IEC1 container");
    encode->add_option("input", input, "Input file")->required();
    encode->add_option("output", output, "Output container")->required();
    encode->add_option("--lanes", enc.lanes, "Interleaved lanes")->check(CLI::Range(1, 65535))->capture_default_str();
    encode->add_option("--variant", variant, "Renormalization variant")
        ->check(CLI::IsMember({"byte8", "word16"}))
        ->capture_default_str();
    encode->add_option("--scale-bits", enc.scale_bits, "Frequency precision")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();

    std::string mode = "serial";
    auto* decode = app.add_subcommand("decode", "Decompress an IEC1 container");
    decode->add_option("input", input, "Input container")->required();
    decode->add_option("output", output, "Output file")->required();
    decode->add_option("--mode", mode, "Decoder")->check(CLI::IsMember({"serial", "lanes"}))->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Self-check all decoders on a file or container");
    verify->add_option("input", input, "File or container")->required();

    BenchOptions bench_opt;
    std::vector<std::string> paths;
    auto* bench = app.add_subcommand("bench", "Time serial, 2-way and lane decoders");
    bench->add_option("files", paths, "Input files")->required();
    bench->add_option("--repeats,-k", bench_opt.repeats, "Timed runs per mode (best is kept)")->capture_default_str();
    bench->add_option("--lanes", bench_opt.lanes, "Lanes for the lane decoder")
        ->check(CLI::Range(1, 32))
        ->capture_default_str();
    bench->add_option("--scale-bits", bench_opt.scale_bits, "Frequency precision")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    bench->add_option("--jobs,-j", bench_opt.jobs, "Files benchmarked in parallel")->capture_default_str();

    auto* inspect = app.add_subcommand("inspect", "Print container header fields");
    inspect->add_option("input", input, "Input container")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : format_error;
    }

    if (*encode) {
        enc.variant = parse_variant(variant);
        return cmd_encode(input, output, enc, std::cerr);
    }
    if (*decode) return cmd_decode(input, output, parse_mode(mode), std::cerr);
    if (*verify) return cmd_verify(input, std::cout);
    if (*bench) return cmd_bench(paths, bench_opt, std::cout);
    return cmd_inspect(input, std::cout);
}
