#pragma once

#include <stdexcept>
#include <string>

namespace iec {

enum class errc {
    non_b_unique,
    truncated_stream,
    unencodable_symbol,
    alphabet_too_large,
    bad_format,
    unsupported_variant,
    schedule_mismatch,
    invalid_argument,
    io,
};

inline const char* to_string(errc code) noexcept {
    switch (code) {
    case errc::non_b_unique: return "non-b-unique coder";
    case errc::truncated_stream: return "truncated stream";
    case errc::unencodable_symbol: return "unencodable symbol";
    case errc::alphabet_too_large: return "alphabet too large for scale";
    case errc::bad_format: return "bad format";
    case errc::unsupported_variant: return "variant unsupported by lane decoder";
    case errc::schedule_mismatch: return "schedule/stream mismatch";
    case errc::invalid_argument: return "invalid argument";
    case errc::io: return "I/O error";
    }
    return "unknown error";
}

/// All library failures are reported through this one exception type;
/// callers that need to distinguish causes switch on code().
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(detail.empty() ? std::string(to_string(code))
                                            : std::string(to_string(code)) + ": " + detail),
          code_(code) {}

    explicit error(errc code) : error(code, std::string()) {}

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace iec
