#pragma once

// Digit streams shared by every coder in the library.
//
// Encoders run backwards over the message and push digits onto an emission
// stack; finishing the stack reverses it once so that decoders can consume
// the result with a plain forward cursor.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iec/error.hpp"

namespace iec {

template <class Digit>
class DigitSink {
public:
    using digit_type = Digit;

    DigitSink() = default;
    explicit DigitSink(std::size_t reserve) { emitted_.reserve(reserve); }

    void emit(Digit d) { emitted_.push_back(d); }

    /// Appends `count` slots and returns the index of the first; used by
    /// packed stores that fill several digits at once.
    std::size_t grow(std::size_t count) {
        const std::size_t base = emitted_.size();
        emitted_.resize(base + count);
        return base;
    }

    Digit& operator[](std::size_t i) { return emitted_[i]; }

    [[nodiscard]] std::size_t size() const noexcept { return emitted_.size(); }

    /// Digits in emission order (last-read first).
    [[nodiscard]] std::span<const Digit> emitted() const noexcept { return emitted_; }

    /// Consumes the sink and returns the digits in decoder read order.
    [[nodiscard]] std::vector<Digit> finish() && {
        std::reverse(emitted_.begin(), emitted_.end());
        return std::move(emitted_);
    }

private:
    std::vector<Digit> emitted_;
};

template <class Digit>
class DigitReader {
public:
    using digit_type = Digit;

    DigitReader() = default;
    explicit DigitReader(std::span<const Digit> digits, std::size_t pos = 0) noexcept
        : digits_(digits), pos_(pos) {}

    Digit read() {
        if (pos_ >= digits_.size())
            throw error(errc::truncated_stream, "read past end of digit stream at " + std::to_string(pos_));
        return digits_[pos_++];
    }

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return digits_.size() - pos_; }
    [[nodiscard]] bool exhausted() const noexcept { return pos_ >= digits_.size(); }
    [[nodiscard]] std::span<const Digit> data() const noexcept { return digits_; }

    void advance(std::size_t count) {
        if (count > remaining())
            throw error(errc::truncated_stream, "advance past end of digit stream");
        pos_ += count;
    }

private:
    std::span<const Digit> digits_;
    std::size_t pos_ = 0;
};

// Little-endian byte (de)serialization for the wire formats.

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

    [[nodiscard]] std::vector<std::uint8_t>& bytes() noexcept { return bytes_; }
    [[nodiscard]] std::vector<std::uint8_t> take() && { return std::move(bytes_); }

private:
    void put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) noexcept : bytes_(bytes) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }

    std::span<const std::uint8_t> raw(std::size_t count) {
        require(count);
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    [[nodiscard]] std::span<const std::uint8_t> rest() const noexcept { return bytes_.subspan(pos_); }

private:
    void require(std::size_t count) const {
        if (count > remaining())
            throw error(errc::truncated_stream, "header ends after " + std::to_string(bytes_.size()) + " bytes");
    }

    std::uint64_t get(int width) {
        require(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace iec
