#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "trajsim/errors.hpp"

namespace trajsim {

/// Little-endian primitive encoding for the index container files.
/// Doubles travel as raw IEEE-754 bits, so round-trips are bit-exact.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void magic(const char (&tag)[9]) { out_.write(tag, 8); }
    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) { put_le(v); }
    void u64(std::uint64_t v) { put_le(v); }
    void i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v)); }
    void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

private:
    template <class T>
    void put_le(T v) {
        char buf[sizeof(T)];
        for (std::size_t i = 0; i < sizeof(T); ++i)
            buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(buf, sizeof(T));
    }

    std::ostream& out_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::istream& in) : in_(in) {}

    void expect_magic(const char (&tag)[9]) {
        char buf[8];
        in_.read(buf, 8);
        if (!in_ || std::memcmp(buf, tag, 8) != 0)
            throw IoError(std::string("bad file magic, expected ") + tag);
    }
    std::uint8_t u8() {
        const int c = in_.get();
        if (c < 0) throw IoError("unexpected end of file");
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    std::uint64_t u64() { return get_le<std::uint64_t>(); }
    std::int64_t i64() { return static_cast<std::int64_t>(get_le<std::uint64_t>()); }
    double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

private:
    template <class T>
    T get_le() {
        char buf[sizeof(T)];
        in_.read(buf, sizeof(T));
        if (!in_) throw IoError("unexpected end of file");
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<T>(static_cast<unsigned char>(buf[i])) << (8 * i);
        return v;
    }

    std::istream& in_;
};

}  // namespace trajsim
