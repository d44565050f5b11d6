#pragma once

// Little-endian binary framing for sketch state: magic tag, version,
// shape words, seed, then accumulators in fixed order as 64-bit words
// (128-bit accumulators are written as two words, low first).

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace specstream::io {

inline void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("sketch stream truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

inline void put_i64(std::ostream& out, std::int64_t v) {
    put_u64(out, static_cast<std::uint64_t>(v));
}

inline std::int64_t get_i64(std::istream& in) {
    return static_cast<std::int64_t>(get_u64(in));
}

inline void put_i128(std::ostream& out, __int128 v) {
    put_u64(out, static_cast<std::uint64_t>(static_cast<unsigned __int128>(v)));
    put_u64(out, static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) >> 64));
}

inline __int128 get_i128(std::istream& in) {
    std::uint64_t lo = get_u64(in);
    std::uint64_t hi = get_u64(in);
    return static_cast<__int128>((static_cast<unsigned __int128>(hi) << 64) | lo);
}

inline void put_magic(std::ostream& out, const char tag[4], std::uint32_t version) {
    out.write(tag, 4);
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(version >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline void expect_magic(std::istream& in, const char tag[4], std::uint32_t version) {
    char got[4];
    in.read(got, 4);
    if (!in || std::memcmp(got, tag, 4) != 0)
        throw std::runtime_error(std::string("bad sketch magic, expected ") + std::string(tag, 4));
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    if (v != version) throw std::runtime_error("unsupported sketch version");
}

}  // namespace specstream::io
