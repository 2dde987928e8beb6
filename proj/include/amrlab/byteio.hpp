#ifndef AMRLAB_BYTEIO_HPP
#define AMRLAB_BYTEIO_HPP

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace amrlab {

// Little-endian serialization into a growable byte buffer.
struct ByteWriter {
    std::vector<std::uint8_t> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(std::uint8_t(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(std::uint8_t(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(std::uint32_t(v)); }
    void f64(double v) {
        std::uint64_t u;
        std::memcpy(&u, &v, 8);
        u64(u);
    }
    void raw(const void *p, std::size_t n) {
        const auto *b = static_cast<const std::uint8_t *>(p);
        bytes.insert(bytes.end(), b, b + n);
    }
};

struct ByteReader {
    const std::uint8_t *p;
    const std::uint8_t *end;

    ByteReader(const std::uint8_t *data, std::size_t n) : p(data), end(data + n) {}

    void need(std::size_t n) const {
        if (std::size_t(end - p) < n) throw std::runtime_error("truncated byte stream");
    }
    std::uint8_t u8() {
        need(1);
        return *p++;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(*p++) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(*p++) << (8 * i);
        return v;
    }
    std::int32_t i32() { return std::int32_t(u32()); }
    double f64() {
        std::uint64_t u = u64();
        double v;
        std::memcpy(&v, &u, 8);
        return v;
    }
    std::size_t remaining() const { return std::size_t(end - p); }
};

} // namespace amrlab

#endif
