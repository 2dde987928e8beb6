#ifndef AMRLAB_HUFFMAN_HPP
#define AMRLAB_HUFFMAN_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "amrlab/byteio.hpp"

namespace amrlab {

// MSB-first bit packing.
struct BitWriter {
    std::vector<std::uint8_t> bytes;
    int fill = 0; // bits used in the last byte

    void put(std::uint64_t code, int len) {
        for (int i = len - 1; i >= 0; --i) {
            if (fill == 0) bytes.push_back(0);
            if ((code >> i) & 1u) bytes.back() |= std::uint8_t(0x80u >> fill);
            fill = (fill + 1) & 7;
        }
    }
};

struct BitReader {
    const std::uint8_t *p;
    std::size_t nbytes;
    std::size_t pos = 0; // bit position

    BitReader(const std::uint8_t *data, std::size_t n) : p(data), nbytes(n) {}

    int get() {
        if (pos >= nbytes * 8) throw std::runtime_error("bit stream underrun");
        int b = (p[pos >> 3] >> (7 - (pos & 7))) & 1;
        ++pos;
        return b;
    }
    std::size_t bytes_consumed() const { return (pos + 7) / 8; }
};

/// Canonical Huffman code over signed 32-bit symbols. A single-symbol
/// alphabet gets a zero-bit code: the stream is empty and decode replays the
/// symbol `count` times.
class HuffmanCodec {
public:
    /// Builds code lengths from the symbol stream. Deterministic for a given
    /// input (ties broken by symbol value).
    static HuffmanCodec build(std::span<const std::int32_t> symbols);

    void save(ByteWriter &w) const;
    static HuffmanCodec load(ByteReader &r);

    void encode(std::span<const std::int32_t> symbols, BitWriter &bw) const;
    std::vector<std::int32_t> decode(BitReader &br, std::size_t count) const;

    std::size_t alphabet_size() const { return symbols_.size(); }

private:
    // sorted by (length, symbol); lengths_ parallel
    std::vector<std::int32_t> symbols_;
    std::vector<std::uint8_t> lengths_;
    std::vector<std::uint64_t> codes_;
    std::unordered_map<std::int32_t, std::size_t> index_;

    void assign_canonical();
};

/// Self-contained encode: canonical table followed by the bit stream.
std::vector<std::uint8_t> huffman_encode(std::span<const std::int32_t> codes);
std::vector<std::int32_t> huffman_decode(std::span<const std::uint8_t> bytes,
                                         std::size_t count);

} // namespace amrlab

#endif
