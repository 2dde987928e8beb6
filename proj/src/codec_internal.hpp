#ifndef AMRLAB_CODEC_INTERNAL_HPP
#define AMRLAB_CODEC_INTERNAL_HPP

#include <cstring>

#include "amrlab/byteio.hpp"
#include "amrlab/codec.hpp"
#include "amrlab/huffman.hpp"

namespace amrlab::detail {

// Payload layout (all little-endian):
//   magic "AMRZ", u8 codec_id, u8 eb_mode, f64 eb_value, f64 eb_abs,
//   u32 dims[3], u32 outlier_count, huffman table, code bit stream,
//   outlier f64 stream, codec side data (LR: block flags + regression
//   coefficients; Interp: anchor values).

inline void write_header(ByteWriter &w, CodecId codec, EbMode mode, double value,
                         double eb_abs, Vec3i dims, std::uint32_t outlier_count) {
    w.raw("AMRZ", 4);
    w.u8(std::uint8_t(codec));
    w.u8(std::uint8_t(mode));
    w.f64(value);
    w.f64(eb_abs);
    w.u32(std::uint32_t(dims.x));
    w.u32(std::uint32_t(dims.y));
    w.u32(std::uint32_t(dims.z));
    w.u32(outlier_count);
}

struct ParsedStreams {
    CodecId codec;
    EbMode mode;
    double eb_value = 0;
    double eb_abs = 0;
    Vec3i dims;
    std::uint32_t outlier_count = 0;
    HuffmanCodec table;
    ByteReader r{nullptr, 0}; // positioned at the code bit stream
};

inline ParsedStreams parse_header(const std::vector<std::uint8_t> &payload,
                                  CodecId expect) {
    if (payload.size() < 4 || std::memcmp(payload.data(), "AMRZ", 4) != 0)
        throw std::runtime_error("compressed field: bad magic");
    ParsedStreams ps;
    ps.r = ByteReader(payload.data() + 4, payload.size() - 4);
    ps.codec = CodecId(ps.r.u8());
    if (ps.codec != expect)
        throw std::runtime_error("compressed field: codec id mismatch");
    ps.mode = EbMode(ps.r.u8());
    ps.eb_value = ps.r.f64();
    ps.eb_abs = ps.r.f64();
    ps.dims = {int(ps.r.u32()), int(ps.r.u32()), int(ps.r.u32())};
    ps.outlier_count = ps.r.u32();
    ps.table = HuffmanCodec::load(ps.r);
    return ps;
}

} // namespace amrlab::detail

#endif
