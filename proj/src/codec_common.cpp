#include <cmath>
#include <cstring>
#include <fstream>

#include "amrlab/codec.hpp"

namespace amrlab {

double ErrorBound::resolve(const ScalarGrid &g) const {
    if (!(value > 0.0)) throw std::invalid_argument("error bound value must be > 0");
    if (mode == EbMode::Absolute) return value;
    auto [lo, hi] = g.min_max();
    double range = hi - lo;
    // a constant grid has zero range; fall back to the bound value itself so
    // quantization stays well defined
    return range > 0.0 ? value * range : value;
}

QuantOutcome quantize(double original, double prediction, double eb_abs,
                      std::int32_t max_code) {
    if (!std::isfinite(original) || !std::isfinite(prediction))
        throw std::invalid_argument("quantize: non-finite input");
    if (!(eb_abs > 0.0)) throw std::invalid_argument("quantize: eb_abs must be > 0");

    QuantOutcome q;
    double scaled = (original - prediction) / (2.0 * eb_abs);
    if (std::abs(scaled) < double(max_code)) {
        std::int32_t code = std::int32_t(std::llround(scaled));
        double recon = prediction + 2.0 * eb_abs * double(code);
        if (std::abs(code) < max_code && std::abs(recon - original) <= eb_abs) {
            q.code = code;
            q.reconstructed = recon;
            return q;
        }
    }
    q.outlier = true;
    q.reconstructed = original;
    return q;
}

ScalarGrid decompress(const CompressedField &cf) {
    return cf.codec_id == CodecId::LR ? decompress_lr(cf) : decompress_interp(cf);
}

double compression_ratio(const ScalarGrid &original, const CompressedField &cf) {
    return double(original.size() * 8) / double(cf.payload.size());
}

void write_amrz(const CompressedField &cf, const std::filesystem::path &path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_amrz: cannot open " + path.string());
    f.write(reinterpret_cast<const char *>(cf.payload.data()),
            std::streamsize(cf.payload.size()));
}

CompressedField read_amrz(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_amrz: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return parse_amrz(std::move(bytes));
}

CompressedField parse_amrz(std::vector<std::uint8_t> payload) {
    if (payload.size() < 42 || std::memcmp(payload.data(), "AMRZ", 4) != 0)
        throw std::runtime_error("parse_amrz: bad magic");
    CompressedField cf;
    const std::uint8_t *p = payload.data() + 4;
    auto u8 = [&] { return *p++; };
    auto f64 = [&] {
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= std::uint64_t(*p++) << (8 * i);
        double v;
        std::memcpy(&v, &u, 8);
        return v;
    };
    auto u32 = [&] {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(*p++) << (8 * i);
        return v;
    };
    cf.codec_id = CodecId(u8());
    cf.eb_mode = EbMode(u8());
    cf.eb_value = f64();
    cf.eb_abs = f64();
    cf.dims = {int(u32()), int(u32()), int(u32())};
    cf.payload = std::move(payload);
    return cf;
}

} // namespace amrlab
