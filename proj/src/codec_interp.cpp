#include <cmath>

#include "codec_internal.hpp"

namespace amrlab {

int interp_anchor_stride(Vec3i dims) {
    int m = std::min(dims.x, std::min(dims.y, dims.z));
    int s = 1;
    while (s * 2 <= m / 2) s *= 2;
    return std::max(2, s);
}

namespace {

std::int64_t anchor_count(Vec3i dims, int s0) {
    auto per_axis = [&](int d) { return std::int64_t((d - 1) / s0 + 1); };
    return per_axis(dims.x) * per_axis(dims.y) * per_axis(dims.z);
}

// Visits every non-anchor point exactly once, coarse strides first, axis
// order z then y then x within each stride level. The same traversal drives
// both encode and decode, so predictions always come from values that are
// already reconstructed.
template <class Fn>
void interp_traverse(Vec3i d, int s0, Fn &&visit) {
    for (int s = s0 / 2; s >= 1; s /= 2) {
        for (int z = s; z < d.z; z += 2 * s)
            for (int y = 0; y < d.y; y += 2 * s)
                for (int x = 0; x < d.x; x += 2 * s) visit(x, y, z, 2, s);
        for (int z = 0; z < d.z; z += s)
            for (int y = s; y < d.y; y += 2 * s)
                for (int x = 0; x < d.x; x += 2 * s) visit(x, y, z, 1, s);
        for (int z = 0; z < d.z; z += s)
            for (int y = 0; y < d.y; y += s)
                for (int x = s; x < d.x; x += 2 * s) visit(x, y, z, 0, s);
    }
}

double interp_predict(const ScalarGrid &recon, int x, int y, int z, int axis, int s) {
    Vec3i lo{x, y, z}, hi{x, y, z};
    lo[axis] -= s;
    hi[axis] += s;
    double a = recon.at(lo.x, lo.y, lo.z);
    if (hi[axis] >= recon.dims[axis]) return a; // nearest-neighbor extrapolation
    return 0.5 * (a + recon.at(hi.x, hi.y, hi.z));
}

} // namespace

CompressedField compress_interp(const ScalarGrid &grid, const ErrorBound &eb) {
    if (!grid.all_finite())
        throw std::invalid_argument("compress_interp: non-finite data");
    double eb_abs = eb.resolve(grid);
    Vec3i d = grid.dims;
    int s0 = interp_anchor_stride(d);

    ScalarGrid recon(d);
    std::vector<double> anchors;
    anchors.reserve(std::size_t(anchor_count(d, s0)));
    for (int z = 0; z < d.z; z += s0)
        for (int y = 0; y < d.y; y += s0)
            for (int x = 0; x < d.x; x += s0) {
                double v = grid.at(x, y, z);
                anchors.push_back(v);
                recon.at(x, y, z) = v;
            }

    std::vector<std::int32_t> symbols;
    symbols.reserve(std::size_t(grid.size()));
    std::vector<double> outliers;
    interp_traverse(d, s0, [&](int x, int y, int z, int axis, int s) {
        double pred = interp_predict(recon, x, y, z, axis, s);
        QuantOutcome q = quantize(grid.at(x, y, z), pred, eb_abs);
        recon.at(x, y, z) = q.reconstructed;
        if (q.outlier) {
            symbols.push_back(kEscapeSymbol);
            outliers.push_back(q.reconstructed);
        } else {
            symbols.push_back(q.code);
        }
    });

    ByteWriter w;
    detail::write_header(w, CodecId::Interp, eb.mode, eb.value, eb_abs, d,
                         std::uint32_t(outliers.size()));
    HuffmanCodec table = HuffmanCodec::build(symbols);
    table.save(w);
    BitWriter bw;
    table.encode(symbols, bw);
    w.bytes.insert(w.bytes.end(), bw.bytes.begin(), bw.bytes.end());
    for (double v : outliers) w.f64(v);
    for (double v : anchors) w.f64(v);

    CompressedField cf;
    cf.codec_id = CodecId::Interp;
    cf.eb_mode = eb.mode;
    cf.eb_value = eb.value;
    cf.eb_abs = eb_abs;
    cf.dims = d;
    cf.payload = std::move(w.bytes);
    return cf;
}

ScalarGrid decompress_interp(const CompressedField &cf) {
    detail::ParsedStreams ps = detail::parse_header(cf.payload, CodecId::Interp);
    Vec3i d = ps.dims;
    int s0 = interp_anchor_stride(d);
    std::int64_t nanchor = anchor_count(d, s0);
    std::int64_t ncodes = d.volume() - nanchor;

    BitReader br(ps.r.p, ps.r.remaining());
    std::vector<std::int32_t> symbols = ps.table.decode(br, std::size_t(ncodes));
    ByteReader tail(ps.r.p + br.bytes_consumed(), ps.r.remaining() - br.bytes_consumed());
    std::vector<double> outliers(ps.outlier_count);
    for (auto &v : outliers) v = tail.f64();
    std::vector<double> anchors(std::size_t(nanchor));
    for (auto &v : anchors) v = tail.f64();

    ScalarGrid out(d);
    std::size_t a = 0;
    for (int z = 0; z < d.z; z += s0)
        for (int y = 0; y < d.y; y += s0)
            for (int x = 0; x < d.x; x += s0) out.at(x, y, z) = anchors[a++];

    std::size_t sym_pos = 0, out_pos = 0;
    interp_traverse(d, s0, [&](int x, int y, int z, int axis, int s) {
        std::int32_t sym = symbols[sym_pos++];
        if (sym == kEscapeSymbol) {
            out.at(x, y, z) = outliers[out_pos++];
        } else {
            double pred = interp_predict(out, x, y, z, axis, s);
            out.at(x, y, z) = pred + 2.0 * ps.eb_abs * double(sym);
        }
    });
    return out;
}

} // namespace amrlab
