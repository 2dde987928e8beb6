#include "amrlab/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace amrlab {

double psnr(const ScalarGrid &orig, const ScalarGrid &recon) {
    if (orig.dims != recon.dims) throw std::invalid_argument("psnr: dims mismatch");
    auto [lo, hi] = orig.min_max();
    double range = hi - lo;
    if (!(range > 0.0)) throw std::invalid_argument("psnr: zero-range original");

    double mse = 0.0;
    for (std::size_t i = 0; i < orig.values.size(); ++i) {
        double d = orig.values[i] - recon.values[i];
        mse += d * d;
    }
    mse /= double(orig.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(range) - 10.0 * std::log10(mse);
}

double ssim3d(const ScalarGrid &orig, const ScalarGrid &recon, int window) {
    if (orig.dims != recon.dims) throw std::invalid_argument("ssim3d: dims mismatch");
    Vec3i d = orig.dims;
    if (d.x < window || d.y < window || d.z < window)
        throw std::invalid_argument("ssim3d: dims smaller than window");

    auto [lo, hi] = orig.min_max();
    double L = hi - lo;
    if (L == 0.0) L = 1.0; // constant original: keep the formula well defined
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);
    const double n = double(window) * window * window;

    double total = 0.0;
    std::int64_t windows = 0;
    for (int k0 = 0; k0 + window <= d.z; ++k0)
        for (int j0 = 0; j0 + window <= d.y; ++j0)
            for (int i0 = 0; i0 + window <= d.x; ++i0) {
                double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
                for (int k = k0; k < k0 + window; ++k)
                    for (int j = j0; j < j0 + window; ++j) {
                        std::size_t base = std::size_t(orig.index(i0, j, k));
                        for (int i = 0; i < window; ++i) {
                            double x = orig.values[base + std::size_t(i)];
                            double y = recon.values[base + std::size_t(i)];
                            sx += x;
                            sy += y;
                            sxx += x * x;
                            syy += y * y;
                            sxy += x * y;
                        }
                    }
                double mx = sx / n, my = sy / n;
                double vx = sxx / n - mx * mx;
                double vy = syy / n - my * my;
                double cxy = sxy / n - mx * my;
                double s = ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                           ((mx * mx + my * my + c1) * (vx + vy + c2));
                total += s;
                ++windows;
            }
    return total / double(windows);
}

double block_discontinuity(const ScalarGrid &g, int block) {
    Vec3i d = g.dims;
    double sum = 0.0;
    std::int64_t n = 0;
    for (int axis = 0; axis < 3; ++axis) {
        for (int p = block; p < d[axis]; p += block) {
            Vec3i c;
            int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
            for (int u = 0; u < d[a1]; ++u)
                for (int v = 0; v < d[a2]; ++v) {
                    c[axis] = p;
                    c[a1] = u;
                    c[a2] = v;
                    double hi_side = g.at(c.x, c.y, c.z);
                    c[axis] = p - 1;
                    sum += std::abs(hi_side - g.at(c.x, c.y, c.z));
                    ++n;
                }
        }
    }
    return n ? sum / double(n) : 0.0;
}

QualityRow make_row(const std::string &codec, const std::string &eb_mode,
                    double eb_value, double cr, double psnr_db, double ssim,
                    const std::string &method) {
    QualityRow r;
    r.codec = codec;
    r.eb_mode = eb_mode;
    r.eb_value = eb_value;
    r.cr = cr;
    r.psnr_db = psnr_db;
    r.ssim = ssim;
    r.rssim = rssim(ssim);
    r.method = method;
    return r;
}

namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string QualityReport::to_csv() const {
    std::string out = "codec,eb_mode,eb,cr,psnr_db,ssim,rssim,method,"
                      "interface_open_edges,domain_open_edges,open_edge_length\n";
    for (const QualityRow &r : rows) {
        out += r.codec + ',' + r.eb_mode + ',' + fmt_double(r.eb_value) + ',' +
               fmt_double(r.cr) + ',' + fmt_double(r.psnr_db) + ',' +
               fmt_double(r.ssim) + ',' + fmt_double(r.rssim) + ',' + r.method + ',' +
               std::to_string(r.interface_open_edges) + ',' +
               std::to_string(r.domain_open_edges) + ',' +
               fmt_double(r.open_edge_length) + '\n';
    }
    return out;
}

} // namespace amrlab
