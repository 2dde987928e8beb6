#include <algorithm>
#include <cmath>

#include "codec_internal.hpp"

namespace amrlab {

Vec3i lr_block_counts(Vec3i dims) {
    auto up = [](int n) { return (n + kLrBlock - 1) / kLrBlock; };
    return {up(dims.x), up(dims.y), up(dims.z)};
}

IndexBox lr_block_box(Vec3i dims, std::int64_t block_index) {
    Vec3i nb = lr_block_counts(dims);
    int bx = int(block_index % nb.x);
    int by = int((block_index / nb.x) % nb.y);
    int bz = int(block_index / (std::int64_t(nb.x) * nb.y));
    IndexBox box;
    box.lo = {bx * kLrBlock, by * kLrBlock, bz * kLrBlock};
    box.hi = {std::min(dims.x, (bx + 1) * kLrBlock) - 1,
              std::min(dims.y, (by + 1) * kLrBlock) - 1,
              std::min(dims.z, (bz + 1) * kLrBlock) - 1};
    return box;
}

namespace {

struct PlaneFit {
    double b0 = 0, bi = 0, bj = 0, bk = 0;

    double at(int i, int j, int k) const { return b0 + bi * i + bj * j + bk * k; }
};

// Least-squares plane over a full tensor block; the coordinate axes are
// uncorrelated on such a grid, so each slope comes from its own 1D variance.
PlaneFit fit_plane(const std::vector<double> &v, Vec3i e) {
    PlaneFit f;
    double n = double(e.volume());
    double mi = (e.x - 1) / 2.0, mj = (e.y - 1) / 2.0, mk = (e.z - 1) / 2.0;
    double mean = 0;
    for (double x : v) mean += x;
    mean /= n;

    double si = 0, sj = 0, sk = 0, cvi = 0, cvj = 0, cvk = 0;
    std::size_t idx = 0;
    for (int k = 0; k < e.z; ++k)
        for (int j = 0; j < e.y; ++j)
            for (int i = 0; i < e.x; ++i, ++idx) {
                double d = v[idx] - mean;
                cvi += d * (i - mi);
                cvj += d * (j - mj);
                cvk += d * (k - mk);
            }
    auto var = [](int m) { return double(m) * (double(m) * double(m) - 1.0) / 12.0; };
    si = var(e.x) * e.y * e.z;
    sj = var(e.y) * e.x * e.z;
    sk = var(e.z) * e.x * e.y;
    f.bi = si > 0 ? cvi / si : 0.0;
    f.bj = sj > 0 ? cvj / sj : 0.0;
    f.bk = sk > 0 ? cvk / sk : 0.0;
    f.b0 = mean - f.bi * mi - f.bj * mj - f.bk * mk;
    return f;
}

// Lorenzo pass over one block; neighbors outside the block count as 0, which
// keeps blocks independently decodable.
template <class Source>
double lorenzo_from(const Source &s, Vec3i e, int i, int j, int k) {
    auto get = [&](int a, int b, int c) {
        return (a >= 0 && b >= 0 && c >= 0) ? s(a, b, c) : 0.0;
    };
    return lorenzo3d({get(i - 1, j, k), get(i, j - 1, k), get(i, j, k - 1),
                      get(i - 1, j - 1, k), get(i - 1, j, k - 1), get(i, j - 1, k - 1),
                      get(i - 1, j - 1, k - 1)});
}

struct BlockPlan {
    bool regression = false;
    PlaneFit fit;
};

BlockPlan plan_block(const std::vector<double> &orig, Vec3i e) {
    BlockPlan plan;
    plan.fit = fit_plane(orig, e);

    auto src = [&](int a, int b, int c) {
        return orig[std::size_t((std::int64_t(c) * e.y + b) * e.x + a)];
    };
    double lorenzo_cost = 0, reg_cost = 0;
    std::size_t idx = 0;
    for (int k = 0; k < e.z; ++k)
        for (int j = 0; j < e.y; ++j)
            for (int i = 0; i < e.x; ++i, ++idx) {
                lorenzo_cost += std::abs(orig[idx] - lorenzo_from(src, e, i, j, k));
                reg_cost += std::abs(orig[idx] - plan.fit.at(i, j, k));
            }
    // ties go to Lorenzo: it carries no coefficient bytes
    plan.regression = reg_cost < lorenzo_cost;
    return plan;
}

void reconstruct_block(const BlockPlan &plan, Vec3i e, double eb_abs,
                       const std::int32_t *symbols, const double *outliers,
                       std::vector<double> &out) {
    out.resize(std::size_t(e.volume()));
    auto recon = [&](int a, int b, int c) {
        return out[std::size_t((std::int64_t(c) * e.y + b) * e.x + a)];
    };
    std::size_t idx = 0, oidx = 0;
    for (int k = 0; k < e.z; ++k)
        for (int j = 0; j < e.y; ++j)
            for (int i = 0; i < e.x; ++i, ++idx) {
                std::int32_t s = symbols[idx];
                if (s == kEscapeSymbol) {
                    out[idx] = outliers[oidx++];
                    continue;
                }
                double pred = plan.regression ? plan.fit.at(i, j, k)
                                              : lorenzo_from(recon, e, i, j, k);
                out[idx] = pred + 2.0 * eb_abs * double(s);
            }
}

} // namespace

CompressedField compress_lr(const ScalarGrid &grid, const ErrorBound &eb) {
    if (!grid.all_finite())
        throw std::invalid_argument("compress_lr: non-finite data");
    double eb_abs = eb.resolve(grid);
    Vec3i dims = grid.dims;
    Vec3i nb = lr_block_counts(dims);
    std::int64_t nblocks = nb.volume();

    std::vector<std::int32_t> symbols;
    symbols.reserve(std::size_t(grid.size()));
    std::vector<double> outliers;
    std::vector<std::uint8_t> flags(std::size_t((nblocks + 7) / 8), 0);
    std::vector<double> coeffs; // 4 per regression block, block order

    std::vector<double> orig, recon;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        IndexBox box = lr_block_box(dims, b);
        Vec3i e = box.extent();
        orig.resize(std::size_t(e.volume()));
        std::size_t n = 0;
        for (int k = box.lo.z; k <= box.hi.z; ++k)
            for (int j = box.lo.y; j <= box.hi.y; ++j)
                for (int i = box.lo.x; i <= box.hi.x; ++i)
                    orig[n++] = grid.at(i, j, k);

        BlockPlan plan = plan_block(orig, e);
        if (plan.regression) {
            flags[std::size_t(b / 8)] |= std::uint8_t(1u << (b % 8));
            coeffs.insert(coeffs.end(),
                          {plan.fit.b0, plan.fit.bi, plan.fit.bj, plan.fit.bk});
        }

        recon.assign(std::size_t(e.volume()), 0.0);
        auto rsrc = [&](int a, int bb, int c) {
            return recon[std::size_t((std::int64_t(c) * e.y + bb) * e.x + a)];
        };
        std::size_t idx = 0;
        for (int k = 0; k < e.z; ++k)
            for (int j = 0; j < e.y; ++j)
                for (int i = 0; i < e.x; ++i, ++idx) {
                    double pred = plan.regression ? plan.fit.at(i, j, k)
                                                  : lorenzo_from(rsrc, e, i, j, k);
                    QuantOutcome q = quantize(orig[idx], pred, eb_abs);
                    recon[idx] = q.reconstructed;
                    if (q.outlier) {
                        symbols.push_back(kEscapeSymbol);
                        outliers.push_back(orig[idx]);
                    } else {
                        symbols.push_back(q.code);
                    }
                }
    }

    ByteWriter w;
    detail::write_header(w, CodecId::LR, eb.mode, eb.value, eb_abs, dims,
                         std::uint32_t(outliers.size()));
    HuffmanCodec table = HuffmanCodec::build(symbols);
    table.save(w);
    BitWriter bw;
    table.encode(symbols, bw);
    w.bytes.insert(w.bytes.end(), bw.bytes.begin(), bw.bytes.end());
    for (double v : outliers) w.f64(v);
    w.raw(flags.data(), flags.size());
    for (double v : coeffs) w.f64(v);

    CompressedField cf;
    cf.codec_id = CodecId::LR;
    cf.eb_mode = eb.mode;
    cf.eb_value = eb.value;
    cf.eb_abs = eb_abs;
    cf.dims = dims;
    cf.payload = std::move(w.bytes);
    return cf;
}

namespace {

struct LrStreams {
    detail::ParsedStreams ps;
    std::vector<std::int32_t> symbols;
    std::vector<double> outliers;
    std::vector<std::uint8_t> flags;
    std::vector<double> coeffs;
};

LrStreams parse_lr(const CompressedField &cf) {
    LrStreams s{detail::parse_header(cf.payload, CodecId::LR), {}, {}, {}, {}};
    Vec3i dims = s.ps.dims;
    std::int64_t npoints = dims.volume();
    std::int64_t nblocks = lr_block_counts(dims).volume();

    BitReader br(s.ps.r.p, s.ps.r.remaining());
    s.symbols = s.ps.table.decode(br, std::size_t(npoints));
    ByteReader tail(s.ps.r.p + br.bytes_consumed(),
                    s.ps.r.remaining() - br.bytes_consumed());

    s.outliers.resize(s.ps.outlier_count);
    for (auto &v : s.outliers) v = tail.f64();
    s.flags.resize(std::size_t((nblocks + 7) / 8));
    for (auto &f : s.flags) f = tail.u8();
    std::int64_t nreg = 0;
    for (std::int64_t b = 0; b < nblocks; ++b)
        if (s.flags[std::size_t(b / 8)] & (1u << (b % 8))) ++nreg;
    s.coeffs.resize(std::size_t(nreg) * 4);
    for (auto &c : s.coeffs) c = tail.f64();
    return s;
}

} // namespace

ScalarGrid decompress_lr(const CompressedField &cf) {
    LrStreams s = parse_lr(cf);
    Vec3i dims = s.ps.dims;
    ScalarGrid out(dims);
    std::int64_t nblocks = lr_block_counts(dims).volume();

    std::size_t sym_pos = 0, out_pos = 0, coeff_pos = 0;
    std::vector<double> block;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        IndexBox box = lr_block_box(dims, b);
        Vec3i e = box.extent();
        BlockPlan plan;
        plan.regression = (s.flags[std::size_t(b / 8)] >> (b % 8)) & 1;
        if (plan.regression) {
            plan.fit = {s.coeffs[coeff_pos], s.coeffs[coeff_pos + 1],
                        s.coeffs[coeff_pos + 2], s.coeffs[coeff_pos + 3]};
            coeff_pos += 4;
        }
        reconstruct_block(plan, e, s.ps.eb_abs, s.symbols.data() + sym_pos,
                          s.outliers.data() + out_pos, block);
        std::size_t n = 0;
        for (int k = box.lo.z; k <= box.hi.z; ++k)
            for (int j = box.lo.y; j <= box.hi.y; ++j)
                for (int i = box.lo.x; i <= box.hi.x; ++i)
                    out.at(i, j, k) = block[n++];
        for (std::int64_t q = 0; q < box.volume(); ++q)
            if (s.symbols[sym_pos + std::size_t(q)] == kEscapeSymbol) ++out_pos;
        sym_pos += std::size_t(box.volume());
    }
    return out;
}

std::vector<double> decompress_lr_block(const CompressedField &cf,
                                        std::int64_t block_index) {
    detail::ParsedStreams ps = detail::parse_header(cf.payload, CodecId::LR);
    Vec3i dims = ps.dims;
    std::int64_t nblocks = lr_block_counts(dims).volume();
    if (block_index < 0 || block_index >= nblocks)
        throw std::out_of_range("decompress_lr_block: block index out of range");

    // skip-decode the shared stream up to the target block, counting escapes
    // to locate the block's outliers
    std::int64_t skip_points = 0;
    for (std::int64_t b = 0; b < block_index; ++b)
        skip_points += lr_block_box(dims, b).volume();
    IndexBox box = lr_block_box(dims, block_index);
    Vec3i e = box.extent();

    BitReader br(ps.r.p, ps.r.remaining());
    std::vector<std::int32_t> head = ps.table.decode(br, std::size_t(skip_points));
    std::size_t out_pos = 0;
    for (std::int32_t sym : head)
        if (sym == kEscapeSymbol) ++out_pos;
    std::vector<std::int32_t> symbols = ps.table.decode(br, std::size_t(box.volume()));

    // locate the trailing streams: decode the rest of the code stream to find
    // its byte length, then read outliers/flags/coeffs
    std::int64_t rest = dims.volume() - skip_points - box.volume();
    ps.table.decode(br, std::size_t(rest));
    ByteReader tail(ps.r.p + br.bytes_consumed(), ps.r.remaining() - br.bytes_consumed());
    std::vector<double> outliers(ps.outlier_count);
    for (auto &v : outliers) v = tail.f64();
    std::vector<std::uint8_t> flags(std::size_t((nblocks + 7) / 8));
    for (auto &f : flags) f = tail.u8();

    BlockPlan plan;
    plan.regression = (flags[std::size_t(block_index / 8)] >> (block_index % 8)) & 1;
    if (plan.regression) {
        std::int64_t nreg_before = 0;
        for (std::int64_t b = 0; b < block_index; ++b)
            if (flags[std::size_t(b / 8)] & (1u << (b % 8))) ++nreg_before;
        ByteReader cr(tail.p, tail.remaining());
        for (std::int64_t skip = 0; skip < nreg_before * 4; ++skip) cr.f64();
        plan.fit = {cr.f64(), cr.f64(), cr.f64(), cr.f64()};
    }

    std::vector<double> block;
    reconstruct_block(plan, e, ps.eb_abs, symbols.data(), outliers.data() + out_pos,
                      block);
    return block;
}

} // namespace amrlab
