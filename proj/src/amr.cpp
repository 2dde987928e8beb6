#include "amrlab/amr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "amrlab/rng.hpp"

namespace amrlab {

std::vector<std::string> validate(const AMRDataset &ds) {
    std::vector<std::string> out;
    if (ds.num_levels < 1) {
        out.push_back("dataset must have at least one level");
        return out;
    }
    if (int(ds.levels.size()) != ds.num_levels)
        out.push_back("level count mismatch");
    if (ds.refinement_ratio != 2)
        out.push_back("refinement ratio must be 2");
    if (ds.coarse_dims.x < 1 || ds.coarse_dims.y < 1 || ds.coarse_dims.z < 1)
        out.push_back("coarse dims must be positive");
    if (!out.empty()) return out;

    for (int l = 0; l < ds.num_levels; ++l) {
        const AMRLevel &lev = ds.levels[std::size_t(l)];
        Vec3i dims = ds.level_dims(l);
        if (lev.level_index != l)
            out.push_back("level index violation at level " + std::to_string(l));
        if (lev.cell_size != std::ldexp(1.0, -l))
            out.push_back("cell size violation at level " + std::to_string(l));

        for (std::size_t p = 0; p < lev.patches.size(); ++p) {
            const Patch &pa = lev.patches[p];
            std::string where =
                " at level " + std::to_string(l) + " patch " + std::to_string(p);
            if (!pa.box.valid()) {
                out.push_back("box violation" + where);
                continue;
            }
            if (std::int64_t(pa.data.size()) != pa.box.volume())
                out.push_back("data length violation" + where);
            if (l == 0) {
                if (pa.box.lo.x < 0 || pa.box.lo.y < 0 || pa.box.lo.z < 0 ||
                    pa.box.hi.x >= dims.x || pa.box.hi.y >= dims.y || pa.box.hi.z >= dims.z)
                    out.push_back("bounds violation" + where);
            } else {
                // Proper nesting: the patch, coarsened by 2, must be covered by
                // the parent level's patch union (out-of-domain counts as a
                // nesting failure too).
                const AMRLevel &par = ds.levels[std::size_t(l - 1)];
                IndexBox cb{{pa.box.lo.x >> 1, pa.box.lo.y >> 1, pa.box.lo.z >> 1},
                            {pa.box.hi.x >> 1, pa.box.hi.y >> 1, pa.box.hi.z >> 1}};
                bool nested = true;
                for (int k = cb.lo.z; k <= cb.hi.z && nested; ++k)
                    for (int j = cb.lo.y; j <= cb.hi.y && nested; ++j)
                        for (int i = cb.lo.x; i <= cb.hi.x && nested; ++i) {
                            Vec3i c{i, j, k};
                            Vec3i pdims = ds.level_dims(l - 1);
                            bool covered = false;
                            if (i >= 0 && j >= 0 && k >= 0 && i < pdims.x &&
                                j < pdims.y && k < pdims.z) {
                                for (const Patch &pp : par.patches)
                                    if (pp.box.contains(c)) { covered = true; break; }
                            }
                            nested = covered;
                        }
                if (!nested) out.push_back("nesting violation" + where);
            }
        }

        for (std::size_t a = 0; a < lev.patches.size(); ++a)
            for (std::size_t b = a + 1; b < lev.patches.size(); ++b)
                if (lev.patches[a].box.valid() && lev.patches[b].box.valid() &&
                    lev.patches[a].box.intersects(lev.patches[b].box))
                    out.push_back("overlap violation at level " + std::to_string(l) +
                                  " patches " + std::to_string(a) + " and " +
                                  std::to_string(b));
    }
    return out;
}

namespace {

double value_noise(Vec3d p, std::uint64_t seed) {
    // 4 octaves of trilinear value noise, values in [-1, 1].
    double sum = 0.0, amp_sum = 0.0;
    for (int oct = 0; oct < 4; ++oct) {
        int freq = 4 << oct;
        double amp = std::ldexp(1.0, -oct);
        int lat = freq + 1; // lattice points per axis
        double fx = p.x * freq, fy = p.y * freq, fz = p.z * freq;
        int ix = int(fx), iy = int(fy), iz = int(fz);
        double tx = fx - ix, ty = fy - iy, tz = fz - iz;

        auto node = [&](int dx, int dy, int dz) {
            std::uint64_t idx =
                (std::uint64_t(iz + dz) * std::uint64_t(lat) + std::uint64_t(iy + dy)) *
                    std::uint64_t(lat) +
                std::uint64_t(ix + dx);
            return unit_double(hash3(seed, std::uint64_t(oct), idx)) * 2.0 - 1.0;
        };
        auto lerp = [](double a, double b, double t) { return a + t * (b - a); };

        double c00 = lerp(node(0, 0, 0), node(1, 0, 0), tx);
        double c10 = lerp(node(0, 1, 0), node(1, 1, 0), tx);
        double c01 = lerp(node(0, 0, 1), node(1, 0, 1), tx);
        double c11 = lerp(node(0, 1, 1), node(1, 1, 1), tx);
        double c0 = lerp(c00, c10, ty);
        double c1 = lerp(c01, c11, ty);
        sum += amp * lerp(c0, c1, tz);
        amp_sum += amp;
    }
    return sum / amp_sum;
}

} // namespace

ScalarGrid generate_field(FieldKind kind, Vec3i dims, std::uint64_t seed) {
    if (dims.x < 8 || dims.y < 8 || dims.z < 8)
        throw std::invalid_argument("generate_field: dims must be >= 8 per axis");

    ScalarGrid g(dims);
    const double two_pi = 2.0 * std::numbers::pi;
    std::int64_t idx = 0;
    for (int k = 0; k < dims.z; ++k) {
        double z = (k + 0.5) / dims.z;
        for (int j = 0; j < dims.y; ++j) {
            double y = (j + 0.5) / dims.y;
            for (int i = 0; i < dims.x; ++i, ++idx) {
                double x = (i + 0.5) / dims.x;
                if (kind == FieldKind::Smooth) {
                    double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5) +
                                (z - 0.5) * (z - 0.5);
                    g.values[std::size_t(idx)] = std::sin(two_pi * x) *
                                                 std::cos(two_pi * y) *
                                                 std::sin(two_pi * z) *
                                                 std::exp(-4.0 * r2);
                } else {
                    g.values[std::size_t(idx)] =
                        std::exp(3.0 * value_noise({x, y, z}, seed));
                }
            }
        }
    }
    return g;
}

namespace {

// Merge tagged tiles into maximal boxes: runs along x, then rectangles across
// y, then boxes across z. Deterministic.
std::vector<IndexBox> merge_tiles(const std::vector<std::uint8_t> &tags, Vec3i tdims) {
    struct Rect {
        int x0, x1, y0, y1;
        bool operator==(const Rect &o) const {
            return x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1;
        }
    };
    auto tag = [&](int i, int j, int k) {
        return tags[std::size_t((std::int64_t(k) * tdims.y + j) * tdims.x + i)] != 0;
    };

    std::vector<IndexBox> boxes;
    std::vector<std::pair<Rect, std::size_t>> open; // rect -> index into boxes
    for (int k = 0; k < tdims.z; ++k) {
        // collect x-runs per row, then merge identical runs across y
        std::vector<Rect> rects;
        for (int j = 0; j < tdims.y; ++j) {
            int i = 0;
            while (i < tdims.x) {
                if (!tag(i, j, k)) { ++i; continue; }
                int i0 = i;
                while (i < tdims.x && tag(i, j, k)) ++i;
                bool merged = false;
                for (auto &r : rects)
                    if (r.x0 == i0 && r.x1 == i - 1 && r.y1 == j - 1) {
                        r.y1 = j;
                        merged = true;
                        break;
                    }
                if (!merged) rects.push_back({i0, i - 1, j, j});
            }
        }
        // extend matching rectangles from the previous slab along z
        std::vector<std::pair<Rect, std::size_t>> next_open;
        for (const Rect &r : rects) {
            std::size_t idx = boxes.size();
            for (auto it = open.begin(); it != open.end(); ++it)
                if (it->first == r && boxes[it->second].hi.z == k - 1) {
                    boxes[it->second].hi.z = k;
                    idx = it->second;
                    open.erase(it);
                    break;
                }
            if (idx == boxes.size())
                boxes.push_back({{r.x0, r.y0, k}, {r.x1, r.y1, k}});
            next_open.push_back({r, idx});
        }
        open = std::move(next_open);
    }
    return boxes;
}

} // namespace

AMRDataset build_amr(const ScalarGrid &fine, double theta, int tile) {
    Vec3i fd = fine.dims;
    if (tile < 1) throw std::invalid_argument("build_amr: tile must be >= 1");
    if (fd.x % (2 * tile) || fd.y % (2 * tile) || fd.z % (2 * tile))
        throw std::invalid_argument("build_amr: fine dims must be divisible by 2*tile");

    Vec3i cd{fd.x / 2, fd.y / 2, fd.z / 2};
    ScalarGrid coarse(cd);
    for (int k = 0; k < cd.z; ++k)
        for (int j = 0; j < cd.y; ++j)
            for (int i = 0; i < cd.x; ++i) {
                double s = 0.0;
                for (int dk = 0; dk < 2; ++dk)
                    for (int dj = 0; dj < 2; ++dj)
                        for (int di = 0; di < 2; ++di)
                            s += fine.at(2 * i + di, 2 * j + dj, 2 * k + dk);
                coarse.at(i, j, k) = s / 8.0;
            }

    // Tag coarse cells whose central-difference gradient norm exceeds theta;
    // one-sided differences at the domain boundary.
    Vec3i tdims{cd.x / tile, cd.y / tile, cd.z / tile};
    std::vector<std::uint8_t> tile_tag(std::size_t(tdims.volume()), 0);
    for (int k = 0; k < cd.z; ++k)
        for (int j = 0; j < cd.y; ++j)
            for (int i = 0; i < cd.x; ++i) {
                auto diff = [&](int a) {
                    Vec3i p0{i, j, k}, p1{i, j, k};
                    int d = (a == 0 ? cd.x : a == 1 ? cd.y : cd.z);
                    int c = p0[a];
                    p0[a] = std::max(0, c - 1);
                    p1[a] = std::min(d - 1, c + 1);
                    double span = double(p1[a] - p0[a]);
                    if (span == 0.0) return 0.0;
                    return (coarse.at(p1.x, p1.y, p1.z) - coarse.at(p0.x, p0.y, p0.z)) /
                           span;
                };
                double gx = diff(0), gy = diff(1), gz = diff(2);
                if (std::sqrt(gx * gx + gy * gy + gz * gz) > theta) {
                    std::int64_t t =
                        (std::int64_t(k / tile) * tdims.y + j / tile) * tdims.x + i / tile;
                    tile_tag[std::size_t(t)] = 1;
                }
            }

    AMRDataset ds;
    ds.coarse_dims = cd;
    ds.num_levels = 2;
    ds.levels.resize(2);
    ds.levels[0].level_index = 0;
    ds.levels[0].cell_size = 1.0;
    ds.levels[1].level_index = 1;
    ds.levels[1].cell_size = 0.5;

    Patch cp;
    cp.box = {{0, 0, 0}, {cd.x - 1, cd.y - 1, cd.z - 1}};
    cp.data = coarse.values;
    ds.levels[0].patches.push_back(std::move(cp));

    for (const IndexBox &tb : merge_tiles(tile_tag, tdims)) {
        Patch fp;
        fp.box = {{tb.lo.x * 2 * tile, tb.lo.y * 2 * tile, tb.lo.z * 2 * tile},
                  {(tb.hi.x + 1) * 2 * tile - 1, (tb.hi.y + 1) * 2 * tile - 1,
                   (tb.hi.z + 1) * 2 * tile - 1}};
        fp.data.resize(std::size_t(fp.box.volume()));
        std::int64_t n = 0;
        for (int k = fp.box.lo.z; k <= fp.box.hi.z; ++k)
            for (int j = fp.box.lo.y; j <= fp.box.hi.y; ++j)
                for (int i = fp.box.lo.x; i <= fp.box.hi.x; ++i)
                    fp.data[std::size_t(n++)] = fine.at(i, j, k);
        ds.levels[1].patches.push_back(std::move(fp));
    }
    return ds;
}

ScalarGrid rasterize_level(const AMRDataset &ds, int level, double fill) {
    ScalarGrid g(ds.level_dims(level), fill);
    for (const Patch &p : ds.levels[std::size_t(level)].patches) {
        std::int64_t n = 0;
        for (int k = p.box.lo.z; k <= p.box.hi.z; ++k)
            for (int j = p.box.lo.y; j <= p.box.hi.y; ++j)
                for (int i = p.box.lo.x; i <= p.box.hi.x; ++i)
                    g.at(i, j, k) = p.data[std::size_t(n++)];
    }
    return g;
}

std::vector<std::uint8_t> occupancy_mask(const AMRDataset &ds, int level) {
    Vec3i d = ds.level_dims(level);
    std::vector<std::uint8_t> occ(std::size_t(d.volume()), 0);
    for (const Patch &p : ds.levels[std::size_t(level)].patches)
        for (int k = p.box.lo.z; k <= p.box.hi.z; ++k)
            for (int j = p.box.lo.y; j <= p.box.hi.y; ++j)
                for (int i = p.box.lo.x; i <= p.box.hi.x; ++i)
                    occ[std::size_t((std::int64_t(k) * d.y + j) * d.x + i)] = 1;
    return occ;
}

std::vector<std::uint8_t> redundant_mask(const AMRDataset &ds, int level) {
    if (level < 0 || level >= ds.num_levels - 1)
        throw std::out_of_range("redundant_mask: level out of range");
    Vec3i d = ds.level_dims(level);
    std::vector<std::uint8_t> fine_occ = occupancy_mask(ds, level + 1);
    Vec3i fdm = ds.level_dims(level + 1);
    std::vector<std::uint8_t> mask(std::size_t(d.volume()), 0);
    for (int k = 0; k < d.z; ++k)
        for (int j = 0; j < d.y; ++j)
            for (int i = 0; i < d.x; ++i) {
                bool all = true;
                for (int dk = 0; dk < 2 && all; ++dk)
                    for (int dj = 0; dj < 2 && all; ++dj)
                        for (int di = 0; di < 2 && all; ++di)
                            all = fine_occ[std::size_t(
                                       (std::int64_t(2 * k + dk) * fdm.y + 2 * j + dj) *
                                           fdm.x +
                                       2 * i + di)] != 0;
                mask[std::size_t((std::int64_t(k) * d.y + j) * d.x + i)] = all ? 1 : 0;
            }
    return mask;
}

ScalarGrid uniformize(const AMRDataset &ds) {
    auto bad = validate(ds);
    if (!bad.empty())
        throw std::invalid_argument("uniformize: invalid dataset: " + bad.front());

    Vec3i fd = ds.finest_dims();
    ScalarGrid out(fd);
    for (int l = 0; l < ds.num_levels; ++l) {
        int rep = 1 << (ds.num_levels - 1 - l);
        for (const Patch &p : ds.levels[std::size_t(l)].patches) {
            std::int64_t n = 0;
            for (int k = p.box.lo.z; k <= p.box.hi.z; ++k)
                for (int j = p.box.lo.y; j <= p.box.hi.y; ++j)
                    for (int i = p.box.lo.x; i <= p.box.hi.x; ++i) {
                        double v = p.data[std::size_t(n++)];
                        for (int dk = 0; dk < rep; ++dk)
                            for (int dj = 0; dj < rep; ++dj)
                                for (int di = 0; di < rep; ++di)
                                    out.at(i * rep + di, j * rep + dj, k * rep + dk) = v;
                    }
        }
    }
    return out;
}

} // namespace amrlab
