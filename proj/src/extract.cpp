#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "amrlab/isosurface.hpp"
#include "mc_tables.hpp"

namespace amrlab {

namespace {

constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1},
    {0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1},
};

struct LevelView {
    Vec3i dims;
    double h;
    std::vector<std::uint8_t> occ;
    std::vector<double> val;

    bool present(int i, int j, int k) const {
        if (i < 0 || j < 0 || k < 0 || i >= dims.x || j >= dims.y || k >= dims.z)
            return false;
        return occ[std::size_t((std::int64_t(k) * dims.y + j) * dims.x + i)] != 0;
    }
    double value(int i, int j, int k) const {
        return val[std::size_t((std::int64_t(k) * dims.y + j) * dims.x + i)];
    }
};

LevelView make_view(const AMRDataset &ds, int level) {
    LevelView v;
    v.dims = ds.level_dims(level);
    v.h = ds.levels[std::size_t(level)].cell_size;
    v.occ = occupancy_mask(ds, level);
    v.val = rasterize_level(ds, level).values;
    return v;
}

void require_valid(const AMRDataset &ds, const char *who) {
    auto bad = validate(ds);
    if (!bad.empty())
        throw std::invalid_argument(std::string(who) + ": invalid dataset: " + bad.front());
}

// Chebyshev distance to the nearest cell outside the footprint; 0 for cells
// outside it.
std::vector<std::int32_t> footprint_depth(const std::vector<std::uint8_t> &fp, Vec3i d) {
    const std::int32_t inf = std::numeric_limits<std::int32_t>::max() / 2;
    std::vector<std::int32_t> depth(fp.size());
    std::deque<std::int64_t> queue;
    for (std::size_t i = 0; i < fp.size(); ++i) {
        depth[i] = fp[i] ? inf : 0;
        if (!fp[i]) queue.push_back(std::int64_t(i));
    }
    auto idx = [&](int i, int j, int k) {
        return (std::int64_t(k) * d.y + j) * d.x + i;
    };
    while (!queue.empty()) {
        std::int64_t cur = queue.front();
        queue.pop_front();
        int i = int(cur % d.x), j = int((cur / d.x) % d.y), k = int(cur / (std::int64_t(d.x) * d.y));
        for (int dk = -1; dk <= 1; ++dk)
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    int ni = i + di, nj = j + dj, nk = k + dk;
                    if (ni < 0 || nj < 0 || nk < 0 || ni >= d.x || nj >= d.y ||
                        nk >= d.z)
                        continue;
                    std::int64_t n = idx(ni, nj, nk);
                    if (depth[std::size_t(n)] > depth[std::size_t(cur)] + 1) {
                        depth[std::size_t(n)] = depth[std::size_t(cur)] + 1;
                        queue.push_back(n);
                    }
                }
    }
    return depth;
}

} // namespace

TriMesh extract_resampled(const AMRDataset &ds, double iso) {
    require_valid(ds, "extract_resampled");
    TriMesh mesh;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (int l = 0; l < ds.num_levels; ++l) {
        LevelView view = make_view(ds, l);
        std::vector<std::uint8_t> skip; // coarse cells fully covered by l+1
        if (l + 1 < ds.num_levels) skip = redundant_mask(ds, l);

        // vertex averaging over the cells that exist at this level only
        Vec3i vd{view.dims.x + 1, view.dims.y + 1, view.dims.z + 1};
        std::vector<double> vert(std::size_t(vd.volume()), nan);
        for (int k = 0; k <= view.dims.z; ++k)
            for (int j = 0; j <= view.dims.y; ++j)
                for (int i = 0; i <= view.dims.x; ++i) {
                    double sum = 0;
                    int n = 0;
                    for (int dk = -1; dk <= 0; ++dk)
                        for (int dj = -1; dj <= 0; ++dj)
                            for (int di = -1; di <= 0; ++di)
                                if (view.present(i + di, j + dj, k + dk)) {
                                    sum += view.value(i + di, j + dj, k + dk);
                                    ++n;
                                }
                    if (n)
                        vert[std::size_t((std::int64_t(k) * vd.y + j) * vd.x + i)] =
                            sum / n;
                }

        HexCell cell;
        for (int k = 0; k < view.dims.z; ++k)
            for (int j = 0; j < view.dims.y; ++j)
                for (int i = 0; i < view.dims.x; ++i) {
                    if (!view.present(i, j, k)) continue;
                    if (!skip.empty() &&
                        skip[std::size_t((std::int64_t(k) * view.dims.y + j) *
                                             view.dims.x +
                                         i)])
                        continue;
                    for (int c = 0; c < 8; ++c) {
                        int vi = i + kCornerOffset[c][0];
                        int vj = j + kCornerOffset[c][1];
                        int vk = k + kCornerOffset[c][2];
                        cell.pos[std::size_t(c)] = {vi * view.h, vj * view.h,
                                                    vk * view.h};
                        cell.val[std::size_t(c)] =
                            vert[std::size_t((std::int64_t(vk) * vd.y + vj) * vd.x +
                                             vi)];
                    }
                    marching_cubes_cell(cell, iso, mesh, l, TriKind::Regular);
                }
    }
    return mesh;
}

namespace {

// Contours one level's dual lattice; `keep` (optional, per cell) restricts
// which dual cells are used: a dual cell survives if any of its 8 cells has
// keep != 0.
void contour_dual_level(const LevelView &view, double iso,
                        const std::vector<std::uint8_t> &keep, TriMesh &mesh,
                        int level) {
    HexCell cell;
    for (int k = 0; k + 1 < view.dims.z; ++k)
        for (int j = 0; j + 1 < view.dims.y; ++j)
            for (int i = 0; i + 1 < view.dims.x; ++i) {
                bool all_present = true;
                bool keep_any = keep.empty();
                for (int c = 0; c < 8 && all_present; ++c) {
                    int ci = i + kCornerOffset[c][0];
                    int cj = j + kCornerOffset[c][1];
                    int ck = k + kCornerOffset[c][2];
                    all_present = view.present(ci, cj, ck);
                    if (all_present && !keep.empty() &&
                        keep[std::size_t((std::int64_t(ck) * view.dims.y + cj) *
                                             view.dims.x +
                                         ci)])
                        keep_any = true;
                }
                if (!all_present || !keep_any) continue;
                for (int c = 0; c < 8; ++c) {
                    int ci = i + kCornerOffset[c][0];
                    int cj = j + kCornerOffset[c][1];
                    int ck = k + kCornerOffset[c][2];
                    cell.pos[std::size_t(c)] = {(ci + 0.5) * view.h, (cj + 0.5) * view.h,
                                                (ck + 0.5) * view.h};
                    cell.val[std::size_t(c)] = view.value(ci, cj, ck);
                }
                marching_cubes_cell(cell, iso, mesh, level, TriKind::Regular);
            }
}

// Gap filling between the coarse and fine dual lattices of one level pair.
// For every fine-lattice vertex whose eight octants mix fine and coarse
// leaves, the leaf centers form one transition hex: over a flat interface
// these come out as the frustum (2x2 fine dual boundary vertex group joined
// to its parent coarse dual vertices), prism and pyramid cells; repeated
// corners at footprint edges just collapse faces of the same hexes.
void contour_transition(const LevelView &coarse, const LevelView &fine,
                        const std::vector<std::uint8_t> &footprint, double iso,
                        TriMesh &mesh, int fine_level) {
    HexCell cell;
    for (int vz = 1; vz < fine.dims.z; ++vz)
        for (int vy = 1; vy < fine.dims.y; ++vy)
            for (int vx = 1; vx < fine.dims.x; ++vx) {
                int nfine = 0;
                bool usable = true;
                for (int c = 0; c < 8 && usable; ++c) {
                    int fi = vx - 1 + kCornerOffset[c][0];
                    int fj = vy - 1 + kCornerOffset[c][1];
                    int fk = vz - 1 + kCornerOffset[c][2];
                    if (fine.present(fi, fj, fk)) {
                        ++nfine;
                        cell.pos[std::size_t(c)] = {(fi + 0.5) * fine.h,
                                                    (fj + 0.5) * fine.h,
                                                    (fk + 0.5) * fine.h};
                        cell.val[std::size_t(c)] = fine.value(fi, fj, fk);
                    } else {
                        int ci = fi >> 1, cj = fj >> 1, ck = fk >> 1;
                        if (!coarse.present(ci, cj, ck)) {
                            usable = false;
                            break;
                        }
                        cell.pos[std::size_t(c)] = {(ci + 0.5) * coarse.h,
                                                    (cj + 0.5) * coarse.h,
                                                    (ck + 0.5) * coarse.h};
                        cell.val[std::size_t(c)] = coarse.value(ci, cj, ck);
                    }
                }
                (void)footprint;
                if (!usable || nfine == 0 || nfine == 8) continue;
                marching_cubes_cell(cell, iso, mesh, fine_level, TriKind::Stitch);
            }
}

} // namespace

TriMesh extract_dual(const AMRDataset &ds, double iso, GapMode mode) {
    require_valid(ds, "extract_dual");
    TriMesh mesh;

    std::vector<LevelView> views;
    for (int l = 0; l < ds.num_levels; ++l) views.push_back(make_view(ds, l));

    if (mode == GapMode::Stitch) {
        // stitch pairs levels through their shared footprint, which only
        // works when fine coverage aligns with whole coarse cells
        for (int l = 0; l + 1 < ds.num_levels; ++l) {
            std::vector<std::uint8_t> fp = redundant_mask(ds, l);
            const LevelView &fine = views[std::size_t(l + 1)];
            Vec3i cd = views[std::size_t(l)].dims;
            for (int k = 0; k < fine.dims.z; ++k)
                for (int j = 0; j < fine.dims.y; ++j)
                    for (int i = 0; i < fine.dims.x; ++i)
                        if (fine.present(i, j, k) &&
                            !fp[std::size_t(
                                (std::int64_t(k >> 1) * cd.y + (j >> 1)) * cd.x +
                                (i >> 1))])
                            throw std::invalid_argument(
                                "extract_dual: stitch mode requires fine coverage "
                                "aligned to whole coarse cells");
        }
    }

    for (int l = 0; l < ds.num_levels; ++l) {
        std::vector<std::uint8_t> keep;
        if (l + 1 < ds.num_levels) {
            std::vector<std::uint8_t> fp = redundant_mask(ds, l);
            keep.resize(fp.size());
            if (mode == GapMode::Padding) {
                // keep dual cells with a point outside the footprint, plus
                // those reaching one coarse cell into it (redundant data)
                std::vector<std::int32_t> depth = footprint_depth(fp, views[std::size_t(l)].dims);
                for (std::size_t i = 0; i < fp.size(); ++i)
                    keep[i] = depth[i] <= 1 ? 1 : 0;
            } else {
                // gap-exhibiting dual: only cells fully outside the footprint
                for (std::size_t i = 0; i < fp.size(); ++i) keep[i] = fp[i] ? 0 : 1;
            }
        }
        if (mode == GapMode::Stitch && !keep.empty()) {
            // a dual cell may not touch the footprint at all; single mixed
            // corners are handled by the transition layer
            LevelView masked = views[std::size_t(l)];
            for (std::size_t i = 0; i < keep.size(); ++i)
                if (!keep[i]) masked.occ[i] = 0;
            contour_dual_level(masked, iso, {}, mesh, l);
        } else {
            contour_dual_level(views[std::size_t(l)], iso, keep, mesh, l);
        }
    }

    if (mode == GapMode::Stitch) {
        for (int l = 0; l + 1 < ds.num_levels; ++l) {
            std::vector<std::uint8_t> fp = redundant_mask(ds, l);
            contour_transition(views[std::size_t(l)], views[std::size_t(l + 1)], fp, iso,
                               mesh, l + 1);
        }
    }
    return mesh;
}

} // namespace amrlab
