#include "amrlab/isosurface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "mc_tables.hpp"

namespace amrlab {

// Corner c sits at offset kCornerOffset[c] of the unit cube, matching the
// lookup tables' corner numbering (ring 0-1-2-3, then the opposite ring).
constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1},
    {0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1},
};

VertexGrid resample_to_vertices(const ScalarGrid &grid) {
    if (grid.size() == 0) throw std::invalid_argument("resample: empty grid");
    Vec3i cd = grid.dims;
    VertexGrid vg;
    vg.dims = {cd.x + 1, cd.y + 1, cd.z + 1};
    vg.values.resize(std::size_t(vg.dims.volume()));
    for (int k = 0; k <= cd.z; ++k)
        for (int j = 0; j <= cd.y; ++j)
            for (int i = 0; i <= cd.x; ++i) {
                double sum = 0;
                int n = 0;
                for (int dk = -1; dk <= 0; ++dk)
                    for (int dj = -1; dj <= 0; ++dj)
                        for (int di = -1; di <= 0; ++di) {
                            int ci = i + di, cj = j + dj, ck = k + dk;
                            if (grid.in_bounds(ci, cj, ck)) {
                                sum += grid.at(ci, cj, ck);
                                ++n;
                            }
                        }
                vg.values[std::size_t(vg.index(i, j, k))] = sum / n;
            }
    return vg;
}

void TriMesh::append(const TriMesh &other) {
    std::int32_t base = std::int32_t(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    for (const auto &t : other.triangles)
        triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    tri_level.insert(tri_level.end(), other.tri_level.begin(), other.tri_level.end());
    tri_kind.insert(tri_kind.end(), other.tri_kind.begin(), other.tri_kind.end());
}

namespace {

Vec3d edge_point(const HexCell &cell, int corner_a, int corner_b, double iso) {
    double va = cell.val[std::size_t(corner_a)];
    double vb = cell.val[std::size_t(corner_b)];
    double t = (va == vb) ? 0.5 : (iso - va) / (vb - va);
    return cell.pos[std::size_t(corner_a)] +
           (cell.pos[std::size_t(corner_b)] - cell.pos[std::size_t(corner_a)]) * t;
}

void emit_triangle(TriMesh &out, const Vec3d &a, const Vec3d &b, const Vec3d &c,
                   int level, TriKind kind) {
    Vec3d n = (b - a).cross(c - a);
    if (0.5 * n.norm() <= 1e-12) return; // degenerate
    std::int32_t base = std::int32_t(out.vertices.size());
    out.vertices.push_back(a);
    out.vertices.push_back(b);
    out.vertices.push_back(c);
    out.triangles.push_back({base, base + 1, base + 2});
    out.tri_level.push_back(std::uint8_t(level));
    out.tri_kind.push_back(kind);
}

} // namespace

void marching_cubes_cell(const HexCell &cell, double iso, TriMesh &out, int level,
                         TriKind kind) {
    // bit set for nodes at or below iso, so ties land outside
    int ci = 0;
    for (int c = 0; c < 8; ++c)
        if (!(cell.val[std::size_t(c)] > iso)) ci |= 1 << c;
    int edges = kMcEdgeTable[ci];
    if (edges == 0) return;

    Vec3d ev[12];
    for (int e = 0; e < 12; ++e)
        if (edges & (1 << e))
            ev[e] = edge_point(cell, kMcEdgeCorners[e][0], kMcEdgeCorners[e][1], iso);

    for (const std::int8_t *t = kMcTriTable[ci]; *t != -1; t += 3)
        emit_triangle(out, ev[t[0]], ev[t[1]], ev[t[2]], level, kind);
}

TriMesh marching_cubes(const VertexGrid &vg, double iso, double cell_size, int level) {
    TriMesh mesh;
    HexCell cell;
    for (int k = 0; k + 1 < vg.dims.z; ++k)
        for (int j = 0; j + 1 < vg.dims.y; ++j)
            for (int i = 0; i + 1 < vg.dims.x; ++i) {
                for (int c = 0; c < 8; ++c) {
                    int vi = i + kCornerOffset[c][0];
                    int vj = j + kCornerOffset[c][1];
                    int vk = k + kCornerOffset[c][2];
                    cell.pos[std::size_t(c)] = {vi * cell_size, vj * cell_size,
                                                vk * cell_size};
                    cell.val[std::size_t(c)] = vg.at(vi, vj, vk);
                }
                marching_cubes_cell(cell, iso, mesh, level, TriKind::Regular);
            }
    return mesh;
}

void marching_tetrahedra_cell(const TetCell &tet, double iso, TriMesh &out, int level,
                              TriKind kind) {
    bool in[4];
    int ninside = 0;
    for (int c = 0; c < 4; ++c) {
        in[c] = tet.val[std::size_t(c)] > iso;
        ninside += in[c];
    }
    if (ninside == 0 || ninside == 4) return;

    auto cross_pt = [&](int a, int b) {
        double va = tet.val[std::size_t(a)], vb = tet.val[std::size_t(b)];
        double t = (va == vb) ? 0.5 : (iso - va) / (vb - va);
        return tet.pos[std::size_t(a)] + (tet.pos[std::size_t(b)] - tet.pos[std::size_t(a)]) * t;
    };
    // orient so the normal points from the inside region toward the outside
    auto emit_oriented = [&](Vec3d a, Vec3d b, Vec3d c, const Vec3d &inside_ref) {
        Vec3d n = (b - a).cross(c - a);
        Vec3d centroid = (a + b + c) * (1.0 / 3.0);
        if (n.dot(inside_ref - centroid) > 0) std::swap(b, c);
        emit_triangle(out, a, b, c, level, kind);
    };

    if (ninside == 1 || ninside == 3) {
        int lone = -1;
        for (int c = 0; c < 4; ++c)
            if (in[c] == (ninside == 1)) lone = c;
        int others[3], n = 0;
        for (int c = 0; c < 4; ++c)
            if (c != lone) others[n++] = c;
        Vec3d p0 = cross_pt(lone, others[0]);
        Vec3d p1 = cross_pt(lone, others[1]);
        Vec3d p2 = cross_pt(lone, others[2]);
        Vec3d inside_ref =
            ninside == 1 ? tet.pos[std::size_t(lone)] : tet.pos[std::size_t(others[0])];
        emit_oriented(p0, p1, p2, inside_ref);
    } else {
        int ins[2], outs[2], ni = 0, no = 0;
        for (int c = 0; c < 4; ++c)
            (in[c] ? ins[ni++] : outs[no++]) = c;
        // quad across the tet, split into two triangles
        Vec3d q00 = cross_pt(ins[0], outs[0]);
        Vec3d q01 = cross_pt(ins[0], outs[1]);
        Vec3d q11 = cross_pt(ins[1], outs[1]);
        Vec3d q10 = cross_pt(ins[1], outs[0]);
        Vec3d inside_ref = tet.pos[std::size_t(ins[0])];
        emit_oriented(q00, q01, q11, inside_ref);
        emit_oriented(q00, q11, q10, inside_ref);
    }
}

TriMesh marching_tetrahedra(const std::vector<TetCell> &tets, double iso, int level,
                            TriKind kind) {
    TriMesh mesh;
    for (const TetCell &t : tets) marching_tetrahedra_cell(t, iso, mesh, level, kind);
    return mesh;
}

DualLattice build_dual(const AMRDataset &ds, int level) {
    DualLattice dl;
    dl.cell_dims = ds.level_dims(level);
    dl.cell_size = ds.levels[std::size_t(level)].cell_size;
    dl.present = occupancy_mask(ds, level);
    dl.values = rasterize_level(ds, level).values;
    return dl;
}

std::int64_t DualLattice::dual_cell_count() const {
    std::int64_t n = 0;
    for (int k = 0; k + 1 < cell_dims.z; ++k)
        for (int j = 0; j + 1 < cell_dims.y; ++j)
            for (int i = 0; i + 1 < cell_dims.x; ++i) {
                bool all = true;
                for (int c = 0; c < 8 && all; ++c)
                    all = cell_present(i + kCornerOffset[c][0], j + kCornerOffset[c][1],
                                       k + kCornerOffset[c][2]);
                n += all;
            }
    return n;
}

DomainBox dataset_domain(const AMRDataset &ds) {
    return {{0, 0, 0},
            {double(ds.coarse_dims.x), double(ds.coarse_dims.y),
             double(ds.coarse_dims.z)}};
}

namespace {

struct Welder {
    double tol;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> bins;
    std::vector<Vec3d> reps;

    explicit Welder(double t) : tol(t > 0 ? t : 1e-300) {}

    static std::uint64_t bin_key(std::int64_t a, std::int64_t b, std::int64_t c) {
        std::uint64_t h = std::uint64_t(a) * 0x9E3779B97F4A7C15ULL;
        h ^= std::uint64_t(b) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h ^= std::uint64_t(c) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return h;
    }

    std::int32_t id(const Vec3d &p) {
        std::int64_t bx = std::int64_t(std::floor(p.x / tol));
        std::int64_t by = std::int64_t(std::floor(p.y / tol));
        std::int64_t bz = std::int64_t(std::floor(p.z / tol));
        for (std::int64_t dz = -1; dz <= 1; ++dz)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    auto it = bins.find(bin_key(bx + dx, by + dy, bz + dz));
                    if (it == bins.end()) continue;
                    for (std::int32_t cand : it->second) {
                        Vec3d d = reps[std::size_t(cand)] - p;
                        if (std::abs(d.x) <= tol && std::abs(d.y) <= tol &&
                            std::abs(d.z) <= tol)
                            return cand;
                    }
                }
        std::int32_t nid = std::int32_t(reps.size());
        reps.push_back(p);
        bins[bin_key(bx, by, bz)].push_back(nid);
        return nid;
    }
};

} // namespace

CrackCensus open_edge_census(const TriMesh &mesh, const DomainBox &domain, double eps) {
    CrackCensus census;
    double tol = 1e-9 * domain.diagonal();
    Welder weld(tol);

    std::vector<std::int32_t> vid(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        vid[i] = weld.id(mesh.vertices[i]);

    std::unordered_map<std::uint64_t, int> edge_count;
    for (const auto &t : mesh.triangles) {
        std::int32_t w[3] = {vid[std::size_t(t[0])], vid[std::size_t(t[1])],
                             vid[std::size_t(t[2])]};
        for (int e = 0; e < 3; ++e) {
            std::int32_t a = w[e], b = w[(e + 1) % 3];
            if (a == b) continue; // collapsed edge
            std::uint64_t key = (std::uint64_t(std::uint32_t(std::min(a, b))) << 32) |
                                std::uint32_t(std::max(a, b));
            ++edge_count[key];
        }
    }

    auto on_boundary = [&](const Vec3d &p) {
        double d = std::min({p.x - domain.lo.x, domain.hi.x - p.x, p.y - domain.lo.y,
                             domain.hi.y - p.y, p.z - domain.lo.z, domain.hi.z - p.z});
        return std::abs(d) <= eps;
    };

    for (const auto &[key, count] : edge_count) {
        if (count != 1) continue;
        Vec3d pa = weld.reps[std::size_t(key >> 32)];
        Vec3d pb = weld.reps[std::size_t(key & 0xFFFFFFFFu)];
        if (on_boundary(pa) && on_boundary(pb))
            ++census.domain_open_edges;
        else
            ++census.interface_open_edges;
        census.total_open_edge_length += (pa - pb).norm();
    }
    return census;
}

void export_obj(const TriMesh &mesh, const std::filesystem::path &path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("export_obj: cannot open " + path.string());
    char buf[128];
    for (const Vec3d &v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        f << buf;
    }
    // group triangles by (level, kind), stable
    std::vector<std::size_t> order(mesh.triangles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mesh.tri_level[a] != mesh.tri_level[b])
            return mesh.tri_level[a] < mesh.tri_level[b];
        return mesh.tri_kind[a] < mesh.tri_kind[b];
    });
    int cur_level = -1;
    int cur_kind = -1;
    for (std::size_t i : order) {
        if (int(mesh.tri_level[i]) != cur_level || int(mesh.tri_kind[i]) != cur_kind) {
            cur_level = mesh.tri_level[i];
            cur_kind = int(mesh.tri_kind[i]);
            f << "g level" << cur_level << '_'
              << (mesh.tri_kind[i] == TriKind::Stitch ? "stitch" : "regular") << '\n';
        }
        const auto &t = mesh.triangles[i];
        f << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
}

Demo1dResult demo_1d(const std::vector<double> &values, int block) {
    if (block < 1) throw std::invalid_argument("demo_1d: block must be >= 1");
    if (values.empty()) throw std::invalid_argument("demo_1d: empty input");

    Demo1dResult r;
    r.original = values;
    r.blocked.resize(values.size());
    for (std::size_t b0 = 0; b0 < values.size(); b0 += std::size_t(block)) {
        std::size_t b1 = std::min(values.size(), b0 + std::size_t(block));
        double mean = 0;
        for (std::size_t i = b0; i < b1; ++i) mean += values[i];
        mean /= double(b1 - b0);
        for (std::size_t i = b0; i < b1; ++i) r.blocked[i] = mean;
    }
    r.resampled.resize(values.size() + 1);
    r.resampled.front() = r.blocked.front();
    r.resampled.back() = r.blocked.back();
    for (std::size_t i = 1; i < values.size(); ++i)
        r.resampled[i] = 0.5 * (r.blocked[i - 1] + r.blocked[i]);
    return r;
}

} // namespace amrlab
