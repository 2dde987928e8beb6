#ifndef AMRLAB_ISOSURFACE_HPP
#define AMRLAB_ISOSURFACE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "amrlab/amr.hpp"
#include "amrlab/types.hpp"

namespace amrlab {

/// Vertex-centered field obtained by re-sampling cell data; dims grow by one
/// per axis relative to the cells.
struct VertexGrid {
    Vec3i dims;
    std::vector<double> values;

    std::int64_t index(int i, int j, int k) const {
        return (std::int64_t(k) * dims.y + j) * dims.x + i;
    }
    double at(int i, int j, int k) const { return values[std::size_t(index(i, j, k))]; }
};

/// Vertex value = arithmetic mean of the 1-8 adjacent cells.
VertexGrid resample_to_vertices(const ScalarGrid &grid);

enum class TriKind : std::uint8_t { Regular = 0, Stitch = 1 };

/// Indexed triangle soup with per-triangle provenance. Vertices are physical
/// coordinates (coarse cell size 1.0, level l cells are 2^-l).
struct TriMesh {
    std::vector<Vec3d> vertices;
    std::vector<std::array<std::int32_t, 3>> triangles;
    std::vector<std::uint8_t> tri_level;
    std::vector<TriKind> tri_kind;

    void append(const TriMesh &other);
    std::size_t triangle_count() const { return triangles.size(); }
};

/// One hexahedral cell fed to marching cubes: corner order is the classic
/// table order, (0,0,0) (1,0,0) (1,1,0) (0,1,0) then the +z four.
struct HexCell {
    std::array<Vec3d, 8> pos;
    std::array<double, 8> val;
};

/// Standard 256-entry table marching cubes on one cell. A node is inside iff
/// value > iso (ties outside); edge crossings at t=(iso-v0)/(v1-v0), t=0.5
/// for equal-valued endpoints. Triangles wind outward from the inside
/// region. Degenerate (zero-area) triangles are dropped.
void marching_cubes_cell(const HexCell &cell, double iso, TriMesh &out, int level,
                         TriKind kind);

/// Marching cubes over a full vertex lattice (the re-sampling path).
TriMesh marching_cubes(const VertexGrid &vg, double iso, double cell_size = 1.0,
                       int level = 0);

struct TetCell {
    std::array<Vec3d, 4> pos;
    std::array<double, 4> val;
};

/// 16-case marching tetrahedra; same inside rule and edge interpolation as
/// marching cubes.
void marching_tetrahedra_cell(const TetCell &tet, double iso, TriMesh &out, int level,
                              TriKind kind);
TriMesh marching_tetrahedra(const std::vector<TetCell> &tets, double iso,
                            int level = 0, TriKind kind = TriKind::Stitch);

/// Dual lattice of one level: points at existing cell centers, hex cells
/// wherever all 8 neighboring centers exist.
struct DualLattice {
    Vec3i cell_dims;               // the level's index space
    double cell_size = 1.0;
    std::vector<std::uint8_t> present; // per cell
    std::vector<double> values;        // per cell (original data)

    bool cell_present(int i, int j, int k) const {
        return present[std::size_t((std::int64_t(k) * cell_dims.y + j) * cell_dims.x +
                                   i)] != 0;
    }
    double value(int i, int j, int k) const {
        return values[std::size_t((std::int64_t(k) * cell_dims.y + j) * cell_dims.x +
                                  i)];
    }
    /// Number of complete dual hex cells.
    std::int64_t dual_cell_count() const;
};

DualLattice build_dual(const AMRDataset &ds, int level);

/// Re-sampling + marching cubes per level; coarse cells fully covered by the
/// next finer level are skipped. Cracks at level interfaces are expected.
TriMesh extract_resampled(const AMRDataset &ds, double iso);

enum class GapMode { Padding, Stitch };

/// Dual-cell extraction. Padding keeps coarse dual cells reaching up to one
/// cell into the fine footprint (redundant coarse data). Stitch contours the
/// gap-free dual pair and fills the gap slab with transition cells connecting
/// fine dual boundary vertex groups to their parent coarse dual vertices.
TriMesh extract_dual(const AMRDataset &ds, double iso, GapMode mode);

struct CrackCensus {
    std::int64_t interface_open_edges = 0;
    std::int64_t domain_open_edges = 0;
    double total_open_edge_length = 0.0;
};

struct DomainBox {
    Vec3d lo;
    Vec3d hi;

    double diagonal() const { return (hi - lo).norm(); }
};

/// Welds vertices at 1e-9 * domain diagonal, then counts edges incident to
/// exactly one triangle. Open edges with both endpoints within eps of the
/// domain boundary are domain edges; the rest are interface (crack) edges.
CrackCensus open_edge_census(const TriMesh &mesh, const DomainBox &domain,
                             double eps = 1e-9);

DomainBox dataset_domain(const AMRDataset &ds);

/// ASCII OBJ with one "g level<l>_<kind>" group per (level, kind).
void export_obj(const TriMesh &mesh, const std::filesystem::path &path);

struct Demo1dResult {
    std::vector<double> original;
    std::vector<double> blocked;   // per-block mean, replicated
    std::vector<double> resampled; // 1D cell-to-vertex averaging of blocked
};

/// 1D illustration of block artifacts and how re-sampling smooths them.
Demo1dResult demo_1d(const std::vector<double> &values, int block);

} // namespace amrlab

#endif
