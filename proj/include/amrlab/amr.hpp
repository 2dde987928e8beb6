#ifndef AMRLAB_AMR_HPP
#define AMRLAB_AMR_HPP

#include <string>
#include <vector>

#include "amrlab/types.hpp"

namespace amrlab {

/// One rectangular block of cell data inside a level's index space.
struct Patch {
    IndexBox box;
    std::vector<double> data; // box.volume() values, x fastest

    double at(const Vec3i &p) const { return data[std::size_t(box.offset_of(p))]; }
};

/// One refinement level: a union of disjoint patches.
/// Level 0 is the coarsest; level l has cell size 2^-l and index space
/// 2^l times the coarse dims.
struct AMRLevel {
    int level_index = 0;
    double cell_size = 1.0;
    std::vector<Patch> patches;

    std::int64_t covered_cells() const {
        std::int64_t n = 0;
        for (const auto &p : patches) n += p.box.volume();
        return n;
    }
};

/// Patch-based AMR hierarchy with refinement ratio 2. The coarse level keeps
/// data underneath fine patches (patch-based redundancy).
struct AMRDataset {
    Vec3i coarse_dims;
    int num_levels = 1;
    int refinement_ratio = 2;
    std::vector<AMRLevel> levels;

    Vec3i level_dims(int level) const {
        int s = 1 << level;
        return {coarse_dims.x * s, coarse_dims.y * s, coarse_dims.z * s};
    }
    Vec3i finest_dims() const { return level_dims(num_levels - 1); }

    /// Fraction of the level's index space covered by patches (Table-1 style
    /// per-level data density).
    double level_density(int level) const {
        return double(levels[std::size_t(level)].covered_cells()) /
               double(level_dims(level).volume());
    }
};

enum class FieldKind { Smooth, Irregular };

/// Returns violations of the AMRDataset invariants; empty means valid.
std::vector<std::string> validate(const AMRDataset &ds);

/// Deterministic synthetic field. Smooth: modulated trig product on the unit
/// cube. Irregular: 4-octave value noise pushed through exp(3v) for a
/// density-like skew. Same (kind, dims, seed) always yields identical bits.
ScalarGrid generate_field(FieldKind kind, Vec3i dims, std::uint64_t seed);

/// Builds a two-level dataset from a fine grid: the coarse level is the 2x
/// block mean, cells whose coarse gradient norm exceeds theta are tagged,
/// tags are dilated to whole tile^3 coarse tiles, and fine patches carry the
/// original fine data over tagged tiles. Requires fine dims divisible by
/// 2*tile.
AMRDataset build_amr(const ScalarGrid &fine, double theta, int tile = 8);

/// Flattens the hierarchy to the finest index space: coarse data replicated
/// piecewise-constant, fine patches overwriting their footprint.
ScalarGrid uniformize(const AMRDataset &ds);

/// True where a cell of `level` is fully covered by level+1 patches.
std::vector<std::uint8_t> redundant_mask(const AMRDataset &ds, int level);

// Occupancy of a level's patch union over its index space.
std::vector<std::uint8_t> occupancy_mask(const AMRDataset &ds, int level);

/// Rasterizes one level's patches onto its full index space; uncovered cells
/// get `fill`.
ScalarGrid rasterize_level(const AMRDataset &ds, int level, double fill = 0.0);

} // namespace amrlab

#endif
