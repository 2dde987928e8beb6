#ifndef AMRLAB_TYPES_HPP
#define AMRLAB_TYPES_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace amrlab {

struct Vec3i {
    int x = 0, y = 0, z = 0;

    int &operator[](int a) { return a == 0 ? x : (a == 1 ? y : z); }
    int operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }

    bool operator==(const Vec3i &o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator!=(const Vec3i &o) const { return !(*this == o); }

    Vec3i operator+(const Vec3i &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3i operator-(const Vec3i &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3i operator*(int s) const { return {x * s, y * s, z * s}; }

    std::int64_t volume() const {
        return std::int64_t(x) * std::int64_t(y) * std::int64_t(z);
    }
};

struct Vec3d {
    double x = 0, y = 0, z = 0;

    double &operator[](int a) { return a == 0 ? x : (a == 1 ? y : z); }
    double operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }

    Vec3d operator+(const Vec3d &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3d operator-(const Vec3d &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3d operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3d &o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3d cross(const Vec3d &o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// Axis-aligned box of cell indices, both bounds inclusive.
struct IndexBox {
    Vec3i lo;
    Vec3i hi;

    bool valid() const { return lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z; }

    Vec3i extent() const { return {hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1}; }

    std::int64_t volume() const { return extent().volume(); }

    bool contains(const Vec3i &p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
               p.z >= lo.z && p.z <= hi.z;
    }

    bool intersects(const IndexBox &o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y &&
               lo.z <= o.hi.z && o.lo.z <= hi.z;
    }

    // Local flat index of a contained cell, x fastest.
    std::int64_t offset_of(const Vec3i &p) const {
        Vec3i e = extent();
        return (std::int64_t(p.z - lo.z) * e.y + (p.y - lo.y)) * e.x + (p.x - lo.x);
    }
};

/// Uniform cell-centered 3D scalar field, x-fastest storage.
struct ScalarGrid {
    Vec3i dims;
    std::vector<double> values;

    ScalarGrid() = default;
    explicit ScalarGrid(Vec3i d, double fill = 0.0)
        : dims(d), values(std::size_t(d.volume()), fill) {
        if (d.x < 1 || d.y < 1 || d.z < 1)
            throw std::invalid_argument("ScalarGrid: dims must be positive");
    }

    std::int64_t size() const { return dims.volume(); }

    std::int64_t index(int i, int j, int k) const {
        return (std::int64_t(k) * dims.y + j) * dims.x + i;
    }

    double at(int i, int j, int k) const { return values[std::size_t(index(i, j, k))]; }
    double &at(int i, int j, int k) { return values[std::size_t(index(i, j, k))]; }

    bool in_bounds(int i, int j, int k) const {
        return i >= 0 && i < dims.x && j >= 0 && j < dims.y && k >= 0 && k < dims.z;
    }

    std::pair<double, double> min_max() const {
        double lo = values.empty() ? 0.0 : values[0];
        double hi = lo;
        for (double v : values) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        return {lo, hi};
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

} // namespace amrlab

#endif
