#ifndef AMRLAB_MC_TABLES_HPP
#define AMRLAB_MC_TABLES_HPP

#include <cstdint>

namespace amrlab {

extern const int kMcEdgeTable[256];
extern const std::int8_t kMcTriTable[256][16];

// Edge k connects corners kMcEdgeCorners[k][0..1] in the classic ordering.
inline constexpr int kMcEdgeCorners[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

} // namespace amrlab

#endif
