#ifndef AMRLAB_CONTAINER_HPP
#define AMRLAB_CONTAINER_HPP

#include <filesystem>

#include "amrlab/amr.hpp"

namespace amrlab {

/// On-disk AMR container: a directory holding manifest.json and data.bin.
/// Patch payloads are 64-bit little-endian reals, x fastest, 8-byte aligned.
/// Roundtrips are bit-exact.
void write_container(const AMRDataset &ds, const std::filesystem::path &dir);
AMRDataset read_container(const std::filesystem::path &dir);

} // namespace amrlab

#endif
