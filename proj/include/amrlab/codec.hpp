#ifndef AMRLAB_CODEC_HPP
#define AMRLAB_CODEC_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "amrlab/types.hpp"

namespace amrlab {

enum class CodecId : std::uint8_t { LR = 0, Interp = 1 };

enum class EbMode : std::uint8_t { Absolute = 0, Relative = 1 };

/// User-facing error bound. Relative bounds resolve against the value range
/// of the grid being compressed.
struct ErrorBound {
    EbMode mode = EbMode::Absolute;
    double value = 1e-3;

    double resolve(const ScalarGrid &g) const;
};

/// Result of quantizing one residual: either a code (reconstruction =
/// prediction + 2*eb*code) or a verbatim outlier. The reconstruction error
/// never exceeds eb_abs.
struct QuantOutcome {
    bool outlier = false;
    std::int32_t code = 0;
    double reconstructed = 0.0;
};

constexpr std::int32_t kMaxQuantCode = 1 << 15;
constexpr std::int32_t kEscapeSymbol = kMaxQuantCode; // outside the code range

QuantOutcome quantize(double original, double prediction, double eb_abs,
                      std::int32_t max_code = kMaxQuantCode);

/// 3D Lorenzo prediction from the 7 previously reconstructed neighbors,
/// ordered: face (i-1,j,k) (i,j-1,k) (i,j,k-1), edge (i-1,j-1,k) (i-1,j,k-1)
/// (i,j-1,k-1), corner (i-1,j-1,k-1). Missing neighbors are passed as 0.
inline double lorenzo3d(const std::array<double, 7> &n) {
    return n[0] + n[1] + n[2] - n[3] - n[4] - n[5] + n[6];
}

/// Self-describing compressed field; `payload` is the complete serialized
/// byte sequence (the AMRZ file content).
struct CompressedField {
    CodecId codec_id = CodecId::LR;
    EbMode eb_mode = EbMode::Absolute;
    double eb_value = 0.0;
    double eb_abs = 0.0;
    Vec3i dims;
    std::vector<std::uint8_t> payload;
};

constexpr int kLrBlock = 6;

/// Block-based codec: 6x6x6 blocks, per-block Lorenzo or least-squares plane
/// regression, shared Huffman table. Blocks decode independently.
/// `eb_abs_override` > 0 pins the resolved bound (used when a relative bound
/// is resolved against a whole level rather than this grid).
CompressedField compress_lr(const ScalarGrid &grid, const ErrorBound &eb,
                            double eb_abs_override = 0.0);
ScalarGrid decompress_lr(const CompressedField &cf);

Vec3i lr_block_counts(Vec3i dims);
IndexBox lr_block_box(Vec3i dims, std::int64_t block_index);

/// Decodes a single block (by linear index, x fastest) without
/// reconstructing any other block.
std::vector<double> decompress_lr_block(const CompressedField &cf,
                                        std::int64_t block_index);

/// Global codec: verbatim anchors on a power-of-two lattice, then level by
/// level 1D linear interpolation along z, y, x.
CompressedField compress_interp(const ScalarGrid &grid, const ErrorBound &eb);
ScalarGrid decompress_interp(const CompressedField &cf);

int interp_anchor_stride(Vec3i dims);

ScalarGrid decompress(const CompressedField &cf);

double compression_ratio(const ScalarGrid &original, const CompressedField &cf);

void write_amrz(const CompressedField &cf, const std::filesystem::path &path);
CompressedField read_amrz(const std::filesystem::path &path);

/// Parses the payload header into the struct fields (used by read_amrz).
CompressedField parse_amrz(std::vector<std::uint8_t> payload);

} // namespace amrlab

#endif
