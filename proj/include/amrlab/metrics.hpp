#ifndef AMRLAB_METRICS_HPP
#define AMRLAB_METRICS_HPP

#include <string>
#include <vector>

#include "amrlab/types.hpp"

namespace amrlab {

/// Peak signal-to-noise ratio in dB; the peak is range(orig), so the call is
/// asymmetric on purpose. +inf for identical data.
double psnr(const ScalarGrid &orig, const ScalarGrid &recon);

/// Volumetric SSIM: sliding window^3 boxes (uniform weights, stride 1,
/// valid positions only), C1=(0.01 L)^2, C2=(0.03 L)^2 with L = range(orig).
double ssim3d(const ScalarGrid &orig, const ScalarGrid &recon, int window = 7);

/// Reverse SSIM, exactly 1 - ssim.
inline double rssim(double ssim) { return 1.0 - ssim; }

/// Mean absolute jump across planes aligned to `block` along each axis; the
/// measurable footprint of block-wise compression artifacts.
double block_discontinuity(const ScalarGrid &g, int block = 6);

struct QualityRow {
    std::string codec;
    std::string eb_mode;
    double eb_value = 0;
    double cr = 0;
    double psnr_db = 0;
    double ssim = 1.0;
    double rssim = 0.0;
    std::string method;
    std::int64_t interface_open_edges = 0;
    std::int64_t domain_open_edges = 0;
    double open_edge_length = 0;
};

struct QualityReport {
    std::vector<QualityRow> rows;

    std::string to_csv() const;
};

QualityRow make_row(const std::string &codec, const std::string &eb_mode,
                    double eb_value, double cr, double psnr_db, double ssim,
                    const std::string &method);

} // namespace amrlab

#endif
