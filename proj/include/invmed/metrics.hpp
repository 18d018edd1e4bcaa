// Reconstruction quality metrics: relative L2 error and SSIM.
#pragma once

#include "invmed/grid.hpp"

namespace invmed {

// ||q_rec - q_true||_L2 / ||q_true||_L2; throws on zero truth.
double relative_error(const RealField& q_rec, const RealField& q_true);

// Mean local SSIM, 11x11 Gaussian window with sigma 1.5, C1 = (0.01 D)^2,
// C2 = (0.03 D)^2, dynamic range D = max(q_true) - min(q_true).
double ssim(const RealField& q_rec, const RealField& q_true);

struct MetricReport {
    double rel_err = 0.0;
    double ssim = 0.0;
    double data_misfit = 0.0;
};

}  // namespace invmed
