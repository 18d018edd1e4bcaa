// Constant-coefficient scattering operator S_hat realized as convolution
// with the outgoing Green kernel -(i/4) H0^(1)(k|x-y|), plus the truncated
// Neumann-series forward solver and contraction diagnostics.
#pragma once

#include <vector>

#include "invmed/grid.hpp"

namespace invmed {

// -(i/4) H0^(1)(k r), r > 0.
cplx green_kernel(double k, double r);

// Precomputed convolution stencil of -k^2 * integral_cell G, including the
// singular self-cell weight (area-equivalent disk closed form). weights are
// stored for offsets (di, dj) in [-(n-1), n-1]^2 but depend only on |offset|.
struct GreenKernel {
    double k = 0.0;
    Grid grid;
    // weight(di, dj), flattened on the (2n-1)^2 offset table.
    std::vector<cplx> weights;

    GreenKernel(double k, const Grid& grid);
    cplx weight(int di, int dj) const {
        const int m = 2 * grid.n - 1;
        return weights[std::size_t(dj + grid.n - 1) * m + (di + grid.n - 1)];
    }
};

// u = S_hat(f): discrete aperiodic convolution of f with the kernel
// weights, done by FFT on a zero-padded 2n x 2n extension.
ComplexField apply_S_hat(const ComplexField& f, const GreenKernel& kernel);

struct NeumannDiagnostics {
    int L = 0;
    std::vector<double> term_norms;  // L2 norm of u^(j), j = 1..L
    bool converged = false;
    double contraction_estimate = 0.0;  // max observed ratio of successive terms
};

// u^(0) = u_inc, u^(j+1) = S_hat(q .* u^(j)); returns the partial sum
// U^(L) = sum_{j=1..L} u^(j). L = 1 is the Born approximation. Divergence
// is reported through the diagnostics, never thrown.
std::pair<ComplexField, NeumannDiagnostics> neumann_forward(const RealField& q,
                                                            const ComplexField& u_inc,
                                                            const GreenKernel& kernel, int L);

// Power-iteration estimate of the L2 operator norm of f -> S_hat(q .* f),
// run on the normal operator B*B. Linear in the scaling of q.
double estimate_contraction(const RealField& q, const GreenKernel& kernel, int iters,
                            unsigned long long seed = 1);

}  // namespace invmed
