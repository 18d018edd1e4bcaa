// Variable-coefficient Helmholtz forward solver: PML coordinate stretching,
// flux-form second-order FDM assembly and a sparse complex direct
// factorization reusable across right-hand sides.
#pragma once

#include <memory>
#include <vector>

#include "invmed/grid.hpp"

namespace invmed {

// Computational square is [-L, 1+L]^2 with L the PML thickness snapped to
// a whole number of cells so the layer nodes align with the interior grid.
struct PmlConfig {
    double k = 40.0;
    int n = 129;               // interior points per side
    double L_pml = 0.05;       // requested layer thickness

    double h() const { return 1.0 / (n - 1); }
    int n_layer() const;
    double L_actual() const { return n_layer() * h(); }
    int n_total() const { return n + 2 * n_layer(); }
    Grid interior_grid() const { return Grid::unit(n); }
    Grid total_grid() const;
};

// Piecewise stretching coefficient: 1 in (0,1], 1 + ik(t/L)^2 in the left
// layer, 1 + ik((t-1)/L)^2 in the right layer. The positive imaginary part
// makes the layer absorbing for outgoing H0^(1)-type waves.
cplx stretch_coeff(double t, double k, double L_pml);

// Assembled and factorized PML system for one scatterer q. The matrix is
// complex symmetric (A = A^T); Dirichlet rows on the outer boundary are
// identity with couplings dropped.
class HelmholtzSystem {
  public:
    HelmholtzSystem(const RealField& q, const PmlConfig& config);

    const PmlConfig& config() const { return config_; }

    // Solve A u = rhs on the total grid (rhs length n_total^2).
    ComplexField solve_raw(const std::vector<cplx>& rhs) const;

    // u with Delta u + k^2(1+q) u = -k^2 f, restricted to the interior
    // grid. f may live on the interior or the total grid (zero-extended).
    ComplexField solve_source(const ComplexField& f) const;

    cplx matrix_entry(int row, int col) const;  // 0 if absent

  private:
    PmlConfig config_;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

HelmholtzSystem assemble(const RealField& q, const PmlConfig& config);

// One factorization of A(q), one solve per incident field; outputs are the
// scattered fields on the interior [0,1]^2 grid.
std::vector<ComplexField> forward_scatter(const RealField& q,
                                          const std::vector<ComplexField>& incident,
                                          const PmlConfig& config);

ComplexField solve_source(const RealField& q, const ComplexField& f, const PmlConfig& config);

// Instrumentation for the per-objective cost accounting.
struct PmlCounters {
    long factorizations = 0;
    long solves = 0;
};
PmlCounters& pml_counters();

}  // namespace invmed
