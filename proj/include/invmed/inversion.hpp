// Data-misfit objective, adjoint-state gradient and the L-BFGS driver.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invmed/grid.hpp"
#include "invmed/measurement.hpp"
#include "invmed/pml.hpp"

namespace invmed {

struct InversionConfig {
    int max_iter = 15;
    int max_linesearch = 20;
    int lbfgs_memory = 10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    double k = 40.0;
    int n = 129;
    double tikhonov = 0.0;  // disabled by default, hook only
};

struct Objective {
    double J = 0.0;
    RealField grad;
};

// J = sum_j 1/2 ||T u1_j - d_j||^2 with u1_j = S(q)(q u^i_j); the gradient
// is sum_j Re(u2_j (u^i_j + u1_j)) with u2_j = S(q)(conj(T*(T u1_j - d_j))).
// One factorization of A(q) is shared across all 2M solves.
Objective objective_and_gradient(const RealField& q, const MeasurementSet& data,
                                 const InversionConfig& config);

struct IterationRecord {
    int iter = 0;
    double J = 0.0;
    double grad_norm = 0.0;
    double rel_err = -1.0;  // -1 when no truth provided
    long n_fev = 0;
    double elapsed_s = 0.0;
};

struct InversionState {
    RealField q;  // best-J iterate
    double J = 0.0;
    std::vector<IterationRecord> history;
    long n_fev = 0;
    std::string stop_reason;
    bool degenerate_start = false;
};

InversionState lbfgs_minimize(const MeasurementSet& data, const InversionConfig& config,
                              std::optional<RealField> q0 = std::nullopt,
                              std::optional<RealField> truth = std::nullopt);

// max over random supported pairs (f, g) of
// |<S(q)f, g> - <f, conj(S(q) conj(g))>| / (||f|| ||g||).
double check_adjoint_identity(const RealField& q, const PmlConfig& config, int pairs,
                              unsigned long long seed);

void write_iteration_log(const std::string& path, const std::vector<IterationRecord>& history);

}  // namespace invmed
