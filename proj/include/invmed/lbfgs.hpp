// Limited-memory BFGS with a strong Wolfe line search (two-loop recursion).
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace invmed {

struct LbfgsParams {
    int memory = 10;
    double c1 = 1e-4;  // sufficient decrease
    double c2 = 0.9;   // curvature
    int max_iter = 15;
    int max_linesearch = 20;
    double grad_tol = 1e-12;
};

struct LbfgsResult {
    std::vector<double> x;  // best iterate seen
    double f = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    long n_fev = 0;
    bool degenerate_start = false;  // first line search failed at x0
    std::string stop_reason;
};

// Objective callback: fills grad (same size as x) and returns f.
using LbfgsObjective = std::function<double(const std::vector<double>&, std::vector<double>&)>;

// Called once per accepted iterate.
using LbfgsMonitor =
    std::function<void(int iter, const std::vector<double>& x, double f, double gnorm, long n_fev)>;

LbfgsResult lbfgs_minimize(const LbfgsObjective& objective, std::vector<double> x0,
                           const LbfgsParams& params, const LbfgsMonitor& monitor = nullptr);

}  // namespace invmed
