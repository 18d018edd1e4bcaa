#include "invmed/inversion.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include "invmed/lbfgs.hpp"
#include "invmed/metrics.hpp"

namespace invmed {

Objective objective_and_gradient(const RealField& q, const MeasurementSet& data,
                                 const InversionConfig& config) {
    const Grid g = Grid::unit(config.n);
    if (q.grid != g) throw std::invalid_argument("objective: q grid does not match config");
    if (data.k != config.k)
        throw std::invalid_argument("objective: measurement wavenumber differs from config");

    PmlConfig pml;
    pml.k = config.k;
    pml.n = config.n;
    const HelmholtzSystem sys(q, pml);

    Objective out;
    out.grad = RealField(g);
    const int M = data.layout.M();
    for (int j = 0; j < M; ++j) {
        const ComplexField ui = plane_wave(g, config.k, data.layout.source_angles[j]);
        ComplexField qui(g);
        for (std::size_t i = 0; i < qui.size(); ++i) qui.values[i] = q.values[i] * ui.values[i];
        const ComplexField u1 = sys.solve_source(qui);

        std::vector<cplx> r = trace(u1, data.layout);
        const std::vector<cplx> d = data.row(j);
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] -= d[i];
            out.J += 0.5 * std::norm(r[i]);
        }

        ComplexField lam = trace_adjoint(r, data.layout, g);
        for (auto& v : lam.values) v = std::conj(v);
        const ComplexField u2 = sys.solve_source(lam);

        for (std::size_t i = 0; i < out.grad.size(); ++i)
            out.grad.values[i] += (u2.values[i] * (ui.values[i] + u1.values[i])).real();
    }
    if (config.tikhonov > 0.0) {
        for (std::size_t i = 0; i < q.values.size(); ++i) {
            out.J += 0.5 * config.tikhonov * q.values[i] * q.values[i];
            out.grad.values[i] += config.tikhonov * q.values[i];
        }
    }
    return out;
}

InversionState lbfgs_minimize(const MeasurementSet& data, const InversionConfig& config,
                              std::optional<RealField> q0, std::optional<RealField> truth) {
    const Grid g = Grid::unit(config.n);
    RealField start = q0 ? *q0 : RealField(g);
    if (start.grid != g) throw std::invalid_argument("lbfgs_minimize: q0 grid mismatch");

    InversionState state;
    const auto t0 = std::chrono::steady_clock::now();

    LbfgsObjective fn = [&](const std::vector<double>& x, std::vector<double>& grad) {
        RealField qf(g, x);
        Objective o = objective_and_gradient(qf, data, config);
        grad = std::move(o.grad.values);
        return o.J;
    };
    LbfgsMonitor monitor = [&](int iter, const std::vector<double>& x, double f, double gnorm,
                               long n_fev) {
        IterationRecord rec;
        rec.iter = iter;
        rec.J = f;
        rec.grad_norm = gnorm;
        rec.n_fev = n_fev;
        rec.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (truth) rec.rel_err = relative_error(RealField(g, x), *truth);
        state.history.push_back(rec);
    };

    LbfgsParams params;
    params.memory = config.lbfgs_memory;
    params.c1 = config.wolfe_c1;
    params.c2 = config.wolfe_c2;
    params.max_iter = config.max_iter;
    params.max_linesearch = config.max_linesearch;

    LbfgsResult res = lbfgs_minimize(fn, std::move(start.values), params, monitor);
    state.q = RealField(g, std::move(res.x));
    state.J = res.f;
    state.n_fev = res.n_fev;
    state.stop_reason = res.stop_reason;
    state.degenerate_start = res.degenerate_start;
    return state;
}

double check_adjoint_identity(const RealField& q, const PmlConfig& config, int pairs,
                              unsigned long long seed) {
    const HelmholtzSystem sys(q, config);
    const Grid g = config.interior_grid();
    std::mt19937_64 rng(seed);
    auto rand_field = [&]() {
        ComplexField f(g);
        for (auto& v : f.values)
            v = cplx(double(rng() >> 11) * 0x1.0p-53 - 0.5, double(rng() >> 11) * 0x1.0p-53 - 0.5);
        return f;
    };
    auto hdot = [](const ComplexField& a, const ComplexField& b) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * std::conj(b.values[i]);
        return s;
    };

    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const ComplexField f = rand_field();
        const ComplexField gg = rand_field();
        const ComplexField sf = sys.solve_source(f);
        ComplexField cg(g);
        for (std::size_t i = 0; i < cg.size(); ++i) cg.values[i] = std::conj(gg.values[i]);
        ComplexField scg = sys.solve_source(cg);
        for (auto& v : scg.values) v = std::conj(v);
        const double nf = std::sqrt(std::abs(hdot(f, f)));
        const double ng = std::sqrt(std::abs(hdot(gg, gg)));
        worst = std::max(worst, std::abs(hdot(sf, gg) - hdot(f, scg)) / (nf * ng));
    }
    return worst;
}

void write_iteration_log(const std::string& path, const std::vector<IterationRecord>& history) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "iter,J,grad_norm,rel_err,n_fev,elapsed_s\n";
    os.precision(17);
    for (const auto& r : history)
        os << r.iter << ',' << r.J << ',' << r.grad_norm << ',' << r.rel_err << ',' << r.n_fev
           << ',' << r.elapsed_s << '\n';
}

}  // namespace invmed
