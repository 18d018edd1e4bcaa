#include "invmed/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace invmed {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct Pair {
    std::vector<double> s, y;
    double rho;
};

}  // namespace

LbfgsResult lbfgs_minimize(const LbfgsObjective& objective, std::vector<double> x0,
                           const LbfgsParams& p, const LbfgsMonitor& monitor) {
    const std::size_t dim = x0.size();
    LbfgsResult res;

    std::vector<double> x = std::move(x0);
    std::vector<double> g(dim), g_new(dim), x_new(dim), d(dim);
    long n_fev = 0;

    auto eval = [&](const std::vector<double>& xx, std::vector<double>& gg) {
        ++n_fev;
        return objective(xx, gg);
    };

    double f = eval(x, g);
    double best_f = f;
    res.x = x;
    res.f = f;
    res.grad_norm = norm2(g);
    if (monitor) monitor(0, x, f, res.grad_norm, n_fev);

    std::deque<Pair> mem;
    int iter = 0;
    while (true) {
        const double gnorm = norm2(g);
        if (gnorm <= p.grad_tol) {
            res.stop_reason = "gradient tolerance reached";
            break;
        }
        if (iter >= p.max_iter) {
            res.stop_reason = "maximum iterations reached";
            break;
        }

        // two-loop recursion
        d = g;
        std::vector<double> alpha(mem.size());
        for (int i = int(mem.size()) - 1; i >= 0; --i) {
            alpha[i] = mem[i].rho * dot(mem[i].s, d);
            for (std::size_t j = 0; j < dim; ++j) d[j] -= alpha[i] * mem[i].y[j];
        }
        if (!mem.empty()) {
            const double gamma =
                dot(mem.back().s, mem.back().y) / dot(mem.back().y, mem.back().y);
            for (auto& v : d) v *= gamma;
        }
        for (std::size_t i = 0; i < mem.size(); ++i) {
            const double beta = mem[i].rho * dot(mem[i].y, d);
            for (std::size_t j = 0; j < dim; ++j) d[j] += (alpha[i] - beta) * mem[i].s[j];
        }
        for (auto& v : d) v = -v;

        double dg0 = dot(d, g);
        if (dg0 >= 0.0) {  // not a descent direction, restart from steepest descent
            d = g;
            for (auto& v : d) v = -v;
            dg0 = -gnorm * gnorm;
            mem.clear();
        }

        // strong Wolfe line search: bracketing stage then bisection zoom,
        // sharing a single evaluation budget of max_linesearch trials
        const double f0 = f;
        int budget = p.max_linesearch;
        double accepted_step = -1.0, f_acc = f0;

        auto phi = [&](double a, double& fa, double& dga) {
            for (std::size_t j = 0; j < dim; ++j) x_new[j] = x[j] + a * d[j];
            fa = eval(x_new, g_new);
            dga = dot(d, g_new);
            --budget;
        };
        auto zoom = [&](double lo, double hi, double f_lo) {
            while (budget > 0 && std::abs(hi - lo) > 1e-18) {
                const double a = 0.5 * (lo + hi);
                double fa, dga;
                phi(a, fa, dga);
                if (fa > f0 + p.c1 * a * dg0 || fa >= f_lo) {
                    hi = a;
                } else {
                    if (std::abs(dga) <= -p.c2 * dg0) {
                        accepted_step = a;
                        f_acc = fa;
                        return;
                    }
                    if (dga * (hi - lo) >= 0.0) hi = lo;
                    lo = a;
                    f_lo = fa;
                }
            }
        };

        double a = mem.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
        double a_prev = 0.0, f_prev = f0;
        for (int t = 0; budget > 0; ++t) {
            double fa, dga;
            phi(a, fa, dga);
            if (fa > f0 + p.c1 * a * dg0 || (t > 0 && fa >= f_prev)) {
                zoom(a_prev, a, f_prev);
                break;
            }
            if (std::abs(dga) <= -p.c2 * dg0) {
                accepted_step = a;
                f_acc = fa;
                break;
            }
            if (dga >= 0.0) {
                zoom(a, a_prev, fa);
                break;
            }
            a_prev = a;
            f_prev = fa;
            a *= 2.0;
        }

        if (accepted_step < 0.0) {
            if (iter == 0) res.degenerate_start = true;
            res.stop_reason = "line search exceeded maximum trials";
            break;
        }
        // x_new/g_new may belong to a later rejected trial; re-evaluate only
        // if they drifted from the accepted step
        for (std::size_t j = 0; j < dim; ++j) {
            if (x_new[j] != x[j] + accepted_step * d[j]) {
                double dga_unused;
                phi(accepted_step, f_acc, dga_unused);  // refresh x_new/g_new
                break;
            }
        }

        Pair pr;
        pr.s.resize(dim);
        pr.y.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            pr.s[j] = x_new[j] - x[j];
            pr.y[j] = g_new[j] - g[j];
        }
        const double sy = dot(pr.s, pr.y);
        if (sy > 1e-10 * norm2(pr.s) * norm2(pr.y)) {
            pr.rho = 1.0 / sy;
            mem.push_back(std::move(pr));
            if (int(mem.size()) > p.memory) mem.pop_front();
        }

        x.swap(x_new);
        g.swap(g_new);
        f = f_acc;
        ++iter;
        if (f < best_f) {
            best_f = f;
            res.x = x;
            res.f = f;
            res.grad_norm = norm2(g);
        }
        if (monitor) monitor(iter, x, f, norm2(g), n_fev);
    }

    res.iterations = iter;
    res.n_fev = n_fev;
    return res;
}

}  // namespace invmed
