#include "invmed/lippmann.hpp"

#include <cmath>
#include <random>

#include <fftw3.h>

#include "invmed/special.hpp"

namespace invmed {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

cplx green_kernel(double k, double r) {
    if (!(k > 0.0)) throw std::domain_error("green_kernel: k > 0 required");
    if (!(r > 0.0)) throw std::domain_error("green_kernel: r = 0 hits the singularity");
    return cplx(0.0, -0.25) * hankel1(0, k * r);
}

GreenKernel::GreenKernel(double k_, const Grid& grid_) : k(k_), grid(grid_) {
    const int n = grid.n;
    const int m = 2 * n - 1;
    const double h = grid.h();
    weights.resize(std::size_t(m) * m);

    // Midpoint quadrature -k^2 h^2 G(r) off the diagonal; the self cell is
    // integrated exactly over the area-equivalent disk of radius h/sqrt(pi):
    //   -k^2 int_disk G = (i pi k rho / 2) H1^(1)(k rho) - 1.
    const double rho = h / std::sqrt(kPi);
    const cplx self = cplx(0.0, 0.5 * kPi * k * rho) * hankel1(1, k * rho) - 1.0;

    for (int dj = -(n - 1); dj <= n - 1; ++dj) {
        for (int di = -(n - 1); di <= n - 1; ++di) {
            cplx w;
            if (di == 0 && dj == 0) {
                w = self;
            } else {
                const double r = h * std::sqrt(double(di) * di + double(dj) * dj);
                w = -k * k * h * h * green_kernel(k, r);
            }
            weights[std::size_t(dj + n - 1) * m + (di + n - 1)] = w;
        }
    }
}

namespace {

void fft2(std::vector<cplx>& a, int m, int sign) {
    fftw_plan plan = fftw_plan_dft_2d(m, m, reinterpret_cast<fftw_complex*>(a.data()),
                                      reinterpret_cast<fftw_complex*>(a.data()), sign,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

ComplexField apply_S_hat(const ComplexField& f, const GreenKernel& kernel) {
    if (f.grid != kernel.grid)
        throw std::invalid_argument("apply_S_hat: field grid does not match kernel grid");
    const int n = f.grid.n;
    const int m = 2 * n;  // >= 2n-1, exact aperiodic convolution

    std::vector<cplx> fk(std::size_t(m) * m, cplx(0.0));
    std::vector<cplx> fp(std::size_t(m) * m, cplx(0.0));
    for (int dj = -(n - 1); dj <= n - 1; ++dj)
        for (int di = -(n - 1); di <= n - 1; ++di)
            fk[std::size_t((dj + m) % m) * m + ((di + m) % m)] = kernel.weight(di, dj);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) fp[std::size_t(j) * m + i] = f.at(i, j);

    fft2(fk, m, FFTW_FORWARD);
    fft2(fp, m, FFTW_FORWARD);
    const double scale = 1.0 / (double(m) * m);
    for (std::size_t i = 0; i < fp.size(); ++i) fp[i] *= fk[i] * scale;
    fft2(fp, m, FFTW_BACKWARD);

    ComplexField out(f.grid);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out.at(i, j) = fp[std::size_t(j) * m + i];
    return out;
}

std::pair<ComplexField, NeumannDiagnostics> neumann_forward(const RealField& q,
                                                            const ComplexField& u_inc,
                                                            const GreenKernel& kernel, int L) {
    if (q.grid != kernel.grid || u_inc.grid != kernel.grid)
        throw std::invalid_argument("neumann_forward: grids do not match kernel");
    if (L < 1) throw std::invalid_argument("neumann_forward: L >= 1 required");

    NeumannDiagnostics diag;
    diag.L = L;
    ComplexField u = u_inc;  // u^(0)
    ComplexField sum(kernel.grid);
    int rising = 0;
    bool diverged = false;
    for (int j = 1; j <= L; ++j) {
        ComplexField qu(kernel.grid);
        for (std::size_t i = 0; i < qu.size(); ++i) qu.values[i] = q.values[i] * u.values[i];
        u = apply_S_hat(qu, kernel);
        for (std::size_t i = 0; i < sum.size(); ++i) sum.values[i] += u.values[i];
        const double tn = grid_norm(u, NormKind::L2);
        if (!diag.term_norms.empty()) {
            const double prev = diag.term_norms.back();
            if (prev > 0.0)
                diag.contraction_estimate = std::max(diag.contraction_estimate, tn / prev);
            rising = (tn > prev) ? rising + 1 : 0;
            if (rising >= 2) diverged = true;
        }
        diag.term_norms.push_back(tn);
    }
    const double total = grid_norm(sum, NormKind::L2);
    diag.converged = !diverged && diag.term_norms.back() <= 1e-2 * total + 1e-30;
    return {std::move(sum), diag};
}

double estimate_contraction(const RealField& q, const GreenKernel& kernel, int iters,
                            unsigned long long seed) {
    if (q.grid != kernel.grid)
        throw std::invalid_argument("estimate_contraction: grid mismatch");
    if (iters < 5) throw std::invalid_argument("estimate_contraction: iters >= 5 required");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ComplexField v(kernel.grid);
    for (auto& x : v.values) x = cplx(uni(rng), uni(rng));

    auto apply_B = [&](const ComplexField& f) {
        ComplexField qf(kernel.grid);
        for (std::size_t i = 0; i < qf.size(); ++i) qf.values[i] = q.values[i] * f.values[i];
        return apply_S_hat(qf, kernel);
    };
    // B = W D_q with symmetric W, so B^H g = q .* conj(W conj(g)).
    auto apply_BH = [&](const ComplexField& g) {
        ComplexField cg(kernel.grid);
        for (std::size_t i = 0; i < cg.size(); ++i) cg.values[i] = std::conj(g.values[i]);
        ComplexField w = apply_S_hat(cg, kernel);
        for (std::size_t i = 0; i < w.size(); ++i)
            w.values[i] = q.values[i] * std::conj(w.values[i]);
        return w;
    };

    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        const double nv = grid_norm(v, NormKind::L2);
        if (nv == 0.0) return 0.0;
        for (auto& x : v.values) x /= nv;
        ComplexField w = apply_BH(apply_B(v));
        lambda = grid_norm(w, NormKind::L2);  // Rayleigh estimate for B^H B
        if (lambda == 0.0) return 0.0;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

}  // namespace invmed
