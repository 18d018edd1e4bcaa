#include "invmed/pml.hpp"

#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace invmed {

int PmlConfig::n_layer() const {
    if (!(L_pml > 0.0)) throw std::invalid_argument("PmlConfig: L_pml > 0 required");
    const int nl = std::max(1, int(std::lround(L_pml / h())));
    return nl;
}

Grid PmlConfig::total_grid() const {
    const double L = L_actual();
    return Grid(n_total(), -L, -L, 1.0 + L, 1.0 + L);
}

// Imaginary part is +ik(t/L)^2: with fields radiating as H0^(1)(kr) the
// stretched coordinate must gain a positive imaginary part for the layer
// to absorb (the opposite sign turns the layer into an amplifier).
cplx stretch_coeff(double t, double k, double L_pml) {
    const double eps = 1e-12;
    if (t < -L_pml - eps || t > 1.0 + L_pml + eps)
        throw std::domain_error("stretch_coeff: t outside computational domain");
    if (t > 0.0 && t <= 1.0) return 1.0;
    if (t <= 0.0) {
        const double s = t / L_pml;
        return cplx(1.0, k * s * s);
    }
    const double s = (t - 1.0) / L_pml;
    return cplx(1.0, k * s * s);
}

using SpMat = Eigen::SparseMatrix<cplx>;
using Vec = Eigen::VectorXcd;

struct HelmholtzSystem::Impl {
    SpMat A;
    Eigen::SparseLU<SpMat> lu;
};

PmlCounters& pml_counters() {
    static PmlCounters counters;
    return counters;
}

HelmholtzSystem::HelmholtzSystem(const RealField& q, const PmlConfig& config) : config_(config) {
    if (q.grid != config.interior_grid())
        throw std::invalid_argument("HelmholtzSystem: q must live on the interior grid");

    const int nt = config.n_total();
    const int nl = config.n_layer();
    const int n = config.n;
    const double h = config.h();
    const double L = config.L_actual();
    const double k = config.k;
    const Grid gt = config.total_grid();

    auto ex = [&](double x) { return stretch_coeff(x, k, L); };
    auto idx = [&](int i, int j) { return j * nt + i; };
    auto q_at = [&](int i, int j) -> double {
        const int ii = i - nl, jj = j - nl;
        if (ii < 0 || jj < 0 || ii >= n || jj >= n) return 0.0;
        return q.at(ii, jj);
    };

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(std::size_t(nt) * nt * 5);
    const double ih2 = 1.0 / (h * h);
    for (int j = 0; j < nt; ++j) {
        for (int i = 0; i < nt; ++i) {
            const int row = idx(i, j);
            if (i == 0 || j == 0 || i == nt - 1 || j == nt - 1) {
                trip.emplace_back(row, row, cplx(1.0));
                continue;
            }
            const double xi = gt.x(i), yj = gt.y(j);
            const cplx exi = ex(xi), eyj = ex(yj);
            const cplx cxp = eyj / ex(xi + 0.5 * h);
            const cplx cxm = eyj / ex(xi - 0.5 * h);
            const cplx cyp = exi / ex(yj + 0.5 * h);
            const cplx cym = exi / ex(yj - 0.5 * h);
            cplx diag = -(cxp + cxm + cyp + cym) * ih2;
            diag += exi * eyj * k * k * (1.0 + q_at(i, j));
            trip.emplace_back(row, row, diag);
            // couplings into Dirichlet nodes are dropped (they carry u = 0),
            // which keeps A = A^T exactly
            if (i + 1 < nt - 1) trip.emplace_back(row, idx(i + 1, j), cxp * ih2);
            if (i - 1 > 0) trip.emplace_back(row, idx(i - 1, j), cxm * ih2);
            if (j + 1 < nt - 1) trip.emplace_back(row, idx(i, j + 1), cyp * ih2);
            if (j - 1 > 0) trip.emplace_back(row, idx(i, j - 1), cym * ih2);
        }
    }

    auto impl = std::make_shared<Impl>();
    impl->A.resize(nt * nt, nt * nt);
    impl->A.setFromTriplets(trip.begin(), trip.end());
    impl->A.makeCompressed();
    impl->lu.compute(impl->A);
    if (impl->lu.info() != Eigen::Success)
        throw std::runtime_error("HelmholtzSystem: sparse LU factorization failed (matrix "
                                 "singular or ill-conditioned)");
    pml_counters().factorizations++;
    impl_ = std::move(impl);
}

ComplexField HelmholtzSystem::solve_raw(const std::vector<cplx>& rhs) const {
    const int nt = config_.n_total();
    if (rhs.size() != std::size_t(nt) * nt)
        throw std::invalid_argument("solve_raw: rhs size mismatch");
    Vec b = Eigen::Map<const Vec>(rhs.data(), Eigen::Index(rhs.size()));
    Vec u = impl_->lu.solve(b);
    if (impl_->lu.info() != Eigen::Success)
        throw std::runtime_error("HelmholtzSystem: triangular solve failed");
    pml_counters().solves++;
    ComplexField out(config_.total_grid());
    Eigen::Map<Vec>(out.values.data(), u.size()) = u;
    return out;
}

ComplexField HelmholtzSystem::solve_source(const ComplexField& f) const {
    const int nt = config_.n_total();
    const int nl = config_.n_layer();
    const int n = config_.n;
    const double k2 = config_.k * config_.k;

    std::vector<cplx> rhs(std::size_t(nt) * nt, cplx(0.0));
    if (f.grid == config_.interior_grid()) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                rhs[std::size_t(j + nl) * nt + (i + nl)] = -k2 * f.at(i, j);
    } else if (f.grid == config_.total_grid()) {
        for (std::size_t i = 0; i < f.values.size(); ++i) rhs[i] = -k2 * f.values[i];
    } else {
        throw std::invalid_argument("solve_source: f grid matches neither interior nor total");
    }
    ComplexField u = solve_raw(rhs);

    ComplexField out(config_.interior_grid());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out.at(i, j) = u.at(i + nl, j + nl);
    return out;
}

cplx HelmholtzSystem::matrix_entry(int row, int col) const { return impl_->A.coeff(row, col); }

HelmholtzSystem assemble(const RealField& q, const PmlConfig& config) {
    return HelmholtzSystem(q, config);
}

std::vector<ComplexField> forward_scatter(const RealField& q,
                                          const std::vector<ComplexField>& incident,
                                          const PmlConfig& config) {
    HelmholtzSystem sys(q, config);
    std::vector<ComplexField> out;
    out.reserve(incident.size());
    for (const auto& ui : incident) {
        if (ui.grid != config.interior_grid())
            throw std::invalid_argument("forward_scatter: incident field grid mismatch");
        ComplexField f(config.interior_grid());
        for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = q.values[i] * ui.values[i];
        out.push_back(sys.solve_source(f));
    }
    return out;
}

ComplexField solve_source(const RealField& q, const ComplexField& f, const PmlConfig& config) {
    return HelmholtzSystem(q, config).solve_source(f);
}

}  // namespace invmed
