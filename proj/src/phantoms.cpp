#include "invmed/phantoms.hpp"

#include <cmath>
#include <random>

namespace invmed {

namespace {

// Bit-stable uniform draw; std distributions are not pinned across
// library versions.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

void check_in_margin(double x, double y, double r) {
    if (x - r < 0.15 || x + r > 0.85 || y - r < 0.15 || y + r > 0.85)
        throw std::invalid_argument("phantom shape leaves the [0.15,0.85]^2 support margin");
}

void add_disc(RealField& f, double cx, double cy, double r) {
    check_in_margin(cx, cy, r);
    const Grid& g = f.grid;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double dx = g.x(i) - cx, dy = g.y(j) - cy;
            if (dx * dx + dy * dy <= r * r) f.at(i, j) += 1.0;
        }
}

void add_annulus(RealField& f, double cx, double cy, double r_in, double r_out) {
    check_in_margin(cx, cy, r_out);
    const Grid& g = f.grid;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double dx = g.x(i) - cx, dy = g.y(j) - cy;
            const double r2 = dx * dx + dy * dy;
            if (r2 >= r_in * r_in && r2 <= r_out * r_out) f.at(i, j) += 1.0;
        }
}

void add_box(RealField& f, double x0, double y0, double x1, double y1) {
    if (x0 < 0.15 || y0 < 0.15 || x1 > 0.85 || y1 > 0.85)
        throw std::invalid_argument("phantom shape leaves the [0.15,0.85]^2 support margin");
    const Grid& g = f.grid;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            if (g.x(i) >= x0 && g.x(i) <= x1 && g.y(j) >= y0 && g.y(j) <= y1) f.at(i, j) += 1.0;
}

}  // namespace

RealField eval_gaussian_mixture(const Grid& g, const GaussianMixtureSpec& spec) {
    RealField out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i), y = g.y(j);
            double v = 0.0;
            for (const auto& c : spec.components)
                v += c.lambda *
                     std::exp(-c.a * (x - c.b) * (x - c.b) - c.c * (y - c.d) * (y - c.d));
            out.at(i, j) = v;
        }
    return out;
}

std::pair<GaussianMixtureSpec, RealField> sample_gaussian_mixture(const Grid& g,
                                                                  unsigned long long seed) {
    constexpr double R = 200.0;
    std::mt19937_64 rng(seed);
    GaussianMixtureSpec spec;
    spec.seed = seed;
    spec.eta = 1 + int(rng() % 6);
    for (int i = 0; i < spec.eta; ++i) {
        GaussianComponent c;
        c.a = uniform(rng, R / 2, R);
        c.c = uniform(rng, R / 2, R);
        c.b = uniform(rng, 0.2, 0.8);
        c.d = uniform(rng, 0.2, 0.8);
        c.lambda = uniform(rng, -1.0, 1.0);
        spec.components.push_back(c);
    }
    return {spec, eval_gaussian_mixture(g, spec)};
}

RealField normalize_max(const RealField& q, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("normalize_max: target > 0 required");
    const double m = grid_norm(q, NormKind::Linf);
    if (m == 0.0) throw std::invalid_argument("normalize_max: field is identically zero");
    RealField out = q;
    const double s = target / m;
    for (auto& v : out.values) v *= s;
    return out;
}

RealField two_gauss_test(const Grid& g, double magnitude) {
    if (!(magnitude > 0.0)) throw std::invalid_argument("two_gauss_test: magnitude > 0 required");
    RealField out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i), y = g.y(j);
            out.at(i, j) = std::exp(-150.0 * (x - 0.3) * (x - 0.3) - 70.0 * (y - 0.6) * (y - 0.6)) -
                           0.7 * std::exp(-40.0 * (x - 0.7) * (x - 0.7) -
                                          90.0 * (y - 0.4) * (y - 0.4));
        }
    return normalize_max(out, magnitude);
}

RealField make_geometric(const Grid& g, const GeometricPhantom& p) {
    RealField f(g);
    switch (p.kind) {
        case PhantomKind::discs:
            add_disc(f, 0.42, 0.55, 0.17);
            add_disc(f, 0.58, 0.45, 0.17);
            break;
        case PhantomKind::rectangle_robot:
            add_box(f, 0.36, 0.32, 0.64, 0.56);   // body
            add_box(f, 0.43, 0.58, 0.57, 0.72);   // head
            add_box(f, 0.22, 0.44, 0.34, 0.53);   // arms
            add_box(f, 0.66, 0.44, 0.78, 0.53);
            add_box(f, 0.39, 0.16, 0.47, 0.30);   // legs
            add_box(f, 0.53, 0.16, 0.61, 0.30);
            break;
        case PhantomKind::austria:
            add_disc(f, 0.35, 0.65, 0.1);
            add_disc(f, 0.65, 0.65, 0.1);
            add_annulus(f, 0.5, 0.35, 0.08, 0.15);
            break;
        case PhantomKind::small_cluster:
            add_disc(f, 0.30, 0.30, 0.04);
            add_disc(f, 0.70, 0.35, 0.04);
            add_disc(f, 0.50, 0.60, 0.04);
            add_disc(f, 0.35, 0.70, 0.04);
            add_disc(f, 0.65, 0.70, 0.04);
            break;
    }
    return normalize_max(f, p.magnitude);
}

PhantomKind phantom_kind_from_name(const std::string& name) {
    if (name == "discs") return PhantomKind::discs;
    if (name == "rectangle_robot") return PhantomKind::rectangle_robot;
    if (name == "austria") return PhantomKind::austria;
    if (name == "small_cluster") return PhantomKind::small_cluster;
    throw std::invalid_argument("unknown phantom kind: " + name);
}

}  // namespace invmed
