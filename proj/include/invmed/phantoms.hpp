// Scatterer generators: random Gaussian mixtures, the fixed two-Gaussian
// test target and parametric geometric phantoms, all L-inf renormalized.
#pragma once

#include <vector>

#include "invmed/grid.hpp"

namespace invmed {

struct GaussianComponent {
    double a, b, c, d, lambda;  // lambda * exp(-a(x-b)^2 - c(y-d)^2)
};

struct GaussianMixtureSpec {
    int eta = 0;
    std::vector<GaussianComponent> components;
    unsigned long long seed = 0;
};

// eta ~ U{1..6}; a,c ~ U(R/2, R) with R = 200; centers ~ U(0.2, 0.8);
// amplitudes ~ U(-1, 1). Same seed yields a bit-identical field.
std::pair<GaussianMixtureSpec, RealField> sample_gaussian_mixture(const Grid& g,
                                                                  unsigned long long seed);

RealField eval_gaussian_mixture(const Grid& g, const GaussianMixtureSpec& spec);

// q * target / ||q||_inf; throws on an identically zero field.
RealField normalize_max(const RealField& q, double target);

// exp(-150(x-0.3)^2 - 70(y-0.6)^2) - 0.7 exp(-40(x-0.7)^2 - 90(y-0.4)^2),
// renormalized to the requested magnitude.
RealField two_gauss_test(const Grid& g, double magnitude);

enum class PhantomKind { discs, rectangle_robot, austria, small_cluster };

struct GeometricPhantom {
    PhantomKind kind = PhantomKind::discs;
    double magnitude = 0.5;
};

RealField make_geometric(const Grid& g, const GeometricPhantom& phantom);

PhantomKind phantom_kind_from_name(const std::string& name);

}  // namespace invmed
