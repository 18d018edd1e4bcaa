#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "invmed/grid.hpp"

using namespace invmed;

TEST_CASE("grid invariants") {
    CHECK_THROWS(Grid(2, 0, 0, 1, 1));
    CHECK_THROWS(Grid(5, 0, 0, 1, 2));  // not square
    Grid g = Grid::unit(5);
    CHECK(g.h() == doctest::Approx(0.25));
}

TEST_CASE("bilinear sampling") {
    Grid g = Grid::unit(9);
    SUBCASE("constant field reproduced anywhere") {
        ComplexField f(g, cplx(3.0, -2.0));
        CHECK(std::abs(bilinear_sample(f, 0.37, 0.81) - cplx(3.0, -2.0)) < 1e-14);
    }
    SUBCASE("nodal exactness") {
        ComplexField f(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) f.at(i, j) = cplx(i * 1.0, j * 2.0);
        CHECK(bilinear_sample(f, g.x(3), g.y(5)) == f.at(3, 5));
    }
    SUBCASE("bilinear function exact at a cell center") {
        ComplexField f(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) f.at(i, j) = g.x(i) * g.y(j);
        const double x = g.x(2) + g.h() / 2, y = g.y(6) + g.h() / 2;
        CHECK(std::abs(bilinear_sample(f, x, y) - cplx(x * y)) < 1e-14);
    }
    SUBCASE("random bilinear function reproduced everywhere") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const double a = uni(rng), b = uni(rng), c = uni(rng), d = uni(rng);
        ComplexField f(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                f.at(i, j) = a + b * g.x(i) + c * g.y(j) + d * g.x(i) * g.y(j);
        for (int t = 0; t < 50; ++t) {
            const double x = uni(rng), y = uni(rng);
            CHECK(std::abs(bilinear_sample(f, x, y) - cplx(a + b * x + c * y + d * x * y)) <
                  1e-13);
        }
    }
    SUBCASE("out of domain") {
        ComplexField f(g);
        CHECK_THROWS_AS(bilinear_sample(f, -0.1, 0.5), std::domain_error);
        CHECK_THROWS_AS(bilinear_sample(f, 0.5, 1.2), std::domain_error);
    }
}

TEST_CASE("restriction by nodal injection") {
    Grid fine = Grid::unit(513);
    ComplexField f(fine);
    for (int j = 0; j < fine.n; ++j)
        for (int i = 0; i < fine.n; ++i) f.at(i, j) = cplx(fine.x(i), fine.y(j));
    ComplexField c = restrict_field(f, 129);
    CHECK(c.grid.n == 129);
    CHECK(c.at(0, 0) == f.at(0, 0));
    CHECK(c.at(128, 128) == f.at(512, 512));
    CHECK(c.at(5, 7) == f.at(20, 28));  // stride 4
    // linear ramp stays a ramp
    for (int j = 0; j < c.grid.n; ++j)
        CHECK(std::abs(c.at(3, j) - cplx(c.grid.x(3), c.grid.y(j))) < 1e-15);

    SUBCASE("identity when sizes match") {
        ComplexField same = restrict_field(c, 129);
        CHECK(same.values == c.values);
    }
    SUBCASE("incompatible sizes rejected") { CHECK_THROWS(restrict_field(f, 100)); }
}

TEST_CASE("prolongate-then-restrict is the identity on the coarse grid") {
    Grid coarse = Grid::unit(17);
    ComplexField c(coarse);
    std::mt19937_64 rng(3);
    for (auto& v : c.values) v = cplx(double(rng() % 1000), double(rng() % 1000));
    // nodal-injection prolongation to 33 (zeros off the coincident nodes)
    Grid fine = Grid::unit(33);
    ComplexField f(fine);
    for (int j = 0; j < coarse.n; ++j)
        for (int i = 0; i < coarse.n; ++i) f.at(2 * i, 2 * j) = c.at(i, j);
    ComplexField back = restrict_field(f, 17);
    CHECK(back.values == c.values);
}

TEST_CASE("grid norms") {
    Grid g = Grid::unit(33);
    SUBCASE("zero field") {
        ComplexField f(g);
        CHECK(grid_norm(f, NormKind::L2) == 0.0);
        CHECK(grid_norm(f, NormKind::Linf) == 0.0);
    }
    SUBCASE("homogeneity") {
        ComplexField f(g);
        std::mt19937_64 rng(11);
        for (auto& v : f.values) v = cplx(double(rng() % 100) - 50, double(rng() % 100) - 50);
        ComplexField f3 = f;
        for (auto& v : f3.values) v *= -2.5;
        CHECK(grid_norm(f3, NormKind::L2) ==
              doctest::Approx(2.5 * grid_norm(f, NormKind::L2)).epsilon(1e-13));
        CHECK(grid_norm(f3, NormKind::Linf) ==
              doctest::Approx(2.5 * grid_norm(f, NormKind::Linf)).epsilon(1e-13));
    }
    SUBCASE("constant 1 integrates to about 1 on the unit square") {
        ComplexField f(g, cplx(1.0));
        CHECK(std::abs(grid_norm(f, NormKind::L2) - 1.0) < 2.0 * g.h());
    }
}

TEST_CASE("L2 norm converges to the continuum norm at order >= 2") {
    // compactly supported C^1 bump (1 - 25 r^2)^2 on r < 0.2;
    // integral of f^2 over the plane is pi/125 exactly
    auto l2_at = [](int n) {
        Grid g = Grid::unit(n);
        ComplexField f(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double dx = g.x(i) - 0.5, dy = g.y(j) - 0.5;
                const double r2 = dx * dx + dy * dy;
                f.at(i, j) = r2 < 0.04 ? (1.0 - 25.0 * r2) * (1.0 - 25.0 * r2) : 0.0;
            }
        return grid_norm(f, NormKind::L2);
    };
    const double exact = std::sqrt(M_PI / 125.0);
    const double e1 = std::abs(l2_at(33) - exact);
    const double e2 = std::abs(l2_at(65) - exact);
    const double e3 = std::abs(l2_at(129) - exact);
    CHECK(e1 / e2 > std::pow(2.0, 1.7));
    CHECK(e2 / e3 > std::pow(2.0, 1.7));
}

TEST_CASE("field file round trip is bit exact") {
    Grid g = Grid::unit(9);
    ComplexField f(g);
    std::mt19937_64 rng(5);
    for (auto& v : f.values)
        v = cplx(std::ldexp(double(rng()), -64), std::ldexp(double(rng()), -64));
    const std::string path = "test_roundtrip.fld";
    write_field(path, f, 40.0, true);
    LoadedField lf = read_field(path);
    REQUIRE(lf.is_complex);
    CHECK(lf.complex.values == f.values);
    CHECK(lf.has_k);
    CHECK(lf.k == 40.0);
    CHECK(lf.complex.grid == g);

    RealField r(g);
    for (auto& v : r.values) v = std::ldexp(double(rng()), -64);
    write_field(path, r);
    LoadedField lr = read_field(path);
    REQUIRE(!lr.is_complex);
    CHECK(lr.real.values == r.values);
    CHECK(!lr.has_k);
    std::remove(path.c_str());
}

TEST_CASE("field file header is a single JSON line") {
    Grid g = Grid::unit(3);
    RealField r(g, 1.0);
    write_field("test_hdr.fld", r);
    FILE* fp = std::fopen("test_hdr.fld", "rb");
    REQUIRE(fp);
    char buf[512];
    REQUIRE(std::fgets(buf, sizeof buf, fp));
    std::fclose(fp);
    CHECK(std::string(buf).find("\"dtype\":\"f64\"") != std::string::npos);
    CHECK(std::string(buf).find("\"order\":\"row-major\"") != std::string::npos);
    std::remove("test_hdr.fld");
}
