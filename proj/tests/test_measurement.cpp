#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include "invmed/grid.hpp"
#include "invmed/measurement.hpp"

using namespace invmed;

TEST_CASE("full-circle layout geometry") {
    const auto lay = make_layout_full_circle(64, 64);
    CHECK(lay.M() == 64);
    CHECK(lay.N() == 64);
    CHECK(lay.kind == "full_circle");
    CHECK(lay.r_c == 0.45);
    CHECK(lay.source_angles[0] == 0.0);
    CHECK(lay.source_angles[16] == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
    // Receiver i sits at angle 2*pi*i/N on the circle about (0.5, 0.5).
    const auto [px, py] = lay.receivers[0];
    CHECK(px == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(py == doctest::Approx(0.5).epsilon(1e-15));
    const auto [qx, qy] = lay.receivers[48];
    CHECK(qx == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(qy == doctest::Approx(0.05).epsilon(1e-12));
    for (const auto& [rx, ry] : lay.receivers) {
        CHECK(rx > 0.0);
        CHECK(rx < 1.0);
        CHECK(ry > 0.0);
        CHECK(ry < 1.0);
    }
    const auto one = make_layout_full_circle(1, 1);
    CHECK(one.M() == 1);
    CHECK(one.receivers.size() == 1);
}

TEST_CASE("arc layout with full aperture matches the full circle spacing") {
    const auto arc = make_layout_arc(8, 8, 0.0, 2.0 * M_PI);
    const auto full = make_layout_full_circle(8, 8);
    REQUIRE(arc.N() == full.N());
    for (int i = 0; i < arc.N(); ++i) {
        const double sep = std::hypot(arc.receivers[i].first - arc.receivers[(i + 1) % 8].first,
                                      arc.receivers[i].second - arc.receivers[(i + 1) % 8].second);
        const double ref = std::hypot(full.receivers[0].first - full.receivers[1].first,
                                      full.receivers[0].second - full.receivers[1].second);
        CHECK(sep == doctest::Approx(ref).epsilon(1e-9));
    }
    CHECK(arc.kind == "arc");

    const auto narrow = make_layout_arc(4, 16, M_PI / 2.0, M_PI / 3.0);
    for (double a : narrow.source_angles) {
        CHECK(a >= M_PI / 2.0 - M_PI / 6.0 - 1e-12);
        CHECK(a <= M_PI / 2.0 + M_PI / 6.0 + 1e-12);
    }
}

TEST_CASE("trace reproduces constants and nodal values") {
    const Grid g = Grid::unit(33);
    const auto lay = make_layout_full_circle(4, 16);
    ComplexField c(g);
    for (auto& v : c.values) v = cplx(2.5, -1.0);
    for (const cplx& t : trace(c, lay)) CHECK(std::abs(t - cplx(2.5, -1.0)) <= 1e-14);

    // Bilinear function is reproduced exactly between nodes.
    ComplexField b(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            b.at(i, j) = cplx(1.0 + 2.0 * g.x(i) - 3.0 * g.y(j), g.x(i) * g.y(j));
    const auto tb = trace(b, lay);
    for (int r = 0; r < lay.N(); ++r) {
        const auto [px, py] = lay.receivers[r];
        const cplx want(1.0 + 2.0 * px - 3.0 * py, px * py);
        CHECK(std::abs(tb[r] - want) <= 1e-13);
    }
}

TEST_CASE("trace_adjoint is the exact algebraic transpose of trace") {
    const Grid g = Grid::unit(65);
    std::mt19937_64 rng(17);
    auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 100; ++trial) {
        ReceiverLayout lay;
        lay.kind = "scatter";
        const int N = 1 + int(rng() % 8);
        for (int r = 0; r < N; ++r)
            lay.receivers.emplace_back(0.05 + 0.9 * u01(), 0.05 + 0.9 * u01());
        lay.source_angles = {0.0};

        ComplexField u(g);
        for (auto& v : u.values) v = cplx(u01() - 0.5, u01() - 0.5);
        std::vector<cplx> w(N);
        for (auto& v : w) v = cplx(u01() - 0.5, u01() - 0.5);

        const auto Tu = trace(u, lay);
        const ComplexField Ttw = trace_adjoint(w, lay, g);
        cplx lhs = 0.0, rhs = 0.0;
        for (int r = 0; r < N; ++r) lhs += Tu[r] * std::conj(w[r]);
        for (std::size_t m = 0; m < g.size(); ++m)
            rhs += u.values[m] * std::conj(Ttw.values[m]);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("node-aligned receivers make T T* the identity") {
    const Grid g = Grid::unit(17);
    ReceiverLayout lay;
    lay.kind = "scatter";
    lay.source_angles = {0.0};
    lay.receivers = {{g.x(3), g.y(5)}, {g.x(8), g.y(8)}, {g.x(12), g.y(2)}};
    const std::vector<cplx> w = {cplx(1.0, 2.0), cplx(-0.5, 0.25), cplx(3.0, 0.0)};
    const auto round_trip = trace(trace_adjoint(w, lay, g), lay);
    for (std::size_t r = 0; r < w.size(); ++r) CHECK(std::abs(round_trip[r] - w[r]) <= 1e-14);
}

TEST_CASE("noise injection hits the requested SNR exactly") {
    MeasurementSet m;
    m.layout = make_layout_full_circle(8, 16);
    m.k = 20.0;
    m.data.resize(std::size_t(8) * 16);
    std::mt19937_64 rng(5);
    auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    for (auto& v : m.data) v = cplx(u01() - 0.5, u01() - 0.5);

    const double snr_db = 5.0;
    const MeasurementSet noisy = add_noise(m, snr_db, 99);
    REQUIRE(noisy.data.size() == m.data.size());
    double sig = 0.0, noise = 0.0;
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        sig += std::norm(m.data[i]);
        noise += std::norm(noisy.data[i] - m.data[i]);
    }
    CHECK(10.0 * std::log10(sig / noise) == doctest::Approx(snr_db).epsilon(1e-12));
    CHECK(noisy.snr_db == snr_db);
    // ||noise||_F = 10^(-snr/20) ||data||_F, i.e. 10^(-0.25) at 5 dB.
    CHECK(std::sqrt(noise / sig) == doctest::Approx(std::pow(10.0, -0.25)).epsilon(1e-12));

    const MeasurementSet again = add_noise(m, snr_db, 99);
    for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(again.data[i] == noisy.data[i]);
    const MeasurementSet other = add_noise(m, snr_db, 100);
    bool differs = false;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (other.data[i] != noisy.data[i]) differs = true;
    CHECK(differs);

    const MeasurementSet clean =
        add_noise(m, std::numeric_limits<double>::infinity(), 99);
    for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(clean.data[i] == m.data[i]);
}

TEST_CASE("synthesis: zero scatterer gives zero data, runs are bit-identical") {
    const Grid fine = Grid::unit(65);
    const RealField q0(fine);
    const auto lay = make_layout_full_circle(3, 8);
    const MeasurementSet zero = synthesize(q0, lay, 15.0, 65, 33);
    for (const cplx& v : zero.data) CHECK(std::abs(v) == 0.0);
    CHECK(zero.k == 15.0);
    CHECK(int(zero.data.size()) == 3 * 8);

    RealField q(fine);
    for (int j = 0; j < fine.n; ++j)
        for (int i = 0; i < fine.n; ++i) {
            const double dx = fine.x(i) - 0.5, dy = fine.y(j) - 0.5;
            q.at(i, j) = 0.1 * std::exp(-80.0 * (dx * dx + dy * dy));
        }
    const MeasurementSet a = synthesize(q, lay, 15.0, 65, 33, 10.0, 7);
    const MeasurementSet b = synthesize(q, lay, 15.0, 65, 33, 10.0, 7);
    REQUIRE(a.data.size() == b.data.size());
    for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
    CHECK(grid_norm(q) > 0.0);
    double total = 0.0;
    for (const cplx& v : a.data) total += std::norm(v);
    CHECK(total > 0.0);
}

TEST_CASE("synthesis validates the mesh nesting") {
    const Grid fine = Grid::unit(65);
    const RealField q0(fine);
    const auto lay = make_layout_full_circle(2, 4);
    CHECK_THROWS_AS(synthesize(q0, lay, 15.0, 65, 48), std::invalid_argument);
    CHECK_THROWS_AS(synthesize(q0, lay, 15.0, 33, 65), std::invalid_argument);
}

TEST_CASE("measurement files round-trip bit-exactly") {
    MeasurementSet m;
    m.layout = make_layout_full_circle(4, 8);
    m.k = 40.0;
    m.snr_db = 5.0;
    m.seed = 123;
    m.data.resize(std::size_t(4) * 8);
    std::mt19937_64 rng(9);
    auto u01 = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    for (auto& v : m.data) v = cplx(u01() - 0.5, u01() - 0.5);

    const std::string path = "roundtrip_test.msr";
    write_measurements(path, m);
    const MeasurementSet r = read_measurements(path);
    std::remove(path.c_str());

    CHECK(r.k == m.k);
    CHECK(r.snr_db == m.snr_db);
    CHECK(r.layout.M() == m.layout.M());
    CHECK(r.layout.N() == m.layout.N());
    CHECK(r.layout.r_c == m.layout.r_c);
    CHECK(r.layout.kind == m.layout.kind);
    REQUIRE(r.data.size() == m.data.size());
    for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(r.data[i] == m.data[i]);
    for (int i = 0; i < m.layout.N(); ++i) {
        CHECK(r.layout.receivers[i].first == m.layout.receivers[i].first);
        CHECK(r.layout.receivers[i].second == m.layout.receivers[i].second);
    }
}
