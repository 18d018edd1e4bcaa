#include "invmed/measurement.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "invmed/pml.hpp"

namespace invmed {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::pair<double, double> circle_point(double angle, double r_c) {
    return {0.5 + r_c * std::cos(angle), 0.5 + r_c * std::sin(angle)};
}

void check_rc(double r_c) {
    if (!(r_c > 0.0) || r_c >= 0.5)
        throw std::invalid_argument("layout: r_c must keep receivers strictly inside [0,1]^2");
}

// Deterministic standard normal pair (Box-Muller on raw mt19937_64 bits).
std::pair<double, double> normal_pair(std::mt19937_64& rng) {
    double u1 = 0.0;
    while (u1 == 0.0) u1 = double(rng() >> 11) * 0x1.0p-53;
    const double u2 = double(rng() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

}  // namespace

ReceiverLayout make_layout_full_circle(int M, int N, double r_c) {
    if (M < 1 || N < 1) throw std::invalid_argument("layout: M, N >= 1 required");
    check_rc(r_c);
    ReceiverLayout out;
    out.kind = "full_circle";
    out.r_c = r_c;
    for (int j = 0; j < M; ++j) out.source_angles.push_back(2.0 * kPi * j / M);
    for (int i = 0; i < N; ++i) out.receivers.push_back(circle_point(2.0 * kPi * i / N, r_c));
    return out;
}

ReceiverLayout make_layout_arc(int M, int N, double center_angle, double aperture, double r_c) {
    if (M < 1 || N < 1) throw std::invalid_argument("layout: M, N >= 1 required");
    check_rc(r_c);
    ReceiverLayout out;
    out.kind = "arc";
    out.r_c = r_c;
    auto angle = [&](int i, int count) {
        if (count == 1) return center_angle;
        if (std::abs(aperture - 2.0 * kPi) < 1e-14)  // degenerate arc = full circle
            return center_angle - 0.5 * aperture + aperture * double(i) / count;
        return center_angle - 0.5 * aperture + aperture * double(i) / (count - 1);
    };
    for (int j = 0; j < M; ++j) out.source_angles.push_back(angle(j, M));
    for (int i = 0; i < N; ++i) out.receivers.push_back(circle_point(angle(i, N), r_c));
    return out;
}

std::vector<cplx> MeasurementSet::row(int src) const {
    const int N = layout.N();
    return std::vector<cplx>(data.begin() + std::size_t(src) * N,
                             data.begin() + std::size_t(src + 1) * N);
}

std::vector<cplx> trace(const ComplexField& u, const ReceiverLayout& layout) {
    std::vector<cplx> out;
    out.reserve(layout.receivers.size());
    for (const auto& [x, y] : layout.receivers) out.push_back(bilinear_sample(u, x, y));
    return out;
}

ComplexField trace_adjoint(const std::vector<cplx>& v, const ReceiverLayout& layout,
                           const Grid& grid) {
    if (v.size() != layout.receivers.size())
        throw std::invalid_argument("trace_adjoint: vector length != receiver count");
    ComplexField out(grid);
    for (std::size_t r = 0; r < v.size(); ++r) {
        const auto [x, y] = layout.receivers[r];
        const BilinearStencil s = bilinear_stencil(grid, x, y);
        for (int m = 0; m < 4; ++m) out.values[s.idx[m]] += s.w[m] * v[r];
    }
    return out;
}

MeasurementSet add_noise(const MeasurementSet& m, double snr_db, unsigned long long seed) {
    if (std::isinf(snr_db)) return m;
    double power = 0.0;
    for (const auto& d : m.data) power += std::norm(d);
    if (power == 0.0) throw std::invalid_argument("add_noise: measurement set is zero");

    std::mt19937_64 rng(seed);
    std::vector<cplx> noise(m.data.size());
    double npower = 0.0;
    for (auto& z : noise) {
        auto [re, im] = normal_pair(rng);
        z = cplx(re, im);
        npower += std::norm(z);
    }
    // post-draw rescale makes the achieved SNR exact
    const double scale = std::sqrt(power * std::pow(10.0, -snr_db / 10.0) / npower);
    MeasurementSet out = m;
    out.snr_db = snr_db;
    out.seed = seed;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += scale * noise[i];
    return out;
}

MeasurementSet synthesize(const RealField& q_true, const ReceiverLayout& layout, double k,
                          int fine_n, int coarse_n, double snr_db, unsigned long long seed) {
    if (fine_n < coarse_n || (fine_n - 1) % (coarse_n - 1) != 0)
        throw std::invalid_argument("synthesize: incompatible fine/coarse mesh pairing");
    if (q_true.grid.n != fine_n)
        throw std::invalid_argument("synthesize: q_true must live on the fine grid");

    PmlConfig cfg;
    cfg.k = k;
    cfg.n = fine_n;
    std::vector<ComplexField> incident;
    for (double a : layout.source_angles) incident.push_back(plane_wave(q_true.grid, k, a));
    const std::vector<ComplexField> scattered = forward_scatter(q_true, incident, cfg);

    MeasurementSet m;
    m.k = k;
    m.layout = layout;
    m.data.resize(std::size_t(layout.M()) * layout.N());
    for (int j = 0; j < layout.M(); ++j) {
        const std::vector<cplx> row = trace(scattered[j], layout);
        for (int i = 0; i < layout.N(); ++i) m.at(j, i) = row[i];
    }
    return add_noise(m, snr_db, seed);
}

void write_measurements(const std::string& path, const MeasurementSet& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    nlohmann::json hdr;
    hdr["M"] = m.layout.M();
    hdr["N"] = m.layout.N();
    hdr["k"] = m.k;
    if (std::isinf(m.snr_db))
        hdr["snr_db"] = nullptr;
    else
        hdr["snr_db"] = m.snr_db;
    hdr["r_c"] = m.layout.r_c;
    hdr["layout_kind"] = m.layout.kind;
    if (m.layout.kind == "arc" || m.layout.kind == "custom") {
        hdr["source_angles"] = m.layout.source_angles;
        nlohmann::json rec = nlohmann::json::array();
        for (const auto& [x, y] : m.layout.receivers) rec.push_back({x, y});
        hdr["receivers"] = rec;
    }
    const std::string line = hdr.dump();
    os.write(line.data(), std::streamsize(line.size()));
    os.put('\n');
    os.write(reinterpret_cast<const char*>(m.data.data()),
             std::streamsize(m.data.size() * sizeof(cplx)));
    if (!os) throw std::runtime_error("write failed: " + path);
}

MeasurementSet read_measurements(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open measurement file: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("missing header: " + path);
    nlohmann::json hdr = nlohmann::json::parse(line);
    const int M = hdr.at("M").get<int>();
    const int N = hdr.at("N").get<int>();
    MeasurementSet m;
    m.k = hdr.at("k").get<double>();
    m.snr_db = hdr.at("snr_db").is_null() ? std::numeric_limits<double>::infinity()
                                          : hdr.at("snr_db").get<double>();
    const std::string kind = hdr.at("layout_kind").get<std::string>();
    const double r_c = hdr.at("r_c").get<double>();
    if (kind == "full_circle") {
        m.layout = make_layout_full_circle(M, N, r_c);
    } else {
        m.layout.kind = kind;
        m.layout.r_c = r_c;
        m.layout.source_angles = hdr.at("source_angles").get<std::vector<double>>();
        for (const auto& p : hdr.at("receivers"))
            m.layout.receivers.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    m.data.resize(std::size_t(M) * N);
    is.read(reinterpret_cast<char*>(m.data.data()),
            std::streamsize(m.data.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("truncated measurement file: " + path);
    return m;
}

}  // namespace invmed
