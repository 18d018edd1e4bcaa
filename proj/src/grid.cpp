#include "invmed/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace invmed {

Grid::Grid(int n_, double x0_, double y0_, double x1_, double y1_)
    : n(n_), x0(x0_), y0(y0_), x1(x1_), y1(y1_) {
    if (n < 3) throw std::invalid_argument("Grid: n >= 3 required");
    if (!(x1 > x0)) throw std::invalid_argument("Grid: x1 > x0 required");
    if (std::abs((y1 - y0) - (x1 - x0)) > 1e-12 * (x1 - x0))
        throw std::invalid_argument("Grid: domain must be square");
}

bool Grid::operator==(const Grid& o) const {
    return n == o.n && x0 == o.x0 && y0 == o.y0 && x1 == o.x1 && y1 == o.y1;
}

BilinearStencil bilinear_stencil(const Grid& g, double px, double py) {
    const double h = g.h();
    const double eps = 1e-12 * (g.x1 - g.x0);
    if (px < g.x0 - eps || px > g.x1 + eps || py < g.y0 - eps || py > g.y1 + eps)
        throw std::domain_error("bilinear_stencil: point outside grid bounds");
    double fx = (px - g.x0) / h;
    double fy = (py - g.y0) / h;
    int i = int(std::floor(fx));
    int j = int(std::floor(fy));
    if (i < 0) i = 0;
    if (j < 0) j = 0;
    if (i > g.n - 2) i = g.n - 2;
    if (j > g.n - 2) j = g.n - 2;
    double tx = fx - i;
    double ty = fy - j;
    BilinearStencil s;
    const std::size_t base = std::size_t(j) * g.n + i;
    s.idx[0] = base;
    s.idx[1] = base + 1;
    s.idx[2] = base + g.n;
    s.idx[3] = base + g.n + 1;
    s.w[0] = (1 - tx) * (1 - ty);
    s.w[1] = tx * (1 - ty);
    s.w[2] = (1 - tx) * ty;
    s.w[3] = tx * ty;
    return s;
}

cplx bilinear_sample(const ComplexField& f, double px, double py) {
    const BilinearStencil s = bilinear_stencil(f.grid, px, py);
    cplx v = 0.0;
    for (int m = 0; m < 4; ++m) v += s.w[m] * f.values[s.idx[m]];
    return v;
}

namespace {

template <class T>
Field<T> restrict_impl(const Field<T>& f_fine, int n_coarse) {
    const int nf = f_fine.grid.n;
    if (n_coarse < 3 || (nf - 1) % (n_coarse - 1) != 0)
        throw std::invalid_argument("restrict_field: (n_fine-1) not divisible by (n_coarse-1)");
    const int stride = (nf - 1) / (n_coarse - 1);
    Grid gc(n_coarse, f_fine.grid.x0, f_fine.grid.y0, f_fine.grid.x1, f_fine.grid.y1);
    Field<T> out(gc);
    for (int j = 0; j < n_coarse; ++j)
        for (int i = 0; i < n_coarse; ++i)
            out.at(i, j) = f_fine.at(i * stride, j * stride);
    return out;
}

template <class T>
double norm_impl(const Field<T>& f, NormKind kind) {
    if (kind == NormKind::Linf) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(cplx(v));
    return f.grid.h() * std::sqrt(s);
}

}  // namespace

ComplexField restrict_field(const ComplexField& f, int nc) { return restrict_impl(f, nc); }
RealField restrict_field(const RealField& f, int nc) { return restrict_impl(f, nc); }

double grid_norm(const ComplexField& f, NormKind kind) { return norm_impl(f, kind); }
double grid_norm(const RealField& f, NormKind kind) { return norm_impl(f, kind); }

ComplexField to_complex(const RealField& f) {
    ComplexField out(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = f.values[i];
    return out;
}

ComplexField plane_wave(const Grid& g, double k, double angle) {
    ComplexField out(g);
    const double dx = std::cos(angle), dy = std::sin(angle);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            out.at(i, j) = std::polar(1.0, k * (g.x(i) * dx + g.y(j) * dy));
    return out;
}

namespace {

void write_header(std::ofstream& os, const Grid& g, const char* dtype, double k, bool has_k) {
    nlohmann::json hdr;
    hdr["nx"] = g.n;
    hdr["ny"] = g.n;
    hdr["dtype"] = dtype;
    hdr["order"] = "row-major";
    hdr["domain"] = {g.x0, g.y0, g.x1, g.y1};
    if (has_k)
        hdr["k"] = k;
    else
        hdr["k"] = nullptr;
    const std::string line = hdr.dump();
    os.write(line.data(), std::streamsize(line.size()));
    os.put('\n');
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

}  // namespace

void write_field(const std::string& path, const RealField& f, double k, bool has_k) {
    auto os = open_out(path);
    write_header(os, f.grid, "f64", k, has_k);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             std::streamsize(f.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_field(const std::string& path, const ComplexField& f, double k, bool has_k) {
    auto os = open_out(path);
    write_header(os, f.grid, "c128", k, has_k);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             std::streamsize(f.values.size() * sizeof(cplx)));
    if (!os) throw std::runtime_error("write failed: " + path);
}

LoadedField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open field file: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("missing header: " + path);
    nlohmann::json hdr = nlohmann::json::parse(line);
    const int nx = hdr.at("nx").get<int>();
    const int ny = hdr.at("ny").get<int>();
    if (nx != ny) throw std::runtime_error("non-square field file: " + path);
    if (hdr.at("order").get<std::string>() != "row-major")
        throw std::runtime_error("unsupported storage order: " + path);
    const auto dom = hdr.at("domain");
    Grid g(nx, dom[0].get<double>(), dom[1].get<double>(), dom[2].get<double>(),
           dom[3].get<double>());
    LoadedField out;
    if (!hdr.at("k").is_null()) {
        out.has_k = true;
        out.k = hdr.at("k").get<double>();
    }
    const std::string dtype = hdr.at("dtype").get<std::string>();
    if (dtype == "f64") {
        out.real = RealField(g);
        is.read(reinterpret_cast<char*>(out.real.values.data()),
                std::streamsize(out.real.values.size() * sizeof(double)));
    } else if (dtype == "c128") {
        out.is_complex = true;
        out.complex = ComplexField(g);
        is.read(reinterpret_cast<char*>(out.complex.values.data()),
                std::streamsize(out.complex.values.size() * sizeof(cplx)));
    } else {
        throw std::runtime_error("unknown dtype '" + dtype + "' in " + path);
    }
    if (!is) throw std::runtime_error("truncated field file: " + path);
    return out;
}

}  // namespace invmed
