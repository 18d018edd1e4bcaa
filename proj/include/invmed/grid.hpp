// Uniform square grid, real/complex field containers and the .fld file format.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace invmed {

using cplx = std::complex<double>;

// Axis-aligned square grid of n x n nodes, spacing h = (x1-x0)/(n-1).
// Storage convention for fields: row-major with y as the slow index,
// values[j*n + i] holds the sample at (x0 + i*h, y0 + j*h).
struct Grid {
    int n = 0;
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    Grid() = default;
    Grid(int n_, double x0_, double y0_, double x1_, double y1_);

    // Unit square [0,1]^2, the interior region used throughout.
    static Grid unit(int n) { return Grid(n, 0.0, 0.0, 1.0, 1.0); }

    double h() const { return (x1 - x0) / (n - 1); }
    double x(int i) const { return x0 + i * h(); }
    double y(int j) const { return y0 + j * h(); }
    std::size_t size() const { return std::size_t(n) * n; }

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

template <class T>
struct Field {
    Grid grid;
    std::vector<T> values;

    Field() = default;
    explicit Field(const Grid& g, T fill = T{}) : grid(g), values(g.size(), fill) {}
    Field(const Grid& g, std::vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    T& at(int i, int j) { return values[std::size_t(j) * grid.n + i]; }
    const T& at(int i, int j) const { return values[std::size_t(j) * grid.n + i]; }
    std::size_t size() const { return values.size(); }
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

enum class NormKind { L2, Linf };

// Bilinear interpolation at a physical point; exact on nodes and for
// globally bilinear functions. Throws std::domain_error outside the bounds.
cplx bilinear_sample(const ComplexField& f, double px, double py);

// Bilinear stencil of a point: flattened indices of the four enclosing
// nodes and their weights. Shared by the trace operator and its transpose.
struct BilinearStencil {
    std::size_t idx[4];
    double w[4];
};
BilinearStencil bilinear_stencil(const Grid& g, double px, double py);

// Nodal injection onto a coarser grid; (n_fine-1) must be divisible by
// (n_coarse-1).
ComplexField restrict_field(const ComplexField& f_fine, int n_coarse);
RealField restrict_field(const RealField& f_fine, int n_coarse);

// L2 is cell-area weighted: h * sqrt(sum |f|^2).
double grid_norm(const ComplexField& f, NormKind kind = NormKind::L2);
double grid_norm(const RealField& f, NormKind kind = NormKind::L2);

ComplexField to_complex(const RealField& f);

// Incident plane wave exp(i k x.d) with direction d = (cos a, sin a).
ComplexField plane_wave(const Grid& g, double k, double angle);

// .fld file format: one JSON header line (0x0A terminated) followed by
// raw little-endian values, row-major. dtype "f64" or "c128".
void write_field(const std::string& path, const RealField& f, double k = 0.0, bool has_k = false);
void write_field(const std::string& path, const ComplexField& f, double k = 0.0, bool has_k = false);

struct LoadedField {
    bool is_complex = false;
    RealField real;
    ComplexField complex;
    bool has_k = false;
    double k = 0.0;
};
LoadedField read_field(const std::string& path);

}  // namespace invmed
