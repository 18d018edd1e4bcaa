// Transmitter/receiver layouts, trace operator T and its transpose,
// SNR-exact noise injection, and fine-mesh measurement synthesis.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "invmed/grid.hpp"

namespace invmed {

struct ReceiverLayout {
    std::vector<double> source_angles;                  // M incidence directions
    std::vector<std::pair<double, double>> receivers;   // N positions inside [0,1]^2
    double r_c = 0.45;
    std::string kind = "full_circle";

    int M() const { return int(source_angles.size()); }
    int N() const { return int(receivers.size()); }
};

// full_circle: receivers at 2*pi*i/N, sources at 2*pi*j/M on the circle of
// radius r_c about (0.5, 0.5). arc: both restricted to the aperture around
// center_angle.
ReceiverLayout make_layout_full_circle(int M, int N, double r_c = 0.45);
ReceiverLayout make_layout_arc(int M, int N, double center_angle, double aperture,
                               double r_c = 0.45);

struct MeasurementSet {
    std::vector<cplx> data;  // M x N, source-major
    double k = 0.0;
    ReceiverLayout layout;
    double snr_db = std::numeric_limits<double>::infinity();
    unsigned long long seed = 0;

    cplx& at(int src, int rec) { return data[std::size_t(src) * layout.N() + rec]; }
    const cplx& at(int src, int rec) const { return data[std::size_t(src) * layout.N() + rec]; }
    std::vector<cplx> row(int src) const;
};

// T: bilinear samples of a field at the receiver positions.
std::vector<cplx> trace(const ComplexField& u, const ReceiverLayout& layout);

// Exact algebraic transpose of trace: spreads each entry onto the four
// enclosing nodes with the same bilinear weights (no cell-area factor).
ComplexField trace_adjoint(const std::vector<cplx>& v, const ReceiverLayout& layout,
                           const Grid& grid);

// Circular complex Gaussian noise rescaled post-draw so the achieved SNR in
// dB matches the request exactly.
MeasurementSet add_noise(const MeasurementSet& m, double snr_db, unsigned long long seed);

// Anti-inverse-crime synthesis: forward-solve all sources on the fine grid,
// trace at the receivers, apply noise. Only the traces survive.
MeasurementSet synthesize(const RealField& q_true, const ReceiverLayout& layout, double k,
                          int fine_n, int coarse_n,
                          double snr_db = std::numeric_limits<double>::infinity(),
                          unsigned long long seed = 0);

// .msr format: JSON header line + M*N c128 little-endian values.
void write_measurements(const std::string& path, const MeasurementSet& m);
MeasurementSet read_measurements(const std::string& path);

}  // namespace invmed
