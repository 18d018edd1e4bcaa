#include "invmed/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace invmed {

double relative_error(const RealField& q_rec, const RealField& q_true) {
    if (q_rec.grid != q_true.grid)
        throw std::invalid_argument("relative_error: fields on different grids");
    const double nt = grid_norm(q_true, NormKind::L2);
    if (nt == 0.0) throw std::invalid_argument("relative_error: ground truth is zero");
    RealField diff = q_rec;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= q_true.values[i];
    return grid_norm(diff, NormKind::L2) / nt;
}

double ssim(const RealField& q_rec, const RealField& q_true) {
    if (q_rec.grid != q_true.grid) throw std::invalid_argument("ssim: fields on different grids");
    const int n = q_rec.grid.n;
    constexpr int W = 11, HW = 5;
    constexpr double sigma = 1.5;
    if (n < W) throw std::invalid_argument("ssim: grid smaller than the 11x11 window");

    const auto [mn, mx] = std::minmax_element(q_true.values.begin(), q_true.values.end());
    const double D = *mx - *mn;
    if (D == 0.0) throw std::invalid_argument("ssim: constant ground truth (zero dynamic range)");
    const double C1 = (0.01 * D) * (0.01 * D);
    const double C2 = (0.03 * D) * (0.03 * D);

    double w[W];
    double wsum = 0.0;
    for (int t = 0; t < W; ++t) {
        w[t] = std::exp(-0.5 * (t - HW) * (t - HW) / (sigma * sigma));
        wsum += w[t];
    }
    for (auto& v : w) v /= wsum;

    // windows fully inside the image
    double acc = 0.0;
    long count = 0;
    for (int cy = HW; cy < n - HW; ++cy) {
        for (int cx = HW; cx < n - HW; ++cx) {
            double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
            for (int dy = -HW; dy <= HW; ++dy)
                for (int dx = -HW; dx <= HW; ++dx) {
                    const double wt = w[dy + HW] * w[dx + HW];
                    const double a = q_rec.at(cx + dx, cy + dy);
                    const double b = q_true.at(cx + dx, cy + dy);
                    mu_a += wt * a;
                    mu_b += wt * b;
                    aa += wt * a * a;
                    bb += wt * b * b;
                    ab += wt * a * b;
                }
            const double va = aa - mu_a * mu_a;
            const double vb = bb - mu_b * mu_b;
            const double cov = ab - mu_a * mu_b;
            acc += ((2 * mu_a * mu_b + C1) * (2 * cov + C2)) /
                   ((mu_a * mu_a + mu_b * mu_b + C1) * (va + vb + C2));
            ++count;
        }
    }
    return acc / double(count);
}

}  // namespace invmed
