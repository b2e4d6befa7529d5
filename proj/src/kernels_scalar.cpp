#include <cmath>

#include "hpt/kernels.hpp"

namespace hpt::kernels::scalar {

double sum(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    const size_t n = x.size();
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

PairMoments pair_moments(std::span<const double> x, std::span<const double> y) {
    PairMoments m;
    const size_t n = x.size();
    for (size_t i = 0; i < n; ++i) {
        const double a = x[i], b = y[i];
        m.sum_x += a;
        m.sum_y += b;
        m.sum_xx += a * a;
        m.sum_yy += b * b;
        m.sum_xy += a * b;
    }
    return m;
}

double abs_adjacent_sum(std::span<const double> x) {
    double acc = 0.0;
    for (size_t t = 1; t < x.size(); ++t) acc += std::fabs(x[t]) * std::fabs(x[t - 1]);
    return acc;
}

}  // namespace hpt::kernels::scalar
