#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace hpt::kernels {

// Accumulated cross moments of two equal-length slices.
struct PairMoments {
    double sum_x = 0.0;
    double sum_y = 0.0;
    double sum_xx = 0.0;
    double sum_yy = 0.0;
    double sum_xy = 0.0;
};

enum class Backend { scalar, avx2 };

// Backend in use for the dispatched entry points below. Chosen once at
// startup from CPU capabilities; force_backend overrides it (tests, debugging).
Backend active_backend();
void force_backend(Backend b);
bool backend_available(Backend b);
std::string backend_name(Backend b);

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
PairMoments pair_moments(std::span<const double> x, std::span<const double> y);
// Sum over t=1..n-1 of |x[t]| * |x[t-1]| (the bipower accumulation).
double abs_adjacent_sum(std::span<const double> x);

// Scalar reference implementations, always available; the dispatched versions
// above must agree with these to tight tolerance on any input.
namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
PairMoments pair_moments(std::span<const double> x, std::span<const double> y);
double abs_adjacent_sum(std::span<const double> x);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HPT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
PairMoments pair_moments(std::span<const double> x, std::span<const double> y);
double abs_adjacent_sum(std::span<const double> x);
}  // namespace avx2
#endif

}  // namespace hpt::kernels
