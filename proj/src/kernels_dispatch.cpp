#include "hpt/kernels.hpp"

namespace hpt::kernels {

namespace {

Backend detect_backend() {
#if defined(HPT_HAVE_AVX2_KERNELS)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend& backend_ref() {
    static Backend b = detect_backend();
    return b;
}

}  // namespace

Backend active_backend() { return backend_ref(); }

void force_backend(Backend b) {
    if (!backend_available(b)) return;
    backend_ref() = b;
}

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
#if defined(HPT_HAVE_AVX2_KERNELS)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> x) {
#if defined(HPT_HAVE_AVX2_KERNELS)
    if (backend_ref() == Backend::avx2) return avx2::sum(x);
#endif
    return scalar::sum(x);
}

double dot(std::span<const double> x, std::span<const double> y) {
#if defined(HPT_HAVE_AVX2_KERNELS)
    if (backend_ref() == Backend::avx2) return avx2::dot(x, y);
#endif
    return scalar::dot(x, y);
}

PairMoments pair_moments(std::span<const double> x, std::span<const double> y) {
#if defined(HPT_HAVE_AVX2_KERNELS)
    if (backend_ref() == Backend::avx2) return avx2::pair_moments(x, y);
#endif
    return scalar::pair_moments(x, y);
}

double abs_adjacent_sum(std::span<const double> x) {
#if defined(HPT_HAVE_AVX2_KERNELS)
    if (backend_ref() == Backend::avx2) return avx2::abs_adjacent_sum(x);
#endif
    return scalar::abs_adjacent_sum(x);
}

}  // namespace hpt::kernels
