#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hpt/kernels.hpp"

namespace k = hpt::kernels;

TEST_CASE("scalar kernels on hand-checked inputs") {
    std::vector<double> x = {2.0, -3.0, 4.0};
    std::vector<double> y = {1.0, 0.5, -2.0};
    CHECK(k::scalar::sum(x) == doctest::Approx(3.0));
    CHECK(k::scalar::dot(x, y) == doctest::Approx(2.0 - 1.5 - 8.0));
    // |2||-3| + |-3||4| = 6 + 12
    CHECK(k::scalar::abs_adjacent_sum(x) == doctest::Approx(18.0));

    k::PairMoments m = k::scalar::pair_moments(x, y);
    CHECK(m.sum_x == doctest::Approx(3.0));
    CHECK(m.sum_y == doctest::Approx(-0.5));
    CHECK(m.sum_xx == doctest::Approx(4.0 + 9.0 + 16.0));
    CHECK(m.sum_yy == doctest::Approx(1.0 + 0.25 + 4.0));
    CHECK(m.sum_xy == doctest::Approx(-7.5));
}

TEST_CASE("edge lengths") {
    std::vector<double> none;
    std::vector<double> one = {5.0};
    CHECK(k::scalar::sum(none) == 0.0);
    CHECK(k::scalar::abs_adjacent_sum(none) == 0.0);
    CHECK(k::scalar::abs_adjacent_sum(one) == 0.0);
}

#if defined(HPT_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!k::backend_available(k::Backend::avx2)) {
        MESSAGE("avx2 not available on this host, skipping");
        return;
    }
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 3.0);
    // Odd lengths around the vector width exercise every remainder path.
    for (int n = 0; n <= 67; ++n) {
        std::vector<double> x(static_cast<size_t>(n)), y(static_cast<size_t>(n));
        for (auto& v : x) v = gauss(rng);
        for (auto& v : y) v = gauss(rng);

        CHECK(k::avx2::sum(x) == doctest::Approx(k::scalar::sum(x)).epsilon(1e-12));
        CHECK(k::avx2::dot(x, y) == doctest::Approx(k::scalar::dot(x, y)).epsilon(1e-12));
        CHECK(k::avx2::abs_adjacent_sum(x) ==
              doctest::Approx(k::scalar::abs_adjacent_sum(x)).epsilon(1e-12));
        k::PairMoments a = k::avx2::pair_moments(x, y);
        k::PairMoments s = k::scalar::pair_moments(x, y);
        CHECK(a.sum_x == doctest::Approx(s.sum_x).epsilon(1e-12));
        CHECK(a.sum_y == doctest::Approx(s.sum_y).epsilon(1e-12));
        CHECK(a.sum_xx == doctest::Approx(s.sum_xx).epsilon(1e-12));
        CHECK(a.sum_yy == doctest::Approx(s.sum_yy).epsilon(1e-12));
        CHECK(a.sum_xy == doctest::Approx(s.sum_xy).epsilon(1e-12));
    }
}
#endif

TEST_CASE("force_backend switches the dispatched entry points") {
    const k::Backend original = k::active_backend();
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0};

    k::force_backend(k::Backend::scalar);
    CHECK(k::active_backend() == k::Backend::scalar);
    CHECK(k::sum(x) == doctest::Approx(45.0));

    if (k::backend_available(k::Backend::avx2)) {
        k::force_backend(k::Backend::avx2);
        CHECK(k::active_backend() == k::Backend::avx2);
        CHECK(k::sum(x) == doctest::Approx(45.0));
    }
    k::force_backend(original);
}

TEST_CASE("backend names") {
    CHECK(k::backend_name(k::Backend::scalar) == "scalar");
    CHECK(k::backend_name(k::Backend::avx2) == "avx2");
}
