#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "lmbo/errors.hpp"
#include "lmbo/special_fns.hpp"

using namespace lmbo;

namespace {

// Plain power series sum_m (a/2)^{2m+n} / (m! (m+n)!) in long double, times e^{-a}.
// Only used for moderate a where nothing overflows.
double series_oracle(int n, double a) {
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k) {
        term *= (a / 2.0L) / k;
    }
    long double sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= (a / 2.0L) * (a / 2.0L) / (static_cast<long double>(m) * (m + n));
        sum += term;
        if (term < 1e-30L * sum) {
            break;
        }
    }
    return static_cast<double>(sum * std::exp(-static_cast<long double>(a)));
}

// Composite Simpson on [a, b] for e^{-x^2/4}.
double simpson_gauss(double a, double b, int panels) {
    const double hstep = (b - a) / panels;
    double s = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double x = a + k * hstep;
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * std::exp(-x * x / 4.0);
    }
    return s * hstep / 3.0;
}

}  // namespace

TEST_CASE("scaled Bessel values at zero argument") {
    CHECK(scaled_bessel_i(0, 0.0) == 1.0);
    CHECK(scaled_bessel_i(3, 0.0) == 0.0);
}

TEST_CASE("scaled Bessel I_1(2) e^-2 against its power series") {
    const double expected = series_oracle(1, 2.0);
    CHECK(expected == doctest::Approx(0.215269).epsilon(1e-5));
    CHECK(std::abs(scaled_bessel_i(1, 2.0) - expected) <= 1e-12 * expected);
}

TEST_CASE("scaled Bessel matches the long-double series across orders and arguments") {
    for (double a : {0.1, 0.5, 2.0, 7.5, 20.0, 29.0, 31.0, 45.0}) {
        for (int n : {0, 1, 2, 5, 10, 25}) {
            const double ref = series_oracle(n, a);
            CAPTURE(a);
            CAPTURE(n);
            CHECK(std::abs(scaled_bessel_i(n, a) - ref) <= 1e-12 * ref + 1e-300);
        }
    }
}

TEST_CASE("large arguments approach the Gaussian limit and never overflow") {
    for (double a : {1e3, 1e4, 1e5, 1e6}) {
        const double g0 = scaled_bessel_i(0, a);
        CHECK(std::isfinite(g0));
        // e^{-a} I_0(a) ~ 1/sqrt(2 pi a) (1 + 1/(8a) + 9/(128 a^2))
        const double asym = (1.0 + 1.0 / (8 * a) + 9.0 / (128 * a * a)) / std::sqrt(2 * std::numbers::pi * a);
        CHECK(std::abs(g0 - asym) <= 1e-10 * asym);
    }
}

TEST_CASE("sequence agrees with the pointwise evaluator") {
    for (double a : {0.5, 10.0, 100.0, 2500.0}) {
        const auto seq = scaled_bessel_i_sequence(40, a);
        REQUIRE(seq.size() == 41);
        for (int n = 0; n <= 40; ++n) {
            const double v = scaled_bessel_i(n, a);
            CHECK(std::abs(seq[static_cast<std::size_t>(n)] - v) <= 1e-12 * v + 1e-300);
        }
    }
}

TEST_CASE("recurrence I_{n-1} - I_{n+1} = (2n/a) I_n on scaled values") {
    for (double a : {0.5, 2.0, 10.0, 100.0}) {
        for (int n = 1; n <= 50; ++n) {
            const double lhs = scaled_bessel_i(n - 1, a) - scaled_bessel_i(n + 1, a);
            const double rhs = 2.0 * n / a * scaled_bessel_i(n, a);
            CAPTURE(a);
            CAPTURE(n);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), std::abs(rhs)));
        }
    }
}

TEST_CASE("scaled Bessel invariants: bounded and non-increasing in n") {
    for (double a : {0.3, 4.0, 60.0}) {
        double prev = 1.0;
        for (int n = 0; n < 60; ++n) {
            const double v = scaled_bessel_i(n, a);
            CHECK(v >= 0.0);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("scaled Bessel rejects bad arguments") {
    CHECK_THROWS_AS(scaled_bessel_i(0, -1.0), DomainError);
    CHECK_THROWS_AS(scaled_bessel_i(-1, 1.0), DomainError);
    CHECK_THROWS_AS(scaled_bessel_i(0, std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(scaled_bessel_i(0, std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("gauss_tail fixed values") {
    CHECK(std::abs(gauss_tail(0.0) - std::sqrt(std::numbers::pi)) <= 1e-13);
    CHECK(gauss_tail(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(gauss_tail(40.0) <= 1e-13);
    const double oracle = simpson_gauss(2.0, 40.0, 20000);
    CHECK(oracle == doctest::Approx(std::sqrt(std::numbers::pi) * std::erfc(1.0)).epsilon(1e-12));
    CHECK(std::abs(gauss_tail(2.0) - oracle) <= 1e-13);
}

TEST_CASE("gauss_tail against Simpson quadrature on a range of cut points") {
    for (double a : {0.05, 0.7, 1.3, 3.0, 6.0, 11.0}) {
        CHECK(std::abs(gauss_tail(a) - simpson_gauss(a, 60.0, 40000)) <= 1e-13);
    }
}

TEST_CASE("head plus tail is sqrt(pi) and tail is strictly decreasing") {
    for (double a : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(std::abs(gauss_head(a) + gauss_tail(a) - std::sqrt(std::numbers::pi)) <= 1e-12);
    }
    double prev = gauss_tail(0.0);
    for (double a = 0.25; a < 12.0; a += 0.25) {
        const double v = gauss_tail(a);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("gauss_tail rejects negative and NaN input") {
    CHECK_THROWS_AS(gauss_tail(-0.1), DomainError);
    CHECK_THROWS_AS(gauss_tail(std::numeric_limits<double>::quiet_NaN()), DomainError);
}
