#include "lmbo/special_fns.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lmbo/errors.hpp"

namespace lmbo {

namespace {

constexpr double kSeriesLimit = 30.0;

void check_argument(int n, double alpha) {
    if (n < 0) {
        throw DomainError("scaled_bessel_i: negative order " + std::to_string(n));
    }
    if (!std::isfinite(alpha)) {
        throw DomainError("scaled_bessel_i: non-finite argument");
    }
    if (alpha < 0.0) {
        throw DomainError("scaled_bessel_i: negative argument " + std::to_string(alpha));
    }
}

// Starting index for the backward recurrence. G_k(alpha) behaves like a
// Gaussian of variance alpha in k, so 14 standard deviations past n_max leaves
// the seed error below e^{-98} relative to the entries we keep.
int miller_start(int n_max, double alpha) {
    return n_max + static_cast<int>(std::ceil(14.0 * std::sqrt(alpha))) + 30;
}

}  // namespace

namespace detail {

double scaled_bessel_series(int n, double alpha) {
    if (alpha == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double half = 0.5 * alpha;
    const double log_lead = -alpha + n * std::log(half) - std::lgamma(n + 1.0);
    if (log_lead < -745.0) {
        return 0.0;
    }
    double term = std::exp(log_lead);
    const double q = half * half;
    long double sum = term;
    for (int m = 0; m < 100000; ++m) {
        term *= q / ((m + 1.0) * (m + 1.0 + n));
        sum += term;
        if (term < 1e-18 * static_cast<double>(sum)) {
            break;
        }
    }
    return static_cast<double>(sum);
}

std::vector<double> scaled_bessel_miller(int n_max, double alpha) {
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (alpha == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const int start = miller_start(n_max, alpha);
    const double two_over_alpha = 2.0 / alpha;

    // Unnormalised minimal solution of I_{k-1} = I_{k+1} + (2k/alpha) I_k.
    long double above = 0.0L;
    long double current = 1e-300L;
    long double norm = 0.0L;
    for (int k = start; k >= 1; --k) {
        const long double below = above + (two_over_alpha * k) * current;
        if (k <= n_max) {
            out[static_cast<std::size_t>(k)] = static_cast<double>(current);
        }
        norm += 2.0L * current;
        above = current;
        current = below;
        if (current > 1e200L) {
            // Rescale everything gathered so far.
            const long double s = 1e-200L;
            above *= s;
            current *= s;
            norm *= s;
            for (int j = k; j <= n_max; ++j) {
                out[static_cast<std::size_t>(j)] =
                    static_cast<double>(out[static_cast<std::size_t>(j)] * s);
            }
        }
    }
    norm += current;
    out[0] = static_cast<double>(current);
    for (auto& v : out) {
        v = static_cast<double>(static_cast<long double>(v) / norm);
    }
    return out;
}

}  // namespace detail

double scaled_bessel_i(int n, double alpha) {
    check_argument(n, alpha);
    if (alpha <= kSeriesLimit) {
        return detail::scaled_bessel_series(n, alpha);
    }
    return detail::scaled_bessel_miller(n, alpha).back();
}

std::vector<double> scaled_bessel_i_sequence(int n_max, double alpha) {
    check_argument(n_max, alpha);
    if (alpha <= kSeriesLimit) {
        std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
        for (int k = 0; k <= n_max; ++k) {
            out[static_cast<std::size_t>(k)] = detail::scaled_bessel_series(k, alpha);
        }
        return out;
    }
    return detail::scaled_bessel_miller(n_max, alpha);
}

double gauss_tail(double a) {
    if (!std::isfinite(a) && a > 0.0) {
        return 0.0;
    }
    if (!std::isfinite(a) || a < 0.0) {
        throw DomainError("gauss_tail: argument must be finite and non-negative");
    }
    return std::sqrt(std::numbers::pi) * std::erfc(0.5 * a);
}

double gauss_head(double a) {
    if (!std::isfinite(a) && a > 0.0) {
        return std::sqrt(std::numbers::pi);
    }
    if (!std::isfinite(a) || a < 0.0) {
        throw DomainError("gauss_head: argument must be finite and non-negative");
    }
    return std::sqrt(std::numbers::pi) * std::erf(0.5 * a);
}

}  // namespace lmbo
