#pragma once

#include <vector>

namespace lmbo {

/// e^{-alpha} I_n(alpha), the exponentially scaled modified Bessel function of
/// integer order. Never overflows; relative accuracy ~1e-12 for alpha <= 1e6.
/// Throws DomainError for n < 0, alpha < 0 or non-finite alpha.
double scaled_bessel_i(int n, double alpha);

/// e^{-alpha} I_k(alpha) for k = 0..n_max in one backward-recurrence pass.
std::vector<double> scaled_bessel_i_sequence(int n_max, double alpha);

/// Integral of e^{-x^2/4} over [a, inf). Absolute accuracy 1e-13.
double gauss_tail(double a);

/// Integral of e^{-x^2/4} over [0, a]; gauss_head(a) + gauss_tail(a) = sqrt(pi).
double gauss_head(double a);

namespace detail {

// Power series with the e^{-alpha} factor folded into the leading term.
double scaled_bessel_series(int n, double alpha);

// Miller backward recurrence normalised by e^{-a}(I_0 + 2 sum I_k) = 1.
std::vector<double> scaled_bessel_miller(int n_max, double alpha);

}  // namespace detail

}  // namespace lmbo
