#pragma once

#include <iosfwd>
#include <span>

namespace lmbo {

/// Value of the velocity criterion Phi(n, mu kappa) together with the bound on
/// the part of the infinite tail that was not summed.
struct PhiEvaluation {
    int n = 0;
    double mu_kappa = 0.0;
    double value = 0.0;
    double remainder_bound = 0.0;
    int terms = 0;  // number of tail terms summed beyond n
};

/// Phi(n, c) = sum_{k<n} H(a_k) + H(a_n)/2 - T(a_n)/2 - sum_{k>n} T(a_k),
/// a_k = sqrt(2k / c), H/T the head/tail integrals of e^{-x^2/4}.
/// Throws DomainError for n < 0 or c <= 0.
PhiEvaluation phi_eval(int n, double mu_kappa);
double phi(int n, double mu_kappa);

struct VelocityReport {
    double mu = 0.0;
    double kappa = 0.0;
    int n0 = 0;
    double velocity = 0.0;  // n0 / mu
    double phi_at_n0 = 0.0;
    double phi_at_n0_plus_1 = 0.0;
};

/// n0 = max{n >= 0 : Phi(n, mu kappa) <= 0}; kappa = 0 gives n0 = 0 with the
/// c -> 0 limits (n - 1/2) sqrt(pi) as residuals.
VelocityReport discrete_velocity(double mu, double kappa);

/// Root of Phi(1, .) on [0.1, 10] by bisection; 0 < tol < 0.1.
/// Throws NumericalError if the bracket does not change sign.
double pinning_threshold(double tol);

/// n0 / (mu kappa); mu >= 10. Returns 0 when pinned.
double asymptotic_consistency(double mu, double kappa);

/// |int_0^inf int_{sqrt(2x)}^inf e^{-y^2/4} dy dx - sqrt(pi)|.
double sqrt_pi_identity_check();

/// Inner integrand of the identity check, int_{sqrt(2x)}^inf e^{-y^2/4} dy.
double sqrt_pi_integrand(double x);

/// Columns mu_kappa, n0 for kappa = c / mu over the given products c.
void write_velocity_sweep_csv(std::ostream& os, double mu, std::span<const double> mu_kappas);

/// Columns mu, n0_over_mu, kappa.
void write_consistency_csv(std::ostream& os, double kappa, std::span<const double> mus);

namespace detail {

/// Largest n >= lo with f(n) <= 0 for f increasing, given f(lo) <= 0.
/// Exponential stepping, then integer bisection.
template <typename F>
int last_nonpositive(F&& f, int lo) {
    int good = lo;
    int step = 1;
    int bad = lo + step;
    while (f(bad) <= 0.0) {
        good = bad;
        step *= 2;
        bad = good + step;
    }
    while (bad - good > 1) {
        const int mid = good + (bad - good) / 2;
        if (f(mid) <= 0.0) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    return good;
}

}  // namespace detail

}  // namespace lmbo
