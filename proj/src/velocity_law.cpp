#include "lmbo/velocity_law.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "lmbo/csv.hpp"
#include "lmbo/errors.hpp"
#include "lmbo/special_fns.hpp"

namespace lmbo {

namespace {

constexpr double kTailCutoff = 1e-14;

double node(int k, double c) { return std::sqrt(2.0 * k / c); }

// sum_{k > K} T(sqrt(2k/c)) <= int_K^inf T(sqrt(2x/c)) dx, and T(a) <= (2/a) e^{-a^2/4}.
double tail_remainder_bound(int k_last, double c) {
    const double a = node(k_last, c);
    return 4.0 * c / a * std::exp(-k_last / (2.0 * c));
}

}  // namespace

PhiEvaluation phi_eval(int n, double mu_kappa) {
    if (n < 0) {
        throw DomainError("phi: n must be >= 0");
    }
    if (!(mu_kappa > 0.0) || !std::isfinite(mu_kappa)) {
        throw DomainError("phi: mu*kappa must be positive and finite");
    }
    const double c = mu_kappa;
    long double acc = 0.0L;
    for (int k = 1; k < n; ++k) {
        acc += gauss_head(node(k, c));
    }
    // At n = 0 the node sits at a = 0 and only the -sqrt(pi)/2 half survives.
    const double a_n = node(n, c);
    acc += 0.5L * gauss_head(a_n);
    acc -= 0.5L * gauss_tail(a_n);
    long double tail = 0.0L;
    int k = n + 1;
    int terms = 0;
    double bound = std::numeric_limits<double>::infinity();
    for (;; ++k, ++terms) {
        const double term = gauss_tail(node(k, c));
        tail += term;
        if (terms % 32 == 31 || term == 0.0) {
            bound = tail_remainder_bound(k, c);
            if (bound < kTailCutoff) {
                ++terms;
                break;
            }
        }
    }
    PhiEvaluation out;
    out.n = n;
    out.mu_kappa = c;
    out.value = static_cast<double>(acc - tail);
    out.remainder_bound = bound;
    out.terms = terms;
    return out;
}

double phi(int n, double mu_kappa) { return phi_eval(n, mu_kappa).value; }

VelocityReport discrete_velocity(double mu, double kappa) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("discrete_velocity: mu must be positive");
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw DomainError("discrete_velocity: kappa must be >= 0");
    }
    VelocityReport r;
    r.mu = mu;
    r.kappa = kappa;
    if (kappa == 0.0) {
        r.n0 = 0;
        r.velocity = 0.0;
        r.phi_at_n0 = -0.5 * std::sqrt(std::numbers::pi);
        r.phi_at_n0_plus_1 = 0.5 * std::sqrt(std::numbers::pi);
        return r;
    }
    const double c = mu * kappa;
    r.n0 = detail::last_nonpositive([c](int n) { return phi(n, c); }, 0);
    r.velocity = r.n0 / mu;
    r.phi_at_n0 = phi(r.n0, c);
    r.phi_at_n0_plus_1 = phi(r.n0 + 1, c);
    return r;
}

double pinning_threshold(double tol) {
    if (!(tol > 0.0 && tol < 0.1)) {
        throw DomainError("pinning_threshold: tol must lie in (0, 0.1)");
    }
    double lo = 0.1;
    double hi = 10.0;
    const double f_lo = phi(1, lo);
    const double f_hi = phi(1, hi);
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        throw NumericalError("pinning_threshold: phi(1, .) does not change sign on [0.1, 10]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (phi(1, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double asymptotic_consistency(double mu, double kappa) {
    if (!(mu >= 10.0)) {
        throw DomainError("asymptotic_consistency: mu must be >= 10");
    }
    const VelocityReport r = discrete_velocity(mu, kappa);
    if (r.n0 == 0) {
        return 0.0;
    }
    return r.n0 / (mu * kappa);
}

double sqrt_pi_integrand(double x) {
    if (!(x >= 0.0)) {
        throw DomainError("sqrt_pi_integrand: x must be >= 0");
    }
    return gauss_tail(std::sqrt(2.0 * x));
}

double sqrt_pi_identity_check() {
    using boost::math::quadrature::gauss_kronrod;
    // The integrand has a sqrt-type kink at 0 and decays like e^{-x/2}; split
    // the range so each piece is smooth on its own scale.
    const double cuts[] = {0.0, 1e-4, 1e-2, 0.25, 1.0, 4.0, 16.0, 64.0, 256.0, 800.0};
    long double total = 0.0L;
    for (std::size_t k = 0; k + 1 < std::size(cuts); ++k) {
        total += gauss_kronrod<double, 61>::integrate(sqrt_pi_integrand, cuts[k], cuts[k + 1], 15, 1e-15);
    }
    return std::abs(static_cast<double>(total) - std::sqrt(std::numbers::pi));
}

void write_velocity_sweep_csv(std::ostream& os, double mu, std::span<const double> mu_kappas) {
    CsvWriter csv(os, {"mu_kappa", "n0"});
    for (double c : mu_kappas) {
        csv.row(c, discrete_velocity(mu, c / mu).n0);
    }
}

void write_consistency_csv(std::ostream& os, double kappa, std::span<const double> mus) {
    CsvWriter csv(os, {"mu", "n0_over_mu", "kappa"});
    for (double mu : mus) {
        const VelocityReport r = discrete_velocity(mu, kappa);
        csv.row(mu, r.n0 / mu, kappa);
    }
}

}  // namespace lmbo
