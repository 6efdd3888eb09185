#include "lmbo/heat_kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <ostream>

#include "lmbo/csv.hpp"
#include "lmbo/errors.hpp"
#include "lmbo/special_fns.hpp"

namespace lmbo {

double KernelTable::mass() const {
    long double s = 0.0L;
    for (int n = radius; n >= 1; --n) {
        s += coeffs[static_cast<std::size_t>(n)];
    }
    return static_cast<double>(2.0L * s + coeffs[0]);
}

namespace {

// Certified bound on the two-sided remainder sum_{|k| > r} G_k given the
// first two omitted one-sided terms.
double certified_tail(double g1, double g2) {
    if (g1 == 0.0) {
        return 0.0;
    }
    const double rho = g2 / g1;
    if (!(rho < 1.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * g1 / (1.0 - rho);
}

}  // namespace

KernelTable kernel_table(double alpha, double eps_tail) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw DomainError("kernel_table: alpha must be finite and non-negative");
    }
    if (!(eps_tail > 0.0 && eps_tail < 1.0)) {
        throw DomainError("kernel_table: eps_tail must lie in (0, 1)");
    }
    KernelTable table;
    table.alpha = alpha;
    if (alpha == 0.0) {
        table.coeffs = {1.0};
        return table;
    }

    const int cap = static_cast<int>(std::ceil(std::max(3.0 * alpha, 64.0))) + 64;
    // Enough entries to locate the cut without recomputation in the common case.
    int n_eval = std::min(cap, static_cast<int>(std::ceil(10.0 * std::sqrt(alpha))) + 40);
    for (;;) {
        const auto g = scaled_bessel_i_sequence(n_eval + 2, alpha);
        for (int r = 0; r <= n_eval; ++r) {
            const double bound = certified_tail(g[static_cast<std::size_t>(r) + 1],
                                                g[static_cast<std::size_t>(r) + 2]);
            if (bound <= eps_tail) {
                table.radius = r;
                table.coeffs.assign(g.begin(), g.begin() + r + 1);
                table.tail_bound = bound;
                return table;
            }
        }
        if (n_eval >= cap) {
            throw TruncationError("kernel_table: tail tolerance unreachable within radius cap",
                                  certified_tail(g[static_cast<std::size_t>(n_eval) + 1],
                                                 g[static_cast<std::size_t>(n_eval) + 2]));
        }
        n_eval = std::min(cap, 2 * n_eval);
    }
}

double green_integral_oracle(int n, double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1e4) {
        throw DomainError("green_integral_oracle: alpha must lie in [0, 1e4]");
    }
    const auto integrand = [n, alpha](double xi) {
        return std::cos(n * xi) * std::exp(alpha * (std::cos(xi) - 1.0));
    };
    using boost::math::quadrature::gauss_kronrod;
    // The integrand concentrates in |xi| < ~10/sqrt(alpha); split there so the
    // adaptive rule sees the peak.
    const double pi = std::numbers::pi;
    const double split = std::min(pi, 12.0 / std::sqrt(std::max(alpha, 1.0)));
    double err = 0.0;
    double value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, split, 12, 1e-14, &err);
    if (split < pi) {
        value += gauss_kronrod<double, 61>::integrate(integrand, split, pi, 12, 1e-14, &err);
    }
    return value / pi;
}

double asymptotic_green(double x, double h, double tau) {
    if (!(h > 0.0) || !(tau > 0.0)) {
        throw DomainError("asymptotic_green: h and tau must be positive");
    }
    if (!(x >= h / std::sqrt(tau))) {
        throw DomainError("asymptotic_green: expansion requires x >= h / sqrt(tau)");
    }
    return h / std::sqrt(4.0 * std::numbers::pi * tau) * std::exp(-0.25 * x * x);
}

double tail_sum(const KernelTable& table, int from_index) {
    if (from_index < 0) {
        throw DomainError("tail_sum: from_index must be non-negative");
    }
    long double s = 0.0L;
    for (int k = table.radius; k >= from_index; --k) {
        s += table.coeffs[static_cast<std::size_t>(k)];
    }
    return static_cast<double>(s) + 0.5 * table.tail_bound;
}

double stirling_decay_bound(double mu, double h) {
    const double k = 3.0 * mu / h;
    const double tau = mu * h;
    return std::pow(std::numbers::e * tau / (3.0 * mu * h), k) / std::sqrt(2.0 * std::numbers::pi * k);
}

void write_kernel_csv(std::ostream& os, const KernelTable& table) {
    CsvWriter csv(os, {"n", "G_n"});
    for (int n = 0; n <= table.radius; ++n) {
        csv.row(n, table.coeffs[static_cast<std::size_t>(n)]);
    }
}

}  // namespace lmbo

namespace lmbo {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical:
            return "subcritical";
        case Regime::Critical:
            return "critical";
        case Regime::Supercritical:
            return "supercritical";
    }
    return "unknown";
}

SchemeParams SchemeParams::from_tau(double h, double tau, int steps) {
    SchemeParams p;
    p.h = h;
    p.tau = tau;
    p.mu = tau / h;
    p.scale_C = 1.0;
    p.gamma = (tau > 0.0 && tau != 1.0 && h > 0.0) ? std::log(h) / std::log(tau) : 1.0;
    p.steps = steps;
    p.validate();
    return p;
}

SchemeParams SchemeParams::from_mu(double h, double mu, int steps) {
    SchemeParams p;
    p.h = h;
    p.mu = mu;
    p.tau = mu * h;
    p.gamma = 1.0;
    p.scale_C = 1.0 / mu;
    p.steps = steps;
    p.validate();
    return p;
}

SchemeParams SchemeParams::from_gamma(double h, double gamma, double scale_C, int steps) {
    if (!(gamma > 0.0) || !(scale_C > 0.0)) {
        throw ConfigError("gamma and C must be positive");
    }
    SchemeParams p;
    p.h = h;
    p.gamma = gamma;
    p.scale_C = scale_C;
    p.tau = std::pow(h / scale_C, 1.0 / gamma);
    p.mu = p.tau / h;
    p.steps = steps;
    p.validate();
    return p;
}

Regime SchemeParams::regime() const {
    constexpr double tol = 1e-12;
    if (gamma > 1.0 + tol) {
        return Regime::Subcritical;
    }
    if (gamma < 1.0 - tol) {
        return Regime::Supercritical;
    }
    return Regime::Critical;
}

void SchemeParams::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConfigError("h must be positive and finite");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ConfigError("tau must be positive and finite");
    }
    if (std::abs(mu - tau / h) > 1e-12 * std::abs(mu)) {
        throw ConfigError("mu must equal tau / h");
    }
    if (steps < 1) {
        throw ConfigError("steps must be >= 1");
    }
}

}  // namespace lmbo
