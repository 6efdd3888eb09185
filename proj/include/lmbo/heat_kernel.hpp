#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmbo {

/// Truncated one-sided table of the discrete heat kernel G_n(alpha) = e^{-alpha} I_|n|(alpha).
///
/// Only n >= 0 is stored; G_{-n} = G_n. `tail_bound` certifies
/// sum_{|n| > radius} G_n(alpha) <= tail_bound (two-sided).
struct KernelTable {
    double alpha = 0.0;
    int radius = 0;
    std::vector<double> coeffs;  // size radius + 1
    double tail_bound = 0.0;

    double operator[](int n) const {
        const int k = n < 0 ? -n : n;
        return k > radius ? 0.0 : coeffs[static_cast<std::size_t>(k)];
    }

    /// G_0 + 2 sum_{n=1}^{R} G_n.
    double mass() const;
};

/// Smallest-radius table with certified tail <= eps_tail.
///
/// The tail certificate uses log-concavity of n -> I_n: the ratio
/// rho = G_{R+2}/G_{R+1} bounds every later ratio, so
/// sum_{k>R} G_k <= G_{R+1} / (1 - rho). Throws TruncationError if the radius
/// cap max(3 alpha, 64) + 64 is reached first, DomainError on bad arguments.
KernelTable kernel_table(double alpha, double eps_tail);

/// (1/2pi) int_{-pi}^{pi} cos(n xi) e^{alpha (cos xi - 1)} d xi by adaptive
/// Gauss-Kronrod quadrature. Test oracle; alpha <= 1e4.
double green_integral_oracle(int n, double alpha);

/// Leading-order continuum approximation (h / sqrt(4 pi tau)) e^{-x^2/4} of
/// G_{sqrt(tau) x / h}(2 tau / h^2). Requires x >= h / sqrt(tau).
double asymptotic_green(double x, double h, double tau);

/// sum_{k >= from_index} G_k, with the truncated remainder replaced by its
/// certified one-sided bound tail_bound / 2 (so the result is an upper estimate).
double tail_sum(const KernelTable& table, int from_index);

/// Right-hand side of the factorial/Stirling decay estimate for
/// sum_{k >= K} G_k(2 tau / h^2) with tau = mu h and K = 3 mu / h.
double stirling_decay_bound(double mu, double h);

/// Debug dump: "n,G_n" CSV with a header row.
void write_kernel_csv(std::ostream& os, const KernelTable& table);

}  // namespace lmbo

namespace lmbo {

enum class Regime { Subcritical, Critical, Supercritical };

const char* to_string(Regime r);

/// Step sizes of the space-time discrete scheme, related through h = C tau^gamma.
struct SchemeParams {
    double h = 0.0;
    double tau = 0.0;
    double mu = 0.0;       // tau / h
    double gamma = 1.0;    // regime exponent
    double scale_C = 1.0;  // h = scale_C * tau^gamma
    int steps = 1;

    /// gamma is read off with C = 1, i.e. gamma = ln h / ln tau.
    static SchemeParams from_tau(double h, double tau, int steps);
    /// Critical scaling tau = mu h (gamma = 1, C = 1/mu).
    static SchemeParams from_mu(double h, double mu, int steps);
    /// tau = (h / C)^{1/gamma}.
    static SchemeParams from_gamma(double h, double gamma, double scale_C, int steps);

    double alpha() const { return 2.0 * tau / (h * h); }
    Regime regime() const;
    /// Throws ConfigError if any invariant is violated.
    void validate() const;
};

}  // namespace lmbo
