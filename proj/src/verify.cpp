#include "lmbo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <tuple>

#include "lmbo/anisotropy.hpp"
#include "lmbo/errors.hpp"
#include "lmbo/evolution.hpp"
#include "lmbo/heat_kernel.hpp"
#include "lmbo/lattice.hpp"
#include "lmbo/shapes.hpp"
#include "lmbo/special_fns.hpp"
#include "lmbo/velocity_law.hpp"

namespace lmbo {

namespace {

using Checks = std::vector<CheckResult>;

void add(Checks& out, const std::string& suite, const std::string& name, double residual, double tol) {
    out.push_back({suite, name, residual <= tol, residual, tol});
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

void kernel_suite(Checks& out) {
    const std::string s = "kernel";
    for (double alpha : {0.5, 2.0, 10.0, 100.0, 1000.0}) {
        const KernelTable t = kernel_table(alpha, 1e-15);
        add(out, s, fmt("normalization alpha=%g", alpha), std::abs(t.mass() - 1.0), 1e-12);
        long double half = 0.5L * t.coeffs[0];
        for (int n = t.radius; n >= 1; --n) {
            half += t.coeffs[static_cast<std::size_t>(n)];
        }
        add(out, s, fmt("half-mass alpha=%g", alpha), std::abs(static_cast<double>(half) - 0.5), 1e-12);
    }
    double worst = 0.0;
    for (double alpha : {0.5, 2.0, 10.0, 100.0}) {
        const KernelTable t = kernel_table(alpha, 1e-15);
        for (int n : {0, 1, 2, 5, 10, 20}) {
            worst = std::max(worst, std::abs(t[n] - green_integral_oracle(n, alpha)));
        }
    }
    add(out, s, "table vs Fourier integral", worst, 1e-12);

    worst = 0.0;
    for (double alpha : {0.5, 2.0, 10.0, 100.0}) {
        for (int n = 1; n <= 50; ++n) {
            const double lhs = scaled_bessel_i(n - 1, alpha) - scaled_bessel_i(n + 1, alpha);
            const double rhs = 2.0 * n / alpha * scaled_bessel_i(n, alpha);
            const double scale = std::max(std::abs(lhs), std::abs(rhs));
            if (scale > 0.0) {
                worst = std::max(worst, std::abs(lhs - rhs) / scale);
            }
        }
    }
    add(out, s, "Bessel recurrence (relative)", worst, 1e-10);
}

BinaryField random_block(std::uint64_t seed, int block, int margin) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    const int n = block + 2 * margin;
    BinaryField f(Grid{n, n, 1.0, {n / 2, n / 2}});
    for (int j = 0; j < block; ++j) {
        for (int i = 0; i < block; ++i) {
            f.set(margin + i, margin + j, coin(rng));
        }
    }
    return f;
}

void evolution_suite(Checks& out, std::uint64_t seed) {
    const std::string s = "evolution";
    {
        const double alpha = 10.0;
        const int pad = minimum_fft_padding(alpha) + 8;
        const BinaryField u = random_block(seed, 64, pad);
        const RealField direct = heat_step_direct(u, kernel_table(alpha, 1e-15));
        const RealField fft = heat_step_fft(u, alpha, pad);
        add(out, s, "direct vs FFT, 64x64 random, alpha=10", max_abs_diff(direct, fft), 1e-10);
        add(out, s, "FFT mass conservation", std::abs(fft.sum() - RealField(u).sum()), 1e-10);
    }
    {
        const double h = 1.0 / 16.0;
        const double tau = 2.0 * h * h;  // alpha = 4
        const BinaryField u = rasterize(shapes::disk({0.0, 0.0}, 0.5), h, Rect{-1.0, -1.0, 0.9375, 0.9375});
        const RealField direct =
            heat_step_direct(u, kernel_table(4.0, 1e-15), {std::numeric_limits<double>::infinity()});
        const RealField ode = ode_oracle(u, tau, h);
        add(out, s, "direct vs ODE oracle, 32x32 disk, alpha=4", max_abs_diff(direct, ode), 1e-6);
    }
    for (double alpha : {1.0, 4.0, 25.0}) {
        const KernelTable t = kernel_table(alpha, 1e-15);
        const int r = t.radius;
        const int n = 2 * r + 40;
        BinaryField u(Grid{n, n, 1.0, {n / 2, n / 2}});
        for (int j = 1; j <= n / 2; ++j) {
            for (int i = 1; i + 1 < n; ++i) {
                u.set(i, j, true);
            }
        }
        const BinaryField v = threshold(heat_step_direct(u, t, {std::numeric_limits<double>::infinity()}));
        double mismatches = 0.0;
        for (int j = r + 2; j < n - r - 2; ++j) {
            for (int i = r + 2; i < n - r - 2; ++i) {
                mismatches += u(i, j) != v(i, j) ? 1.0 : 0.0;
            }
        }
        add(out, s, fmt("flat interface stationary alpha=%g", alpha), mismatches, 0.0);
    }
}

void velocity_suite(Checks& out) {
    const std::string s = "velocity";
    add(out, s, "sqrt(pi) identity", sqrt_pi_identity_check(), 1e-8);
    add(out, s, "pinning threshold vs 0.8218", std::abs(pinning_threshold(1e-4) - 0.8218), 1e-3);
    double worst = 0.0;
    for (double c : {0.3, 1.0, 3.0, 10.0}) {
        for (int n = 0; n < 20; ++n) {
            worst = std::max(worst, std::abs(phi(n + 1, c) - phi(n, c) - std::sqrt(std::numbers::pi)));
        }
    }
    add(out, s, "phi unit increment sqrt(pi)", worst, 1e-10);
    double violations = 0.0;
    for (double c : {0.3, 0.9, 1.0, 2.5, 7.0, 40.0}) {
        const VelocityReport r = discrete_velocity(1.0, c);
        if (!(r.phi_at_n0 <= 0.0 && r.phi_at_n0_plus_1 > 0.0)) {
            violations += 1.0;
        }
    }
    add(out, s, "bracketing of reported n0", violations, 0.0);
}

void anisotropy_suite(Checks& out) {
    const std::string s = "anisotropy";
    const int count = 100;
    double mismatches = 0.0;
    for (int q = 1; q <= 12; ++q) {
        for (int p = 1; p <= q; ++p) {
            if (std::gcd(p, q) != 1) {
                continue;
            }
            // Every point deeper than j = -count lies farther than the count
            // points (0, -1), ..., (0, -count) of the s = 0 column.
            std::vector<std::tuple<double, int, std::int64_t>> brute;
            const double r = std::hypot(p, q);
            for (int sc = 0; sc < q; ++sc) {
                for (std::int64_t j = -count; j * q < static_cast<std::int64_t>(sc) * p; ++j) {
                    brute.emplace_back(std::abs(static_cast<double>(j * q - sc * p)) / r, sc, j);
                }
            }
            std::sort(brute.begin(), brute.end());
            const StripOrdering ord = strip_ordering(p, q, count);
            for (int k = 0; k < count; ++k) {
                const auto& [d, sc, j] = brute[static_cast<std::size_t>(k)];
                const StripEntry& e = ord.entries[static_cast<std::size_t>(k)];
                if (e.s != sc || e.j != j || std::abs(e.d - d) > 1e-12) {
                    mismatches += 1.0;
                }
            }
        }
    }
    add(out, s, "strip ordering vs brute force (p<=q<=12)", mismatches, 0.0);

    const StripOrdering axis = strip_ordering(0, 1, 64);
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
        for (double c : {0.5, 1.0, 3.0}) {
            worst = std::max(worst, std::abs(aniso_phi(n, c, axis) - phi(n, c)));
        }
    }
    add(out, s, "axis ordering reduces to phi", worst, 1e-12);

    double asym = 0.0;
    for (auto [p, q] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        asym = std::max(asym, std::abs(aniso_velocity(p, q, 1.0, 2.0).velocity -
                                       aniso_velocity(q, p, 1.0, 2.0).velocity));
    }
    add(out, s, "complementary angles give equal velocity", asym, 1e-12);
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"kernel", "evolution", "velocity", "anisotropy", "all"};
    return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
    Checks out;
    const bool all = suite == "all";
    if (!all && std::find(verify_suite_names().begin(), verify_suite_names().end(), suite) ==
                    verify_suite_names().end()) {
        throw ConfigError("unknown verify suite '" + suite + "' (expected kernel, evolution, velocity, anisotropy or all)");
    }
    if (all || suite == "kernel") {
        kernel_suite(out);
    }
    if (all || suite == "evolution") {
        evolution_suite(out, seed);
    }
    if (all || suite == "velocity") {
        velocity_suite(out);
    }
    if (all || suite == "anisotropy") {
        anisotropy_suite(out);
    }
    return out;
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        char buf[96];
        std::snprintf(buf, sizeof buf, " residual=%.3e tol=%.1e", c.residual, c.tolerance);
        os << (c.pass ? "PASS " : "FAIL ") << c.suite << '/' << c.name << buf << '\n';
    }
}

}  // namespace lmbo
