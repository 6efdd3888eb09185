#include "lmbo/anisotropy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <queue>
#include <thread>
#include <tuple>

#include "lmbo/csv.hpp"
#include "lmbo/errors.hpp"
#include "lmbo/special_fns.hpp"
#include "lmbo/velocity_law.hpp"

namespace lmbo {

double StripOrdering::norm() const { return std::hypot(static_cast<double>(p), static_cast<double>(q)); }

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --d;
    }
    return d;
}

void check_pq(int p, int q) {
    if (p < 0 || q < 1) {
        throw DomainError("strip ordering: need p >= 0 and q >= 1");
    }
    if (std::gcd(p, q) != 1) {
        throw DomainError("strip ordering: p and q must be coprime");
    }
}

}  // namespace

StripOrdering strip_ordering(int p, int q, int count) {
    check_pq(p, q);
    if (count < 1) {
        throw DomainError("strip ordering: count must be >= 1");
    }
    StripOrdering out;
    out.p = p;
    out.q = q;
    out.entries.reserve(static_cast<std::size_t>(count));
    const double r = out.norm();

    // Each column s holds the levels s p - j q for j < s p / q; its highest
    // admissible j gives the smallest positive level, and every step down adds q.
    // A min-heap over the column heads therefore emits S in order of distance:
    // nothing below a column head can beat that head.
    using Head = std::tuple<std::int64_t, int, std::int64_t>;  // level, s, j
    std::priority_queue<Head, std::vector<Head>, std::greater<Head>> heap;
    for (int s = 0; s < q; ++s) {
        const std::int64_t sp = static_cast<std::int64_t>(s) * p;
        const std::int64_t j = floor_div(sp - 1, q);
        heap.emplace(sp - j * q, s, j);
    }
    while (static_cast<int>(out.entries.size()) < count) {
        auto [level, s, j] = heap.top();
        heap.pop();
        out.entries.push_back({s, j, level, static_cast<double>(level) / r});
        heap.emplace(level + q, s, j - 1);
    }
    return out;
}

void extend_ordering(StripOrdering& ordering, std::size_t count) {
    if (ordering.size() >= count) {
        return;
    }
    ordering = strip_ordering(ordering.p, ordering.q, static_cast<int>(count));
}

namespace {

constexpr double kTailCutoff = 1e-14;

// Levels past index i are distinct integers above level_i, so the unsummed
// tail is dominated by sum_{m > level} T(sqrt(2 m / (c r))).
double aniso_remainder_bound(std::int64_t level, double c_eff) {
    const double a = std::sqrt(2.0 * static_cast<double>(level) / c_eff);
    return 4.0 * c_eff / a * std::exp(-static_cast<double>(level) / (2.0 * c_eff));
}

double aniso_phi_mut(int n, double c, StripOrdering& ord) {
    if (n < 1) {
        throw DomainError("aniso_phi: n must be >= 1");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("aniso_phi: mu*kappa must be positive and finite");
    }
    const double c_eff = c * ord.norm();
    extend_ordering(ord, static_cast<std::size_t>(n) + 64);
    auto b = [&](std::size_t i) { return std::sqrt(2.0 * ord.entries[i].d / c); };

    long double acc = 0.0L;
    for (int i = 0; i + 1 < n; ++i) {
        acc += gauss_head(b(static_cast<std::size_t>(i)));
    }
    const double bn = b(static_cast<std::size_t>(n - 1));
    acc += 0.5L * gauss_head(bn);
    acc -= 0.5L * gauss_tail(bn);

    long double tail = 0.0L;
    for (std::size_t i = static_cast<std::size_t>(n);; ++i) {
        if (i >= ord.size()) {
            extend_ordering(ord, 2 * ord.size());
        }
        const double term = gauss_tail(b(i));
        tail += term;
        if ((i % 32 == 31 || term == 0.0) && aniso_remainder_bound(ord.entries[i].level, c_eff) < kTailCutoff) {
            break;
        }
    }
    return static_cast<double>(acc - tail);
}

}  // namespace

double aniso_phi(int n, double mu_kappa, const StripOrdering& ordering) {
    StripOrdering local = ordering;
    return aniso_phi_mut(n, mu_kappa, local);
}

AnisoVelocityReport aniso_velocity(int p, int q, double mu, double kappa) {
    check_pq(p, q);
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("aniso_velocity: mu must be positive");
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw DomainError("aniso_velocity: kappa must be >= 0");
    }
    AnisoVelocityReport r;
    r.p = p;
    r.q = q;
    r.mu = mu;
    r.kappa = kappa;
    r.phi_at_n0 = std::numeric_limits<double>::quiet_NaN();
    if (kappa == 0.0) {
        r.phi_at_n0_plus_1 = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double c = mu * kappa;
    StripOrdering ord = strip_ordering(p, q, 256);
    auto f = [&](int n) { return aniso_phi_mut(n, c, ord); };
    const double f1 = f(1);
    if (f1 > 0.0) {
        r.phi_at_n0_plus_1 = f1;
        return r;
    }
    r.n0 = detail::last_nonpositive(f, 1);
    r.normal_displacement = ord.entries[static_cast<std::size_t>(r.n0 - 1)].d;
    r.velocity = r.normal_displacement / mu;
    r.phi_at_n0 = f(r.n0);
    r.phi_at_n0_plus_1 = f(r.n0 + 1);
    return r;
}

RationalAngle rational_angle(double theta_deg, int max_q) {
    if (!(theta_deg >= 0.0 && theta_deg < 90.0)) {
        throw DomainError("rational_angle: angle must lie in [0, 90) degrees");
    }
    if (max_q < 1) {
        throw DomainError("rational_angle: max_q must be >= 1");
    }
    const bool steep = theta_deg > 45.0;
    const double rad = (steep ? 90.0 - theta_deg : theta_deg) * std::numbers::pi / 180.0;
    const double t = std::tan(rad);
    int best_p = 0;
    int best_q = 1;
    double best_err = std::numeric_limits<double>::infinity();
    for (int q = 1; q <= max_q; ++q) {
        const int p = static_cast<int>(std::lround(t * q));
        const double err = std::abs(static_cast<double>(p) / q - t);
        if (err < best_err - 1e-15) {
            best_err = err;
            best_p = p;
            best_q = q;
        }
    }
    const int g = std::gcd(best_p, best_q);
    best_p /= g;
    best_q /= g;
    RationalAngle out;
    out.theta_deg = theta_deg;
    if (steep) {
        out.p = best_q;
        out.q = best_p;
    } else {
        out.p = best_p;
        out.q = best_q;
    }
    return out;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("LATTICE_MBO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<AngleSweepRow> angle_sweep(double mu, double kappa, const std::vector<RationalAngle>& angles,
                                       unsigned threads) {
    std::vector<AngleSweepRow> rows(angles.size());
    auto work = [&](std::size_t k) {
        const RationalAngle& a = angles[k];
        const AnisoVelocityReport r = aniso_velocity(a.p, a.q, mu, kappa);
        rows[k] = {a.theta_deg, a.p, a.q, mu, kappa, r.n0, r.normal_displacement, r.velocity};
    };
    if (threads == 0) {
        threads = default_thread_count();
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, angles.size()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < angles.size(); ++k) {
            work(k);
        }
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < angles.size(); k = next++) {
                try {
                    work(k);
                } catch (...) {
                    if (!failed.exchange(true)) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

void write_angle_sweep_csv(std::ostream& os, const std::vector<AngleSweepRow>& rows) {
    CsvWriter csv(os, {"theta_deg", "p", "q", "mu", "kappa", "n0", "d_n0", "velocity"});
    for (const auto& r : rows) {
        csv.row(r.theta_deg, r.p, r.q, r.mu, r.kappa, r.n0, r.d_n0, r.velocity);
    }
}

void write_angle_sweep_plot(std::ostream& os, const std::string& csv_name, const std::string& png_name) {
    os << "import csv\n"
          "import os\n"
          "from collections import defaultdict\n"
          "\n"
          "import matplotlib\n"
          "matplotlib.use(\"Agg\")\n"
          "import matplotlib.pyplot as plt\n"
          "\n"
          "here = os.path.dirname(os.path.abspath(__file__))\n"
          "series = defaultdict(list)\n"
          "with open(os.path.join(here, \""
       << csv_name
       << "\")) as f:\n"
          "    for row in csv.DictReader(f):\n"
          "        series[float(row[\"mu\"])].append((float(row[\"theta_deg\"]), float(row[\"velocity\"])))\n"
          "\n"
          "fig, ax = plt.subplots(figsize=(6, 4))\n"
          "for mu in sorted(series):\n"
          "    pts = sorted(series[mu])\n"
          "    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=\".\", label=f\"mu = {mu:g}\")\n"
          "ax.set_xlabel(\"angle (degrees)\")\n"
          "ax.set_ylabel(\"normal velocity d_n0 / mu\")\n"
          "ax.legend()\n"
          "fig.tight_layout()\n"
          "fig.savefig(os.path.join(here, \""
       << png_name << "\"), dpi=150)\n";
}

}  // namespace lmbo
