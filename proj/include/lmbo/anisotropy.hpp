#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lmbo {

/// Lattice point (s, j) of the strip S = {0 <= s < q, j q < s p} with its
/// integer level l = s p - j q and distance d = l / sqrt(p^2 + q^2) to the line.
struct StripEntry {
    int s = 0;
    std::int64_t j = 0;
    std::int64_t level = 0;
    double d = 0.0;
};

/// First entries of S sorted by distance to the line y = (p/q) x.
struct StripOrdering {
    int p = 0;
    int q = 1;
    std::vector<StripEntry> entries;  // entries[0] is d_1

    std::size_t size() const { return entries.size(); }
    double norm() const;  // sqrt(p^2 + q^2)
};

/// Merges the q columns of S (each column descends in steps of q in level).
/// p = 0 (with q = 1) gives the axis ordering d_i = i. Throws DomainError if
/// gcd(p, q) != 1, p < 0, q < 1 or count < 1.
StripOrdering strip_ordering(int p, int q, int count);

/// Appends entries until `ordering.size() >= count`.
void extend_ordering(StripOrdering& ordering, std::size_t count);

/// Tilted criterion: (1/2) H(b_n) + sum_{i<n} H(b_i) - (1/2) T(b_n) - sum_{i>n} T(b_i),
/// b_i = sqrt(2 d_i / c). The ordering is extended on a private copy when the
/// tail needs more entries than it holds. Requires n >= 1, c > 0.
double aniso_phi(int n, double mu_kappa, const StripOrdering& ordering);

struct AnisoVelocityReport {
    int p = 0;
    int q = 1;
    double mu = 0.0;
    double kappa = 0.0;
    int n0 = 0;  // 0: no admissible point, pinned
    double normal_displacement = 0.0;  // d_{n0}, multiples of h
    double velocity = 0.0;  // d_{n0} / mu
    double phi_at_n0 = 0.0;  // NaN when n0 = 0
    double phi_at_n0_plus_1 = 0.0;
};

AnisoVelocityReport aniso_velocity(int p, int q, double mu, double kappa);

struct RationalAngle {
    double theta_deg = 0.0;  // requested angle
    int p = 0;
    int q = 1;
};

/// Best rational approximation p/q of tan(theta) with q <= max_q (for angles
/// above 45 degrees the cotangent is approximated and p, q swapped).
RationalAngle rational_angle(double theta_deg, int max_q = 60);

struct AngleSweepRow {
    double theta_deg = 0.0;
    int p = 0;
    int q = 1;
    double mu = 0.0;
    double kappa = 0.0;
    int n0 = 0;
    double d_n0 = 0.0;
    double velocity = 0.0;
};

/// One row per angle; rows are computed on up to `threads` workers
/// (0: LATTICE_MBO_THREADS or hardware concurrency).
std::vector<AngleSweepRow> angle_sweep(double mu, double kappa, const std::vector<RationalAngle>& angles,
                                       unsigned threads = 0);

/// Worker count from LATTICE_MBO_THREADS, else hardware concurrency (>= 1).
unsigned default_thread_count();

/// Columns theta_deg, p, q, mu, kappa, n0, d_n0, velocity.
void write_angle_sweep_csv(std::ostream& os, const std::vector<AngleSweepRow>& rows);

/// Matplotlib script plotting velocity against angle, one series per mu.
void write_angle_sweep_plot(std::ostream& os, const std::string& csv_name, const std::string& png_name);

}  // namespace lmbo
