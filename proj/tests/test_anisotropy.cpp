#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "lmbo/anisotropy.hpp"
#include "lmbo/errors.hpp"
#include "lmbo/evolution.hpp"
#include "lmbo/lattice.hpp"
#include "lmbo/shapes.hpp"
#include "lmbo/velocity_law.hpp"

using namespace lmbo;

namespace {

// Every point of S with j >= -depth, sorted by level.
std::vector<std::int64_t> brute_levels(int p, int q, int depth) {
    std::vector<std::int64_t> levels;
    for (int s = 0; s < q; ++s) {
        for (int j = -depth; j * q < s * p; ++j) {
            levels.push_back(static_cast<std::int64_t>(s) * p - static_cast<std::int64_t>(j) * q);
        }
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

}  // namespace

TEST_CASE("ordering for p = 1, q = 3") {
    const StripOrdering o = strip_ordering(1, 3, 5);
    REQUIRE(o.size() == 5);
    const int s[] = {1, 2, 0, 1, 2};
    const int j[] = {0, 0, -1, -1, -1};
    for (int i = 0; i < 5; ++i) {
        CHECK(o.entries[i].s == s[i]);
        CHECK(o.entries[i].j == j[i]);
        CHECK(o.entries[i].d == doctest::Approx((i + 1) / std::sqrt(10.0)));
    }
    CHECK(o.norm() == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("ordering for p = q = 1") {
    const StripOrdering o = strip_ordering(1, 1, 2);
    CHECK(o.entries[0].s == 0);
    CHECK(o.entries[0].j == -1);
    CHECK(o.entries[0].d == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(o.entries[1].j == -2);
    CHECK(o.entries[1].d == doctest::Approx(2 / std::sqrt(2.0)));
}

TEST_CASE("ordering agrees with a brute-force sort and has distinct distances") {
    for (int q = 1; q <= 12; ++q) {
        for (int p = 0; p <= q; ++p) {
            if (std::gcd(p, q) != 1) {
                continue;
            }
            const StripOrdering o = strip_ordering(p, q, 200);
            const auto brute = brute_levels(p, q, 200);
            CAPTURE(p);
            CAPTURE(q);
            REQUIRE(o.size() == 200);
            for (std::size_t i = 0; i < 200; ++i) {
                const StripEntry& e = o.entries[i];
                CHECK(e.level == brute[i]);
                CHECK(e.level == static_cast<std::int64_t>(e.s) * p - e.j * q);
                CHECK(e.s >= 0);
                CHECK(e.s < q);
                CHECK(e.j * q < static_cast<std::int64_t>(e.s) * p);
                if (i > 0) {
                    CHECK(e.d > o.entries[i - 1].d);
                }
            }
        }
    }
}

TEST_CASE("extending keeps the prefix") {
    StripOrdering o = strip_ordering(3, 7, 10);
    const StripOrdering longer = strip_ordering(3, 7, 50);
    extend_ordering(o, 50);
    REQUIRE(o.size() >= 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(o.entries[i].level == longer.entries[i].level);
    }
}

TEST_CASE("axis ordering reduces to the isotropic criterion") {
    const StripOrdering axis = strip_ordering(0, 1, 30);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        CHECK(axis.entries[i].d == static_cast<double>(i + 1));
    }
    for (double c : {0.3, 1.0, 4.0}) {
        for (int n = 1; n <= 20; ++n) {
            CHECK(std::abs(aniso_phi(n, c, axis) - phi(n, c)) <= 1e-12);
        }
    }
}

TEST_CASE("levels are the positive integers, so the criterion is phi at c sqrt(p^2 + q^2)") {
    for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 5}, std::pair{7, 11}}) {
        const StripOrdering o = strip_ordering(p, q, 40);
        for (double c : {0.5, 2.0}) {
            for (int n = 1; n <= 10; ++n) {
                CHECK(aniso_phi(n, c, o) == doctest::Approx(phi(n, c * o.norm())).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("aniso_phi is increasing in n and positive at small mu kappa") {
    for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{1, 3}}) {
        const StripOrdering o = strip_ordering(p, q, 50);
        for (double c : {0.5, 1.0, 3.0}) {
            double prev = aniso_phi(1, c, o);
            for (int n = 2; n <= 30; ++n) {
                const double v = aniso_phi(n, c, o);
                CHECK(v > prev);
                prev = v;
            }
        }
        CHECK(aniso_phi(1, 0.1, o) > 0.0);
        const AnisoVelocityReport r = aniso_velocity(p, q, 1.0, 0.1);
        CHECK(r.n0 == 0);
        CHECK(r.velocity == 0.0);
        CHECK(std::isnan(r.phi_at_n0));
        CHECK(r.phi_at_n0_plus_1 > 0.0);
    }
    CHECK_THROWS_AS(aniso_phi(0, 1.0, strip_ordering(1, 2, 5)), DomainError);
    CHECK_THROWS_AS(aniso_phi(1, 0.0, strip_ordering(1, 2, 5)), DomainError);
}

TEST_CASE("velocity reports bracket the criterion") {
    for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 4}, std::pair{3, 5}}) {
        for (double kappa : {1.0, 3.0, 10.0}) {
            const AnisoVelocityReport r = aniso_velocity(p, q, 1.0, kappa);
            REQUIRE(r.n0 >= 1);
            CHECK(r.phi_at_n0 <= 0.0);
            CHECK(r.phi_at_n0_plus_1 > 0.0);
            const StripOrdering o = strip_ordering(p, q, r.n0);
            CHECK(r.normal_displacement == doctest::Approx(o.entries.back().d));
            CHECK(r.velocity == r.normal_displacement / r.mu);
        }
    }
}

TEST_CASE("complementary angles give equal velocities") {
    for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 7}}) {
        for (double kappa : {0.7, 2.0, 6.0}) {
            CHECK(aniso_velocity(p, q, 1.0, kappa).velocity ==
                  doctest::Approx(aniso_velocity(q, p, 1.0, kappa).velocity));
        }
    }
}

TEST_CASE("coprimality and sign checks") {
    CHECK_THROWS_AS(strip_ordering(2, 4, 5), DomainError);
    CHECK_THROWS_AS(strip_ordering(-1, 2, 5), DomainError);
    CHECK_THROWS_AS(strip_ordering(1, 0, 5), DomainError);
    CHECK_THROWS_AS(strip_ordering(1, 2, 0), DomainError);
}

TEST_CASE("one step of a 45 degree parabola") {
    const double h = 1.0 / 400.0;
    const double mu = 1.0;
    for (double kappa : {1.0, 2.0, 4.0}) {
        const BinaryField u = rasterize(shapes::tilted_parabola(1, 1, kappa, 0.5), h, {-0.55, -0.55, 0.55, 0.55},
                                        {RasterMode::CenterInside});
        const Trajectory tr = run_scheme(SchemeParams::from_mu(h, mu, 1), u);
        const auto anchor = extreme_cell(u, 1, 1, {0.0, 0.0});
        REQUIRE(anchor);
        const auto measured = front_displacement(u, tr.final_field, DirectionProbe{*anchor, 1, 1});
        const int predicted = aniso_velocity(1, 1, mu, kappa).n0;
        CAPTURE(kappa);
        CAPTURE(measured.index);
        CAPTURE(predicted);
        CHECK(std::abs(measured.index - predicted) <= 1);
    }
}

TEST_CASE("rational angles") {
    const RationalAngle zero = rational_angle(0.0);
    CHECK(zero.p == 0);
    CHECK(zero.q == 1);
    const RationalAngle diag = rational_angle(45.0);
    CHECK(diag.p == 1);
    CHECK(diag.q == 1);
    for (double deg = 1.0; deg <= 44.0; deg += 1.0) {
        const RationalAngle a = rational_angle(deg);
        CHECK(a.q <= 60);
        CHECK(std::gcd(a.p, a.q) == 1);
        const double t = std::tan(deg * M_PI / 180.0);
        const double err = std::abs(static_cast<double>(a.p) / a.q - t);
        for (int q = 1; q <= 60; ++q) {
            const double p = std::round(t * q);
            CHECK(err <= std::abs(p / q - t) + 1e-15);
        }
        CHECK(std::abs(std::atan2(a.p, a.q) * 180.0 / M_PI - deg) < 0.1);
    }
    const RationalAngle steep = rational_angle(60.0);
    CHECK(steep.p > steep.q);
    CHECK_THROWS_AS(rational_angle(90.0), DomainError);
    CHECK_THROWS_AS(rational_angle(-1.0), DomainError);
}

TEST_CASE("angle sweep") {
    std::vector<RationalAngle> angles;
    for (int deg = 0; deg <= 45; ++deg) {
        angles.push_back(rational_angle(deg));
    }
    const double kappa = 4.0;
    std::vector<std::vector<AngleSweepRow>> by_mu;
    for (double mu : {0.5, 0.625, 0.75, 0.875, 1.0}) {
        by_mu.push_back(angle_sweep(mu, kappa, angles, 3));
    }
    const auto& rows = by_mu.back();
    REQUIRE(rows.size() == 46);
    CHECK(rows[0].n0 == discrete_velocity(1.0, kappa).n0);
    CHECK(rows[0].velocity == doctest::Approx(discrete_velocity(1.0, kappa).velocity));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].theta_deg == static_cast<double>(i));
    }
    // the normal displacement per step never shrinks as mu grows
    for (std::size_t m = 1; m < by_mu.size(); ++m) {
        for (std::size_t i = 0; i < angles.size(); ++i) {
            CHECK(by_mu[m][i].d_n0 >= by_mu[m - 1][i].d_n0);
        }
    }
    double lo = rows[0].velocity;
    double hi = rows[0].velocity;
    for (const auto& r : rows) {
        lo = std::min(lo, r.velocity);
        hi = std::max(hi, r.velocity);
    }
    CHECK(hi > lo);

    const auto serial = angle_sweep(1.0, kappa, angles, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(serial[i].n0 == rows[i].n0);
    }

    std::ostringstream os;
    write_angle_sweep_csv(os, rows);
    CHECK(os.str().rfind("theta_deg,p,q,mu,kappa,n0,d_n0,velocity\n0,0,1,1,4,", 0) == 0);
    std::ostringstream py;
    write_angle_sweep_plot(py, "angle_sweep.csv", "angle_sweep.png");
    CHECK(py.str().find("angle_sweep.csv") != std::string::npos);
}
