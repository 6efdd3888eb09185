#include "lmbo/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lmbo/errors.hpp"

namespace lmbo::shapes {

namespace {

// Boundary points count as inside; the slack absorbs rounding in the
// physical coordinates of lattice points that sit exactly on a boundary.
constexpr double kSlack = 1e-12;

double disk_distance(Point p, Point c, double r) {
    return std::max(0.0, std::hypot(p.x - c.x, p.y - c.y) - r);
}

double box_distance(Point p, const Rect& b) {
    const double dx = std::max({b.x0 - p.x, 0.0, p.x - b.x1});
    const double dy = std::max({b.y0 - p.y, 0.0, p.y - b.y1});
    return std::hypot(dx, dy);
}

}  // namespace

Shape empty() {
    Shape s;
    s.name = "empty";
    s.contains = [](Point) { return false; };
    s.distance = [](Point) { return std::numeric_limits<double>::infinity(); };
    return s;
}

Shape disk(Point center, double radius) {
    if (!(radius > 0.0)) {
        throw DomainError("disk: radius must be positive");
    }
    Shape s;
    s.name = "disk";
    s.contains = [center, radius](Point p) {
        const double dx = p.x - center.x;
        const double dy = p.y - center.y;
        return dx * dx + dy * dy <= radius * radius * (1.0 + kSlack);
    };
    s.distance = [center, radius](Point p) { return disk_distance(p, center, radius); };
    s.bounds = {center.x - radius, center.y - radius, center.x + radius, center.y + radius};
    return s;
}

Shape half_plane_below(double level) {
    Shape s;
    s.name = "halfplane";
    s.contains = [level](Point p) { return p.y <= level + kSlack * (1.0 + std::abs(level)); };
    s.distance = [level](Point p) { return std::max(0.0, p.y - level); };
    s.bounded = false;
    return s;
}

Shape parabola_cap(double kappa, double half_width, double depth) {
    if (!(kappa >= 0.0) || !(half_width > 0.0) || !(depth > 0.0)) {
        throw DomainError("parabola_cap: need kappa >= 0 and positive extents");
    }
    Shape s;
    s.name = "parabola";
    s.contains = [=](Point p) {
        if (std::abs(p.x) > half_width * (1.0 + kSlack) || p.y < -depth * (1.0 + kSlack)) {
            return false;
        }
        return p.y <= -0.5 * kappa * p.x * p.x + kSlack * (1.0 + std::abs(p.y));
    };
    s.bounds = {-half_width, -depth, half_width, 0.0};
    return s;
}

Shape tilted_parabola(int p, int q, double kappa, double extent) {
    if (q <= 0 || p < 0 || !(kappa >= 0.0) || !(extent > 0.0)) {
        throw DomainError("tilted_parabola: need q > 0, p >= 0, kappa >= 0, extent > 0");
    }
    const double slope = static_cast<double>(p) / q;
    const double v0 = kappa * std::pow(static_cast<double>(p) * p + static_cast<double>(q) * q, 1.5) /
                      (2.0 * std::pow(static_cast<double>(q), 3));
    Shape s;
    s.name = "tilted_parabola";
    s.contains = [=](Point pt) {
        if (pt.x * pt.x + pt.y * pt.y > extent * extent) {
            return false;
        }
        return pt.y <= slope * pt.x - v0 * pt.x * pt.x + kSlack * (1.0 + std::abs(pt.y));
    };
    s.bounds = {-extent, -extent, extent, extent};
    return s;
}

Shape dumbbell(double radius, double separation, double neck) {
    if (!(radius > 0.0) || !(separation > 0.0) || !(neck > 0.0) || neck >= radius) {
        throw DomainError("dumbbell: need positive sizes and neck < radius");
    }
    const Point left{-0.5 * separation, 0.0};
    const Point right{0.5 * separation, 0.0};
    const Rect bar{left.x, -neck, right.x, neck};
    Shape s;
    s.name = "dumbbell";
    s.distance = [=](Point p) {
        return std::min({disk_distance(p, left, radius), disk_distance(p, right, radius), box_distance(p, bar)});
    };
    s.contains = [=](Point p) {
        const auto in_disk = [&](Point c) {
            const double dx = p.x - c.x;
            const double dy = p.y - c.y;
            return dx * dx + dy * dy <= radius * radius * (1.0 + kSlack);
        };
        return in_disk(left) || in_disk(right) || box_distance(p, bar) <= kSlack;
    };
    s.bounds = {left.x - radius, -radius, right.x + radius, radius};
    return s;
}

double finger_tip_curvature(double half_width) { return std::numbers::pi / (2.0 * half_width); }

Shape finger(double half_width, double length, double body_angle) {
    if (!(half_width > 0.0) || !(length > half_width)) {
        throw DomainError("finger: need 0 < half_width < length");
    }
    const double c = finger_tip_curvature(half_width);
    const double ex = std::cos(body_angle);
    const double ey = std::sin(body_angle);
    Shape s;
    s.name = "finger";
    s.contains = [=](Point p) {
        const double along = p.x * ex + p.y * ey;
        const double across = -p.x * ey + p.y * ex;
        if (std::abs(across) >= half_width || along > length) {
            return false;
        }
        const double cap = -std::log(std::cos(c * across)) / c;
        return along >= cap - kSlack;
    };
    // Corners of the enclosing oriented rectangle.
    double xs[4];
    double ys[4];
    const double a[4] = {0.0, 0.0, length, length};
    const double b[4] = {-half_width, half_width, -half_width, half_width};
    for (int k = 0; k < 4; ++k) {
        xs[k] = a[k] * ex - b[k] * ey;
        ys[k] = a[k] * ey + b[k] * ex;
    }
    s.bounds = {*std::min_element(xs, xs + 4), *std::min_element(ys, ys + 4), *std::max_element(xs, xs + 4),
                *std::max_element(ys, ys + 4)};
    return s;
}

}  // namespace lmbo::shapes
