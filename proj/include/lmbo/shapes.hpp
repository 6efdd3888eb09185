#pragma once

#include <functional>
#include <string>

namespace lmbo {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned physical rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    Rect inflated(double margin) const { return {x0 - margin, y0 - margin, x1 + margin, y1 + margin}; }
};

/// Implicit region in the plane. `distance` (distance to the region, 0 inside)
/// is optional; `bounds` encloses the support of bounded shapes.
struct Shape {
    std::string name;
    std::function<bool(Point)> contains;
    std::function<double(Point)> distance;
    Rect bounds;
    bool bounded = true;
};

namespace shapes {

Shape empty();
Shape disk(Point center, double radius);
/// {y <= level}. Unbounded.
Shape half_plane_below(double level);
/// {y <= -(kappa/2) x^2} intersected with |x| <= half_width, y >= -depth.
Shape parabola_cap(double kappa, double half_width, double depth);
/// Region below g(x) = (p/q) x - v0 x^2 with v0 = kappa (p^2+q^2)^{3/2} / (2 q^3),
/// intersected with a disk of radius `extent` about the origin.
Shape tilted_parabola(int p, int q, double kappa, double extent);
/// Two disks of radius r centred at (+-separation/2, 0) joined by a bar of half-height neck.
Shape dumbbell(double radius, double separation, double neck);
/// Strip of half-width `half_width` and length `length` whose body runs from the tip
/// (origin) along `body_angle`; the tip is capped by the translating profile
/// s = -(1/c) ln cos(c t), c = pi / (2 half_width), tip curvature c.
Shape finger(double half_width, double length, double body_angle);
/// Tip curvature of `finger(half_width, ...)`.
double finger_tip_curvature(double half_width);

}  // namespace shapes

}  // namespace lmbo
