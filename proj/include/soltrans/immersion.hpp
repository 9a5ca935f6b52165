#pragma once

// Parametrized surfaces (u, s) -> Sol3 used by the mesh builder and the
// finite-difference oracles. Each immersion is a small value type with
// operator()(u, s); curves expose position/velocity/acceleration so the
// vertical-orbit surfaces can be differentiated in closed form.

#include <cmath>
#include <stdexcept>

#include "soltrans/profile.hpp"
#include "soltrans/sol3.hpp"

namespace soltrans {

/// Surface swept from a profile trajectory by the horizontal symmetry
/// F1 + b F2: M(u, s) = flow(u) * (0, y(s), z(s)). b = 0 is the plain
/// F1-invariant case. Holds a non-owning pointer; the trajectory must
/// outlive the immersion.
struct ProfileImmersion {
    const Trajectory* tr = nullptr;
    double b = 0.0;

    Sol3Point operator()(double u, double s) const {
        const ProfileState st = tr->state_at(s);
        return compose(flow(KillingField{1.0, b, 0.0}, u), Sol3Point{0.0, st.y, st.z});
    }
};

/// Arc-length line in the z = 0 plane; (dx, dy) must be unit length, which
/// makes it unit speed since the metric is Euclidean on that plane.
struct LineCurve {
    double x0 = 0.0, y0 = 0.0;
    double dx = 0.0, dy = 1.0;

    Sol3Point at(double s) const { return {x0 + s * dx, y0 + s * dy, 0.0}; }
    CoordVector vel(double) const { return {dx, dy, 0.0}; }
    CoordVector accel(double) const { return {0.0, 0.0, 0.0}; }
};

/// Arc-length circle of the given radius about the origin of the z = 0 plane.
struct CircleCurve {
    double radius = 1.0;

    Sol3Point at(double s) const {
        return {radius * std::cos(s / radius), radius * std::sin(s / radius), 0.0};
    }
    CoordVector vel(double s) const { return {-std::sin(s / radius), std::cos(s / radius), 0.0}; }
    CoordVector accel(double s) const {
        return {-std::cos(s / radius) / radius, -std::sin(s / radius) / radius, 0.0};
    }
};

/// Orbit surface of a symmetry with nonzero F3 component over a curve in the
/// z = 0 plane: M(u, s) = flow(X, u) * curve(s).
template <class Curve>
struct VerticalOrbitImmersion {
    KillingField X;  // X.f3 != 0
    Curve curve;

    Sol3Point operator()(double u, double s) const { return compose(flow(X, u), curve.at(s)); }
};

template <class Curve>
VerticalOrbitImmersion(KillingField, Curve) -> VerticalOrbitImmersion<Curve>;

// Fixed reference surfaces used as oracles: the two minimal plane families,
// and the logarithmic / half-logarithmic graphs over the y-axis. The log
// surfaces are parametrized by (u, y); callers keep y0 + sign*y positive.

struct PlaneZImmersion {
    double z0 = 0.0;
    Sol3Point operator()(double u, double s) const { return {u, s, z0}; }
};

struct PlaneYImmersion {
    double y0 = 0.0;
    Sol3Point operator()(double u, double s) const { return {u, y0, s}; }
};

struct LogImmersion {
    double y0 = 1.0;
    double z0 = 0.0;
    int sign = 1;
    Sol3Point operator()(double u, double y) const {
        return {u, y, std::log(y0 + sign * y) + z0};
    }
};

struct HalfLogImmersion {
    double y0 = 1.0;
    double z0 = 0.0;
    int sign = 1;
    Sol3Point operator()(double u, double y) const {
        return {u, y, 0.5 * std::log(y0 + sign * y) + z0};
    }
};

}  // namespace soltrans
