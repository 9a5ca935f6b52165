#pragma once

// Geometry of the solvable Lie group Sol3 in global coordinates (x, y, z):
//
//   group law   (x1,y1,z1) * (x2,y2,z2) = (x1 + e^{-z1} x2, y1 + e^{z1} y2, z1 + z2)
//   metric      g = e^{2z} dx^2 + e^{-2z} dy^2 + dz^2
//
// The left invariant orthonormal frame is
//
//   E1 = e^{-z} d/dx,   E2 = e^{z} d/dy,   E3 = d/dz
//
// and the space of Killing fields is spanned by
//
//   F1 = d/dx,   F2 = d/dy,   F3 = -x d/dx + y d/dy + d/dz.
//
// Tangent vectors in coordinate components are always handled together with
// the base point they live at, because the coordinate components of the frame
// depend on z.

#include <cmath>
#include <stdexcept>

#include "soltrans/core.hpp"

namespace soltrans {

struct Sol3Point {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Tangent vector components in the coordinate basis (d/dx, d/dy, d/dz).
/// Meaningful only together with a base point.
struct CoordVector {
    double vx = 0.0, vy = 0.0, vz = 0.0;
};

/// Tangent vector components in the orthonormal frame (E1, E2, E3).
struct FrameVector {
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
};

/// Killing field eta*F1 + lambda*F2 + mu*F3, stored by its coefficients.
struct KillingField {
    double f1 = 0.0, f2 = 0.0, f3 = 0.0;
};

inline Sol3Point identity_point() { return {0.0, 0.0, 0.0}; }

inline Sol3Point compose(const Sol3Point& p, const Sol3Point& q) {
    return {p.x + std::exp(-p.z) * q.x, p.y + std::exp(p.z) * q.y, p.z + q.z};
}

inline Sol3Point inverse(const Sol3Point& p) {
    return {-std::exp(p.z) * p.x, -std::exp(-p.z) * p.y, -p.z};
}

/// Metric tensor in coordinates at p: diag(e^{2z}, e^{-2z}, 1).
inline Mat3 metric_at(const Sol3Point& p) {
    return Mat3::diagonal(std::exp(2.0 * p.z), std::exp(-2.0 * p.z), 1.0);
}

inline CoordVector frame_to_coord(const FrameVector& v, const Sol3Point& p) {
    const double ez = std::exp(p.z);
    return {v.e1 / ez, v.e2 * ez, v.e3};
}

inline FrameVector coord_to_frame(const CoordVector& v, const Sol3Point& p) {
    const double ez = std::exp(p.z);
    return {v.vx * ez, v.vy / ez, v.vz};
}

// In the orthonormal frame the metric is Euclidean, so dot, norm and cross
// products of FrameVectors are the flat ones.
inline double dot(const FrameVector& a, const FrameVector& b) {
    return a.e1 * b.e1 + a.e2 * b.e2 + a.e3 * b.e3;
}

inline double norm(const FrameVector& a) { return std::sqrt(dot(a, a)); }

inline FrameVector cross(const FrameVector& a, const FrameVector& b) {
    return {a.e2 * b.e3 - a.e3 * b.e2, a.e3 * b.e1 - a.e1 * b.e3, a.e1 * b.e2 - a.e2 * b.e1};
}

inline FrameVector operator+(const FrameVector& a, const FrameVector& b) {
    return {a.e1 + b.e1, a.e2 + b.e2, a.e3 + b.e3};
}

inline FrameVector operator-(const FrameVector& a, const FrameVector& b) {
    return {a.e1 - b.e1, a.e2 - b.e2, a.e3 - b.e3};
}

inline FrameVector operator*(double s, const FrameVector& a) {
    return {s * a.e1, s * a.e2, s * a.e3};
}

/// Metric pairing of two coordinate-component vectors based at p.
inline double metric_dot(const CoordVector& a, const CoordVector& b, const Sol3Point& p) {
    const Mat3 g = metric_at(p);
    return g(0, 0) * a.vx * b.vx + g(1, 1) * a.vy * b.vy + g(2, 2) * a.vz * b.vz;
}

/// Value of the Killing field at p in coordinate components.
inline CoordVector killing_at(const KillingField& k, const Sol3Point& p) {
    return {k.f1 - k.f3 * p.x, k.f2 + k.f3 * p.y, k.f3};
}

inline FrameVector killing_frame_at(const KillingField& k, const Sol3Point& p) {
    return coord_to_frame(killing_at(k, p), p);
}

/// One-parameter subgroup generated by k = a F1 + b F2 + c F3, evaluated at
/// time t. For c != 0 this is ((a/c)(1 - e^{-ct}), (b/c)(e^{ct} - 1), ct),
/// for c == 0 it is the straight line (a t, b t, 0).
inline Sol3Point flow(const KillingField& k, double t) {
    const double a = k.f1, b = k.f2, c = k.f3;
    if (a == 0.0 && b == 0.0 && c == 0.0)
        throw std::invalid_argument("flow: zero Killing field has no one-parameter subgroup");
    if (c == 0.0) return {a * t, b * t, 0.0};
    // expm1 keeps the x and y components accurate for small |c t|.
    return {-(a / c) * std::expm1(-c * t), (b / c) * std::expm1(c * t), c * t};
}

/// Levi-Civita connection on the left invariant frame. Indices are 1-based;
/// returns nabla_{E_i} E_j. The nonzero entries are
///   nabla_{E1} E1 = -E3,  nabla_{E1} E3 =  E1,
///   nabla_{E2} E2 =  E3,  nabla_{E2} E3 = -E2.
inline FrameVector connection(int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("connection: frame indices must be in 1..3");
    if (i == 1 && j == 1) return {0.0, 0.0, -1.0};
    if (i == 1 && j == 3) return {1.0, 0.0, 0.0};
    if (i == 2 && j == 2) return {0.0, 0.0, 1.0};
    if (i == 2 && j == 3) return {0.0, -1.0, 0.0};
    return {0.0, 0.0, 0.0};
}

/// Lie bracket [E_i, E_j] from the torsion-free connection table.
inline FrameVector frame_bracket(int i, int j) {
    return connection(i, j) - connection(j, i);
}

/// Covariant derivative nabla_u w for left invariant fields with constant
/// frame coefficients u, w.
inline FrameVector invariant_covariant(const FrameVector& u, const FrameVector& w) {
    FrameVector r{};
    const double uc[3] = {u.e1, u.e2, u.e3};
    const double wc[3] = {w.e1, w.e2, w.e3};
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            if (uc[i - 1] == 0.0 || wc[j - 1] == 0.0) continue;
            r = r + (uc[i - 1] * wc[j - 1]) * connection(i, j);
        }
    return r;
}

/// Lie bracket of left invariant fields with constant frame coefficients.
inline FrameVector invariant_bracket(const FrameVector& u, const FrameVector& v) {
    return invariant_covariant(u, v) - invariant_covariant(v, u);
}

/// Curvature operator R(u, v) w = nabla_u nabla_v w - nabla_v nabla_u w
/// - nabla_{[u,v]} w on left invariant fields.
inline FrameVector curvature_op(const FrameVector& u, const FrameVector& v, const FrameVector& w) {
    const FrameVector a = invariant_covariant(u, invariant_covariant(v, w));
    const FrameVector b = invariant_covariant(v, invariant_covariant(u, w));
    const FrameVector c = invariant_covariant(invariant_bracket(u, v), w);
    return a - b - c;
}

/// Sectional curvature of the plane spanned by u and v. The frame values are
/// K(E1,E2) = 1 and K(E1,E3) = K(E2,E3) = -1.
inline double sectional(const FrameVector& u, const FrameVector& v) {
    const double area2 = dot(u, u) * dot(v, v) - dot(u, v) * dot(u, v);
    if (area2 <= 0.0)
        throw std::invalid_argument("sectional: vectors do not span a plane");
    return dot(curvature_op(u, v, v), u) / area2;
}

/// Max-norm of the finite-difference Lie derivative of the metric along a
/// coordinate vector field p -> CoordVector. Vanishes (up to truncation
/// error) exactly for Killing fields.
template <class Field>
double lie_metric_residual(Field&& field, const Sol3Point& p, double h = 1e-4) {
    const CoordVector v0 = field(p);
    const double vc[3] = {v0.vx, v0.vy, v0.vz};

    // dg[k] = d g / d x_k, central differences.
    Mat3 dg[3];
    Sol3Point q;
    for (int k = 0; k < 3; ++k) {
        q = p;
        (k == 0 ? q.x : k == 1 ? q.y : q.z) += h;
        const Mat3 gp = metric_at(q);
        q = p;
        (k == 0 ? q.x : k == 1 ? q.y : q.z) -= h;
        const Mat3 gm = metric_at(q);
        dg[k] = (1.0 / (2.0 * h)) * (gp - gm);
    }

    // dv[i][k] = d v^k / d x_i.
    double dv[3][3];
    for (int i = 0; i < 3; ++i) {
        q = p;
        (i == 0 ? q.x : i == 1 ? q.y : q.z) += h;
        const CoordVector vp = field(q);
        q = p;
        (i == 0 ? q.x : i == 1 ? q.y : q.z) -= h;
        const CoordVector vm = field(q);
        dv[i][0] = (vp.vx - vm.vx) / (2.0 * h);
        dv[i][1] = (vp.vy - vm.vy) / (2.0 * h);
        dv[i][2] = (vp.vz - vm.vz) / (2.0 * h);
    }

    const Mat3 g = metric_at(p);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double lij = 0.0;
            for (int k = 0; k < 3; ++k) {
                lij += vc[k] * dg[k](i, j);
                lij += g(k, j) * dv[i][k];
                lij += g(i, k) * dv[j][k];
            }
            worst = std::max(worst, std::fabs(lij));
        }
    return worst;
}

/// Finite-difference check that k generates isometries: max-norm of the Lie
/// derivative of the metric along k at p.
inline double killing_residual(const KillingField& k, const Sol3Point& p, double h = 1e-4) {
    return lie_metric_residual([&k](const Sol3Point& q) { return killing_at(k, q); }, p, h);
}

}  // namespace soltrans
