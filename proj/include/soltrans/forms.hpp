#pragma once

// Closed-form first/second fundamental forms for the two invariant
// parametrizations.
//
// F1 case, M(u, s) = (u, y(s), z(s)):
//   g = diag(e^{2z}, 1), nu = -sin(theta) E2 + cos(theta) E3, H = theta'.
//
// Slanted case, M(u, s) = (u, bu + y(s), z(s)):
//   the tangent frame picks up a b-dependent E2 component along u, and with
//   W = sqrt(e^{4z} + b^2 sin^2(theta)) the normal and shape data are
//     nu = (b sin(theta), -e^{2z} sin(theta), e^{2z} cos(theta)) / W,
//     A  = [[ (b^2 - e^{4z}) cos(theta),  b (1 + sin^2(theta)) e^{z} ],
//           [          (sym)          ,  (theta' + cos(theta)) e^{2z} ]] / W,
//     H  = e^{2z} ((e^{4z} + b^2) theta' - 2 b^2 cos(theta) sin^2(theta)) / W^3.
// Setting b = 0 recovers the F1 expressions.

#include <cmath>

#include "soltrans/core.hpp"
#include "soltrans/fundamental_forms.hpp"
#include "soltrans/profile.hpp"
#include "soltrans/sol3.hpp"

namespace soltrans {

/// Forms of the F1-invariant surface swept from a profile curve with the
/// given turning rate theta' at this state.
inline FundamentalForms forms_f1_with_rate(const ProfileState& st, double theta_prime) {
    const double sth = std::sin(st.theta), cth = std::cos(st.theta);
    const double e2z = std::exp(2.0 * st.z);
    const double tp = theta_prime;

    FundamentalForms f;
    f.g = {e2z, 0.0, 0.0, 1.0};
    f.A = {-e2z * cth, 0.0, 0.0, tp + cth};
    f.nu = {0.0, -sth, cth};
    f.H = tp;
    f.det_shape = -(tp + cth) * cth;
    f.K = -sth * sth - cth * tp;
    return f;
}

/// Forms of the F1-invariant translator through this state: theta' comes from
/// the autonomous angle equation, so for a minimal family (stationary angle)
/// the same expressions describe the minimal surface.
inline FundamentalForms forms_f1(const ProfileState& st, const F1Params& p) {
    return forms_f1_with_rate(st, f_eval(st.theta, p));
}

/// Forms of the slanted surface given the curve's turning rate theta'.
/// Exposed with an explicit theta' so arbitrary profile curves (not only
/// translator solutions) can be evaluated; b = 0 reduces to the F1 case.
inline FundamentalForms forms_slanted(const ProfileState& st, double b, double theta_prime) {
    const double sth = std::sin(st.theta), cth = std::cos(st.theta);
    const double ez = std::exp(st.z);
    const double e2z = ez * ez;
    const double e4z = e2z * e2z;
    const double b2 = b * b;
    const double w2 = e4z + b2 * sth * sth;
    const double w = std::sqrt(w2);

    FundamentalForms f;
    f.g = {e2z + b2 / e2z, b / ez * cth, b / ez * cth, 1.0};
    f.A = {(b2 - e4z) * cth / w, b * (1.0 + sth * sth) * ez / w,
           b * (1.0 + sth * sth) * ez / w, (theta_prime + cth) * e2z / w};
    f.nu = {b * sth / w, -e2z * sth / w, e2z * cth / w};
    f.H = e2z * ((e4z + b2) * theta_prime - 2.0 * b2 * cth * sth * sth) / (w2 * w);
    f.det_shape = det_times_inverse(f.A, f.g);

    // Intrinsic curvature through the ambient sectional of the tangent plane.
    const FrameVector tu{ez, b / ez, 0.0};
    const FrameVector ts{0.0, cth, sth};
    f.K = sectional(tu, ts) + f.det_shape;
    return f;
}

inline FundamentalForms forms_slanted(const ProfileState& st, const SlantedParams& p) {
    return forms_slanted(st, p.b, rhs_slanted(st, p).dtheta);
}

}  // namespace soltrans
