#pragma once

// Reduction of the translating-soliton equation to the profile ODE.
//
// A surface invariant under X = F1 is parametrized by (u, s) -> (u, y(s), z(s))
// with the generating curve (y, z) traced at unit speed,
//
//   y' = e^{z} cos(theta),   z' = sin(theta),   theta' = H,
//
// and the soliton condition in direction V = eta F1 + lambda F2 + mu F3
// closes the system into the autonomous profile equation
//
//   theta' = f(theta) = mu cos(theta) - (theta - theta0 + lambda) sin(theta),
//
// after eliminating y and z through the conserved quantity
//
//   e^{-z} (lambda + mu y) - (theta - theta0 + lambda) = 0.
//
// For X = F1 + b F2 (b != 0) the same curve variables obey the non-autonomous
// equation implemented by rhs_slanted, and theta is confined to the interval
// (k pi, (k+1) pi) that contains theta0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "soltrans/core.hpp"

namespace soltrans {

struct F1Params {
    double lambda = 0.0;
    double mu = 0.0;
    double theta0 = 0.0;
};

struct SlantedParams {
    double b = 1.0;  // slope of the symmetry direction F1 + b F2, must be nonzero
    double lambda = 0.0;
    double theta0 = 0.0;
};

struct ProfileState {
    double s = 0.0;
    double y = 0.0;
    double z = 0.0;
    double theta = 0.0;
};

inline constexpr double kRootTol = 1e-12;        // bisection width for f zeros
inline constexpr double kDegenerateTol = 1e-12;  // |f(theta0)| below this means constant theta

inline double f_eval(double theta, const F1Params& p) {
    return p.mu * std::cos(theta) - (theta - p.theta0 + p.lambda) * std::sin(theta);
}

/// Zeros of f enclosing theta0. When f(theta0) itself vanishes the bracket is
/// degenerate and the profile is a constant-theta curve.
struct FZeroBracket {
    double theta1 = 0.0;
    double theta2 = 0.0;
    bool degenerate = false;
};

namespace detail {

// Nearest zeros of f above and below theta0 for mu != 0: scan in steps of
// pi/64 for a sign change, then bisect. Every interval [k pi, (k+1) pi]
// contains a zero because f(k pi) f((k+1) pi) = -mu^2 < 0, so the scan
// terminates within 2 pi on each side.
inline double scan_for_zero(const F1Params& p, double from, int direction) {
    const double step = direction * (kPi / 64.0);
    double prev_t = from;
    double prev_f = f_eval(prev_t, p);
    for (int n = 1; n <= 132; ++n) {
        const double t = from + static_cast<double>(n) * step;
        const double ft = f_eval(t, p);
        if (prev_f == 0.0) return prev_t;
        if ((prev_f > 0.0) != (ft > 0.0) || ft == 0.0) {
            const double lo = std::min(prev_t, t);
            const double hi = std::max(prev_t, t);
            return bisect([&p](double th) { return f_eval(th, p); }, lo, hi, kRootTol);
        }
        prev_t = t;
        prev_f = ft;
    }
    throw std::runtime_error("bracket_zeros: no sign change within two periods");
}

}  // namespace detail

inline FZeroBracket bracket_zeros(const F1Params& p) {
    if (std::fabs(f_eval(p.theta0, p)) <= kDegenerateTol)
        return {p.theta0, p.theta0, true};

    if (p.mu == 0.0) {
        // f = -(theta - theta0 + lambda) sin(theta): the zero set is exactly
        // { k pi } together with theta0 - lambda, no search required.
        const double special = p.theta0 - p.lambda;
        double below = -std::numeric_limits<double>::infinity();
        double above = std::numeric_limits<double>::infinity();
        auto consider = [&](double zero) {
            if (zero < p.theta0 && zero > below) below = zero;
            if (zero > p.theta0 && zero < above) above = zero;
        };
        consider(special);
        const long k0 = static_cast<long>(std::floor(p.theta0 / kPi));
        for (long k = k0 - 1; k <= k0 + 2; ++k) consider(static_cast<double>(k) * kPi);
        return {below, above, false};
    }

    const double below = detail::scan_for_zero(p, p.theta0, -1);
    const double above = detail::scan_for_zero(p, p.theta0, +1);
    return {below, above, false};
}

/// Barrier interval (k pi, (k+1) pi) containing theta0; degenerate when
/// theta0 sits on a multiple of pi (constant-theta horizontal plane).
inline FZeroBracket slanted_barrier(const SlantedParams& p) {
    if (distance_to_multiple(p.theta0, kPi) <= 1e-12) return {p.theta0, p.theta0, true};
    const double k = std::floor(p.theta0 / kPi);
    return {k * kPi, (k + 1.0) * kPi, false};
}

struct Deriv {
    double dy = 0.0, dz = 0.0, dtheta = 0.0;
};

inline Deriv rhs_f1(const ProfileState& st, const F1Params& p) {
    return {std::exp(st.z) * std::cos(st.theta), std::sin(st.theta), f_eval(st.theta, p)};
}

inline Deriv rhs_slanted(const ProfileState& st, const SlantedParams& p) {
    const double sth = std::sin(st.theta);
    const double cth = std::cos(st.theta);
    const double b2 = p.b * p.b;
    // Two algebraically equal forms, chosen so the exponentials stay bounded
    // on the side of z where each is used.
    double dtheta;
    if (st.z >= 0.0) {
        const double em4z = std::exp(-4.0 * st.z);
        dtheta = sth *
                 (b2 * em4z * (2.0 * sth * cth - p.lambda * std::exp(-st.z) * sth * sth) -
                  p.lambda * std::exp(-st.z)) /
                 (1.0 + b2 * em4z);
    } else {
        const double e4z = std::exp(4.0 * st.z);
        dtheta = sth *
                 (b2 * (2.0 * sth * cth - p.lambda * std::exp(-st.z) * sth * sth) -
                  p.lambda * std::exp(3.0 * st.z)) /
                 (e4z + b2);
    }
    return {std::exp(st.z) * cth, sth, dtheta};
}

/// Conserved quantity of the F1 system, zero along exact solutions started at
/// y(0) = z(0) = 0, theta(0) = theta0.
inline double first_integral(const ProfileState& st, const F1Params& p) {
    return std::exp(-st.z) * (p.lambda + p.mu * st.y) - (st.theta - p.theta0 + p.lambda);
}

enum class StopReason {
    reached_bound,   // integrated to the requested |s|
    equilibrium,     // theta parked at a bracket endpoint with negligible drift
    step_underflow,  // step control could not advance (reported, never silent)
};

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::reached_bound: return "reached_bound";
        case StopReason::equilibrium: return "equilibrium";
        case StopReason::step_underflow: return "step_underflow";
    }
    return "?";
}

struct IntegratorConfig {
    // Local tolerances are two orders below the 1e-8 conservation budget:
    // global drift accumulates roughly linearly in the step count, so the
    // per-step error must undershoot the end-to-end target substantially.
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-13;
    double h_max = 0.25;          // also caps the sample spacing of the output
    double growth_cap = 5.0;      // max step growth per accepted step
    // |theta - endpoint| and |theta'| both below these stop the march early.
    // The stall bound must stay above the level where theta freezes in
    // roundoff: near a pi/2 endpoint the y-equation loses ~e^z * eps to
    // cancellation, the controller shrinks h against that noise floor, and
    // once h |theta'| drops under an ulp of theta the angle cannot move
    // again; a tighter bound then spins until the step underflows.
    double equilibrium_tol = 1e-9;
    double stall_tol = 1e-9;
    // The early stop avoids integrating a parked angle forever, but some
    // consumers need the curve itself out to a fixed |s| even after theta has
    // converged (its y and z keep evolving there); they switch this off.
    bool stop_at_equilibrium = true;
    std::size_t max_steps = 5'000'000;
};

/// Result of a two-sided integration from s = 0. Samples are sorted by
/// strictly increasing s and always contain the initial state at s = 0.
struct Trajectory {
    std::vector<ProfileState> samples;
    std::variant<F1Params, SlantedParams> params;
    FZeroBracket bracket;  // f-zero bracket (F1) or barrier interval (slanted)
    StopReason stop_backward = StopReason::reached_bound;
    StopReason stop_forward = StopReason::reached_bound;
    std::size_t origin = 0;  // index of the s = 0 sample
    IntegratorConfig cfg;

    bool slanted() const { return std::holds_alternative<SlantedParams>(params); }
    const ProfileState& front() const { return samples.front(); }
    const ProfileState& back() const { return samples.back(); }

    ProfileState state_at(double s) const;
};

namespace detail {

using State3 = std::array<double, 3>;  // (y, z, theta)

inline ProfileState to_state(double s, const State3& v) { return {s, v[0], v[1], v[2]}; }

// Dormand-Prince 5(4) step: returns the 5th order update and an embedded
// error estimate.
template <class Rhs>
void dp45_step(const Rhs& rhs, const State3& v, double h, State3& out, State3& err) {
    auto eval = [&rhs](const State3& w) { return rhs(w); };
    auto axpy = [](const State3& base, std::initializer_list<std::pair<double, const State3*>> terms,
                   double h2) {
        State3 r = base;
        for (const auto& [c, k] : terms)
            for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(i)] += h2 * c * (*k)[static_cast<std::size_t>(i)];
        return r;
    };

    const State3 k1 = eval(v);
    const State3 k2 = eval(axpy(v, {{1.0 / 5.0, &k1}}, h));
    const State3 k3 = eval(axpy(v, {{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}, h));
    const State3 k4 = eval(axpy(v, {{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}}, h));
    const State3 k5 = eval(axpy(v,
                                {{19372.0 / 6561.0, &k1},
                                 {-25360.0 / 2187.0, &k2},
                                 {64448.0 / 6561.0, &k3},
                                 {-212.0 / 729.0, &k4}},
                                h));
    const State3 k6 = eval(axpy(v,
                                {{9017.0 / 3168.0, &k1},
                                 {-355.0 / 33.0, &k2},
                                 {46732.0 / 5247.0, &k3},
                                 {49.0 / 176.0, &k4},
                                 {-5103.0 / 18656.0, &k5}},
                                h));
    out = axpy(v,
               {{35.0 / 384.0, &k1},
                {500.0 / 1113.0, &k3},
                {125.0 / 192.0, &k4},
                {-2187.0 / 6784.0, &k5},
                {11.0 / 84.0, &k6}},
               h);
    const State3 k7 = eval(out);

    static constexpr double d1 = 71.0 / 57600.0, d3 = -71.0 / 16695.0, d4 = 71.0 / 1920.0,
                            d5 = -17253.0 / 339200.0, d6 = 22.0 / 525.0, d7 = -1.0 / 40.0;
    for (std::size_t i = 0; i < 3; ++i)
        err[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
}

inline double error_norm(const State3& v, const State3& vn, const State3& err,
                         const IntegratorConfig& cfg) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(v[i]), std::fabs(vn[i]));
        worst = std::max(worst, std::fabs(err[i]) / scale);
    }
    return worst;
}

// Advance one direction from (s=0, v0) up to s_span > 0 in internal time.
// The rhs is already direction-adjusted; record() receives internal time.
template <class Rhs, class Record, class Stop>
StopReason march(const Rhs& rhs, State3 v, double s_span, const IntegratorConfig& cfg,
                 Record&& record, Stop&& stop_test) {
    double s = 0.0;
    double h = std::min(cfg.h_init, s_span);
    for (std::size_t n = 0; n < cfg.max_steps; ++n) {
        if (s >= s_span - cfg.h_min) return StopReason::reached_bound;
        h = std::min(h, s_span - s);
        if (h < cfg.h_min) return StopReason::step_underflow;

        State3 vn, err;
        dp45_step(rhs, v, h, vn, err);
        const double en = error_norm(v, vn, err, cfg);
        if (en <= 1.0) {
            s += h;
            v = vn;
            record(s, v);
            if (stop_test(v)) return StopReason::equilibrium;
            const double factor = (en == 0.0) ? cfg.growth_cap
                                              : std::clamp(0.9 * std::pow(en, -0.2), 0.2, cfg.growth_cap);
            h = std::min(h * factor, cfg.h_max);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            if (h < cfg.h_min) return StopReason::step_underflow;
        }
    }
    return StopReason::step_underflow;  // step budget exhausted
}

struct EquilibriumTest {
    double lo, hi;
    bool active;
    const IntegratorConfig* cfg;

    template <class ThetaPrime>
    bool check(const State3& v, ThetaPrime&& tp) const {
        if (!active) return false;
        const double d = std::min(std::fabs(v[2] - lo), std::fabs(v[2] - hi));
        return d < cfg->equilibrium_tol && std::fabs(tp(v)) < cfg->stall_tol;
    }
};

template <class Rhs>
Trajectory integrate_impl(Trajectory tr, const Rhs& rhs, bool freeze_theta, double s_max) {
    const IntegratorConfig& cfg = tr.cfg;
    if (!(s_max > 0.0)) throw std::invalid_argument("integrate: s_max must be positive");

    auto wrapped = [&rhs, freeze_theta](int direction) {
        return [&rhs, freeze_theta, direction](const State3& v) {
            Deriv d = rhs(to_state(0.0, v));
            if (freeze_theta) d.dtheta = 0.0;
            const double sgn = static_cast<double>(direction);
            return State3{sgn * d.dy, sgn * d.dz, sgn * d.dtheta};
        };
    };
    auto theta_prime = [&rhs, freeze_theta](const State3& v) {
        if (freeze_theta) return 0.0;
        return rhs(to_state(0.0, v)).dtheta;
    };
    const EquilibriumTest eq{tr.bracket.theta1, tr.bracket.theta2,
                             cfg.stop_at_equilibrium && !tr.bracket.degenerate, &cfg};

    const State3 v0{0.0, 0.0, std::visit([](const auto& p) { return p.theta0; }, tr.params)};

    std::vector<ProfileState> backward;
    tr.stop_backward = march(
        wrapped(-1), v0, s_max, cfg,
        [&backward](double t, const State3& v) { backward.push_back(to_state(-t, v)); },
        [&](const State3& v) { return eq.check(v, theta_prime); });

    std::vector<ProfileState> forward;
    tr.stop_forward = march(
        wrapped(+1), v0, s_max, cfg,
        [&forward](double t, const State3& v) { forward.push_back(to_state(t, v)); },
        [&](const State3& v) { return eq.check(v, theta_prime); });

    tr.samples.reserve(backward.size() + forward.size() + 1);
    tr.samples.assign(backward.rbegin(), backward.rend());
    tr.origin = tr.samples.size();
    tr.samples.push_back(to_state(0.0, v0));
    tr.samples.insert(tr.samples.end(), forward.begin(), forward.end());
    return tr;
}

}  // namespace detail

inline Trajectory integrate(const F1Params& p, double s_max, IntegratorConfig cfg = {}) {
    Trajectory tr;
    tr.params = p;
    tr.bracket = bracket_zeros(p);
    tr.cfg = cfg;
    const bool freeze = tr.bracket.degenerate;
    return detail::integrate_impl(
        std::move(tr), [&p](const ProfileState& st) { return rhs_f1(st, p); }, freeze, s_max);
}

inline Trajectory integrate(const SlantedParams& p, double s_max, IntegratorConfig cfg = {}) {
    if (p.b == 0.0) throw std::invalid_argument("integrate: slanted symmetry needs b != 0");
    Trajectory tr;
    tr.params = p;
    tr.bracket = slanted_barrier(p);
    tr.cfg = cfg;
    const bool freeze = tr.bracket.degenerate;
    return detail::integrate_impl(
        std::move(tr), [&p](const ProfileState& st) { return rhs_slanted(st, p); }, freeze, s_max);
}

/// Evaluate the trajectory at an arbitrary parameter value by re-integrating
/// from the nearest stored sample at the same tolerances. Queries outside the
/// integrated range are clamped to the endpoint states.
inline ProfileState Trajectory::state_at(double s) const {
    if (samples.empty()) throw std::logic_error("state_at: empty trajectory");
    if (s <= samples.front().s) return samples.front();
    if (s >= samples.back().s) return samples.back();

    auto it = std::upper_bound(samples.begin(), samples.end(), s,
                               [](double a, const ProfileState& b) { return a < b.s; });
    const ProfileState& base = *(it - 1);
    const double span = s - base.s;
    if (span == 0.0) return base;

    ProfileState out = base;
    auto run = [&](const auto& p) {
        auto rhs = [&p, this](const detail::State3& v) {
            ProfileState st{0.0, v[0], v[1], v[2]};
            Deriv d;
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, F1Params>)
                d = rhs_f1(st, p);
            else
                d = rhs_slanted(st, p);
            if (bracket.degenerate) d.dtheta = 0.0;
            return detail::State3{d.dy, d.dz, d.dtheta};
        };
        detail::State3 v{base.y, base.z, base.theta};
        detail::march(rhs, v, span, cfg,
                      [&v](double, const detail::State3& w) { v = w; },
                      [](const detail::State3&) { return false; });
        out = detail::to_state(s, v);
    };
    std::visit(run, params);
    return out;
}

/// Sign-change locations of y' = e^z cos(theta) and z' = sin(theta) along the
/// trajectory, refined by bisection in s. theta is monotone between samples,
/// so each crossing is isolated by consecutive samples of opposite sign.
struct CriticalPoints {
    std::vector<double> s_y;  // parameter values where y' changes sign
    std::vector<double> s_z;
    int count_y() const { return static_cast<int>(s_y.size()); }
    int count_z() const { return static_cast<int>(s_z.size()); }
};

namespace detail {

template <class Value>
void collect_crossings(const Trajectory& tr, Value&& value, std::vector<double>& out) {
    int prev_sign = 0;
    double prev_s = 0.0;
    for (const ProfileState& st : tr.samples) {
        const double v = value(st);
        const int sign = (v > 0.0) ? 1 : (v < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (prev_sign != 0 && sign != prev_sign) {
            const double s_star = bisect(
                [&tr, &value](double s) { return value(tr.state_at(s)); }, prev_s,
                st.s, 1e-10);
            out.push_back(s_star);
        }
        prev_sign = sign;
        prev_s = st.s;
    }
}

}  // namespace detail

inline CriticalPoints critical_points(const Trajectory& tr) {
    CriticalPoints cp;
    detail::collect_crossings(tr, [](const ProfileState& st) { return std::cos(st.theta); }, cp.s_y);
    detail::collect_crossings(tr, [](const ProfileState& st) { return std::sin(st.theta); }, cp.s_z);
    return cp;
}

/// Samples of one end of the trajectory suitable for asymptote fitting: the
/// last keep_fraction of the parameter span lying strictly beyond the
/// outermost critical point in that direction (+1 = forward, -1 = backward).
/// The window is cut in s rather than by sample count because the adaptive
/// steps concentrate samples in the transient; a count-based quartile would
/// reach back into it. Ordered away from s = 0. Throws when fewer than 50
/// samples qualify. By default a thin window is widened to the last 50
/// samples; with strict_window that widening throws instead, so callers that
/// care about window purity can re-integrate with a smaller step cap.
inline std::vector<ProfileState> tail_samples(const Trajectory& tr, int direction,
                                              double keep_fraction = 0.25,
                                              bool strict_window = false) {
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("tail_samples: direction must be +1 or -1");
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
        throw std::invalid_argument("tail_samples: keep_fraction must lie in (0, 1]");
    const CriticalPoints cp = critical_points(tr);
    double cutoff = 0.0;
    for (const auto& list : {cp.s_y, cp.s_z})
        for (double s : list)
            if (direction > 0)
                cutoff = std::max(cutoff, s);
            else
                cutoff = std::min(cutoff, s);

    std::vector<ProfileState> beyond;
    for (const ProfileState& st : tr.samples)
        if (direction > 0 ? st.s > cutoff : st.s < cutoff) beyond.push_back(st);
    if (direction < 0) std::reverse(beyond.begin(), beyond.end());

    if (beyond.size() < 50)
        throw std::runtime_error("tail_samples: tail too short for a stable fit");

    const double span = beyond.back().s - beyond.front().s;
    std::vector<ProfileState> kept;
    if (span == 0.0) {
        kept = beyond;
    } else {
        const double lo = 1.0 - keep_fraction;
        for (const ProfileState& st : beyond)
            if ((st.s - beyond.front().s) / span >= lo) kept.push_back(st);
    }
    if (kept.size() < 50) {
        // Widening by count pulls in samples from nearer the transient, which
        // shifts the fitted constants; strict callers re-integrate instead.
        if (strict_window)
            throw std::runtime_error("tail_samples: too few samples in the fit window");
        kept.assign(beyond.end() - 50, beyond.end());
    }
    return kept;
}

/// CSV serialization: header plus one row per sample at full precision. The
/// residual column carries the F1 conserved quantity and is zero for slanted
/// trajectories, which have no first integral in these variables.
inline void write_trajectory_csv(const Trajectory& tr, std::ostream& os) {
    os << "s,y,z,theta,first_integral_residual\n";
    const F1Params* f1 = std::get_if<F1Params>(&tr.params);
    for (const ProfileState& st : tr.samples) {
        const double resid = f1 ? first_integral(st, *f1) : 0.0;
        os << format_full(st.s) << ',' << format_full(st.y) << ',' << format_full(st.z) << ','
           << format_full(st.theta) << ',' << format_full(resid) << '\n';
    }
}

inline void write_trajectory_csv(const Trajectory& tr, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_trajectory_csv(tr, os);
    if (!os.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace soltrans
