// Acceptance harness. Each numbered target prints one pass/fail line and is
// asserted, so the exit status reflects the outcome. Two targets encode
// table values the computed curves genuinely contradict: the figure 5
// critical-point count, and the flat conservation bound on random draws,
// whose e^{-z} amplified evaluation floor exceeds it. Both are asserted
// faithfully and left red rather than weakened to fit.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "soltrans/classify.hpp"
#include "soltrans/forms.hpp"
#include "soltrans/immersion.hpp"
#include "soltrans/presets.hpp"
#include "soltrans/profile.hpp"
#include "soltrans/verify.hpp"

using namespace soltrans;

namespace {

void criterion_line(int n, bool pass, const std::string& detail) {
    std::printf("[acceptance] criterion %d: %s (%s)\n", n, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

Trajectory preset_trajectory(int id, double span, double tol = 1e-12) {
    IntegratorConfig cfg;
    cfg.stop_at_equilibrium = false;
    cfg.abs_tol = cfg.rel_tol = tol;
    return integrate(preset_params(figure_preset(id)), span, cfg);
}

bool strictly_monotone(const std::vector<ProfileState>& samples, double (*get)(const ProfileState&)) {
    if (samples.size() < 2) return true;
    const int dir = get(samples.back()) > get(samples.front()) ? 1 : -1;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (dir * (get(samples[i]) - get(samples[i - 1])) <= 0.0) return false;
    return true;
}

}  // namespace

TEST_CASE("1: figure presets reproduce caption counts and end taxonomy") {
    bool all = true;
    std::string detail;
    for (int id = 1; id <= 7; ++id) {
        const FigurePreset& fp = figure_preset(id);
        const Trajectory tr = preset_trajectory(id, 30.0);
        const CriticalPoints cp = critical_points(tr);
        const TranslatorClass tc = classify_f1(preset_params(fp));

        const bool counts_ok = cp.s_y.size() == static_cast<std::size_t>(fp.count_y) &&
                               cp.s_z.size() == static_cast<std::size_t>(fp.count_z);
        const bool ends_ok = tc.family == fp.family && tc.ends[0].has_value() &&
                             tc.ends[1].has_value() && tc.ends[0]->kind == fp.end_backward &&
                             tc.ends[1]->kind == fp.end_forward;
        const bool monotone_ok =
            id != 6 || strictly_monotone(tr.samples, [](const ProfileState& st) { return st.z; });

        if (!(counts_ok && ends_ok && monotone_ok)) {
            all = false;
            detail += (detail.empty() ? "" : "; ") + ("figure " + std::to_string(id)) +
                      " counts y=" + std::to_string(cp.s_y.size()) +
                      " z=" + std::to_string(cp.s_z.size()) + " vs table y=" +
                      std::to_string(fp.count_y) + " z=" + std::to_string(fp.count_z);
        }
        INFO("figure " << id);
        CHECK(counts_ok);
        CHECK(ends_ok);
        CHECK(monotone_ok);
    }
    criterion_line(1, all, all ? "7 presets match counts, families and ends" : detail);
}

TEST_CASE("2: figure one z limits hit their closed forms") {
    const Trajectory tr = preset_trajectory(1, 30.0);
    const double lo = std::log(3.0 / (3.0 + kPi / 2.0));
    const double hi = std::log(3.0 / (3.0 - kPi / 2.0));
    const double zb = tr.samples.front().z, zf = tr.samples.back().z;
    const bool ok = std::fabs(zb - lo) < 1e-5 && std::fabs(zf - hi) < 1e-5;
    criterion_line(2, ok,
                   "backward " + format_full(zb) + " vs log(3/(3+pi/2)), forward " +
                       format_full(zf) + " vs log(3/(3-pi/2)), tol 1e-05");
    CHECK(std::fabs(zb - lo) < 1e-5);
    CHECK(std::fabs(zf - hi) < 1e-5);
}

TEST_CASE("3: figure four angle limits and vanishing ends") {
    const double theta_star =
        bisect([](double t) { return std::cos(t) + t * std::sin(t); }, 2.0, 3.0, 1e-12);
    const FZeroBracket br = bracket_zeros(preset_params(figure_preset(4)));
    const Trajectory tr = preset_trajectory(4, 30.0);
    const double yb = tr.samples.front().y, yf = tr.samples.back().y;

    const bool limits_ok = std::fabs(br.theta1 + theta_star) < 1e-10 &&
                           std::fabs(br.theta2 - theta_star) < 1e-10;
    const bool ends_ok = std::fabs(yb) < 1e-4 && std::fabs(yf) < 1e-4;
    criterion_line(3, limits_ok && ends_ok,
                   "theta* = " + format_full(theta_star) + ", bracket error < 1e-10: " +
                       (limits_ok ? "yes" : "no") + ", |y(+-30)| = " +
                       format_full(std::max(std::fabs(yb), std::fabs(yf))));
    CHECK(limits_ok);
    CHECK(ends_ok);
}

TEST_CASE("4: first integral conservation at the flat target") {
    // The presets clear the flat bound once the integrator tolerance is
    // tightened to 1e-13; the bound itself does not pin a tolerance, so the
    // accuracy needed to demonstrate the conservation property is fair game.
    bool presets_ok = true;
    double preset_worst = 0.0;
    for (int id = 1; id <= 7; ++id) {
        const F1Params p = preset_params(figure_preset(id));
        const Trajectory tr = preset_trajectory(id, 20.0, 1e-13);
        double drift = 0.0;
        for (const ProfileState& st : tr.samples)
            drift = std::max(drift, std::fabs(first_integral(st, p)));
        preset_worst = std::max(preset_worst, drift);
        if (drift >= 1e-8) presets_ok = false;
        INFO("figure " << id);
        CHECK(drift < 1e-8);
    }

    // Random draws that dive to z = -20 amplify the first integral's own
    // evaluation noise by e^{-z}, past the flat bound at any integrator
    // tolerance; the flat check stays red and the z-aware budget is asserted
    // alongside it.
    Rng rng(424242);
    double flat_worst = 0.0, excess_worst = 0.0, zmin_at_worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const F1Params p{rng.uniform(-2.0, 2.0), rng.coin() ? 0.0 : rng.uniform(-2.0, 2.0),
                         rng.uniform(-kPi, kPi)};
        if (p.lambda == 0.0 && p.mu == 0.0) continue;
        IntegratorConfig cfg;
        cfg.stop_at_equilibrium = false;
        cfg.abs_tol = cfg.rel_tol = 1e-13;
        const Trajectory tr = integrate(p, 20.0, cfg);
        double drift = 0.0, zmin = 0.0;
        for (const ProfileState& st : tr.samples) {
            drift = std::max(drift, std::fabs(first_integral(st, p)));
            zmin = std::min(zmin, st.z);
        }
        if (drift > flat_worst) {
            flat_worst = drift;
            zmin_at_worst = zmin;
        }
        excess_worst = std::max(excess_worst, drift / (1e-8 + 1e-11 * std::exp(-zmin)));
    }
    const bool random_flat_ok = flat_worst < 1e-8;
    const bool random_budget_ok = excess_worst < 1.0;

    criterion_line(4, presets_ok && random_flat_ok,
                   "presets max drift " + format_full(preset_worst) +
                       " at integrator tol 1e-13; random max drift " + format_full(flat_worst) +
                       " at zmin " + format_full(zmin_at_worst) + ", budget ratio " +
                       format_full(excess_worst));
    CHECK(presets_ok);
    CHECK(random_flat_ok);
    CHECK(random_budget_ok);
}

TEST_CASE("5: translator residual along presets with negative control") {
    double worst = 0.0;
    for (int id = 1; id <= 7; ++id) {
        const FigurePreset& fp = figure_preset(id);
        const F1Params p = preset_params(fp);
        const Trajectory tr = preset_trajectory(id, 20.0);
        const std::size_t n = tr.samples.size();
        double figure_worst = 0.0;
        for (std::size_t k = 0; k < 100; ++k) {
            const ProfileState& st = tr.samples[k * (n - 1) / 99];
            const AnchoredProfileImmersion m{p, {}, false, st};
            const double u = (k % 2 == 0) ? 0.25 : -0.5;
            figure_worst =
                std::max(figure_worst, translator_residual(m, fp.V, u, 0.0, 1e-3).error);
        }
        worst = std::max(worst, figure_worst);
        INFO("figure " << id);
        CHECK(figure_worst < 1e-4);
    }

    const double control =
        translator_residual(PlaneZImmersion{}, KillingField{0.0, 0.0, 1.0}, 0.0, 0.0, 1e-3)
            .error;
    criterion_line(5, worst < 1e-4 && control >= 0.5,
                   "max residual " + format_full(worst) + " over 700 points, control " +
                       format_full(control));
    CHECK(control >= 0.5);
}

TEST_CASE("6: zero bracketing widths and the sign product") {
    Rng rng(606060);
    bool widths_ok = true, product_ok = true, factor_ok = true;
    double worst_rel = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double mu = (rng.coin() ? 1.0 : -1.0) * rng.uniform(0.01, 3.0);
        const F1Params p{rng.uniform(-4.0, 4.0), mu, rng.uniform(-6.0, 6.0)};
        const FZeroBracket b = bracket_zeros(p);
        if (!b.degenerate && !(b.theta2 - b.theta1 < 2.0 * kPi)) widths_ok = false;

        const int k = rng.uniform_int(-3, 3);
        const double prod = f_eval(k * kPi, p) * f_eval((k + 1) * kPi, p);
        const double rel = std::fabs(prod + mu * mu) / (mu * mu);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-9) product_ok = false;
    }
    for (int i = 0; i < 1000; ++i) {
        const F1Params p{rng.uniform(-4.0, 4.0), 0.0, rng.uniform(-6.0, 6.0)};
        const FZeroBracket b = bracket_zeros(p);
        if (!b.degenerate && !(b.theta2 - b.theta1 <= kPi + 1e-9)) factor_ok = false;
    }
    criterion_line(6, widths_ok && product_ok && factor_ok,
                   "1000 draws each; worst product deviation " + format_full(worst_rel) +
                       " relative");
    CHECK(widths_ok);
    CHECK(product_ok);
    CHECK(factor_ok);
}

TEST_CASE("7: monotone angle and the slanted barrier") {
    Rng rng(707070);
    bool monotone_ok = true, confined_ok = true;
    int used = 0;
    while (used < 200) {
        const F1Params p{rng.uniform(-3.0, 3.0), rng.coin() ? 0.0 : rng.uniform(-2.0, 2.0),
                         rng.uniform(-6.0, 6.0)};
        if (p.lambda == 0.0 && p.mu == 0.0) continue;
        const FZeroBracket b = bracket_zeros(p);
        if (b.degenerate) continue;
        ++used;
        const Trajectory tr = integrate(p, 30.0);
        const int dir = f_eval(p.theta0, p) > 0.0 ? 1 : -1;
        for (std::size_t i = 0; i < tr.samples.size(); ++i) {
            const double th = tr.samples[i].theta;
            if (i > 0 && dir * (th - tr.samples[i - 1].theta) <= 0.0) monotone_ok = false;
            if (!(th > b.theta1 && th < b.theta2)) confined_ok = false;
        }
    }

    bool barrier_ok = true;
    used = 0;
    while (used < 200) {
        const double theta0 = rng.uniform(-6.0, 6.0);
        if (distance_to_multiple(theta0, kPi) <= 1e-9) continue;
        const SlantedParams sp{(rng.coin() ? 1.0 : -1.0) * rng.uniform(0.3, 2.0),
                               rng.uniform(-2.0, 2.0), theta0};
        ++used;
        const double lo = std::floor(theta0 / kPi) * kPi;
        const double hi = lo + kPi;
        const Trajectory tr = integrate(sp, 30.0);
        for (const ProfileState& st : tr.samples)
            if (!(st.theta > lo && st.theta < hi)) barrier_ok = false;
    }
    criterion_line(7, monotone_ok && confined_ok && barrier_ok,
                   "200 draws per suite; monotone " + std::string(monotone_ok ? "yes" : "no") +
                       ", confined " + (confined_ok ? "yes" : "no") + ", barrier " +
                       (barrier_ok ? "yes" : "no"));
    CHECK(monotone_ok);
    CHECK(confined_ok);
    CHECK(barrier_ok);
}

TEST_CASE("8: minimality oracles for the reference surfaces") {
    const double pts[3][2] = {{0.0, 0.0}, {0.4, -0.7}, {-1.1, 0.6}};
    double worst_minimal = 0.0;

    for (const double z0 : {-0.3, 0.0, 1.2}) {
        const PlaneZImmersion m{z0};
        for (const auto& p : pts)
            worst_minimal = std::max(worst_minimal, std::fabs(fd_forms(m, p[0], p[1], 1e-3).H));
    }
    for (const double y0 : {-0.5, 0.8}) {
        const PlaneYImmersion m{y0};
        for (const auto& p : pts)
            worst_minimal = std::max(worst_minimal, std::fabs(fd_forms(m, p[0], p[1], 1e-3).H));
    }
    for (const LogImmersion m : {LogImmersion{1.0, 0.3, 1}, LogImmersion{2.0, -0.1, -1}}) {
        for (const double y : {0.0, 0.5, 0.9})
            worst_minimal = std::max(worst_minimal, std::fabs(fd_forms(m, 0.2, y, 1e-3).H));
    }

    const HalfLogImmersion half{};
    double half_max = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double z = 0.1 * i;
        const double y = std::expm1(2.0 * z);
        half_max = std::max(half_max, std::fabs(fd_forms(half, 0.0, y, 1e-3).H));
    }

    criterion_line(8, worst_minimal < 1e-5 && half_max > 0.1,
                   "planes and log |H| <= " + format_full(worst_minimal) +
                       ", half-log max |H| = " + format_full(half_max));
    CHECK(worst_minimal < 1e-5);
    CHECK(half_max > 0.1);
}

TEST_CASE("9: existence dichotomy for vertical symmetries") {
    Rng rng(909090);
    const CircleCurve circle{1.0};
    bool dichotomy_ok = true, detect_ok = true;
    int n_exist = 0, n_none = 0, n_flagged = 0;
    for (int i = 0; i < 1000; ++i) {
        const KillingField x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                             (rng.coin() ? 1.0 : -1.0) * rng.uniform(0.3, 2.0)};
        KillingField v{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const double t = v.f3 / x.f3;
        // a third of the draws are pinned to each exact-zero branch so both
        // sides of the equivalence actually occur
        const int mode = rng.uniform_int(0, 2);
        if (mode == 0) v.f1 = t * x.f1;
        if (mode == 1) v.f2 = t * x.f2;

        const ExistenceVerdict verdict = classify_vertical(x, v);
        const double eta_tilde = v.f1 - t * x.f1;
        const double lambda_tilde = v.f2 - t * x.f2;
        if (verdict.exists != (lambda_tilde * eta_tilde == 0.0)) dichotomy_ok = false;

        if (verdict.exists) {
            ++n_exist;
        } else {
            ++n_none;
            if (u_independence_check(x, circle, v, 0.75).u_dependent)
                ++n_flagged;
            else
                detect_ok = false;
        }
    }
    criterion_line(9, dichotomy_ok && detect_ok && n_exist > 100 && n_none > 100,
                   "1000 draws: " + std::to_string(n_exist) + " exist, " + std::to_string(n_none) +
                       " rejected, " + std::to_string(n_flagged) + " flagged u-dependent");
    CHECK(dichotomy_ok);
    CHECK(detect_ok);
    CHECK(n_exist > 100);
    CHECK(n_none > 100);
}

TEST_CASE("10: ambient geometry invariants") {
    Rng rng(101010);
    double worst_axiom = 0.0, worst_iso = 0.0, worst_kill = 0.0, worst_homo = 0.0;
    const KillingField basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 100; ++i) {
        const Sol3Point a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Sol3Point b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Sol3Point c{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};

        const Sol3Point lhs = compose(compose(a, b), c);
        const Sol3Point rhs = compose(a, compose(b, c));
        const Sol3Point e = compose(inverse(a), a);
        const Sol3Point id = compose(a, identity_point());
        worst_axiom = std::max({worst_axiom, std::fabs(lhs.x - rhs.x), std::fabs(lhs.y - rhs.y),
                                std::fabs(lhs.z - rhs.z), std::fabs(e.x), std::fabs(e.y),
                                std::fabs(e.z), std::fabs(id.x - a.x), std::fabs(id.y - a.y),
                                std::fabs(id.z - a.z)});

        // left translation by a, differentiated along u at b, must preserve
        // the metric pairing
        const CoordVector u{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const CoordVector v{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double h = 1e-5;
        auto push = [&](const CoordVector& w) {
            const Sol3Point qp = compose(a, Sol3Point{b.x + h * w.vx, b.y + h * w.vy,
                                                      b.z + h * w.vz});
            const Sol3Point qm = compose(a, Sol3Point{b.x - h * w.vx, b.y - h * w.vy,
                                                      b.z - h * w.vz});
            return CoordVector{(qp.x - qm.x) / (2 * h), (qp.y - qm.y) / (2 * h),
                               (qp.z - qm.z) / (2 * h)};
        };
        const double before = metric_dot(u, v, b);
        const double after = metric_dot(push(u), push(v), compose(a, b));
        worst_iso = std::max(worst_iso, std::fabs(after - before) / (1.0 + std::fabs(before)));

        for (const KillingField& k : basis)
            worst_kill = std::max(worst_kill, killing_residual(k, a));

        const KillingField k{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (std::fabs(k.f1) + std::fabs(k.f2) + std::fabs(k.f3) > 1e-3) {
            const double s = rng.uniform(-2, 2), t2 = rng.uniform(-2, 2);
            const Sol3Point whole = flow(k, s + t2);
            const Sol3Point split = compose(flow(k, s), flow(k, t2));
            worst_homo = std::max({worst_homo, std::fabs(whole.x - split.x),
                                   std::fabs(whole.y - split.y), std::fabs(whole.z - split.z)});
        }
    }
    criterion_line(10, worst_axiom < 1e-6 && worst_iso < 1e-6 && worst_kill < 1e-6 &&
                           worst_homo < 1e-10,
                   "axioms " + format_full(worst_axiom) + ", isometry " + format_full(worst_iso) +
                       ", Killing " + format_full(worst_kill) + ", homomorphism " +
                       format_full(worst_homo));
    CHECK(worst_axiom < 1e-6);
    CHECK(worst_iso < 1e-6);
    CHECK(worst_kill < 1e-6);
    CHECK(worst_homo < 1e-10);
}

TEST_CASE("11: symbolic taxonomy agrees with the tail fits") {
    Rng rng(111111);
    int disagreements = 0, failures = 0;
    for (int i = 0; i < 500; ++i) {
        F1Params p{rng.uniform(-2.0, 2.0), rng.coin() ? 0.0 : rng.uniform(-2.0, 2.0),
                   rng.uniform(-kPi, kPi)};
        if (p.lambda == 0.0 && p.mu == 0.0) p.lambda = 1.0;
        try {
            const TranslatorClass tc = classify_f1(p);
            if (tc.note.find("unrestricted fit") != std::string::npos) {
                ++disagreements;
                UNSCOPED_INFO("disagreement at lambda=" << p.lambda << " mu=" << p.mu
                                                        << " theta0=" << p.theta0 << ": "
                                                        << tc.note);
            }
        } catch (const std::exception& e) {
            ++failures;
            UNSCOPED_INFO("throw at lambda=" << p.lambda << " mu=" << p.mu
                                             << " theta0=" << p.theta0 << ": " << e.what());
        }
    }
    const bool random_ok = disagreements == 0 && failures == 0;
    CHECK(disagreements == 0);
    CHECK(failures == 0);

    // boundary shapes: theta0 = lambda pins the half-logarithmic tail,
    // theta0 = lambda + pi/2 the tilted plane
    const TranslatorClass half = classify_f1(F1Params{1.0, 0.0, 1.0});
    const AsymptoticEnd* half_end = nullptr;
    for (const auto& e : half.ends)
        if (e && e->kind == EndKind::half_logarithmic) half_end = &*e;
    const bool half_ok = half_end != nullptr && half_end->fit_residual < 1e-3;

    const TranslatorClass tilted = classify_f1(F1Params{0.3, 0.0, 0.3 + kPi / 2.0});
    const AsymptoticEnd* tilted_end = nullptr;
    for (const auto& e : tilted.ends)
        if (e && e->kind == EndKind::tilted_plane) tilted_end = &*e;
    const bool tilted_ok = tilted_end != nullptr && tilted_end->fit_residual < 1e-3;

    criterion_line(11, random_ok && half_ok && tilted_ok,
                   "500 draws: " + std::to_string(disagreements) + " disagreements, " +
                       std::to_string(failures) + " failures; half-log residual " +
                       (half_end ? format_full(half_end->fit_residual) : "missing") +
                       ", tilted residual " +
                       (tilted_end ? format_full(tilted_end->fit_residual) : "missing"));
    CHECK(half_ok);
    CHECK(tilted_ok);
}
