#pragma once

// Surface meshes for the invariant translators: vertices are group orbits of
// profile curves, normals and mean curvature are attached per vertex, and the
// result can be exported as Wavefront OBJ plus a CSV sidecar.

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "soltrans/core.hpp"
#include "soltrans/forms.hpp"
#include "soltrans/immersion.hpp"
#include "soltrans/profile.hpp"
#include "soltrans/sol3.hpp"

namespace soltrans {

struct SurfaceMesh {
    std::size_t nu = 0, ns = 0;  // grid extents along u and s
    std::vector<double> u_grid;  // nu values
    std::vector<double> s_grid;  // ns values
    std::vector<Sol3Point> vertex;        // nu * ns entries, row-major in u
    std::vector<CoordVector> normal;      // unit in the ambient metric, coordinate components
    std::vector<double> mean_curv;        // H per vertex
    std::vector<std::array<std::size_t, 3>> triangle;  // counter-clockwise in (u, s)

    std::size_t index(std::size_t i, std::size_t j) const { return i * ns + j; }
};

struct URange {
    double lo = -3.0;
    double hi = 3.0;
};

namespace detail {

inline void triangulate_grid(SurfaceMesh& m) {
    m.triangle.reserve(2 * (m.nu - 1) * (m.ns - 1));
    for (std::size_t i = 0; i + 1 < m.nu; ++i)
        for (std::size_t j = 0; j + 1 < m.ns; ++j) {
            const std::size_t v00 = m.index(i, j), v01 = m.index(i, j + 1);
            const std::size_t v10 = m.index(i + 1, j), v11 = m.index(i + 1, j + 1);
            m.triangle.push_back({v00, v10, v11});
            m.triangle.push_back({v00, v11, v01});
        }
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

}  // namespace detail

/// Mesh of the surface swept from a profile trajectory by a horizontal
/// symmetry X = a F1 + b F2 (a != 0). Vertices are flow(X, u) * (0, y, z);
/// the s direction reuses the trajectory's own adaptive sample grid so no
/// accuracy is lost near equilibria. Normals and H come from the closed-form
/// fundamental forms with the curve's own turning rate.
inline SurfaceMesh build_mesh(const Trajectory& tr, const KillingField& X, URange u_range = {},
                              std::size_t u_res = 64) {
    if (tr.samples.size() < 2) throw std::invalid_argument("build_mesh: empty trajectory");
    if (u_res < 2) throw std::invalid_argument("build_mesh: need at least 2 samples per direction");
    if (!(u_range.hi > u_range.lo)) throw std::invalid_argument("build_mesh: empty u range");
    if (X.f3 != 0.0) throw std::invalid_argument("build_mesh: use build_mesh_vertical when c != 0");
    if (X.f1 == 0.0)
        throw std::invalid_argument(
            "build_mesh: pure F2 symmetry must be mapped through the swap isometry first");

    const double slope = X.f2 / X.f1;

    SurfaceMesh m;
    m.nu = u_res;
    m.ns = tr.samples.size();
    m.u_grid = detail::uniform_grid(u_range.lo, u_range.hi, u_res);
    m.s_grid.reserve(m.ns);
    for (const ProfileState& st : tr.samples) m.s_grid.push_back(st.s);

    // Per-state normal frame components and H are u-independent.
    std::vector<FrameVector> nu_frame(m.ns);
    std::vector<double> hval(m.ns);
    for (std::size_t j = 0; j < m.ns; ++j) {
        const ProfileState& st = tr.samples[j];
        double tp;
        if (const F1Params* p = std::get_if<F1Params>(&tr.params))
            tp = tr.bracket.degenerate ? 0.0 : rhs_f1(st, *p).dtheta;
        else
            tp = tr.bracket.degenerate ? 0.0
                                       : rhs_slanted(st, std::get<SlantedParams>(tr.params)).dtheta;
        const FundamentalForms f =
            slope == 0.0 ? forms_f1_with_rate(st, tp) : forms_slanted(st, slope, tp);
        nu_frame[j] = f.nu;
        hval[j] = f.H;
    }

    m.vertex.reserve(m.nu * m.ns);
    m.normal.reserve(m.nu * m.ns);
    m.mean_curv.reserve(m.nu * m.ns);
    for (std::size_t i = 0; i < m.nu; ++i) {
        const Sol3Point shift = flow(X, m.u_grid[i]);
        for (std::size_t j = 0; j < m.ns; ++j) {
            const ProfileState& st = tr.samples[j];
            const Sol3Point v = compose(shift, Sol3Point{0.0, st.y, st.z});
            m.vertex.push_back(v);
            m.normal.push_back(frame_to_coord(nu_frame[j], v));
            m.mean_curv.push_back(hval[j]);
        }
    }
    detail::triangulate_grid(m);
    return m;
}

/// Mesh of an orbit surface for a symmetry with X.f3 != 0 over a curve in the
/// z = 0 plane. The tangents have u-independent frame components
///   T_u = (a - c x(s)) E1 + (b + c y(s)) E2 + c E3,  T_s = x' E1 + y' E2,
/// so normals and H follow from the invariant connection plus the curve's
/// acceleration, with no numerical differentiation.
template <class Curve>
SurfaceMesh build_mesh_vertical(const KillingField& X, const Curve& curve, URange u_range,
                                double s_lo, double s_hi, std::size_t u_res = 64,
                                std::size_t s_res = 64) {
    if (X.f3 == 0.0) throw std::invalid_argument("build_mesh_vertical: needs X.f3 != 0");
    if (u_res < 2 || s_res < 2)
        throw std::invalid_argument("build_mesh_vertical: need at least 2 samples per direction");
    if (!(u_range.hi > u_range.lo) || !(s_hi > s_lo))
        throw std::invalid_argument("build_mesh_vertical: empty parameter range");

    const double a = X.f1, b = X.f2, c = X.f3;

    SurfaceMesh m;
    m.nu = u_res;
    m.ns = s_res;
    m.u_grid = detail::uniform_grid(u_range.lo, u_range.hi, u_res);
    m.s_grid = detail::uniform_grid(s_lo, s_hi, s_res);

    std::vector<FrameVector> nu_frame(m.ns);
    std::vector<double> hval(m.ns);
    for (std::size_t j = 0; j < m.ns; ++j) {
        const double s = m.s_grid[j];
        const Sol3Point g = curve.at(s);
        const CoordVector d1 = curve.vel(s), d2 = curve.accel(s);

        const FrameVector tu{a - c * g.x, b + c * g.y, c};
        const FrameVector ts{d1.vx, d1.vy, 0.0};
        FrameVector nrm = cross(tu, ts);
        const double len = norm(nrm);
        if (len == 0.0)
            throw std::invalid_argument("build_mesh_vertical: degenerate tangents");
        nrm = (1.0 / len) * nrm;

        // Second fundamental form; the only non-invariant piece is gamma''.
        const FrameVector dts{d2.vx, d2.vy, 0.0};
        const double a11 = dot(invariant_covariant(tu, tu), nrm);
        const double a12 = dot(invariant_covariant(tu, ts), nrm);
        const double a22 = dot(dts + invariant_covariant(ts, ts), nrm);
        const Mat2 A{a11, a12, a12, a22};
        const Mat2 g2{dot(tu, tu), dot(tu, ts), dot(tu, ts), dot(ts, ts)};
        nu_frame[j] = nrm;
        hval[j] = trace_times_inverse(A, g2);
    }

    m.vertex.reserve(m.nu * m.ns);
    m.normal.reserve(m.nu * m.ns);
    m.mean_curv.reserve(m.nu * m.ns);
    for (std::size_t i = 0; i < m.nu; ++i) {
        const Sol3Point shift = flow(X, m.u_grid[i]);
        for (std::size_t j = 0; j < m.ns; ++j) {
            const Sol3Point v = compose(shift, curve.at(m.s_grid[j]));
            m.vertex.push_back(v);
            m.normal.push_back(frame_to_coord(nu_frame[j], v));
            m.mean_curv.push_back(hval[j]);
        }
    }
    detail::triangulate_grid(m);
    return m;
}

/// OBJ with Euclidean-normalized normals (viewers have no metric concept) and
/// a CSV sidecar at path + ".csv" that keeps the metric-unit normals and H.
inline void export_obj(const SurfaceMesh& m, const std::string& path) {
    if (m.vertex.empty()) throw std::invalid_argument("export_obj: empty mesh");

    std::ofstream obj(path);
    if (!obj) throw std::runtime_error("cannot open for writing: " + path);
    for (const Sol3Point& v : m.vertex)
        obj << "v " << format_mesh(v.x) << ' ' << format_mesh(v.y) << ' ' << format_mesh(v.z)
            << '\n';
    for (const CoordVector& n : m.normal) {
        const double len = std::sqrt(n.vx * n.vx + n.vy * n.vy + n.vz * n.vz);
        const double inv = len > 0.0 ? 1.0 / len : 0.0;
        obj << "vn " << format_mesh(n.vx * inv) << ' ' << format_mesh(n.vy * inv) << ' '
            << format_mesh(n.vz * inv) << '\n';
    }
    for (const auto& t : m.triangle) {
        obj << "f";
        for (std::size_t k : t) obj << ' ' << k + 1 << "//" << k + 1;
        obj << '\n';
    }
    if (!obj.good()) throw std::runtime_error("write failed: " + path);

    const std::string side = path + ".csv";
    std::ofstream csv(side);
    if (!csv) throw std::runtime_error("cannot open for writing: " + side);
    csv << "u,s,x,y,z,nu_x,nu_y,nu_z,H\n";
    for (std::size_t i = 0; i < m.nu; ++i)
        for (std::size_t j = 0; j < m.ns; ++j) {
            const std::size_t k = m.index(i, j);
            const Sol3Point& v = m.vertex[k];
            const CoordVector& n = m.normal[k];
            csv << format_full(m.u_grid[i]) << ',' << format_full(m.s_grid[j]) << ','
                << format_full(v.x) << ',' << format_full(v.y) << ',' << format_full(v.z) << ','
                << format_full(n.vx) << ',' << format_full(n.vy) << ',' << format_full(n.vz) << ','
                << format_full(m.mean_curv[k]) << '\n';
        }
    if (!csv.good()) throw std::runtime_error("write failed: " + side);
}

}  // namespace soltrans
