// Fundamental-form checks for both invariant parametrizations, the immersion
// helpers, mesh construction and the OBJ/CSV export round trip.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "soltrans/forms.hpp"
#include "soltrans/immersion.hpp"
#include "soltrans/mesh.hpp"
#include "soltrans/profile.hpp"
#include "soltrans/sol3.hpp"

using namespace soltrans;

namespace {

const F1Params kSlab{3.0, 0.0, kPi / 2};

IntegratorConfig free_run() {
    IntegratorConfig cfg;
    cfg.stop_at_equilibrium = false;
    return cfg;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("F1 forms at stationary angles match the closed evaluations") {
    // theta = pi/2, theta' = 0: the shape operator degenerates, K = ambient -1.
    ProfileState st{0.0, 0.0, 0.0, kPi / 2};
    FundamentalForms f = forms_f1_with_rate(st, 0.0);
    CHECK(std::fabs(f.det_shape) < 1e-15);
    CHECK(f.K == Catch::Approx(-1.0).margin(1e-15));
    CHECK(f.H == 0.0);

    // theta = 0, theta' = 0: normal is E3, detShape = -1, intrinsically flat.
    st.theta = 0.0;
    f = forms_f1_with_rate(st, 0.0);
    CHECK(f.nu.e1 == 0.0);
    CHECK(f.nu.e2 == 0.0);
    CHECK(f.nu.e3 == 1.0);
    CHECK(f.det_shape == Catch::Approx(-1.0).margin(1e-15));
    CHECK(std::fabs(f.K) < 1e-15);
}

TEST_CASE("mean curvature equals the trace of the shape operator") {
    Rng rng(2026);
    for (int i = 0; i < 1000; ++i) {
        ProfileState st{0.0, rng.uniform(-5.0, 5.0), rng.uniform(-3.0, 3.0),
                        rng.uniform(-8.0, 8.0)};
        const double tp = rng.uniform(-4.0, 4.0);

        const FundamentalForms f1 = forms_f1_with_rate(st, tp);
        CHECK(f1.H == Catch::Approx(trace_times_inverse(f1.A, f1.g)).margin(1e-10));

        const double b = rng.uniform(-3.0, 3.0);
        if (b == 0.0) continue;
        const FundamentalForms fs = forms_slanted(st, b, tp);
        CHECK(fs.H == Catch::Approx(trace_times_inverse(fs.A, fs.g)).margin(1e-10));
        CHECK(fs.det_shape == Catch::Approx(det_times_inverse(fs.A, fs.g)).margin(1e-10));
    }
}

TEST_CASE("slanted forms reduce to the F1 forms at b = 0") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        ProfileState st{0.0, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                        rng.uniform(-7.0, 7.0)};
        const double tp = rng.uniform(-3.0, 3.0);
        const FundamentalForms a = forms_f1_with_rate(st, tp);
        const FundamentalForms b = forms_slanted(st, 0.0, tp);
        CHECK(b.H == Catch::Approx(a.H).margin(1e-14));
        CHECK(b.K == Catch::Approx(a.K).margin(1e-13));
        CHECK(b.nu.e2 == Catch::Approx(a.nu.e2).margin(1e-14));
        CHECK(b.nu.e3 == Catch::Approx(a.nu.e3).margin(1e-14));
        CHECK(b.g.a11 == Catch::Approx(a.g.a11).margin(1e-13));
        CHECK(b.A.a11 == Catch::Approx(a.A.a11).margin(1e-13));
    }
}

TEST_CASE("slanted H at z = 0, theta = pi/2 carries the 1/sqrt(1+b^2) factor") {
    const ProfileState st{0.0, 0.0, 0.0, kPi / 2};
    for (double b : {0.5, 1.0, 2.0, -3.0}) {
        for (double tp : {-1.0, 0.7, 2.0}) {
            const FundamentalForms f = forms_slanted(st, b, tp);
            CHECK(f.H == Catch::Approx(tp / std::sqrt(1.0 + b * b)).margin(1e-14));
        }
    }
}

TEST_CASE("slanted normal is metric-unit and orthogonal to both tangents") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const double z = rng.uniform(-2.5, 2.5);
        const double th = rng.uniform(-7.0, 7.0);
        const double b = rng.uniform(-3.0, 3.0);
        const ProfileState st{0.0, 0.0, z, th};
        const FundamentalForms f = forms_slanted(st, b, rng.uniform(-2.0, 2.0));

        const double ez = std::exp(z);
        const FrameVector tu{ez, b / ez, 0.0};
        const FrameVector ts{0.0, std::cos(th), std::sin(th)};
        CHECK(std::fabs(dot(f.nu, tu)) < 1e-10);
        CHECK(std::fabs(dot(f.nu, ts)) < 1e-10);
        CHECK(norm(f.nu) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("induced metric agrees with the Gram matrix of coordinate tangents") {
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const double y = rng.uniform(-3.0, 3.0);
        const double z = rng.uniform(-2.0, 2.0);
        const double th = rng.uniform(-7.0, 7.0);
        const double b = rng.uniform(-3.0, 3.0);
        const double u = rng.uniform(-2.0, 2.0);
        const ProfileState st{0.0, y, z, th};
        const FundamentalForms f = forms_slanted(st, b, 0.0);

        // M(u, s) = (u, bu + y(s), z(s)); tangents in coordinates.
        const Sol3Point p{u, b * u + y, z};
        const CoordVector cu{1.0, b, 0.0};
        const CoordVector cs{0.0, std::exp(z) * std::cos(th), std::sin(th)};
        CHECK(f.g.a11 == Catch::Approx(metric_dot(cu, cu, p)).margin(1e-10));
        CHECK(f.g.a12 == Catch::Approx(metric_dot(cu, cs, p)).margin(1e-10));
        CHECK(f.g.a22 == Catch::Approx(metric_dot(cs, cs, p)).margin(1e-10));
    }
}

TEST_CASE("intrinsic curvature changes sign along the slab preset") {
    const Trajectory tr = integrate(kSlab, 8.0, free_run());
    double kmin = 1e300, kmax = -1e300;
    const F1Params p = std::get<F1Params>(tr.params);
    for (const ProfileState& st : tr.samples) {
        const double k = forms_f1(st, p).K;
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    CHECK(kmin < -0.5);
    CHECK(kmax > 0.1);
}

TEST_CASE("translator identity holds pointwise along both reductions") {
    // F1: H - g(nu, V) is the first-integral residual times sin(theta), so it
    // stays below the conservation budget of the preset trajectories.
    const Trajectory tr = integrate(kSlab, 20.0, free_run());
    const F1Params p = std::get<F1Params>(tr.params);
    const KillingField v{0.0, p.lambda, p.mu};
    for (const ProfileState& st : tr.samples) {
        const FundamentalForms f = forms_f1(st, p);
        const double rhs = dot(f.nu, killing_frame_at(v, {0.0, st.y, st.z}));
        CHECK(f.H == Catch::Approx(rhs).margin(1e-8));
    }

    // Slanted: the angle equation was solved for theta', so the identity is
    // pointwise algebra and needs no trajectory.
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        SlantedParams sp;
        sp.b = rng.uniform(0.2, 3.0) * (rng.coin() ? 1.0 : -1.0);
        sp.lambda = rng.uniform(-3.0, 3.0);
        const ProfileState st{0.0, rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 2.0),
                              rng.uniform(-7.0, 7.0)};
        const FundamentalForms f = forms_slanted(st, sp);
        const KillingField vs{0.0, sp.lambda, 0.0};
        const double rhs = dot(f.nu, killing_frame_at(vs, {0.0, st.y, st.z}));
        CHECK(f.H == Catch::Approx(rhs).margin(1e-8));
    }
}

TEST_CASE("profile immersion composes the symmetry flow with the curve") {
    const Trajectory tr = integrate(kSlab, 5.0, free_run());
    const ProfileImmersion imm{&tr, 0.0};

    const ProfileState at2 = tr.state_at(2.0);
    const Sol3Point p = imm(1.5, 2.0);
    CHECK(p.x == Catch::Approx(1.5).margin(1e-15));
    CHECK(p.y == Catch::Approx(at2.y).margin(1e-12));
    CHECK(p.z == Catch::Approx(at2.z).margin(1e-12));

    const ProfileImmersion slanted{&tr, 2.0};
    const Sol3Point q = slanted(1.0, 0.0);
    CHECK(q.x == Catch::Approx(1.0).margin(1e-15));
    CHECK(q.y == Catch::Approx(2.0).margin(1e-15));  // bu + y(0) with y(0) = 0
    CHECK(q.z == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("vertical orbit immersion matches the group parametrization") {
    // X = F3 over the line x = 1: (u, s) -> (e^{-u}, e^{u} s, u).
    const VerticalOrbitImmersion imm{KillingField{0.0, 0.0, 1.0}, LineCurve{1.0, 0.0, 0.0, 1.0}};
    for (double u : {-1.0, 0.0, 0.7}) {
        for (double s : {-2.0, 0.3}) {
            const Sol3Point p = imm(u, s);
            CHECK(p.x == Catch::Approx(std::exp(-u)).margin(1e-14));
            CHECK(p.y == Catch::Approx(std::exp(u) * s).margin(1e-14));
            CHECK(p.z == Catch::Approx(u).margin(1e-15));
        }
    }
}

TEST_CASE("curves are unit speed and accelerations are consistent") {
    const CircleCurve c{2.0};
    const LineCurve l{0.3, -1.0, 0.6, 0.8};
    for (double s : {-1.0, 0.0, 2.5}) {
        CoordVector v = c.vel(s);
        CHECK(std::hypot(v.vx, v.vy) == Catch::Approx(1.0).margin(1e-14));
        v = l.vel(s);
        CHECK(std::hypot(v.vx, v.vy) == Catch::Approx(1.0).margin(1e-14));

        // Central difference of the velocity reproduces accel.
        const double h = 1e-5;
        const CoordVector vp = c.vel(s + h), vm = c.vel(s - h), a = c.accel(s);
        CHECK((vp.vx - vm.vx) / (2 * h) == Catch::Approx(a.vx).margin(1e-9));
        CHECK((vp.vy - vm.vy) / (2 * h) == Catch::Approx(a.vy).margin(1e-9));
    }
}

TEST_CASE("mesh vertices realize the orbit of the profile curve") {
    const Trajectory tr = integrate(kSlab, 3.0, free_run());

    // X = F1 + 2 F2; the u = 1 row shifts y by bu.
    const SurfaceMesh m = build_mesh(tr, {1.0, 2.0, 0.0}, {-1.0, 1.0}, 2);
    REQUIRE(m.nu == 2);
    REQUIRE(m.ns == tr.samples.size());
    const std::size_t k = m.index(1, tr.origin);
    CHECK(m.vertex[k].x == Catch::Approx(1.0).margin(1e-15));
    CHECK(m.vertex[k].y == Catch::Approx(2.0).margin(1e-15));
    CHECK(m.vertex[k].z == Catch::Approx(0.0).margin(1e-15));

    // The u = 0 row is the profile curve itself.
    const SurfaceMesh m0 = build_mesh(tr, {1.0, 0.0, 0.0}, {0.0, 1.0}, 2);
    for (std::size_t j = 0; j < m0.ns; ++j) {
        CHECK(m0.vertex[m0.index(0, j)].y == Catch::Approx(tr.samples[j].y).margin(1e-15));
        CHECK(m0.vertex[m0.index(0, j)].z == Catch::Approx(tr.samples[j].z).margin(1e-15));
    }
}

TEST_CASE("mesh normals are metric-unit and triangles cover the grid") {
    const Trajectory tr = integrate(kSlab, 4.0, free_run());
    const SurfaceMesh m = build_mesh(tr, {1.0, 1.0, 0.0}, {-2.0, 2.0}, 8);

    REQUIRE(m.vertex.size() == m.nu * m.ns);
    REQUIRE(m.normal.size() == m.vertex.size());
    REQUIRE(m.triangle.size() == 2 * (m.nu - 1) * (m.ns - 1));
    for (std::size_t k = 0; k < m.vertex.size(); ++k) {
        const double n2 = metric_dot(m.normal[k], m.normal[k], m.vertex[k]);
        CHECK(n2 == Catch::Approx(1.0).margin(1e-10));
    }
    for (const auto& t : m.triangle)
        for (std::size_t idx : t) CHECK(idx < m.vertex.size());
}

TEST_CASE("vertical mesh reproduces minimal planes with vanishing H") {
    // Plane x = a: orbit of the line (a, s, 0) under any X with c != 0.
    const KillingField x{0.5, -0.3, 1.0};
    const SurfaceMesh m =
        build_mesh_vertical(x, LineCurve{0.5, 0.0, 0.0, 1.0}, {-1.5, 1.5}, -2.0, 2.0, 6, 6);
    for (std::size_t k = 0; k < m.vertex.size(); ++k) {
        CHECK(m.vertex[k].x == Catch::Approx(0.5).margin(1e-12));
        CHECK(std::fabs(m.mean_curv[k]) < 1e-12);
        const double n2 = metric_dot(m.normal[k], m.normal[k], m.vertex[k]);
        CHECK(n2 == Catch::Approx(1.0).margin(1e-10));
    }

    // Plane y = -b likewise.
    const SurfaceMesh my =
        build_mesh_vertical(x, LineCurve{0.0, 0.3, 1.0, 0.0}, {-1.0, 1.0}, -2.0, 2.0, 5, 5);
    for (std::size_t k = 0; k < my.vertex.size(); ++k) {
        CHECK(my.vertex[k].y == Catch::Approx(0.3).margin(1e-12));
        CHECK(std::fabs(my.mean_curv[k]) < 1e-12);
    }
}

TEST_CASE("mesh construction rejects degenerate inputs") {
    const Trajectory tr = integrate(kSlab, 2.0, free_run());
    CHECK_THROWS_AS(build_mesh(tr, {1.0, 0.0, 0.0}, {1.0, 1.0}, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(tr, {1.0, 0.0, 0.0}, {-1.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(tr, {0.0, 1.0, 0.0}, {-1.0, 1.0}, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(tr, {0.0, 0.0, 1.0}, {-1.0, 1.0}, 4), std::invalid_argument);

    Trajectory empty;
    empty.params = kSlab;
    CHECK_THROWS_AS(build_mesh(empty, {1.0, 0.0, 0.0}, {-1.0, 1.0}, 4), std::invalid_argument);

    CHECK_THROWS_AS(build_mesh_vertical(KillingField{1.0, 0.0, 0.0}, LineCurve{}, {-1.0, 1.0},
                                        -1.0, 1.0, 4, 4),
                    std::invalid_argument);
}

TEST_CASE("a 2x2 mesh exports four vertices, four normals and two faces") {
    Trajectory tr;
    tr.params = kSlab;
    tr.bracket = bracket_zeros(kSlab);
    tr.samples = {{0.0, 0.0, 0.0, kPi / 2}, {0.1, 0.0, 0.1, kPi / 2}};
    const SurfaceMesh m = build_mesh(tr, {1.0, 0.0, 0.0}, {0.0, 1.0}, 2);

    const std::string path = temp_path("soltrans_2x2.obj");
    export_obj(m, path);

    std::ifstream in(path);
    REQUIRE(in.good());
    int nv = 0, nn = 0, nf = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("vn ", 0) == 0) ++nn;
        if (line.rfind("f ", 0) == 0) ++nf;
    }
    CHECK(nv == 4);
    CHECK(nn == 4);
    CHECK(nf == 2);
    std::remove(path.c_str());
    std::remove((path + ".csv").c_str());
}

TEST_CASE("OBJ export round-trips vertices at nine significant digits") {
    const Trajectory tr = integrate(kSlab, 6.0, free_run());
    const SurfaceMesh m = build_mesh(tr, {1.0, 0.0, 0.0}, {-3.0, 3.0}, 16);

    const std::string path = temp_path("soltrans_roundtrip.obj");
    export_obj(m, path);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<Sol3Point> verts;
    std::vector<CoordVector> normals;
    std::size_t faces = 0;
    std::string line;
    while (std::getline(in, line)) {
        double a, b, c;
        if (std::sscanf(line.c_str(), "v %lf %lf %lf", &a, &b, &c) == 3)
            verts.push_back({a, b, c});
        else if (std::sscanf(line.c_str(), "vn %lf %lf %lf", &a, &b, &c) == 3)
            normals.push_back({a, b, c});
        else if (line.rfind("f ", 0) == 0)
            ++faces;
    }
    REQUIRE(verts.size() == m.vertex.size());
    REQUIRE(normals.size() == m.vertex.size());
    CHECK(faces == m.triangle.size());

    for (std::size_t k = 0; k < verts.size(); ++k) {
        const auto close = [](double got, double want) {
            return std::fabs(got - want) <= 1e-8 * std::max(1.0, std::fabs(want));
        };
        CHECK(close(verts[k].x, m.vertex[k].x));
        CHECK(close(verts[k].y, m.vertex[k].y));
        CHECK(close(verts[k].z, m.vertex[k].z));

        // OBJ normals are Euclidean-normalized copies of the stored ones.
        const CoordVector& n = m.normal[k];
        const double len = std::sqrt(n.vx * n.vx + n.vy * n.vy + n.vz * n.vz);
        CHECK(close(normals[k].vx, n.vx / len));
        CHECK(close(normals[k].vy, n.vy / len));
        CHECK(close(normals[k].vz, n.vz / len));
    }

    // Sidecar keeps the metric normals: header plus one row per vertex.
    std::ifstream csv(path + ".csv");
    REQUIRE(csv.good());
    std::getline(csv, line);
    CHECK(line == "u,s,x,y,z,nu_x,nu_y,nu_z,H");
    std::size_t rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == m.vertex.size());

    std::remove(path.c_str());
    std::remove((path + ".csv").c_str());
}
