#pragma once

// Shared numeric utilities: fixed-size matrices, deterministic sampling,
// bisection, and printf-style float formatting used by the file writers.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

namespace soltrans {

inline constexpr double kPi = 3.14159265358979323846;

// 2x2 matrix, row major. Used for induced metrics and shape operators.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline Mat2 inverse(const Mat2& m) {
    const double d = m.det();
    if (d == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
    return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

/// trace(A g^{-1}) without forming the inverse explicitly.
inline double trace_times_inverse(const Mat2& a, const Mat2& g) {
    return (a.a11 * g.a22 - a.a12 * g.a21 - a.a21 * g.a12 + a.a22 * g.a11) / g.det();
}

/// det(A g^{-1}).
inline double det_times_inverse(const Mat2& a, const Mat2& g) {
    return a.det() / g.det();
}

// 3x3 matrix, row major.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }

    static Mat3 diagonal(double d0, double d1, double d2) {
        Mat3 r;
        r(0, 0) = d0;
        r(1, 1) = d1;
        r(2, 2) = d2;
        return r;
    }
};

inline Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

inline Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
    return r;
}

// Deterministic random source. The raw 64-bit stream is mapped to doubles
// explicitly so that sampled values do not depend on the standard library's
// distribution implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(gen_() % span);
    }

    bool coin() { return (gen_() & 1u) != 0; }

  private:
    std::mt19937_64 gen_;
};

/// Bisection on a bracketing interval; f(lo) and f(hi) must not share a
/// strict sign. Returns the midpoint of the final interval.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: endpoints do not bracket a sign change");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// %.17g formatting: enough digits to reproduce the double exactly.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// %.9g formatting used by the OBJ writer.
inline std::string format_mesh(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline double distance_to_multiple(double x, double period) {
    const double r = std::remainder(x, period);
    return std::fabs(r);
}

}  // namespace soltrans
