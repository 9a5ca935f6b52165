#pragma once

// Shared result type for surface differential data. Produced independently by
// the closed-form evaluators (forms.hpp) and the finite-difference oracle
// (verify.hpp); keeping the type alone here lets the two stay decoupled.

#include "soltrans/core.hpp"
#include "soltrans/sol3.hpp"

namespace soltrans {

struct FundamentalForms {
    Mat2 g;           // induced metric in the (u, s) chart
    Mat2 A;           // second fundamental form, same chart
    FrameVector nu;   // unit normal, orthonormal-frame components
    double H = 0.0;   // trace(A g^{-1}), sum convention
    double det_shape = 0.0;  // det(A g^{-1})
    double K = 0.0;   // intrinsic curvature: ambient sectional + det_shape
};

}  // namespace soltrans
