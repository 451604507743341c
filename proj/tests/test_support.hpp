#pragma once

// Shared oracles for the test binaries. Everything here is deliberately naive.

#include <cmath>

#include "framekit/frame.hpp"
#include "framekit/random.hpp"

namespace oracle {

using framekit::CMatrix;
using framekit::CVector;
using framekit::cdouble;

/// sigma_max by power iteration on M* M.
inline double power_norm(const CMatrix& m, int iters = 500) {
    framekit::Rng rng(7);
    CVector v = rng.gaussian_vector(m.cols());
    double est = 0.0;
    for (int i = 0; i < iters; ++i) {
        CVector w = m.adjoint() * (m * v);
        const double n = w.norm();
        if (n == 0.0) return 0.0;
        v = w / n;
        est = std::sqrt(n);
    }
    return est;
}

/// Orthogonal projector onto ker(m), via explicit normal-equation inverse.
inline CMatrix kernel_projector(const CMatrix& t) {
    const CMatrix s = t * t.adjoint();
    return CMatrix::Identity(t.cols(), t.cols()) - t.adjoint() * s.inverse() * t;
}

inline CMatrix explicit_canonical_dual(const CMatrix& t) {
    return (t * t.adjoint()).inverse() * t;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace oracle
