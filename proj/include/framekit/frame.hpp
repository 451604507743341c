#pragma once

#include <vector>

#include "framekit/linalg.hpp"

namespace framekit {

/// An ordered family of N vectors in C^d, stored as the columns of a d x N
/// matrix. Immutable once built.
class Frame {
public:
    /// Column n of `vectors` is the n-th frame vector.
    explicit Frame(CMatrix vectors);

    static Frame from_vectors(const std::vector<CVector>& vectors);

    Eigen::Index dim() const { return vectors_.rows(); }
    Eigen::Index size() const { return vectors_.cols(); }
    CVector vector(Eigen::Index n) const { return vectors_.col(n); }
    const CMatrix& columns() const { return vectors_; }

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.vectors_.rows() == b.vectors_.rows() && a.vectors_.cols() == b.vectors_.cols() &&
               a.vectors_ == b.vectors_;
    }

private:
    CMatrix vectors_;
};

struct FrameBounds {
    double lower_opt = 0.0;
    double upper_opt = 0.0;
    bool tight = false;
};

/// T: coefficients -> sum c_n phi_n (d x N).
CMatrix synthesis_matrix(const Frame& f);
/// U = T*: f -> (<f, phi_n>)_n (N x d).
CMatrix analysis_matrix(const Frame& f);
/// S = T T*.
CMatrix frame_operator(const Frame& f);

/// Optimal bounds from the extreme eigenvalues of S. Non-frames report
/// lower_opt = 0 (within the rank cutoff).
FrameBounds frame_bounds(const Frame& f, const TolerancePolicy& tol = {});

bool is_frame(const Frame& f, const TolerancePolicy& tol = {});

/// (S^{-1} phi_n)_n. Throws NotAFrameError if S is rank deficient.
Frame canonical_dual(const Frame& f, const TolerancePolicy& tol = {});

/// S^{-1} T, the synthesis matrix of the canonical dual.
CMatrix canonical_dual_synthesis(const Frame& f, const TolerancePolicy& tol = {});

/// ||T_f U_g - I|| <= identity_residual_rel.
bool is_dual_pair(const Frame& f, const Frame& g, const TolerancePolicy& tol = {});

/// dim ker T = N - rank T.
Eigen::Index excess(const Frame& f, const TolerancePolicy& tol = {});

/// ||T_f - T_g||_op.
double frame_norm_distance(const Frame& f, const Frame& g);

/// Orthonormal basis of ran U_f = (ker T_f)^perp inside C^N (N x rank).
CMatrix analysis_range_basis(const Frame& f, const TolerancePolicy& tol = {});

void require_same_shape(const Frame& f, const Frame& g, const char* what);

} // namespace framekit
