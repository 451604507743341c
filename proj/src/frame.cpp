#include "framekit/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "framekit/errors.hpp"

namespace framekit {

Frame::Frame(CMatrix vectors) : vectors_(std::move(vectors)) {
    if (vectors_.rows() < 1 || vectors_.cols() < 1)
        throw InputError("Frame: need dim >= 1 and at least one vector");
    require_finite(vectors_, "Frame");
}

Frame Frame::from_vectors(const std::vector<CVector>& vectors) {
    if (vectors.empty()) throw InputError("Frame: need at least one vector");
    const Eigen::Index d = vectors.front().size();
    CMatrix cols(d, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t n = 0; n < vectors.size(); ++n) {
        if (vectors[n].size() != d) throw InputError("Frame: vectors differ in dimension");
        cols.col(static_cast<Eigen::Index>(n)) = vectors[n];
    }
    return Frame(std::move(cols));
}

void require_same_shape(const Frame& f, const Frame& g, const char* what) {
    if (f.dim() != g.dim() || f.size() != g.size())
        throw InputError(std::string(what) + ": frames differ in shape");
}

CMatrix synthesis_matrix(const Frame& f) { return f.columns(); }

CMatrix analysis_matrix(const Frame& f) { return f.columns().adjoint(); }

CMatrix frame_operator(const Frame& f) {
    const CMatrix& t = f.columns();
    CMatrix s = t * t.adjoint();
    // Exact Hermitian symmetry; the product accumulates asymmetric rounding.
    return (s + s.adjoint()) * 0.5;
}

FrameBounds frame_bounds(const Frame& f, const TolerancePolicy& tol) {
    auto [lo, hi] = hermitian_eig_extremes(frame_operator(f), tol);
    FrameBounds b;
    b.upper_opt = std::max(hi, 0.0);
    b.lower_opt = lo > tol.rank_cutoff_rel * b.upper_opt ? lo : 0.0;
    b.tight = std::abs(b.upper_opt - b.lower_opt) <= 1e-10 * b.upper_opt;
    return b;
}

bool is_frame(const Frame& f, const TolerancePolicy& tol) {
    return frame_bounds(f, tol).lower_opt > 0.0;
}

CMatrix canonical_dual_synthesis(const Frame& f, const TolerancePolicy& tol) {
    if (!is_frame(f, tol)) throw NotAFrameError("canonical_dual: frame operator is singular");
    Eigen::LLT<CMatrix> llt(frame_operator(f));
    if (llt.info() != Eigen::Success)
        throw NotAFrameError("canonical_dual: frame operator is not positive definite");
    return llt.solve(f.columns());
}

Frame canonical_dual(const Frame& f, const TolerancePolicy& tol) {
    return Frame(canonical_dual_synthesis(f, tol));
}

bool is_dual_pair(const Frame& f, const Frame& g, const TolerancePolicy& tol) {
    require_same_shape(f, g, "is_dual_pair");
    const CMatrix r = f.columns() * g.columns().adjoint() - identity(f.dim());
    return operator_norm(r) <= tol.identity_residual_rel;
}

Eigen::Index excess(const Frame& f, const TolerancePolicy& tol) {
    return f.size() - numerical_rank(f.columns(), tol);
}

double frame_norm_distance(const Frame& f, const Frame& g) {
    require_same_shape(f, g, "frame_norm_distance");
    return operator_norm(f.columns() - g.columns());
}

CMatrix analysis_range_basis(const Frame& f, const TolerancePolicy& tol) {
    return corange_basis(f.columns(), tol);
}

} // namespace framekit
