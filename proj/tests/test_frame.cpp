#include <doctest.h>

#include <cmath>
#include <numbers>

#include "framekit/errors.hpp"
#include "framekit/frame.hpp"
#include "framekit/generate.hpp"
#include "test_support.hpp"

using namespace framekit;

namespace {

Frame mercedes() {
    CMatrix m(2, 3);
    for (int k = 0; k < 3; ++k) {
        const double t = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
        m(0, k) = std::cos(t);
        m(1, k) = std::sin(t);
    }
    return Frame(m);
}

} // namespace

TEST_CASE("orthonormal basis is a Parseval frame with no excess") {
    const Frame onb(identity(3));
    const FrameBounds b = frame_bounds(onb);
    CHECK(b.lower_opt == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.upper_opt == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.tight);
    CHECK(excess(onb) == 0);
    CHECK(oracle::max_abs_diff(canonical_dual(onb).columns(), identity(3)) < 1e-15);
}

TEST_CASE("Mercedes frame: tight with bound 3/2 and excess 1") {
    const Frame f = mercedes();
    const FrameBounds b = frame_bounds(f);
    CHECK(b.lower_opt == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(b.upper_opt == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(b.tight);
    CHECK(excess(f) == 1);
    // canonical dual of a tight frame is phi / A
    CHECK(oracle::max_abs_diff(canonical_dual(f).columns(), f.columns() / 1.5) < 1e-14);
}

TEST_CASE("frame operator equals sum of rank-one terms") {
    Rng rng(4);
    const Frame f = random_frame(rng, 3, 7);
    CMatrix s = CMatrix::Zero(3, 3);
    for (Eigen::Index n = 0; n < f.size(); ++n) s += f.vector(n) * f.vector(n).adjoint();
    CHECK(oracle::max_abs_diff(frame_operator(f), s) < 1e-12);
    CHECK(oracle::max_abs_diff(analysis_matrix(f), synthesis_matrix(f).adjoint()) == 0.0);
}

TEST_CASE("frame inequality holds on samples with the optimal bounds") {
    for (int t = 0; t < 20; ++t) {
        Rng rng(300 + t);
        const auto d = rng.uniform_int(1, 5);
        const Frame f = random_frame(rng, d, rng.uniform_int(d, 12));
        const FrameBounds b = frame_bounds(f);
        for (int i = 0; i < 50; ++i) {
            const CVector x = rng.gaussian_vector(d);
            const double energy = (f.columns().adjoint() * x).squaredNorm();
            CHECK(energy >= b.lower_opt * x.squaredNorm() * (1 - 1e-12));
            CHECK(energy <= b.upper_opt * x.squaredNorm() * (1 + 1e-12));
        }
    }
}

TEST_CASE("canonical dual is a dual and matches the explicit inverse") {
    for (int t = 0; t < 20; ++t) {
        Rng rng(400 + t);
        const auto d = rng.uniform_int(1, 6);
        const Frame f = random_frame(rng, d, rng.uniform_int(d, 14));
        const Frame g = canonical_dual(f);
        CHECK(is_dual_pair(f, g));
        CHECK(is_dual_pair(g, f));
        CHECK(oracle::max_abs_diff(g.columns(), oracle::explicit_canonical_dual(f.columns())) < 1e-9);
        // the canonical dual's bounds are the reciprocals
        const FrameBounds bf = frame_bounds(f);
        const FrameBounds bg = frame_bounds(g);
        CHECK(bg.upper_opt == doctest::Approx(1.0 / bf.lower_opt).epsilon(1e-9));
        CHECK(bg.lower_opt == doctest::Approx(1.0 / bf.upper_opt).epsilon(1e-9));
    }
}

TEST_CASE("non-spanning families") {
    CMatrix m = CMatrix::Zero(2, 3);
    m(0, 0) = 1.0;
    m(0, 2) = 2.0;
    const Frame f(m);
    CHECK_FALSE(is_frame(f));
    CHECK(frame_bounds(f).lower_opt == 0.0);
    CHECK_THROWS_AS(canonical_dual(f), NotAFrameError);
    CHECK(excess(f) == 2);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Frame{CMatrix(0, 3)}, InputError);
    CHECK_THROWS_AS(Frame::from_vectors({}), InputError);
    CHECK_THROWS_AS(Frame::from_vectors({CVector::Ones(2), CVector::Ones(3)}), InputError);
    CMatrix bad = identity(2);
    bad(0, 1) = cdouble(INFINITY, 0.0);
    CHECK_THROWS_AS(Frame{bad}, InputError);
    CHECK_THROWS_AS(frame_norm_distance(Frame(identity(2)), Frame(identity(3))), InputError);
}

TEST_CASE("analysis range basis is orthogonal to the kernel") {
    Rng rng(8);
    const Frame f = random_frame(rng, 3, 8);
    const CMatrix q = analysis_range_basis(f);
    CHECK(q.cols() == 3);
    const CMatrix p_ker = oracle::kernel_projector(f.columns());
    CHECK((p_ker * q).norm() < 1e-12);
    CHECK(frame_norm_distance(f, f) == 0.0);
}
