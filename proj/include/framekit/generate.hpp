#pragma once

#include <string>

#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/random.hpp"

namespace framekit {

/// Gaussian d x N family, redrawn until it spans (N >= d required).
Frame random_frame(Rng& rng, Eigen::Index d, Eigen::Index N, const TolerancePolicy& tol = {});

/// A = I + rho R / ||R|| with R Gaussian and rho uniform in [0, max_rho].
CMatrix random_admissible_A(Rng& rng, Eigen::Index d, double max_rho = 0.95);

/// Kernel-valued N x d matrix: the projection of a Gaussian onto ker T_F,
/// scaled to operator norm `scale`. Zero when the kernel is trivial.
CMatrix random_kernel_theta(Rng& rng, const Frame& f, double scale,
                            const TolerancePolicy& tol = {});

/// F + E with E Gaussian, ||E|| = ratio * sqrt(m_opt(F)).
Frame random_perturbation(Rng& rng, const Frame& f, double ratio, const TolerancePolicy& tol = {});

/// `copies` short vectors per coordinate with one of them moved far, so that
/// q0 stays below 1 while q exceeds m_opt (copies >= 4).
struct FramePair {
    Frame f;
    Frame g;
};

FramePair random_redundant_pair(Rng& rng, Eigen::Index d, int copies);

/// Block n (1..K) repeats (1/2^n) e_n exactly 4^n times. The perturbed family
/// scales the first vector of block n by t_n (t_1 = 3, t_n = 2 otherwise).
struct ExamPair {
    Frame phi;
    Frame psi;
    int blocks = 0;
    double q_limit = 13.0 / 12.0;
    double q0_limit = 7.0 / 12.0;
    double q_tail = 0.0;   ///< 13/12 minus the truncated q
    double q0_tail = 0.0;  ///< 7/12 minus the truncated q0
};

/// Throws InputError unless 1 <= K <= 10.
ExamPair exam_pair(int K);

/// Random lattice (a, b dividing L, a b <= L) with a Gaussian window.
GaborSystem random_gabor(Rng& rng, Eigen::Index L);

} // namespace framekit
