#include "framekit/generate.hpp"

#include <cmath>
#include <vector>

#include "framekit/errors.hpp"

namespace framekit {

Frame random_frame(Rng& rng, Eigen::Index d, Eigen::Index N, const TolerancePolicy& tol) {
    if (d < 1 || N < d) throw InputError("random_frame: need 1 <= d <= N");
    for (int attempt = 0; attempt < 64; ++attempt) {
        Frame f(rng.gaussian_matrix(d, N));
        const FrameBounds b = frame_bounds(f, tol);
        if (b.lower_opt > 1e-6 * b.upper_opt) return f;
    }
    throw NotAFrameError("random_frame: could not draw a spanning family");
}

CMatrix random_admissible_A(Rng& rng, Eigen::Index d, double max_rho) {
    const CMatrix r = rng.gaussian_matrix(d, d);
    const double rho = rng.uniform(0.0, max_rho);
    const double n = operator_norm(r);
    if (!(n > 0.0)) return identity(d);
    return identity(d) + (rho / n) * r;
}

CMatrix random_kernel_theta(Rng& rng, const Frame& f, double scale, const TolerancePolicy& tol) {
    const CMatrix range = analysis_range_basis(f, tol);
    CMatrix theta = project_out(range, rng.gaussian_matrix(f.size(), f.dim()));
    const double n = operator_norm(theta);
    if (range.cols() == f.size() || n <= 0.0) return CMatrix::Zero(f.size(), f.dim());
    return theta * (scale / n);
}

Frame random_perturbation(Rng& rng, const Frame& f, double ratio, const TolerancePolicy& tol) {
    const double m = frame_bounds(f, tol).lower_opt;
    CMatrix e = rng.gaussian_matrix(f.dim(), f.size());
    const double n = operator_norm(e);
    if (n > 0.0) e *= ratio * std::sqrt(m) / n;
    return Frame(f.columns() + e);
}

FramePair random_redundant_pair(Rng& rng, Eigen::Index d, int copies) {
    if (d < 1 || copies < 4) throw InputError("random_redundant_pair: need d >= 1, copies >= 4");
    const Eigen::Index N = d * copies;
    const double c = static_cast<double>(copies);
    CMatrix f = CMatrix::Zero(d, N);
    // Coordinate i gets `copies` vectors of length 1/sqrt(copies): S = I.
    for (Eigen::Index i = 0; i < d; ++i)
        for (int k = 0; k < copies; ++k) f(i, i * copies + k) = 1.0 / std::sqrt(c);
    f += 0.01 / std::sqrt(double(N)) * rng.gaussian_matrix(d, N);
    // One vector moves by s / sqrt(c): q = s^2 / c >= 1 while q0 = s / c < 1.
    CMatrix g = f + 0.002 / std::sqrt(double(N)) * rng.gaussian_matrix(d, N);
    const Eigen::Index i = rng.uniform_int(0, d - 1);
    const double s = rng.uniform(1.1 * std::sqrt(c), 0.85 * c);
    g(i, i * copies) += s / std::sqrt(c);
    return {Frame(std::move(f)), Frame(std::move(g))};
}

ExamPair exam_pair(int K) {
    if (K < 1 || K > 10) throw InputError("exam: blocks must be in 1..10");
    Eigen::Index N = 0;
    for (int n = 1; n <= K; ++n) N += Eigen::Index(1) << (2 * n);
    CMatrix phi = CMatrix::Zero(K, N);
    CMatrix psi = CMatrix::Zero(K, N);
    Eigen::Index col = 0;
    double q = 0.0;
    double q0 = 0.0;
    for (int n = 1; n <= K; ++n) {
        const double len = std::ldexp(1.0, -n);
        const double t = n == 1 ? 3.0 : 2.0;
        const Eigen::Index reps = Eigen::Index(1) << (2 * n);
        for (Eigen::Index r = 0; r < reps; ++r, ++col) {
            phi(n - 1, col) = len;
            psi(n - 1, col) = r == 0 ? t * len : len;
        }
        q += (t - 1.0) * (t - 1.0) * len * len;
        q0 += (t - 1.0) * len * len;
    }
    ExamPair out{Frame(std::move(phi)), Frame(std::move(psi)), K};
    out.q_tail = out.q_limit - q;
    out.q0_tail = out.q0_limit - q0;
    return out;
}

GaborSystem random_gabor(Rng& rng, Eigen::Index L) {
    if (L < 1) throw InputError("random_gabor: L must be positive");
    std::vector<std::pair<Eigen::Index, Eigen::Index>> lattices;
    for (Eigen::Index a = 1; a <= L; ++a) {
        if (L % a != 0) continue;
        for (Eigen::Index b = 1; b <= L; ++b)
            if (L % b == 0 && a * b <= L && a < L && b < L) lattices.emplace_back(a, b);
    }
    if (lattices.empty()) lattices.emplace_back(1, 1);
    const auto pick = lattices[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(lattices.size()) - 1))];
    GaborSystem sys;
    sys.L = L;
    sys.a = pick.first;
    sys.b = pick.second;
    sys.window = rng.gaussian_vector(L) / std::sqrt(double(L));
    return sys;
}

} // namespace framekit
