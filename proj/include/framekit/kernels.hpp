#pragma once

// Inner-loop kernels over interleaved complex<double> arrays.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. active_kernels() picks one at first use; the choice is
// fixed for the life of the process so repeated runs on one machine produce
// identical bits. Setting FRAMEKIT_SIMD=scalar forces the reference path.

#include <complex>
#include <cstddef>

namespace framekit::kernels {

using cdouble = std::complex<double>;

struct KernelSet {
    const char* name;
    /// sum_i |x_i - y_i|^2
    double (*squared_distance)(const cdouble* x, const cdouble* y, std::size_t n);
    /// sum_i |x_i|^2
    double (*squared_norm)(const cdouble* x, std::size_t n);
    /// acc_i += x_i * conj(y_i)
    void (*conj_product_accumulate)(const cdouble* x, const cdouble* y, std::size_t n,
                                    cdouble* acc);
    /// max_i |x_i|, 0 for n == 0
    double (*max_abs)(const cdouble* x, std::size_t n);
};

const KernelSet& scalar_kernels();

/// Null when the binary was built without AVX2 support or the CPU lacks it.
const KernelSet* avx2_kernels();

const KernelSet& active_kernels();

} // namespace framekit::kernels
