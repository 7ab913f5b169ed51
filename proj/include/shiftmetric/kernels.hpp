#ifndef SHIFTMETRIC_KERNELS_HPP
#define SHIFTMETRIC_KERNELS_HPP

#include <cstddef>

// Data-parallel inner loops shared by the entropy solvers, the cycle-complex
// sums and the power iteration.  Each kernel exists as a scalar reference
// implementation and (on x86-64 with AVX2+FMA) a vectorized variant; the
// active set is chosen once at startup.  The environment variable
// SHIFTMETRIC_SIMD=scalar|avx2 overrides the automatic choice.
//
// Vectorized exp flushes results below the normal range (< ~1e-308) to zero;
// all callers sum terms against O(1) totals, so the difference is invisible.

namespace shiftmetric::kernels {

struct ExpSums {
    double s0; // sum_i w[i] * exp(-scale * x[i])
    double s1; // sum_i w[i] * x[i] * exp(-scale * x[i])
};

struct Kernels {
    // Fused value/derivative sums for exp-weighted series.
    ExpSums (*exp_weighted_sums)(const double* w, const double* x, std::size_t n, double scale);
    // sum_i w[i] * q[i]^2 * exp(-scale * x[i])
    double (*exp_quad_sum)(const double* w, const double* q, const double* x, std::size_t n, double scale);
    // out[i] = exp(-scale * x[i])
    void (*exp_neg)(const double* x, std::size_t n, double scale, double* out);
    // y = M * x with M row-major (rows x cols)
    void (*matvec)(const double* M, const double* x, double* y, std::size_t rows, std::size_t cols);
    double (*dot)(const double* a, const double* b, std::size_t n);
    const char* name;
};

const Kernels& scalar();
// AVX2+FMA variant; falls back to scalar() when unavailable on this host.
const Kernels& avx2();
// The runtime-selected set used throughout the library.
const Kernels& active();

bool avx2_available();

} // namespace shiftmetric::kernels

#endif
