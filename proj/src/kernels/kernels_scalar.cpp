#include "shiftmetric/kernels.hpp"

#include <cmath>

namespace shiftmetric::kernels {
namespace {

ExpSums exp_weighted_sums_scalar(const double* w, const double* x, std::size_t n, double scale) {
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-scale * x[i]);
        s0 += w[i] * e;
        s1 += w[i] * x[i] * e;
    }
    return {s0, s1};
}

double exp_quad_sum_scalar(const double* w, const double* q, const double* x, std::size_t n, double scale) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += w[i] * q[i] * q[i] * std::exp(-scale * x[i]);
    return s;
}

void exp_neg_scalar(const double* x, std::size_t n, double scale, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(-scale * x[i]);
}

void matvec_scalar(const double* M, const double* x, double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = M + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
            acc += row[c] * x[c];
        y[r] = acc;
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * b[i];
    return acc;
}

} // namespace

const Kernels& scalar() {
    static const Kernels k = {
        exp_weighted_sums_scalar, exp_quad_sum_scalar, exp_neg_scalar,
        matvec_scalar, dot_scalar, "scalar",
    };
    return k;
}

} // namespace shiftmetric::kernels
