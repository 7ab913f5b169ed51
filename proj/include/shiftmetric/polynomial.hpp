#ifndef SHIFTMETRIC_POLYNOMIAL_HPP
#define SHIFTMETRIC_POLYNOMIAL_HPP

#include <complex>
#include <vector>

namespace shiftmetric {

// Monic centered polynomial f(z) = z^D + a_{D-2} z^{D-2} + ... + a_0,
// stored as (a_{D-2}, ..., a_0).
struct Polynomial {
    Polynomial(int degree, std::vector<std::complex<double>> coeffs);

    int degree;
    std::vector<std::complex<double>> coeffs;

    std::complex<double> eval(std::complex<double> z) const;
    std::complex<double> evalDerivative(std::complex<double> z) const;
    double coeffAbsSum() const;
};

// Nonincreasing vector of D-1 nonnegative escape rates.
struct CriticalHeights {
    explicit CriticalHeights(std::vector<double> values);
    std::vector<double> h;
    int degree() const { return static_cast<int>(h.size()) + 1; }
    double operator[](int i) const { return h[i]; }
};

// Roots of f' with multiplicity (D-1 entries): Aberth-Ehrlich simultaneous
// iteration, multiplicity-aware Newton polish, then clustering within
// clusterTol.  Throws SolverError (with residuals) on non-convergence.
std::vector<std::complex<double>> critical_points(const Polynomial& f,
                                                  double clusterTol = 1e-8);

// Escaping rate G_f(z): 0 if the orbit stays inside the escape radius for
// maxIter steps, otherwise the renormalized escape-rate limit with the tail
// summed until its bound drops below tol.
double green_function(const Polynomial& f, std::complex<double> z,
                      double tol = 1e-12, int maxIter = 2048);

CriticalHeights critical_heights(const Polynomial& f, double tol = 1e-12);

bool is_shift_locus(const CriticalHeights& h, double eps = 1e-12);

// Every entry positive and no ratio h_i/h_j within ratioTol of an integer
// power of D (in log_D scale).
bool is_generic(const CriticalHeights& h, int D, double ratioTol = 1e-9);

struct SubannulusDecomposition {
    std::vector<double> boundaries; // h1 = a_0 < a_1 < ... < a_N = D h1
    std::vector<double> moduli;     // (a_i - a_{i-1}) / (2 pi)
    int classCount = 0;
};

// Fundamental subannuli of the annulus h1 < G < D h1, split at the grand
// orbit representatives of the critical heights; heights within 1e-12*h1
// merge into one foliated class.
SubannulusDecomposition subannuli(const CriticalHeights& h);

} // namespace shiftmetric

#endif
