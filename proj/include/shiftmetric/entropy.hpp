#ifndef SHIFTMETRIC_ENTROPY_HPP
#define SHIFTMETRIC_ENTROPY_HPP

#include "shiftmetric/graph.hpp"

#include <span>
#include <vector>

namespace shiftmetric {

enum class EntropyMethod { Closed, Spectral, Det };
enum class FMethod { Det, Cycles };
enum class DerivMethod { Auto, Cycles, FiniteDiff };

// A_{Gamma,phi}(e,e') = A_Gamma(e,e') * exp(-phi(e)); phi on directed edges,
// +inf entries zero the corresponding rows.  Dense row-major |E| x |E|.
std::vector<double> weighted_matrix(const MetricGraph& g, std::span<const double> phi);

// Pressure log spec(A_{Gamma,-phi}); -inf entries of phi give zero rows.
// Returns -inf when the matrix degenerates to spectral radius 0.
double pressure(const MetricGraph& g, std::span<const double> phi);

// Entropy of a length function: the unique h > 0 with pressure(-h*l) = 0.
//   Closed    rose-only root of 1 = sum_S (2|S|-1) exp(-h l(S))
//   Spectral  power iteration on the weighted edge matrix
//   Det       rose-only root of det(I_n - Abar(h*l))
// Extended length functions drop their infinite petals exactly; fewer than
// two finite petals raises DegenerateError.
double entropy(const LengthFunction& l, EntropyMethod method);
// Closed for roses with <= 20 finite petals, spectral otherwise.
double entropy(const LengthFunction& l);

LengthFunction normalize_unit_entropy(const LengthFunction& l);

// F_Gamma(l) = det(I_|E| - A_{Gamma,l}); the cycle method evaluates the
// determinant expansion over the cycle complex.
double F_gamma(const LengthFunction& l, FMethod method = FMethod::Det);

// Gradient of F_Gamma w.r.t. the E+ lengths, Hessian quadratic form
// <v, H[F](l)v>, and the pairing <l, grad F(l)>.  Auto picks cycle sums when
// the complex is within caps, else central differences of the determinant.
std::vector<double> grad_F(const LengthFunction& l, DerivMethod method = DerivMethod::Auto);
double hess_F_quadform(const LengthFunction& l, std::span<const double> v,
                       DerivMethod method = DerivMethod::Auto);
double pairing_l_gradF(const LengthFunction& l, DerivMethod method = DerivMethod::Auto);

// Gradient of the entropy function at l (not necessarily unit entropy).
std::vector<double> grad_entropy(const LengthFunction& l);

} // namespace shiftmetric

#endif
