#ifndef SHIFTMETRIC_OPTIM_HPP
#define SHIFTMETRIC_OPTIM_HPP

#include <functional>
#include <vector>

namespace shiftmetric {

// Deterministic Nelder-Mead.  x holds the start point on entry and the best
// point on exit; returns the best value.  stagnated (if given) is OR-ed with
// "the iteration budget ran out before the ftol spread test passed".
double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double>& x, double step, int maxIter, double ftol,
                   bool* stagnated = nullptr);

} // namespace shiftmetric

#endif
