#include "shiftmetric/optim.hpp"

#include <algorithm>
#include <cmath>

namespace shiftmetric {

double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double>& x, double step, int maxIter, double ftol,
                   bool* stagnated) {
    const int dim = static_cast<int>(x.size());
    std::vector<std::vector<double>> pts(dim + 1, x);
    std::vector<double> val(dim + 1);
    for (int i = 1; i <= dim; ++i)
        pts[i][i - 1] += step;
    for (int i = 0; i <= dim; ++i)
        val[i] = f(pts[i]);

    auto order = [&] {
        std::vector<int> idx(dim + 1);
        for (int i = 0; i <= dim; ++i)
            idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        p2.reserve(dim + 1);
        v2.reserve(dim + 1);
        for (int i : idx) {
            p2.push_back(pts[i]);
            v2.push_back(val[i]);
        }
        pts.swap(p2);
        val.swap(v2);
    };

    bool converged = false;
    for (int iter = 0; iter < maxIter; ++iter) {
        order();
        if (std::abs(val[dim] - val[0]) <= ftol * (std::abs(val[0]) + 1e-12)) {
            converged = true;
            break;
        }
        std::vector<double> centroid(dim, 0.0);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                centroid[j] += pts[i][j] / dim;
        auto blend = [&](double alpha) {
            std::vector<double> p(dim);
            for (int j = 0; j < dim; ++j)
                p[j] = centroid[j] + alpha * (pts[dim][j] - centroid[j]);
            return p;
        };

        auto refl = blend(-1.0);
        const double fr = f(refl);
        if (fr < val[0]) {
            auto ex = blend(-2.0);
            const double fe = f(ex);
            if (fe < fr) {
                pts[dim] = ex;
                val[dim] = fe;
            } else {
                pts[dim] = refl;
                val[dim] = fr;
            }
        } else if (fr < val[dim - 1]) {
            pts[dim] = refl;
            val[dim] = fr;
        } else {
            auto con = blend(fr < val[dim] ? -0.5 : 0.5);
            const double fc = f(con);
            if (fc < std::min(fr, val[dim])) {
                pts[dim] = con;
                val[dim] = fc;
            } else {
                for (int i = 1; i <= dim; ++i) {
                    for (int j = 0; j < dim; ++j)
                        pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    if (stagnated)
        *stagnated = *stagnated || !converged;
    x = pts[0];
    return val[0];
}

} // namespace shiftmetric
