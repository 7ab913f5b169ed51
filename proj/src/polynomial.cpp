#include "shiftmetric/polynomial.hpp"

#include "shiftmetric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace shiftmetric {

namespace {

using cplx = std::complex<double>;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Horner evaluation of a polynomial given by descending coefficients.
cplx horner(const std::vector<cplx>& desc, cplx z) {
    cplx acc = 0.0;
    for (const cplx& c : desc)
        acc = acc * z + c;
    return acc;
}

std::vector<cplx> derivative_desc(const std::vector<cplx>& desc) {
    const int deg = static_cast<int>(desc.size()) - 1;
    std::vector<cplx> out;
    for (int i = 0; i < deg; ++i)
        out.push_back(desc[i] * static_cast<double>(deg - i));
    return out;
}

// Aberth-Ehrlich simultaneous iteration on a polynomial with descending
// coefficients (leading coefficient nonzero).
std::vector<cplx> aberth(std::vector<cplx> desc, double clusterTol) {
    const int m = static_cast<int>(desc.size()) - 1;
    const cplx lead = desc[0];
    for (cplx& c : desc)
        c /= lead;
    const auto ddesc = derivative_desc(desc);
    const auto d2desc = derivative_desc(ddesc);

    double radius = 0.0;
    for (int i = 1; i <= m; ++i)
        radius = std::max(radius, std::abs(desc[i]));
    radius = 1.0 + radius; // Cauchy bound

    std::vector<cplx> z(m);
    for (int i = 0; i < m; ++i) {
        const double ang = 2.0 * std::numbers::pi * i / m + 0.7;
        z[i] = radius * cplx(std::cos(ang), std::sin(ang)) + cplx(0.001, 0.002);
    }

    bool converged = false;
    for (int iter = 0; iter < 500 && !converged; ++iter) {
        converged = true;
        for (int i = 0; i < m; ++i) {
            const cplx p = horner(desc, z[i]);
            cplx dp = horner(ddesc, z[i]);
            if (std::abs(dp) < 1e-300)
                dp = cplx(1e-300, 0.0);
            const cplx newton = p / dp;
            cplx sum = 0.0;
            for (int j = 0; j < m; ++j) {
                if (j == i)
                    continue;
                cplx diff = z[i] - z[j];
                if (std::abs(diff) < 1e-300)
                    diff = cplx(1e-300, 0.0);
                sum += 1.0 / diff;
            }
            const cplx denom = 1.0 - newton * sum;
            const cplx w = std::abs(denom) < 1e-300 ? newton : newton / denom;
            z[i] -= w;
            if (std::abs(w) > 1e-14 * (1.0 + std::abs(z[i])))
                converged = false;
        }
    }
    if (!converged) {
        // tolerate slow tails; report only if residuals are genuinely bad
        double worst = 0.0;
        for (int i = 0; i < m; ++i)
            worst = std::max(worst, std::abs(horner(desc, z[i])));
        if (worst > 1e-6) {
            std::ostringstream os;
            os << "root finder did not converge; residuals:";
            for (int i = 0; i < m; ++i)
                os << ' ' << std::abs(horner(desc, z[i]));
            throw SolverError(os.str());
        }
    }

    // Multiplicity-aware polish: estimate the multiplicity from p p'' / p'^2
    // and take modified Newton steps, keeping any step that lowers |p|.
    for (int i = 0; i < m; ++i) {
        for (int step = 0; step < 8; ++step) {
            const cplx p = horner(desc, z[i]);
            if (std::abs(p) == 0.0)
                break;
            const cplx dp = horner(ddesc, z[i]);
            if (std::abs(dp) < 1e-300)
                break;
            const cplx mu = p * horner(d2desc, z[i]) / (dp * dp);
            int mult = 1;
            const double denom = std::abs(1.0 - mu);
            if (denom > 1e-12)
                mult = std::clamp(static_cast<int>(std::lround(1.0 / denom)), 1, m);
            const cplx cand = z[i] - static_cast<double>(mult) * p / dp;
            if (std::abs(horner(desc, cand)) < std::abs(p))
                z[i] = cand;
            else
                break;
        }
    }

    // Cluster within clusterTol and replace clusters by their centroid.
    std::vector<int> parent(m);
    for (int i = 0; i < m; ++i)
        parent[i] = i;
    auto find = [&](int i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(z[i] - z[j]) <= clusterTol * std::max(1.0, std::abs(z[i])))
                parent[find(i)] = find(j);
    std::vector<cplx> centroid(m, 0.0);
    std::vector<int> size(m, 0);
    for (int i = 0; i < m; ++i) {
        centroid[find(i)] += z[i];
        size[find(i)] += 1;
    }
    for (int i = 0; i < m; ++i) {
        const int r = find(i);
        z[i] = centroid[r] / static_cast<double>(size[r]);
    }

    // Residual bound at simple roots.
    double coefScale = 0.0;
    for (const cplx& c : desc)
        coefScale = std::max(coefScale, std::abs(c));
    for (int i = 0; i < m; ++i) {
        if (size[find(i)] != 1)
            continue;
        const double zi = std::max(1.0, std::abs(z[i]));
        const double bound = 1e3 * m * 2.3e-16 * coefScale * std::pow(zi, m) + 1e-280;
        const double res = std::abs(horner(desc, z[i]));
        if (res > std::max(bound, 1e-10)) {
            std::ostringstream os;
            os << "root residual " << res << " above bound " << bound
               << " at root " << z[i];
            throw SolverError(os.str());
        }
    }
    return z;
}

} // namespace

Polynomial::Polynomial(int deg, std::vector<cplx> cs)
    : degree(deg), coeffs(std::move(cs)) {
    if (degree < 2)
        throw DomainError("polynomial degree must be at least 2");
    if (static_cast<int>(coeffs.size()) != degree - 1)
        throw DomainError("expected " + std::to_string(degree - 1) + " coefficients");
    for (const cplx& c : coeffs)
        if (!finite(c))
            throw DomainError("coefficients must be finite");
}

cplx Polynomial::eval(cplx z) const {
    // Horner over descending coefficients [1, 0, a_{D-2}, ..., a_0]
    cplx acc = 1.0;
    acc = acc * z; // the z^{D-1} coefficient is 0
    for (const cplx& c : coeffs)
        acc = acc * z + c;
    return acc;
}

cplx Polynomial::evalDerivative(cplx z) const {
    // descending: [D, 0, (D-2) a_{D-2}, ..., 1 a_1]; a_0 drops out
    cplx acc = static_cast<double>(degree);
    acc = acc * z;
    for (int i = 0; i + 1 < static_cast<int>(coeffs.size()); ++i) {
        const int power = degree - 2 - i; // exponent of z in the a-term
        acc = acc * z + coeffs[i] * static_cast<double>(power);
    }
    return acc;
}

double Polynomial::coeffAbsSum() const {
    double s = 0.0;
    for (const cplx& c : coeffs)
        s += std::abs(c);
    return s;
}

CriticalHeights::CriticalHeights(std::vector<double> values) : h(std::move(values)) {
    if (h.empty())
        throw DomainError("critical heights need at least one entry (degree >= 2)");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!std::isfinite(h[i]) || h[i] < 0.0)
            throw DomainError("critical heights must be finite and nonnegative");
        if (i > 0 && h[i] > h[i - 1] * (1.0 + 1e-12) + 1e-300)
            throw DomainError("critical heights must be nonincreasing");
    }
}

std::vector<cplx> critical_points(const Polynomial& f, double clusterTol) {
    if (!(clusterTol > 0.0))
        throw DomainError("clusterTol must be positive");
    // f'(z) descending coefficients
    std::vector<cplx> desc;
    desc.push_back(static_cast<double>(f.degree));
    desc.push_back(0.0);
    for (int i = 0; i + 1 < static_cast<int>(f.coeffs.size()); ++i)
        desc.push_back(f.coeffs[i] * static_cast<double>(f.degree - 2 - i));
    auto roots = aberth(desc, clusterTol);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

double green_function(const Polynomial& f, cplx z, double tol, int maxIter) {
    if (!(tol > 0.0))
        throw DomainError("tol must be positive");
    if (maxIter < 1)
        throw DomainError("maxIter must be at least 1");
    if (!finite(z))
        throw DomainError("green_function input is not finite");

    const double D = f.degree;
    const double R = std::max(2.0, 2.0 * (1.0 + f.coeffAbsSum()));
    cplx w = z;
    int n = 0;
    while (n < maxIter && std::abs(w) <= R) {
        w = f.eval(w);
        ++n;
    }
    if (std::abs(w) <= R)
        return 0.0;

    const double invDn = std::pow(D, -static_cast<double>(n));
    if (invDn == 0.0)
        return 0.0;

    const double base = std::log(std::abs(w));
    double corr = 0.0;
    double factor = 1.0 / D;
    const double absSum = f.coeffAbsSum();
    for (int m = 0; m < 600; ++m) {
        const double aw = std::abs(w);
        const double deltaCap = absSum / (aw * aw);
        const double cBound = deltaCap < 0.5 ? -std::log1p(-deltaCap) : 0.7;
        const double tailBound = cBound * factor * D / (D - 1.0);
        if (invDn * tailBound < tol || deltaCap == 0.0)
            break;
        if (aw > 1e120)
            break; // corrections below 1e-230 from here on
        // delta = f(w)/w^D - 1, evaluated in inverse powers to avoid overflow
        const cplx inv = 1.0 / w;
        cplx acc = 0.0;
        for (const cplx& c : f.coeffs)
            acc = acc * inv + c;
        const cplx delta = acc * inv * inv;
        corr += std::log(std::abs(1.0 + delta)) * factor;
        factor /= D;
        w = f.eval(w);
        if (!finite(w))
            break;
    }
    return invDn * (base + corr);
}

CriticalHeights critical_heights(const Polynomial& f, double tol) {
    if (!(tol > 0.0))
        throw DomainError("tol must be positive");
    const auto pts = critical_points(f);
    std::vector<double> h;
    h.reserve(pts.size());
    for (const cplx& c : pts)
        h.push_back(green_function(f, c, tol));
    std::sort(h.begin(), h.end(), std::greater<>());
    return CriticalHeights(std::move(h));
}

bool is_shift_locus(const CriticalHeights& h, double eps) {
    if (eps < 0.0)
        throw DomainError("eps must be nonnegative");
    return h.h.back() > eps;
}

bool is_generic(const CriticalHeights& h, int D, double ratioTol) {
    if (!(ratioTol > 0.0))
        throw DomainError("ratioTol must be positive");
    if (D < 2)
        throw DomainError("the power base D must be at least 2");
    const int m = static_cast<int>(h.h.size());
    for (int i = 0; i < m; ++i)
        if (!(h[i] > 0.0))
            return false;
    const double logD = std::log(static_cast<double>(D));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double r = std::log(h[i] / h[j]) / logD;
            if (std::abs(r - std::round(r)) <= ratioTol)
                return false;
        }
    return true;
}

SubannulusDecomposition subannuli(const CriticalHeights& h) {
    const int D = h.degree();
    const double h1 = h[0];
    if (!(h1 > 0.0) || !(h.h.back() > 0.0))
        throw DomainError("subannuli need escaping critical points (shift locus)");
    const double top = D * h1;
    const double logD = std::log(static_cast<double>(D));
    const double mergeTol = 1e-12 * top;

    std::vector<double> bounds = {h1, top};
    for (int j = 1; j < static_cast<int>(h.h.size()); ++j) {
        const double hj = h[j];
        double k = std::ceil(std::log(h1 / hj) / logD - 1e-12);
        double rep = hj * std::pow(static_cast<double>(D), k);
        if (rep < h1 * (1.0 - 1e-12))
            rep *= D;
        if (rep > h1 + mergeTol && rep < top - mergeTol)
            bounds.push_back(rep);
    }
    std::sort(bounds.begin(), bounds.end());
    std::vector<double> merged;
    for (double b : bounds)
        if (merged.empty() || b - merged.back() > mergeTol)
            merged.push_back(b);
    // keep the exact outer boundary
    merged.back() = top;

    SubannulusDecomposition out;
    out.boundaries = merged;
    out.classCount = static_cast<int>(merged.size()) - 1;
    for (int i = 1; i <= out.classCount; ++i)
        out.moduli.push_back((merged[i] - merged[i - 1]) / (2.0 * std::numbers::pi));
    return out;
}

} // namespace shiftmetric
