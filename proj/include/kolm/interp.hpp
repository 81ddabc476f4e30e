#pragma once

#include "kolm/holder.hpp"
#include "kolm/mollify.hpp"

namespace kolm {

/// Least-squares line fit in log-log coordinates.
struct RateFit {
    std::vector<std::pair<double, double>> points; // (scale, value)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

inline RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw DegenerateDataError("rate_fit: need at least 3 points");
    for (const auto& [s, v] : points)
        if (!(s > 0.0) || !(v > 0.0))
            throw DegenerateDataError("rate_fit: scales and values must be positive");

    RateFit fit;
    fit.points = points;
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [s, v] : points) {
        const double x = std::log(s), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw DegenerateDataError("rate_fit: degenerate abscissae");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ymean = sy / n;
    for (const auto& [s, v] : points) {
        const double y = std::log(v);
        const double yhat = fit.intercept + fit.slope * std::log(s);
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r_squared = (ss_tot == 0.0) ? 1.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
    return fit;
}

/// Endpoint data of an interpolation query (C^{n1,a1}, C^{n2,a2})_{theta,inf}.
struct InterpolationQuery {
    int n1 = 0;
    int n2 = 1;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double theta = 0.5;
};

/// The (theta) -> (n, alpha) exponent arithmetic of the interpolation
/// identity: n + alpha is the theta-convex combination of the endpoint
/// orders n1 + alpha1 and n2 + alpha2; fractional alpha in (0,1) required.
inline std::pair<int, double> theta_alpha_map(const InterpolationQuery& q) {
    if (q.n1 < 0 || q.n2 < 0 || q.alpha1 < 0.0 || q.alpha1 > 1.0 || q.alpha2 < 0.0 ||
        q.alpha2 > 1.0 || !(q.theta > 0.0) || !(q.theta < 1.0))
        throw InvalidQueryError("theta_alpha_map: invalid endpoint data");
    const double lo = q.n1 + q.alpha1;
    const double hi = q.n2 + q.alpha2;
    if (lo > hi)
        throw InvalidQueryError("theta_alpha_map: requires n1+alpha1 <= n2+alpha2");
    const double total = lo + q.theta * (hi - lo);
    const int n = static_cast<int>(std::floor(total));
    const double alpha = total - n;
    if (alpha == 0.0 || alpha == 1.0)
        throw DegenerateAlphaError("theta_alpha_map: alpha = " + std::to_string(alpha) +
                                   " excluded (must lie strictly in (0,1))");
    return {n, alpha};
}

/// Upper bound of the K-functional K(lambda, u; C^{n1,0}, C^{n2,0}),
/// sampled over the decomposition family (u - u_eps, u_eps) for eps on a
/// grid, plus the trivial decompositions. Norm estimates are computed once
/// per eps, so evaluation over a lambda grid is cheap.
class KFunctionalEstimator {
public:
    KFunctionalEstimator(const HomogeneousGroup& g, const DerivativeOracle& u, int taylor_order,
                         int n1, int n2, const std::vector<double>& eps_grid,
                         const SamplingPlan& plan, const MollifierSpec& spec,
                         const QuadratureSpec& quad) {
        if (eps_grid.empty())
            throw EmptyGridError("k-functional: empty eps grid");
        if (n1 >= n2)
            throw OrderViolationError("k-functional: requires n1 < n2");
        norm_u_n1_ = holder_norm(g, u, n1, 0.0, plan);
        if (u.order >= n2) {
            // u lies in the smaller space as well: admit (0, u).
            norm_u_n2_ = holder_norm(g, u, n2, 0.0, plan);
        }
        for (double eps : eps_grid) {
            MollifiedFunction mf(g, u, taylor_order, eps, spec, quad);
            const DerivativeOracle ueps = mf.oracle(n2);
            const double a = holder_norm(g, oracle_sub(u, ueps), n1, 0.0, plan);
            const double b = holder_norm(g, ueps, n2, 0.0, plan);
            decompositions_.emplace_back(a, b);
        }
    }

    /// K-hat(lambda): min over the sampled decomposition family.
    double operator()(double lambda) const {
        if (lambda < 0.0)
            throw InvalidQueryError("k-functional: lambda must be nonnegative");
        double best = norm_u_n1_; // decomposition (u, 0)
        if (norm_u_n2_ >= 0.0)
            best = std::min(best, lambda * norm_u_n2_); // decomposition (0, u)
        for (const auto& [a, b] : decompositions_)
            best = std::min(best, a + lambda * b);
        return best;
    }

    const std::vector<std::pair<double, double>>& decompositions() const {
        return decompositions_;
    }

private:
    std::vector<std::pair<double, double>> decompositions_;
    double norm_u_n1_ = 0.0;
    double norm_u_n2_ = -1.0;
};

/// Convenience single-lambda form.
inline double k_functional_upper(const HomogeneousGroup& g, const DerivativeOracle& u,
                                 double lambda, int taylor_order, int n1, int n2,
                                 const std::vector<double>& eps_grid, const SamplingPlan& plan,
                                 const MollifierSpec& spec, const QuadratureSpec& quad) {
    return KFunctionalEstimator(g, u, taylor_order, n1, n2, eps_grid, plan, spec, quad)(lambda);
}

/// Witness constant of the multiplicative interpolation inequality
/// ||u||_{C^{n,0}} <= c ||u||_{C^{n1,0}}^{(n2-n)/(n2-n1)} ||u||_{C^{n2,0}}^{(n-n1)/(n2-n1)}.
struct InequalityReport {
    double norm_n1 = 0.0;
    double norm_n = 0.0;
    double norm_n2 = 0.0;
    double ratio = 0.0;
};

inline InequalityReport interpolation_inequality_check(const HomogeneousGroup& g,
                                                       const DerivativeOracle& u, int n1, int n,
                                                       int n2, const SamplingPlan& plan) {
    if (!(n1 < n && n < n2))
        throw OrderViolationError("interpolation inequality: requires n1 < n < n2");
    InequalityReport rep;
    rep.norm_n1 = holder_norm(g, u, n1, 0.0, plan);
    rep.norm_n = holder_norm(g, u, n, 0.0, plan);
    rep.norm_n2 = holder_norm(g, u, n2, 0.0, plan);
    const double e1 = static_cast<double>(n2 - n) / (n2 - n1);
    const double e2 = static_cast<double>(n - n1) / (n2 - n1);
    const double denom = std::pow(rep.norm_n1, e1) * std::pow(rep.norm_n2, e2);
    rep.ratio = (denom == 0.0) ? 0.0 : rep.norm_n / denom;
    return rep;
}

} // namespace kolm
