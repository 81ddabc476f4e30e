#pragma once

#include "kolm/bump.hpp"
#include "kolm/oracle.hpp"

namespace kolm {

/// A 1-D factor with derivatives available up to max_order.
struct Func1D {
    int max_order = 0;
    std::function<double(double, int)> deriv; // (s, m) -> f^{(m)}(s)
};

inline Func1D func1d_one() {
    return {64, [](double, int m) { return (m == 0) ? 1.0 : 0.0; }};
}

/// bump(s / radius), derivatives 0..3.
inline Func1D func1d_bump(double radius) {
    return {3, [radius](double s, int m) { return bump(s / radius, m) / std::pow(radius, m); }};
}

/// s * bump(s / radius): a smooth, compactly supported odd profile.
inline Func1D func1d_linear_bump(double radius) {
    return {2, [radius](double s, int m) {
                const double b0 = bump(s / radius, m);
                const double b1 = (m >= 1) ? bump(s / radius, m - 1) : 0.0;
                return s * b0 / std::pow(radius, m) +
                       m * b1 / std::pow(radius, m - 1);
            }};
}

/// |s|^p * bump(s / radius): Hoelder regularity exactly p at the origin.
/// Derivatives up to 2; values where the formula is singular (s = 0 with
/// p <= m) are returned as 0, which sampling almost surely never hits.
inline Func1D func1d_power_bump(double p, double radius) {
    auto abs_pow_deriv = [p](double s, int j) {
        // j-th derivative of |s|^p.
        double c = 1.0;
        for (int m = 0; m < j; ++m)
            c *= (p - m);
        if (s == 0.0)
            return (j == 0 && p == 0.0) ? 1.0 : 0.0;
        const double sgn = (s < 0.0) ? -1.0 : 1.0;
        return c * std::pow(sgn, j) * std::pow(std::abs(s), p - j);
    };
    return {2, [radius, abs_pow_deriv](double s, int m) {
                double sum = 0.0;
                double binom = 1.0;
                for (int j = 0; j <= m; ++j) {
                    sum += binom * abs_pow_deriv(s, j) * bump(s / radius, m - j) /
                           std::pow(radius, m - j);
                    binom *= static_cast<double>(m - j) / (j + 1);
                }
                return sum;
            }};
}

/// Oracle for a tensor product u(t,x) = f_0(t) * f_1(x_1) * ... * f_{p_0}(x_{p_0}).
/// Such functions do not depend on the degenerate coordinates, so
/// Yu = d_t u and the family is closed under both intrinsic fields.
inline DerivativeOracle tensor_profile(const HomogeneousGroup& g, std::vector<Func1D> factors,
                                       int order) {
    if (static_cast<int>(factors.size()) != g.p0() + 1)
        throw DimensionMismatchError("tensor_profile: expected " + std::to_string(g.p0() + 1) +
                                     " factors (time first)");
    auto fs = std::make_shared<std::vector<Func1D>>(std::move(factors));
    const HomogeneousGroup* gp = &g;
    DerivativeOracle o;
    o.order = order;
    o.value = [fs, gp](const GroupPoint& z) {
        double v = (*fs)[0].deriv(z.t, 0);
        for (int i = 1; i <= gp->p0(); ++i)
            v *= (*fs)[i].deriv(z.x[i - 1], 0);
        return v;
    };
    o.dx = [fs, gp, order](int i) {
        if (i < 1 || i > gp->d())
            throw IndexOutOfRangeError("tensor_profile: coordinate out of range");
        const int w = gp->spatial_exponent(i - 1);
        if (order < w)
            throw IncompleteOracleError("tensor_profile: oracle order exhausted by d_x" +
                                        std::to_string(i));
        if (i > gp->p0())
            return make_zero_oracle(order - w);
        std::vector<Func1D> next = *fs;
        Func1D f = next[i];
        if (f.max_order < 1)
            throw IncompleteOracleError("tensor_profile: factor derivative order exhausted");
        next[i] = {f.max_order - 1,
                   [f](double s, int m) { return f.deriv(s, m + 1); }};
        return tensor_profile(*gp, std::move(next), order - w);
    };
    o.dy = [fs, gp, order]() {
        if (order < 2)
            throw IncompleteOracleError("tensor_profile: oracle order exhausted by Y");
        std::vector<Func1D> next = *fs;
        Func1D f = next[0];
        if (f.max_order < 1)
            throw IncompleteOracleError("tensor_profile: time factor derivative exhausted");
        next[0] = {f.max_order - 1,
                   [f](double s, int m) { return f.deriv(s, m + 1); }};
        return tensor_profile(*gp, std::move(next), order - 2);
    };
    return o;
}

/// u = |x_1|^p * bump(x_1 / radius): regularity (n, alpha) with n + alpha = p.
/// Yu vanishes identically (u does not depend on t or degenerate coordinates).
inline DerivativeOracle x1_power_profile(const HomogeneousGroup& g, double p, double radius,
                                         int order) {
    std::vector<Func1D> factors(g.p0() + 1, func1d_one());
    factors[1] = func1d_power_bump(p, radius);
    return tensor_profile(g, std::move(factors), order);
}

/// u = |t|^q * bump(t / radius): time-only profile, regularity 2q in the
/// intrinsic scale.
inline DerivativeOracle t_power_profile(const HomogeneousGroup& g, double q, double radius,
                                        int order) {
    std::vector<Func1D> factors(g.p0() + 1, func1d_one());
    factors[0] = func1d_power_bump(q, radius);
    return tensor_profile(g, std::move(factors), order);
}

/// u = x_1 * bump(x_1 / radius) * bump(t / radius): smooth member of the corpus.
inline DerivativeOracle x1_bump_profile(const HomogeneousGroup& g, double radius, int order) {
    std::vector<Func1D> factors(g.p0() + 1, func1d_one());
    factors[0] = func1d_bump(radius);
    factors[1] = func1d_linear_bump(radius);
    return tensor_profile(g, std::move(factors), order);
}

/// Plain smooth bump in (t, x_1..x_{p_0}).
inline DerivativeOracle bump_profile(const HomogeneousGroup& g, double radius, int order) {
    std::vector<Func1D> factors(g.p0() + 1, func1d_bump(radius));
    return tensor_profile(g, std::move(factors), order);
}

} // namespace kolm
