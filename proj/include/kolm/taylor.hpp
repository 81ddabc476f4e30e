#pragma once

#include <random>

#include "kolm/oracle.hpp"

namespace kolm {

/// Exact integer factorial, as a double. Orders above 12 are not supported
/// so the value always fits a double exactly.
inline double factorial(int n) {
    if (n < 0 || n > 20)
        throw IndexOutOfRangeError("factorial: argument out of supported range");
    double f = 1.0;
    for (int j = 2; j <= n; ++j)
        f *= j;
    return f;
}

inline double multi_factorial(const MultiIndex& beta) {
    double f = 1.0;
    for (int b : beta)
        f *= factorial(b);
    return f;
}

/// B-Taylor polynomial of order n around zeta = (s, xi), expanded exactly
/// into a polynomial in z = (t, x). The increment factor e^{(t-s)B} xi is
/// polynomial in t by nilpotency.
inline PolyFunction taylor_polynomial(const HomogeneousGroup& g, const DerivativeOracle& u, int n,
                                      const GroupPoint& zeta) {
    if (n < 0 || n > 12)
        throw IndexOutOfRangeError("taylor_polynomial: order out of supported range [0,12]");
    const DerivativeTable table = build_derivative_table(g, u, n);
    const int d = g.d();

    // tau = t - s and its powers up to max(n, r).
    std::vector<PolyFunction> tau_pow;
    {
        PolyFunction tau(d);
        tau.add_term(1, MultiIndex(d, 0), 1.0);
        tau.add_term(0, MultiIndex(d, 0), -zeta.t);
        tau_pow.push_back(PolyFunction::constant(d, 1.0));
        for (int k = 1; k <= std::max(n, g.r()); ++k)
            tau_pow.push_back(tau_pow.back() * tau);
    }

    // Increment factors v_i = x_i - (e^{tau B} xi)_i, each polynomial in t.
    std::vector<PolyFunction> factor;
    factor.reserve(d);
    for (int i = 0; i < d; ++i) {
        PolyFunction v(d);
        MultiIndex ei(d, 0);
        ei[i] = 1;
        v.add_term(0, std::move(ei), 1.0);
        for (int m = 0; m <= g.r(); ++m) {
            const double c = (g.b_power(m) * zeta.x)(i) / factorial(m);
            if (c != 0.0)
                v = v - tau_pow[m].scaled(c);
        }
        factor.push_back(std::move(v));
    }

    PolyFunction out(d);
    for (size_t q = 0; q < table.indices.size(); ++q) {
        const auto& idx = table.indices[q];
        const double deriv = table.evals[q](zeta);
        if (deriv == 0.0)
            continue;
        const double coeff = deriv / (factorial(idx.k) * multi_factorial(idx.beta));
        PolyFunction term = tau_pow[idx.k].scaled(coeff);
        for (int i = 0; i < d; ++i)
            for (int rep = 0; rep < idx.beta[i]; ++rep)
                term = term * factor[i];
        out = out + term;
    }
    return out;
}

/// Pointwise evaluation of the Taylor polynomial at z, given a prebuilt
/// derivative table (for the hot paths that evaluate at many base points).
inline double taylor_eval(const HomogeneousGroup& g, const DerivativeTable& table,
                          const GroupPoint& zeta, const GroupPoint& z) {
    const double tau = z.t - zeta.t;
    const Eigen::VectorXd v = z.x - g.apply_exp_B(tau, zeta.x);
    double sum = 0.0;
    for (size_t q = 0; q < table.indices.size(); ++q) {
        const auto& idx = table.indices[q];
        const double deriv = table.evals[q](zeta);
        if (deriv == 0.0)
            continue;
        double term = deriv / (factorial(idx.k) * multi_factorial(idx.beta));
        for (int rep = 0; rep < idx.k; ++rep)
            term *= tau;
        for (int i = 0; i < g.d(); ++i)
            for (int rep = 0; rep < idx.beta[i]; ++rep)
                term *= v(i);
        sum += term;
    }
    return sum;
}

inline double taylor_eval(const HomogeneousGroup& g, const DerivativeOracle& u, int n,
                          const GroupPoint& zeta, const GroupPoint& z) {
    return taylor_eval(g, build_derivative_table(g, u, n), zeta, z);
}

/// Coefficient discrepancies of the derivative-exchange identities
/// d_{x_i} T_n u = T_{n-1}(d_i u) and Y_z T_n u = T_{n-2}(Yu).
struct ExchangeReport {
    double max_coordinate = 0.0; // over i = 1..p_0
    double max_drift = 0.0;      // the Y identity, n >= 2 only
    double max() const { return std::max(max_coordinate, max_drift); }
};

/// Verifies the exchange identities as exact polynomial identities in z,
/// around randomized dyadic-rational base points.
inline ExchangeReport check_exchange_identities(const HomogeneousGroup& g, const PolyFunction& p,
                                                int n, std::uint64_t seed = 0,
                                                int n_base_points = 4) {
    if (n < 1)
        throw OrderTooLowError("check_exchange_identities: requires n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dyadic(-32, 32);
    ExchangeReport report;
    for (int trial = 0; trial < n_base_points; ++trial) {
        GroupPoint zeta{dyadic(rng) / 16.0, Eigen::VectorXd(g.d())};
        for (int i = 0; i < g.d(); ++i)
            zeta.x[i] = dyadic(rng) / 16.0;

        const auto u = make_polynomial_oracle(g, p, n);
        const PolyFunction tn = taylor_polynomial(g, u, n, zeta);
        for (int i = 1; i <= g.p0(); ++i) {
            const auto du = make_polynomial_oracle(g, p.partial(i), n - 1);
            const PolyFunction rhs = taylor_polynomial(g, du, n - 1, zeta);
            report.max_coordinate =
                std::max(report.max_coordinate, PolyFunction::max_coeff_diff(tn.partial(i), rhs));
        }
        if (n >= 2) {
            const auto yu = make_polynomial_oracle(g, poly_Y(g, p), n - 2);
            const PolyFunction rhs = taylor_polynomial(g, yu, n - 2, zeta);
            report.max_drift =
                std::max(report.max_drift, PolyFunction::max_coeff_diff(poly_Y(g, tn), rhs));
        }
    }
    return report;
}

} // namespace kolm
