#pragma once

#include <functional>
#include <memory>

#include "kolm/polynomial.hpp"

namespace kolm {

/// Supplies the intrinsic derivatives Y^k d^beta u of a function, either
/// exactly (polynomials) or through user closures. `order` is the largest
/// intrinsic order 2k + |beta|_B the oracle can be differentiated to;
/// dx consumes the coordinate weight 2j+1 and dy consumes 2.
struct DerivativeOracle {
    int order = 0;
    std::function<double(const GroupPoint&)> value;
    std::function<DerivativeOracle(int)> dx; // 1-based coordinate index
    std::function<DerivativeOracle()> dy;
};

inline DerivativeOracle make_zero_oracle(int order) {
    DerivativeOracle o;
    o.order = order;
    o.value = [](const GroupPoint&) { return 0.0; };
    o.dx = [order](int) { return make_zero_oracle(order); };
    o.dy = [order]() { return make_zero_oracle(order); };
    return o;
}

/// Exact oracle backed by a PolyFunction; children re-differentiate the
/// polynomial so mixed compositions are exact.
inline DerivativeOracle make_polynomial_oracle(const HomogeneousGroup& g, const PolyFunction& p,
                                               int order) {
    auto poly = std::make_shared<PolyFunction>(p);
    const HomogeneousGroup* gp = &g;
    DerivativeOracle o;
    o.order = order;
    o.value = [poly](const GroupPoint& z) { return poly->eval(z); };
    o.dx = [gp, poly, order](int i) {
        const int w = gp->spatial_exponent(i - 1);
        if (order < w)
            throw IncompleteOracleError("oracle order exhausted by d_x" + std::to_string(i));
        return make_polynomial_oracle(*gp, poly->partial(i), order - w);
    };
    o.dy = [gp, poly, order]() {
        if (order < 2)
            throw IncompleteOracleError("oracle order exhausted by Y");
        return make_polynomial_oracle(*gp, poly_Y(*gp, *poly), order - 2);
    };
    return o;
}

inline DerivativeOracle oracle_scale(double c, const DerivativeOracle& a) {
    DerivativeOracle o;
    o.order = a.order;
    o.value = [c, av = a.value](const GroupPoint& z) { return c * av(z); };
    o.dx = [c, adx = a.dx](int i) { return oracle_scale(c, adx(i)); };
    o.dy = [c, ady = a.dy]() { return oracle_scale(c, ady()); };
    return o;
}

inline DerivativeOracle oracle_sub(const DerivativeOracle& a, const DerivativeOracle& b) {
    DerivativeOracle o;
    o.order = std::min(a.order, b.order);
    o.value = [av = a.value, bv = b.value](const GroupPoint& z) { return av(z) - bv(z); };
    o.dx = [adx = a.dx, bdx = b.dx](int i) { return oracle_sub(adx(i), bdx(i)); };
    o.dy = [ady = a.dy, bdy = b.dy]() { return oracle_sub(ady(), bdy()); };
    return o;
}

inline DerivativeOracle oracle_add(const DerivativeOracle& a, const DerivativeOracle& b) {
    DerivativeOracle o;
    o.order = std::min(a.order, b.order);
    o.value = [av = a.value, bv = b.value](const GroupPoint& z) { return av(z) + bv(z); };
    o.dx = [adx = a.dx, bdx = b.dx](int i) { return oracle_add(adx(i), bdx(i)); };
    o.dy = [ady = a.dy, bdy = b.dy]() { return oracle_add(ady(), bdy()); };
    return o;
}

/// Oracle for Y^k d^beta u, applying the spatial derivatives first and the
/// drift derivatives outermost.
inline DerivativeOracle derive(const DerivativeOracle& u, const IntrinsicIndex& idx) {
    DerivativeOracle o = u;
    for (size_t i = 0; i < idx.beta.size(); ++i)
        for (int rep = 0; rep < idx.beta[i]; ++rep)
            o = o.dx(static_cast<int>(i) + 1);
    for (int rep = 0; rep < idx.k; ++rep)
        o = o.dy();
    return o;
}

/// Evaluators for every Y^k d^beta u with 2k + |beta|_B <= n, aligned with
/// enumerate_indices(g, n).
struct DerivativeTable {
    std::vector<IntrinsicIndex> indices;
    std::vector<std::function<double(const GroupPoint&)>> evals;
};

inline DerivativeTable build_derivative_table(const HomogeneousGroup& g,
                                              const DerivativeOracle& u, int n) {
    if (u.order < n)
        throw IncompleteOracleError("oracle order " + std::to_string(u.order) +
                                    " below requested Taylor order " + std::to_string(n));
    DerivativeTable table;
    table.indices = enumerate_indices(g, n);
    table.evals.reserve(table.indices.size());
    for (const auto& idx : table.indices)
        table.evals.push_back(derive(u, idx).value);
    return table;
}

} // namespace kolm
