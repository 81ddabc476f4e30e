#pragma once

#include <map>
#include <memory>

#include "kolm/bump.hpp"
#include "kolm/quadrature.hpp"
#include "kolm/taylor.hpp"

namespace kolm {

/// Tensor-bump mollifier phi(z) = c * bump(t/h_t) * prod_i bump(x_i/h_i),
/// with half-widths chosen so the support box lies inside the unit
/// quasi-ball and c normalizing the integral to 1.
struct MollifierSpec {
    Eigen::VectorXd half_widths; // length d+1, time first
    double norm_const = 1.0;
};

/// Spatial derivative d^beta phi, closed form through the tensor factors.
inline double mollifier_partial(const MollifierSpec& spec, const MultiIndex& beta,
                                const GroupPoint& z) {
    double v = spec.norm_const * bump(z.t / spec.half_widths[0]);
    for (size_t i = 0; i < beta.size(); ++i) {
        const double h = spec.half_widths[i + 1];
        v *= bump(z.x[i] / h, beta[i]) / std::pow(h, beta[i]);
    }
    return v;
}

/// Intrinsic derivative Y^a d^beta phi with a in {0, 1}.
inline double mollifier_deriv(const HomogeneousGroup& g, const MollifierSpec& spec, int y_count,
                              const MultiIndex& beta, const GroupPoint& z) {
    if (y_count == 0)
        return mollifier_partial(spec, beta, z);
    if (y_count != 1)
        throw IndexOutOfRangeError("mollifier_deriv: only first drift derivatives supported");
    // Y psi = d_t psi + <Bx, grad psi> with psi = d^beta phi.
    double v;
    {
        // d_t factor: differentiate the time bump once.
        const double h_t = spec.half_widths[0];
        double time_part = spec.norm_const * bump(z.t / h_t, 1) / h_t;
        for (size_t i = 0; i < beta.size(); ++i) {
            const double h = spec.half_widths[i + 1];
            time_part *= bump(z.x[i] / h, beta[i]) / std::pow(h, beta[i]);
        }
        v = time_part;
    }
    const Eigen::VectorXd bx = g.B() * z.x;
    for (int m = 0; m < g.d(); ++m) {
        if (bx[m] == 0.0)
            continue;
        MultiIndex bm = beta;
        bm[m] += 1;
        v += bx[m] * mollifier_partial(spec, bm, z);
    }
    return v;
}

/// Builds the mollifier for a group: inscribes the support box in the unit
/// quasi-ball via h_t^{1/2} + sum_i h_i^{1/(2j+1)} < 1 and normalizes the
/// integral by quadrature, with a refinement stability check.
inline MollifierSpec build_mollifier(const HomogeneousGroup& g, const QuadratureSpec& quad) {
    const int d = g.d();
    MollifierSpec spec;
    spec.half_widths.resize(d + 1);
    const double share = 0.98 / (d + 1);
    spec.half_widths[0] = share * share;
    for (int i = 0; i < d; ++i)
        spec.half_widths[i + 1] = std::pow(share, g.spatial_exponent(i));
    spec.norm_const = 1.0;

    auto integrate = [&](int points_override) {
        const Quadrature q = build_quadrature(d, spec.half_widths, quad, points_override);
        double sum = 0.0;
        const MultiIndex zero(d, 0);
        for (size_t i = 0; i < q.nodes.size(); ++i)
            sum += q.weights[i] * mollifier_partial(spec, zero, q.nodes[i]);
        return sum;
    };

    // Normalization runs on a denser grid than the convolution default:
    // it is a one-time cost and anchors the declared tolerance.
    const bool tensor = quad.method != QuadMethod::QuasiRandom;
    const int base = tensor ? std::max(quad.points_per_axis, (d + 1 >= 5) ? 24 : 32)
                            : static_cast<int>(quad.total_points);
    const double coarse = integrate(base);
    const double fine = integrate(tensor ? base + base / 2 : 2 * base);
    if (!(coarse > 0.0) || std::abs(coarse - fine) > quad.tolerance * std::abs(fine))
        throw QuadratureFailureError("mollifier normalization integral unstable: coarse=" +
                                     std::to_string(coarse) + " fine=" + std::to_string(fine));
    spec.norm_const = 1.0 / fine;
    return spec;
}

/// Round-trip change-of-variables identity: the integral of
/// phi(D_{1/eps}(zeta^{-1} o z)) dzeta / eps^{Q+2}, computed in the
/// transformed variable on an independent quadrature grid.
inline double normalization_identity(const HomogeneousGroup& g, const MollifierSpec& spec,
                                     double eps, const GroupPoint& z, const QuadratureSpec& quad,
                                     int points_override = 0) {
    const Quadrature q = build_quadrature(g.d(), spec.half_widths, quad, points_override);
    const MultiIndex zero(g.d(), 0);
    double sum = 0.0;
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        // zeta = z o (D_eps zbar)^{-1}, then the argument is recovered as
        // D_{1/eps}(zeta^{-1} o z); the round trip exercises the group algebra.
        const GroupPoint zeta = g.compose(z, g.inverse(g.dilate(eps, q.nodes[i])));
        const GroupPoint arg = g.dilate(1.0 / eps, g.compose(g.inverse(zeta), z));
        sum += q.weights[i] * mollifier_partial(spec, zero, arg);
    }
    return sum;
}

/// The intrinsic mollification u_eps^{(n)}(z) = T_n u(., z) *_B phi_eps(z),
/// evaluated by quadrature in the transformed variable so the support is
/// eps-independent and the eps^{Q+2} factor cancels analytically.
/// Intrinsic derivatives distribute over the Taylor factor (by the exchange
/// identities) and the mollifier factor (by the dilation scaling of its
/// derivatives, with one eps^{-w} per field).
class MollifiedFunction {
public:
    MollifiedFunction(const HomogeneousGroup& g, DerivativeOracle u, int n, double eps,
                      MollifierSpec spec, const QuadratureSpec& quad)
        : g_(&g), u_(std::move(u)), n_(n), eps_(eps), spec_(std::move(spec)) {
        if (!(eps > 0.0) || eps > 1.0)
            throw EpsilonOutOfRangeError("mollification requires eps in (0,1], got " +
                                         std::to_string(eps));
        if (u_.order < n)
            throw IncompleteOracleError("mollification: oracle order below Taylor order");
        quad_ = build_quadrature(g.d(), spec_.half_widths, quad);
    }

    const HomogeneousGroup& group() const { return *g_; }
    double eps() const { return eps_; }
    int taylor_order() const { return n_; }

    double value(const GroupPoint& z) const { return derivative({0, MultiIndex(g_->d(), 0)}, z); }

    /// Y^k d^beta u_eps at z (spatial fields innermost, drift outermost).
    double derivative(const IntrinsicIndex& idx, const GroupPoint& z) const {
        const std::vector<Term>& terms = expansion(idx);
        // A derivative of the compactly supported mollifier integrates to
        // zero, so any constant may be subtracted from the Taylor factor of
        // such a term. Subtracting its center value removes the constant
        // mode, which would otherwise be multiplied by the (small but
        // eps^{-w} amplified) discrete residual of that zero integral.
        std::vector<double> center(terms.size(), 0.0);
        for (size_t k = 0; k < terms.size(); ++k)
            if (terms[k].phi_y > 0 || multi_abs(terms[k].phi_beta) > 0)
                center[k] = taylor_eval(*g_, terms[k].table, z, z);
        double sum = 0.0;
        for (size_t q = 0; q < quad_.nodes.size(); ++q) {
            const GroupPoint& zbar = quad_.nodes[q];
            const GroupPoint zeta = g_->compose(z, g_->inverse(g_->dilate(eps_, zbar)));
            double node_sum = 0.0;
            for (size_t k = 0; k < terms.size(); ++k) {
                const Term& term = terms[k];
                const double phi_val = mollifier_deriv(*g_, spec_, term.phi_y, term.phi_beta, zbar);
                if (phi_val == 0.0)
                    continue;
                node_sum += term.coeff * term.eps_scale * phi_val *
                            (taylor_eval(*g_, term.table, zeta, z) - center[k]);
            }
            sum += quad_.weights[q] * node_sum;
        }
        return sum;
    }

    /// Oracle view of u_eps for the norm estimators. Spatial derivatives may
    /// not follow a drift derivative (that composition is not needed by the
    /// recursive norms and is rejected).
    DerivativeOracle oracle(int order) const {
        auto self = std::make_shared<MollifiedFunction>(*this);
        return make_oracle(self, {0, MultiIndex(g_->d(), 0)}, order);
    }

private:
    struct Term {
        double coeff = 1.0;
        IntrinsicIndex inner;    // derivative of u inside the Taylor factor
        int taylor_order = 0;
        int phi_y = 0;
        MultiIndex phi_beta;
        int eps_pow = 0;
        double eps_scale = 1.0;
        DerivativeTable table;
    };

    static DerivativeOracle make_oracle(std::shared_ptr<MollifiedFunction> mf, IntrinsicIndex idx,
                                        int order) {
        DerivativeOracle o;
        o.order = order;
        o.value = [mf, idx](const GroupPoint& z) { return mf->derivative(idx, z); };
        o.dx = [mf, idx, order](int i) {
            if (idx.k > 0)
                throw IncompleteOracleError(
                    "mollified oracle: spatial derivative after drift derivative unsupported");
            const int w = mf->g_->spatial_exponent(i - 1);
            if (order < w)
                throw IncompleteOracleError("mollified oracle: order exhausted");
            IntrinsicIndex next = idx;
            next.beta[i - 1] += 1;
            return make_oracle(mf, std::move(next), order - w);
        };
        o.dy = [mf, idx, order]() {
            if (order < 2)
                throw IncompleteOracleError("mollified oracle: order exhausted");
            IntrinsicIndex next = idx;
            next.k += 1;
            return make_oracle(mf, std::move(next), order - 2);
        };
        return o;
    }

    const std::vector<Term>& expansion(const IntrinsicIndex& idx) const {
        const auto key = std::make_pair(idx.k, idx.beta);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;

        std::vector<Term> terms;
        Term base;
        base.inner = {0, MultiIndex(g_->d(), 0)};
        base.taylor_order = n_;
        base.phi_beta = MultiIndex(g_->d(), 0);
        terms.push_back(std::move(base));

        for (int i = 0; i < g_->d(); ++i)
            for (int rep = 0; rep < idx.beta[i]; ++rep)
                terms = apply_dx(std::move(terms), i + 1);
        for (int rep = 0; rep < idx.k; ++rep)
            terms = apply_dy(std::move(terms));

        for (Term& term : terms) {
            term.eps_scale = std::pow(eps_, -term.eps_pow);
            term.table = build_derivative_table(*g_, derive(u_, term.inner), term.taylor_order);
        }
        auto [pos, ok] = cache_.emplace(key, std::move(terms));
        (void)ok;
        return pos->second;
    }

    std::vector<Term> apply_dx(std::vector<Term> in, int i) const {
        if (i > g_->p0())
            throw FieldIndexOutOfRangeError(
                "mollified derivative: only the fields d_{x_1}..d_{x_p0} and Y are intrinsic");
        const int w = g_->spatial_exponent(i - 1);
        std::vector<Term> out;
        for (const Term& term : in) {
            // Taylor branch: d_i T_m(v) = T_{m-1}(d_i v); T_0 is constant in z.
            if (term.taylor_order >= 1) {
                Term t = term;
                t.taylor_order -= 1;
                t.inner.beta[i - 1] += 1;
                out.push_back(std::move(t));
            }
            // Mollifier branch: one eps^{-w} per the dilation scaling.
            if (term.phi_y == 0) {
                Term t = term;
                t.phi_beta[i - 1] += 1;
                t.eps_pow += w;
                out.push_back(std::move(t));
            } else {
                // d_i (Y psi) = Y (d_i psi) + sum_m B_{mi} d_m psi.
                Term t = term;
                t.phi_beta[i - 1] += 1;
                t.eps_pow += w;
                out.push_back(t);
                for (int m = 0; m < g_->d(); ++m) {
                    const double c = g_->B()(m, i - 1);
                    if (c == 0.0)
                        continue;
                    Term tc = term;
                    tc.coeff *= c;
                    tc.phi_y = 0;
                    tc.phi_beta[m] += 1;
                    tc.eps_pow += w;
                    out.push_back(std::move(tc));
                }
            }
        }
        return out;
    }

    std::vector<Term> apply_dy(std::vector<Term> in) const {
        std::vector<Term> out;
        for (const Term& term : in) {
            // Taylor branch: Y T_m(v) = T_{m-2}(Yv); T_0, T_1 are drift-constant.
            if (term.taylor_order >= 2) {
                Term t = term;
                t.taylor_order -= 2;
                t.inner.k += 1;
                out.push_back(std::move(t));
            }
            if (term.phi_y >= 1)
                throw IndexOutOfRangeError(
                    "mollified derivative: second drift derivative on the mollifier unsupported");
            Term t = term;
            t.phi_y = 1;
            t.eps_pow += 2;
            out.push_back(std::move(t));
        }
        return out;
    }

    const HomogeneousGroup* g_;
    DerivativeOracle u_;
    int n_;
    double eps_;
    MollifierSpec spec_;
    Quadrature quad_;
    mutable std::map<std::pair<int, MultiIndex>, std::vector<Term>> cache_;
};

/// Pointwise mollified value u_eps^{(n)}(z).
inline double approximate(const HomogeneousGroup& g, const DerivativeOracle& u, int n, double eps,
                          const GroupPoint& z, const MollifierSpec& spec,
                          const QuadratureSpec& quad) {
    return MollifiedFunction(g, u, n, eps, spec, quad).value(z);
}

/// Pointwise intrinsic derivative Y^k d^beta u_eps^{(n)}(z).
inline double approximate_derivative(const HomogeneousGroup& g, const DerivativeOracle& u, int n,
                                     double eps, const IntrinsicIndex& idx, const GroupPoint& z,
                                     const MollifierSpec& spec, const QuadratureSpec& quad) {
    return MollifiedFunction(g, u, n, eps, spec, quad).derivative(idx, z);
}

} // namespace kolm
