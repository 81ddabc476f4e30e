#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "kolm/group.hpp"

namespace kolm {

/// Exact sparse polynomial on R^{1+d} in the variables (t, x_1..x_d).
/// A term is keyed by (time power k, spatial multi-index beta).
/// Immutable in spirit: every operation returns a new value.
class PolyFunction {
public:
    using Key = std::pair<int, MultiIndex>;
    using TermMap = std::map<Key, double>;

    explicit PolyFunction(int dim) : dim_(dim) {}

    static PolyFunction zero(int dim) { return PolyFunction(dim); }

    static PolyFunction constant(int dim, double c) {
        PolyFunction p(dim);
        p.add_term(0, MultiIndex(dim, 0), c);
        return p;
    }

    /// Monomial c * t^k * x^beta.
    static PolyFunction monomial(int dim, int k, MultiIndex beta, double c) {
        PolyFunction p(dim);
        p.add_term(k, std::move(beta), c);
        return p;
    }

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(int k, MultiIndex beta, double c) {
        if (c == 0.0)
            return;
        auto key = Key{k, std::move(beta)};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), c);
        } else {
            it->second += c;
            if (it->second == 0.0)
                terms_.erase(it);
        }
    }

    PolyFunction operator+(const PolyFunction& o) const {
        check_same_dim(o);
        PolyFunction out = *this;
        for (const auto& [key, c] : o.terms_)
            out.add_term(key.first, key.second, c);
        return out;
    }

    PolyFunction operator-(const PolyFunction& o) const { return *this + o.scaled(-1.0); }

    PolyFunction scaled(double c) const {
        PolyFunction out(dim_);
        if (c == 0.0)
            return out;
        for (const auto& [key, a] : terms_)
            out.terms_.emplace(key, c * a);
        return out;
    }

    PolyFunction operator*(const PolyFunction& o) const {
        check_same_dim(o);
        PolyFunction out(dim_);
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_) {
                MultiIndex beta = ka.second;
                for (int i = 0; i < dim_; ++i)
                    beta[i] += kb.second[i];
                out.add_term(ka.first + kb.first, std::move(beta), ca * cb);
            }
        return out;
    }

    double eval(const GroupPoint& z) const {
        if (z.x.size() != dim_)
            throw DimensionMismatchError("poly_eval: point dimension mismatch");
        double sum = 0.0;
        for (const auto& [key, c] : terms_) {
            double term = c * int_pow(z.t, key.first);
            for (int i = 0; i < dim_; ++i)
                term *= int_pow(z.x[i], key.second[i]);
            sum += term;
        }
        return sum;
    }

    /// Formal partial derivative in x_i, i 1-based.
    PolyFunction partial(int i) const {
        if (i < 1 || i > dim_)
            throw IndexOutOfRangeError("poly_partial: coordinate index " + std::to_string(i) +
                                       " out of range [1," + std::to_string(dim_) + "]");
        PolyFunction out(dim_);
        for (const auto& [key, c] : terms_) {
            const int b = key.second[i - 1];
            if (b == 0)
                continue;
            MultiIndex beta = key.second;
            beta[i - 1] -= 1;
            out.add_term(key.first, std::move(beta), c * b);
        }
        return out;
    }

    /// Formal partial derivative in t.
    PolyFunction partial_t() const {
        PolyFunction out(dim_);
        for (const auto& [key, c] : terms_)
            if (key.first > 0)
                out.add_term(key.first - 1, key.second, c * key.first);
        return out;
    }

    /// Largest absolute coefficient difference, over the union of term keys.
    static double max_coeff_diff(const PolyFunction& a, const PolyFunction& b) {
        a.check_same_dim(b);
        double m = 0.0;
        for (const auto& [key, c] : a.terms_) {
            auto it = b.terms_.find(key);
            const double other = (it == b.terms_.end()) ? 0.0 : it->second;
            m = std::max(m, std::abs(c - other));
        }
        for (const auto& [key, c] : b.terms_)
            if (a.terms_.find(key) == a.terms_.end())
                m = std::max(m, std::abs(c));
        return m;
    }

private:
    static double int_pow(double v, int e) {
        double r = 1.0;
        for (int j = 0; j < e; ++j)
            r *= v;
        return r;
    }

    void check_same_dim(const PolyFunction& o) const {
        if (dim_ != o.dim_)
            throw DimensionMismatchError("polynomial dimensions differ");
    }

    int dim_;
    TermMap terms_;
};

/// Drift derivative Yp = <Bx, grad p> + d_t p, exact.
inline PolyFunction poly_Y(const HomogeneousGroup& g, const PolyFunction& p) {
    if (p.dim() != g.d())
        throw DimensionMismatchError("poly_Y: polynomial dimension mismatch");
    PolyFunction out = p.partial_t();
    const Eigen::MatrixXd& B = g.B();
    for (int row = 0; row < g.d(); ++row)
        for (int col = 0; col < g.d(); ++col)
            if (B(row, col) != 0.0) {
                // (Bx)_row d_{x_row} p contributes B(row,col) * x_col * d_{x_row} p.
                MultiIndex e(g.d(), 0);
                e[col] = 1;
                out = out + PolyFunction::monomial(g.d(), 0, std::move(e), B(row, col)) *
                                p.partial(row + 1);
            }
    return out;
}

/// Intrinsic B-degree of a polynomial: max over terms of 2k + |beta|_B.
inline int intrinsic_degree(const HomogeneousGroup& g, const PolyFunction& p) {
    int deg = 0;
    for (const auto& [key, c] : p.terms())
        deg = std::max(deg, 2 * key.first + g.b_length(key.second));
    return deg;
}

/// All intrinsic indices (k, beta) with 2k + |beta|_B <= n, ordered by
/// ascending intrinsic order, then lexicographic beta, then k.
inline std::vector<IntrinsicIndex> enumerate_indices(const HomogeneousGroup& g, int n) {
    std::vector<IntrinsicIndex> out;
    MultiIndex beta(g.d(), 0);
    // Depth-first enumeration of all beta with |beta|_B <= n.
    auto recurse = [&](auto&& self, int coord, int blen) -> void {
        if (coord == g.d()) {
            for (int k = 0; 2 * k + blen <= n; ++k)
                out.push_back({k, beta});
            return;
        }
        const int w = g.spatial_exponent(coord);
        for (int b = 0; blen + b * w <= n; ++b) {
            beta[coord] = b;
            self(self, coord + 1, blen + b * w);
        }
        beta[coord] = 0;
    };
    recurse(recurse, 0, 0);
    std::sort(out.begin(), out.end(), [&](const IntrinsicIndex& a, const IntrinsicIndex& b) {
        const int oa = g.intrinsic_order(a);
        const int ob = g.intrinsic_order(b);
        if (oa != ob)
            return oa < ob;
        if (a.beta != b.beta)
            return a.beta < b.beta;
        return a.k < b.k;
    });
    return out;
}

} // namespace kolm
