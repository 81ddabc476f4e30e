#pragma once

#include <vector>

#include "kolm/group.hpp"

namespace kolm {

enum class QuadMethod { TanhSinh, GaussLegendre, QuasiRandom };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::TanhSinh;
    int points_per_axis = 16;   // tensor rules
    long total_points = 200000; // quasi-random
    double tolerance = 1e-8;    // target on the normalization integral
};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // Tricomi initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

/// Van der Corput radical inverse for Halton sequences.
inline double radical_inverse(long i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

/// Precomputed nodes and weights over a centered box of per-coordinate
/// half-widths (time first). Node points are GroupPoints of the group's
/// spatial dimension.
struct Quadrature {
    std::vector<GroupPoint> nodes;
    std::vector<double> weights;
};

/// Per-axis nodes/weights on [-1, 1] for the tensor rules. The tanh-sinh
/// rule (midpoint under a double-exponential substitution) handles the
/// infinitely flat endpoint decay of the bump profile far better than
/// plain Gauss-Legendre.
inline void axis_rule(QuadMethod method, int n, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    if (method == QuadMethod::GaussLegendre) {
        gauss_legendre(n, nodes, weights);
        return;
    }
    const double c = 1.5;
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double h = 2.0 / n;
    for (int i = 0; i < n; ++i) {
        const double xi = -1.0 + (i + 0.5) * h;
        const double sh = std::sinh(c * xi);
        nodes[i] = std::tanh(sh);
        const double ch = std::cosh(sh);
        weights[i] = h * c * std::cosh(c * xi) / (ch * ch);
    }
}

inline Quadrature build_quadrature(int d, const Eigen::VectorXd& half_widths,
                                   const QuadratureSpec& spec, int points_override = 0) {
    const int dims = d + 1;
    Quadrature q;
    if (spec.method != QuadMethod::QuasiRandom) {
        const int n = (points_override > 0) ? points_override : spec.points_per_axis;
        std::vector<double> gl_nodes, gl_weights;
        axis_rule(spec.method, n, gl_nodes, gl_weights);
        long total = 1;
        for (int c = 0; c < dims; ++c)
            total *= n;
        q.nodes.reserve(total);
        q.weights.reserve(total);
        std::vector<int> idx(dims, 0);
        for (long flat = 0; flat < total; ++flat) {
            GroupPoint z{0.0, Eigen::VectorXd(d)};
            double w = 1.0;
            long rem = flat;
            for (int c = 0; c < dims; ++c) {
                const int j = static_cast<int>(rem % n);
                rem /= n;
                const double h = half_widths[c];
                const double coord = h * gl_nodes[j];
                w *= h * gl_weights[j];
                if (c == 0)
                    z.t = coord;
                else
                    z.x[c - 1] = coord;
            }
            q.nodes.push_back(std::move(z));
            q.weights.push_back(w);
        }
    } else {
        static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
        const long total = (points_override > 0) ? points_override : spec.total_points;
        double vol = 1.0;
        for (int c = 0; c < dims; ++c)
            vol *= 2.0 * half_widths[c];
        const double w = vol / total;
        q.nodes.reserve(total);
        q.weights.assign(total, w);
        for (long i = 0; i < total; ++i) {
            GroupPoint z{0.0, Eigen::VectorXd(d)};
            for (int c = 0; c < dims; ++c) {
                const double u = radical_inverse(i + 1, primes[c % 10]);
                const double coord = half_widths[c] * (2.0 * u - 1.0);
                if (c == 0)
                    z.t = coord;
                else
                    z.x[c - 1] = coord;
            }
            q.nodes.push_back(std::move(z));
        }
    }
    return q;
}

} // namespace kolm
