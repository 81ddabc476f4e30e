#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "kolm/oracle.hpp"

namespace kolm {

namespace detail {

/// One uniform double in [0,1) consuming exactly one 64-bit draw, so that
/// sample streams are prefix-stable when a plan is enlarged.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(rng);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Compact-box sampling plan standing in for the sup over the whole space.
/// Estimates are lower bounds of the true sups by construction.
struct SamplingPlan {
    /// Per-coordinate intervals for base points, time interval first
    /// (length d+1).
    std::vector<std::pair<double, double>> base_box;
    double delta_min = 1e-3;
    double delta_max = 1.0;
    int n_base = 64;
    int n_delta = 16;
    /// When positive, coordinate magnitudes are drawn log-uniformly in
    /// [log_scale_min, box half-width] with random sign, so suprema
    /// attained near the coordinate hyperplanes are resolved at all scales.
    double log_scale_min = 0.0;
    std::uint64_t seed = 0;

    long total_samples() const { return static_cast<long>(n_base) * n_delta; }

    SamplingPlan with_seed(std::uint64_t s) const {
        SamplingPlan p = *this;
        p.seed = s;
        return p;
    }

    void validate(int d) const {
        if (n_base < 1 || n_delta < 1)
            throw EmptyPlanError("sampling plan requires at least one base point and increment");
        if (!(delta_min > 0.0) || !(delta_min < delta_max))
            throw EmptyPlanError("sampling plan requires 0 < delta_min < delta_max");
        if (static_cast<int>(base_box.size()) != d + 1)
            throw DimensionMismatchError("sampling plan box has " +
                                         std::to_string(base_box.size()) + " intervals, expected " +
                                         std::to_string(d + 1));
    }
};

/// Centered box |t| <= half_t, |x_i| <= half_x.
inline SamplingPlan default_plan(int d, double half_t = 1.0, double half_x = 2.0) {
    SamplingPlan p;
    p.base_box.emplace_back(-half_t, half_t);
    for (int i = 0; i < d; ++i)
        p.base_box.emplace_back(-half_x, half_x);
    return p;
}

struct SeminormEstimate {
    double value = 0.0;
    GroupPoint witness;
    double witness_delta = 0.0;
    long samples = 0;
};

struct SampleTrace {
    GroupPoint z;
    double delta = 0.0;
    double ratio = 0.0;
};

namespace detail {

inline double draw_coord(std::mt19937_64& rng, const SamplingPlan& plan, double lo, double hi) {
    if (plan.log_scale_min > 0.0) {
        const double half = std::max(std::abs(lo), std::abs(hi));
        const double mag =
            std::exp(uniform(rng, std::log(plan.log_scale_min), std::log(half)));
        const double sign = (unit_uniform(rng) < 0.5) ? -1.0 : 1.0;
        return sign * mag;
    }
    return uniform(rng, lo, hi);
}

inline GroupPoint draw_point(std::mt19937_64& rng, const SamplingPlan& plan, int d) {
    GroupPoint z{0.0, Eigen::VectorXd(d)};
    z.t = draw_coord(rng, plan, plan.base_box[0].first, plan.base_box[0].second);
    for (int i = 0; i < d; ++i)
        z.x[i] = draw_coord(rng, plan, plan.base_box[i + 1].first, plan.base_box[i + 1].second);
    return z;
}

/// Log-uniform magnitude in [delta_min, delta_max], random sign.
inline double draw_delta(std::mt19937_64& rng, const SamplingPlan& plan) {
    const double lg =
        uniform(rng, std::log(plan.delta_min), std::log(plan.delta_max));
    const double sign = (unit_uniform(rng) < 0.5) ? -1.0 : 1.0;
    return sign * std::exp(lg);
}

} // namespace detail

/// Sampled estimate of the seminorm [u]_{C^alpha_X}: the max over drawn
/// (z, delta) of |u(e^{delta X} z) - u(z)| / |delta|^alpha.
inline SeminormEstimate seminorm(const HomogeneousGroup& g,
                                 const std::function<double(const GroupPoint&)>& u,
                                 const Field& field, double alpha, const SamplingPlan& plan,
                                 std::vector<SampleTrace>* trace = nullptr) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw AlphaOutOfRangeError("seminorm: alpha must lie in (0,1], got " +
                                   std::to_string(alpha));
    plan.validate(g.d());
    std::mt19937_64 rng(plan.seed);
    SeminormEstimate est;
    est.witness = g.identity();
    est.samples = plan.total_samples();
    for (long s = 0; s < est.samples; ++s) {
        const GroupPoint z = detail::draw_point(rng, plan, g.d());
        const double delta = detail::draw_delta(rng, plan);
        const double ratio =
            std::abs(u(flow(g, field, delta, z)) - u(z)) / std::pow(std::abs(delta), alpha);
        if (trace)
            trace->push_back({z, delta, ratio});
        if (ratio > est.value) {
            est.value = ratio;
            est.witness = z;
            est.witness_delta = delta;
        }
    }
    return est;
}

/// Sampled sup of |u| over the plan's base box.
inline double sup_abs(const HomogeneousGroup& g,
                      const std::function<double(const GroupPoint&)>& u,
                      const SamplingPlan& plan) {
    plan.validate(g.d());
    std::mt19937_64 rng(plan.seed);
    double sup = 0.0;
    const long total = plan.total_samples();
    for (long s = 0; s < total; ++s)
        sup = std::max(sup, std::abs(u(detail::draw_point(rng, plan, g.d()))));
    return sup;
}

/// Sampled estimate of the recursive intrinsic norm ||u||_{C^{n,alpha}_B}.
/// The drift-field exponents alpha/2 (order 0) and (1+alpha)/2 (order 1)
/// are fixed here, not caller-supplied.
inline double holder_norm(const HomogeneousGroup& g, const DerivativeOracle& u, int n,
                          double alpha, const SamplingPlan& plan) {
    if (alpha < 0.0 || alpha > 1.0)
        throw AlphaOutOfRangeError("holder_norm: alpha must lie in [0,1], got " +
                                   std::to_string(alpha));
    if (n < 0)
        throw OrderViolationError("holder_norm: negative order");
    if (u.order < n)
        throw IncompleteOracleError("holder_norm: oracle order " + std::to_string(u.order) +
                                    " below requested norm order " + std::to_string(n));
    plan.validate(g.d());

    double norm = sup_abs(g, u.value, plan.with_seed(detail::mix_seed(plan.seed, 0)));
    if (n == 0) {
        if (alpha == 0.0)
            return norm;
        norm += seminorm(g, u.value, Field::Y(), alpha / 2.0,
                         plan.with_seed(detail::mix_seed(plan.seed, 1)))
                    .value;
        for (int i = 1; i <= g.p0(); ++i)
            norm += seminorm(g, u.value, Field::dx(i), alpha,
                             plan.with_seed(detail::mix_seed(plan.seed, 1 + i)))
                        .value;
        return norm;
    }
    if (n == 1) {
        norm += seminorm(g, u.value, Field::Y(), (1.0 + alpha) / 2.0,
                         plan.with_seed(detail::mix_seed(plan.seed, 1)))
                    .value;
        for (int i = 1; i <= g.p0(); ++i)
            norm += holder_norm(g, u.dx(i), 0, alpha,
                                plan.with_seed(detail::mix_seed(plan.seed, 100 + i)));
        return norm;
    }
    norm += holder_norm(g, u.dy(), n - 2, alpha, plan.with_seed(detail::mix_seed(plan.seed, 50)));
    for (int i = 1; i <= g.p0(); ++i)
        norm += holder_norm(g, u.dx(i), n - 1, alpha,
                            plan.with_seed(detail::mix_seed(plan.seed, 100 + i)));
    return norm;
}

} // namespace kolm
