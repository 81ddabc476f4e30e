#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "kolm/config.hpp"

namespace kolm {

/// One checked quantity: pass iff lo <= value <= hi.
struct Assertion {
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
};

inline Assertion check_le(const std::string& name, double value, double bound) {
    return {name, value, -1e308, bound, value <= bound};
}

inline Assertion check_near(const std::string& name, double value, double target, double tol) {
    return {name, value, target - tol, target + tol, std::abs(value - target) <= tol};
}

inline Assertion check_true(const std::string& name, bool ok) {
    return {name, ok ? 1.0 : 0.0, 1.0, 1.0, ok};
}

/// A per-suite CSV artifact; cells are preformatted so serialization is
/// byte-stable.
struct CsvTable {
    std::string filename;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Assertion> assertions;
    std::vector<CsvTable> tables;

    bool pass() const {
        for (const auto& a : assertions)
            if (!a.pass)
                return false;
        return true;
    }
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Deterministic static partition over worker threads; slot i is always
/// computed by the same pure task, so results are thread-count invariant.
inline void parallel_for(int n_tasks, int n_threads, const std::function<void(int)>& task) {
    if (n_threads <= 1 || n_tasks <= 1) {
        for (int i = 0; i < n_tasks; ++i)
            task(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1))
            task(i);
    };
    std::vector<std::thread> pool;
    const int used = std::min(n_threads, n_tasks);
    pool.reserve(used);
    for (int w = 0; w < used; ++w)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
}

inline double point_diff(const GroupPoint& a, const GroupPoint& b) {
    double m = std::abs(a.t - b.t);
    for (int i = 0; i < a.x.size(); ++i)
        m = std::max(m, std::abs(a.x[i] - b.x[i]));
    return m;
}

inline GroupPoint random_point(std::mt19937_64& rng, int d, double half_t, double half_x) {
    GroupPoint z{uniform(rng, -half_t, half_t), Eigen::VectorXd(d)};
    for (int i = 0; i < d; ++i)
        z.x[i] = uniform(rng, -half_x, half_x);
    return z;
}

/// Random sparse polynomial with dyadic coefficients and intrinsic degree
/// at most max_order, so algebraic identities can be checked near machine
/// precision.
inline PolyFunction random_polynomial(const HomogeneousGroup& g, int max_order,
                                      std::mt19937_64& rng) {
    const auto idxs = enumerate_indices(g, max_order);
    const int n_terms = 1 + static_cast<int>(rng() % 5);
    PolyFunction p(g.d());
    for (int t = 0; t < n_terms; ++t) {
        const auto& idx = idxs[rng() % idxs.size()];
        int num = static_cast<int>(rng() % 65) - 32;
        if (num == 0)
            num = 1;
        p.add_term(idx.k, idx.beta, num / 16.0);
    }
    if (p.is_zero())
        return PolyFunction::constant(g.d(), 1.0);
    return p;
}

} // namespace detail

inline SuiteResult run_group_axioms(const ExperimentConfig& c) {
    SuiteResult res{"group-axioms", c.seed, {}, {}};
    const HomogeneousGroup g{c.group};
    std::mt19937_64 rng(c.seed);

    const int n_triples = 10000;
    double assoc = 0.0, ident = 0.0, inv = 0.0;
    double dil_flow = 0.0, left_inv = 0.0, homog = 0.0;
    for (int s = 0; s < n_triples; ++s) {
        const GroupPoint z = detail::random_point(rng, g.d(), 2.0, 3.0);
        const GroupPoint w = detail::random_point(rng, g.d(), 2.0, 3.0);
        const GroupPoint v = detail::random_point(rng, g.d(), 2.0, 3.0);
        assoc = std::max(assoc, detail::point_diff(g.compose(g.compose(z, w), v),
                                                   g.compose(z, g.compose(w, v))));
        ident = std::max(ident, detail::point_diff(g.compose(z, g.identity()), z));
        ident = std::max(ident, detail::point_diff(g.compose(g.identity(), z), z));
        inv = std::max(inv, detail::point_diff(g.compose(z, g.inverse(z)), g.identity()));
        inv = std::max(inv, detail::point_diff(g.compose(g.inverse(z), z), g.identity()));

        const double lambda = std::exp(detail::uniform(rng, std::log(0.5), std::log(2.0)));
        const double delta = detail::uniform(rng, -2.0, 2.0);
        for (int i = 1; i <= g.p0(); ++i)
            dil_flow = std::max(
                dil_flow,
                detail::point_diff(g.dilate(lambda, g.flow_coordinate(i, delta, z)),
                                   g.flow_coordinate(i, lambda * delta, g.dilate(lambda, z))));
        dil_flow = std::max(
            dil_flow, detail::point_diff(g.dilate(lambda, g.flow_Y(delta, z)),
                                         g.flow_Y(lambda * lambda * delta, g.dilate(lambda, z))));
        for (int i = 1; i <= g.p0(); ++i)
            left_inv = std::max(
                left_inv, detail::point_diff(g.compose(w, g.flow_coordinate(i, delta, z)),
                                             g.flow_coordinate(i, delta, g.compose(w, z))));
        left_inv = std::max(left_inv, detail::point_diff(g.compose(w, g.flow_Y(delta, z)),
                                                         g.flow_Y(delta, g.compose(w, z))));

        const double qn = g.quasi_norm(z);
        if (qn > 0.0)
            homog = std::max(homog, std::abs(g.quasi_norm(g.dilate(lambda, z)) - lambda * qn) /
                                        (lambda * qn));
    }

    const double nilpotency = (g.B() * g.b_power(g.r())).cwiseAbs().maxCoeff();
    double det_err = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const double delta = detail::uniform(rng, -10.0, 10.0);
        det_err = std::max(det_err, std::abs(g.exp_B(delta).determinant() - 1.0));
    }

    res.assertions.push_back(check_le("associativity_max_error", assoc, 1e-10));
    res.assertions.push_back(check_le("identity_max_error", ident, 1e-10));
    res.assertions.push_back(check_le("inverse_max_error", inv, 1e-10));
    res.assertions.push_back(check_le("drift_nilpotency_max_entry", nilpotency, 0.0));
    res.assertions.push_back(check_le("exp_determinant_max_error", det_err, 1e-10));
    res.assertions.push_back(check_le("dilation_flow_max_error", dil_flow, 1e-10));
    res.assertions.push_back(check_le("left_invariance_max_error", left_inv, 1e-10));
    res.assertions.push_back(check_le("quasi_norm_homogeneity_rel_error", homog, 1e-12));

    if (g.d() == 2 && g.r() == 1 && g.B()(1, 0) == 1.0) {
        // Closed-form increment norm for the kinetic d = 2 group.
        double inc = 0.0;
        for (int s = 0; s < n_triples; ++s) {
            const GroupPoint z = detail::random_point(rng, 2, 2.0, 3.0);
            const GroupPoint zeta = detail::random_point(rng, 2, 2.0, 3.0);
            const double tau = z.t - zeta.t;
            const double expected = std::sqrt(std::abs(tau)) + std::abs(z.x[0] - zeta.x[0]) +
                                    std::cbrt(std::abs(z.x[1] - zeta.x[1] - tau * zeta.x[0]));
            const double got = g.quasi_norm(g.compose(g.inverse(zeta), z));
            inc = std::max(inc, std::abs(got - expected));
        }
        res.assertions.push_back(check_le("kinetic_increment_norm_max_error", inc, 1e-12));
    }

    CsvTable table{"group_axioms.csv", {"check", "max_error"}, {}};
    for (const auto& a : res.assertions)
        table.rows.push_back({a.name, detail::fmt(a.value)});
    res.tables.push_back(std::move(table));
    return res;
}

inline SuiteResult run_taylor_identities(const ExperimentConfig& c) {
    SuiteResult res{"taylor-identities", c.seed, {}, {}};
    const HomogeneousGroup g{c.group};
    std::mt19937_64 rng(c.seed);

    CsvTable exchange_table{"taylor_exchange.csv", {"trial", "order", "discrepancy"}, {}};
    double exchange_max = 0.0;
    for (int trial = 0; trial < c.taylor_n_polys; ++trial) {
        const int n = 1 + static_cast<int>(rng() % c.taylor_order_max);
        const PolyFunction p = detail::random_polynomial(g, c.taylor_order_max, rng);
        const ExchangeReport rep = check_exchange_identities(g, p, n, rng(), 2);
        exchange_max = std::max(exchange_max, rep.max());
        exchange_table.rows.push_back({std::to_string(trial), std::to_string(n),
                                       detail::fmt(rep.max())});
    }
    res.assertions.push_back(check_le("exchange_identity_max_discrepancy", exchange_max, 1e-9));

    double reproduction_max = 0.0;
    for (int trial = 0; trial < c.taylor_n_polys; ++trial) {
        const int n = 1 + static_cast<int>(rng() % c.taylor_order_max);
        const PolyFunction p = detail::random_polynomial(g, n, rng);
        GroupPoint zeta{(static_cast<int>(rng() % 65) - 32) / 16.0, Eigen::VectorXd(g.d())};
        for (int i = 0; i < g.d(); ++i)
            zeta.x[i] = (static_cast<int>(rng() % 65) - 32) / 16.0;
        const PolyFunction tn =
            taylor_polynomial(g, make_polynomial_oracle(g, p, n), n, zeta);
        reproduction_max = std::max(reproduction_max, PolyFunction::max_coeff_diff(tn, p));
    }
    res.assertions.push_back(
        check_le("polynomial_reproduction_max_coeff_error", reproduction_max, 1e-9));

    // Remainder growth of the second order expansion of a smooth bump:
    // |u - T_2 u| / |increment|^3 stays below a frozen constant.
    {
        const DerivativeOracle u = bump_profile(g, 2.0, 3);
        const DerivativeTable table = build_derivative_table(g, u, 2);
        double ratio_max = 0.0;
        for (int s = 0; s < 10000; ++s) {
            const GroupPoint zeta = detail::random_point(rng, g.d(), 1.0, 2.0);
            const GroupPoint z = detail::random_point(rng, g.d(), 1.0, 2.0);
            const double inc = g.quasi_norm(g.compose(g.inverse(zeta), z));
            if (inc == 0.0)
                continue;
            const double rem = std::abs(u.value(z) - taylor_eval(g, table, zeta, z));
            ratio_max = std::max(ratio_max, rem / (inc * inc * inc));
        }
        res.assertions.push_back(
            check_le("remainder_witness_constant", ratio_max, c.remainder_bound));
    }

    res.tables.push_back(std::move(exchange_table));
    return res;
}

inline SuiteResult run_approx_rates(const ExperimentConfig& c) {
    SuiteResult res{"approx-rates", c.seed, {}, {}};
    const HomogeneousGroup g{c.group};
    const MollifierSpec spec = build_mollifier(g, c.quadrature);
    const SamplingPlan base_plan = make_plan(c, g.d(), c.seed);

    int fi = 0;
    for (const auto& entry : c.corpus) {
        const CorpusFunction f = parse_corpus_function(g, entry);
        const int n = f.reg_n;
        const double alpha = f.reg_alpha;
        const int n_eps = static_cast<int>(c.eps_grid.size());

        // norms[e] holds the l = 0..n error norms followed by the order
        // n+1 norm of the approximant itself.
        std::vector<std::vector<double>> norms(n_eps, std::vector<double>(n + 2, 0.0));
        detail::parallel_for(n_eps, c.threads, [&](int e) {
            const double eps = c.eps_grid[e];
            MollifiedFunction mf(g, f.oracle, n, eps, spec, c.quadrature);
            const DerivativeOracle ueps = mf.oracle(n + 1);
            const DerivativeOracle diff = oracle_sub(f.oracle, ueps);
            for (int l = 0; l <= n; ++l)
                norms[e][l] = holder_norm(
                    g, diff, l, 0.0,
                    base_plan.with_seed(detail::mix_seed(c.seed, 64 * fi + l)));
            norms[e][n + 1] = holder_norm(
                g, ueps, n + 1, 0.0,
                base_plan.with_seed(detail::mix_seed(c.seed, 64 * fi + n + 1)));
        });

        CsvTable table{"rates_" + f.name + ".csv", {"eps"}, {}};
        for (int l = 0; l <= n; ++l)
            table.header.push_back("err_norm_l" + std::to_string(l));
        table.header.push_back("approx_norm_l" + std::to_string(n + 1));
        for (int e = 0; e < n_eps; ++e) {
            std::vector<std::string> row{detail::fmt(c.eps_grid[e])};
            for (double v : norms[e])
                row.push_back(detail::fmt(v));
            table.rows.push_back(std::move(row));
        }
        res.tables.push_back(std::move(table));

        for (int l = 0; l <= n + 1; ++l) {
            std::vector<std::pair<double, double>> pts;
            for (int e = 0; e < n_eps; ++e)
                pts.emplace_back(c.eps_grid[e], norms[e][l]);
            const RateFit fit = rate_fit(pts);
            const double expected = (l <= n) ? (n + alpha - l) : (alpha - 1.0);
            const double tol = (l <= n) ? c.slope_tol : c.slope_tol_high;
            res.assertions.push_back(check_near(
                f.name + "_slope_l" + std::to_string(l), fit.slope, expected, tol));
        }
        ++fi;
    }
    if (res.assertions.empty())
        throw ValidationError("approx-rates: empty corpus");
    return res;
}

inline SuiteResult run_k_functional(const ExperimentConfig& c) {
    SuiteResult res{"k-functional", c.seed, {}, {}};
    const HomogeneousGroup g{c.group};
    const MollifierSpec spec = build_mollifier(g, c.quadrature);

    std::vector<double> lambdas;
    for (int i = 0; i < c.lambda_count; ++i) {
        const double s = (c.lambda_count == 1)
                             ? 0.0
                             : static_cast<double>(i) / (c.lambda_count - 1);
        lambdas.push_back(std::exp(std::log(c.lambda_min) +
                                   s * (std::log(c.lambda_max) - std::log(c.lambda_min))));
    }

    int fi = 0;
    for (const auto& entry : c.corpus) {
        const CorpusFunction f = parse_corpus_function(g, entry);
        if (!(f.reg_alpha > 0.0) || f.reg_alpha >= 1.0)
            throw ValidationError("k-functional: corpus entry '" + f.name +
                                  "' needs fractional regularity");
        const int n1 = f.reg_n;
        const int n2 = n1 + 1;
        const double theta = f.reg_alpha;
        const SamplingPlan plan =
            make_plan(c, g.d(), detail::mix_seed(c.seed, 1000 + fi));
        KFunctionalEstimator khat(g, f.oracle, n1, n1, n2, c.eps_grid, plan, spec,
                                  c.quadrature);

        CsvTable table{"kfunctional_" + f.name + ".csv", {"lambda", "khat", "khat_scaled"}, {}};
        std::vector<std::pair<double, double>> fit_pts;
        std::vector<double> values;
        double scaled_max = 0.0;
        for (double lambda : lambdas) {
            const double k = khat(lambda);
            const double scaled = k / std::pow(lambda, theta);
            values.push_back(k);
            scaled_max = std::max(scaled_max, scaled);
            if (lambda <= 0.1 && k > 0.0)
                fit_pts.emplace_back(lambda, k);
            table.rows.push_back({detail::fmt(lambda), detail::fmt(k), detail::fmt(scaled)});
        }
        res.tables.push_back(std::move(table));

        const RateFit fit = rate_fit(fit_pts);
        res.assertions.push_back(
            check_near(f.name + "_khat_slope", fit.slope, theta, c.slope_tol));
        res.assertions.push_back(
            check_le(f.name + "_khat_scaled_sup", scaled_max, c.k_ratio_bound));

        double mono_viol = 0.0, concave_viol = 0.0;
        for (size_t i = 1; i < values.size(); ++i)
            mono_viol = std::max(mono_viol, values[i - 1] - values[i]);
        for (size_t i = 2; i < values.size(); ++i) {
            const double s1 = (values[i - 1] - values[i - 2]) / (lambdas[i - 1] - lambdas[i - 2]);
            const double s2 = (values[i] - values[i - 1]) / (lambdas[i] - lambdas[i - 1]);
            concave_viol = std::max(concave_viol, s2 - s1);
        }
        res.assertions.push_back(
            check_le(f.name + "_khat_monotonicity_violation", mono_viol, 1e-9));
        res.assertions.push_back(
            check_le(f.name + "_khat_concavity_violation", concave_viol, 1e-9));
        ++fi;
    }
    if (res.assertions.empty())
        throw ValidationError("k-functional: empty corpus");
    return res;
}

inline SuiteResult run_interpolation_inequality(const ExperimentConfig& c) {
    SuiteResult res{"interpolation-inequality", c.seed, {}, {}};
    const HomogeneousGroup g{c.group};

    CsvTable table{"interpolation_inequality.csv",
                   {"function", "norm_l0", "norm_l1", "norm_l2", "ratio", "ratio_refined"},
                   {}};
    int fi = 0;
    for (const auto& entry : c.corpus) {
        const CorpusFunction f = parse_corpus_function(g, entry);
        const SamplingPlan plan = make_plan(c, g.d(), detail::mix_seed(c.seed, 2000 + fi));
        SamplingPlan doubled = plan;
        doubled.n_base *= 2;
        doubled.n_delta *= 2;

        const InequalityReport rep = interpolation_inequality_check(g, f.oracle, 0, 1, 2, plan);
        const InequalityReport rep2 =
            interpolation_inequality_check(g, f.oracle, 0, 1, 2, doubled);
        res.assertions.push_back(check_near(f.name + "_ratio_refinement_drift",
                                            rep2.ratio / rep.ratio, 1.0, 0.10));

        const InequalityReport reps =
            interpolation_inequality_check(g, oracle_scale(16.0, f.oracle), 0, 1, 2, plan);
        res.assertions.push_back(check_le(f.name + "_scaling_invariance_rel_error",
                                          std::abs(reps.ratio - rep.ratio) /
                                              std::abs(rep.ratio),
                                          1e-13));
        res.assertions.push_back(check_le(f.name + "_interpolation_ratio", rep.ratio,
                                          c.interp_ratio_bound));

        table.rows.push_back({f.name, detail::fmt(rep.norm_n1), detail::fmt(rep.norm_n),
                              detail::fmt(rep.norm_n2), detail::fmt(rep.ratio),
                              detail::fmt(rep2.ratio)});
        ++fi;
    }
    if (table.rows.empty())
        throw ValidationError("interpolation-inequality: empty corpus");
    res.tables.push_back(std::move(table));

    // Exponent arithmetic of the interpolation identity: exact fractional
    // cases and rejection of integer totals.
    {
        const auto [n, a] = theta_alpha_map({0, 2, 0.5, 0.5, 0.3});
        res.assertions.push_back(check_true(
            "theta_alpha_map_exact", n == 1 && std::abs(a - 0.1) <= 1e-12));
        const auto [n2, a2] = theta_alpha_map({1, 2, 0.0, 0.0, 0.5});
        res.assertions.push_back(check_true(
            "theta_alpha_map_midpoint", n2 == 1 && std::abs(a2 - 0.5) <= 1e-12));
        bool degenerate_raised = false;
        try {
            theta_alpha_map({0, 1, 0.5, 0.5, 0.5});
        } catch (const DegenerateAlphaError&) {
            degenerate_raised = true;
        }
        res.assertions.push_back(
            check_true("theta_alpha_map_degenerate_rejected", degenerate_raised));
    }
    return res;
}

inline SuiteResult run_suite(const ExperimentConfig& c) {
    if (c.suite == "group-axioms")
        return run_group_axioms(c);
    if (c.suite == "taylor-identities")
        return run_taylor_identities(c);
    if (c.suite == "approx-rates")
        return run_approx_rates(c);
    if (c.suite == "k-functional")
        return run_k_functional(c);
    if (c.suite == "interpolation-inequality")
        return run_interpolation_inequality(c);
    throw ConfigParseError("unknown suite '" + c.suite + "'");
}

inline json suite_to_json(const SuiteResult& res, const ExperimentConfig& c) {
    json out;
    out["suite"] = res.suite;
    out["seed"] = res.seed;
    json group;
    group["layer_dims"] = c.group.layer_dims;
    json blocks = json::array();
    for (const auto& blk : c.group.blocks) {
        json rows = json::array();
        for (int rr = 0; rr < blk.rows(); ++rr) {
            json row = json::array();
            for (int cc = 0; cc < blk.cols(); ++cc)
                row.push_back(blk(rr, cc));
            rows.push_back(std::move(row));
        }
        blocks.push_back(std::move(rows));
    }
    group["blocks"] = std::move(blocks);
    out["group"] = std::move(group);
    json asserts = json::array();
    for (const auto& a : res.assertions)
        asserts.push_back({{"name", a.name},
                           {"value", a.value},
                           {"lo", a.lo},
                           {"hi", a.hi},
                           {"pass", a.pass}});
    out["assertions"] = std::move(asserts);
    json tables = json::array();
    for (const auto& t : res.tables)
        tables.push_back(t.filename);
    out["tables"] = std::move(tables);
    out["pass"] = res.pass();
    return out;
}

inline void write_outputs(const SuiteResult& res, const ExperimentConfig& c,
                          const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/summary.json");
        out << suite_to_json(res, c).dump(2) << "\n";
    }
    for (const auto& t : res.tables) {
        std::ofstream out(out_dir + "/" + t.filename);
        for (size_t i = 0; i < t.header.size(); ++i)
            out << (i ? "," : "") << t.header[i];
        out << "\n";
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << "\n";
        }
    }
}

} // namespace kolm
