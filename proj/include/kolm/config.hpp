#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "kolm/interp.hpp"
#include "kolm/profiles.hpp"

namespace kolm {

using nlohmann::json;

/// A corpus entry: an oracle plus its certified intrinsic regularity
/// (n, alpha), used by the rate-fitting suites.
struct CorpusFunction {
    std::string name;
    DerivativeOracle oracle;
    int reg_n = 0;
    double reg_alpha = 0.0;
    bool smooth = false; // all derivatives available
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::string suite;
    BlockStructure group;
    json corpus = json::array();
    // sampling
    double half_t = 1.0;
    double half_x = 2.0;
    double delta_min = 0.01;
    double delta_max = 1.0;
    int n_base = 48;
    int n_delta = 12;
    double log_scale_min = 0.0;
    // quadrature
    QuadratureSpec quadrature;
    // grids
    std::vector<double> eps_grid;
    double lambda_min = 1e-3;
    double lambda_max = 10.0;
    int lambda_count = 25;
    // taylor suite
    int taylor_order_max = 6;
    int taylor_n_polys = 100;
    // tolerances and frozen regression bounds for the rate suites
    double slope_tol = 0.1;
    double slope_tol_high = 0.15;
    double remainder_bound = 1e6;
    double k_ratio_bound = 1e6;
    double interp_ratio_bound = 1e6;
    // set from the command line, not the config file
    int threads = 1;
};

inline const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s = {"group-axioms", "taylor-identities",
                                               "approx-rates", "k-functional",
                                               "interpolation-inequality"};
    return s;
}

namespace detail {

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigParseError("field '" + key + "': " + e.what());
    }
}

} // namespace detail

inline BlockStructure parse_block_structure(const json& j) {
    BlockStructure s;
    if (!j.contains("layer_dims"))
        throw ConfigParseError("group: missing layer_dims");
    for (const auto& v : j.at("layer_dims")) {
        const int p = v.get<int>();
        if (p < 1)
            throw ConfigParseError("group: layer dims must be positive integers");
        s.layer_dims.push_back(p);
    }
    for (const auto& blk : detail::get_or<json>(j, "blocks", json::array())) {
        const size_t rows = blk.size();
        if (rows == 0)
            throw ConfigParseError("group: empty block");
        const size_t cols = blk.at(0).size();
        Eigen::MatrixXd m(rows, cols);
        for (size_t rr = 0; rr < rows; ++rr) {
            if (blk.at(rr).size() != cols)
                throw ConfigParseError("group: ragged block rows");
            for (size_t cc = 0; cc < cols; ++cc)
                m(rr, cc) = blk.at(rr).at(cc).get<double>();
        }
        s.blocks.push_back(std::move(m));
    }
    return s;
}

inline QuadratureSpec parse_quadrature(const json& j) {
    QuadratureSpec q;
    const std::string method = detail::get_or<std::string>(j, "method", "tanh-sinh");
    if (method == "tanh-sinh")
        q.method = QuadMethod::TanhSinh;
    else if (method == "gauss-legendre")
        q.method = QuadMethod::GaussLegendre;
    else if (method == "quasi-random")
        q.method = QuadMethod::QuasiRandom;
    else
        throw ConfigParseError("quadrature: unknown method '" + method + "'");
    q.points_per_axis = detail::get_or<int>(j, "points_per_axis", 16);
    q.total_points = detail::get_or<long>(j, "total_points", 200000);
    q.tolerance = detail::get_or<double>(j, "tolerance", 1e-8);
    if (q.points_per_axis < 2)
        throw ConfigParseError("quadrature: points_per_axis must be >= 2");
    return q;
}

inline ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    if (!j.contains("seed"))
        throw ConfigParseError("missing mandatory field 'seed'");
    c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.contains("suite"))
        throw ConfigParseError("missing mandatory field 'suite'");
    c.suite = j.at("suite").get<std::string>();
    bool found = false;
    for (const auto& s : known_suites())
        found = found || (s == c.suite);
    if (!found)
        throw ConfigParseError("unknown suite '" + c.suite + "'");
    if (!j.contains("group"))
        throw ConfigParseError("missing mandatory field 'group'");
    c.group = parse_block_structure(j.at("group"));
    c.corpus = detail::get_or<json>(j, "corpus", json::array());

    const json plan = detail::get_or<json>(j, "plan", json::object());
    c.half_t = detail::get_or<double>(plan, "half_t", c.half_t);
    c.half_x = detail::get_or<double>(plan, "half_x", c.half_x);
    c.delta_min = detail::get_or<double>(plan, "delta_min", c.delta_min);
    c.delta_max = detail::get_or<double>(plan, "delta_max", c.delta_max);
    c.n_base = detail::get_or<int>(plan, "n_base", c.n_base);
    c.n_delta = detail::get_or<int>(plan, "n_delta", c.n_delta);
    c.log_scale_min = detail::get_or<double>(plan, "log_scale_min", c.log_scale_min);

    c.quadrature = parse_quadrature(detail::get_or<json>(j, "quadrature", json::object()));

    const json grids = detail::get_or<json>(j, "grids", json::object());
    if (grids.contains("eps")) {
        for (const auto& v : grids.at("eps"))
            c.eps_grid.push_back(v.get<double>());
    } else {
        for (int p = 2; p <= 7; ++p)
            c.eps_grid.push_back(std::pow(2.0, -p));
    }
    c.lambda_min = detail::get_or<double>(grids, "lambda_min", c.lambda_min);
    c.lambda_max = detail::get_or<double>(grids, "lambda_max", c.lambda_max);
    c.lambda_count = detail::get_or<int>(grids, "lambda_count", c.lambda_count);

    const json taylor = detail::get_or<json>(j, "taylor", json::object());
    c.taylor_order_max = detail::get_or<int>(taylor, "order_max", c.taylor_order_max);
    c.taylor_n_polys = detail::get_or<int>(taylor, "n_polys", c.taylor_n_polys);
    c.remainder_bound = detail::get_or<double>(taylor, "remainder_bound", c.remainder_bound);

    const json tols = detail::get_or<json>(j, "tolerances", json::object());
    c.slope_tol = detail::get_or<double>(tols, "slope", c.slope_tol);
    c.slope_tol_high = detail::get_or<double>(tols, "slope_high", c.slope_tol_high);
    c.k_ratio_bound = detail::get_or<double>(tols, "k_ratio_bound", c.k_ratio_bound);
    c.interp_ratio_bound = detail::get_or<double>(tols, "interp_ratio_bound", c.interp_ratio_bound);
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigParseError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline SamplingPlan make_plan(const ExperimentConfig& c, int d, std::uint64_t seed) {
    SamplingPlan p = default_plan(d, c.half_t, c.half_x);
    p.delta_min = c.delta_min;
    p.delta_max = c.delta_max;
    p.n_base = c.n_base;
    p.n_delta = c.n_delta;
    p.log_scale_min = c.log_scale_min;
    p.seed = seed;
    return p;
}

inline PolyFunction parse_polynomial(int d, const json& terms) {
    PolyFunction p(d);
    for (const auto& term : terms) {
        MultiIndex beta = term.at("beta").get<MultiIndex>();
        if (static_cast<int>(beta.size()) != d)
            throw ConfigParseError("polynomial term: beta length must equal d");
        for (int b : beta)
            if (b < 0)
                throw ConfigParseError("polynomial term: negative exponent");
        const int k = detail::get_or<int>(term, "k", 0);
        if (k < 0)
            throw ConfigParseError("polynomial term: negative time power");
        p.add_term(k, std::move(beta), term.at("coeff").get<double>());
    }
    return p;
}

inline json polynomial_to_json(const PolyFunction& p) {
    json terms = json::array();
    for (const auto& [key, c] : p.terms())
        terms.push_back({{"k", key.first}, {"beta", key.second}, {"coeff", c}});
    return terms;
}

/// Builds a corpus entry from its JSON descriptor. Named profiles are
/// built in; arbitrary user code is not accepted.
inline CorpusFunction parse_corpus_function(const HomogeneousGroup& g, const json& j) {
    CorpusFunction f;
    const std::string type = j.at("type").get<std::string>();
    const double radius = detail::get_or<double>(j, "radius", 2.0);
    if (type == "x1_power") {
        const double p = j.at("exponent").get<double>();
        if (!(p > 0.0) || p >= 3.0)
            throw ConfigParseError("x1_power: exponent must lie in (0,3)");
        f.reg_n = static_cast<int>(p);
        f.reg_alpha = p - f.reg_n;
        f.oracle = x1_power_profile(g, p, radius, f.reg_n);
        f.name = "x1_power_" + std::to_string(p);
    } else if (type == "t_power") {
        const double p = j.at("exponent").get<double>();
        if (!(p > 0.0))
            throw ConfigParseError("t_power: exponent must be positive");
        const double total = 2.0 * p; // intrinsic order of |t|^p
        f.reg_n = static_cast<int>(total);
        f.reg_alpha = total - f.reg_n;
        f.oracle = t_power_profile(g, p, radius, f.reg_n);
        f.name = "t_power_" + std::to_string(p);
    } else if (type == "x1_bump") {
        f.smooth = true;
        f.reg_n = 2;
        f.reg_alpha = 1.0;
        f.oracle = x1_bump_profile(g, radius, 4);
        f.name = "x1_bump";
    } else if (type == "bump") {
        f.smooth = true;
        f.reg_n = 2;
        f.reg_alpha = 1.0;
        f.oracle = bump_profile(g, radius, 3);
        f.name = "bump";
    } else if (type == "polynomial") {
        f.smooth = true;
        const PolyFunction p = parse_polynomial(g.d(), j.at("terms"));
        f.reg_n = intrinsic_degree(g, p);
        f.reg_alpha = 0.0;
        f.oracle = make_polynomial_oracle(g, p, 16);
        f.name = detail::get_or<std::string>(j, "name", "polynomial");
    } else {
        throw ConfigParseError("unknown corpus function type '" + type + "'");
    }
    if (j.contains("name"))
        f.name = j.at("name").get<std::string>();
    return f;
}

} // namespace kolm
