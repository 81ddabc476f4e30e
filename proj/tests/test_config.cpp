#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kolm/config.hpp"

using namespace kolm;

namespace {

json minimal_config() {
    return json{{"seed", 7},
                {"suite", "group-axioms"},
                {"group", {{"layer_dims", {1, 1}}, {"blocks", {{{1.0}}}}}}};
}

} // namespace

TEST_CASE("minimal config parses with documented defaults") {
    const ExperimentConfig c = parse_config(minimal_config());
    CHECK(c.seed == 7);
    CHECK(c.suite == "group-axioms");
    CHECK(c.group.layer_dims == std::vector<int>{1, 1});
    CHECK(c.half_t == 1.0);
    CHECK(c.half_x == 2.0);
    CHECK(c.n_base == 48);
    CHECK(c.n_delta == 12);
    CHECK(c.quadrature.method == QuadMethod::TanhSinh);
    CHECK(c.quadrature.points_per_axis == 16);
    REQUIRE(c.eps_grid.size() == 6); // 2^-2 .. 2^-7
    CHECK(c.eps_grid.front() == 0.25);
    CHECK(c.eps_grid.back() == 0.0078125);
    CHECK(c.taylor_order_max == 6);
    CHECK(c.slope_tol == 0.1);
    CHECK(c.threads == 1);

    const HomogeneousGroup g{c.group};
    CHECK(g.Q() == 4);
}

TEST_CASE("mandatory fields and enumerations are enforced") {
    {
        json j = minimal_config();
        j.erase("seed");
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j.erase("suite");
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j.erase("group");
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j["suite"] = "no-such-suite";
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j["group"]["layer_dims"] = {1, -1};
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j["quadrature"] = {{"method", "simpson"}};
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j["quadrature"] = {{"points_per_axis", 1}};
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
    {
        json j = minimal_config();
        j["plan"] = {{"n_base", "lots"}};
        CHECK_THROWS_AS(parse_config(j), ConfigParseError);
    }
}

TEST_CASE("every known suite name round-trips through the parser") {
    for (const std::string& suite : known_suites()) {
        json j = minimal_config();
        j["suite"] = suite;
        CHECK(parse_config(j).suite == suite);
    }
}

TEST_CASE("config file loading") {
    const std::string path = std::filesystem::temp_directory_path() / "kolm_cfg_test.json";
    {
        std::ofstream out(path);
        out << minimal_config().dump();
    }
    CHECK(load_config(path).seed == 7);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_config(path), ConfigParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigParseError);
    std::filesystem::remove(path);
}

TEST_CASE("sampling plan assembly from config") {
    json j = minimal_config();
    j["plan"] = {{"half_t", 0.5}, {"half_x", 1.5},  {"delta_min", 0.02},
                 {"n_base", 10},  {"n_delta", 3},   {"log_scale_min", 1e-6}};
    const ExperimentConfig c = parse_config(j);
    const SamplingPlan p = make_plan(c, 2, 99);
    CHECK(p.base_box.size() == 3);
    CHECK(p.base_box[0] == std::make_pair(-0.5, 0.5));
    CHECK(p.base_box[2] == std::make_pair(-1.5, 1.5));
    CHECK(p.delta_min == 0.02);
    CHECK(p.n_base == 10);
    CHECK(p.log_scale_min == 1e-6);
    CHECK(p.seed == 99);
    CHECK_NOTHROW(p.validate(2));
}

TEST_CASE("polynomial descriptors round-trip") {
    PolyFunction p(2);
    p.add_term(1, {1, 0}, 0.5);
    p.add_term(0, {0, 2}, -2.0);
    const json j = polynomial_to_json(p);
    const PolyFunction q = parse_polynomial(2, j);
    CHECK(PolyFunction::max_coeff_diff(p, q) == 0.0);

    CHECK_THROWS_AS(parse_polynomial(2, json::array({{{"beta", {1}}, {"coeff", 1.0}}})),
                    ConfigParseError);
    CHECK_THROWS_AS(parse_polynomial(2, json::array({{{"beta", {-1, 0}}, {"coeff", 1.0}}})),
                    ConfigParseError);
    CHECK_THROWS_AS(
        parse_polynomial(2, json::array({{{"k", -1}, {"beta", {0, 0}}, {"coeff", 1.0}}})),
        ConfigParseError);
}

TEST_CASE("corpus descriptors carry certified regularity") {
    const HomogeneousGroup g = langevin_group();

    {
        const CorpusFunction f =
            parse_corpus_function(g, {{"type", "x1_power"}, {"exponent", 0.5}});
        CHECK(f.reg_n == 0);
        CHECK(f.reg_alpha == 0.5);
        CHECK(!f.smooth);
        const GroupPoint z{0.0, Eigen::Vector2d(0.25, 0.0)};
        CHECK(std::abs(f.oracle.value(z) - 0.5 * bump(0.125)) <= 1e-15);
    }
    {
        const CorpusFunction f =
            parse_corpus_function(g, {{"type", "x1_power"}, {"exponent", 1.5}});
        CHECK(f.reg_n == 1);
        CHECK(f.reg_alpha == 0.5);
    }
    {
        const CorpusFunction f =
            parse_corpus_function(g, {{"type", "t_power"}, {"exponent", 0.75}});
        CHECK(f.reg_n == 1); // intrinsic order 2 * 0.75
        CHECK(f.reg_alpha == 0.5);
    }
    {
        const CorpusFunction f = parse_corpus_function(g, {{"type", "bump"}});
        CHECK(f.smooth);
        CHECK(f.oracle.order >= 2);
    }
    {
        const CorpusFunction f = parse_corpus_function(
            g, {{"type", "polynomial"},
                {"name", "lin"},
                {"terms", json::array({{{"k", 0}, {"beta", {1, 0}}, {"coeff", 2.0}}})}});
        CHECK(f.name == "lin");
        CHECK(f.reg_n == 1);
        CHECK(f.reg_alpha == 0.0);
    }

    CHECK_THROWS_AS(parse_corpus_function(g, {{"type", "x1_power"}, {"exponent", 3.5}}),
                    ConfigParseError);
    CHECK_THROWS_AS(parse_corpus_function(g, {{"type", "x1_power"}, {"exponent", 0.0}}),
                    ConfigParseError);
    CHECK_THROWS_AS(parse_corpus_function(g, {{"type", "mystery"}}), ConfigParseError);
}

TEST_CASE("shipped configs parse and validate") {
    const char* env = std::getenv("KOLM_CONFIGS");
    const std::string dir = env ? env : "configs";
    int n_found = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        ++n_found;
        const ExperimentConfig c = load_config(entry.path().string());
        const HomogeneousGroup g{c.group};
        for (const auto& fn : c.corpus)
            CHECK_NOTHROW(parse_corpus_function(g, fn));
    }
    CHECK(n_found >= 7);
}
