// End-to-end acceptance checks: each criterion prints exactly one line
// ("PASS criterion-k: ..." or "FAIL criterion-k: ...") and the binary exits
// nonzero when any criterion fails. Experiment parameters come from the
// shipped configs so the numbers here match the command line harness.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kolm/suites.hpp"

namespace fs = std::filesystem;
using namespace kolm;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion-%d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

std::string env(const char* name) {
    const char* v = std::getenv(name);
    if (!v) {
        std::fprintf(stderr, "environment variable %s not set\n", name);
        std::exit(1);
    }
    return v;
}

const Assertion* find(const SuiteResult& res, const std::string& name) {
    for (const auto& a : res.assertions)
        if (a.name == name)
            return &a;
    return nullptr;
}

/// Collects the named assertions from a suite run; pass requires all present
/// and passing. Values are appended to the detail string.
bool collect(const SuiteResult& res, const std::vector<std::string>& names,
             std::string& detail) {
    bool ok = true;
    for (const auto& name : names) {
        const Assertion* a = find(res, name);
        if (!a) {
            detail += " [missing " + name + "]";
            ok = false;
            continue;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %s=%.4g", a->name.c_str(), a->value);
        detail += buf;
        ok = ok && a->pass;
    }
    return ok;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = env("KOLM_CLI") + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

} // namespace

int main() {
    const std::string cfg_dir = env("KOLM_CONFIGS");
    const fs::path work = fs::temp_directory_path() / "kolm_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    // Group-level criteria 1-4 come from the axiom suite on both the kinetic
    // d = 2 group and a three-layer d = 4 group.
    const SuiteResult ax2 =
        run_group_axioms(load_config(cfg_dir + "/langevin_group_axioms.json"));
    const SuiteResult ax4 = run_group_axioms(load_config(cfg_dir + "/d4_group_axioms.json"));

    {
        std::string detail = "group law axioms over 10^4 random triples (d=2 and d=4):";
        bool ok = true;
        for (const SuiteResult* res : {&ax2, &ax4})
            ok = collect(*res,
                         {"associativity_max_error", "identity_max_error", "inverse_max_error"},
                         detail) &&
                 ok;
        report(1, ok, detail);
    }
    {
        std::string detail = "drift nilpotency exact and volume preservation of e^{dB}:";
        bool ok = true;
        for (const SuiteResult* res : {&ax2, &ax4})
            ok = collect(*res, {"drift_nilpotency_max_entry", "exp_determinant_max_error"},
                         detail) &&
                 ok;
        report(2, ok, detail);
    }
    {
        std::string detail = "dilation covariance and left invariance of the intrinsic flows:";
        bool ok = true;
        for (const SuiteResult* res : {&ax2, &ax4})
            ok = collect(*res, {"dilation_flow_max_error", "left_invariance_max_error"},
                         detail) &&
                 ok;
        report(3, ok, detail);
    }
    {
        std::string detail = "quasi-norm homogeneity and d=2 increment closed form:";
        bool ok = collect(ax2,
                          {"quasi_norm_homogeneity_rel_error", "kinetic_increment_norm_max_error"},
                          detail);
        ok = collect(ax4, {"quasi_norm_homogeneity_rel_error"}, detail) && ok;
        report(4, ok, detail);
    }

    // Criteria 5-6: expansion identities on both groups, 120 random
    // polynomials each with orders up to 6.
    const SuiteResult ty2 =
        run_taylor_identities(load_config(cfg_dir + "/langevin_taylor.json"));
    const SuiteResult ty4 = run_taylor_identities(load_config(cfg_dir + "/d4_taylor.json"));
    {
        std::string detail = "derivative exchange identities, both groups:";
        bool ok = true;
        for (const SuiteResult* res : {&ty2, &ty4})
            ok = collect(*res, {"exchange_identity_max_discrepancy"}, detail) && ok;
        report(5, ok, detail);
    }
    {
        std::string detail = "polynomial reproduction and remainder witness, both groups:";
        bool ok = true;
        for (const SuiteResult* res : {&ty2, &ty4})
            ok = collect(*res,
                         {"polynomial_reproduction_max_coeff_error", "remainder_witness_constant"},
                         detail) &&
                 ok;
        report(6, ok, detail);
    }

    // Criterion 7: round-trip normalization identity of the scaled mollifier.
    {
        double worst = 0.0;
        std::mt19937_64 rng(2024);
        bool ok = true;
        try {
            for (const HomogeneousGroup& g :
                 {langevin_group(), HomogeneousGroup{load_config(
                                        cfg_dir + "/d4_group_axioms.json").group}}) {
                QuadratureSpec quad;
                quad.points_per_axis = 16;
                // The 5-dimensional normalization integral stabilizes to
                // ~1e-8 relative, so the deep group declares a looser gate.
                if (g.d() > 2)
                    quad.tolerance = 1e-7;
                const MollifierSpec spec = build_mollifier(g, quad);
                for (double eps : {1.0, 0.5, 0.25}) {
                    const GroupPoint z = detail::random_point(rng, g.d(), 1.0, 2.0);
                    worst = std::max(
                        worst, std::abs(normalization_identity(g, spec, eps, z, quad) - 1.0));
                }
            }
        } catch (const Error&) {
            ok = false;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), " max_deviation=%.4g", worst);
        report(7, ok && worst <= 1e-6,
               "mollifier normalization across eps in {1, 1/2, 1/4}:" + std::string(buf));
    }

    // Criterion 8: smoothing rates for regularity (0, 1/2) and (1, 1/2),
    // run through the CLI with two worker threads (also exercised by
    // criterion 12 below for thread invariance).
    const std::string rates_cfg = cfg_dir + "/langevin_rates.json";
    const std::string rates_out = (work / "rates_t2").string();
    {
        const int rc =
            run_cli("run --config " + rates_cfg + " --out " + rates_out + " --threads 2");
        std::string detail = "approximation rate slopes (CLI, 2 threads):";
        bool ok = (rc == 0);
        if (ok) {
            json j;
            std::ifstream(rates_out + "/summary.json") >> j;
            for (const auto& a : j.at("assertions")) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), " %s=%.4g",
                              a.at("name").get<std::string>().c_str(),
                              a.at("value").get<double>());
                detail += buf;
                ok = ok && a.at("pass").get<bool>();
            }
        } else {
            detail += " [cli exit " + std::to_string(rc) + "]";
        }
        report(8, ok, detail);
    }

    // Criterion 9: K-functional decay rate and bounded scaled values.
    {
        const SuiteResult kf = run_k_functional(load_config(cfg_dir + "/langevin_kfunctional.json"));
        std::string detail = "K-functional slope and scaled bound, (0,1/2) and (1,1/2):";
        const bool ok = collect(kf,
                                {"x1_power_05_khat_slope", "x1_power_05_khat_scaled_sup",
                                 "x1_power_15_khat_slope", "x1_power_15_khat_scaled_sup",
                                 "x1_power_05_khat_monotonicity_violation",
                                 "x1_power_15_khat_concavity_violation"},
                                detail);
        report(9, ok, detail);
    }

    // Criteria 10-11: interpolation inequality stability and the exponent map.
    const SuiteResult ii =
        run_interpolation_inequality(load_config(cfg_dir + "/langevin_interp.json"));
    {
        std::string detail = "interpolation inequality refinement and exact scaling:";
        const bool ok = collect(ii,
                                {"bump_ratio_refinement_drift", "bump_scaling_invariance_rel_error",
                                 "x1_bump_ratio_refinement_drift",
                                 "x1_bump_scaling_invariance_rel_error",
                                 "poly_mixed_ratio_refinement_drift",
                                 "poly_mixed_scaling_invariance_rel_error"},
                                detail);
        report(10, ok, detail);
    }
    {
        bool ok = true;
        std::string detail = "interpolation exponent arithmetic:";
        try {
            const auto [n1, a1] = theta_alpha_map({0, 2, 0.5, 0.5, 0.3});
            ok = ok && n1 == 1 && std::abs(a1 - 0.1) <= 1e-12;
            const auto [n2, a2] = theta_alpha_map({1, 2, 0.0, 0.0, 0.5});
            ok = ok && n2 == 1 && std::abs(a2 - 0.5) <= 1e-12;
            detail += " endpoints exact";
        } catch (const Error&) {
            ok = false;
            detail += " [endpoint query threw]";
        }
        bool degenerate = false;
        try {
            theta_alpha_map({0, 1, 0.5, 0.5, 0.5});
        } catch (const DegenerateAlphaError&) {
            degenerate = true;
        }
        detail += degenerate ? ", integer total rejected" : ", integer total NOT rejected";
        report(11, ok && degenerate, detail);
    }

    // Criterion 12: reruns are byte-identical, including across thread counts
    // through the parallel rate suite.
    {
        const std::string ga_cfg = cfg_dir + "/langevin_group_axioms.json";
        const std::string a = (work / "det_a").string();
        const std::string b = (work / "det_b").string();
        const std::string rates_t1 = (work / "rates_t1").string();
        bool ok = run_cli("run --config " + ga_cfg + " --out " + a) == 0 &&
                  run_cli("run --config " + ga_cfg + " --out " + b) == 0 &&
                  run_cli("run --config " + rates_cfg + " --out " + rates_t1 +
                          " --threads 1") == 0;
        std::string detail = "byte-identical outputs across reruns and thread counts:";
        if (ok) {
            const bool same_seed = slurp(a + "/summary.json") == slurp(b + "/summary.json") &&
                                   slurp(a + "/group_axioms.csv") == slurp(b + "/group_axioms.csv");
            const bool same_threads =
                slurp(rates_t1 + "/summary.json") == slurp(rates_out + "/summary.json") &&
                slurp(rates_t1 + "/rates_x1_power_05.csv") ==
                    slurp(rates_out + "/rates_x1_power_05.csv") &&
                slurp(rates_t1 + "/rates_x1_power_15.csv") ==
                    slurp(rates_out + "/rates_x1_power_15.csv");
            detail += same_seed ? " rerun=identical" : " rerun=DIFFERS";
            detail += same_threads ? " threads=identical" : " threads=DIFFERS";
            ok = same_seed && same_threads;
        } else {
            detail += " [cli run failed]";
        }
        report(12, ok, detail);
    }

    fs::remove_all(work);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
