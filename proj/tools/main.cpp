// Command line harness for the experiment suites: validates configs, runs
// a suite into an output directory, and reports a stored summary.

#include <iostream>

#include <CLI11.hpp>

#include "kolm/suites.hpp"

namespace {

void print_assertions(const kolm::SuiteResult& res) {
    for (const auto& a : res.assertions)
        std::cout << (a.pass ? "[PASS] " : "[FAIL] ") << a.name << " value=" << a.value
                  << " allowed=[" << a.lo << "," << a.hi << "]\n";
}

int cmd_validate(const std::string& config_path) {
    const kolm::ExperimentConfig c = kolm::load_config(config_path);
    const kolm::HomogeneousGroup g{c.group};
    for (const auto& entry : c.corpus)
        kolm::parse_corpus_function(g, entry);
    std::cout << "config OK: suite=" << c.suite << " d=" << g.d() << " r=" << g.r()
              << " Q=" << g.Q() << " corpus=" << c.corpus.size() << "\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, int threads) {
    kolm::ExperimentConfig c = kolm::load_config(config_path);
    if (seed)
        c.seed = *seed;
    c.threads = threads;
    const kolm::SuiteResult res = kolm::run_suite(c);
    kolm::write_outputs(res, c, out_dir);
    print_assertions(res);
    std::cout << (res.pass() ? "suite passed" : "suite FAILED") << ": " << res.suite
              << " -> " << out_dir << "/summary.json\n";
    return res.pass() ? 0 : 2;
}

int cmd_report(const std::string& out_dir) {
    std::ifstream in(out_dir + "/summary.json");
    if (!in)
        throw kolm::ConfigParseError("cannot open " + out_dir + "/summary.json");
    kolm::json j;
    in >> j;
    std::cout << "suite: " << j.at("suite").get<std::string>() << "\n"
              << "seed:  " << j.at("seed").get<std::uint64_t>() << "\n";
    int n_pass = 0, n_fail = 0;
    for (const auto& a : j.at("assertions")) {
        const bool pass = a.at("pass").get<bool>();
        (pass ? n_pass : n_fail) += 1;
        std::cout << (pass ? "  [PASS] " : "  [FAIL] ") << a.at("name").get<std::string>()
                  << " value=" << a.at("value").get<double>() << "\n";
    }
    std::cout << "tables:";
    for (const auto& t : j.at("tables"))
        std::cout << " " << t.get<std::string>();
    std::cout << "\n"
              << n_pass << " passed, " << n_fail << " failed\n";
    return (n_fail == 0) ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"intrinsic calculus experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 1;

    auto* validate = app.add_subcommand("validate", "check a config without running");
    validate->add_option("--config", config_path, "config file (JSON)")->required();

    auto* run = app.add_subcommand("run", "run the configured suite");
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--threads", threads, "worker thread count")
        ->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "summarize a previous run");
    report->add_option("--out", out_dir, "directory holding summary.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed())
            return cmd_validate(config_path);
        if (run->parsed())
            return cmd_run(config_path, out_dir, seed, threads);
        return cmd_report(out_dir);
    } catch (const kolm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
