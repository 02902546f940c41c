#include "aleph/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alephsim - deterministic simulator for DAG-based atomic broadcast"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed_override = 0;
    uint64_t steps_override = 0;
    bool has_seed = false, has_steps = false;
    auto* run = app.add_subcommand("run", "execute a simulation from a JSON config");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_override, "override config seed")->each([&](const std::string&) {
        has_seed = true;
    });
    run->add_option("--steps", steps_override, "override config steps")
        ->each([&](const std::string&) { has_steps = true; });

    std::vector<std::string> log_paths;
    auto* verify = app.add_subcommand("verify", "check ordered-output logs for consistency");
    verify->add_option("logs", log_paths, "two or more process_<i>.jsonl files")
        ->required()
        ->expected(-2);

    std::string stats_report;
    auto* stats = app.add_subcommand("stats", "summarize metrics from a report.json");
    stats->add_option("report", stats_report, "report.json from a run")->required();

    std::string replay_report;
    auto* replay = app.add_subcommand("replay", "re-run a report's config and compare output");
    replay->add_option("report", replay_report, "report.json from a run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = aleph::sim::SimConfig::load(config_path);
            if (has_seed) cfg.seed = seed_override;
            if (has_steps) cfg.steps = steps_override;
            auto report = aleph::sim::run_simulation(cfg);
            aleph::sim::write_run_outputs(report, out_dir);
            std::cout << aleph::sim::stats_table(report);
            if (report.beyond_tolerance)
                std::cout << "note: fault count exceeds tolerance, no safety claim\n";
            if (!report.violations.empty()) {
                for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
                return 1;
            }
            return 0;
        }
        if (verify->parsed()) {
            std::vector<std::vector<aleph::consensus::BatchRecord>> logs;
            for (const auto& p : log_paths) logs.push_back(aleph::sim::read_output_log(p));
            auto rep = aleph::sim::verify_logs(logs, log_paths);
            if (rep.consistent) {
                std::cout << "consistent (" << logs.size() << " logs)\n";
                return 0;
            }
            std::cout << "inconsistent: " << rep.detail << "\n";
            return 1;
        }
        if (stats->parsed()) {
            auto report = aleph::sim::RunReport::from_json_text(slurp(stats_report));
            std::cout << aleph::sim::stats_table(report);
            return report.violations.empty() ? 0 : 1;
        }
        if (replay->parsed()) {
            std::string original = slurp(replay_report);
            auto report = aleph::sim::RunReport::from_json_text(original);
            auto fresh = aleph::sim::run_simulation(report.config);
            std::string regenerated = fresh.to_json_text() + "\n";
            if (regenerated == original || fresh.to_json_text() == original) {
                std::cout << "replay identical\n";
                return 0;
            }
            std::cout << "replay differs from stored report\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
