#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ecofl/config.hpp"
#include "ecofl/engine.hpp"
#include "ecofl/outputs.hpp"
#include "ecofl/textio.hpp"
#include "ecofl/xapp_classifier.hpp"

namespace {

using namespace ecofl;

std::string default_out_root() {
    const char* env = std::getenv("ECOFL_OUT_DIR");
    return env && *env ? env : "out";
}

cfg::ScenarioConfig load_config(const std::string& path) {
    if (path.empty()) {
        auto c = cfg::default_config();
        c.finalize();
        return c;
    }
    return cfg::parse_config_file(path);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool seed_set,
            std::uint64_t seed, const std::string& mode) {
    auto config = load_config(config_path);
    if (seed_set) config.seed = seed;
    if (!mode.empty()) config.mode = mode;
    engine::Mode::parse(config.mode);

    std::filesystem::create_directories(out_dir);
    auto start = std::chrono::steady_clock::now();
    engine::Simulation sim(config);
    auto metrics = sim.run();
    double wall = seconds_since(start);

    auto join = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    out::write_file(join("run.csv"), out::metrics_csv(metrics));
    out::write_file(join("summary.json"), out::summary_json(config, metrics));
    out::write_file(join("manifest.json"),
                    out::manifest_json(config, out_dir, wall,
                                       {"run.csv", "summary.json", "manifest.json"}));

    auto summary = engine::summarize_run(config, sim.mode(), metrics, 0);
    std::cout << "mode " << summary.mode << " seed " << config.seed << ": mean power "
              << format_double(summary.mean_power_w) << " W, mean eta "
              << format_double(summary.mean_eta_ee) << ", outage voice/embb "
              << format_double(summary.outage_rate_voice) << "/"
              << format_double(summary.outage_rate_embb) << ", final FL acc "
              << format_double(summary.final_fl_acc) << " (" << format_double(wall)
              << " s)\n";
    return 0;
}

int cmd_suite(const std::string& config_path, const std::string& out_dir, int scenarios) {
    auto config = load_config(config_path);
    std::filesystem::create_directories(out_dir);
    auto start = std::chrono::steady_clock::now();
    auto entries = engine::run_suite(config, scenarios, engine::default_suite_modes());
    double wall = seconds_since(start);

    auto join = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    out::write_file(join("suite.csv"), out::suite_csv(entries));
    out::write_file(join("suite.json"), out::suite_json(entries));
    out::write_file(join("manifest.json"),
                    out::manifest_json(config, out_dir, wall,
                                       {"suite.csv", "suite.json", "manifest.json"}));

    std::cout << "suite: " << scenarios << " scenarios x "
              << engine::default_suite_modes().size() << " modes in " << format_double(wall)
              << " s\n";
    for (const auto& mode : engine::default_suite_modes()) {
        double power = 0, outage = 0;
        int count = 0;
        for (const auto& e : entries) {
            if (e.mode != mode) continue;
            power += e.mean_power_w;
            outage += e.outage_rate_embb;
            ++count;
        }
        if (count == 0) continue;
        std::cout << "  " << mode << ": mean power " << format_double(power / count)
                  << " W, embb outage " << format_double(outage / count) << "\n";
    }
    return 0;
}

int cmd_train_xapp(const std::string& config_path, int corpus_size,
                   const std::string& weights_out, const std::string& corpus_out,
                   bool seed_set, std::uint64_t seed) {
    auto config = load_config(config_path);
    if (seed_set) config.seed = seed;
    if (corpus_size > 0) config.xapp_corpus_size = corpus_size;

    auto start = std::chrono::steady_clock::now();
    Rng rng(substream_seed(config.seed, "xapp"));
    auto corpus = xapp::generate_corpus(config.xapp_corpus_size, config.xapp, config.radio,
                                        config.policy, rng);
    xapp::PolicyClassifier clf(config.xapp);
    clf.init_random(rng);
    auto report = xapp::train(clf, corpus, config.xapp.train_epochs, rng);
    double wall = seconds_since(start);

    {
        std::ofstream os(weights_out);
        if (!os) throw std::runtime_error("cannot open for writing: " + weights_out);
        clf.save_text(os);
    }
    if (!corpus_out.empty()) {
        std::ofstream os(corpus_out);
        if (!os) throw std::runtime_error("cannot open for writing: " + corpus_out);
        xapp::save_corpus_csv(os, corpus);
    }

    auto hist = xapp::label_histogram(corpus);
    std::cout << "corpus " << corpus.size() << " scenarios, labels";
    for (int p = 0; p < alloc::kNumPolicies; ++p)
        std::cout << " " << alloc::policy_name(static_cast<alloc::PolicyId>(p)) << "="
                  << hist[static_cast<size_t>(p)];
    std::cout << "\ntrain accuracy " << format_double(report.final_train_accuracy) << " in "
              << format_double(wall) << " s, weights -> " << weights_out << "\n";
    return 0;
}

int cmd_bench() {
    auto config = cfg::default_config();
    config.finalize();
    auto start = std::chrono::steady_clock::now();
    engine::Simulation sim(config);
    auto metrics = sim.run();
    double wall = seconds_since(start);
    bool ok = wall < 60.0 && metrics.size() == static_cast<size_t>(config.n_steps);
    std::cout << "bench: reference run (" << config.n_clients << " clients, "
              << config.n_steps << " steps) took " << format_double(wall) << " s, budget 60 s: "
              << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-RAT federated learning energy simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = default_out_root(), mode, weights_out, corpus_out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int scenarios = 10, corpus_size = 0;

    auto* run = app.add_subcommand("run", "Simulate one scenario and write run.csv");
    run->add_option("--config", config_path, "Scenario config file (defaults when omitted)");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override sim.seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--mode", mode, "Override sim.mode");

    auto* suite = app.add_subcommand("suite", "Run every mode over shared scenario seeds");
    suite->add_option("--config", config_path, "Scenario config file (defaults when omitted)");
    suite->add_option("--out", out_dir, "Output directory");
    suite->add_option("--scenarios", scenarios, "Number of scenarios")
        ->check(CLI::PositiveNumber);

    auto* tx = app.add_subcommand("train-xapp", "Generate a labeled corpus and train weights");
    tx->add_option("--config", config_path, "Scenario config file (defaults when omitted)");
    tx->add_option("--corpus-size", corpus_size, "Labeled scenarios to generate")
        ->check(CLI::PositiveNumber);
    tx->add_option("--out", weights_out, "Weights file to write")->required();
    tx->add_option("--corpus-out", corpus_out, "Also dump the corpus as CSV");
    tx->add_option("--seed", seed, "Override sim.seed")->each([&](const std::string&) {
        seed_set = true;
    });

    app.add_subcommand("bench", "Time the reference run against its 60 s budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("run"))
            return cmd_run(config_path, out_dir, seed_set, seed, mode);
        if (app.got_subcommand("suite")) return cmd_suite(config_path, out_dir, scenarios);
        if (app.got_subcommand("train-xapp"))
            return cmd_train_xapp(config_path, corpus_size, weights_out, corpus_out, seed_set,
                                  seed);
        if (app.got_subcommand("bench")) return cmd_bench();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
