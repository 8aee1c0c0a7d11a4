#include "ecofl/outputs.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ecofl/textio.hpp"

namespace ecofl::out {

namespace {

struct Column {
    const char* name;
    std::function<double(const engine::StepMetrics&)> get;
    bool integral;
};

const std::vector<Column>& metric_columns() {
    static const std::vector<Column> cols = {
        {"t", [](const engine::StepMetrics& m) { return static_cast<double>(m.t); }, true},
        {"total_power_w", [](const engine::StepMetrics& m) { return m.total_power_w; }, false},
        {"eta_ee", [](const engine::StepMetrics& m) { return m.eta_ee; }, false},
        {"outage_rate_voice",
         [](const engine::StepMetrics& m) { return m.outage_rate_voice; }, false},
        {"outage_rate_embb",
         [](const engine::StepMetrics& m) { return m.outage_rate_embb; }, false},
        {"policy_id",
         [](const engine::StepMetrics& m) { return static_cast<double>(m.policy_id); }, true},
        {"n_lte", [](const engine::StepMetrics& m) { return static_cast<double>(m.n_lte); },
         true},
        {"n_nr", [](const engine::StepMetrics& m) { return static_cast<double>(m.n_nr); },
         true},
        {"reward_sum", [](const engine::StepMetrics& m) { return m.reward_sum; }, false},
        {"fl_round",
         [](const engine::StepMetrics& m) { return static_cast<double>(m.fl_round); }, true},
        {"fl_test_acc", [](const engine::StepMetrics& m) { return m.fl_test_acc; }, false},
        {"fl_test_loss", [](const engine::StepMetrics& m) { return m.fl_test_loss; }, false},
        {"infra_energy_j", [](const engine::StepMetrics& m) { return m.infra_energy_j; },
         false},
    };
    return cols;
}

} // namespace

std::string metrics_csv(const std::vector<engine::StepMetrics>& metrics) {
    const auto& cols = metric_columns();
    std::string text;
    for (size_t c = 0; c < cols.size(); ++c) {
        if (c) text.push_back(',');
        text += cols[c].name;
    }
    text.push_back('\n');
    for (const auto& m : metrics) {
        for (size_t c = 0; c < cols.size(); ++c) {
            if (c) text.push_back(',');
            double v = cols[c].get(m);
            text += cols[c].integral ? format_int(static_cast<long long>(v))
                                     : format_double(v);
        }
        text.push_back('\n');
    }
    return text;
}

std::string summary_json(const cfg::ScenarioConfig& config,
                         const std::vector<engine::StepMetrics>& metrics) {
    nlohmann::ordered_json j;
    j["mode"] = config.mode;
    j["seed"] = config.seed;
    j["n_steps"] = metrics.size();
    nlohmann::ordered_json columns;
    for (const auto& col : metric_columns()) {
        double sum = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& m : metrics) {
            double v = col.get(m);
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        nlohmann::ordered_json stat;
        if (metrics.empty()) {
            stat["mean"] = 0.0;
            stat["min"] = 0.0;
            stat["max"] = 0.0;
        } else {
            stat["mean"] = sum / static_cast<double>(metrics.size());
            stat["min"] = lo;
            stat["max"] = hi;
        }
        columns[col.name] = stat;
    }
    j["columns"] = columns;
    return j.dump(2) + "\n";
}

std::string manifest_json(const cfg::ScenarioConfig& config, const std::string& out_dir,
                          double wall_seconds, const std::vector<std::string>& files) {
    nlohmann::ordered_json j;
    j["version"] = kArtifactVersion;
    j["seed"] = config.seed;
    j["mode"] = config.mode;
    j["out_dir"] = out_dir;
    j["outputs"] = files;
    j["wall_seconds"] = wall_seconds;
    nlohmann::ordered_json resolved;
    for (const auto& def : cfg::key_registry())
        resolved[def.key] = cfg::get_key(config, def);
    j["config"] = resolved;
    return j.dump(2) + "\n";
}

std::string suite_csv(const std::vector<engine::SuiteEntry>& entries) {
    std::string text =
        "scenario,seed,mode,outage_rate_voice,outage_rate_embb,outage_rate_total,"
        "mean_power_w,mean_eta_ee,mean_reward,final_fl_acc,final_fl_loss\n";
    for (const auto& e : entries) {
        text += format_int(e.scenario);
        text.push_back(',');
        text += format_int(static_cast<long long>(e.seed));
        text.push_back(',');
        text += e.mode;
        text.push_back(',');
        text += format_double(e.outage_rate_voice);
        text.push_back(',');
        text += format_double(e.outage_rate_embb);
        text.push_back(',');
        text += format_double(e.outage_rate_total);
        text.push_back(',');
        text += format_double(e.mean_power_w);
        text.push_back(',');
        text += format_double(e.mean_eta_ee);
        text.push_back(',');
        text += format_double(e.mean_reward);
        text.push_back(',');
        text += format_double(e.final_fl_acc);
        text.push_back(',');
        text += format_double(e.final_fl_loss);
        text.push_back('\n');
    }
    return text;
}

std::string suite_json(const std::vector<engine::SuiteEntry>& entries) {
    nlohmann::ordered_json j;
    std::vector<std::string> modes;
    int n_scenarios = 0;
    for (const auto& e : entries) {
        if (std::find(modes.begin(), modes.end(), e.mode) == modes.end())
            modes.push_back(e.mode);
        n_scenarios = std::max(n_scenarios, e.scenario + 1);
    }
    j["n_scenarios"] = n_scenarios;
    j["modes"] = modes;

    nlohmann::ordered_json by_mode;
    for (const auto& mode : modes) {
        double ov = 0, oe = 0, ot = 0, pw = 0, ee = 0, acc = 0;
        int count = 0;
        for (const auto& e : entries) {
            if (e.mode != mode) continue;
            ov += e.outage_rate_voice;
            oe += e.outage_rate_embb;
            ot += e.outage_rate_total;
            pw += e.mean_power_w;
            ee += e.mean_eta_ee;
            acc += e.final_fl_acc;
            ++count;
        }
        nlohmann::ordered_json row;
        double n = count > 0 ? static_cast<double>(count) : 1.0;
        row["mean_outage_rate_voice"] = ov / n;
        row["mean_outage_rate_embb"] = oe / n;
        row["mean_outage_rate_total"] = ot / n;
        row["mean_power_w"] = pw / n;
        row["mean_eta_ee"] = ee / n;
        row["mean_final_fl_acc"] = acc / n;
        by_mode[mode] = row;
    }
    j["by_mode"] = by_mode;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json row;
        row["scenario"] = e.scenario;
        row["seed"] = e.seed;
        row["mode"] = e.mode;
        row["outage_rate_voice"] = e.outage_rate_voice;
        row["outage_rate_embb"] = e.outage_rate_embb;
        row["outage_rate_total"] = e.outage_rate_total;
        row["mean_power_w"] = e.mean_power_w;
        row["mean_eta_ee"] = e.mean_eta_ee;
        row["mean_reward"] = e.mean_reward;
        row["final_fl_acc"] = e.final_fl_acc;
        row["final_fl_loss"] = e.final_fl_loss;
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + path);
}

} // namespace ecofl::out
