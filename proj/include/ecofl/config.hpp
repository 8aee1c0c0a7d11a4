// config.hpp - scenario configuration: one struct covering every tunable,
// a key registry driving parse/serialize/manifest generation, and strict
// validation. File format is flat "key = value" lines with '#' comments;
// unknown or duplicate keys are hard errors.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ecofl/alloc_policies.hpp"
#include "ecofl/context.hpp"
#include "ecofl/fl_core.hpp"
#include "ecofl/rapp_rl.hpp"
#include "ecofl/xapp_classifier.hpp"

namespace ecofl::cfg {

struct ScenarioConfig {
    // net.* / energy.plan_* live inside the radio context.
    RadioContext radio = default_radio_context();
    double voice_packet_bits = 1000.0;

    alloc::PolicyParams policy;

    // energy.* beyond the plan wattages.
    double activity_factor = 0.792;
    double idle_power_w = 0.1;
    double rx_power_w = 0.1;
    double comp_energy_per_epoch_j = 0.5;
    double server_base_j = 50.0;
    double server_app_j = 12.5;
    double bs_lte_base_w = 130.0;
    double bs_lte_rat_w = 100.0;
    double bs_nr_base_w = 150.0;
    double bs_nr_rat_w = 120.0;

    rl::RlConfig rl;
    long rl_train_steps = 20000;  // warmup steps before the measured run

    xapp::XappConfig xapp;
    int xapp_corpus_size = 4000;
    std::string xapp_weights_path;  // empty: train in-process at startup

    fl::FlConfig fl;

    // sim.*
    std::uint64_t seed = 1;
    int n_steps = 100;
    int n_clients = 50;
    double voice_fraction = 0.84;
    int fl_round_interval = 5;
    std::string mode = "ecofl";
    net::MobilityConfig mobility;

    // Fills derived fields (eMBB packet size from the FL model) and checks
    // every invariant. Throws std::invalid_argument with a key path.
    void finalize();

    energy::InfrastructureConfig infrastructure() const;
};

ScenarioConfig default_config();

struct KeyDef {
    using Ptr = std::variant<double*, int*, long*, std::uint64_t*, bool*, std::string*>;
    std::string key;
    std::string description;  // includes the unit where one applies
    Ptr (*access)(ScenarioConfig&);
};

// All keys in serialization order (sections: net, policy, energy, rl,
// xapp, fl, sim).
const std::vector<KeyDef>& key_registry();

std::string get_key(const ScenarioConfig& c, const KeyDef& def);
void set_key(ScenarioConfig& c, const KeyDef& def, const std::string& value);

// Parses file content (not a path). Starts from defaults; finalize() runs
// at the end. Errors carry 1-based line numbers.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Every key, one per line, grouped by section. parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

} // namespace ecofl::cfg
