#include "ecofl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <unordered_map>

#include "ecofl/engine.hpp"
#include "ecofl/textio.hpp"

namespace ecofl::cfg {

void ScenarioConfig::finalize() {
    radio.qos[0].class_id = net::QosClassId::Voice;
    radio.qos[1].class_id = net::QosClassId::Embb;
    radio.rats[0].rat_id = net::RatId::LTE;
    radio.rats[1].rat_id = net::RatId::NR;
    // The eMBB transfer is the FL model update; its size follows the model.
    long fl_params = static_cast<long>(fl.n_features) * fl.hidden_dim + fl.hidden_dim +
                     static_cast<long>(fl.hidden_dim) * fl.n_classes + fl.n_classes;
    radio.packet_bits[static_cast<int>(net::QosClassId::Voice)] = voice_packet_bits;
    radio.packet_bits[static_cast<int>(net::QosClassId::Embb)] =
        static_cast<double>(fl_params * 32L);

    for (const auto& rat : radio.rats) rat.validate();
    for (const auto& q : radio.qos) q.validate();
    radio.plans.validate();
    policy.validate();
    rl.validate();
    xapp.validate();
    fl.validate();
    infrastructure().validate();

    if (voice_packet_bits <= 0.0)
        throw std::invalid_argument("net.voice.packet_bits: must be positive");
    if (activity_factor < 0.0 || activity_factor > 1.0)
        throw std::invalid_argument("energy.activity: must be in [0,1]");
    if (idle_power_w < 0.0) throw std::invalid_argument("energy.idle_w: must be >= 0");
    if (rx_power_w < 0.0) throw std::invalid_argument("energy.rx_w: must be >= 0");
    if (comp_energy_per_epoch_j <= 0.0)
        throw std::invalid_argument("energy.comp_per_epoch_j: must be positive");
    if (rl_train_steps < 0) throw std::invalid_argument("rl.train_steps: must be >= 0");
    if (xapp_corpus_size < 1) throw std::invalid_argument("xapp.corpus_size: must be >= 1");
    if (n_steps < 1) throw std::invalid_argument("sim.n_steps: must be >= 1");
    if (n_clients < 1) throw std::invalid_argument("sim.n_clients: must be >= 1");
    if (voice_fraction < 0.0 || voice_fraction > 1.0)
        throw std::invalid_argument("sim.voice_fraction: must be in [0,1]");
    if (fl_round_interval < 1)
        throw std::invalid_argument("sim.fl_round_interval: must be >= 1");
    (void)engine::Mode::parse(mode);  // fail on unknown modes here, not mid-run
    if (mobility.arena_m <= 0.0) throw std::invalid_argument("sim.arena_m: must be positive");
    if (mobility.speed_min_mps < 0.0 || mobility.speed_max_mps < mobility.speed_min_mps)
        throw std::invalid_argument("sim.speed range: need 0 <= min <= max");
    if (mobility.dt_s <= 0.0) throw std::invalid_argument("sim.dt_s: must be positive");
}

energy::InfrastructureConfig ScenarioConfig::infrastructure() const {
    energy::InfrastructureConfig infra;
    energy::ServerConfig server;
    server.active = true;
    server.base_energy_j = server_base_j;
    server.app_rate_j = {server_app_j};
    infra.servers.push_back(server);
    infra.allocations.push_back(energy::AppAllocation{0, 0, net::RatId::NR});
    energy::BaseStationConfig lte;
    lte.base_power_w = bs_lte_base_w;
    lte.rat_increment_w[static_cast<int>(net::RatId::LTE)] = bs_lte_rat_w;
    lte.rat_enabled[static_cast<int>(net::RatId::LTE)] = true;
    energy::BaseStationConfig nr;
    nr.base_power_w = bs_nr_base_w;
    nr.rat_increment_w[static_cast<int>(net::RatId::NR)] = bs_nr_rat_w;
    nr.rat_enabled[static_cast<int>(net::RatId::NR)] = true;
    infra.base_stations.push_back(lte);
    infra.base_stations.push_back(nr);
    return infra;
}

ScenarioConfig default_config() {
    ScenarioConfig c;
    c.finalize();
    return c;
}

namespace {

// Shorthand for registry rows; every accessor is a captureless lambda
// decaying to a function pointer.
using P = KeyDef::Ptr;

constexpr int kLte = static_cast<int>(net::RatId::LTE);
constexpr int kNr = static_cast<int>(net::RatId::NR);
constexpr int kVoice = static_cast<int>(net::QosClassId::Voice);
constexpr int kEmbb = static_cast<int>(net::QosClassId::Embb);

std::vector<KeyDef> build_registry() {
    std::vector<KeyDef> defs;
    auto add = [&defs](std::string key, std::string desc, P (*access)(ScenarioConfig&)) {
        defs.push_back(KeyDef{std::move(key), std::move(desc), access});
    };

    // --- net.* ---------------------------------------------------------
    add("net.lte.bandwidth_hz", "LTE cell bandwidth (Hz)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].bandwidth_hz; });
    add("net.lte.carrier_hz", "LTE carrier frequency (Hz)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].carrier_hz; });
    add("net.lte.prb_count", "PRBs available in the LTE cell",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].prb_count; });
    add("net.lte.max_tx_dbm", "LTE base-station transmit power (dBm)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].max_bs_tx_dbm; });
    add("net.lte.base_latency_s", "LTE access latency floor (s)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].base_latency_s; });
    add("net.lte.pathloss_exp", "LTE log-distance path-loss exponent",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].pathloss_exponent; });
    add("net.lte.noise_figure_db", "LTE receiver noise figure (dB)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].noise_figure_db; });
    add("net.lte.bs_x", "LTE eNB x position (m)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].bs_position.x; });
    add("net.lte.bs_y", "LTE eNB y position (m)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].bs_position.y; });
    add("net.lte.p_rf_w", "LTE front-end RF power (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].p_rf_w; });
    add("net.lte.p_bb_w", "LTE baseband power at full utilisation (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].p_bb_w; });
    add("net.lte.p_pa_w", "LTE power-amplifier ceiling (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].p_pa_w; });
    add("net.lte.pa_exponent", "LTE power-amplifier curve exponent",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].pa_exponent; });
    add("net.lte.p_max_ue_w", "LTE device maximum transmit power (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kLte].p_max_ue_w; });
    add("net.nr.bandwidth_hz", "NR cell bandwidth (Hz)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].bandwidth_hz; });
    add("net.nr.carrier_hz", "NR carrier frequency (Hz)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].carrier_hz; });
    add("net.nr.prb_count", "PRBs available in the NR cell",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].prb_count; });
    add("net.nr.max_tx_dbm", "NR base-station transmit power (dBm)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].max_bs_tx_dbm; });
    add("net.nr.base_latency_s", "NR access latency floor (s)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].base_latency_s; });
    add("net.nr.pathloss_exp", "NR log-distance path-loss exponent",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].pathloss_exponent; });
    add("net.nr.noise_figure_db", "NR receiver noise figure (dB)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].noise_figure_db; });
    add("net.nr.bs_x", "NR gNB x position (m)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].bs_position.x; });
    add("net.nr.bs_y", "NR gNB y position (m)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].bs_position.y; });
    add("net.nr.p_rf_w", "NR front-end RF power (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].p_rf_w; });
    add("net.nr.p_bb_w", "NR baseband power at full utilisation (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].p_bb_w; });
    add("net.nr.p_pa_w", "NR power-amplifier ceiling (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].p_pa_w; });
    add("net.nr.pa_exponent", "NR power-amplifier curve exponent",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].pa_exponent; });
    add("net.nr.p_max_ue_w", "NR device maximum transmit power (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.rats[kNr].p_max_ue_w; });
    add("net.voice.min_rate_bps", "voice QoS rate floor (bps)",
        [](ScenarioConfig& c) -> P { return &c.radio.qos[kVoice].min_rate_bps; });
    add("net.voice.max_latency_s", "voice QoS latency ceiling (s)",
        [](ScenarioConfig& c) -> P { return &c.radio.qos[kVoice].max_latency_s; });
    add("net.voice.packet_bits", "voice transfer size per step (bits)",
        [](ScenarioConfig& c) -> P { return &c.voice_packet_bits; });
    add("net.embb.min_rate_bps", "eMBB QoS rate floor (bps)",
        [](ScenarioConfig& c) -> P { return &c.radio.qos[kEmbb].min_rate_bps; });
    add("net.embb.max_latency_s", "eMBB QoS latency ceiling (s)",
        [](ScenarioConfig& c) -> P { return &c.radio.qos[kEmbb].max_latency_s; });

    // --- policy.* ------------------------------------------------------
    add("policy.m_voice", "voice multiplier of the voice-priority policy",
        [](ScenarioConfig& c) -> P { return &c.policy.m_voice; });
    add("policy.k_embb", "eMBB multiplier of the eMBB-priority policy",
        [](ScenarioConfig& c) -> P { return &c.policy.k_embb; });
    add("policy.alpha_v", "voice share of the dedicated-reservation policy",
        [](ScenarioConfig& c) -> P { return &c.policy.alpha_v; });
    add("policy.beta_e", "eMBB share of the dedicated-reservation policy",
        [](ScenarioConfig& c) -> P { return &c.policy.beta_e; });

    // --- energy.* ------------------------------------------------------
    add("energy.plan_s_w", "low power plan wattage (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.plans.watts[0]; });
    add("energy.plan_m_w", "mid power plan wattage (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.plans.watts[1]; });
    add("energy.plan_f_w", "full power plan wattage (W)",
        [](ScenarioConfig& c) -> P { return &c.radio.plans.watts[2]; });
    add("energy.activity", "client transmission activity factor",
        [](ScenarioConfig& c) -> P { return &c.activity_factor; });
    add("energy.idle_w", "client idle power floor (W)",
        [](ScenarioConfig& c) -> P { return &c.idle_power_w; });
    add("energy.rx_w", "client receive power for downlink transfers (W)",
        [](ScenarioConfig& c) -> P { return &c.rx_power_w; });
    add("energy.comp_per_epoch_j", "client computation energy per local epoch (J)",
        [](ScenarioConfig& c) -> P { return &c.comp_energy_per_epoch_j; });
    add("energy.server_base_j", "server activation energy per step (J)",
        [](ScenarioConfig& c) -> P { return &c.server_base_j; });
    add("energy.server_app_j", "per-application server energy per step (J)",
        [](ScenarioConfig& c) -> P { return &c.server_app_j; });
    add("energy.bs_lte_base_w", "LTE base-station standing power (W)",
        [](ScenarioConfig& c) -> P { return &c.bs_lte_base_w; });
    add("energy.bs_lte_rat_w", "LTE RAT activation increment (W)",
        [](ScenarioConfig& c) -> P { return &c.bs_lte_rat_w; });
    add("energy.bs_nr_base_w", "NR base-station standing power (W)",
        [](ScenarioConfig& c) -> P { return &c.bs_nr_base_w; });
    add("energy.bs_nr_rat_w", "NR RAT activation increment (W)",
        [](ScenarioConfig& c) -> P { return &c.bs_nr_rat_w; });

    // --- rl.* ----------------------------------------------------------
    add("rl.learning_rate", "Q-learning step size",
        [](ScenarioConfig& c) -> P { return &c.rl.learning_rate; });
    add("rl.discount", "Q-learning discount factor",
        [](ScenarioConfig& c) -> P { return &c.rl.discount; });
    add("rl.batch_size", "replay batch size per update",
        [](ScenarioConfig& c) -> P { return &c.rl.batch_size; });
    add("rl.initial_steps", "steps of pure uniform exploration",
        [](ScenarioConfig& c) -> P { return &c.rl.initial_steps; });
    add("rl.epsilon_floor", "exploration probability floor after decay",
        [](ScenarioConfig& c) -> P { return &c.rl.epsilon_floor; });
    add("rl.epsilon_halflife", "exploration decay half-life (steps)",
        [](ScenarioConfig& c) -> P { return &c.rl.epsilon_halflife; });
    add("rl.replay_capacity", "replay buffer capacity (transitions)",
        [](ScenarioConfig& c) -> P { return &c.rl.replay_capacity; });
    add("rl.updates_per_step", "replay batches applied per training step",
        [](ScenarioConfig& c) -> P { return &c.rl.updates_per_step; });
    add("rl.reward_alpha", "reward weight on energy efficiency",
        [](ScenarioConfig& c) -> P { return &c.rl.weights.alpha; });
    add("rl.reward_beta", "reward weight on normalized throughput",
        [](ScenarioConfig& c) -> P { return &c.rl.weights.beta; });
    add("rl.reward_gamma", "reward weight on normalized latency",
        [](ScenarioConfig& c) -> P { return &c.rl.weights.gamma; });
    add("rl.train_steps", "warmup training steps before the measured run",
        [](ScenarioConfig& c) -> P { return &c.rl_train_steps; });
    add("rl.snr_edge0_db", "first SNR bucket edge (dB)",
        [](ScenarioConfig& c) -> P { return &c.rl.snr_edges_db[0]; });
    add("rl.snr_edge1_db", "second SNR bucket edge (dB)",
        [](ScenarioConfig& c) -> P { return &c.rl.snr_edges_db[1]; });
    add("rl.snr_edge2_db", "third SNR bucket edge (dB)",
        [](ScenarioConfig& c) -> P { return &c.rl.snr_edges_db[2]; });
    add("rl.snr_edge3_db", "fourth SNR bucket edge (dB)",
        [](ScenarioConfig& c) -> P { return &c.rl.snr_edges_db[3]; });
    add("rl.load_edge0", "first load bucket edge (offered/capacity)",
        [](ScenarioConfig& c) -> P { return &c.rl.load_edges[0]; });
    add("rl.load_edge1", "second load bucket edge (offered/capacity)",
        [](ScenarioConfig& c) -> P { return &c.rl.load_edges[1]; });
    add("rl.load_edge2", "third load bucket edge (offered/capacity)",
        [](ScenarioConfig& c) -> P { return &c.rl.load_edges[2]; });

    // --- xapp.* --------------------------------------------------------
    add("xapp.learning_rate", "classifier gradient-descent step size",
        [](ScenarioConfig& c) -> P { return &c.xapp.learning_rate; });
    add("xapp.batch_size", "classifier mini-batch size",
        [](ScenarioConfig& c) -> P { return &c.xapp.batch_size; });
    add("xapp.train_epochs", "classifier training epochs",
        [](ScenarioConfig& c) -> P { return &c.xapp.train_epochs; });
    add("xapp.corpus_size", "labeled scenarios generated for training",
        [](ScenarioConfig& c) -> P { return &c.xapp_corpus_size; });
    add("xapp.weights_path", "classifier weights file; empty trains at startup",
        [](ScenarioConfig& c) -> P { return &c.xapp_weights_path; });
    add("xapp.gen_min_clients", "corpus generator: minimum client count",
        [](ScenarioConfig& c) -> P { return &c.xapp.gen_min_clients; });
    add("xapp.gen_max_clients", "corpus generator: maximum client count",
        [](ScenarioConfig& c) -> P { return &c.xapp.gen_max_clients; });
    add("xapp.gen_min_voice_frac", "corpus generator: minimum voice fraction",
        [](ScenarioConfig& c) -> P { return &c.xapp.gen_min_voice_fraction; });
    add("xapp.gen_max_voice_frac", "corpus generator: maximum voice fraction",
        [](ScenarioConfig& c) -> P { return &c.xapp.gen_max_voice_fraction; });
    add("xapp.gen_max_steer", "corpus generator: upper bound of class-steering strength",
        [](ScenarioConfig& c) -> P { return &c.xapp.gen_max_steer; });
    add("xapp.gen_arena_m", "corpus generator: arena side (m)",
        [](ScenarioConfig& c) -> P { return &c.xapp.gen_arena_m; });

    // --- fl.* ----------------------------------------------------------
    add("fl.n_features", "synthetic task feature dimension",
        [](ScenarioConfig& c) -> P { return &c.fl.n_features; });
    add("fl.n_classes", "synthetic task class count",
        [](ScenarioConfig& c) -> P { return &c.fl.n_classes; });
    add("fl.hidden_dim", "task model hidden width",
        [](ScenarioConfig& c) -> P { return &c.fl.hidden_dim; });
    add("fl.train_samples", "training set size",
        [](ScenarioConfig& c) -> P { return &c.fl.train_samples; });
    add("fl.test_samples", "test set size",
        [](ScenarioConfig& c) -> P { return &c.fl.test_samples; });
    add("fl.noise_sigma", "per-coordinate blob noise",
        [](ScenarioConfig& c) -> P { return &c.fl.noise_sigma; });
    add("fl.learning_rate", "local training step size",
        [](ScenarioConfig& c) -> P { return &c.fl.learning_rate; });
    add("fl.batch_size", "local training mini-batch size",
        [](ScenarioConfig& c) -> P { return &c.fl.batch_size; });
    add("fl.local_epochs", "local epochs per round (tau)",
        [](ScenarioConfig& c) -> P { return &c.fl.local_epochs; });
    add("fl.weighted_aggregation", "weight the mean by client sample counts",
        [](ScenarioConfig& c) -> P { return &c.fl.weighted_aggregation; });
    add("fl.dirichlet_partition", "use the skewed partition instead of IID",
        [](ScenarioConfig& c) -> P { return &c.fl.dirichlet_partition; });
    add("fl.dirichlet_alpha", "skew parameter of the non-IID partition",
        [](ScenarioConfig& c) -> P { return &c.fl.dirichlet_alpha; });

    // --- sim.* ---------------------------------------------------------
    add("sim.seed", "run seed; all substreams derive from it",
        [](ScenarioConfig& c) -> P { return &c.seed; });
    add("sim.n_steps", "measured steps per run",
        [](ScenarioConfig& c) -> P { return &c.n_steps; });
    add("sim.n_clients", "total client count",
        [](ScenarioConfig& c) -> P { return &c.n_clients; });
    add("sim.voice_fraction", "fraction of clients in the voice class",
        [](ScenarioConfig& c) -> P { return &c.voice_fraction; });
    add("sim.fl_round_interval", "steps between FL rounds",
        [](ScenarioConfig& c) -> P { return &c.fl_round_interval; });
    add("sim.mode", "run mode (ecofl, baseline_fixed_rat:<RAT>:<PLAN>, "
                    "fixed_policy:<P1..P4>, oracle_policy, greedy_energy)",
        [](ScenarioConfig& c) -> P { return &c.mode; });
    add("sim.arena_m", "square arena side (m)",
        [](ScenarioConfig& c) -> P { return &c.mobility.arena_m; });
    add("sim.speed_min_mps", "minimum waypoint speed (m/s)",
        [](ScenarioConfig& c) -> P { return &c.mobility.speed_min_mps; });
    add("sim.speed_max_mps", "maximum waypoint speed (m/s)",
        [](ScenarioConfig& c) -> P { return &c.mobility.speed_max_mps; });
    add("sim.dt_s", "step duration (s)",
        [](ScenarioConfig& c) -> P { return &c.mobility.dt_s; });
    return defs;
}

template <class T>
T parse_number(const std::string& value, const std::string& key) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    std::from_chars_result res{};
    if constexpr (std::is_floating_point_v<T>)
        res = std::from_chars(first, last, out, std::chars_format::general);
    else
        res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::invalid_argument(key + ": cannot parse value '" + value + "'");
    return out;
}

} // namespace

const std::vector<KeyDef>& key_registry() {
    static const std::vector<KeyDef> defs = build_registry();
    return defs;
}

std::string get_key(const ScenarioConfig& c, const KeyDef& def) {
    auto ptr = def.access(const_cast<ScenarioConfig&>(c));
    return std::visit(
        [](auto* p) -> std::string {
            using T = std::remove_pointer_t<decltype(p)>;
            if constexpr (std::is_same_v<T, double>) return format_double_exact(*p);
            else if constexpr (std::is_same_v<T, bool>) return *p ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) return *p;
            else return std::to_string(*p);
        },
        ptr);
}

void set_key(ScenarioConfig& c, const KeyDef& def, const std::string& value) {
    auto ptr = def.access(c);
    std::visit(
        [&](auto* p) {
            using T = std::remove_pointer_t<decltype(p)>;
            if constexpr (std::is_same_v<T, bool>) {
                if (value == "true" || value == "1") *p = true;
                else if (value == "false" || value == "0") *p = false;
                else throw std::invalid_argument(def.key + ": expected true/false");
            } else if constexpr (std::is_same_v<T, std::string>) {
                *p = value;
            } else {
                *p = parse_number<T>(value, def.key);
            }
        },
        ptr);
}

static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig c;
    std::unordered_map<std::string, const KeyDef*> index;
    for (const auto& def : key_registry()) index[def.key] = &def;
    std::unordered_map<std::string, int> seen;

    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        auto it = index.find(key);
        if (it == index.end())
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        if (auto prev = seen.find(key); prev != seen.end())
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": duplicate key '" + key + "' (first at line " +
                                        std::to_string(prev->second) + ")");
        seen[key] = line_no;
        try {
            set_key(c, *it->second, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    c.finalize();
    return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream os;
    std::string section;
    for (const auto& def : key_registry()) {
        std::string sec = def.key.substr(0, def.key.find('.'));
        if (sec != section) {
            if (!section.empty()) os << '\n';
            section = sec;
        }
        os << def.key << " = " << get_key(c, def) << '\n';
    }
    return os.str();
}

} // namespace ecofl::cfg
