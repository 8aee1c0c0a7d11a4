#include "ecofl/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ecofl/textio.hpp"

namespace ecofl::net {

const char* rat_name(RatId r) {
    return r == RatId::LTE ? "LTE" : "NR";
}

const char* plan_name(PowerPlanId p) {
    switch (p) {
        case PowerPlanId::Low: return "P_S";
        case PowerPlanId::Mid: return "P_M";
        case PowerPlanId::Full: return "P_F";
    }
    return "?";
}

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void RatConfig::validate() const {
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("net: bandwidth must be positive");
    if (carrier_hz <= 0.0) throw std::invalid_argument("net: carrier frequency must be positive");
    if (prb_count < 1) throw std::invalid_argument("net: prb_count must be >= 1");
    if (pathloss_exponent < 1.0)
        throw std::invalid_argument("net: pathloss exponent must be >= 1");
    if (p_max_ue_w <= 0.0) throw std::invalid_argument("net: p_max_ue must be positive");
    if (base_latency_s < 0.0) throw std::invalid_argument("net: base latency must be >= 0");
}

double RatConfig::capacity_bps() const {
    return static_cast<double>(prb_count) * kPrbBandwidthHz * kSpectralEfficiencyCap;
}

RatConfig default_lte_config() {
    RatConfig c;
    c.rat_id = RatId::LTE;
    c.bandwidth_hz = 10e6;
    c.carrier_hz = 800e6;
    c.prb_count = 50;
    c.max_bs_tx_dbm = 38.0;
    c.base_latency_s = 0.020;
    c.pathloss_exponent = 3.5;
    c.noise_figure_db = 7.0;
    c.bs_position = {250.0, 250.0};
    c.p_rf_w = 0.05;
    c.p_bb_w = 0.10;
    c.p_pa_w = 0.30;
    c.pa_exponent = 2.0;
    c.p_max_ue_w = 0.5;
    return c;
}

RatConfig default_nr_config() {
    RatConfig c;
    c.rat_id = RatId::NR;
    c.bandwidth_hz = 20e6;
    c.carrier_hz = 3.5e9;
    c.prb_count = 106;
    c.max_bs_tx_dbm = 43.0;
    c.base_latency_s = 0.010;
    // Micro-cell exponent; the macro eNB above keeps 3.5. At 3.5 GHz this
    // leaves the gNB usable across the whole default arena.
    c.pathloss_exponent = 2.8;
    c.noise_figure_db = 7.0;
    c.bs_position = {150.0, 150.0};
    c.p_rf_w = 0.08;
    c.p_bb_w = 0.15;
    c.p_pa_w = 0.35;
    c.pa_exponent = 2.2;
    c.p_max_ue_w = 0.5;
    return c;
}

void QosClass::validate() const {
    if (min_rate_bps <= 0.0) throw std::invalid_argument("net: min_rate must be positive");
    if (max_latency_s <= 0.0) throw std::invalid_argument("net: max_latency must be positive");
}

int NetworkState::count_on_rat(RatId r) const {
    int n = 0;
    for (const auto& c : clients)
        if (c.assigned_rat == r) ++n;
    return n;
}

int NetworkState::count_class(QosClassId cls) const {
    int n = 0;
    for (const auto& c : clients)
        if (c.qos_class == cls) ++n;
    return n;
}

double path_loss_db(const RatConfig& rat, double distance_m) {
    double d = std::max(distance_m, 1.0);
    double fspl_1m =
        20.0 * std::log10(4.0 * std::numbers::pi * rat.carrier_hz / kSpeedOfLightMps);
    return fspl_1m + 10.0 * rat.pathloss_exponent * std::log10(d);
}

// Noise power over one PRB of bandwidth, in dBm, including the receiver
// noise figure.
static double noise_dbm_per_prb(const RatConfig& rat) {
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(kPrbBandwidthHz) + rat.noise_figure_db;
}

double snr_linear_tx(const RatConfig& rat, double tx_power_dbm, double distance_m) {
    double snr_db = tx_power_dbm - path_loss_db(rat, distance_m) - noise_dbm_per_prb(rat);
    return std::max(std::pow(10.0, snr_db / 10.0), kSnrFloor);
}

double snr_linear(const RatConfig& rat, const Client& client) {
    double d = distance(client.position, rat.bs_position);
    return snr_linear_tx(rat, rat.max_bs_tx_dbm, d);
}

double watts_to_dbm(double watts) {
    return 10.0 * std::log10(watts * 1000.0);
}

double uplink_snr_linear(const RatConfig& rat, double tx_power_w, double distance_m) {
    return snr_linear_tx(rat, watts_to_dbm(tx_power_w), distance_m);
}

double achievable_rate_bps(double prbs, double snr, const RatConfig&) {
    if (prbs <= 0.0) return 0.0;
    double se = std::min(std::log2(1.0 + snr), kSpectralEfficiencyCap);
    return prbs * kPrbBandwidthHz * se;
}

double latency_s(double rate_bps, const RatConfig& rat, double packet_bits) {
    if (rate_bps <= 0.0) return std::numeric_limits<double>::infinity();
    return rat.base_latency_s + packet_bits / rate_bps;
}

bool check_outage(double rate_bps, double latency_value_s, const QosClass& qos) {
    return rate_bps < qos.min_rate_bps || latency_value_s > qos.max_latency_s;
}

void move_clients(NetworkState& state, const MobilityConfig& mobility, Rng& rng) {
    for (auto& c : state.clients) {
        if (c.speed_mps <= 0.0) continue;
        double step = c.speed_mps * mobility.dt_s;
        double remaining = distance(c.position, c.waypoint);
        if (remaining <= step) {
            // Arrived: land exactly on the waypoint, then pick the next leg.
            c.position = c.waypoint;
            c.waypoint.x = rng.uniform(0.0, mobility.arena_m);
            c.waypoint.y = rng.uniform(0.0, mobility.arena_m);
            c.speed_mps = rng.uniform(mobility.speed_min_mps, mobility.speed_max_mps);
        } else {
            double ux = (c.waypoint.x - c.position.x) / remaining;
            double uy = (c.waypoint.y - c.position.y) / remaining;
            c.position.x += ux * step;
            c.position.y += uy * step;
        }
        c.position.x = std::clamp(c.position.x, 0.0, mobility.arena_m);
        c.position.y = std::clamp(c.position.y, 0.0, mobility.arena_m);
        c.velocity.x = 0.0;
        c.velocity.y = 0.0;
        if (double rem = distance(c.position, c.waypoint); rem > 0.0) {
            c.velocity.x = (c.waypoint.x - c.position.x) / rem * c.speed_mps;
            c.velocity.y = (c.waypoint.y - c.position.y) / rem * c.speed_mps;
        }
    }
    ++state.time_step;
}

void refresh_distribution(NetworkState& state, const QosClass& voice_qos,
                          const QosClass& embb_qos) {
    state.offered_load_bps[0] = 0.0;
    state.offered_load_bps[1] = 0.0;
    for (int r = 0; r < kNumRats; ++r)
        for (int q = 0; q < kNumQosClasses; ++q)
            state.users_per_rat_class[r][q] = 0;
    for (const auto& c : state.clients) {
        int r = static_cast<int>(c.assigned_rat);
        int q = static_cast<int>(c.qos_class);
        state.users_per_rat_class[r][q] += 1;
        const QosClass& qos = (c.qos_class == QosClassId::Voice) ? voice_qos : embb_qos;
        state.offered_load_bps[r] += qos.min_rate_bps;
    }
}

std::string state_to_string(const NetworkState& state) {
    std::ostringstream os;
    os << "t=" << state.time_step << "\n";
    for (const auto& c : state.clients) {
        os << c.client_id << ' ' << format_double(c.position.x) << ' '
           << format_double(c.position.y) << ' ' << format_double(c.speed_mps) << ' '
           << static_cast<int>(c.qos_class) << ' ' << static_cast<int>(c.assigned_rat)
           << ' ' << static_cast<int>(c.power_plan) << '\n';
    }
    return os.str();
}

} // namespace ecofl::net
