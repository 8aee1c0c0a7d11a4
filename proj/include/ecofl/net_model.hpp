// net_model.hpp - dual-RAT radio model: log-distance channel, per-PRB link
// budget, achievable rate, latency, QoS/outage checks, and random-waypoint
// mobility. All transitions are pure functions of (state, config, rng).

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ecofl/rng.hpp"

namespace ecofl::net {

inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kPrbBandwidthHz = 180e3;
inline constexpr double kSpectralEfficiencyCap = 7.4;   // bps/Hz
inline constexpr double kThermalNoiseDbmPerHz = -174.0;
inline constexpr double kSnrFloor = 1e-12;

enum class RatId : int { LTE = 0, NR = 1 };
constexpr int kNumRats = 2;

const char* rat_name(RatId r);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

// One radio access technology: cell geometry, channel law, and the device
// power-model constants consumed by the energy module.
struct RatConfig {
    RatId rat_id = RatId::LTE;
    double bandwidth_hz = 10e6;
    double carrier_hz = 800e6;
    int prb_count = 50;
    double max_bs_tx_dbm = 38.0;
    double base_latency_s = 0.020;
    double pathloss_exponent = 3.5;
    double noise_figure_db = 7.0;
    Vec2 bs_position{250.0, 250.0};
    // Device power model (reporting only): P = P_RF + P_BB*rho + P_PA*(Ptx/Pmax)^exp
    double p_rf_w = 0.05;
    double p_bb_w = 0.10;
    double p_pa_w = 0.30;
    double pa_exponent = 2.0;   // beta for LTE, gamma for NR
    double p_max_ue_w = 0.5;

    void validate() const;
    double capacity_bps() const;  // prb_count * 180 kHz * cap
};

RatConfig default_lte_config();
RatConfig default_nr_config();

enum class QosClassId : int { Voice = 0, Embb = 1 };
constexpr int kNumQosClasses = 2;

struct QosClass {
    QosClassId class_id = QosClassId::Voice;
    double min_rate_bps = 0.1e6;
    double max_latency_s = 0.100;

    void validate() const;
};

enum class PowerPlanId : int { Low = 0, Mid = 1, Full = 2 };  // P_S, P_M, P_F
constexpr int kNumPowerPlans = 3;

const char* plan_name(PowerPlanId p);

struct Client {
    int client_id = 0;
    Vec2 position;
    Vec2 velocity;
    Vec2 waypoint;
    double speed_mps = 0.0;
    QosClassId qos_class = QosClassId::Voice;
    bool is_fl_participant = false;
    RatId assigned_rat = RatId::LTE;
    PowerPlanId power_plan = PowerPlanId::Full;
    double activity_factor = 0.792;
    double idle_power_w = 0.1;
    double rx_power_w = 0.1;
};

// Per-client radio outcome for one step, filled in by the engine.
struct QosOutcome {
    double rate_bps = 0.0;
    double latency_s = std::numeric_limits<double>::infinity();
    double rate_margin = -1.0;     // rate/min_rate - 1
    double latency_margin = -1.0;  // 1 - latency/max_latency
    bool outage = true;
};

// Observable network state at one time step: the clients plus the derived
// per-RAT load, per-client QoS outcomes, and user-distribution counts.
struct NetworkState {
    long time_step = 0;
    std::vector<Client> clients;
    double offered_load_bps[kNumRats] = {0.0, 0.0};
    std::vector<QosOutcome> qos;                       // one entry per client
    int users_per_rat_class[kNumRats][kNumQosClasses] = {{0, 0}, {0, 0}};

    int count_on_rat(RatId r) const;
    int count_class(QosClassId c) const;
};

// log-distance path loss anchored at the 1 m free-space loss. Distances
// below 1 m clamp to 1 m.
double path_loss_db(const RatConfig& rat, double distance_m);

// Linear SNR for an arbitrary transmit power over one PRB of noise
// bandwidth. Floored at kSnrFloor so no NaN/Inf enters the rate chain.
double snr_linear_tx(const RatConfig& rat, double tx_power_dbm, double distance_m);

// Downlink SNR at the base station's maximum transmit power.
double snr_linear(const RatConfig& rat, const Client& client);

// Uplink SNR at the client's transmit power (watts).
double uplink_snr_linear(const RatConfig& rat, double tx_power_w, double distance_m);

double watts_to_dbm(double watts);

// Shannon rate over `prbs` resource blocks with the spectral-efficiency cap.
double achievable_rate_bps(double prbs, double snr, const RatConfig& rat);

// Transfer latency: RAT base latency plus serialization of packet_bits.
// Zero rate yields +infinity (guaranteed outage).
double latency_s(double rate_bps, const RatConfig& rat, double packet_bits);

// Outage iff rate < min_rate or latency > max_latency. Thresholds are
// closed: meeting either bound exactly passes.
bool check_outage(double rate_bps, double latency_value_s, const QosClass& qos);

struct MobilityConfig {
    double arena_m = 500.0;
    double speed_min_mps = 1.0;
    double speed_max_mps = 3.0;
    double dt_s = 1.0;
};

// Random-waypoint update. A client with zero speed never moves. Positions
// stay inside [0, arena]^2. Consumes only the supplied stream.
void move_clients(NetworkState& state, const MobilityConfig& mobility, Rng& rng);

// Recomputes offered load and user-distribution counts from assignments.
// Offered load per RAT is the sum of the QoS minimum rates of the clients
// attached to it.
void refresh_distribution(NetworkState& state, const QosClass& voice_qos,
                          const QosClass& embb_qos);

// Deterministic text dump used by determinism checks and test oracles.
std::string state_to_string(const NetworkState& state);

} // namespace ecofl::net
