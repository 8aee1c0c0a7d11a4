// energy_model.hpp - power and energy accounting: per-client power, network
// efficiency, constrained plan selection, RAT device power, server/BS
// infrastructure energy, and FL round energy. Everything here is a pure
// function of its arguments.

#pragma once

#include <vector>

#include "ecofl/net_model.hpp"

namespace ecofl::energy {

// Wattages of the three transmit-power plans, indexed by PowerPlanId.
struct PowerPlans {
    double watts[net::kNumPowerPlans] = {0.15, 0.30, 0.50};

    double plan_w(net::PowerPlanId p) const { return watts[static_cast<int>(p)]; }
    void validate() const;  // requires 0 < low < mid < full
};

// Per-client consumed power: plan wattage scaled by the transmission
// activity factor, plus a constant idle floor.
double client_power_w(double plan_w, double activity, double idle_w);

// Network total: sum of client_power_w over all clients, using each
// client's current plan. Empty set gives 0.
double total_power_w(const std::vector<net::Client>& clients, const PowerPlans& plans);

// eta = 1 - total / (n_clients * p_full_w). Raw value, never clamped; can
// go negative when idle power pushes consumption above the plan ceiling.
double energy_efficiency(double total_w, int n_clients, double p_full_w);

struct PlanChoice {
    net::PowerPlanId plan = net::PowerPlanId::Full;
    bool feasible = false;
};

// Lowest-wattage plan whose uplink rate and latency meet the QoS bounds,
// given the client's PRB share and distance. Falls back to Full with
// feasible=false when even full power misses the bounds.
PlanChoice min_feasible_plan(const PowerPlans& plans, const net::RatConfig& rat,
                             double prbs, double distance_m, const net::QosClass& qos,
                             double packet_bits);

// Device-side power draw for the active RAT front end:
//   P = P_RF + P_BB * rho + P_PA * (P_tx / P_max)^exponent
// Reporting-only model; does not feed total_power_w.
double rat_device_power_w(const net::RatConfig& rat, double rho, double p_tx_w);

struct ServerConfig {
    bool active = true;          // x_s
    double base_energy_j = 50.0; // E_s^base
    std::vector<double> app_rate_j{12.5};  // e_{a,s}, indexed by application
};

// One application hosted on one RAT slice of one server (y_{r,a,s} = 1).
struct AppAllocation {
    int server = 0;
    int app = 0;
    net::RatId rat = net::RatId::NR;
};

struct BaseStationConfig {
    double base_power_w = 0.0;                 // P_BS^base
    double rat_increment_w[net::kNumRats] = {0.0, 0.0};  // P_BS^(r)
    bool rat_enabled[net::kNumRats] = {false, false};    // xi_{b,r}
};

struct InfrastructureConfig {
    std::vector<ServerConfig> servers;
    std::vector<AppAllocation> allocations;
    std::vector<BaseStationConfig> base_stations;

    void validate() const;
};

InfrastructureConfig default_infrastructure();

// E_s = x_s * E_base + sum over this server's allocations of e_{a,s}.
// An allocation on an inactive server is an invariant violation.
double server_energy_j(const ServerConfig& server, int server_index,
                       const std::vector<AppAllocation>& allocations);

// Total per-step infrastructure energy: all servers plus all base stations
// (base power plus enabled per-RAT increments). dt = 1 s, so watts and
// joules per step coincide.
double infrastructure_energy_j(const InfrastructureConfig& config);

struct FlEnergyParams {
    double comp_energy_per_epoch_j = 0.5;  // E_comp
    int local_epochs = 5;                  // tau_local

    void validate() const;  // both strictly positive
};

// E = E_comp * tau + E_up + E_down.
double fl_round_energy_j(double comp_energy_per_epoch_j, int local_epochs,
                         double up_j, double down_j);

// E = model_bits * power / rate. Zero rate yields +infinity (the client is
// excluded from the round).
double comm_energy_j(double model_bits, double power_w, double rate_bps);

} // namespace ecofl::energy
