#include "ecofl/energy_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecofl::energy {

void PowerPlans::validate() const {
    if (!(watts[0] > 0.0 && watts[0] < watts[1] && watts[1] < watts[2]))
        throw std::invalid_argument("energy: plan wattages must satisfy 0 < low < mid < full");
}

double client_power_w(double plan_w, double activity, double idle_w) {
    if (activity < 0.0 || activity > 1.0)
        throw std::domain_error("energy: activity factor outside [0,1]");
    if (idle_w < 0.0)
        throw std::domain_error("energy: idle power must be >= 0");
    return plan_w * activity + idle_w;
}

double total_power_w(const std::vector<net::Client>& clients, const PowerPlans& plans) {
    double total = 0.0;
    for (const auto& c : clients)
        total += client_power_w(plans.plan_w(c.power_plan), c.activity_factor, c.idle_power_w);
    return total;
}

double energy_efficiency(double total_w, int n_clients, double p_full_w) {
    if (n_clients < 1)
        throw std::domain_error("energy: efficiency needs at least one client");
    if (p_full_w <= 0.0)
        throw std::domain_error("energy: full-plan power must be positive");
    return 1.0 - total_w / (static_cast<double>(n_clients) * p_full_w);
}

PlanChoice min_feasible_plan(const PowerPlans& plans, const net::RatConfig& rat,
                             double prbs, double distance_m, const net::QosClass& qos,
                             double packet_bits) {
    // Constraints are per-client separable and power-monotone, so scanning
    // plans from lowest wattage up yields the exact optimum.
    for (int p = 0; p < net::kNumPowerPlans; ++p) {
        auto plan = static_cast<net::PowerPlanId>(p);
        double snr = net::uplink_snr_linear(rat, plans.plan_w(plan), distance_m);
        double rate = net::achievable_rate_bps(prbs, snr, rat);
        double lat = net::latency_s(rate, rat, packet_bits);
        if (!net::check_outage(rate, lat, qos)) return {plan, true};
    }
    return {net::PowerPlanId::Full, false};
}

double rat_device_power_w(const net::RatConfig& rat, double rho, double p_tx_w) {
    if (rho < 0.0 || rho > 1.0)
        throw std::domain_error("energy: resource utilisation outside [0,1]");
    if (p_tx_w < 0.0 || p_tx_w > rat.p_max_ue_w)
        throw std::domain_error("energy: transmit power outside [0, p_max]");
    return rat.p_rf_w + rat.p_bb_w * rho +
           rat.p_pa_w * std::pow(p_tx_w / rat.p_max_ue_w, rat.pa_exponent);
}

void InfrastructureConfig::validate() const {
    for (const auto& s : servers) {
        if (s.base_energy_j < 0.0)
            throw std::invalid_argument("energy: server base energy must be >= 0");
        for (double e : s.app_rate_j)
            if (e < 0.0) throw std::invalid_argument("energy: application energy must be >= 0");
    }
    for (const auto& a : allocations) {
        if (a.server < 0 || a.server >= static_cast<int>(servers.size()))
            throw std::invalid_argument("energy: allocation references unknown server");
        const auto& s = servers[static_cast<size_t>(a.server)];
        if (!s.active)
            throw std::invalid_argument("energy: allocation on inactive server");
        if (a.app < 0 || a.app >= static_cast<int>(s.app_rate_j.size()))
            throw std::invalid_argument("energy: allocation references unknown application");
    }
    for (const auto& b : base_stations) {
        if (b.base_power_w < 0.0)
            throw std::invalid_argument("energy: base-station power must be >= 0");
        for (double w : b.rat_increment_w)
            if (w < 0.0) throw std::invalid_argument("energy: RAT increment must be >= 0");
    }
}

InfrastructureConfig default_infrastructure() {
    InfrastructureConfig c;
    c.servers.push_back(ServerConfig{});  // one FL aggregation host
    c.allocations.push_back(AppAllocation{0, 0, net::RatId::NR});
    BaseStationConfig lte;
    lte.base_power_w = 130.0;
    lte.rat_increment_w[static_cast<int>(net::RatId::LTE)] = 100.0;
    lte.rat_enabled[static_cast<int>(net::RatId::LTE)] = true;
    BaseStationConfig nr;
    nr.base_power_w = 150.0;
    nr.rat_increment_w[static_cast<int>(net::RatId::NR)] = 120.0;
    nr.rat_enabled[static_cast<int>(net::RatId::NR)] = true;
    c.base_stations.push_back(lte);
    c.base_stations.push_back(nr);
    return c;
}

double server_energy_j(const ServerConfig& server, int server_index,
                       const std::vector<AppAllocation>& allocations) {
    double e = server.active ? server.base_energy_j : 0.0;
    for (const auto& a : allocations) {
        if (a.server != server_index) continue;
        if (!server.active)
            throw std::invalid_argument("energy: allocation on inactive server");
        if (a.app < 0 || a.app >= static_cast<int>(server.app_rate_j.size()))
            throw std::invalid_argument("energy: allocation references unknown application");
        e += server.app_rate_j[static_cast<size_t>(a.app)];
    }
    return e;
}

double infrastructure_energy_j(const InfrastructureConfig& config) {
    double total = 0.0;
    for (size_t i = 0; i < config.servers.size(); ++i)
        total += server_energy_j(config.servers[i], static_cast<int>(i), config.allocations);
    for (const auto& b : config.base_stations) {
        total += b.base_power_w;
        for (int r = 0; r < net::kNumRats; ++r)
            if (b.rat_enabled[r]) total += b.rat_increment_w[r];
    }
    return total;
}

void FlEnergyParams::validate() const {
    if (comp_energy_per_epoch_j <= 0.0)
        throw std::invalid_argument("energy: computation energy per epoch must be positive");
    if (local_epochs < 1)
        throw std::invalid_argument("energy: local epoch count must be >= 1");
}

double fl_round_energy_j(double comp_energy_per_epoch_j, int local_epochs,
                         double up_j, double down_j) {
    if (comp_energy_per_epoch_j < 0.0 || local_epochs < 0 || up_j < 0.0 || down_j < 0.0)
        throw std::domain_error("energy: FL round energy inputs must be >= 0");
    return comp_energy_per_epoch_j * local_epochs + up_j + down_j;
}

double comm_energy_j(double model_bits, double power_w, double rate_bps) {
    if (model_bits < 0.0 || power_w < 0.0 || rate_bps < 0.0)
        throw std::domain_error("energy: communication energy inputs must be >= 0");
    if (rate_bps == 0.0) return std::numeric_limits<double>::infinity();
    return model_bits * power_w / rate_bps;
}

} // namespace ecofl::energy
