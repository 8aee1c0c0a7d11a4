// context.hpp - the radio-side configuration bundle shared by the RL state
// encoder, the policy oracle, and the engine's outcome phase, plus the one
// evaluation primitive they all use.

#pragma once

#include "ecofl/energy_model.hpp"
#include "ecofl/net_model.hpp"

namespace ecofl {

struct RadioContext {
    net::RatConfig rats[net::kNumRats];
    energy::PowerPlans plans;
    net::QosClass qos[net::kNumQosClasses];
    // Transfer sizes per QoS class; eMBB carries FL model updates.
    double packet_bits[net::kNumQosClasses] = {1000.0, 77120.0};

    const net::RatConfig& rat_of(const net::Client& c) const {
        return rats[static_cast<int>(c.assigned_rat)];
    }
    const net::QosClass& qos_of(const net::Client& c) const {
        return qos[static_cast<int>(c.qos_class)];
    }
    double packet_of(const net::Client& c) const {
        return packet_bits[static_cast<int>(c.qos_class)];
    }
};

RadioContext default_radio_context();

// Uplink outcome of one client over `prbs` resource blocks at its current
// RAT and power plan: rate, latency, outage flag, and signed QoS margins.
net::QosOutcome evaluate_client(const RadioContext& ctx, const net::Client& c, double prbs);

} // namespace ecofl
