#include "ecofl/context.hpp"

#include <cmath>

namespace ecofl {

RadioContext default_radio_context() {
    RadioContext ctx;
    ctx.rats[static_cast<int>(net::RatId::LTE)] = net::default_lte_config();
    ctx.rats[static_cast<int>(net::RatId::NR)] = net::default_nr_config();
    ctx.qos[static_cast<int>(net::QosClassId::Voice)] = {net::QosClassId::Voice, 0.1e6, 0.100};
    ctx.qos[static_cast<int>(net::QosClassId::Embb)] = {net::QosClassId::Embb, 10e6, 0.080};
    return ctx;
}

net::QosOutcome evaluate_client(const RadioContext& ctx, const net::Client& c, double prbs) {
    const net::RatConfig& rat = ctx.rat_of(c);
    const net::QosClass& qos = ctx.qos_of(c);
    double d = net::distance(c.position, rat.bs_position);
    double snr = net::uplink_snr_linear(rat, ctx.plans.plan_w(c.power_plan), d);
    net::QosOutcome out;
    out.rate_bps = net::achievable_rate_bps(prbs, snr, rat);
    out.latency_s = net::latency_s(out.rate_bps, rat, ctx.packet_of(c));
    out.rate_margin = out.rate_bps / qos.min_rate_bps - 1.0;
    out.latency_margin = std::isinf(out.latency_s)
                             ? -std::numeric_limits<double>::infinity()
                             : 1.0 - out.latency_s / qos.max_latency_s;
    out.outage = net::check_outage(out.rate_bps, out.latency_s, qos);
    return out;
}

} // namespace ecofl
