#include "ecofl/alloc_policies.hpp"

#include <cmath>
#include <numeric>

namespace ecofl::alloc {

const char* policy_name(PolicyId p) {
    switch (p) {
        case PolicyId::Equal: return "P1";
        case PolicyId::VoicePriority: return "P2";
        case PolicyId::EmbbPriority: return "P3";
        case PolicyId::DedicatedReservation: return "P4";
    }
    return "?";
}

void PolicyParams::validate() const {
    if (m_voice <= 0.0) throw std::invalid_argument("policy.m_voice must be > 0");
    if (k_embb <= 0.0) throw std::invalid_argument("policy.k_embb must be > 0");
    if (alpha_v <= 0.0 || alpha_v >= 1.0)
        throw std::invalid_argument("policy.alpha_v must be in (0,1)");
    if (beta_e <= 0.0 || beta_e >= 1.0)
        throw std::invalid_argument("policy.beta_e must be in (0,1)");
    if (alpha_v + beta_e > 1.0)
        throw std::invalid_argument("over-reservation: policy.alpha_v + policy.beta_e > 1");
}

namespace {

void check_cell(int prb_s, int n_voice, int n_embb) {
    if (prb_s < 0) throw std::invalid_argument("prb_s must be >= 0");
    if (n_voice < 0 || n_embb < 0)
        throw std::invalid_argument("client counts must be >= 0");
    if (n_voice + n_embb < 1) throw std::invalid_argument("empty cell");
}

} // namespace

PrbAllocation equal_allocation(int prb_s, int n_voice, int n_embb) {
    check_cell(prb_s, n_voice, n_embb);
    const double share = static_cast<double>(prb_s) / (n_voice + n_embb);
    PrbAllocation a;
    a.prb_per_voice_client = n_voice > 0 ? share : 0.0;
    a.prb_per_embb_client = n_embb > 0 ? share : 0.0;
    a.policy_used = PolicyId::Equal;
    return a;
}

PrbAllocation voice_priority(int prb_s, int n_voice, int n_embb, double m_voice) {
    check_cell(prb_s, n_voice, n_embb);
    if (m_voice <= 0.0) throw std::invalid_argument("m_voice must be > 0");
    const double embb = static_cast<double>(prb_s) / (m_voice * n_voice + n_embb);
    PrbAllocation a;
    a.prb_per_voice_client = n_voice > 0 ? m_voice * embb : 0.0;
    a.prb_per_embb_client = n_embb > 0 ? embb : 0.0;
    a.policy_used = PolicyId::VoicePriority;
    return a;
}

PrbAllocation embb_priority(int prb_s, int n_voice, int n_embb, double k_embb) {
    check_cell(prb_s, n_voice, n_embb);
    if (k_embb <= 0.0) throw std::invalid_argument("k_embb must be > 0");
    const double voice = static_cast<double>(prb_s) / (n_voice + k_embb * n_embb);
    PrbAllocation a;
    a.prb_per_voice_client = n_voice > 0 ? voice : 0.0;
    a.prb_per_embb_client = n_embb > 0 ? k_embb * voice : 0.0;
    a.policy_used = PolicyId::EmbbPriority;
    return a;
}

PrbAllocation dedicated_reservation(int prb_s, int n_voice, int n_embb,
                                    double alpha_v, double beta_e) {
    check_cell(prb_s, n_voice, n_embb);
    if (alpha_v < 0.0 || beta_e < 0.0)
        throw std::invalid_argument("reservation fractions must be >= 0");
    if (alpha_v + beta_e > 1.0) throw std::invalid_argument("over-reservation");
    PrbAllocation a;
    // An empty class wastes its reservation; the pool is not redistributed.
    a.prb_per_voice_client = n_voice > 0 ? alpha_v * prb_s / n_voice : 0.0;
    a.prb_per_embb_client = n_embb > 0 ? beta_e * prb_s / n_embb : 0.0;
    a.policy_used = PolicyId::DedicatedReservation;
    return a;
}

PrbAllocation apply_policy(PolicyId policy, int prb_s, int n_voice, int n_embb,
                           const PolicyParams& params) {
    switch (policy) {
        case PolicyId::Equal:
            return equal_allocation(prb_s, n_voice, n_embb);
        case PolicyId::VoicePriority:
            return voice_priority(prb_s, n_voice, n_embb, params.m_voice);
        case PolicyId::EmbbPriority:
            return embb_priority(prb_s, n_voice, n_embb, params.k_embb);
        case PolicyId::DedicatedReservation:
            return dedicated_reservation(prb_s, n_voice, n_embb, params.alpha_v,
                                         params.beta_e);
    }
    throw std::invalid_argument("unknown policy id");
}

int QuantizedAllocation::total() const {
    return std::accumulate(voice_prbs.begin(), voice_prbs.end(), 0) +
           std::accumulate(embb_prbs.begin(), embb_prbs.end(), 0);
}

QuantizedAllocation quantize(const PrbAllocation& alloc, int prb_s, int n_voice,
                             int n_embb) {
    QuantizedAllocation q;
    q.voice_prbs.assign(static_cast<std::size_t>(n_voice),
                        static_cast<int>(std::floor(alloc.prb_per_voice_client)));
    q.embb_prbs.assign(static_cast<std::size_t>(n_embb),
                       static_cast<int>(std::floor(alloc.prb_per_embb_client)));

    const double continuous_total = n_voice * alloc.prb_per_voice_client +
                                    n_embb * alloc.prb_per_embb_client;
    int budget = static_cast<int>(std::floor(continuous_total + 1e-9));
    if (budget > prb_s) budget = prb_s;

    int extra = budget - q.total();
    // Voice first, then eMBB, both by ascending client id.
    for (int i = 0; i < n_voice && extra > 0; ++i, --extra) ++q.voice_prbs[i];
    for (int i = 0; i < n_embb && extra > 0; ++i, --extra) ++q.embb_prbs[i];
    return q;
}

} // namespace ecofl::alloc
