// alloc_policies.hpp - the four per-class PRB allocation policies and the
// integer quantization used when feeding the radio grid.

#pragma once

#include <stdexcept>
#include <vector>

namespace ecofl::alloc {

enum class PolicyId : int {
    Equal = 0,                // P1
    VoicePriority = 1,        // P2
    EmbbPriority = 2,         // P3
    DedicatedReservation = 3  // P4
};

constexpr int kNumPolicies = 4;

const char* policy_name(PolicyId p);

struct PolicyParams {
    double m_voice = 2.0;  // voice multiplier M (P2)
    double k_embb = 4.0;   // eMBB multiplier (P3)
    double alpha_v = 0.3;  // voice reservation fraction (P4)
    double beta_e = 0.7;   // eMBB reservation fraction (P4)

    void validate() const;
};

// Continuous per-client shares for one cell. A class with zero members has
// share 0 by convention.
struct PrbAllocation {
    double prb_per_voice_client = 0.0;
    double prb_per_embb_client = 0.0;
    PolicyId policy_used = PolicyId::Equal;
};

PrbAllocation equal_allocation(int prb_s, int n_voice, int n_embb);
PrbAllocation voice_priority(int prb_s, int n_voice, int n_embb, double m_voice);
PrbAllocation embb_priority(int prb_s, int n_voice, int n_embb, double k_embb);
PrbAllocation dedicated_reservation(int prb_s, int n_voice, int n_embb,
                                    double alpha_v, double beta_e);

PrbAllocation apply_policy(PolicyId policy, int prb_s, int n_voice, int n_embb,
                           const PolicyParams& params);

// Integer per-client PRB counts: floor every share, then hand out the whole
// PRBs still available from the continuous total round-robin by client id,
// voice clients first. Total never exceeds prb_s, and never exceeds the
// continuous allocation total (P4 slack stays unallocated).
struct QuantizedAllocation {
    std::vector<int> voice_prbs;  // one entry per voice client, ordered by id
    std::vector<int> embb_prbs;   // one entry per eMBB client, ordered by id
    int total() const;
};

QuantizedAllocation quantize(const PrbAllocation& alloc, int prb_s, int n_voice,
                             int n_embb);

} // namespace ecofl::alloc
