// rapp_rl.hpp - stage-1 controller: tabular Q-learning over a discretized
// per-client observation, choosing (RAT, power plan) with an epsilon-greedy
// policy and replay-batch updates. One table is shared by all clients.

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "ecofl/context.hpp"
#include "ecofl/rng.hpp"

namespace ecofl::rl {

struct RewardWeights {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;

    void validate() const;  // all >= 0, not all zero
};

struct RlConfig {
    double learning_rate = 0.4;
    double discount = 0.92;
    int batch_size = 32;
    int initial_steps = 2000;
    double epsilon_floor = 0.05;
    double epsilon_halflife = 500.0;
    int replay_capacity = 20000;
    // Replay batches per environment step. Transitions arrive 50 per step at
    // the reference scale; a single batch of 32 would evict most of them
    // untrained.
    int updates_per_step = 4;
    RewardWeights weights;
    // Bucket edges. SNR buckets: (-inf,18), [18,22), [22,26), [26,30), [30,inf) dB.
    // 4 dB steps spanning the probe SNR range of the default arena; the 22 dB edge
    // sits where the spectral-efficiency cap starts to saturate at the lowest plan,
    // so buckets >= 2 mean "plan upgrades buy no rate here".
    double snr_edges_db[4] = {18.0, 22.0, 26.0, 30.0};
    // Load buckets from offered/capacity ratio. The first edge sits at the
    // voice scale (tens of 100 kbps flows against a >60 Mbps cell) so that
    // voice crowding is visible at all; the upper edges separate light,
    // mixed and broadband-heavy cells.
    double load_edges[3] = {0.02, 0.25, 0.50};

    void validate() const;
};

// Discretized observation. Bucket counts are fixed by the table layout:
// 5 snr x 5 snr x 4 load x 4 load x 2 qos x 3 plan = 2400 states.
struct RlState {
    int snr_bucket[net::kNumRats] = {0, 0};   // 0..4 each
    int load_bucket[net::kNumRats] = {0, 0};  // 0..3 each
    bool qos_ok = false;
    int plan = 0;  // 0..2

    int index() const;
};

inline constexpr int kSnrBuckets = 5;
inline constexpr int kLoadBuckets = 4;
inline constexpr int kNumStates =
    kSnrBuckets * kSnrBuckets * kLoadBuckets * kLoadBuckets * 2 * net::kNumPowerPlans;
inline constexpr int kNumActions = net::kNumRats * net::kNumPowerPlans;

// Joint action. Index order is (plan, rat) ascending, so a linear scan with
// strict improvement realizes the tie-break "lowest wattage, then LTE".
struct RlAction {
    net::RatId rat = net::RatId::LTE;
    net::PowerPlanId plan = net::PowerPlanId::Low;

    int index() const;
    static RlAction from_index(int a);
};

int snr_bucket_of(double snr_db, const RlConfig& cfg);
int load_bucket_of(double load_ratio, const RlConfig& cfg);

// Everything encode_state needs besides the network state itself. The SNR
// features use the uplink budget at the lowest plan so the observation
// tracks position, not the action under evaluation.
struct StateEncoder {
    RadioContext radio;
    RlConfig cfg;

    RlState encode(const net::NetworkState& state, int client_id) const;

    // View during a sequential attach pass: offered load and headcount cover
    // only the clients already re-attached this pass, excluding c itself.
    // The QoS flag is c's equal share among those plus itself on its current
    // RAT at its current plan.
    RlState encode_attach(const net::Client& c, const std::array<double, 2>& offered_bps,
                          const std::array<int, 2>& n_on_rat) const;
};

// R = alpha*eta + beta*T - gamma*L. T and L arrive pre-normalized; both are
// clipped into [0,2] here.
double reward(double eta, double throughput_norm, double latency_norm,
              const RewardWeights& w);

struct Transition {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
    bool terminal = false;
};

// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity);
    void push(const Transition& t);
    int size() const { return static_cast<int>(filled_); }
    // batch_size draws with replacement, or the whole buffer (insertion
    // order) when fewer transitions are stored.
    std::vector<Transition> sample(int batch_size, Rng& rng) const;

private:
    std::vector<Transition> data_;
    size_t capacity_;
    size_t next_ = 0;
    size_t filled_ = 0;
};

class QFunction {
public:
    explicit QFunction(RlConfig cfg);

    const RlConfig& config() const { return cfg_; }
    double value(int state, int action) const;
    double& value(int state, int action);
    double max_value(int state) const;

    // Greedy action: argmax over the 6 actions, ties to the lowest index
    // (lowest wattage, then LTE). Consumes no randomness.
    RlAction greedy_action(int state) const;

    double epsilon(long step) const;

    // Epsilon-greedy: uniform during the initial exploration window and
    // with probability epsilon afterwards. Always consumes exactly one
    // uniform draw, plus one more when exploring.
    RlAction select_action(int state, long step, Rng& rng);

    // One TD(0) sweep over the batch, in order:
    //   Q(s,a) += lr * (r + discount * max_a' Q(s',a') - Q(s,a))
    void update(const std::vector<Transition>& batch);

    // Text dump: "qtable <states> <actions>" then one "s a value" line per
    // entry. load_text validates the dimensions.
    void save_text(std::ostream& os) const;
    static QFunction load_text(std::istream& is, RlConfig cfg);

private:
    RlConfig cfg_;
    std::vector<double> table_;  // kNumStates x kNumActions
};

} // namespace ecofl::rl
