#include "ecofl/rapp_rl.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ecofl/textio.hpp"

namespace ecofl::rl {

void RewardWeights::validate() const {
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
        throw std::invalid_argument("rl: reward weights must be >= 0");
    if (alpha == 0.0 && beta == 0.0 && gamma == 0.0)
        throw std::invalid_argument("rl: reward weights must not all be zero");
}

void RlConfig::validate() const {
    if (learning_rate <= 0.0 || learning_rate > 1.0)
        throw std::invalid_argument("rl: learning rate must be in (0,1]");
    if (discount < 0.0 || discount >= 1.0)
        throw std::invalid_argument("rl: discount must be in [0,1)");
    if (batch_size < 1) throw std::invalid_argument("rl: batch size must be >= 1");
    if (initial_steps < 0) throw std::invalid_argument("rl: initial steps must be >= 0");
    if (epsilon_floor < 0.0 || epsilon_floor > 1.0)
        throw std::invalid_argument("rl: epsilon floor must be in [0,1]");
    if (epsilon_halflife <= 0.0)
        throw std::invalid_argument("rl: epsilon halflife must be positive");
    if (replay_capacity < 1) throw std::invalid_argument("rl: replay capacity must be >= 1");
    if (updates_per_step < 1)
        throw std::invalid_argument("rl: updates per step must be >= 1");
    weights.validate();
    for (int i = 1; i < 4; ++i)
        if (snr_edges_db[i - 1] >= snr_edges_db[i])
            throw std::invalid_argument("rl: snr bucket edges must be increasing");
    for (int i = 1; i < 3; ++i)
        if (load_edges[i - 1] >= load_edges[i])
            throw std::invalid_argument("rl: load bucket edges must be increasing");
}

int RlState::index() const {
    int idx = snr_bucket[0];
    idx = idx * kSnrBuckets + snr_bucket[1];
    idx = idx * kLoadBuckets + load_bucket[0];
    idx = idx * kLoadBuckets + load_bucket[1];
    idx = idx * 2 + (qos_ok ? 1 : 0);
    idx = idx * net::kNumPowerPlans + plan;
    return idx;
}

int RlAction::index() const {
    return static_cast<int>(plan) * net::kNumRats + static_cast<int>(rat);
}

RlAction RlAction::from_index(int a) {
    if (a < 0 || a >= kNumActions) throw std::out_of_range("rl: action index out of range");
    RlAction act;
    act.plan = static_cast<net::PowerPlanId>(a / net::kNumRats);
    act.rat = static_cast<net::RatId>(a % net::kNumRats);
    return act;
}

int snr_bucket_of(double snr_db, const RlConfig& cfg) {
    int b = 0;
    while (b < 4 && snr_db >= cfg.snr_edges_db[b]) ++b;
    return b;
}

int load_bucket_of(double load_ratio, const RlConfig& cfg) {
    int b = 0;
    while (b < 3 && load_ratio >= cfg.load_edges[b]) ++b;
    return b;
}

RlState StateEncoder::encode(const net::NetworkState& state, int client_id) const {
    if (client_id < 0 || client_id >= static_cast<int>(state.clients.size()))
        throw std::out_of_range("rl: unknown client id");
    const net::Client& c = state.clients[static_cast<size_t>(client_id)];
    RlState s;
    double probe_w = radio.plans.plan_w(net::PowerPlanId::Low);
    for (int r = 0; r < net::kNumRats; ++r) {
        double d = net::distance(c.position, radio.rats[r].bs_position);
        double snr = net::uplink_snr_linear(radio.rats[r], probe_w, d);
        s.snr_bucket[r] = snr_bucket_of(10.0 * std::log10(snr), cfg);
        double ratio = state.offered_load_bps[r] / radio.rats[r].capacity_bps();
        s.load_bucket[r] = load_bucket_of(ratio, cfg);
    }
    // QoS flag from a policy-neutral reference: the client's equal share of
    // its current RAT at its current plan. Keeps the observation identical
    // across allocation modes so trajectories can be compared.
    const net::RatConfig& rat = radio.rat_of(c);
    int n_on_rat = state.count_on_rat(c.assigned_rat);
    double share = static_cast<double>(rat.prb_count) / std::max(n_on_rat, 1);
    s.qos_ok = !evaluate_client(radio, c, share).outage;
    s.plan = static_cast<int>(c.power_plan);
    return s;
}

RlState StateEncoder::encode_attach(const net::Client& c,
                                    const std::array<double, 2>& offered_bps,
                                    const std::array<int, 2>& n_on_rat) const {
    RlState s;
    double probe_w = radio.plans.plan_w(net::PowerPlanId::Low);
    for (int r = 0; r < net::kNumRats; ++r) {
        double d = net::distance(c.position, radio.rats[r].bs_position);
        double snr = net::uplink_snr_linear(radio.rats[r], probe_w, d);
        s.snr_bucket[r] = snr_bucket_of(10.0 * std::log10(snr), cfg);
        double ratio = offered_bps[static_cast<size_t>(r)] / radio.rats[r].capacity_bps();
        s.load_bucket[r] = load_bucket_of(ratio, cfg);
    }
    const net::RatConfig& rat = radio.rat_of(c);
    int peers = n_on_rat[static_cast<size_t>(c.assigned_rat)] + 1;
    double share = static_cast<double>(rat.prb_count) / peers;
    s.qos_ok = !evaluate_client(radio, c, share).outage;
    s.plan = static_cast<int>(c.power_plan);
    return s;
}

double reward(double eta, double throughput_norm, double latency_norm,
              const RewardWeights& w) {
    double t = std::clamp(throughput_norm, 0.0, 2.0);
    double l = std::clamp(latency_norm, 0.0, 2.0);
    return w.alpha * eta + w.beta * t - w.gamma * l;
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(static_cast<size_t>(capacity)) {
    if (capacity < 1) throw std::invalid_argument("rl: replay capacity must be >= 1");
    data_.reserve(capacity_);
}

void ReplayBuffer::push(const Transition& t) {
    if (filled_ < capacity_) {
        data_.push_back(t);
        ++filled_;
    } else {
        data_[next_] = t;
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(int batch_size, Rng& rng) const {
    std::vector<Transition> batch;
    if (filled_ == 0) return batch;
    if (static_cast<int>(filled_) <= batch_size) {
        batch.assign(data_.begin(), data_.begin() + static_cast<long>(filled_));
        return batch;
    }
    batch.reserve(static_cast<size_t>(batch_size));
    for (int i = 0; i < batch_size; ++i)
        batch.push_back(data_[static_cast<size_t>(rng.uniform_int(static_cast<int>(filled_)))]);
    return batch;
}

QFunction::QFunction(RlConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    table_.assign(static_cast<size_t>(kNumStates) * kNumActions, 0.0);
}

double QFunction::value(int state, int action) const {
    return table_[static_cast<size_t>(state) * kNumActions + static_cast<size_t>(action)];
}

double& QFunction::value(int state, int action) {
    return table_[static_cast<size_t>(state) * kNumActions + static_cast<size_t>(action)];
}

double QFunction::max_value(int state) const {
    const double* row = table_.data() + static_cast<size_t>(state) * kNumActions;
    return *std::max_element(row, row + kNumActions);
}

RlAction QFunction::greedy_action(int state) const {
    const double* row = table_.data() + static_cast<size_t>(state) * kNumActions;
    int best = 0;
    for (int a = 1; a < kNumActions; ++a)
        if (row[a] > row[best]) best = a;
    return RlAction::from_index(best);
}

double QFunction::epsilon(long step) const {
    if (step < cfg_.initial_steps) return 1.0;
    double decayed = std::exp2(-static_cast<double>(step - cfg_.initial_steps) /
                               cfg_.epsilon_halflife);
    return cfg_.epsilon_floor + (1.0 - cfg_.epsilon_floor) * decayed;
}

RlAction QFunction::select_action(int state, long step, Rng& rng) {
    double eps = epsilon(step);
    if (rng.uniform() < eps) return RlAction::from_index(rng.uniform_int(kNumActions));
    return greedy_action(state);
}

void QFunction::update(const std::vector<Transition>& batch) {
    for (const auto& t : batch) {
        double target = t.reward;
        if (!t.terminal) target += cfg_.discount * max_value(t.next_state);
        double& q = value(t.state, t.action);
        q += cfg_.learning_rate * (target - q);
    }
}

void QFunction::save_text(std::ostream& os) const {
    os << "qtable " << kNumStates << ' ' << kNumActions << '\n';
    for (int s = 0; s < kNumStates; ++s)
        for (int a = 0; a < kNumActions; ++a)
            os << s << ' ' << a << ' ' << format_double_exact(value(s, a)) << '\n';
}

QFunction QFunction::load_text(std::istream& is, RlConfig cfg) {
    std::string tag;
    int states = 0, actions = 0;
    if (!(is >> tag >> states >> actions) || tag != "qtable" || states != kNumStates ||
        actions != kNumActions)
        throw std::runtime_error("rl: bad Q-table file header");
    QFunction q(std::move(cfg));
    for (long i = 0; i < static_cast<long>(kNumStates) * kNumActions; ++i) {
        int s, a;
        double v;
        if (!(is >> s >> a >> v)) throw std::runtime_error("rl: truncated Q-table file");
        if (s < 0 || s >= kNumStates || a < 0 || a >= kNumActions)
            throw std::runtime_error("rl: Q-table entry out of range");
        q.value(s, a) = v;
    }
    return q;
}

} // namespace ecofl::rl
