// xapp_classifier.hpp - stage-2 controller: a 4-feature feedforward
// classifier picking one of the four PRB policies each step, trained
// offline against a brute-force one-step oracle.

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "ecofl/alloc_policies.hpp"
#include "ecofl/context.hpp"
#include "ecofl/mlp.hpp"
#include "ecofl/rng.hpp"

namespace ecofl::xapp {

using FeatureVector = std::array<double, 4>;

struct XappConfig {
    double learning_rate = 1e-2;
    int batch_size = 32;
    int train_epochs = 4000;
    // Corpus generator ranges.
    int gen_min_clients = 6;
    int gen_max_clients = 60;
    double gen_min_voice_fraction = 0.1;
    double gen_max_voice_fraction = 0.9;
    double gen_max_steer = 1.0;  // upper bound of per-scenario class-steering strength
    double gen_arena_m = 500.0;

    void validate() const;
};

// f1/f2: per-class offered load over that class's share of deployed
// capacity, where each RAT contributes capacity in proportion to the head
// count it carries. f3: fraction of clients on NR. f4: mean min(rate,
// latency) margin under the policy-neutral equal-share reference, clipped
// to [-1, 1]. Zero clients gives the all-zero vector.
FeatureVector extract_features(const net::NetworkState& state, const RadioContext& ctx);

class PolicyClassifier {
public:
    explicit PolicyClassifier(XappConfig cfg);
    PolicyClassifier(XappConfig cfg, Mlp net);

    const Mlp& network() const { return net_; }
    Mlp& network() { return net_; }
    const XappConfig& config() const { return cfg_; }

    // Fixed affine input scaling (f - mu) / sigma applied before the first
    // layer. The constants are fitted on the training corpus and persist
    // with the model; they are not learned parameters, so the network
    // parameter count stays at 100.
    const std::array<double, 4>& input_mu() const { return input_mu_; }
    const std::array<double, 4>& input_sigma() const { return input_sigma_; }
    void set_input_scaling(const std::array<double, 4>& mu, const std::array<double, 4>& sigma);
    std::array<double, 4> scale_input(const FeatureVector& f) const;

    void init_random(Rng& rng);
    std::vector<double> forward(const FeatureVector& f) const;  // softmax probabilities
    alloc::PolicyId predict(const FeatureVector& f) const;      // ties to lowest index

    void save_text(std::ostream& os) const;
    static PolicyClassifier load_text(std::istream& is, XappConfig cfg);

private:
    XappConfig cfg_;
    Mlp net_;
    std::array<double, 4> input_mu_{0.0, 0.0, 0.0, 0.0};
    std::array<double, 4> input_sigma_{1.0, 1.0, 1.0, 1.0};
};

struct LabeledScenario {
    FeatureVector features{};
    alloc::PolicyId label = alloc::PolicyId::Equal;
    net::NetworkState snapshot;  // full state kept for audit and re-simulation
    int scenario_id = 0;
};

// Outage count, then total client power, then policy index: the scoring
// order used to pick the oracle label.
struct PolicyScore {
    int outage_count = 0;
    double total_power_w = 0.0;
};

// Per-client integer PRB grants for one policy: apply_policy + quantize on
// each RAT's cell, clients in ascending id within their class.
std::vector<double> allocate_prbs(const net::NetworkState& state, const RadioContext& ctx,
                                  const alloc::PolicyParams& params, alloc::PolicyId policy);

PolicyScore score_policy(const net::NetworkState& state, const RadioContext& ctx,
                         const alloc::PolicyParams& params, alloc::PolicyId policy);

// Evaluates one radio step under each policy and returns the lexicographic
// minimum (outage count, total power, index). Fully deterministic.
alloc::PolicyId oracle_best_policy(const net::NetworkState& state, const RadioContext& ctx,
                                   const alloc::PolicyParams& params);

// n random static scenarios labeled by the oracle. Fixed seed, fixed corpus.
std::vector<LabeledScenario> generate_corpus(int n, const XappConfig& cfg,
                                             const RadioContext& ctx,
                                             const alloc::PolicyParams& params, Rng& rng);

std::array<int, alloc::kNumPolicies> label_histogram(const std::vector<LabeledScenario>& corpus);

struct TrainReport {
    std::vector<double> epoch_loss;
    double final_train_accuracy = 0.0;
};

// Mini-batch cross-entropy descent on (features -> label). The corpus must
// be non-empty.
TrainReport train(PolicyClassifier& clf, const std::vector<LabeledScenario>& corpus,
                  int epochs, Rng& rng);

// Corpus CSV: header f1,f2,f3,f4,label,scenario_id; one row per scenario.
void save_corpus_csv(std::ostream& os, const std::vector<LabeledScenario>& corpus);

} // namespace ecofl::xapp
