// engine.hpp - the step loop tying everything together: per-step RAT/plan
// actions, policy selection, PRB allocation, radio outcomes, rewards and
// Q-updates, periodic FL rounds, and mobility. Also the multi-mode suite
// runner used for the policy comparison tables.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ecofl/config.hpp"
#include "ecofl/fl_core.hpp"

namespace ecofl::engine {

enum class ModeKind { Ecofl, BaselineFixedRat, FixedPolicy, OraclePolicy, GreedyEnergy };

struct Mode {
    ModeKind kind = ModeKind::Ecofl;
    net::RatId rat = net::RatId::NR;               // baseline pin
    net::PowerPlanId plan = net::PowerPlanId::Full;  // baseline pin
    alloc::PolicyId policy = alloc::PolicyId::Equal;  // fixed-policy pin

    // "ecofl" | "baseline_fixed_rat:<LTE|NR>:<P_S|P_M|P_F>" |
    // "fixed_policy:<P1|P2|P3|P4>" | "oracle_policy" | "greedy_energy"
    static Mode parse(const std::string& text);
    std::string to_string() const;

    bool uses_rl() const;          // greedy per-client actions from the table
    bool uses_classifier() const;  // only the adaptive mode consults the xApp
};

// One CSV row. Extra counts beyond the schema feed the suite tables and
// the consistency checks.
struct StepMetrics {
    long t = 0;
    double total_power_w = 0.0;
    double eta_ee = 0.0;
    double outage_rate_voice = 0.0;
    double outage_rate_embb = 0.0;
    int policy_id = 0;
    int n_lte = 0;
    int n_nr = 0;
    double reward_sum = 0.0;
    long fl_round = 0;
    double fl_test_acc = 0.0;
    double fl_test_loss = 0.0;
    double infra_energy_j = 0.0;

    int outage_voice_count = 0;
    int outage_embb_count = 0;
    int n_voice = 0;
    int n_embb = 0;
};

struct RoundClientLog {
    int client_id = 0;
    net::RatId rat = net::RatId::LTE;  // serving RAT during the round's step
    bool uploaded = false;
    double up_rate_bps = 0.0;
    double down_rate_bps = 0.0;
    double plan_w = 0.0;
    double rx_w = 0.0;
    double energy_j = 0.0;  // full round energy; zero for dropped clients
};

struct RoundLog {
    long round = 0;
    long t = 0;  // measured step on which the round ran
    std::vector<int> participants;
    std::vector<RoundClientLog> clients;  // every FL client, ascending id
    bool aggregated = false;
    double test_acc = 0.0;
    double test_loss = 0.0;
    double round_energy_j = 0.0;
    double comp_energy_per_epoch_j = 0.0;
    int local_epochs = 0;
};

class Simulation {
public:
    // A classifier or trained table may be supplied to share one training
    // artifact across runs; otherwise each run trains its own. A supplied
    // table makes warmup mobility-only, which lands on the same positions
    // the training run saw, so measured trajectories match runs that
    // trained in-process.
    explicit Simulation(cfg::ScenarioConfig config,
                        std::shared_ptr<const xapp::PolicyClassifier> classifier = nullptr,
                        std::shared_ptr<const rl::QFunction> pretrained = nullptr);

    // Warmup phase: mobility for every mode, plus epsilon-greedy training
    // with oracle-policy allocation when the mode acts from the table and
    // no pretrained table was supplied. Runs rl.train_steps steps, no
    // metrics emitted.
    void warmup();

    StepMetrics step();

    // warmup() + n_steps measured steps.
    std::vector<StepMetrics> run();

    const cfg::ScenarioConfig& config() const { return cfg_; }
    const Mode& mode() const { return mode_; }
    const net::NetworkState& network() const { return state_; }
    const rl::QFunction& qtable() const { return qf_; }
    const std::vector<RoundLog>& round_logs() const { return rounds_; }
    const fl::Dataset& fl_test_set() const { return fl_test_; }
    const Mlp* fl_model() const { return fl_global_ ? &*fl_global_ : nullptr; }
    const xapp::PolicyClassifier* classifier() const { return clf_.get(); }
    long classifier_calls() const { return clf_calls_; }
    const std::vector<int>& fl_client_ids() const { return fl_client_ids_; }

private:
    cfg::ScenarioConfig cfg_;
    Mode mode_;
    RadioContext ctx_;
    rl::StateEncoder encoder_;
    rl::QFunction qf_;
    rl::ReplayBuffer replay_;
    std::shared_ptr<const xapp::PolicyClassifier> clf_;
    bool table_pretrained_ = false;

    net::NetworkState state_;
    Rng rng_mobility_;
    Rng rng_rl_;
    Rng rng_fl_;

    std::vector<int> fl_client_ids_;        // ascending; eMBB clients
    std::vector<fl::ClientDataset> fl_data_;  // index-aligned with fl_client_ids_
    fl::Dataset fl_test_;
    std::unique_ptr<Mlp> fl_global_;
    long fl_round_count_ = 0;
    double fl_acc_ = 0.0;
    double fl_loss_ = 0.0;

    long rl_step_ = 0;        // warmup step counter driving epsilon
    long measured_step_ = 0;  // t column
    double infra_energy_j_ = 0.0;
    std::vector<RoundLog> rounds_;
    long clf_calls_ = 0;

    // One transition per client straddles two attach passes: the next pass
    // supplies next_state at the moment the client is re-encoded.
    struct Pending {
        int state = 0;
        int action = 0;
        double reward = 0.0;
        bool armed = false;
    };
    std::vector<Pending> pending_;

    void build_clients(Rng& rng);
    // Re-attaches every client in id order. Each decision sees the offered
    // load and headcount of the clients attached earlier in the same pass,
    // so a shared greedy table spreads load instead of herding. Training
    // passes explore and complete the previous step's transitions.
    void attach_pass(bool training);
    void apply_rapp_actions();
    alloc::PolicyId choose_policy();
    void run_fl_round(const std::vector<double>& prbs);
    void warmup_step();
};

// Loads the configured weights file, or generates a corpus and trains from
// the run's xapp stream. Deterministic per (config, seed).
xapp::PolicyClassifier make_classifier(const cfg::ScenarioConfig& config);

struct SuiteEntry {
    std::uint64_t seed = 0;
    int scenario = 0;
    std::string mode;
    double outage_rate_voice = 0.0;
    double outage_rate_embb = 0.0;
    double outage_rate_total = 0.0;
    double mean_power_w = 0.0;
    double mean_eta_ee = 0.0;
    double mean_reward = 0.0;
    double final_fl_acc = 0.0;
    double final_fl_loss = 0.0;
};

SuiteEntry summarize_run(const cfg::ScenarioConfig& config, const Mode& mode,
                         const std::vector<StepMetrics>& metrics, int scenario);

// Shared-seed comparison: every mode once per scenario, scenario seeds
// seed, seed+1, ... The classifier is trained once per scenario and shared.
std::vector<SuiteEntry> run_suite(const cfg::ScenarioConfig& base, int n_scenarios,
                                  const std::vector<std::string>& modes);

std::vector<std::string> default_suite_modes();

} // namespace ecofl::engine
