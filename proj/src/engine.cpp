#include "ecofl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ecofl::engine {

Mode Mode::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);

    Mode m;
    const std::string& head = parts[0];
    if (head == "ecofl") {
        if (parts.size() != 1) throw std::invalid_argument("sim.mode: ecofl takes no arguments");
        m.kind = ModeKind::Ecofl;
    } else if (head == "baseline_fixed_rat") {
        if (parts.size() != 3)
            throw std::invalid_argument("sim.mode: expected baseline_fixed_rat:<RAT>:<PLAN>");
        m.kind = ModeKind::BaselineFixedRat;
        if (parts[1] == "LTE") m.rat = net::RatId::LTE;
        else if (parts[1] == "NR") m.rat = net::RatId::NR;
        else throw std::invalid_argument("sim.mode: unknown RAT '" + parts[1] + "'");
        if (parts[2] == "P_S") m.plan = net::PowerPlanId::Low;
        else if (parts[2] == "P_M") m.plan = net::PowerPlanId::Mid;
        else if (parts[2] == "P_F") m.plan = net::PowerPlanId::Full;
        else throw std::invalid_argument("sim.mode: unknown plan '" + parts[2] + "'");
    } else if (head == "fixed_policy") {
        if (parts.size() != 2)
            throw std::invalid_argument("sim.mode: expected fixed_policy:<P1..P4>");
        m.kind = ModeKind::FixedPolicy;
        if (parts[1] == "P1") m.policy = alloc::PolicyId::Equal;
        else if (parts[1] == "P2") m.policy = alloc::PolicyId::VoicePriority;
        else if (parts[1] == "P3") m.policy = alloc::PolicyId::EmbbPriority;
        else if (parts[1] == "P4") m.policy = alloc::PolicyId::DedicatedReservation;
        else throw std::invalid_argument("sim.mode: unknown policy '" + parts[1] + "'");
    } else if (head == "oracle_policy") {
        if (parts.size() != 1)
            throw std::invalid_argument("sim.mode: oracle_policy takes no arguments");
        m.kind = ModeKind::OraclePolicy;
    } else if (head == "greedy_energy") {
        if (parts.size() != 1)
            throw std::invalid_argument("sim.mode: greedy_energy takes no arguments");
        m.kind = ModeKind::GreedyEnergy;
    } else {
        throw std::invalid_argument("sim.mode: unknown mode '" + text + "'");
    }
    return m;
}

std::string Mode::to_string() const {
    switch (kind) {
        case ModeKind::Ecofl: return "ecofl";
        case ModeKind::BaselineFixedRat:
            return std::string("baseline_fixed_rat:") + net::rat_name(rat) + ":" +
                   net::plan_name(plan);
        case ModeKind::FixedPolicy:
            return std::string("fixed_policy:P") +
                   std::to_string(static_cast<int>(policy) + 1);
        case ModeKind::OraclePolicy: return "oracle_policy";
        case ModeKind::GreedyEnergy: return "greedy_energy";
    }
    return "?";
}

bool Mode::uses_rl() const {
    return kind == ModeKind::Ecofl || kind == ModeKind::FixedPolicy ||
           kind == ModeKind::OraclePolicy;
}

bool Mode::uses_classifier() const {
    return kind == ModeKind::Ecofl;
}

namespace {

cfg::ScenarioConfig finalized(cfg::ScenarioConfig c) {
    c.finalize();
    return c;
}

net::RatId strongest_rat(const RadioContext& ctx, const net::Client& c) {
    double lte = net::snr_linear(ctx.rats[static_cast<int>(net::RatId::LTE)], c);
    double nr = net::snr_linear(ctx.rats[static_cast<int>(net::RatId::NR)], c);
    return lte >= nr ? net::RatId::LTE : net::RatId::NR;
}

} // namespace

xapp::PolicyClassifier make_classifier(const cfg::ScenarioConfig& config) {
    if (!config.xapp_weights_path.empty()) {
        std::ifstream in(config.xapp_weights_path);
        if (!in)
            throw std::invalid_argument("xapp.weights_path: cannot open '" +
                                        config.xapp_weights_path + "'");
        return xapp::PolicyClassifier::load_text(in, config.xapp);
    }
    Rng rng(substream_seed(config.seed, "xapp"));
    auto corpus = xapp::generate_corpus(config.xapp_corpus_size, config.xapp, config.radio,
                                        config.policy, rng);
    xapp::PolicyClassifier clf(config.xapp);
    clf.init_random(rng);
    xapp::train(clf, corpus, config.xapp.train_epochs, rng);
    return clf;
}

Simulation::Simulation(cfg::ScenarioConfig config,
                       std::shared_ptr<const xapp::PolicyClassifier> classifier,
                       std::shared_ptr<const rl::QFunction> pretrained)
    : cfg_(finalized(std::move(config))),
      mode_(Mode::parse(cfg_.mode)),
      ctx_(cfg_.radio),
      encoder_{ctx_, cfg_.rl},
      qf_(cfg_.rl),
      replay_(cfg_.rl.replay_capacity),
      clf_(std::move(classifier)),
      rng_mobility_(substream_seed(cfg_.seed, "mobility")),
      rng_rl_(substream_seed(cfg_.seed, "rl")),
      rng_fl_(substream_seed(cfg_.seed, "fl")) {
    if (mode_.uses_classifier() && !clf_)
        clf_ = std::make_shared<const xapp::PolicyClassifier>(make_classifier(cfg_));
    if (mode_.uses_rl() && pretrained) {
        qf_ = *pretrained;
        table_pretrained_ = true;
    }

    Rng rng_scenario(substream_seed(cfg_.seed, "scenario-gen"));
    build_clients(rng_scenario);
    net::refresh_distribution(state_, ctx_.qos[0], ctx_.qos[1]);
    state_.qos.assign(state_.clients.size(), net::QosOutcome{});
    pending_.assign(state_.clients.size(), Pending{});
    infra_energy_j_ = energy::infrastructure_energy_j(cfg_.infrastructure());

    for (const auto& c : state_.clients)
        if (c.is_fl_participant) fl_client_ids_.push_back(c.client_id);
    if (!fl_client_ids_.empty()) {
        auto [train, test] = fl::make_synthetic_task(cfg_.fl, rng_fl_);
        fl_test_ = std::move(test);
        auto pmode = cfg_.fl.dirichlet_partition ? fl::PartitionMode::Dirichlet
                                                 : fl::PartitionMode::IID;
        fl_data_ = fl::partition_data(train, static_cast<int>(fl_client_ids_.size()), pmode,
                                      cfg_.fl.dirichlet_alpha, rng_fl_);
        fl_global_ = std::make_unique<Mlp>(fl::make_fl_model(cfg_.fl, rng_fl_));
        auto ev = fl::evaluate(*fl_global_, fl_test_);
        fl_acc_ = ev.accuracy;
        fl_loss_ = ev.loss;
    }
}

void Simulation::build_clients(Rng& rng) {
    int n = cfg_.n_clients;
    int n_voice = static_cast<int>(std::floor(n * cfg_.voice_fraction + 0.5));
    state_.clients.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        net::Client& c = state_.clients[static_cast<size_t>(i)];
        c.client_id = i;
        c.position.x = rng.uniform(0.0, cfg_.mobility.arena_m);
        c.position.y = rng.uniform(0.0, cfg_.mobility.arena_m);
        c.waypoint.x = rng.uniform(0.0, cfg_.mobility.arena_m);
        c.waypoint.y = rng.uniform(0.0, cfg_.mobility.arena_m);
        c.speed_mps = rng.uniform(cfg_.mobility.speed_min_mps, cfg_.mobility.speed_max_mps);
        c.qos_class = i < n_voice ? net::QosClassId::Voice : net::QosClassId::Embb;
        c.is_fl_participant = c.qos_class == net::QosClassId::Embb;
        c.activity_factor = cfg_.activity_factor;
        c.idle_power_w = cfg_.idle_power_w;
        c.rx_power_w = cfg_.rx_power_w;
        c.assigned_rat = strongest_rat(ctx_, c);
        c.power_plan = net::PowerPlanId::Full;
    }
}

void Simulation::attach_pass(bool training) {
    std::array<double, 2> offered{0.0, 0.0};
    std::array<int, 2> counts{0, 0};
    for (size_t i = 0; i < state_.clients.size(); ++i) {
        net::Client& c = state_.clients[i];
        int s = encoder_.encode_attach(c, offered, counts).index();
        rl::RlAction a;
        if (training) {
            Pending& p = pending_[i];
            if (p.armed) {
                rl::Transition t;
                t.state = p.state;
                t.action = p.action;
                t.reward = p.reward;
                t.next_state = s;
                replay_.push(t);
                p.armed = false;
            }
            a = qf_.select_action(s, rl_step_, rng_rl_);
            p.state = s;
            p.action = a.index();
        } else {
            a = qf_.greedy_action(s);
        }
        c.assigned_rat = a.rat;
        c.power_plan = a.plan;
        int r = static_cast<int>(c.assigned_rat);
        offered[static_cast<size_t>(r)] += ctx_.qos_of(c).min_rate_bps;
        ++counts[static_cast<size_t>(r)];
    }
}

void Simulation::apply_rapp_actions() {
    switch (mode_.kind) {
        case ModeKind::Ecofl:
        case ModeKind::FixedPolicy:
        case ModeKind::OraclePolicy:
            attach_pass(false);
            break;
        case ModeKind::BaselineFixedRat:
            for (auto& c : state_.clients) {
                c.assigned_rat = mode_.rat;
                c.power_plan = mode_.plan;
            }
            break;
        case ModeKind::GreedyEnergy: {
            for (auto& c : state_.clients) c.assigned_rat = strongest_rat(ctx_, c);
            net::refresh_distribution(state_, ctx_.qos[0], ctx_.qos[1]);
            for (auto& c : state_.clients) {
                const net::RatConfig& rat = ctx_.rat_of(c);
                int n_on_rat = state_.count_on_rat(c.assigned_rat);
                double share = static_cast<double>(rat.prb_count) / std::max(n_on_rat, 1);
                double d = net::distance(c.position, rat.bs_position);
                auto choice = energy::min_feasible_plan(ctx_.plans, rat, share, d,
                                                        ctx_.qos_of(c), ctx_.packet_of(c));
                c.power_plan = choice.plan;
            }
            break;
        }
    }
    net::refresh_distribution(state_, ctx_.qos[0], ctx_.qos[1]);
}

alloc::PolicyId Simulation::choose_policy() {
    switch (mode_.kind) {
        case ModeKind::Ecofl: {
            ++clf_calls_;
            auto f = xapp::extract_features(state_, ctx_);
            return clf_->predict(f);
        }
        case ModeKind::FixedPolicy: return mode_.policy;
        case ModeKind::OraclePolicy:
            return xapp::oracle_best_policy(state_, ctx_, cfg_.policy);
        case ModeKind::BaselineFixedRat:
        case ModeKind::GreedyEnergy: return alloc::PolicyId::Equal;
    }
    return alloc::PolicyId::Equal;
}

void Simulation::warmup_step() {
    bool train = mode_.uses_rl() && !table_pretrained_;
    if (train) {
        attach_pass(true);
        net::refresh_distribution(state_, ctx_.qos[0], ctx_.qos[1]);
        // Train against the inner optimizer's response, not a fixed policy:
        // the rewards the rApp learns from assume the policy layer will do
        // its best with whatever topology the rApp builds. Oracle choice is
        // mode-independent, so every mode trains the same table.
        alloc::PolicyId train_policy = xapp::oracle_best_policy(state_, ctx_, cfg_.policy);
        auto prbs = xapp::allocate_prbs(state_, ctx_, cfg_.policy, train_policy);
        double p_full = ctx_.plans.plan_w(net::PowerPlanId::Full);
        for (size_t i = 0; i < state_.clients.size(); ++i) {
            const auto& c = state_.clients[i];
            auto out = evaluate_client(ctx_, c, prbs[i]);
            double p_client = energy::client_power_w(ctx_.plans.plan_w(c.power_plan),
                                                     c.activity_factor, c.idle_power_w);
            double eta = 1.0 - p_client / (p_full + c.idle_power_w);
            double t_norm = out.rate_bps / ctx_.qos_of(c).min_rate_bps;
            double l_norm = std::isinf(out.latency_s)
                                ? 2.0
                                : out.latency_s / ctx_.qos_of(c).max_latency_s;
            Pending& p = pending_[i];
            p.reward = rl::reward(eta, t_norm, l_norm, cfg_.rl.weights);
            p.armed = true;
        }
        for (int u = 0; u < cfg_.rl.updates_per_step; ++u)
            qf_.update(replay_.sample(cfg_.rl.batch_size, rng_rl_));
    }
    net::move_clients(state_, cfg_.mobility, rng_mobility_);
    net::refresh_distribution(state_, ctx_.qos[0], ctx_.qos[1]);
    ++rl_step_;
}

void Simulation::warmup() {
    for (long i = 0; i < cfg_.rl_train_steps; ++i) warmup_step();
}

StepMetrics Simulation::step() {
    apply_rapp_actions();
    alloc::PolicyId policy = choose_policy();
    auto prbs = xapp::allocate_prbs(state_, ctx_, cfg_.policy, policy);

    StepMetrics m;
    m.t = measured_step_;
    m.policy_id = static_cast<int>(policy);
    m.n_lte = state_.count_on_rat(net::RatId::LTE);
    m.n_nr = state_.count_on_rat(net::RatId::NR);
    m.n_voice = state_.count_class(net::QosClassId::Voice);
    m.n_embb = state_.count_class(net::QosClassId::Embb);

    double p_full = ctx_.plans.plan_w(net::PowerPlanId::Full);
    for (size_t i = 0; i < state_.clients.size(); ++i) {
        const auto& c = state_.clients[i];
        auto out = evaluate_client(ctx_, c, prbs[i]);
        state_.qos[i] = out;
        if (out.outage) {
            if (c.qos_class == net::QosClassId::Voice) ++m.outage_voice_count;
            else ++m.outage_embb_count;
        }
        double p_client = energy::client_power_w(ctx_.plans.plan_w(c.power_plan),
                                                 c.activity_factor, c.idle_power_w);
        double eta = 1.0 - p_client / (p_full + c.idle_power_w);
        double t_norm = out.rate_bps / ctx_.qos_of(c).min_rate_bps;
        double l_norm = std::isinf(out.latency_s)
                            ? 2.0
                            : out.latency_s / ctx_.qos_of(c).max_latency_s;
        m.reward_sum += rl::reward(eta, t_norm, l_norm, cfg_.rl.weights);
    }
    m.outage_rate_voice =
        m.n_voice > 0 ? static_cast<double>(m.outage_voice_count) / m.n_voice : 0.0;
    m.outage_rate_embb =
        m.n_embb > 0 ? static_cast<double>(m.outage_embb_count) / m.n_embb : 0.0;
    m.total_power_w = energy::total_power_w(state_.clients, ctx_.plans);
    m.eta_ee = energy::energy_efficiency(m.total_power_w, cfg_.n_clients, p_full);
    m.infra_energy_j = infra_energy_j_;

    if (fl_global_ && (measured_step_ + 1) % cfg_.fl_round_interval == 0) run_fl_round(prbs);
    m.fl_round = fl_round_count_;
    m.fl_test_acc = fl_acc_;
    m.fl_test_loss = fl_loss_;

    net::move_clients(state_, cfg_.mobility, rng_mobility_);
    net::refresh_distribution(state_, ctx_.qos[0], ctx_.qos[1]);
    ++measured_step_;
    return m;
}

void Simulation::run_fl_round(const std::vector<double>& prbs) {
    ++fl_round_count_;
    RoundLog log;
    log.round = fl_round_count_;
    log.t = measured_step_;
    log.comp_energy_per_epoch_j = cfg_.comp_energy_per_epoch_j;
    log.local_epochs = cfg_.fl.local_epochs;

    double bits = ctx_.packet_bits[static_cast<int>(net::QosClassId::Embb)];
    std::vector<Mlp> updates;
    std::vector<int> update_sizes;
    for (size_t k = 0; k < fl_client_ids_.size(); ++k) {
        int id = fl_client_ids_[k];
        const net::Client& c = state_.clients[static_cast<size_t>(id)];
        const net::QosOutcome& out = state_.qos[static_cast<size_t>(id)];
        RoundClientLog cl;
        cl.client_id = id;
        cl.rat = c.assigned_rat;
        cl.uploaded = !out.outage;
        cl.up_rate_bps = out.rate_bps;
        cl.plan_w = ctx_.plans.plan_w(c.power_plan);
        cl.rx_w = c.rx_power_w;
        // Downlink is the base station broadcasting the fresh global model at
        // full BS power over the same PRB grant the client holds this step.
        const net::RatConfig& rat = ctx_.rat_of(c);
        double dl_snr = net::snr_linear(rat, c);
        cl.down_rate_bps =
            net::achievable_rate_bps(prbs[static_cast<size_t>(id)], dl_snr, rat);
        if (cl.uploaded) {
            double up_j = energy::comm_energy_j(bits, cl.plan_w, cl.up_rate_bps);
            double down_j = energy::comm_energy_j(bits, cl.rx_w, cl.down_rate_bps);
            cl.energy_j = energy::fl_round_energy_j(cfg_.comp_energy_per_epoch_j,
                                                    cfg_.fl.local_epochs, up_j, down_j);
            log.round_energy_j += cl.energy_j;
            log.participants.push_back(id);

            std::string stream = "fl-round-" + std::to_string(fl_round_count_) + "-client-" +
                                 std::to_string(id);
            Rng local_rng(substream_seed(cfg_.seed, stream));
            updates.push_back(fl::local_update(*fl_global_, fl_data_[k], cfg_.fl.local_epochs,
                                               cfg_.fl.learning_rate, cfg_.fl.batch_size,
                                               local_rng));
            update_sizes.push_back(static_cast<int>(fl_data_[k].data.size()));
        }
        log.clients.push_back(cl);
    }

    if (!updates.empty()) {
        *fl_global_ = cfg_.fl.weighted_aggregation
                          ? fl::aggregate_weighted(updates, update_sizes)
                          : fl::aggregate(updates);
        auto ev = fl::evaluate(*fl_global_, fl_test_);
        fl_acc_ = ev.accuracy;
        fl_loss_ = ev.loss;
        log.aggregated = true;
    }
    log.test_acc = fl_acc_;
    log.test_loss = fl_loss_;
    rounds_.push_back(std::move(log));
}

std::vector<StepMetrics> Simulation::run() {
    warmup();
    std::vector<StepMetrics> metrics;
    metrics.reserve(static_cast<size_t>(cfg_.n_steps));
    for (int i = 0; i < cfg_.n_steps; ++i) metrics.push_back(step());
    return metrics;
}

SuiteEntry summarize_run(const cfg::ScenarioConfig& config, const Mode& mode,
                         const std::vector<StepMetrics>& metrics, int scenario) {
    SuiteEntry e;
    e.seed = config.seed;
    e.scenario = scenario;
    e.mode = mode.to_string();
    if (metrics.empty()) return e;
    long voice_outages = 0, embb_outages = 0, clients = 0;
    for (const auto& m : metrics) {
        voice_outages += m.outage_voice_count;
        embb_outages += m.outage_embb_count;
        clients += m.n_voice + m.n_embb;
        e.mean_power_w += m.total_power_w;
        e.mean_eta_ee += m.eta_ee;
        e.mean_reward += m.reward_sum;
        e.outage_rate_voice += m.outage_rate_voice;
        e.outage_rate_embb += m.outage_rate_embb;
    }
    double n = static_cast<double>(metrics.size());
    e.mean_power_w /= n;
    e.mean_eta_ee /= n;
    e.mean_reward /= n;
    e.outage_rate_voice /= n;
    e.outage_rate_embb /= n;
    e.outage_rate_total =
        clients > 0 ? static_cast<double>(voice_outages + embb_outages) / clients : 0.0;
    e.final_fl_acc = metrics.back().fl_test_acc;
    e.final_fl_loss = metrics.back().fl_test_loss;
    return e;
}

std::vector<std::string> default_suite_modes() {
    return {"fixed_policy:P1", "fixed_policy:P2", "fixed_policy:P3", "fixed_policy:P4",
            "ecofl",           "oracle_policy",   "baseline_fixed_rat:NR:P_F"};
}

std::vector<SuiteEntry> run_suite(const cfg::ScenarioConfig& base, int n_scenarios,
                                  const std::vector<std::string>& modes) {
    if (n_scenarios < 1) throw std::invalid_argument("suite: need at least one scenario");
    if (modes.empty()) throw std::invalid_argument("suite: need at least one mode");
    std::vector<SuiteEntry> entries;
    for (int s = 0; s < n_scenarios; ++s) {
        cfg::ScenarioConfig scenario_cfg = base;
        scenario_cfg.seed = base.seed + static_cast<std::uint64_t>(s);
        bool any_adaptive = false, any_rl = false;
        for (const auto& mode : modes) {
            Mode m = Mode::parse(mode);
            if (m.uses_classifier()) any_adaptive = true;
            if (m.uses_rl()) any_rl = true;
        }
        std::shared_ptr<const xapp::PolicyClassifier> shared_clf;
        if (any_adaptive)
            shared_clf = std::make_shared<const xapp::PolicyClassifier>(
                make_classifier(scenario_cfg));
        // Train the table once per scenario; every table-driven mode then
        // replays the same frozen policy over the same mobility.
        std::shared_ptr<const rl::QFunction> shared_q;
        if (any_rl) {
            cfg::ScenarioConfig train_cfg = scenario_cfg;
            train_cfg.mode = "oracle_policy";
            Simulation trainer(train_cfg);
            trainer.warmup();
            shared_q = std::make_shared<const rl::QFunction>(trainer.qtable());
        }
        for (const auto& mode : modes) {
            cfg::ScenarioConfig run_cfg = scenario_cfg;
            run_cfg.mode = mode;
            Simulation sim(run_cfg, shared_clf, shared_q);
            auto metrics = sim.run();
            entries.push_back(summarize_run(run_cfg, sim.mode(), metrics, s));
        }
    }
    return entries;
}

} // namespace ecofl::engine
