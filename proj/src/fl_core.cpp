#include "ecofl/fl_core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ecofl::fl {

void FlConfig::validate() const {
    if (n_features < 1 || n_classes < 2 || hidden_dim < 1)
        throw std::invalid_argument("fl: model dimensions out of range");
    if (train_samples < n_classes || test_samples < n_classes)
        throw std::invalid_argument("fl: need at least one sample per class");
    if (noise_sigma < 0.0) throw std::invalid_argument("fl: noise sigma must be >= 0");
    if (learning_rate < 0.0) throw std::invalid_argument("fl: learning rate must be >= 0");
    if (batch_size < 1) throw std::invalid_argument("fl: batch size must be >= 1");
    if (local_epochs < 1) throw std::invalid_argument("fl: local epochs must be >= 1");
    if (dirichlet_alpha <= 0.0)
        throw std::invalid_argument("fl: dirichlet alpha must be positive");
}

static Dataset sample_blobs(const std::vector<std::vector<double>>& centers, int per_class,
                            double sigma, Rng& rng) {
    Dataset d;
    int n_classes = static_cast<int>(centers.size());
    int dim = static_cast<int>(centers.front().size());
    d.xs.reserve(static_cast<size_t>(per_class) * n_classes);
    d.ys.reserve(static_cast<size_t>(per_class) * n_classes);
    for (int cls = 0; cls < n_classes; ++cls) {
        for (int i = 0; i < per_class; ++i) {
            std::vector<double> x(static_cast<size_t>(dim));
            for (int j = 0; j < dim; ++j)
                x[static_cast<size_t>(j)] =
                    centers[static_cast<size_t>(cls)][static_cast<size_t>(j)] +
                    sigma * rng.normal();
            d.xs.push_back(std::move(x));
            d.ys.push_back(cls);
        }
    }
    return d;
}

std::pair<Dataset, Dataset> make_synthetic_task(const FlConfig& cfg, Rng& rng) {
    cfg.validate();
    if (cfg.train_samples % cfg.n_classes != 0 || cfg.test_samples % cfg.n_classes != 0)
        throw std::invalid_argument("fl: sample counts must divide evenly into classes");
    std::vector<std::vector<double>> centers(static_cast<size_t>(cfg.n_classes));
    for (auto& c : centers) {
        c.resize(static_cast<size_t>(cfg.n_features));
        for (auto& v : c) v = rng.normal();
    }
    Dataset train = sample_blobs(centers, cfg.train_samples / cfg.n_classes,
                                 cfg.noise_sigma, rng);
    Dataset test = sample_blobs(centers, cfg.test_samples / cfg.n_classes,
                                cfg.noise_sigma, rng);
    return {std::move(train), std::move(test)};
}

static std::vector<ClientDataset> build_from_index_lists(
    const Dataset& train, const std::vector<std::vector<int>>& per_client) {
    std::vector<ClientDataset> out(per_client.size());
    for (size_t k = 0; k < per_client.size(); ++k) {
        out[k].client_id = static_cast<int>(k);
        for (int idx : per_client[k]) {
            out[k].data.xs.push_back(train.xs[static_cast<size_t>(idx)]);
            out[k].data.ys.push_back(train.ys[static_cast<size_t>(idx)]);
        }
    }
    return out;
}

std::vector<ClientDataset> partition_data(const Dataset& train, int n_clients,
                                          PartitionMode mode, double dirichlet_alpha,
                                          Rng& rng) {
    if (n_clients < 1) throw std::invalid_argument("fl: need at least one client");
    if (train.size() < n_clients)
        throw std::invalid_argument("fl: fewer samples than clients");
    std::vector<std::vector<int>> assign(static_cast<size_t>(n_clients));

    if (mode == PartitionMode::IID) {
        std::vector<int> idx(static_cast<size_t>(train.size()));
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        // Contiguous chunks of the shuffle; the first (n mod k) clients take
        // the one-larger chunks.
        int base = train.size() / n_clients;
        int extra = train.size() % n_clients;
        size_t pos = 0;
        for (int k = 0; k < n_clients; ++k) {
            int take = base + (k < extra ? 1 : 0);
            for (int i = 0; i < take; ++i) assign[static_cast<size_t>(k)].push_back(idx[pos++]);
        }
    } else {
        // Per class: Dirichlet proportions over clients, counts by largest
        // remainder, samples dealt in shuffled order.
        int n_classes = 1 + *std::max_element(train.ys.begin(), train.ys.end());
        for (int cls = 0; cls < n_classes; ++cls) {
            std::vector<int> members;
            for (int i = 0; i < train.size(); ++i)
                if (train.ys[static_cast<size_t>(i)] == cls) members.push_back(i);
            if (members.empty()) continue;
            rng.shuffle(members);
            std::vector<double> w(static_cast<size_t>(n_clients));
            double sum = 0.0;
            for (auto& v : w) {
                v = rng.gamma(dirichlet_alpha);
                sum += v;
            }
            for (auto& v : w) v /= sum;
            std::vector<int> counts(static_cast<size_t>(n_clients), 0);
            std::vector<std::pair<double, int>> rema(static_cast<size_t>(n_clients));
            int assigned = 0;
            for (int k = 0; k < n_clients; ++k) {
                double exact = w[static_cast<size_t>(k)] * static_cast<double>(members.size());
                counts[static_cast<size_t>(k)] = static_cast<int>(exact);
                assigned += counts[static_cast<size_t>(k)];
                rema[static_cast<size_t>(k)] = {exact - counts[static_cast<size_t>(k)], k};
            }
            std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            for (int i = 0; i < static_cast<int>(members.size()) - assigned; ++i)
                counts[static_cast<size_t>(rema[static_cast<size_t>(i)].second)] += 1;
            size_t pos = 0;
            for (int k = 0; k < n_clients; ++k)
                for (int i = 0; i < counts[static_cast<size_t>(k)]; ++i)
                    assign[static_cast<size_t>(k)].push_back(members[pos++]);
        }
        // A heavily skewed draw can leave a client empty; donate one sample
        // from the fullest client so every dataset is non-empty.
        for (size_t k = 0; k < assign.size(); ++k) {
            if (!assign[k].empty()) continue;
            size_t donor = 0;
            for (size_t j = 1; j < assign.size(); ++j)
                if (assign[j].size() > assign[donor].size()) donor = j;
            if (assign[donor].size() < 2)
                throw std::invalid_argument("fl: fewer samples than clients");
            assign[k].push_back(assign[donor].back());
            assign[donor].pop_back();
        }
    }
    return build_from_index_lists(train, assign);
}

Mlp make_fl_model(const FlConfig& cfg, Rng& rng) {
    Mlp m({cfg.n_features, cfg.hidden_dim, cfg.n_classes});
    m.init_random(rng);
    return m;
}

Mlp local_update(const Mlp& global, const ClientDataset& client, int epochs, double lr,
                 int batch_size, Rng& rng) {
    if (client.data.size() < 1) throw std::invalid_argument("fl: empty client dataset");
    Mlp model = global;
    std::vector<int> order(static_cast<size_t>(client.data.size()));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(static_cast<size_t>(model.param_count()));
    for (int e = 0; e < epochs; ++e) {
        rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(batch_size)) {
            size_t end = std::min(order.size(), start + static_cast<size_t>(batch_size));
            std::vector<std::vector<double>> xs;
            std::vector<int> ys;
            xs.reserve(end - start);
            ys.reserve(end - start);
            for (size_t i = start; i < end; ++i) {
                xs.push_back(client.data.xs[static_cast<size_t>(order[i])]);
                ys.push_back(client.data.ys[static_cast<size_t>(order[i])]);
            }
            std::fill(grad.begin(), grad.end(), 0.0);
            model.loss_and_grad(xs, ys, grad);
            model.apply_gradient(grad, lr);
        }
    }
    return model;
}

Mlp aggregate(const std::vector<Mlp>& updates) {
    if (updates.empty()) throw std::invalid_argument("fl: no successful uploads");
    Mlp out = updates.front();
    auto& p = out.params();
    for (size_t m = 1; m < updates.size(); ++m) {
        if (updates[m].sizes() != out.sizes())
            throw std::invalid_argument("fl: mismatched model architectures");
        const auto& q = updates[m].params();
        for (size_t i = 0; i < p.size(); ++i) p[i] += q[i];
    }
    double inv = 1.0 / static_cast<double>(updates.size());
    for (auto& v : p) v *= inv;
    return out;
}

Mlp aggregate_weighted(const std::vector<Mlp>& updates, const std::vector<int>& n_samples) {
    if (updates.empty()) throw std::invalid_argument("fl: no successful uploads");
    if (updates.size() != n_samples.size())
        throw std::invalid_argument("fl: weight count mismatch");
    double total = 0.0;
    for (int n : n_samples) {
        if (n < 1) throw std::invalid_argument("fl: sample weights must be >= 1");
        total += n;
    }
    Mlp out = updates.front();
    auto& p = out.params();
    std::fill(p.begin(), p.end(), 0.0);
    for (size_t m = 0; m < updates.size(); ++m) {
        if (updates[m].sizes() != out.sizes())
            throw std::invalid_argument("fl: mismatched model architectures");
        double w = static_cast<double>(n_samples[m]) / total;
        const auto& q = updates[m].params();
        for (size_t i = 0; i < p.size(); ++i) p[i] += w * q[i];
    }
    return out;
}

EvalResult evaluate(const Mlp& model, const Dataset& test) {
    if (test.size() < 1) throw std::invalid_argument("fl: empty test set");
    EvalResult r;
    r.loss = model.mean_loss(test.xs, test.ys);
    r.accuracy = model.accuracy(test.xs, test.ys);
    return r;
}

long model_size_bits(const Mlp& model) {
    return static_cast<long>(model.param_count()) * 32L;
}

} // namespace ecofl::fl
