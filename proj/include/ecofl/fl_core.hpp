// fl_core.hpp - desk-scale federated learning on a synthetic classification
// task: dataset synthesis, partitioning, local training, unweighted FedAvg
// aggregation, and evaluation. Participation (who uploads) is decided by
// the caller; everything here is deterministic given the supplied streams.

#pragma once

#include <utility>
#include <vector>

#include "ecofl/mlp.hpp"
#include "ecofl/rng.hpp"

namespace ecofl::fl {

struct FlConfig {
    int n_features = 64;
    int n_classes = 10;
    int hidden_dim = 32;
    int train_samples = 1000;
    int test_samples = 1000;
    double noise_sigma = 2.0;
    double learning_rate = 0.05;
    int batch_size = 32;
    int local_epochs = 5;
    bool weighted_aggregation = false;  // n_k-weighted mean instead of plain mean
    double dirichlet_alpha = 0.5;       // used only in Dirichlet partition mode
    bool dirichlet_partition = false;

    void validate() const;
};

struct Dataset {
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;

    int size() const { return static_cast<int>(ys.size()); }
};

struct ClientDataset {
    int client_id = 0;
    Dataset data;
};

// Balanced Gaussian blobs: class centers drawn N(0, I), samples = center +
// sigma * N(0, I), exactly n/k per class for train and test.
std::pair<Dataset, Dataset> make_synthetic_task(const FlConfig& cfg, Rng& rng);

enum class PartitionMode { IID, Dirichlet };

// Disjoint cover of the training set. IID deals a uniform shuffle into
// near-equal chunks; Dirichlet skews per-class proportions. Every client
// ends up with at least one sample.
std::vector<ClientDataset> partition_data(const Dataset& train, int n_clients,
                                          PartitionMode mode, double dirichlet_alpha,
                                          Rng& rng);

Mlp make_fl_model(const FlConfig& cfg, Rng& rng);

// tau_local epochs of shuffled mini-batch gradient descent starting from
// the global weights. The global model is not modified.
Mlp local_update(const Mlp& global, const ClientDataset& client, int epochs, double lr,
                 int batch_size, Rng& rng);

// Coordinate-wise unweighted mean. Empty input is an error ("no successful
// uploads"); the caller then carries the previous global model forward.
Mlp aggregate(const std::vector<Mlp>& updates);

// n_k-weighted mean, enabled by config flag only.
Mlp aggregate_weighted(const std::vector<Mlp>& updates, const std::vector<int>& n_samples);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

EvalResult evaluate(const Mlp& model, const Dataset& test);

long model_size_bits(const Mlp& model);

} // namespace ecofl::fl
