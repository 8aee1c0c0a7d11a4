// mlp.hpp - small dense feedforward network with rectifier hidden layers
// and a softmax/cross-entropy head. Shared by the policy classifier and the
// FL task model. Parameters live in one flat vector (per layer: row-major
// weights then biases) so averaging, serialization, and gradient checks all
// operate on plain arrays.

#pragma once

#include <iosfwd>
#include <vector>

#include "ecofl/rng.hpp"

namespace ecofl {

class Mlp {
public:
    // sizes = {in, hidden..., out}; at least one layer (two entries).
    explicit Mlp(std::vector<int> sizes);

    const std::vector<int>& sizes() const { return sizes_; }
    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    int param_count() const { return static_cast<int>(params_.size()); }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // He-scaled normal weights, zero biases. Deterministic per stream.
    void init_random(Rng& rng);

    std::vector<double> logits(const std::vector<double>& x) const;
    std::vector<double> probs(const std::vector<double>& x) const;  // softmax(logits)
    int predict(const std::vector<double>& x) const;  // argmax, lowest index wins ties

    // Mean cross-entropy over the batch; adds the mean gradient into `grad`
    // (same layout/length as params). Returns the loss.
    double loss_and_grad(const std::vector<std::vector<double>>& xs,
                         const std::vector<int>& ys, std::vector<double>& grad) const;

    double mean_loss(const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys) const;
    double accuracy(const std::vector<std::vector<double>>& xs,
                    const std::vector<int>& ys) const;

    void apply_gradient(const std::vector<double>& grad, double lr);

    // Flat text format: "mlp" header, "sizes ..." line, then per layer a
    // "layer <idx> <out> <in>" line followed by <out> weight rows and one
    // bias row. Round-trip exact (shortest-recoverable decimals).
    void save_text(std::ostream& os) const;
    static Mlp load_text(std::istream& is);

private:
    std::vector<int> sizes_;
    std::vector<double> params_;
    std::vector<int> layer_offset_;  // start of each layer's block in params_

    int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
    const double* weights(int layer) const;
    const double* biases(int layer) const;
};

std::vector<double> softmax(const std::vector<double>& logits);
int argmax_lowest(const std::vector<double>& v);

} // namespace ecofl
