#include "ecofl/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ecofl/textio.hpp"

namespace ecofl {

std::vector<double> softmax(const std::vector<double>& logits) {
    double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        sum += p[i];
    }
    for (auto& v : p) v /= sum;
    return p;
}

int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[static_cast<size_t>(i)] > v[static_cast<size_t>(best)]) best = i;
    return best;
}

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("mlp: need at least two layer sizes");
    for (int s : sizes_)
        if (s < 1) throw std::invalid_argument("mlp: layer sizes must be >= 1");
    int total = 0;
    for (int l = 0; l < num_layers(); ++l) {
        layer_offset_.push_back(total);
        total += sizes_[static_cast<size_t>(l)] * sizes_[static_cast<size_t>(l) + 1] +
                 sizes_[static_cast<size_t>(l) + 1];
    }
    params_.assign(static_cast<size_t>(total), 0.0);
}

const double* Mlp::weights(int layer) const {
    return params_.data() + layer_offset_[static_cast<size_t>(layer)];
}

const double* Mlp::biases(int layer) const {
    return weights(layer) +
           sizes_[static_cast<size_t>(layer)] * sizes_[static_cast<size_t>(layer) + 1];
}

void Mlp::init_random(Rng& rng) {
    for (int l = 0; l < num_layers(); ++l) {
        int in = sizes_[static_cast<size_t>(l)];
        int out = sizes_[static_cast<size_t>(l) + 1];
        double scale = std::sqrt(2.0 / in);
        double* w = params_.data() + layer_offset_[static_cast<size_t>(l)];
        for (int i = 0; i < out * in; ++i) w[i] = rng.normal() * scale;
        for (int i = 0; i < out; ++i) w[out * in + i] = 0.0;
    }
}

std::vector<double> Mlp::logits(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != input_dim())
        throw std::invalid_argument("mlp: input dimension mismatch");
    std::vector<double> a = x;
    for (int l = 0; l < num_layers(); ++l) {
        int in = sizes_[static_cast<size_t>(l)];
        int out = sizes_[static_cast<size_t>(l) + 1];
        const double* w = weights(l);
        const double* b = biases(l);
        std::vector<double> z(static_cast<size_t>(out));
        for (int o = 0; o < out; ++o) {
            double acc = b[o];
            const double* row = w + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) acc += row[i] * a[static_cast<size_t>(i)];
            z[static_cast<size_t>(o)] = acc;
        }
        if (l + 1 < num_layers())
            for (auto& v : z) v = std::max(v, 0.0);
        a = std::move(z);
    }
    return a;
}

std::vector<double> Mlp::probs(const std::vector<double>& x) const {
    return softmax(logits(x));
}

int Mlp::predict(const std::vector<double>& x) const {
    return argmax_lowest(logits(x));
}

double Mlp::loss_and_grad(const std::vector<std::vector<double>>& xs,
                          const std::vector<int>& ys, std::vector<double>& grad) const {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("mlp: batch shape mismatch");
    if (grad.size() != params_.size())
        throw std::invalid_argument("mlp: gradient buffer size mismatch");
    int layers = num_layers();
    double total_loss = 0.0;
    double inv_n = 1.0 / static_cast<double>(xs.size());

    // activations[l] holds the input to layer l (post-rectifier for l > 0).
    std::vector<std::vector<double>> activations(static_cast<size_t>(layers) + 1);
    for (size_t s = 0; s < xs.size(); ++s) {
        const auto& x = xs[s];
        int y = ys[s];
        if (y < 0 || y >= output_dim())
            throw std::invalid_argument("mlp: label out of range");
        activations[0] = x;
        for (int l = 0; l < layers; ++l) {
            int in = sizes_[static_cast<size_t>(l)];
            int out = sizes_[static_cast<size_t>(l) + 1];
            const double* w = weights(l);
            const double* b = biases(l);
            auto& src = activations[static_cast<size_t>(l)];
            std::vector<double> z(static_cast<size_t>(out));
            for (int o = 0; o < out; ++o) {
                double acc = b[o];
                const double* row = w + static_cast<size_t>(o) * in;
                for (int i = 0; i < in; ++i) acc += row[i] * src[static_cast<size_t>(i)];
                z[static_cast<size_t>(o)] = acc;
            }
            if (l + 1 < layers)
                for (auto& v : z) v = std::max(v, 0.0);
            activations[static_cast<size_t>(l) + 1] = std::move(z);
        }
        auto p = softmax(activations[static_cast<size_t>(layers)]);
        double py = std::max(p[static_cast<size_t>(y)], 1e-300);
        total_loss += -std::log(py);

        // delta = dLoss/dz for the current layer, starting at the head.
        std::vector<double> delta = p;
        delta[static_cast<size_t>(y)] -= 1.0;
        for (int l = layers - 1; l >= 0; --l) {
            int in = sizes_[static_cast<size_t>(l)];
            int out = sizes_[static_cast<size_t>(l) + 1];
            const double* w = weights(l);
            double* gw = grad.data() + layer_offset_[static_cast<size_t>(l)];
            double* gb = gw + static_cast<size_t>(out) * in;
            auto& src = activations[static_cast<size_t>(l)];
            for (int o = 0; o < out; ++o) {
                double d = delta[static_cast<size_t>(o)] * inv_n;
                double* grow = gw + static_cast<size_t>(o) * in;
                for (int i = 0; i < in; ++i) grow[i] += d * src[static_cast<size_t>(i)];
                gb[o] += d;
            }
            if (l == 0) break;
            std::vector<double> prev(static_cast<size_t>(in), 0.0);
            for (int o = 0; o < out; ++o) {
                double d = delta[static_cast<size_t>(o)];
                const double* row = w + static_cast<size_t>(o) * in;
                for (int i = 0; i < in; ++i) prev[static_cast<size_t>(i)] += row[i] * d;
            }
            // Rectifier gate: src holds post-activation values, zero where the
            // unit was clipped.
            for (int i = 0; i < in; ++i)
                if (src[static_cast<size_t>(i)] <= 0.0) prev[static_cast<size_t>(i)] = 0.0;
            delta = std::move(prev);
        }
    }
    return total_loss * inv_n;
}

double Mlp::mean_loss(const std::vector<std::vector<double>>& xs,
                      const std::vector<int>& ys) const {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("mlp: batch shape mismatch");
    double total = 0.0;
    for (size_t s = 0; s < xs.size(); ++s) {
        auto p = probs(xs[s]);
        double py = std::max(p[static_cast<size_t>(ys[s])], 1e-300);
        total += -std::log(py);
    }
    return total / static_cast<double>(xs.size());
}

double Mlp::accuracy(const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys) const {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("mlp: batch shape mismatch");
    int hits = 0;
    for (size_t s = 0; s < xs.size(); ++s)
        if (predict(xs[s]) == ys[s]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(xs.size());
}

void Mlp::apply_gradient(const std::vector<double>& grad, double lr) {
    if (grad.size() != params_.size())
        throw std::invalid_argument("mlp: gradient buffer size mismatch");
    for (size_t i = 0; i < params_.size(); ++i) params_[i] -= lr * grad[i];
}

void Mlp::save_text(std::ostream& os) const {
    os << "mlp\nsizes";
    for (int s : sizes_) os << ' ' << s;
    os << '\n';
    for (int l = 0; l < num_layers(); ++l) {
        int in = sizes_[static_cast<size_t>(l)];
        int out = sizes_[static_cast<size_t>(l) + 1];
        os << "layer " << l << ' ' << out << ' ' << in << '\n';
        const double* w = weights(l);
        for (int o = 0; o < out; ++o) {
            const double* row = w + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) {
                if (i) os << ' ';
                os << format_double_exact(row[i]);
            }
            os << '\n';
        }
        const double* b = biases(l);
        for (int i = 0; i < out; ++i) {
            if (i) os << ' ';
            os << format_double_exact(b[i]);
        }
        os << '\n';
    }
}

Mlp Mlp::load_text(std::istream& is) {
    std::string tag;
    if (!(is >> tag) || tag != "mlp")
        throw std::runtime_error("mlp: bad weights file: missing header");
    if (!(is >> tag) || tag != "sizes")
        throw std::runtime_error("mlp: bad weights file: missing sizes");
    std::string rest;
    std::getline(is, rest);
    std::istringstream line(rest);
    std::vector<int> sizes;
    int v;
    while (line >> v) sizes.push_back(v);
    Mlp m(sizes);
    for (int l = 0; l + 1 < static_cast<int>(sizes.size()); ++l) {
        int idx, out, in;
        if (!(is >> tag >> idx >> out >> in) || tag != "layer" || idx != l ||
            out != sizes[static_cast<size_t>(l) + 1] || in != sizes[static_cast<size_t>(l)])
            throw std::runtime_error("mlp: bad weights file: layer header mismatch");
        double* w = m.params_.data() + m.layer_offset_[static_cast<size_t>(l)];
        for (int i = 0; i < out * in + out; ++i)
            if (!(is >> w[i]))
                throw std::runtime_error("mlp: bad weights file: truncated values");
    }
    return m;
}

} // namespace ecofl
