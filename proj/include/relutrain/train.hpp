#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "relutrain/netcore.hpp"
#include "relutrain/rng.hpp"

namespace relutrain {

/// Training pairs (x_i, y_i) with the radius of the input domain B_r(0).
struct Dataset {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
    double radius = 1.0;

    size_t size() const { return inputs.size(); }

    void validate() const {
        if (inputs.size() != targets.size())
            throw std::invalid_argument("dataset: inputs/targets length mismatch");
        for (const auto& x : inputs) {
            double norm2 = 0.0;
            for (double v : x) norm2 += v * v;
            if (std::sqrt(norm2) > radius * (1.0 + 1e-12))
                throw std::invalid_argument("dataset: input outside B_r(0)");
        }
    }

    static Dataset from_scalar(const std::vector<double>& xs, const std::vector<double>& ys,
                               double radius) {
        Dataset d;
        d.radius = radius;
        d.inputs.reserve(xs.size());
        d.targets.reserve(ys.size());
        for (double x : xs) d.inputs.push_back({x});
        for (double y : ys) d.targets.push_back({y});
        return d;
    }
};

/// Gradient of the averaged square loss, same shape as the parameters.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    static Gradients zeros_like(const NetworkParams& params) {
        Gradients g;
        for (const auto& w : params.weights) g.weights.emplace_back(w.rows, w.cols);
        for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
        return g;
    }
};

namespace detail {

// Shallow networks dominate the experiment workloads; evaluate them without
// the per-sample allocations of forward_trace.
inline double shallow_sample_error2(const NetworkParams& p, const std::vector<double>& x,
                                    const std::vector<double>& y) {
    const Matrix& w1 = p.weights[0];
    const Matrix& w2 = p.weights[1];
    double err2 = 0.0;
    for (int j = 0; j < w2.rows; ++j) {
        double out = p.biases[1][j];
        for (int i = 0; i < w1.rows; ++i) {
            double z = p.biases[0][i];
            const auto row = w1.row(i);
            for (int k = 0; k < w1.cols; ++k) z += row[k] * x[k];
            if (z > 0.0) out += w2(j, i) * z;
        }
        const double e = out - y[j];
        err2 += e * e;
    }
    return err2;
}

} // namespace detail

/// Mean squared residual (1/(B*d_out)) sum ||N(x)-y||^2 over the given rows.
inline double mean_squared_error(const NetworkParams& params, const Dataset& data,
                                 const std::vector<int>* subset = nullptr) {
    const size_t count = subset ? subset->size() : data.size();
    if (count == 0) throw std::invalid_argument("mean_squared_error: empty data");
    double acc = 0.0;
    if (params.layers() == 2 && params.weights[1].rows == 1) {
        // fast path: shallow net, evaluated in place
        for (size_t k = 0; k < count; ++k) {
            const size_t idx = subset ? (*subset)[k] : k;
            acc += detail::shallow_sample_error2(params, data.inputs[idx], data.targets[idx]);
        }
        return acc / static_cast<double>(count);
    }
    for (size_t k = 0; k < count; ++k) {
        const size_t idx = subset ? (*subset)[k] : k;
        const auto y_hat = forward(params, data.inputs[idx]);
        for (size_t j = 0; j < y_hat.size(); ++j) {
            const double e = y_hat[j] - data.targets[idx][j];
            acc += e * e;
        }
    }
    return acc / (static_cast<double>(count) * params.arch.output_dim());
}

inline double rmse(const NetworkParams& params, const Dataset& data) {
    return std::sqrt(mean_squared_error(params, data));
}

/// Exact analytic gradient of L = (1/B) sum ||N(x)-y||^2 by backpropagation.
/// phi'(0) = 0, so parameters of neurons dead on the batch get exactly-zero
/// gradient entries.
inline Gradients loss_grad(const NetworkParams& params, const Dataset& data,
                           const std::vector<int>* subset = nullptr) {
    params.check_shapes();
    const size_t count = subset ? subset->size() : data.size();
    if (count == 0) throw std::invalid_argument("loss_grad: empty batch");
    const int L = params.layers();
    Gradients grad = Gradients::zeros_like(params);
    const double inv_batch = 1.0 / static_cast<double>(count);

    if (L == 2) {
        // fused shallow backprop: same math as the generic path below, no
        // per-sample allocations
        const Matrix& w1 = params.weights[0];
        const Matrix& w2 = params.weights[1];
        std::vector<double> hidden(w1.rows);
        for (size_t k = 0; k < count; ++k) {
            const size_t idx = subset ? (*subset)[k] : k;
            const auto& x = data.inputs[idx];
            const auto& y = data.targets[idx];
            if (static_cast<int>(y.size()) != w2.rows)
                throw std::invalid_argument("loss_grad: target dimension mismatch");
            for (int i = 0; i < w1.rows; ++i) {
                double z = params.biases[0][i];
                const auto row = w1.row(i);
                for (int c = 0; c < w1.cols; ++c) z += row[c] * x[c];
                hidden[i] = z;
            }
            for (int j = 0; j < w2.rows; ++j) {
                double out = params.biases[1][j];
                for (int i = 0; i < w1.rows; ++i)
                    if (hidden[i] > 0.0) out += w2(j, i) * hidden[i];
                const double delta = 2.0 * (out - y[j]) * inv_batch;
                if (delta == 0.0) continue;
                auto g2 = grad.weights[1].row(j);
                for (int i = 0; i < w1.rows; ++i)
                    if (hidden[i] > 0.0) g2[i] += delta * hidden[i];
                grad.biases[1][j] += delta;
                for (int i = 0; i < w1.rows; ++i) {
                    if (hidden[i] <= 0.0) continue; // phi'(0) = 0
                    const double d1 = w2(j, i) * delta;
                    auto g1 = grad.weights[0].row(i);
                    for (int c = 0; c < w1.cols; ++c) g1[c] += d1 * x[c];
                    grad.biases[0][i] += d1;
                }
            }
        }
        return grad;
    }

    for (size_t k = 0; k < count; ++k) {
        const size_t idx = subset ? (*subset)[k] : k;
        const auto& x = data.inputs[idx];
        const auto& y = data.targets[idx];
        if (static_cast<int>(y.size()) != params.arch.output_dim())
            throw std::invalid_argument("loss_grad: target dimension mismatch");
        const auto tr = forward_trace(params, x);

        // delta^L = 2 (N(x) - y) / B
        std::vector<double> delta(params.arch.output_dim());
        for (size_t j = 0; j < delta.size(); ++j)
            delta[j] = 2.0 * (tr.act[L - 1][j] - y[j]) * inv_batch;

        for (int t = L - 1; t >= 0; --t) {
            const auto& upstream = (t == 0) ? x : tr.act[t - 1];
            for (int i = 0; i < params.weights[t].rows; ++i) {
                const double d = delta[i];
                if (d != 0.0) {
                    auto grow = grad.weights[t].row(i);
                    for (int j = 0; j < params.weights[t].cols; ++j)
                        grow[j] += d * upstream[j];
                    grad.biases[t][i] += d;
                }
            }
            if (t == 0) break;
            std::vector<double> prev(params.weights[t].cols, 0.0);
            for (int j = 0; j < params.weights[t].cols; ++j) {
                if (relu_grad(tr.preact[t - 1][j]) == 0.0) continue;
                double acc = 0.0;
                for (int i = 0; i < params.weights[t].rows; ++i)
                    acc += params.weights[t](i, j) * delta[i];
                prev[j] = acc;
            }
            delta = std::move(prev);
        }
    }
    return grad;
}

// ---------------------------------------------------------------------------
// Optimizers

enum class OptMethod { Sgd, SgdMomentum, Adam };

struct OptimizerConfig {
    OptMethod method = OptMethod::Sgd;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    int batch_size = 128;
    long max_epochs = 1000;
    std::uint64_t seed = 0;
    // Optional early exit once the training RMSE drops below this (0 = off).
    double stop_rmse = 0.0;

    void validate() const {
        if (!(learning_rate > 0.0)) throw std::invalid_argument("optimizer: learning rate must be > 0");
        if (batch_size < 1) throw std::invalid_argument("optimizer: batch size must be >= 1");
        if (max_epochs < 0) throw std::invalid_argument("optimizer: max epochs must be >= 0");
    }
};

/// One optimizer step applied in place. Keeps Adam/momentum state across
/// calls; construct one per training run.
class Optimizer {
public:
    explicit Optimizer(const OptimizerConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

    void step(NetworkParams& params, const Gradients& grad) {
        switch (cfg_.method) {
            case OptMethod::Sgd:
                apply(params, grad, [&](double& theta, double g, double&, double&) {
                    theta -= cfg_.learning_rate * g;
                });
                break;
            case OptMethod::SgdMomentum:
                ensure_state(params, 1);
                apply(params, grad, [&](double& theta, double g, double& v, double&) {
                    v = cfg_.momentum * v + g;
                    theta -= cfg_.learning_rate * v;
                });
                break;
            case OptMethod::Adam: {
                ensure_state(params, 2);
                ++step_count_;
                const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
                const double c1 = 1.0 - std::pow(b1, step_count_);
                const double c2 = 1.0 - std::pow(b2, step_count_);
                apply(params, grad, [&](double& theta, double g, double& m, double& v) {
                    m = b1 * m + (1.0 - b1) * g;
                    v = b2 * v + (1.0 - b2) * g * g;
                    theta -= cfg_.learning_rate * (m / c1) / (std::sqrt(v / c2) + eps);
                });
                break;
            }
        }
    }

private:
    template <typename F>
    void apply(NetworkParams& params, const Gradients& grad, F&& update) {
        size_t slot = 0;
        for (size_t t = 0; t < params.weights.size(); ++t) {
            for (size_t k = 0; k < params.weights[t].data.size(); ++k, ++slot)
                update(params.weights[t].data[k], grad.weights[t].data[k],
                       state1_.empty() ? scratch_ : state1_[slot],
                       state2_.empty() ? scratch_ : state2_[slot]);
            for (size_t k = 0; k < params.biases[t].size(); ++k, ++slot)
                update(params.biases[t][k], grad.biases[t][k],
                       state1_.empty() ? scratch_ : state1_[slot],
                       state2_.empty() ? scratch_ : state2_[slot]);
        }
    }

    void ensure_state(const NetworkParams& params, int slots) {
        if (!state1_.empty()) return;
        size_t total = 0;
        for (const auto& w : params.weights) total += w.data.size();
        for (const auto& b : params.biases) total += b.size();
        state1_.assign(total, 0.0);
        if (slots > 1) state2_.assign(total, 0.0);
    }

    OptimizerConfig cfg_;
    std::vector<double> state1_, state2_;
    double scratch_ = 0.0;
    long step_count_ = 0;
};

struct TrainResult {
    NetworkParams params;
    std::vector<double> rmse_history; // training RMSE after each epoch
};

/// Runs the configured optimizer on the square loss. Shuffling and batching
/// are driven by cfg.seed, so a run is a pure function of (params, data, cfg).
inline TrainResult train(const NetworkParams& start, const Dataset& data,
                         const OptimizerConfig& cfg) {
    cfg.validate();
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");

    TrainResult result;
    result.params = start;
    result.rmse_history.reserve(cfg.max_epochs);
    Optimizer opt(cfg);
    Rng rng(cfg.seed);

    const int n = static_cast<int>(data.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const int batch = std::min<int>(cfg.batch_size, n);

    std::vector<int> idx;
    idx.reserve(batch);
    for (long epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng.engine());
        for (int lo = 0; lo < n; lo += batch) {
            const int hi = std::min(lo + batch, n);
            idx.assign(order.begin() + lo, order.begin() + hi);
            opt.step(result.params, loss_grad(result.params, data, &idx));
        }
        const double e = rmse(result.params, data);
        result.rmse_history.push_back(e);
        if (cfg.stop_rmse > 0.0 && e < cfg.stop_rmse) break;
    }
    return result;
}

} // namespace relutrain
