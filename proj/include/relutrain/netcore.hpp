#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relutrain/rng.hpp"

#include <json.hpp>

namespace relutrain {

inline double relu(double z) { return z > 0.0 ? z : 0.0; }
// Subgradient choice at 0: phi'(0) = 0, so dead neurons get exactly-zero grads.
inline double relu_grad(double z) { return z > 0.0 ? 1.0 : 0.0; }

/// Layer widths (n_0, ..., n_L). n_0 is the input dimension, n_L the output.
struct Architecture {
    std::vector<int> widths;

    Architecture() = default;
    Architecture(std::initializer_list<int> w) : widths(w) { validate(); }
    explicit Architecture(std::vector<int> w) : widths(std::move(w)) { validate(); }

    int layers() const { return static_cast<int>(widths.size()) - 1; } // L
    int input_dim() const { return widths.front(); }
    int output_dim() const { return widths.back(); }

    void validate() const {
        if (widths.size() < 2)
            throw std::invalid_argument("architecture needs at least input and output widths");
        for (int w : widths)
            if (w < 1) throw std::invalid_argument("architecture widths must be >= 1");
    }
};

/// Row-major dense matrix of doubles.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
    std::span<double> row(int i) { return {data.data() + static_cast<size_t>(i) * cols, static_cast<size_t>(cols)}; }
    std::span<const double> row(int i) const { return {data.data() + static_cast<size_t>(i) * cols, static_cast<size_t>(cols)}; }
};

/// How one layer's weights/biases are drawn.
struct InitScheme {
    enum class Kind {
        NormalNoBias,      // W ~ N(0, sigma_w^2), b = 0
        NormalWithBias,    // W ~ N(0, sigma_w^2), b ~ N(0, sigma_b^2)
        HeNoBias,          // sigma_w^2 = 2 / fan_in, b = 0
        HeWithBias,        // rows [W, b] ~ N(0, 2 / (fan_in + 1))
        UnitSphereNoBias,  // rows of W uniform on S^{fan_in - 1}, b = 0
        UnitSphereWithBias,// rows [W, b] uniform on S^{fan_in}
        DataDependent,     // W ~ N(0, sigma_in^2), b anchored to training inputs
    };

    Kind kind = Kind::HeWithBias;
    double sigma_w = 1.0; // NormalNoBias / NormalWithBias; sigma_in for DataDependent
    double sigma_b = 1.0; // NormalWithBias only; sigma_e for DataDependent
    double sigma_out = 1.0; // DataDependent only: layer-2 sigma

    static InitScheme normal(double sigma) { return {Kind::NormalNoBias, sigma, 0.0, 0.0}; }
    static InitScheme normal_with_bias(double sigma_w, double sigma_b) {
        return {Kind::NormalWithBias, sigma_w, sigma_b, 0.0};
    }
    static InitScheme he() { return {Kind::HeNoBias, 0.0, 0.0, 0.0}; }
    static InitScheme he_with_bias() { return {Kind::HeWithBias, 0.0, 0.0, 0.0}; }
    static InitScheme unit_sphere() { return {Kind::UnitSphereNoBias, 0.0, 0.0, 0.0}; }
    static InitScheme unit_sphere_with_bias() { return {Kind::UnitSphereWithBias, 0.0, 0.0, 0.0}; }
    static InitScheme data_dependent(double sigma_in, double sigma_e, double sigma_out) {
        if (!(sigma_in > 0.0) || sigma_e < 0.0 || !(sigma_out > 0.0))
            throw std::invalid_argument("data_dependent: sigma_in, sigma_out must be > 0, sigma_e >= 0");
        return {Kind::DataDependent, sigma_in, sigma_e, sigma_out};
    }

    bool has_bias() const {
        switch (kind) {
            case Kind::NormalNoBias:
            case Kind::HeNoBias:
            case Kind::UnitSphereNoBias: return false;
            default: return true;
        }
    }
};

/// Layer-ordered weights and biases of a ReLU network. Treated as a value:
/// training produces new states rather than mutating shared ones.
struct NetworkParams {
    Architecture arch;
    std::vector<Matrix> weights;             // weights[t]: n_{t+1} x n_t, t = 0..L-1
    std::vector<std::vector<double>> biases; // biases[t]: length n_{t+1}

    int layers() const { return arch.layers(); }

    void check_shapes() const {
        const int L = arch.layers();
        if (static_cast<int>(weights.size()) != L || static_cast<int>(biases.size()) != L)
            throw std::invalid_argument("network params do not match architecture depth");
        for (int t = 0; t < L; ++t) {
            if (weights[t].rows != arch.widths[t + 1] || weights[t].cols != arch.widths[t] ||
                static_cast<int>(biases[t].size()) != arch.widths[t + 1])
                throw std::invalid_argument("layer shape mismatch");
        }
    }
};

/// Pre-activations z^t and post-activations phi(z^t) for every layer.
struct ForwardTrace {
    std::vector<std::vector<double>> preact;  // preact[t]: length n_{t+1}
    std::vector<std::vector<double>> act;     // act[t] = relu(preact[t]) except last (identity)
};

inline ForwardTrace forward_trace(const NetworkParams& params, std::span<const double> x) {
    const int L = params.layers();
    if (static_cast<int>(x.size()) != params.arch.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    ForwardTrace tr;
    tr.preact.resize(L);
    tr.act.resize(L);
    std::vector<double> cur(x.begin(), x.end());
    for (int t = 0; t < L; ++t) {
        const Matrix& w = params.weights[t];
        auto& z = tr.preact[t];
        z.assign(w.rows, 0.0);
        for (int i = 0; i < w.rows; ++i) {
            double acc = params.biases[t][i];
            const auto row = w.row(i);
            for (int j = 0; j < w.cols; ++j) acc += row[j] * cur[j];
            z[i] = acc;
        }
        auto& a = tr.act[t];
        a = z;
        if (t + 1 < L)
            for (auto& v : a) v = relu(v);
        cur = a;
    }
    return tr;
}

/// Network output N^L(x). Hidden layers pass through ReLU, the output layer
/// is affine.
inline std::vector<double> forward(const NetworkParams& params, std::span<const double> x) {
    return forward_trace(params, x).act.back();
}

inline double forward_scalar(const NetworkParams& params, double x) {
    const double in[1] = {x};
    return forward(params, std::span<const double>(in, 1)).front();
}

// ---------------------------------------------------------------------------
// Initialization

/// Draws one network. `schemes` has one entry per layer (length L). The
/// DataDependent scheme needs the training inputs to anchor its biases; pass
/// them via `inputs` (it is only valid for layer 1 of a shallow network).
/// Identical seed gives identical parameters.
inline NetworkParams init_network(const Architecture& arch,
                                  const std::vector<InitScheme>& schemes,
                                  std::uint64_t seed,
                                  const std::vector<std::vector<double>>& inputs = {}) {
    arch.validate();
    const int L = arch.layers();
    if (static_cast<int>(schemes.size()) != L)
        throw std::invalid_argument("init_network: one scheme per layer required");

    NetworkParams params;
    params.arch = arch;
    params.weights.reserve(L);
    params.biases.reserve(L);
    Rng rng(seed);

    for (int t = 0; t < L; ++t) {
        const int fan_in = arch.widths[t];
        const int fan_out = arch.widths[t + 1];
        const InitScheme& s = schemes[t];
        Matrix w(fan_out, fan_in);
        std::vector<double> b(fan_out, 0.0);

        switch (s.kind) {
            case InitScheme::Kind::NormalNoBias:
                for (auto& v : w.data) v = rng.normal(0.0, s.sigma_w);
                break;
            case InitScheme::Kind::NormalWithBias:
                for (int i = 0; i < fan_out; ++i) {
                    for (int j = 0; j < fan_in; ++j) w(i, j) = rng.normal(0.0, s.sigma_w);
                    b[i] = rng.normal(0.0, s.sigma_b);
                }
                break;
            case InitScheme::Kind::HeNoBias: {
                const double sigma = std::sqrt(2.0 / fan_in);
                for (auto& v : w.data) v = rng.normal(0.0, sigma);
                break;
            }
            case InitScheme::Kind::HeWithBias: {
                const double sigma = std::sqrt(2.0 / (fan_in + 1));
                for (int i = 0; i < fan_out; ++i) {
                    for (int j = 0; j < fan_in; ++j) w(i, j) = rng.normal(0.0, sigma);
                    b[i] = rng.normal(0.0, sigma);
                }
                break;
            }
            case InitScheme::Kind::UnitSphereNoBias:
                for (int i = 0; i < fan_out; ++i) {
                    auto row = rng.unit_sphere(fan_in);
                    std::copy(row.begin(), row.end(), w.row(i).begin());
                }
                break;
            case InitScheme::Kind::UnitSphereWithBias:
                for (int i = 0; i < fan_out; ++i) {
                    auto row = rng.unit_sphere(fan_in + 1);
                    std::copy(row.begin(), row.end() - 1, w.row(i).begin());
                    b[i] = row.back();
                }
                break;
            case InitScheme::Kind::DataDependent: {
                if (t != 0 || L != 2)
                    throw std::invalid_argument(
                        "init_network: DataDependent is a layer-1 scheme for shallow networks");
                const int m = static_cast<int>(inputs.size());
                if (m < 1) throw std::invalid_argument("init_network: DataDependent needs training inputs");
                if (fan_out < m)
                    throw std::invalid_argument("init_network: DataDependent needs width >= number of inputs");
                for (auto& v : w.data) v = rng.normal(0.0, s.sigma_w); // sigma_in
                // b_i = -<w_i, x_{j_i}> + |eps_i|, anchors cycling through the data.
                for (int i = 0; i < fan_out; ++i) {
                    const auto& anchor = inputs[i % m];
                    if (static_cast<int>(anchor.size()) != fan_in)
                        throw std::invalid_argument("init_network: input dimension mismatch");
                    double dot = 0.0;
                    for (int j = 0; j < fan_in; ++j) dot += w(i, j) * anchor[j];
                    b[i] = -dot + std::abs(rng.normal(0.0, s.sigma_b)); // sigma_e
                }
                break;
            }
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    return params;
}

// ---------------------------------------------------------------------------
// Exact piecewise-linear evaluation for 1-D inputs

/// Knot locations of every hidden pre-activation in [-r, r] plus the network
/// output at each knot; between adjacent knots the output is affine.
struct Piecewise1d {
    std::vector<double> knots;
    std::vector<double> values;
};

namespace detail {

// Refines `knots` (sorted, spanning [-r, r]) with the zero crossings of layer
// t's pre-activations. Given that `knots` already contains the kinks of all
// earlier layers, each pre-activation is affine between adjacent knots, so
// crossings are exact.
inline void insert_layer_crossings(const NetworkParams& params, int t,
                                   std::vector<double>& knots) {
    const int n_t = params.arch.widths[t + 1];
    std::vector<double> next;
    next.reserve(knots.size() * 2);
    std::vector<std::vector<double>> pre(knots.size());
    for (size_t k = 0; k < knots.size(); ++k) {
        const double x = knots[k];
        pre[k] = forward_trace(params, std::span<const double>(&x, 1)).preact[t];
    }
    for (size_t k = 0; k + 1 < knots.size(); ++k) {
        next.push_back(knots[k]);
        std::vector<double> interior;
        for (int i = 0; i < n_t; ++i) {
            const double za = pre[k][i], zb = pre[k + 1][i];
            if ((za > 0.0 && zb < 0.0) || (za < 0.0 && zb > 0.0)) {
                const double root = knots[k] + za * (knots[k + 1] - knots[k]) / (za - zb);
                if (root > knots[k] && root < knots[k + 1]) interior.push_back(root);
            }
        }
        std::sort(interior.begin(), interior.end());
        for (double x : interior)
            if (next.back() != x) next.push_back(x);
    }
    next.push_back(knots.back());
    knots = std::move(next);
}

} // namespace detail

/// Exact breakpoints of a network with 1-D input, obtained by forward
/// propagating zero crossings layer by layer.
inline Piecewise1d eval_piecewise_1d(const NetworkParams& params, double r) {
    if (params.arch.input_dim() != 1)
        throw std::invalid_argument("eval_piecewise_1d: input dimension must be 1");
    if (!(r > 0.0)) throw std::domain_error("eval_piecewise_1d: radius must be positive");
    params.check_shapes();

    std::vector<double> knots = {-r, r};
    const int L = params.layers();
    for (int t = 0; t + 1 < L; ++t) // output layer is affine, adds no kinks
        detail::insert_layer_crossings(params, t, knots);

    Piecewise1d out;
    out.knots = knots;
    out.values.reserve(knots.size());
    for (double x : knots) out.values.push_back(forward_scalar(params, x));
    return out;
}

// ---------------------------------------------------------------------------
// Neuron life states

enum class LifeState { Active, TentativelyDead, PermanentlyDead };

/// Life state of one hidden neuron on B_r(0). `constant_value` is the
/// constant it outputs when dead (almost surely 0).
struct NeuronStatus {
    int layer = 0;  // 1-based hidden layer index
    int index = 0;
    LifeState state = LifeState::Active;
    double constant_value = 0.0;

    bool dead() const { return state != LifeState::Active; }
};

namespace detail {

// Permanence test for t > 1: every incoming weight <= 0 and bias <= 0 keeps
// the pre-activation nonpositive no matter what the upstream neurons do.
// All weights are tested, not only those from currently active upstream
// neurons, so revival of a tentatively dead upstream neuron cannot flip the
// classification.
inline bool sign_permanent(const NetworkParams& params, int t, int i) {
    const auto row = params.weights[t].row(i);
    for (double w : row)
        if (w > 0.0) return false;
    return params.biases[t][i] <= 0.0;
}

inline NeuronStatus classify(const NetworkParams& params, int t, int i,
                             double zmax, double zmin) {
    NeuronStatus st;
    st.layer = t + 1;
    st.index = i;
    const bool constant = zmax == zmin;
    if (zmax <= 0.0 || constant) {
        st.constant_value = relu(zmax);
        if (t == 0) {
            st.state = LifeState::PermanentlyDead; // layer-1 dead neurons never revive
        } else {
            st.state = sign_permanent(params, t, i) ? LifeState::PermanentlyDead
                                                    : LifeState::TentativelyDead;
        }
    } else {
        st.state = LifeState::Active;
    }
    return st;
}

} // namespace detail

/// Classifies every hidden neuron on B_r(0).
///
/// Layer 1 is decided exactly by r*||w|| + b <= 0. Deeper layers are exact for
/// 1-D inputs (piecewise-linear propagation); for d_in > 1 they are probed at
/// `probe_count` quasi-uniform ball points, which is an approximation since
/// constancy over a ball cannot be decided from finitely many samples.
inline std::vector<NeuronStatus> neuron_status(const NetworkParams& params, double r,
                                               int probe_count = 4096) {
    if (!(r > 0.0)) throw std::domain_error("neuron_status: radius must be positive");
    params.check_shapes();
    const int L = params.layers();
    const int d_in = params.arch.input_dim();
    std::vector<NeuronStatus> out;
    if (L < 2) return out; // no hidden layers

    // Layer 1: the pre-activation over the ball spans [b - r||w||, b + r||w||].
    for (int i = 0; i < params.arch.widths[1]; ++i) {
        const auto row = params.weights[0].row(i);
        double norm = 0.0;
        for (double w : row) norm += w * w;
        norm = std::sqrt(norm);
        const double b = params.biases[0][i];
        out.push_back(detail::classify(params, 0, i, r * norm + b, -r * norm + b));
    }

    if (d_in == 1) {
        std::vector<double> knots = {-r, r};
        for (int t = 1; t <= L - 2; ++t) {
            detail::insert_layer_crossings(params, t - 1, knots);
            std::vector<std::vector<double>> pre(knots.size());
            for (size_t k = 0; k < knots.size(); ++k) {
                const double x = knots[k];
                pre[k] = forward_trace(params, std::span<const double>(&x, 1)).preact[t];
            }
            for (int i = 0; i < params.arch.widths[t + 1]; ++i) {
                double zmax = pre[0][i], zmin = pre[0][i];
                for (size_t k = 1; k < knots.size(); ++k) {
                    zmax = std::max(zmax, pre[k][i]);
                    zmin = std::min(zmin, pre[k][i]);
                }
                out.push_back(detail::classify(params, t, i, zmax, zmin));
            }
        }
        return out;
    }

    if (L == 2) return out; // shallow: layer 1 already classified exactly

    // d_in > 1: deterministic probe set, independent of any caller RNG state.
    if (probe_count < 1) throw std::invalid_argument("neuron_status: probe_count must be >= 1");
    Rng probe_rng(0x9E3779B97F4A7C15ull);
    std::vector<std::vector<double>> probes(probe_count);
    for (auto& p : probes) p = probe_rng.ball(d_in, r);
    std::vector<std::vector<double>> zmax(L - 1), zmin(L - 1);
    for (int t = 1; t <= L - 2; ++t) {
        zmax[t].assign(params.arch.widths[t + 1], -1e300);
        zmin[t].assign(params.arch.widths[t + 1], 1e300);
    }
    for (const auto& p : probes) {
        const auto tr = forward_trace(params, p);
        for (int t = 1; t <= L - 2; ++t) {
            for (int i = 0; i < params.arch.widths[t + 1]; ++i) {
                zmax[t][i] = std::max(zmax[t][i], tr.preact[t][i]);
                zmin[t][i] = std::min(zmin[t][i], tr.preact[t][i]);
            }
        }
    }
    for (int t = 1; t <= L - 2; ++t)
        for (int i = 0; i < params.arch.widths[t + 1]; ++i)
            out.push_back(detail::classify(params, t, i, zmax[t][i], zmin[t][i]));
    return out;
}

/// Number of neurons in a hidden layer (1-based) with the given state.
inline int count_state(const std::vector<NeuronStatus>& statuses, int layer, LifeState state) {
    int n = 0;
    for (const auto& st : statuses)
        if (st.layer == layer && st.state == state) ++n;
    return n;
}

inline int count_dead(const std::vector<NeuronStatus>& statuses, int layer) {
    int n = 0;
    for (const auto& st : statuses)
        if (st.layer == layer && st.dead()) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// JSON serialization. Doubles are written with 17 significant digits so the
// round trip is bit-exact.

inline std::string to_json(const NetworkParams& params) {
    params.check_shapes();
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string s = "{\"widths\":[";
    for (size_t i = 0; i < params.arch.widths.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(params.arch.widths[i]);
    }
    s += "],\"layers\":[";
    for (int t = 0; t < params.layers(); ++t) {
        if (t) s += ',';
        s += "{\"weights\":[";
        for (int i = 0; i < params.weights[t].rows; ++i) {
            if (i) s += ',';
            s += '[';
            for (int j = 0; j < params.weights[t].cols; ++j) {
                if (j) s += ',';
                s += num(params.weights[t](i, j));
            }
            s += ']';
        }
        s += "],\"bias\":[";
        for (size_t i = 0; i < params.biases[t].size(); ++i) {
            if (i) s += ',';
            s += num(params.biases[t][i]);
        }
        s += "]}";
    }
    s += "]}";
    return s;
}

inline NetworkParams network_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    NetworkParams params;
    params.arch = Architecture(j.at("widths").get<std::vector<int>>());
    for (const auto& layer : j.at("layers")) {
        const auto rows = layer.at("weights").get<std::vector<std::vector<double>>>();
        Matrix w(static_cast<int>(rows.size()), static_cast<int>(rows.at(0).size()));
        for (int i = 0; i < w.rows; ++i)
            std::copy(rows[i].begin(), rows[i].end(), w.row(i).begin());
        params.weights.push_back(std::move(w));
        params.biases.push_back(layer.at("bias").get<std::vector<double>>());
    }
    params.check_shapes();
    return params;
}

} // namespace relutrain
