#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "relutrain/errors.hpp"
#include "relutrain/netcore.hpp"
#include "relutrain/rng.hpp"

namespace relutrain {

/// Parameters of the data-dependent bias initialization for a shallow network
/// of width n = h * m over m training inputs.
struct DataDepConfig {
    double sigma_in = 1.0;
    double sigma_e = 0.0;
    double sigma_out = 1.0;
    double h = 1.0;
};

namespace detail {

inline double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline double squared_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace detail

/// Width implied by an over-parameterization ratio h: n = ceil(h m).
inline int datadep_width(int m, double h) {
    return static_cast<int>(std::ceil(h * m - 1e-12));
}

/// Default calibration: sigma_in^2 = 2/d, sigma_e = 0, and sigma_out chosen so
/// the expected squared network norm over the data matches He-without-bias.
/// When h m is not an integer the width is rounded up and h recomputed as n/m,
/// which keeps the calibration identity exact.
inline DataDepConfig default_params(const std::vector<std::vector<double>>& inputs, double h,
                                    int d) {
    if (inputs.size() < 2)
        throw std::invalid_argument("default_params: need at least 2 training inputs");
    if (!(h >= 1.0)) throw std::invalid_argument("default_params: need h >= 1");
    const int m = static_cast<int>(inputs.size());

    double num = 0.0, denom = 0.0;
    for (int j = 0; j < m; ++j) num += detail::squared_norm(inputs[j]);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < i; ++k) denom += detail::squared_dist(inputs[k], inputs[i]);
    if (denom == 0.0)
        throw degenerate_data_error("default_params: all training inputs identical");

    DataDepConfig cfg;
    cfg.h = static_cast<double>(datadep_width(m, h)) / m;
    cfg.sigma_in = std::sqrt(2.0 / d);
    cfg.sigma_e = 0.0;
    cfg.sigma_out = std::sqrt(num / denom / cfg.h);
    return cfg;
}

/// b_i = -<w_i, x_{j_i}> + |eps_i| with eps_i ~ N(0, sigma_e^2) and the anchor
/// index cycling through the data: j_i - 1 = (i - 1) mod m.
inline std::vector<double> datadep_biases(const Matrix& weights,
                                          const std::vector<std::vector<double>>& inputs,
                                          double sigma_e, std::uint64_t seed) {
    const int m = static_cast<int>(inputs.size());
    if (m < 1) throw std::invalid_argument("datadep_biases: need training inputs");
    if (weights.rows < m)
        throw std::invalid_argument("datadep_biases: width must be >= number of inputs");
    Rng rng(seed);
    std::vector<double> b(weights.rows);
    for (int i = 0; i < weights.rows; ++i) {
        const auto& anchor = inputs[i % m];
        double dot = 0.0;
        for (int j = 0; j < weights.cols; ++j) dot += weights(i, j) * anchor[j];
        b[i] = -dot + std::abs(rng.normal(0.0, sigma_e));
    }
    return b;
}

/// Closed-form E_X[q(x)], the expected squared network norm per output
/// component averaged over the training inputs:
///   (h sigma_out^2 sigma_in^2 / (m pi)) *
///   sum_{k,i} [(s^2 + D_{k,i}^2)(atan(s / D_{k,i}) + pi/2) + s D_{k,i}],
/// with s = sigma_e / sigma_in. The D = 0 diagonal uses the analytic limit
/// s^2 pi of the summand. The formula models h neurons anchored at each
/// input; when n is not a multiple of m the cycling assignment is uneven and
/// the value is the h = n/m approximation.
inline double expected_q(const std::vector<std::vector<double>>& inputs, int n,
                         const DataDepConfig& cfg) {
    const int m = static_cast<int>(inputs.size());
    if (m < 1) throw std::invalid_argument("expected_q: need training inputs");
    if (n < m) throw std::invalid_argument("expected_q: need n >= m");
    const double s = cfg.sigma_e / cfg.sigma_in;
    const double h = static_cast<double>(n) / m;
    const double pi = std::numbers::pi;

    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
            const double delta = std::sqrt(detail::squared_dist(inputs[k], inputs[i]));
            if (delta == 0.0) {
                sum += s * s * pi;
            } else {
                sum += (s * s + delta * delta) * (std::atan(s / delta) + pi / 2) + s * delta;
            }
        }
    }
    return h * cfg.sigma_out * cfg.sigma_out * cfg.sigma_in * cfg.sigma_in / (m * pi) * sum;
}

/// E_X[q(x)] under He initialization without bias, the calibration reference.
inline double he_no_bias_q(const std::vector<std::vector<double>>& inputs, int n, int d) {
    const int m = static_cast<int>(inputs.size());
    if (m < 1) throw std::invalid_argument("he_no_bias_q: need training inputs");
    double frob = 0.0;
    for (const auto& x : inputs) frob += detail::squared_norm(x);
    const double sigma_in2 = 2.0 / d;
    const double sigma_out2 = 2.0 / n;
    return n * sigma_out2 * sigma_in2 / (2.0 * m) * frob;
}

/// Draws one data-dependently initialized shallow network: W1 ~ N(0,
/// sigma_in^2), anchored biases, W2 ~ N(0, sigma_out^2), b2 = 0.
inline NetworkParams init_shallow_datadep(const std::vector<std::vector<double>>& inputs,
                                          int width, int d_out, const DataDepConfig& cfg,
                                          std::uint64_t seed) {
    const int d = static_cast<int>(inputs.front().size());
    const Architecture arch(std::vector<int>{d, width, d_out});
    const std::vector<InitScheme> schemes = {
        InitScheme::data_dependent(cfg.sigma_in, cfg.sigma_e, cfg.sigma_out),
        InitScheme::normal(cfg.sigma_out),
    };
    return init_network(arch, schemes, seed, inputs);
}

struct McQResult {
    double estimate = 0.0;
    double stderr_value = 0.0;
    long samples = 0;
};

/// Monte Carlo estimate of E_X[q(x)]: average over fresh initializations of
/// (1/m) sum_k ||N(x_k)||^2 / d_out.
inline McQResult mc_q(const std::vector<std::vector<double>>& inputs, const Architecture& arch,
                      const DataDepConfig& cfg, long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("mc_q: samples must be >= 1");
    if (arch.layers() != 2) throw std::invalid_argument("mc_q: shallow architecture required");
    const int m = static_cast<int>(inputs.size());
    const int d_out = arch.output_dim();

    double sum = 0.0, sum_sq = 0.0;
    for (long k = 0; k < samples; ++k) {
        const auto net =
            init_shallow_datadep(inputs, arch.widths[1], d_out, cfg, substream_seed(seed, k));
        double q = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto y = forward(net, inputs[i]);
            for (double v : y) q += v * v;
        }
        q /= static_cast<double>(m) * d_out;
        sum += q;
        sum_sq += q * q;
    }
    McQResult out;
    out.samples = samples;
    out.estimate = sum / samples;
    const double var = std::max(0.0, sum_sq / samples - out.estimate * out.estimate);
    out.stderr_value = std::sqrt(var / samples);
    return out;
}

} // namespace relutrain
