#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "relutrain/errors.hpp"
#include "relutrain/netcore.hpp"
#include "relutrain/rng.hpp"
#include "relutrain/train.hpp"

namespace relutrain {

/// Unit vector whose projections of the given points are strictly ordered
/// (after sorting). Distinct points admit such a direction with probability
/// 1, so running out of attempts indicates duplicated points.
inline std::vector<double> find_direction(const std::vector<std::vector<double>>& points,
                                          std::uint64_t seed, int max_attempts = 1000) {
    if (points.size() < 2) throw std::invalid_argument("find_direction: need at least 2 points");
    const int d = static_cast<int>(points.front().size());

    auto strictly_separated = [&](const std::vector<double>& w) {
        std::vector<double> proj(points.size());
        for (size_t i = 0; i < points.size(); ++i)
            proj[i] = std::inner_product(points[i].begin(), points[i].end(), w.begin(), 0.0);
        std::sort(proj.begin(), proj.end());
        const double spread = proj.back() - proj.front();
        const double min_gap = 1e-12 * std::max(1.0, spread);
        for (size_t i = 0; i + 1 < proj.size(); ++i)
            if (proj[i + 1] - proj[i] < min_gap) return false;
        return true;
    };

    if (d == 1) {
        const std::vector<double> w = {1.0};
        if (strictly_separated(w)) return w;
        throw degenerate_data_error("find_direction: duplicate 1-D points");
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        auto w = rng.unit_sphere(d);
        if (strictly_separated(w)) return w;
    }
    throw degenerate_data_error("find_direction: no separating direction found (duplicate points?)");
}

/// Shallow ReLU network of width m that interpolates the m+1 given points
/// exactly: N(x) = y_1 + sum_i c_i phi(w^T (x - x_i)) with the c_i chosen
/// recursively so each new neuron fixes the next point without disturbing the
/// earlier ones.
inline NetworkParams build_interpolant(const Dataset& data, std::uint64_t seed = 1) {
    const size_t count = data.size();
    if (count < 2) throw std::invalid_argument("build_interpolant: need at least 2 points");
    for (const auto& y : data.targets)
        if (y.size() != 1) throw std::invalid_argument("build_interpolant: scalar targets required");
    const int d = static_cast<int>(data.inputs.front().size());
    const auto w = find_direction(data.inputs, seed);

    std::vector<size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> proj(count);
    for (size_t i = 0; i < count; ++i)
        proj[i] = std::inner_product(data.inputs[i].begin(), data.inputs[i].end(), w.begin(), 0.0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return proj[a] < proj[b]; });

    const int m = static_cast<int>(count) - 1;
    std::vector<double> knots(count), ys(count);
    for (size_t i = 0; i < count; ++i) {
        knots[i] = proj[order[i]];
        ys[i] = data.targets[order[i]][0];
    }

    // c_i = (y_{i+1} - N(x_{i+1}; i-1)) / (w^T (x_{i+1} - x_i))
    std::vector<double> c(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double partial = ys[0];
        for (int k = 0; k < i; ++k) partial += c[k] * relu(knots[i + 1] - knots[k]);
        c[i] = (ys[i + 1] - partial) / (knots[i + 1] - knots[i]);
    }

    NetworkParams net;
    net.arch = Architecture(std::vector<int>{d, m, 1});
    Matrix w1(m, d);
    std::vector<double> b1(m);
    for (int i = 0; i < m; ++i) {
        std::copy(w.begin(), w.end(), w1.row(i).begin());
        b1[i] = -knots[i];
    }
    Matrix w2(1, m);
    for (int i = 0; i < m; ++i) w2(0, i) = c[i];
    net.weights = {std::move(w1), std::move(w2)};
    net.biases = {std::move(b1), {ys[0]}};
    return net;
}

/// Collinear dataset of m points whose consecutive divided differences
/// alternate in sign with pairwise-distinct values, so no shallow network of
/// width < m - 2 can interpolate it (the interpolant needs m - 1 slope
/// changes). Deterministic given the seed.
inline Dataset witness_data(int m, std::uint64_t seed) {
    if (m < 4) throw std::invalid_argument("witness_data: need m >= 4");
    Rng rng(seed);

    std::vector<double> alpha(m);
    for (int i = 0; i < m; ++i)
        alpha[i] = -1.0 + 2.0 * i / (m - 1) + (i > 0 && i < m - 1 ? 0.2 * (rng.uniform() - 0.5) / m : 0.0);

    // Slopes +-(1 + i/100) with a small jitter: same-sign neighbours differ by
    // at least ~0.005, opposite signs by at least 2.
    std::vector<double> slope(m - 1);
    for (int i = 0; i < m - 1; ++i) {
        const double magnitude = 1.0 + 0.01 * i + 0.002 * rng.uniform();
        slope[i] = (i % 2 == 0 ? magnitude : -magnitude);
    }

    Dataset data;
    data.radius = 1.0;
    data.inputs.resize(m);
    data.targets.resize(m);
    double y = rng.uniform(-0.5, 0.5);
    for (int i = 0; i < m; ++i) {
        data.inputs[i] = {alpha[i]};
        data.targets[i] = {y};
        if (i + 1 < m) y += slope[i] * (alpha[i + 1] - alpha[i]);
    }
    return data;
}

/// Number of slope changes of the piecewise-linear interpolant through the
/// (sorted) 1-D data: counts adjacent divided-difference pairs that differ.
inline int slope_changes(const Dataset& data, double tol = 1e-9) {
    const size_t n = data.size();
    if (n < 3) return 0;
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return data.inputs[a][0] < data.inputs[b][0];
    });
    int changes = 0;
    double prev_slope = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
        const double dx = data.inputs[order[i + 1]][0] - data.inputs[order[i]][0];
        const double s = (data.targets[order[i + 1]][0] - data.targets[order[i]][0]) / dx;
        if (i > 0 && std::abs(s - prev_slope) > tol) ++changes;
        prev_slope = s;
    }
    return changes;
}

} // namespace relutrain
