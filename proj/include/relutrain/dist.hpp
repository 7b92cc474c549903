#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "relutrain/bdp.hpp"
#include "relutrain/errors.hpp"
#include "relutrain/mathkit.hpp"
#include "relutrain/netcore.hpp"

namespace relutrain {

/// Distribution of the number of active neurons in one layer; entry k is
/// Pr(active count = k).
struct ProbVector {
    std::vector<double> probs;

    int size() const { return static_cast<int>(probs.size()); }

    void validate(double tol = 1e-10) const {
        double sum = 0.0;
        for (double p : probs) {
            if (p < -tol) throw std::invalid_argument("ProbVector: negative entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("ProbVector: does not sum to 1");
    }

    double mean() const {
        double m = 0.0;
        for (int k = 0; k < size(); ++k) m += k * probs[k];
        return m;
    }
};

inline double total_variation(const ProbVector& a, const ProbVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
    double tv = 0.0;
    for (int k = 0; k < a.size(); ++k) tv += std::abs(a.probs[k] - b.probs[k]);
    return 0.5 * tv;
}

/// Row-stochastic transition matrix between consecutive layers' active
/// counts: entry (i, j) is Pr(count_t = j | count_{t-1} = i).
struct StochMatrix {
    int rows = 0, cols = 0;
    std::vector<double> data;

    StochMatrix() = default;
    StochMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    void validate(double tol = 1e-10) const {
        for (int i = 0; i < rows; ++i) {
            double sum = 0.0;
            for (int j = 0; j < cols; ++j) {
                const double p = (*this)(i, j);
                if (p < -tol || p > 1.0 + tol)
                    throw std::invalid_argument("StochMatrix: entry outside [0, 1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > tol)
                throw std::invalid_argument("StochMatrix: row does not sum to 1");
        }
    }
};

// ---------------------------------------------------------------------------
// pi_1: first hidden layer

/// Distribution of the number of active neurons in the first hidden layer.
/// Without bias it is a point mass at n1; with bias it is
/// Binomial(n1, 1 - p_hat_d(r)).
inline ProbVector pi1(int n1, int d, double r, const InitScheme& scheme) {
    if (n1 < 1) throw std::invalid_argument("pi1: n1 must be >= 1");
    switch (scheme.kind) {
        case InitScheme::Kind::NormalNoBias:
        case InitScheme::Kind::HeNoBias:
        case InitScheme::Kind::UnitSphereNoBias: {
            ProbVector pv;
            pv.probs.assign(n1 + 1, 0.0);
            pv.probs[n1] = 1.0;
            return pv;
        }
        case InitScheme::Kind::NormalWithBias:
        case InitScheme::Kind::HeWithBias:
        case InitScheme::Kind::UnitSphereWithBias: {
            ProbVector pv;
            pv.probs = binomial_pmf(n1, 1.0 - bdp_exact(d, r));
            return pv;
        }
        default:
            throw unsupported_case_error("pi1: no analytic distribution for this scheme");
    }
}

// ---------------------------------------------------------------------------
// P_2: transition from the first to the second hidden layer, d_in = 1

enum class P2Case {
    SphereNb_NormalNb, // 1st layer sphere w/o bias, 2nd normal w/o bias
    SphereNb_NormalWb, // 1st layer sphere w/o bias, 2nd normal with bias
    SphereWb_NormalNb, // 1st layer sphere with bias (n1 = 1), 2nd normal w/o bias
    SphereWb_NormalWb, // 1st layer sphere with bias (n1 = 1), 2nd normal with bias
};

namespace detail {

inline bool is_normal_no_bias(const InitScheme& s) {
    return s.kind == InitScheme::Kind::NormalNoBias || s.kind == InitScheme::Kind::HeNoBias;
}

// The with-bias derivations normalize [w, b] onto a sphere, which needs the
// weight and bias sigmas to match (He-with-bias does).
inline bool is_normal_equal_bias(const InitScheme& s) {
    if (s.kind == InitScheme::Kind::HeWithBias) return true;
    return s.kind == InitScheme::Kind::NormalWithBias && s.sigma_w == s.sigma_b;
}

} // namespace detail

inline P2Case classify_p2_case(int n1, const InitScheme& layer1, const InitScheme& layer2) {
    const bool l2_nb = detail::is_normal_no_bias(layer2);
    const bool l2_wb = detail::is_normal_equal_bias(layer2);
    if (!l2_nb && !l2_wb)
        throw unsupported_case_error("P2: layer-2 scheme must be normal with or without bias");
    if (layer1.kind == InitScheme::Kind::UnitSphereNoBias)
        return l2_nb ? P2Case::SphereNb_NormalNb : P2Case::SphereNb_NormalWb;
    if (layer1.kind == InitScheme::Kind::UnitSphereWithBias) {
        if (n1 != 1)
            throw unsupported_case_error("P2: sphere-with-bias first layer requires n1 = 1");
        return l2_nb ? P2Case::SphereWb_NormalNb : P2Case::SphereWb_NormalWb;
    }
    throw unsupported_case_error("P2: layer-1 scheme must be unit hypersphere");
}

namespace detail {

// Conditional BDP of a 2nd-layer neuron (normal with bias) given that the
// no-bias sphere first layer drew s positive signs out of n1.
inline double p2_given_sign_count(int n1, int s, double r) {
    const double alpha_s = std::atan2(static_cast<double>(s), static_cast<double>(n1 - s));
    auto g = [](double x) { return x / std::sqrt(1.0 + x * x); }; // sin(atan(x))
    const double pi = std::numbers::pi;
    const double cs = r * std::sqrt(static_cast<double>(s));
    const double cn = r * std::sqrt(static_cast<double>(n1 - s));
    const double i1 = integrate([&](double th) { return g(cs * std::cos(th)); }, pi / 2, pi + alpha_s);
    const double i2 = integrate([&](double th) { return g(cn * std::sin(th)); }, pi + alpha_s, 2 * pi);
    return 0.5 + (i1 + i2) / (4.0 * pi);
}

// Conditional BDP of a 2nd-layer neuron (normal with bias) given the angle
// omega of the single sphere-with-bias first-layer neuron,
// omega in [0, pi/2 + atan(r)). The boundary omega = pi/2 - atan(r) belongs
// to the upper branch, matching the half-open intervals of the source
// distribution.
inline double p2_given_angle(double omega, double r) {
    const double theta_max = std::atan(r);
    const double pi = std::numbers::pi;
    const double c = std::sqrt(r * r + 1.0);
    auto g = [&](double x) { return std::atan(1.0 / (c * std::cos(x))); };
    if (omega >= pi / 2 - theta_max)
        return 0.25 + g(omega - theta_max) / (2.0 * pi);
    return 0.25 + (g(omega - theta_max) + std::atan(c * std::cos(omega + theta_max))) / (2.0 * pi);
}

} // namespace detail

/// The stochastic matrix P_2 for the four derived (scheme_1, scheme_2)
/// combinations at d_in = 1. Rows for impossible/dead first-layer counts are
/// [1, 0, ..., 0] as in the source derivation.
inline StochMatrix p2_matrix(int n1, int n2, double r, const InitScheme& layer1,
                             const InitScheme& layer2) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("p2_matrix: widths must be >= 1");
    if (!(r > 0.0)) throw std::domain_error("p2_matrix: radius must be positive");
    const P2Case which = classify_p2_case(n1, layer1, layer2);

    StochMatrix p(n1 + 1, n2 + 1);
    for (int i = 0; i < n1; ++i) p(i, 0) = 1.0;
    const int active = n1; // last row: all first-layer neurons active

    switch (which) {
        case P2Case::SphereNb_NormalNb: {
            // (1 - 2^{1-n1}) 3^j / 4^{n2} + 2^{-(n1+n2-1)} per binomial slot
            const double mix = 1.0 - std::pow(2.0, 1 - n1);
            const double flat = std::pow(2.0, -(n1 + n2 - 1));
            for (int j = 0; j <= n2; ++j) {
                const double c = std::exp(log_binomial(n2, j));
                p(active, j) = c * (mix * std::pow(3.0, j) / std::pow(4.0, n2) + flat);
            }
            break;
        }
        case P2Case::SphereNb_NormalWb: {
            // Exact finite expectation over s ~ Binomial(n1, 1/2).
            const auto sign_pmf = binomial_pmf(n1, 0.5);
            for (int s = 0; s <= n1; ++s) {
                const double q = detail::p2_given_sign_count(n1, s, r);
                const auto row = binomial_pmf(n2, 1.0 - q);
                for (int j = 0; j <= n2; ++j) p(active, j) += sign_pmf[s] * row[j];
            }
            break;
        }
        case P2Case::SphereWb_NormalNb: {
            const auto row = binomial_pmf(n2, 0.5);
            for (int j = 0; j <= n2; ++j) p(active, j) = row[j];
            break;
        }
        case P2Case::SphereWb_NormalWb: {
            // omega ~ Unif(0, pi/2 + atan(r)); integrate the two smooth pieces
            // of p2(omega) separately.
            const double theta_max = std::atan(r);
            const double hi = std::numbers::pi / 2 + theta_max;
            const double split = std::numbers::pi / 2 - theta_max;
            for (int j = 0; j <= n2; ++j) {
                auto f = [&](double w) {
                    const double q = detail::p2_given_angle(w, r);
                    return std::exp(log_binomial(n2, j) + j * std::log1p(-q) +
                                    (n2 - j) * std::log(q));
                };
                p(active, j) = (integrate(f, 0.0, split) + integrate(f, split, hi)) / hi;
            }
            break;
        }
    }
    p.validate(1e-9);
    return p;
}

/// pi_j = pi_0 P_1 P_2 ... P_j (left multiplication through the chain).
inline ProbVector compose_dist(const ProbVector& pi0, const std::vector<StochMatrix>& matrices) {
    std::vector<double> cur = pi0.probs;
    for (const auto& m : matrices) {
        if (static_cast<int>(cur.size()) != m.rows)
            throw std::invalid_argument("compose_dist: dimension mismatch in chain");
        std::vector<double> next(m.cols, 0.0);
        for (int i = 0; i < m.rows; ++i) {
            const double w = cur[i];
            if (w == 0.0) continue;
            for (int j = 0; j < m.cols; ++j) next[j] += w * m(i, j);
        }
        cur = std::move(next);
    }
    ProbVector out;
    out.probs = std::move(cur);
    return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo active-count distributions

struct McDist {
    std::vector<ProbVector> layers;               // per hidden layer, index 0 = layer 1
    std::vector<std::vector<double>> stderrs;     // matching standard errors
    long samples = 0;
};

/// Empirical distribution of active-neuron counts per hidden layer over
/// `samples` independent initializations. Sample k draws from substream k of
/// the master seed, so the result does not depend on evaluation order.
inline McDist mc_active_dist(const Architecture& arch, const std::vector<InitScheme>& schemes,
                             double r, long samples, std::uint64_t seed,
                             int probe_count = 4096) {
    if (samples < 1) throw std::invalid_argument("mc_active_dist: samples must be >= 1");
    const int hidden = arch.layers() - 1;
    if (hidden < 1) throw std::invalid_argument("mc_active_dist: network has no hidden layer");

    std::vector<std::vector<long>> counts(hidden);
    for (int t = 0; t < hidden; ++t) counts[t].assign(arch.widths[t + 1] + 1, 0);

    for (long k = 0; k < samples; ++k) {
        const auto params = init_network(arch, schemes, substream_seed(seed, k));
        const auto statuses = neuron_status(params, r, probe_count);
        for (int t = 0; t < hidden; ++t) {
            const int active = arch.widths[t + 1] - count_dead(statuses, t + 1);
            ++counts[t][active];
        }
    }

    McDist out;
    out.samples = samples;
    out.layers.resize(hidden);
    out.stderrs.resize(hidden);
    for (int t = 0; t < hidden; ++t) {
        auto& pv = out.layers[t];
        pv.probs.resize(counts[t].size());
        out.stderrs[t].resize(counts[t].size());
        for (size_t k = 0; k < counts[t].size(); ++k) {
            const double p = static_cast<double>(counts[t][k]) / samples;
            pv.probs[k] = p;
            out.stderrs[t][k] = std::sqrt(p * (1.0 - p) / samples);
        }
    }
    return out;
}

} // namespace relutrain
