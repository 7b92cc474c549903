#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "relutrain/bdp.hpp"
#include "relutrain/dist.hpp"
#include "relutrain/errors.hpp"
#include "relutrain/mathkit.hpp"
#include "relutrain/netcore.hpp"

namespace relutrain {

/// Per-hidden-layer minimum active-neuron counts a learning task needs.
struct Requirement {
    std::vector<int> m;

    void validate(const Architecture& arch) const {
        const int hidden = arch.layers() - 1;
        if (static_cast<int>(m.size()) != hidden)
            throw std::invalid_argument("requirement: one entry per hidden layer");
        for (int t = 0; t < hidden; ++t)
            if (m[t] < 0 || m[t] > arch.widths[t + 1])
                throw std::invalid_argument("requirement: need 0 <= m_t <= n_t");
    }
};

enum class EstimateKind { Exact, LowerBound, UpperBound, MonteCarlo };

struct TrainabilityEstimate {
    double value = 0.0;
    double stderr_value = 0.0; // 0 for analytic results
    EstimateKind kind = EstimateKind::Exact;
};

inline const char* to_string(EstimateKind k) {
    switch (k) {
        case EstimateKind::Exact: return "exact";
        case EstimateKind::LowerBound: return "lower-bound";
        case EstimateKind::UpperBound: return "upper-bound";
        case EstimateKind::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Shallow networks

/// Pr(at least m of n first-layer neurons are active). Without bias this is
/// 1; with bias it is the Binomial(n, 1 - p_hat_d(r)) upper tail at m.
inline TrainabilityEstimate shallow_trainability(int n, int m, int d, double r,
                                                 const InitScheme& scheme) {
    if (m > n) throw std::invalid_argument("shallow_trainability: m must be <= n");
    if (m < 0) throw std::invalid_argument("shallow_trainability: m must be >= 0");
    if (!scheme.has_bias()) return {1.0, 0.0, EstimateKind::Exact};
    const double p_active = 1.0 - bdp_exact(d, r);
    return {binomial_tail(n, m, p_active), 0.0, EstimateKind::Exact};
}

/// Lower bound on the expected number of active neurons,
/// n (1 - sqrt(d/2pi) a_r (sin a_r)^(d-1)), for the with-bias schemes.
inline double expected_active_lower(int n, int d, double r) {
    const double alpha = std::atan(1.0 / r);
    return n * (1.0 - std::sqrt(d / (2.0 * std::numbers::pi)) * alpha *
                          std::pow(std::sin(alpha), d - 1));
}

// ---------------------------------------------------------------------------
// Depth-3 networks at d_in = 1

/// The four derived (layer-1, layer-2) initialization combinations.
enum class Deep3Case {
    SphereNb_NormalNb, // 1.1
    SphereNb_NormalWb, // 1.2
    SphereWb_NormalNb, // 2.1 (n1 = m1 = 1)
    SphereWb_NormalWb, // 2.2 (n1 = m1 = 1)
};

namespace detail {

inline double multinomial(int n, int k1, int k2, int k3) {
    return std::exp(log_multinomial(n, {k1, k2, k3}));
}

// Correction sum over (j = active count < m2, l = permanently dead count):
// sum_j sum_l multinom(n2; n2-j-l, j, l) E[(1-p2)^j (p2 - pb)^(n2-j-l) pb^l],
// with the expectation over the first layer supplied by `expect`.
template <typename Expect>
double tentative_correction(int n2, int m2, Expect&& expect) {
    double total = 0.0;
    for (int j = 1; j <= m2 - 1; ++j)
        for (int l = 0; l <= n2 - m2; ++l)
            total += multinomial(n2, n2 - j - l, j, l) * expect(j, l);
    return total;
}

} // namespace detail

/// Lower bound on the probability that a 3-layer network (1, n1, n2, n3)
/// keeps at least m_t non-permanently-dead neurons in each hidden layer.
///
/// The permanent-death probability of a 2nd-layer neuron given i active
/// upstream neurons is sign-based: 2^-(i+1) when the layer has a random bias
/// and 2^-i when its bias is fixed at zero (the zero bias is nonpositive by
/// itself). The no-bias cases use the exact 2^-i so the result brackets the
/// Monte Carlo estimate from below; see the module tests.
inline TrainabilityEstimate deep3_trainability(Deep3Case which, int n1, int n2, int m1, int m2,
                                               double r) {
    if (n1 < 1 || n2 < 1 || m1 < 1 || m2 < 1 || m1 > n1 || m2 > n2)
        throw std::invalid_argument("deep3_trainability: need 1 <= m_t <= n_t");
    if (!(r > 0.0)) throw std::domain_error("deep3_trainability: radius must be positive");
    const bool sphere_bias =
        which == Deep3Case::SphereWb_NormalNb || which == Deep3Case::SphereWb_NormalWb;
    if (sphere_bias && (n1 != 1 || m1 != 1))
        throw unsupported_case_error("deep3_trainability: sphere-with-bias cases require n1 = m1 = 1");

    double value = 0.0;
    switch (which) {
        case Deep3Case::SphereNb_NormalNb: {
            const double mix = 1.0 - std::pow(2.0, 1 - n1); // Pr(mixed signs upstream)
            const double flat = std::pow(2.0, -(n1 + n2 - 1));
            double tail = 0.0;
            for (int j = m2; j <= n2; ++j)
                tail += std::exp(log_binomial(n2, j)) *
                        (mix * std::pow(3.0, j) / std::pow(4.0, n2) + flat);
            const double pb = std::pow(2.0, -n1); // all n1 weights nonpositive
            const double corr = detail::tentative_correction(n2, m2, [&](int j, int l) {
                // p2 = 1/2 on the all-equal-sign draws, 1/4 otherwise
                double e = std::pow(2.0, 1 - n1) * std::pow(0.5, j) *
                           std::pow(0.5 - pb, n2 - j - l) * std::pow(pb, l);
                if (mix > 0.0)
                    e += mix * std::pow(0.75, j) * std::pow(0.25 - pb, n2 - j - l) *
                         std::pow(pb, l);
                return e;
            });
            value = tail + corr;
            break;
        }
        case Deep3Case::SphereNb_NormalWb: {
            const auto sign_pmf = binomial_pmf(n1, 0.5);
            std::vector<double> p2(n1 + 1);
            for (int s = 0; s <= n1; ++s) p2[s] = detail::p2_given_sign_count(n1, s, r);
            auto expect_s = [&](auto&& f) {
                double acc = 0.0;
                for (int s = 0; s <= n1; ++s) acc += sign_pmf[s] * f(p2[s]);
                return acc;
            };
            double tail = 0.0;
            for (int j = m2; j <= n2; ++j)
                tail += std::exp(log_binomial(n2, j)) * expect_s([&](double q) {
                    return std::pow(1.0 - q, j) * std::pow(q, n2 - j);
                });
            const double pb = std::pow(2.0, -(n1 + 1));
            const double corr = detail::tentative_correction(n2, m2, [&](int j, int l) {
                return expect_s([&](double q) {
                    return std::pow(1.0 - q, j) * std::pow(q - pb, n2 - j - l) * std::pow(pb, l);
                });
            });
            value = std::pow(1.0 - bdp_exact(1, r), n1) * (tail + corr);
            break;
        }
        case Deep3Case::SphereWb_NormalNb: {
            // Given the single first-layer neuron is alive, a 2nd-layer neuron
            // is active iff its weight is positive, and permanently dead
            // otherwise; the tentative correction is identically zero.
            value = (1.0 - bdp_exact(1, r)) * binomial_tail(n2, m2, 0.5);
            break;
        }
        case Deep3Case::SphereWb_NormalWb: {
            const double theta_max = std::atan(r);
            const double hi = std::numbers::pi / 2 + theta_max;
            const double split = std::numbers::pi / 2 - theta_max;
            auto expect_omega = [&](auto&& f) {
                auto g = [&](double w) { return f(detail::p2_given_angle(w, r)); };
                return (integrate(g, 0.0, split) + integrate(g, split, hi)) / hi;
            };
            double tail = 0.0;
            for (int j = m2; j <= n2; ++j)
                tail += std::exp(log_binomial(n2, j)) * expect_omega([&](double q) {
                    return std::pow(1.0 - q, j) * std::pow(q, n2 - j);
                });
            const double pb = 0.25;
            const double corr = detail::tentative_correction(n2, m2, [&](int j, int l) {
                return expect_omega([&](double q) {
                    return std::pow(1.0 - q, j) * std::pow(q - pb, n2 - j - l) * std::pow(pb, l);
                });
            });
            value = (1.0 - bdp_exact(1, r)) * (tail + corr);
            break;
        }
    }
    return {value, 0.0, EstimateKind::LowerBound};
}

// ---------------------------------------------------------------------------
// Zero-bias upper bound, d_in = 1

/// Upper bound on the trainability of a deep zero-bias normal network with n
/// neurons per hidden layer, via the born-dead probability of the whole
/// network.
inline TrainabilityEstimate zero_bias_upper_1d(int n, int L) {
    if (n < 1 || L < 2) throw std::invalid_argument("zero_bias_upper_1d: need n >= 1, L >= 2");
    const double a1 = 1.0 - std::pow(2.0, -n);
    const double a2 = 1.0 - std::pow(2.0, -n + 1) - (n - 1) * std::pow(2.0, -2 * n);
    const double coeff = (1.0 - std::pow(2.0, -n + 1)) * (1.0 - std::pow(2.0, -n)) /
                         (1.0 + (n - 1) * std::pow(2.0, -n));
    const double a1p = std::pow(a1, L - 1);
    const double a2p = std::pow(a2, L - 1);
    return {a1p - coeff * (-a1p + a2p), 0.0, EstimateKind::UpperBound};
}

// ---------------------------------------------------------------------------
// General composition scaffold

/// Trainability = pi'_1 P'_2 ... P'_{L-1} 1 + pi'_1 Phat_2 ... Phat_{L-1} 1.
/// The caller supplies the truncated tail pi'_1 and both matrix chains; with
/// no Phat matrices the second term is 0, and with no P' matrices the first
/// term is the plain sum of pi'_1.
inline double compose_trainability(const std::vector<double>& pi1_tail,
                                   const std::vector<Matrix>& p_primed,
                                   const std::vector<Matrix>& p_hat) {
    auto chain_mass = [&](const std::vector<Matrix>& chain) {
        std::vector<double> cur = pi1_tail;
        for (const auto& m : chain) {
            if (static_cast<int>(cur.size()) != m.rows)
                throw std::invalid_argument("compose_trainability: dimension mismatch");
            std::vector<double> next(m.cols, 0.0);
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) next[j] += cur[i] * m(i, j);
            cur = std::move(next);
        }
        double total = 0.0;
        for (double v : cur) total += v;
        return total;
    };
    double value = chain_mass(p_primed);
    if (!p_hat.empty()) value += chain_mass(p_hat);
    return value;
}

// ---------------------------------------------------------------------------
// Monte Carlo trainability

/// Fraction of sampled initializations in which every hidden layer t has at
/// most n_t - m_t permanently dead neurons. Deterministic given the seed
/// (per-sample substreams).
inline TrainabilityEstimate mc_trainability(const Architecture& arch,
                                            const std::vector<InitScheme>& schemes, double r,
                                            const Requirement& req, long samples,
                                            std::uint64_t seed, int probe_count = 4096) {
    if (samples < 1) throw std::invalid_argument("mc_trainability: samples must be >= 1");
    req.validate(arch);
    const int hidden = arch.layers() - 1;
    long ok = 0;
    for (long k = 0; k < samples; ++k) {
        const auto params = init_network(arch, schemes, substream_seed(seed, k));
        const auto statuses = neuron_status(params, r, probe_count);
        bool trainable = true;
        for (int t = 1; t <= hidden && trainable; ++t) {
            const int perm = count_state(statuses, t, LifeState::PermanentlyDead);
            if (perm > arch.widths[t] - req.m[t - 1]) trainable = false;
        }
        if (trainable) ++ok;
    }
    const double p = static_cast<double>(ok) / samples;
    return {p, std::sqrt(p * (1.0 - p) / samples), EstimateKind::MonteCarlo};
}

} // namespace relutrain
