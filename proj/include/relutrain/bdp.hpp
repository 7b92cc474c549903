#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relutrain/mathkit.hpp"

namespace relutrain {

/// Born-dead probability of one ReLU neuron on B_r(0), with its lower/upper
/// bounds. alpha_r = atan(1/r).
struct BdpResult {
    double exact = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double alpha_r = 0.0;
    int d = 0;
    double r = 0.0;
};

namespace detail {
inline void check_bdp_args(int d, double r) {
    if (d < 1) throw std::invalid_argument("bdp: input dimension must be >= 1");
    if (!(r > 0.0)) throw std::domain_error("bdp: radius must be positive");
}
} // namespace detail

/// Exact probability that a freshly drawn neuron (iid zero-mean normal weights
/// and bias, any common sigma) is constant on B_r(0). Always in (0, 1/2).
/// The value depends only on the direction of the (weight, bias) vector, so
/// the normal's sigma does not enter.
inline double bdp_exact(int d, double r) {
    detail::check_bdp_args(d, r);
    const double alpha = std::atan(1.0 / r);
    return gamma_ratio(d) / std::sqrt(std::numbers::pi) * integrate_sin_power(alpha, d);
}

/// (sin a)^d / (pi d) <= p_hat <= sqrt(d / 2pi) * a * (sin a)^(d-1).
inline std::pair<double, double> bdp_bounds(int d, double r) {
    detail::check_bdp_args(d, r);
    const double alpha = std::atan(1.0 / r);
    const double s = std::sin(alpha);
    const double lower = std::pow(s, d) / (std::numbers::pi * d);
    const double upper = std::sqrt(d / (2.0 * std::numbers::pi)) * alpha * std::pow(s, d - 1);
    return {lower, upper};
}

inline BdpResult bdp_full(int d, double r) {
    BdpResult out;
    out.d = d;
    out.r = r;
    out.alpha_r = std::atan(1.0 / r);
    out.exact = bdp_exact(d, r);
    auto [lo, hi] = bdp_bounds(d, r);
    out.lower = lo;
    out.upper = hi;
    return out;
}

/// Width to use so that, on average, at least m neurons are active at
/// initialization. Rounds up: the target is real-valued and rounding down
/// would drop below it. Without bias no neuron is born dead, so m suffices.
inline int suggested_width(int m, int d, double r, bool with_bias) {
    if (m < 1) throw std::invalid_argument("suggested_width: m must be >= 1");
    if (!with_bias) return m;
    return static_cast<int>(std::ceil(m / (1.0 - bdp_exact(d, r))));
}

/// Checks 1 - (1-delta)^(1/m) < exp(-C_r d) / (pi d) with
/// C_r = -log(sin(atan(1/r))). When it holds, over-parameterization is both
/// necessary and sufficient for interpolating the training data with
/// probability at least 1 - delta.
inline bool overparam_condition(int m, int d, double r, double delta) {
    detail::check_bdp_args(d, r);
    if (m < 1) throw std::invalid_argument("overparam_condition: m must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("overparam_condition: delta must lie in (0, 1)");
    const double lhs = -std::expm1(std::log1p(-delta) / m);
    const double c_r = -std::log(std::sin(std::atan(1.0 / r)));
    const double rhs = std::exp(-c_r * d) / (std::numbers::pi * d);
    return lhs < rhs;
}

} // namespace relutrain
