#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace relutrain {

/// Gauss-Legendre nodes/weights on (-1, 1). Nodes are the roots of the
/// Legendre polynomial of the given order, found by Newton iteration.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    static const QuadratureRule& gauss_legendre_32() {
        static const QuadratureRule rule = gauss_legendre(32);
        return rule;
    }

    static QuadratureRule gauss_legendre(int order) {
        if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
        QuadratureRule q;
        q.order = order;
        q.nodes.resize(order);
        q.weights.resize(order);
        const int m = (order + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double z1 = 0.0, pp = 0.0;
            do {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < order; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
                }
                pp = order * (z * p1 - p2) / (z * z - 1.0);
                z1 = z;
                z = z1 - p1 / pp;
            } while (std::abs(z - z1) > 1e-15);
            q.nodes[i] = -z;
            q.nodes[order - 1 - i] = z;
            q.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            q.weights[order - 1 - i] = q.weights[i];
        }
        return q;
    }
};

/// Composite Gauss-Legendre integration of f over [a, b]. Order-32 panels,
/// doubling the panel count until two successive estimates agree to 1e-13.
/// Integrands in this library are smooth or piecewise smooth, so convergence
/// is fast and deterministic.
template <typename F>
double integrate(F&& f, double a, double b) {
    if (a == b) return 0.0;
    const auto& rule = QuadratureRule::gauss_legendre_32();
    auto estimate = [&](int panels) {
        const double h = (b - a) / panels;
        double total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            const double mid = lo + 0.5 * h;
            double acc = 0.0;
            for (int k = 0; k < rule.order; ++k)
                acc += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
            total += 0.5 * h * acc;
        }
        return total;
    };
    double prev = estimate(1);
    for (int panels = 2; panels <= 1024; panels *= 2) {
        const double cur = estimate(panels);
        if (std::abs(cur - prev) < 1e-13) return cur;
        prev = cur;
    }
    return prev;
}

/// Gamma((d+1)/2) / Gamma(d/2), via log-gamma so large d does not overflow.
inline double gamma_ratio(int d) {
    if (d < 1) throw std::invalid_argument("gamma_ratio: d must be >= 1");
    return std::exp(std::lgamma((d + 1) / 2.0) - std::lgamma(d / 2.0));
}

/// Integral of (sin u)^(d-1) over [0, alpha], alpha in [0, pi].
inline double integrate_sin_power(double alpha, int d) {
    if (d < 1) throw std::invalid_argument("integrate_sin_power: d must be >= 1");
    if (alpha < 0.0 || alpha > std::numbers::pi)
        throw std::domain_error("integrate_sin_power: alpha must lie in [0, pi]");
    if (d == 1) return alpha; // integrand is 1
    return integrate([d](double u) { return std::pow(std::sin(u), d - 1); }, 0.0, alpha);
}

/// log of the multinomial coefficient n! / (parts[0]! * parts[1]! * ...).
inline double log_multinomial(long n, const std::vector<long>& parts) {
    long sum = 0;
    for (long k : parts) {
        if (k < 0) throw std::invalid_argument("log_multinomial: negative part");
        sum += k;
    }
    if (n < 0 || sum != n)
        throw std::invalid_argument("log_multinomial: parts must sum to n");
    double log_coeff = std::lgamma(n + 1.0);
    for (long k : parts) log_coeff -= std::lgamma(k + 1.0);
    return log_coeff;
}

inline double log_binomial(long n, long k) { return log_multinomial(n, {k, n - k}); }

/// Binomial(n, p) probability mass function, length n+1. Evaluated in log
/// space; the p = 0 and p = 1 edges degenerate to point masses.
inline std::vector<double> binomial_pmf(int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0)
        throw std::invalid_argument("binomial_pmf: bad arguments");
    std::vector<double> pmf(n + 1, 0.0);
    if (p == 0.0) { pmf[0] = 1.0; return pmf; }
    if (p == 1.0) { pmf[n] = 1.0; return pmf; }
    for (int k = 0; k <= n; ++k)
        pmf[k] = std::exp(log_binomial(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
    return pmf;
}

/// Upper tail Pr(X >= m) of Binomial(n, p), compensated summation over the
/// log-space pmf so widths up to ~10^3 stay accurate.
inline double binomial_tail(int n, int m, double p) {
    if (m > n) throw std::invalid_argument("binomial_tail: m > n");
    if (m <= 0) return 1.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double sum = 0.0, c = 0.0;
    for (int j = m; j <= n; ++j) {
        const double term =
            std::exp(log_binomial(n, j) + j * std::log(p) + (n - j) * std::log1p(-p));
        const double y = term - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return std::min(sum, 1.0);
}

} // namespace relutrain
