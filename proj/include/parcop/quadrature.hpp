#pragma once

// Gauss-Legendre rules, tensor quadrature over the unit square, a small
// adaptive Simpson integrator, and the Debye functions D1/D2.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace parcop {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
/// Nodes found by Newton iteration on P_n starting from the Chebyshev
/// approximation cos(pi*(i+0.75)/(n+0.5)); weights w = 2/((1-x^2) P_n'(x)^2).
inline QuadRule gauss_legendre_m11(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    QuadRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
            double p_prev = 1.0;
            double p_cur = x;
            for (int j = 2; j <= n; ++j) {
                const double p_next = ((2.0 * j - 1.0) * x * p_cur - (j - 1.0) * p_prev) / j;
                p_prev = p_cur;
                p_cur = p_next;
            }
            deriv = n * (x * p_cur - p_prev) / (x * x - 1.0);
            const double step = p_cur / deriv;
            x -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// n-point Gauss-Legendre rule mapped to (0, 1); all nodes strictly interior.
inline QuadRule gauss_legendre01(int n) {
    QuadRule rule = gauss_legendre_m11(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.5;
    }
    return rule;
}

/// Tensor-product Gauss-Legendre integral of f over the open unit square.
template <class F>
double integrate_unit_square(F&& f, int nodes_per_axis) {
    const QuadRule rule = gauss_legendre01(nodes_per_axis);
    double total = 0.0;
    for (int i = 0; i < nodes_per_axis; ++i) {
        double row = 0.0;
        for (int j = 0; j < nodes_per_axis; ++j)
            row += rule.weights[j] * f(rule.nodes[i], rule.nodes[j]);
        total += rule.weights[i] * row;
    }
    return total;
}

namespace detail {

template <class F>
double adaptive_simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// First Debye function D1(x) = (1/x) Int_0^x t/(e^t - 1) dt.
/// Negative arguments use D1(-y) = D1(y) + y/2.
inline double debye1(double x) {
    if (x == 0.0) return 1.0;
    if (x < 0.0) return debye1(-x) - x / 2.0;
    auto f = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
    return adaptive_simpson(f, 0.0, x, 1e-13 * std::max(1.0, x)) / x;
}

/// Second Debye function D2(x) = (2/x^2) Int_0^x t^2/(e^t - 1) dt.
inline double debye2(double x) {
    if (x == 0.0) return 1.0;
    if (x < 0.0) return debye2(-x) - 2.0 * x / 3.0;
    auto f = [](double t) { return t == 0.0 ? 0.0 : t * t / std::expm1(t); };
    return 2.0 * adaptive_simpson(f, 0.0, x, 1e-13 * std::max(1.0, x)) / (x * x);
}

}  // namespace parcop
