#pragma once

/// Composite Gauss-Legendre quadrature on finite intervals, with geometric
/// grading toward a singular endpoint and a t = u/(1-u) map for half-line
/// integrals. Every routine visits nodes in a fixed order, so repeated calls
/// are bit-for-bit identical.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace hermconv::quad {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

inline constexpr int kMaxGaussPoints = 64;

inline GaussRule make_gauss_legendre(int m) {
    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_m.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) { p1 = x; p0 = 1.0; }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[m - 1 - i] = x;
        rule.weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline const GaussRule& gauss_legendre(int m) {
    static const auto table = [] {
        std::array<GaussRule, kMaxGaussPoints + 1> t;
        for (int k = 1; k <= kMaxGaussPoints; ++k) t[k] = make_gauss_legendre(k);
        return t;
    }();
    detail::require(m >= 1 && m <= kMaxGaussPoints, "gauss_legendre: points per panel must be in [1, 64]");
    return table[m];
}

enum class Scheme { composite_gauss, graded_singular, tail_transformed };

struct QuadratureSpec {
    Scheme scheme = Scheme::composite_gauss;
    int panels = 1;              // minimum panels per integration interval
    int points_per_panel = 8;
    double oscillation_freq = 0.0;
    int levels = 60;             // geometric levels for graded / tail schemes

    static QuadratureSpec for_frequency(double freq, int points = 8) {
        QuadratureSpec s;
        s.oscillation_freq = freq;
        s.points_per_panel = points;
        return s;
    }

    static QuadratureSpec tail(int levels = 60, int points = 8) {
        QuadratureSpec s;
        s.scheme = Scheme::tail_transformed;
        s.levels = levels;
        s.points_per_panel = points;
        return s;
    }

    void validate() const {
        detail::require_config(panels >= 1, "quadrature: panels must be positive");
        detail::require_config(points_per_panel >= 1 && points_per_panel <= kMaxGaussPoints,
                               "quadrature: points_per_panel must be in [1, 64]");
        detail::require_config(std::isfinite(oscillation_freq) && oscillation_freq >= 0.0,
                               "quadrature: oscillation_freq must be finite and nonnegative");
        detail::require_config(levels >= 1 && levels <= 200, "quadrature: levels must be in [1, 200]");
    }

    /// Panels per unit length so that each panel spans at most a quarter period.
    double panels_per_unit() const {
        if (oscillation_freq <= 0.0) return 0.0;
        return std::ceil(4.0 * oscillation_freq / (2.0 * std::numbers::pi));
    }

    int panels_for(double length) const {
        const double by_freq = std::ceil(length * panels_per_unit());
        const double n = std::max<double>(panels, by_freq);
        detail::require_config(n < 1e8, "quadrature: panel count exceeds 1e8");
        return static_cast<int>(n);
    }
};

/// Calls fn(x, w) for every node of the composite rule on [a, b].
template <class Fn>
void for_each_node(double a, double b, const QuadratureSpec& spec, Fn&& fn) {
    if (!(b > a)) return;
    const auto& rule = gauss_legendre(spec.points_per_panel);
    const int np = spec.panels_for(b - a);
    const double h = (b - a) / np;
    for (int p = 0; p < np; ++p) {
        const double lo = a + p * h;
        const double hi = (p + 1 == np) ? b : a + (p + 1) * h;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            fn(mid + half * rule.nodes[i], half * rule.weights[i]);
    }
}

/// Nodes graded geometrically toward the left endpoint a: panels
/// [a + L 2^{-j-1}, a + L 2^{-j}], j = 0..levels-1, each composite-sized.
template <class Fn>
void for_each_node_graded(double a, double b, const QuadratureSpec& spec, Fn&& fn) {
    if (!(b > a)) return;
    const double len = b - a;
    double hi = len;
    for (int j = 0; j < spec.levels; ++j) {
        const double lo = 0.5 * hi;
        for_each_node(a + lo, a + hi, spec, fn);
        hi = lo;
    }
}

/// Half-line nodes on (a, inf) via t = a + u/(1-u): dyadic panels toward
/// u = 0 and toward u = 1 (the latter parametrised by v = 1-u to keep
/// precision), so both t -> a and t -> inf are resolved geometrically.
template <class Fn>
void for_each_node_half_line(double a, const QuadratureSpec& spec, Fn&& fn) {
    const auto& rule = gauss_legendre(spec.points_per_panel);
    auto panel = [&](double lo, double hi, auto&& map) {
        const int np = spec.panels;
        const double h = (hi - lo) / np;
        for (int p = 0; p < np; ++p) {
            const double l = lo + p * h, r = lo + (p + 1) * h;
            const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const auto [t, jac] = map(mid + half * rule.nodes[i]);
                fn(t, half * rule.weights[i] * jac);
            }
        }
    };
    auto lower = [a](double u) { return std::pair{a + u / (1.0 - u), 1.0 / ((1.0 - u) * (1.0 - u))}; };
    auto upper = [a](double v) { return std::pair{a + (1.0 - v) / v, 1.0 / (v * v)}; };
    double hi = 0.5;
    for (int j = 0; j < spec.levels; ++j) {
        panel(0.5 * hi, hi, lower);
        hi *= 0.5;
    }
    hi = 0.5;
    for (int j = 0; j < spec.levels; ++j) {
        panel(0.5 * hi, hi, upper);
        hi *= 0.5;
    }
}

/// Integral of a callable over [a, b]; b may be +inf only with the
/// tail-transformed scheme.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    detail::require(std::isfinite(a), "integrate: lower limit must be finite");
    double sum = 0.0;
    auto acc = [&](double x, double w) {
        const double v = f(x);
        if (std::isnan(v)) throw invalid_input("integrate: integrand is NaN");
        if (w != 0.0) sum += w * v;
    };
    if (std::isinf(b)) {
        detail::require_config(spec.scheme == Scheme::tail_transformed,
                               "integrate: infinite upper limit requires the tail-transformed scheme");
        for_each_node_half_line(a, spec, acc);
        return sum;
    }
    detail::require(std::isfinite(b), "integrate: upper limit must be finite or +inf");
    if (b < a) return -integrate(f, b, a, spec);
    if (spec.scheme == Scheme::graded_singular)
        for_each_node_graded(a, b, spec, acc);
    else
        for_each_node(a, b, spec, acc);
    return sum;
}

} // namespace hermconv::quad
