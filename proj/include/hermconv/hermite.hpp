#pragma once

/// Orthonormal Hermite functions h_k, expansion coefficients, partial sums
/// by the coefficient route and by the Christoffel-Darboux kernel, and the
/// truncation schedule T_n = scale * n^exponent.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gridfn.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace hermconv::hermite {

inline constexpr int kMaxDegree = 1'000'000;
inline constexpr double kMaxAbsX = 200.0;
inline const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

/// Three-term recurrence with precomputed coefficients. The running values
/// carry a separate log scale so the Gaussian seed never underflows.
class Evaluator {
public:
    explicit Evaluator(int n_max) : n_max_(n_max) {
        detail::require(n_max >= 0 && n_max <= kMaxDegree, "hermite: degree must be in [0, 1e6]");
        a_.resize(n_max + 1);
        b_.resize(n_max + 1);
        for (int k = 0; k <= n_max; ++k) {
            a_[k] = std::sqrt(2.0 / (k + 1.0));
            b_[k] = std::sqrt(k / (k + 1.0));
        }
    }

    int n_max() const { return n_max_; }

    /// out[k] = h_k(x), k = 0..n_max.
    void values(double x, std::span<double> out) const {
        check_x(x);
        detail::require(out.size() >= static_cast<std::size_t>(n_max_) + 1, "hermite: output span too small");
        double ls = -0.5 * x * x;
        double scale = std::exp(ls);
        double cur = kPiQuarter, prev = 0.0;
        out[0] = cur * scale;
        for (int k = 0; k < n_max_; ++k) {
            const double next = x * a_[k] * cur - b_[k] * prev;
            prev = cur;
            cur = next;
            if (std::abs(cur) > kRescale) {
                cur /= kRescale;
                prev /= kRescale;
                ls += kLogRescale;
                scale = std::exp(ls);
            }
            out[k + 1] = cur * scale;
        }
    }

    std::vector<double> values(double x) const {
        std::vector<double> out(n_max_ + 1);
        values(x, out);
        return out;
    }

    /// (h_{m-1}(x), h_m(x), h_{m+1}(x)) for m = n_max - 1, without storing the sweep.
    /// h_{-1} is reported as 0.
    std::array<double, 3> top_three(double x) const {
        check_x(x);
        double ls = -0.5 * x * x;
        double cur = kPiQuarter, prev = 0.0, prev2 = 0.0;
        for (int k = 0; k < n_max_; ++k) {
            const double next = x * a_[k] * cur - b_[k] * prev;
            prev2 = prev;
            prev = cur;
            cur = next;
            if (std::abs(cur) > kRescale) {
                cur /= kRescale;
                prev /= kRescale;
                prev2 /= kRescale;
                ls += kLogRescale;
            }
        }
        const double s = std::exp(ls);
        return {prev2 * s, prev * s, cur * s};
    }

private:
    static constexpr double kRescale = 1e100;
    static inline const double kLogRescale = 100.0 * std::log(10.0);

    static void check_x(double x) {
        detail::require(std::isfinite(x) && std::abs(x) <= kMaxAbsX, "hermite: |x| must be at most 200");
    }

    int n_max_;
    std::vector<double> a_, b_;
};

inline std::vector<double> values(int n_max, double x) { return Evaluator(n_max).values(x); }

inline double value(int n, double x) { return Evaluator(n).values(x).back(); }

/// (h_n(x), h_n'(x)) with h_n' = sqrt(2n) h_{n-1} - x h_n.
inline std::pair<double, double> value_and_derivative(int n, double x) {
    if (n == 0) {
        const double h = kPiQuarter * std::exp(-0.5 * x * x);
        return {h, -x * h};
    }
    const auto t = Evaluator(n + 1).top_three(x);  // h_{n-1}, h_n, h_{n+1}
    return {t[1], std::sqrt(2.0 * n) * t[0] - x * t[1]};
}

/// Closed forms at the origin: {h_n(0), h_n'(0)}.
inline std::pair<double, double> zero_values(int n) {
    detail::require(n >= 0 && n <= kMaxDegree, "zero_values: degree must be in [0, 1e6]");
    const double lq = -0.25 * std::log(std::numbers::pi);
    const double ln2 = std::numbers::ln2;
    if (n % 2 == 0) {
        const int m = n / 2;
        const double lv = lq - 0.5 * n * ln2 + 0.5 * std::lgamma(n + 1.0) - std::lgamma(m + 1.0);
        return {(m % 2 ? -1.0 : 1.0) * std::exp(lv), 0.0};
    }
    const int m = (n - 1) / 2;
    const double lv = lq + std::log(2.0 * n) - 0.5 * (n * ln2 + std::lgamma(n + 1.0))
                      + std::lgamma(static_cast<double>(n)) - std::lgamma(m + 1.0);
    return {0.0, (m % 2 ? -1.0 : 1.0) * std::exp(lv)};
}

struct Expansion {
    std::vector<double> coeffs;
    std::optional<double> truncation;  // T in c_k = int_{-T}^{T} f h_k; none = whole line

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

inline double expansion_frequency(int n) { return std::sqrt(2.0 * n + 3.0); }

inline quad::QuadratureSpec default_spec(int n) { return quad::QuadratureSpec::for_frequency(expansion_frequency(n)); }

namespace detail {

inline void check_spec(const quad::QuadratureSpec& spec, int n) {
    spec.validate();
    hermconv::detail::require_config(spec.oscillation_freq >= expansion_frequency(n) * (1.0 - 1e-12),
                                     "quadrature undersized: oscillation_freq must be at least sqrt(2n+3)");
}

inline void check_T(const std::optional<double>& T) {
    if (T) hermconv::detail::require(std::isfinite(*T) && *T > 0.0, "truncation T must be positive and finite");
}

/// Quadrature nodes of f restricted to (-T, T), cell by cell.
inline std::vector<std::pair<double, double>> window_nodes(const GridFunction& f, std::optional<double> T,
                                                           const quad::QuadratureSpec& spec) {
    std::vector<std::pair<double, double>> nodes;
    const auto& x = f.nodes();
    const double lo = T ? -*T : -std::numeric_limits<double>::infinity();
    const double hi = T ? *T : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = std::max(x[i], lo), b = std::min(x[i + 1], hi);
        if (!(b > a)) continue;
        if (f.interp() == Interp::cell_constant && f.values()[i] == 0.0) continue;
        quad::for_each_node(a, b, spec, [&](double t, double w) { nodes.emplace_back(t, w); });
    }
    return nodes;
}

} // namespace detail

/// c_k = int_{-T}^{T} f h_k, k = 0..n (whole line when T is empty).
inline Expansion expand(const GridFunction& f, int n, std::optional<double> T = std::nullopt,
                        std::optional<quad::QuadratureSpec> spec = std::nullopt) {
    hermconv::detail::require(n >= 0 && n <= kMaxDegree, "expand: degree must be in [0, 1e6]");
    detail::check_T(T);
    const auto qs = spec.value_or(default_spec(n));
    detail::check_spec(qs, n);
    const auto nodes = detail::window_nodes(f, T, qs);
    for (const auto& [t, w] : nodes)
        hermconv::detail::require(std::abs(t) <= kMaxAbsX, "expand: support must lie within |x| <= 200");

    // Fixed chunking keeps the summation order independent of the thread count.
    constexpr std::size_t kChunks = 64;
    const std::size_t per = (nodes.size() + kChunks - 1) / kChunks;
    std::vector<std::vector<double>> partial(kChunks);
    const Evaluator ev(n);
    parallel_for(kChunks, [&](std::size_t c) {
        const std::size_t lo = c * per, hi = std::min(nodes.size(), lo + per);
        if (lo >= hi) return;
        std::vector<double> acc(n + 1, 0.0), h(n + 1);
        for (std::size_t i = lo; i < hi; ++i) {
            const double fw = f(nodes[i].first) * nodes[i].second;
            if (fw == 0.0) continue;
            ev.values(nodes[i].first, h);
            for (int k = 0; k <= n; ++k) acc[k] += fw * h[k];
        }
        partial[c] = std::move(acc);
    });
    Expansion e{std::vector<double>(n + 1, 0.0), T};
    for (const auto& p : partial)
        for (std::size_t k = 0; k < p.size(); ++k) e.coeffs[k] += p[k];
    return e;
}

/// sum_k c_k h_k(x).
inline double partial_sum(const Expansion& e, double x) {
    hermconv::detail::require(!e.coeffs.empty(), "partial_sum: empty expansion");
    if (std::abs(x) > kMaxAbsX) return 0.0;  // every h_k has underflowed long before
    const auto h = Evaluator(e.degree()).values(x);
    double s = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) s += e.coeffs[k] * h[k];
    return s;
}

/// Reusable evaluator for many x against one expansion.
class PartialSum {
public:
    explicit PartialSum(const Expansion& e) : e_(e), ev_(e.degree()) {}
    double operator()(double x) const {
        if (std::abs(x) > kMaxAbsX) return 0.0;
        thread_local std::vector<double> h;
        h.resize(e_.coeffs.size());
        ev_.values(x, h);
        double s = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) s += e_.coeffs[k] * h[k];
        return s;
    }

private:
    const Expansion& e_;
    Evaluator ev_;
};

/// Christoffel-Darboux kernel k_n(x, y) = [h_{n+1}(x)h_n(y) - h_n(x)h_{n+1}(y)] / (x - y),
/// so that sum_{k<=n} h_k(x)h_k(y) = sqrt((n+1)/2) k_n(x, y).
class Kernel {
public:
    explicit Kernel(int n) : n_(n), ev_(n + 1) {
        hermconv::detail::require(n >= 0 && n < kMaxDegree, "cd_kernel: degree must be in [0, 1e6)");
    }

    int n() const { return n_; }

    /// (h_{n-1}, h_n, h_{n+1}) at x.
    std::array<double, 3> top(double x) const { return ev_.top_three(x); }

    double operator()(double x, double y) const { return eval(top(x), x, top(y), y); }

    /// Kernel from precomputed top-three triples at x and y.
    double eval(const std::array<double, 3>& hx, double x, const std::array<double, 3>& hy, double y) const {
        if (std::abs(x - y) < 1e-6 * (1.0 + std::abs(x))) return diagonal(0.5 * (x + y));
        return (hx[2] * hy[1] - hx[1] * hy[2]) / (x - y);
    }

    /// Confluent limit h'_{n+1}(m)h_n(m) - h'_n(m)h_{n+1}(m).
    double diagonal(double m) const {
        const auto t = top(m);
        const double dn = std::sqrt(2.0 * n_) * t[0] - m * t[1];
        const double dn1 = std::sqrt(2.0 * (n_ + 1)) * t[1] - m * t[2];
        return dn1 * t[1] - dn * t[2];
    }

private:
    int n_;
    Evaluator ev_;
};

inline double cd_kernel(int n, double x, double y) { return Kernel(n)(x, y); }

/// S_n(f chi_T)(x) = sqrt((n+1)/2) int_{-T}^{T} k_n(x, y) f(y) dy.
inline double partial_sum_via_kernel(const GridFunction& f, double T, int n, double x,
                                     std::optional<quad::QuadratureSpec> spec = std::nullopt) {
    detail::check_T(T);
    const auto qs = spec.value_or(default_spec(n));
    detail::check_spec(qs, n);
    if (std::abs(x) > kMaxAbsX) return 0.0;
    const Kernel K(n);
    const auto hx = K.top(x);
    double s = 0.0;
    for (const auto& [y, w] : detail::window_nodes(f, T, qs)) {
        const double fy = f(y);
        if (fy == 0.0) continue;
        s += w * fy * K.eval(hx, x, K.top(y), y);
    }
    return std::sqrt((n + 1) / 2.0) * s;
}

struct TruncationSchedule {
    double scale = 1.0;
    double exponent = 1.0 / 40.0;

    void validate() const {
        hermconv::detail::require(std::isfinite(scale) && scale > 0.0, "schedule: scale must be positive");
        hermconv::detail::require(exponent > 0.0 && exponent < 1.0 / 34.0,
                                  "schedule: exponent must lie in (0, 1/34)");
    }

    double T(int n) const {
        validate();
        hermconv::detail::require(n >= 1, "schedule: n must be at least 1");
        return scale * std::pow(static_cast<double>(n), exponent);
    }
};

/// Output grid: 32 points per wavelength 2 pi / sqrt(2n+3).
inline std::size_t output_cells(int n, double T) {
    const double per_unit = 32.0 * expansion_frequency(n) / (2.0 * std::numbers::pi);
    return static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * T * per_unit)));
}

/// chi_{(-T_n, T_n)} S_n(f chi_{T_n}) as a piecewise-linear function on [-T_n, T_n].
inline GridFunction truncated_partial_sum(const GridFunction& f, int n, const TruncationSchedule& sched) {
    const double T = sched.T(n);
    const Expansion e = expand(f, n, T);
    const std::size_t cells = output_cells(n, T);
    std::vector<double> x(cells + 1), v(cells + 1);
    const double h = 2.0 * T / static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) x[i] = (i == cells) ? T : -T + h * static_cast<double>(i);
    const PartialSum S(e);
    parallel_for(cells + 1, [&](std::size_t i) { v[i] = S(x[i]); });
    return GridFunction::piecewise_linear(std::move(x), std::move(v));
}

} // namespace hermconv::hermite
