#pragma once

/// Hilbert transform, Stieltjes transform, the Hardy operators P and Q, and
/// the two comparison checks built on them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "gridfn.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "report.hpp"

namespace hermconv::operators {

struct PrincipalValueSpec {
    double exclusion_radius = 0.0;  // 0: 1e-12 times the smallest cell width
    int graded_levels = 40;
};

namespace detail {

/// Nodes on [lo, hi] (lo > 0) with panels [lo 2^j, lo 2^{j+1}], the last one clipped.
template <class Fn>
void geometric(double lo, double hi, Fn&& fn, int points = 8) {
    const quad::QuadratureSpec spec = quad::QuadratureSpec::for_frequency(0.0, points);
    while (lo < hi) {
        const double next = std::min(hi, 2.0 * lo);
        quad::for_each_node(lo, next, spec, fn);
        lo = next;
    }
}

inline double min_cell(const GridFunction& f) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < f.nodes().size(); ++i) m = std::min(m, f.nodes()[i + 1] - f.nodes()[i]);
    return m;
}

inline void require_half_line(const GridFunction& g, const char* who) {
    hermconv::detail::require(g.domain_kind() == DomainKind::half_line || g.nodes().front() >= 0.0,
                              std::string(who) + ": expects a function on the half-line");
}

} // namespace detail

/// Hf(x) = p.v. int f(y)/(x-y) dy in the symmetric form int_0^inf (f(x-u) - f(x+u))/u du.
/// Breakpoints sit at |x - node|; every piece is graded geometrically in u.
inline double hilbert(const GridFunction& f, double x, const PrincipalValueSpec& spec = {}) {
    hermconv::detail::require(std::isfinite(x), "hilbert: x must be finite");
    hermconv::detail::require(spec.graded_levels >= 1 && spec.graded_levels <= 200,
                              "hilbert: graded_levels must be in [1, 200]");
    if (f.is_zero()) return 0.0;
    const auto& nodes = f.nodes();
    const double h_min = detail::min_cell(f);
    const double excl = spec.exclusion_radius > 0.0 ? spec.exclusion_radius : 1e-12 * h_min;
    hermconv::detail::require(excl <= 0.5 * h_min, "hilbert: exclusion radius exceeds half the smallest cell");

    if (f.interp() == Interp::cell_constant) {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
        if (it != nodes.end() && *it == x) {
            const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
            const double left = i > 0 ? f.values()[i - 1] : 0.0;
            hermconv::detail::require(left == f.values()[i], "hilbert: x sits on a jump of a cell-constant function");
        }
    }

    std::vector<double> bp;
    bp.reserve(nodes.size());
    for (double t : nodes) {
        const double u = std::abs(x - t);
        if (u > 0.0) bp.push_back(u);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    double s = 0.0;
    auto acc = [&](double u, double w) { s += w * (f(x - u) - f(x + u)) / u; };
    // First piece: graded toward u = 0 down to the exclusion radius.
    const double first = bp.front();
    const double floor_u = std::max(excl, std::ldexp(first, -spec.graded_levels));
    if (x >= nodes.front() && x <= nodes.back() && floor_u < first) detail::geometric(floor_u, first, acc);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) detail::geometric(bp[i], bp[i + 1], acc);
    return s;
}

/// Sg(t) = int_0^inf g(s)/(t+s) ds. Closed form for cell-constant g,
/// geometric panels in t + s otherwise.
inline double stieltjes(const GridFunction& g, double t) {
    detail::require_half_line(g, "stieltjes");
    hermconv::detail::require(std::isfinite(t) && t > 0.0, "stieltjes: t must be positive");
    const auto& x = g.nodes();
    const auto& v = g.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i], b = x[i + 1];
        if (g.interp() == Interp::cell_constant) {
            if (v[i] != 0.0) s += v[i] * std::log1p((b - a) / (t + a));
        } else {
            if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
            detail::geometric(t + a, t + b, [&](double w, double wt) { s += wt * g(w - t) / w; });
        }
    }
    return s;
}

/// Pg(t) = (1/t) int_0^t g.
inline double hardy_p(const GridFunction& g, double t) {
    detail::require_half_line(g, "hardy_p");
    hermconv::detail::require(std::isfinite(t) && t > 0.0, "hardy_p: t must be positive");
    const auto& x = g.nodes();
    const auto& v = g.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size() && x[i] < t; ++i) {
        const double a = x[i], b = std::min(x[i + 1], t);
        if (g.interp() == Interp::cell_constant) s += v[i] * (b - a);
        else s += 0.5 * (g(a) + g(b)) * (b - a);
    }
    return s / t;
}

/// Qg(t) = int_t^inf g(s)/s ds.
inline double hardy_q(const GridFunction& g, double t) {
    detail::require_half_line(g, "hardy_q");
    hermconv::detail::require(std::isfinite(t) && t > 0.0, "hardy_q: t must be positive");
    const auto& x = g.nodes();
    const auto& v = g.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i + 1] <= t) continue;
        const double a = std::max(x[i], t), b = x[i + 1];
        if (g.interp() == Interp::cell_constant) {
            if (v[i] != 0.0) s += v[i] * std::log(b / a);
        } else {
            detail::geometric(a, b, [&](double u, double w) { s += w * g(u) / u; });
        }
    }
    return s;
}

/// Sg <= Pg + Qg <= 2 Sg on t_grid with slack 1e-12 max(1, rhs). The
/// witness is the point of smallest relative margin.
inline ConditionReport sandwich_check(const GridFunction& g, const std::vector<double>& t_grid) {
    hermconv::detail::require(!t_grid.empty(), "sandwich_check: empty t grid");
    for (double v : g.values()) hermconv::detail::require(v >= 0.0, "sandwich_check: g must be nonnegative");
    ConditionReport r;
    r.name = "sandwich";
    std::vector<double> S(t_grid.size()), PQ(t_grid.size());
    parallel_for(t_grid.size(), [&](std::size_t i) {
        S[i] = stieltjes(g, t_grid[i]);
        PQ[i] = hardy_p(g, t_grid[i]) + hardy_q(g, t_grid[i]);
    });
    double worst_lower = std::numeric_limits<double>::infinity(), worst_upper = worst_lower;
    std::size_t violations = 0;
    std::optional<Witness> worst;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double lower = PQ[i] - S[i];       // >= 0
        const double upper = 2.0 * S[i] - PQ[i]; // >= 0
        const bool bad_lower = lower < -1e-12 * std::max(1.0, PQ[i]);
        const bool bad_upper = upper < -1e-12 * std::max(1.0, 2.0 * S[i]);
        worst_lower = std::min(worst_lower, lower);
        worst_upper = std::min(worst_upper, upper);
        const double margin = std::min(lower / std::max(1.0, PQ[i]), upper / std::max(1.0, 2.0 * S[i]));
        if (bad_lower || bad_upper) ++violations;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst = bad_lower || (!bad_upper && lower <= upper) ? Witness{t_grid[i], S[i], PQ[i]}
                                                                 : Witness{t_grid[i], PQ[i], 2.0 * S[i]};
        }
    }
    r.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
    r.witness = worst;
    r.metrics = {{"worst_lower_margin", worst_lower},
                 {"worst_upper_margin", worst_upper},
                 {"violations", static_cast<double>(violations)},
                 {"grid_points", static_cast<double>(t_grid.size())}};
    if (g.is_zero()) r.add_note("g = 0: both inequalities hold with equality");
    return r;
}

struct HlsOptions {
    double window = 1000.0;      // Hf sampled on |x| <= window
    double fine_width = 0.002;   // cell width near the support
    double fine_margin = 1.0;    // fine cells extend this far past the support
    double growth = 1.02;        // geometric cell growth outside the fine zone
};

/// Samples Hf at cell midpoints of a grid covering |x| <= window, returning a cell-constant function.
inline GridFunction sample_hilbert(const GridFunction& f, const HlsOptions& o = {}) {
    const auto [a, b] = f.support();
    const double lo = a - o.fine_margin, hi = b + o.fine_margin;
    hermconv::detail::require(o.window > std::max(std::abs(lo), std::abs(hi)), "sample_hilbert: window too small");
    std::vector<double> nodes;
    std::vector<double> left;
    for (double w = o.fine_width, x = lo; x - w > -o.window; w *= o.growth) {
        x -= w;
        left.push_back(x);
    }
    left.push_back(-o.window);
    nodes.assign(left.rbegin(), left.rend());
    const std::size_t fine = static_cast<std::size_t>(std::ceil((hi - lo) / o.fine_width));
    for (std::size_t i = 0; i <= fine; ++i) nodes.push_back(i == fine ? hi : lo + (hi - lo) * i / fine);
    for (double w = o.fine_width, x = hi; x + w < o.window; w *= o.growth) {
        x += w;
        nodes.push_back(x);
    }
    nodes.push_back(o.window);
    std::vector<double> vals(nodes.size(), 0.0);
    parallel_for(nodes.size() - 1, [&](std::size_t i) { vals[i] = hilbert(f, 0.5 * (nodes[i] + nodes[i + 1])); });
    return {DomainKind::real_line, std::move(nodes), std::move(vals), Interp::cell_constant};
}

/// Empirical constant C = max_t (Hf)*(t) / Sf*(t) over t_grid.
inline ConditionReport hls_ratio(const GridFunction& f, const std::vector<double>& t_grid, const HlsOptions& o = {}) {
    hermconv::detail::require(!t_grid.empty(), "hls_ratio: empty t grid");
    ConditionReport r;
    r.name = "hilbert_vs_stieltjes";
    if (f.is_zero()) {
        r.verdict = Verdict::pass;
        r.add_note("vacuous: f = 0");
        return r;
    }
    const GridFunction fs = rearrangement(f);
    const GridFunction hs = rearrangement(sample_hilbert(f, o));
    double best = 0.0;
    std::size_t used = 0;
    Witness w;
    for (double t : t_grid) {
        const double den = stieltjes(fs, t);
        if (!(den > 0.0)) continue;
        const double num = hs(t);
        ++used;
        if (num / den > best) {
            best = num / den;
            w = {t, num, den};
        }
    }
    const double l1 = lp_norm(f, 1.0);
    r.fitted_constant = best;
    r.witness = w;
    r.verdict = (used > 0 && std::isfinite(best)) ? Verdict::pass : Verdict::inconclusive;
    r.metrics = {{"tail_bound", l1 / o.window}, {"points_used", static_cast<double>(used)}, {"window", o.window}};
    return r;
}

} // namespace hermconv::operators
