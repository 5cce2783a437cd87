#pragma once

/// Sampled functions on R or (0, inf): a strictly increasing node vector,
/// one value per node, and an interpolation rule. Everything outside
/// [nodes.front(), nodes.back()] is exactly zero.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace hermconv {

enum class DomainKind { real_line, half_line };
enum class Interp { cell_constant, piecewise_linear };

class GridFunction {
public:
    GridFunction() : GridFunction(DomainKind::real_line, {0.0, 1.0}, {0.0, 0.0}, Interp::cell_constant) {}

    /// Cell-constant: values[i] holds on [nodes[i], nodes[i+1]); the last
    /// value is stored as 0. Piecewise-linear: linear between nodes.
    GridFunction(DomainKind kind, std::vector<double> nodes, std::vector<double> values, Interp interp)
        : kind_(kind), nodes_(std::move(nodes)), values_(std::move(values)), interp_(interp) {
        detail::require(nodes_.size() >= 2, "GridFunction: need at least two nodes");
        detail::require(values_.size() == nodes_.size(), "GridFunction: one value per node");
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            detail::require(std::isfinite(nodes_[i]), "GridFunction: non-finite node");
            detail::require(std::isfinite(values_[i]), "GridFunction: non-finite value");
            if (i > 0) detail::require(nodes_[i] > nodes_[i - 1], "GridFunction: nodes must be strictly increasing");
        }
        if (kind_ == DomainKind::half_line)
            detail::require(nodes_.front() >= 0.0, "GridFunction: half-line nodes must be nonnegative");
        if (interp_ == Interp::cell_constant) values_.back() = 0.0;
    }

    static GridFunction cell_constant(std::vector<double> nodes, std::vector<double> cell_values,
                                      DomainKind kind = DomainKind::real_line) {
        detail::require(cell_values.size() + 1 == nodes.size(), "cell_constant: need one value per cell");
        cell_values.push_back(0.0);
        return {kind, std::move(nodes), std::move(cell_values), Interp::cell_constant};
    }

    static GridFunction piecewise_linear(std::vector<double> nodes, std::vector<double> values,
                                         DomainKind kind = DomainKind::real_line) {
        return {kind, std::move(nodes), std::move(values), Interp::piecewise_linear};
    }

    static GridFunction indicator(double a, double b, double height = 1.0,
                                  DomainKind kind = DomainKind::real_line) {
        return cell_constant({a, b}, {height}, kind);
    }

    static GridFunction zero(DomainKind kind = DomainKind::real_line) {
        return cell_constant({0.0, 1.0}, {0.0}, kind);
    }

    /// Samples fn on a uniform grid of `cells` cells over [a, b]; cell-constant
    /// grids take the value at cell midpoints.
    template <class F>
    static GridFunction sample(F&& fn, double a, double b, std::size_t cells, Interp interp,
                               DomainKind kind = DomainKind::real_line) {
        detail::require(cells >= 1 && b > a, "sample: need b > a and at least one cell");
        std::vector<double> x(cells + 1), v(cells + 1, 0.0);
        const double h = (b - a) / static_cast<double>(cells);
        for (std::size_t i = 0; i <= cells; ++i) x[i] = (i == cells) ? b : a + h * static_cast<double>(i);
        for (std::size_t i = 0; i <= cells; ++i) {
            if (interp == Interp::piecewise_linear) v[i] = fn(x[i]);
            else if (i < cells) v[i] = fn(0.5 * (x[i] + x[i + 1]));
        }
        return {kind, std::move(x), std::move(v), interp};
    }

    DomainKind domain_kind() const { return kind_; }
    Interp interp() const { return interp_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t cells() const { return nodes_.size() - 1; }
    std::pair<double, double> support() const { return {nodes_.front(), nodes_.back()}; }

    double operator()(double x) const {
        if (!(x >= nodes_.front() && x <= nodes_.back())) return 0.0;
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        if (i + 1 >= nodes_.size()) return interp_ == Interp::cell_constant ? 0.0 : values_.back();
        if (interp_ == Interp::cell_constant) return values_[i];
        const double t = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
        return values_[i] + t * (values_[i + 1] - values_[i]);
    }

    bool is_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }

    double sup_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    GridFunction scaled(double c) const {
        detail::require(std::isfinite(c), "scaled: factor must be finite");
        auto v = values_;
        for (auto& x : v) x *= c;
        return {kind_, nodes_, std::move(v), interp_};
    }

    GridFunction abs() const {
        detail::require(interp_ == Interp::cell_constant, "abs: only cell-constant functions keep their grid");
        auto v = values_;
        for (auto& x : v) x = std::abs(x);
        return {kind_, nodes_, std::move(v), interp_};
    }

private:
    DomainKind kind_;
    std::vector<double> nodes_;
    std::vector<double> values_;
    Interp interp_;
};

/// Visits Gauss nodes (x, w) cell by cell. Piecewise-linear cells are split
/// at sign changes and graded geometrically toward zeros of f, so integrands
/// like |f|^p with fractional p stay accurate near those points.
template <class Fn>
void for_each_node(const GridFunction& f, const quad::QuadratureSpec& spec, Fn&& fn) {
    const auto& x = f.nodes();
    const auto& v = f.values();
    quad::QuadratureSpec graded = spec;
    graded.levels = 40;
    auto piece = [&](double a, double b, bool zero_left, bool zero_right) {
        if (!zero_left && !zero_right) return quad::for_each_node(a, b, spec, fn);
        const double m = 0.5 * (a + b);
        if (zero_left) quad::for_each_node_graded(a, m, graded, fn);
        else quad::for_each_node(a, m, spec, fn);
        if (zero_right)
            quad::for_each_node_graded(-b, -m, graded, [&](double t, double w) { fn(-t, w); });
        else
            quad::for_each_node(m, b, spec, fn);
    };
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i], b = x[i + 1];
        if (f.interp() == Interp::cell_constant) {
            quad::for_each_node(a, b, spec, fn);
        } else if (v[i] * v[i + 1] < 0.0) {
            const double r = a + (b - a) * v[i] / (v[i] - v[i + 1]);
            piece(a, r, false, true);
            piece(r, b, true, false);
        } else if (v[i] != 0.0 || v[i + 1] != 0.0) {
            piece(a, b, v[i] == 0.0, v[i + 1] == 0.0);
        }
    }
}

/// Integral of f. Exact for both interpolation rules (sum of value times
/// width, or trapezoid sums); spec is validated for the shared contract.
inline double integrate(const GridFunction& f, const quad::QuadratureSpec& spec = {}) {
    spec.validate();
    const auto& x = f.nodes();
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double w = x[i + 1] - x[i];
        s += f.interp() == Interp::cell_constant ? v[i] * w : 0.5 * (v[i] + v[i + 1]) * w;
    }
    return s;
}

/// Integral of g(x, f(x)) over the support of f.
template <class G>
double integrate_composed(const GridFunction& f, G&& g, const quad::QuadratureSpec& spec = {}) {
    spec.validate();
    double s = 0.0;
    for_each_node(f, spec, [&](double x, double w) { s += w * g(x, f(x)); });
    return s;
}

inline double lp_norm(const GridFunction& f, double p, const quad::QuadratureSpec& spec = {}) {
    detail::require(p >= 1.0 && std::isfinite(p), "lp_norm: p must be finite and >= 1");
    spec.validate();
    double s = 0.0;
    if (f.interp() == Interp::cell_constant) {
        const auto& x = f.nodes();
        const auto& v = f.values();
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            if (v[i] != 0.0) s += std::pow(std::abs(v[i]), p) * (x[i + 1] - x[i]);
    } else {
        for_each_node(f, spec, [&](double x, double w) { s += w * std::pow(std::abs(f(x)), p); });
    }
    return std::pow(s, 1.0 / p);
}

/// |{x : |f(x)| > lambda}|, exact for both interpolation rules.
inline double distribution(const GridFunction& f, double lambda) {
    const auto& x = f.nodes();
    const auto& v = f.values();
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double w = x[i + 1] - x[i];
        if (f.interp() == Interp::cell_constant) {
            if (std::abs(v[i]) > lambda) m += w;
            continue;
        }
        // |a + (b-a)s| > lambda on s in [0,1]: measure of {s : l(s) > lambda} plus {s : l(s) < -lambda}.
        const double a = v[i], b = v[i + 1];
        auto above = [](double a, double b, double lam) {
            if (a > lam && b > lam) return 1.0;
            if (a <= lam && b <= lam) return 0.0;
            const double s = (lam - a) / (b - a);
            return a > lam ? s : 1.0 - s;
        };
        m += w * (above(a, b, lambda) + above(-a, -b, lambda));
    }
    return m;
}

/// Cell-constant copy: each piecewise-linear cell is split into `factor`
/// subcells carrying the midpoint value.
inline GridFunction to_cell_constant(const GridFunction& f, int factor = 4) {
    if (f.interp() == Interp::cell_constant) return f;
    detail::require(factor >= 1, "to_cell_constant: factor must be positive");
    const auto& x = f.nodes();
    std::vector<double> nodes, vals;
    nodes.reserve(f.cells() * factor + 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = (x[i + 1] - x[i]) / factor;
        for (int j = 0; j < factor; ++j) {
            const double a = x[i] + j * h;
            nodes.push_back(a);
            vals.push_back(f(a + 0.5 * h));
        }
    }
    nodes.push_back(x.back());
    vals.push_back(0.0);
    return {f.domain_kind(), std::move(nodes), std::move(vals), Interp::cell_constant};
}

/// Nonincreasing rearrangement f* on the half-line: cells sorted by |value|
/// in descending order and laid end to end from 0; zero cells are dropped.
inline GridFunction rearrangement(const GridFunction& f) {
    const GridFunction g = to_cell_constant(f);
    const auto& x = g.nodes();
    const auto& v = g.values();
    std::vector<std::pair<double, double>> cells;  // (|value|, width)
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (v[i] != 0.0) cells.emplace_back(std::abs(v[i]), x[i + 1] - x[i]);
    if (cells.empty()) return GridFunction::zero(DomainKind::half_line);
    std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<double> nodes{0.0}, vals;
    double pos = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        pos += cells[i].second;
        if (!vals.empty() && vals.back() == cells[i].first) {
            nodes.back() = pos;
            continue;
        }
        vals.push_back(cells[i].first);
        nodes.push_back(pos);
    }
    return GridFunction::cell_constant(std::move(nodes), std::move(vals), DomainKind::half_line);
}

/// D_a f(t) = f(t / a).
inline GridFunction dilate(const GridFunction& f, double a) {
    detail::require(std::isfinite(a) && a > 0.0, "dilate: factor must be positive and finite");
    auto x = f.nodes();
    for (auto& t : x) t *= a;
    return {f.domain_kind(), std::move(x), f.values(), f.interp()};
}

/// alpha f + beta g on the union of both grids. Both inputs must share an
/// interpolation rule; the result is exact on that rule.
inline GridFunction combine(double alpha, const GridFunction& f, double beta, const GridFunction& g) {
    detail::require(f.interp() == g.interp(), "combine: interpolation rules differ");
    std::vector<double> nodes;
    std::set_union(f.nodes().begin(), f.nodes().end(), g.nodes().begin(), g.nodes().end(),
                   std::back_inserter(nodes));
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    const auto kind = (f.domain_kind() == DomainKind::half_line && g.domain_kind() == DomainKind::half_line)
                          ? DomainKind::half_line : DomainKind::real_line;
    std::vector<double> vals(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (f.interp() == Interp::cell_constant) {
            if (i + 1 == nodes.size()) break;
            const double mid = 0.5 * (nodes[i] + nodes[i + 1]);
            vals[i] = alpha * f(mid) + beta * g(mid);
        } else {
            vals[i] = alpha * f(nodes[i]) + beta * g(nodes[i]);
        }
    }
    return {kind, std::move(nodes), std::move(vals), f.interp()};
}

} // namespace hermconv
