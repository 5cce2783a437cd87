#pragma once

/// Test functions used by the experiments and the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gridfn.hpp"

namespace hermconv::corpus {

/// Peak 1 at 0, base (-1, 1).
inline GridFunction triangle() { return GridFunction::piecewise_linear({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}); }

/// exp(-1/(1-x^2)) on (-1, 1), piecewise-linear on `cells` uniform cells.
inline GridFunction smooth_bump(std::size_t cells = 1024) {
    return GridFunction::sample(
        [](double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }, -1.0, 1.0, cells,
        Interp::piecewise_linear);
}

inline double smooth_bump_exact(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

/// chi_{(-1, 1)}.
inline GridFunction step() { return GridFunction::indicator(-1.0, 1.0); }

struct RandomSpec {
    double lo = -1.0, hi = 1.0;
    std::size_t min_cells = 4, max_cells = 24;
    double max_value = 2.0;
    bool nonnegative = false;
    DomainKind kind = DomainKind::real_line;
};

/// Cell-constant function with random cell boundaries and values; the
/// generator state fully determines the output.
inline GridFunction random_cell_constant(std::mt19937_64& rng, const RandomSpec& s = {}) {
    std::uniform_int_distribution<std::size_t> ncell(s.min_cells, s.max_cells);
    std::uniform_real_distribution<double> pos(s.lo, s.hi);
    std::uniform_real_distribution<double> val(s.nonnegative ? 0.0 : -s.max_value, s.max_value);
    const std::size_t n = ncell(rng);
    std::vector<double> x;
    x.reserve(n + 1);
    x.push_back(s.lo);
    x.push_back(s.hi);
    while (x.size() < n + 1) x.push_back(pos(rng));
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    std::vector<double> v(x.size() - 1);
    for (auto& y : v) y = val(rng);
    return GridFunction::cell_constant(std::move(x), std::move(v), s.kind);
}

inline GridFunction by_name(const std::string& name, std::uint64_t seed = 1) {
    if (name == "triangle") return triangle();
    if (name == "bump" || name == "smooth-bump") return smooth_bump();
    if (name == "step") return step();
    if (name == "zero") return GridFunction::zero();
    if (name == "unit") return GridFunction::indicator(0.0, 1.0, 1.0, DomainKind::half_line);
    if (name.rfind("random", 0) == 0) {
        std::mt19937_64 rng(seed);
        return random_cell_constant(rng);
    }
    throw config_error("unknown corpus function: " + name);
}

} // namespace hermconv::corpus
