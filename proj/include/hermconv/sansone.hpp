#pragma once

/// Sansone's asymptotics for h_n near the origin, the seven-term kernel
/// decomposition, the Dirichlet operator F_N and the comb construction used
/// for the lower bound by the Stieltjes transform.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "gridfn.hpp"
#include "hermite.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "report.hpp"

namespace hermconv::sansone {

inline double lambda(int k) { return std::sqrt(2.0 * k + 1.0); }

/// N = (sqrt(2n+1) + sqrt(2n+3)) / 2.
inline double n_frequency(int n) {
    hermconv::detail::require(n >= 0, "n_frequency: n must be nonnegative");
    return 0.5 * (lambda(n) + lambda(n + 1));
}

/// Normalising factor of the leading term: h_k(0) for even k, h_k'(0)/sqrt(2k+1) for odd k.
inline double prefactor(int k) {
    const auto [v, d] = hermite::zero_values(k);
    return k % 2 == 0 ? v : d / lambda(k);
}

/// c_n, normalised so that c_n -> 1. Even n: pi sqrt((n+1)/2) h_n(0) h'_{n+1}(0) / sqrt(2n+3);
/// odd n mirrors it with the roles of n and n+1 exchanged.
inline double c_constant(int n) {
    hermconv::detail::require(n >= 0 && n < hermite::kMaxDegree, "c_constant: n out of range");
    const double s = std::numbers::pi * std::sqrt((n + 1) / 2.0);
    if (n % 2 == 0) return s * hermite::zero_values(n).first * hermite::zero_values(n + 1).second / lambda(n + 1);
    return -s * hermite::zero_values(n + 1).first * hermite::zero_values(n).second / lambda(n);
}

/// Leading term plus cubic correction, without the prefactor.
inline double bracket(int k, double x) {
    const double l = lambda(k);
    if (k % 2 == 0) return std::cos(l * x) + x * x * x * std::sin(l * x) / (6.0 * l);
    return std::sin(l * x) - x * x * x * std::cos(l * x) / (6.0 * l);
}

/// Approximation of h_k(x): prefactor times bracket.
inline double approx(int k, double x) { return prefactor(k) * bracket(k, x); }

/// Exact normalised residual R(k, x) = h_k(x)/prefactor(k) - bracket(k, x).
inline double remainder(int k, double x) { return hermite::value(k, x) / prefactor(k) - bracket(k, x); }

/// omega(n, x) = x^2 (x^4 + 1)/n + x^{17/2} n^{-5/4}.
inline double omega(int n, double x) {
    hermconv::detail::require(n >= 1, "omega: n must be positive");
    x = std::abs(x);
    return x * x * (x * x * x * x + 1.0) / n + std::pow(x, 8.5) * std::pow(static_cast<double>(n), -1.25);
}

struct Terms {
    int n = 0;
    double x = 0.0, y = 0.0;
    std::array<double, 7> K{};
    double lhs = 0.0;               // pi sqrt((n+1)/2) (x - y) k_n(x, y)
    double residual_identity = 0.0; // lhs - c_n sum K

    double sum() const {
        double s = 0.0;
        for (double k : K) s += k;
        return s;
    }
};

/// K_1..K_7 from expanding c_n [A(y)B(x) - A(x)B(y)], where A is the
/// normalised even member of {h_n, h_{n+1}} and B the odd one:
/// A = cos(bx) + x^3 sin(bx)/(6b) + R_e(x), B = sin(ax) - x^3 cos(ax)/(6a) + R_o(x).
inline Terms kernel_terms(int n, double x, double y) {
    hermconv::detail::require(n >= 0 && n + 1 < hermite::kMaxDegree, "kernel_terms: n out of range");
    const int e = n % 2 == 0 ? n : n + 1;
    const int o = n % 2 == 0 ? n + 1 : n;
    const double b = lambda(e), a = lambda(o);
    const double pe = prefactor(e), po = prefactor(o);

    const hermite::Evaluator ev(n + 1);
    const auto hx = ev.values(x), hy = ev.values(y);
    const double Rex = hx[e] / pe - bracket(e, x), Rey = hy[e] / pe - bracket(e, y);
    const double Rox = hx[o] / po - bracket(o, x), Roy = hy[o] / po - bracket(o, y);

    const double x3 = x * x * x, y3 = y * y * y;
    const double sax = std::sin(a * x), say = std::sin(a * y), cax = std::cos(a * x), cay = std::cos(a * y);
    const double sbx = std::sin(b * x), sby = std::sin(b * y), cbx = std::cos(b * x), cby = std::cos(b * y);

    Terms t;
    t.n = n;
    t.x = x;
    t.y = y;
    t.K[0] = sax * cby - say * cbx;
    t.K[1] = (y3 * sby * sax - x3 * sbx * say) / (6.0 * b);
    t.K[2] = (y3 * cbx * cay - x3 * cby * cax) / (6.0 * a);
    t.K[3] = x3 * y3 / (36.0 * a * b) * (sbx * cay - sby * cax);
    t.K[4] = Rox * cby - Roy * cbx + Rey * sax - Rex * say;
    t.K[5] = (Rox * y3 * sby - Roy * x3 * sbx) / (6.0 * b) + (Rex * y3 * cay - Rey * x3 * cax) / (6.0 * a);
    t.K[6] = Rey * Rox - Rex * Roy;

    t.lhs = std::numbers::pi * std::sqrt((n + 1) / 2.0) * (hx[n + 1] * hy[n] - hx[n] * hy[n + 1]);
    t.residual_identity = t.lhs - c_constant(n) * t.sum();
    return t;
}

enum class K1Variant { over_2N, times_2N };

/// K_1 - sin(N(x-y)) - cos(N(x+y)) sin(d(x-y)) + 2 sin^2(d(x+y)/2) sin(N(x-y)),
/// with K_1 = sin(sqrt(2n+3)x)cos(sqrt(2n+1)y) - sin(sqrt(2n+3)y)cos(sqrt(2n+1)x)
/// and d = 1/(2N) (over_2N) or d = 2N (times_2N). Only over_2N is an identity.
inline double k1_residual(int n, double x, double y, K1Variant v = K1Variant::over_2N) {
    const double N = n_frequency(n);
    const double a = lambda(n + 1), b = lambda(n);
    const double K1 = std::sin(a * x) * std::cos(b * y) - std::sin(a * y) * std::cos(b * x);
    const double d = v == K1Variant::over_2N ? 1.0 / (2.0 * N) : 2.0 * N;
    const double s = std::sin(0.5 * d * (x + y));
    return K1 - std::sin(N * (x - y)) - std::cos(N * (x + y)) * std::sin(d * (x - y))
           + 2.0 * s * s * std::sin(N * (x - y));
}

/// F_N(f chi_T)(x) = int_{-T}^{T} sin(N(x-y))/(x-y) f(y) dy (no 1/pi), with
/// the quadrature nodes and sin/cos(Ny) weights prepared once for many x.
class Dirichlet {
public:
    Dirichlet(const GridFunction& f, double T, double N, std::optional<quad::QuadratureSpec> spec = std::nullopt)
        : N_(N) {
        hermconv::detail::require(std::isfinite(T) && T > 0.0, "dirichlet: T must be positive");
        hermconv::detail::require(std::isfinite(N) && N > 0.0, "dirichlet: N must be positive");
        const auto qs = spec.value_or(quad::QuadratureSpec::for_frequency(N));
        qs.validate();
        hermconv::detail::require_config(qs.oscillation_freq >= N * (1.0 - 1e-12),
                                         "dirichlet: quadrature undersized for frequency N");
        for (const auto& [y, w] : hermite::detail::window_nodes(f, T, qs)) {
            const double fw = w * f(y);
            if (fw == 0.0) continue;
            y_.push_back(y);
            fw_.push_back(fw);
            c_.push_back(fw * std::cos(N * y));
            s_.push_back(fw * std::sin(N * y));
        }
    }

    double operator()(double x) const {
        const double sx = std::sin(N_ * x), cx = std::cos(N_ * x);
        double s = 0.0;
        for (std::size_t i = 0; i < y_.size(); ++i) {
            const double u = x - y_[i];
            // sin(N(x-y)) = sin(Nx)cos(Ny) - cos(Nx)sin(Ny); direct form where that cancels.
            if (std::abs(N_ * u) < 1e-3)
                s += fw_[i] * (std::abs(N_ * u) < 1e-8 ? N_ : std::sin(N_ * u) / u);
            else
                s += (sx * c_[i] - cx * s_[i]) / u;
        }
        return s;
    }

private:
    double N_;
    std::vector<double> y_, fw_, c_, s_;
};

inline double dirichlet(const GridFunction& f, double T, double N, double x,
                        std::optional<quad::QuadratureSpec> spec = std::nullopt) {
    return Dirichlet(f, T, N, spec)(x);
}

/// alpha(T, n) = 1 + T^17/sqrt(n), unit constant.
inline double envelope_alpha(double T, int n) {
    hermconv::detail::require(T > 0.0 && n >= 1, "envelope_alpha: T and n must be positive");
    return 1.0 + std::pow(T, 17.0) / std::sqrt(static_cast<double>(n));
}

/// beta(T, n) = T^17/sqrt(n), unit constant.
inline double envelope_beta(double T, int n) {
    hermconv::detail::require(T > 0.0 && n >= 1, "envelope_beta: T and n must be positive");
    return std::pow(T, 17.0) / std::sqrt(static_cast<double>(n));
}

/// max over x in [lo, hi] of |R(n, x)| / omega(n, x) on a uniform grid.
inline ConditionReport remainder_fit(int n, double lo = 0.05, double hi = 2.0, int points = 400) {
    hermconv::detail::require(lo > 0.0 && hi > lo && points >= 2, "remainder_fit: bad range");
    const double pe = prefactor(n);
    const hermite::Evaluator ev(n);
    ConditionReport r;
    r.name = "sansone_remainder";
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1.0);
        const double R = ev.values(x)[n] / pe - bracket(n, x);
        const double q = std::abs(R) / omega(n, x);
        if (q > best) {
            best = q;
            r.witness = Witness{x, std::abs(R), omega(n, x)};
        }
    }
    r.fitted_constant = best;
    r.verdict = std::isfinite(best) ? Verdict::pass : Verdict::fail;
    r.metrics = {{"n", static_cast<double>(n)}, {"x_lo", lo}, {"x_hi", hi}};
    return r;
}

struct CombSpec {
    double N = 1.0;
    int k = 0;        // 0..classes
    int m = 0;        // shift in quarter periods
    int j_max = 0;    // cells j = 0..j_max
    int classes = 4;  // quarter cells per period: 4 gives period pi/N, 8 gives 2 pi/N

    void validate() const {
        hermconv::detail::require(std::isfinite(N) && N > 0.0, "comb: N must be positive");
        hermconv::detail::require(classes == 4 || classes == 8, "comb: classes must be 4 or 8");
        hermconv::detail::require(k >= 0 && k <= classes, "comb: k must be in 0..classes");
        hermconv::detail::require(j_max >= 0 && j_max <= 10'000'000, "comb: j_max out of range");
    }
};

/// Smallest j whose I_k cell starts beyond T.
inline int comb_j_max(double N, int k, double T, int classes = 4) {
    return static_cast<int>(std::floor((T * N / std::numbers::pi - k / 4.0) * 4.0 / classes)) + 1;
}

/// sigma(k) in {1..classes} with k + sigma(k) = 1 (mod classes).
inline int sigma(int k, int classes = 4) {
    int s = ((1 - k) % classes + classes) % classes;
    return s == 0 ? classes : s;
}

/// Cells (k/4 pi/N, (k+1)/4 pi/N) + j (classes/4) pi/N, j = 0..j_max.
inline std::vector<std::pair<double, double>> comb_sets(const CombSpec& s) {
    s.validate();
    const double P = std::numbers::pi / s.N;
    std::vector<std::pair<double, double>> out;
    out.reserve(s.j_max + 1);
    for (int j = 0; j <= s.j_max; ++j) {
        const double step = j * s.classes / 4.0;
        const double a = (s.k / 4.0 + step) * P, b = ((s.k + 1) / 4.0 + step) * P;
        if (!out.empty()) hermconv::detail::require(a > out.back().second, "comb_sets: overlapping cells");
        out.emplace_back(a, b);
    }
    return out;
}

/// f_{k,m}(x) = g_{k,m}(-x) for x < 0, with g_{k,m}(y) = g(y - (m/4)(pi/N)) chi_{I_k}(y).
inline GridFunction comb_function(const GridFunction& g, const CombSpec& s) {
    for (double v : g.values()) hermconv::detail::require(v >= 0.0, "comb_function: g must be nonnegative");
    const GridFunction gc = to_cell_constant(g);
    const double shift = s.m / 4.0 * std::numbers::pi / s.N;
    struct Cell { double a, b, v; };
    std::vector<Cell> cells;  // in y, ascending
    for (const auto& [ca, cb] : comb_sets(s)) {
        std::vector<double> p{ca};
        for (double t : gc.nodes()) {
            const double u = t + shift;
            if (u > ca && u < cb) p.push_back(u);
        }
        p.push_back(cb);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const double v = gc(0.5 * (p[i] + p[i + 1]) - shift);
            if (v != 0.0) cells.push_back({p[i], p[i + 1], v});
        }
    }
    if (cells.empty()) return GridFunction::zero();
    std::vector<double> xs, vs;
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
        const double a = -it->b, b = -it->a;
        if (xs.empty()) xs.push_back(a);
        else if (a > xs.back()) {
            vs.push_back(0.0);
            xs.push_back(a);
        }
        vs.push_back(it->v);
        xs.push_back(b);
    }
    return GridFunction::cell_constant(std::move(xs), std::move(vs));
}

enum class MRange { lemma, proof };  // m = k-(c-1)..k, or m = 0..c-1

/// alternating: period pi/N, where sin(N(x+y)) flips sign from one cell to the next.
/// sign_consistent: period 2 pi/N with eight classes, so the sign is fixed on I_k.
enum class CombPeriod { alternating, sign_consistent };

/// Pointwise ratio sum_k sum_m |chi_n S_n(f_{k,m} chi_n)(x)| / Sg(x) on x_grid.
inline ConvergenceReport lower_bound_ratio(const GridFunction& g, int n, const hermite::TruncationSchedule& sched,
                                           const std::vector<double>& x_grid, MRange range = MRange::lemma,
                                           CombPeriod period = CombPeriod::alternating) {
    const int c = period == CombPeriod::alternating ? 4 : 8;
    const double N = n_frequency(n), T = sched.T(n);
    hermconv::detail::require(!x_grid.empty(), "lower_bound_ratio: empty x grid");
    for (double x : x_grid)
        hermconv::detail::require(x > std::numbers::pi / (4.0 * N) && x < T,
                                  "lower_bound_ratio: x grid must lie in (pi/(4N), T_n)");
    ConvergenceReport r;
    r.experiment = "lower_bound";
    r.columns = {"x", "Sg", "comb_sum", "ratio"};
    r.summary = {{"n", static_cast<double>(n)}, {"N", N}, {"T", T}};
    r.notes.push_back(range == MRange::lemma ? "m range k-(c-1)..k" : "m range 0..c-1");
    r.notes.push_back(period == CombPeriod::alternating ? "comb period pi/N" : "comb period 2pi/N");
    if (g.is_zero()) {
        r.notes.push_back("vacuous: g = 0");
        for (double x : x_grid) r.rows.push_back({x, 0.0, 0.0, std::nan("")});
        return r;
    }

    std::vector<std::pair<int, int>> km;
    for (int k = 1; k <= c; ++k)
        for (int m = (range == MRange::lemma ? k - c + 1 : 0); m <= (range == MRange::lemma ? k : c - 1); ++m)
            km.emplace_back(k, m);

    std::vector<std::vector<double>> vals(km.size());
    parallel_for(km.size(), [&](std::size_t i) {
        const auto [k, m] = km[i];
        const GridFunction f = comb_function(g, {N, k, m, comb_j_max(N, k, T, c), c});
        std::vector<double> v(x_grid.size(), 0.0);
        if (!f.is_zero()) {
            const hermite::Expansion e = hermite::expand(f, n, T);
            const hermite::PartialSum S(e);
            for (std::size_t j = 0; j < x_grid.size(); ++j) v[j] = std::abs(S(x_grid[j]));
        }
        vals[i] = std::move(v);
    });

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        double sum = 0.0;
        for (const auto& v : vals) sum += v[j];
        const double sg = operators::stieltjes(g, x_grid[j]);
        const double ratio = sg > 0.0 ? sum / sg : std::nan("");
        if (sg > 0.0) {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        r.rows.push_back({x_grid[j], sg, sum, ratio});
    }
    r.summary.emplace_back("min_ratio", lo);
    r.summary.emplace_back("max_ratio", hi);
    r.summary.emplace_back("pairs", static_cast<double>(km.size()));
    return r;
}

} // namespace hermconv::sansone
