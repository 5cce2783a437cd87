#pragma once

/// Young functions and Orlicz-space calculus: conjugates, modulars,
/// Luxemburg norms, fundamental functions, growth-condition scans and the
/// admissibility checks for a pair (A, B).
///
/// Every scan here is a finite-range heuristic. Reports carry the range
/// that was examined.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gridfn.hpp"
#include "report.hpp"

namespace hermconv::orlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct YoungFunction {
    std::function<double(double)> eval;
    std::string name;
    std::shared_ptr<const YoungFunction> closed_conjugate;
    std::function<double(double)> closed_inverse;
    bool finite_valued = true;

    double operator()(double t) const { return t <= 0.0 ? 0.0 : eval(t); }
};

/// A(0) = 0, nondecreasing, midpoint-convex on a log grid, not identically 0.
inline void validate(const YoungFunction& A, double lo = 1e-6, double hi = 1e6, int points = 601) {
    hermconv::detail::require(static_cast<bool>(A.eval), "young function: missing evaluator");
    hermconv::detail::require(A(0.0) == 0.0, A.name + ": A(0) must be 0");
    double prev = 0.0;
    bool nonzero = false;
    std::vector<double> t(points), v(points);
    for (int i = 0; i < points; ++i) {
        t[i] = lo * std::pow(hi / lo, i / (points - 1.0));
        v[i] = A(t[i]);
        hermconv::detail::require(!std::isnan(v[i]) && v[i] >= 0.0, A.name + ": values must be nonnegative");
        hermconv::detail::require(v[i] >= prev, A.name + ": must be nondecreasing");
        prev = v[i];
        nonzero = nonzero || v[i] > 0.0;
    }
    hermconv::detail::require(nonzero, A.name + ": must not vanish identically");
    for (int i = 0; i + 1 < points; ++i) {
        const double m = A(0.5 * (t[i] + t[i + 1]));
        const double avg = 0.5 * (v[i] + v[i + 1]);
        if (std::isinf(avg)) continue;
        hermconv::detail::require(m <= avg + 1e-9 * std::max(1.0, avg), A.name + ": fails midpoint convexity");
    }
}

// ---------------------------------------------------------------------------
// Conjugate

namespace detail {

inline double golden_max(const std::function<double(double)>& phi, double a, double b) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1e-300, std::abs(b)); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = phi(d);
        }
    }
    return std::max({fc, fd, phi(a), phi(b)});
}

inline const std::vector<double>& tau_grid() {
    static const std::vector<double> g = [] {
        std::vector<double> v{0.0};
        for (int i = 0; i < 400; ++i) v.push_back(1e-12 * std::pow(1e24, i / 399.0));
        return v;
    }();
    return g;
}

} // namespace detail

/// A~(t) = sup_{tau >= 0} (tau t - A(tau)).
inline double conjugate_numeric(const YoungFunction& A, double t) {
    if (t <= 0.0) return 0.0;
    const auto& tau = detail::tau_grid();
    std::vector<double> a(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) a[i] = A(tau[i]);
    std::size_t last = 0;
    while (last + 1 < tau.size() && std::isfinite(a[last + 1])) ++last;
    if (last + 1 == tau.size()) {
        // A finite on the whole grid: slope beyond the end is at least the last chord.
        const double slope = (a[last] - a[last - 1]) / (tau[last] - tau[last - 1]);
        if (t > slope) return kInf;
    }
    std::size_t best = 0;
    double best_v = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        const double v = tau[i] * t - a[i];
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    auto phi = [&](double s) {
        const double v = A(s);
        return std::isfinite(v) ? s * t - v : -kInf;
    };
    const double lo = best > 0 ? tau[best - 1] : 0.0;
    double hi = best < last ? tau[best + 1] : tau[best];
    if (best == last && last + 1 < tau.size()) {
        // Locate the edge of the finite domain between tau[last] and tau[last+1].
        double l = tau[last], r = tau[last + 1];
        for (int it = 0; it < 200 && r - l > 1e-15 * r; ++it) {
            const double m = 0.5 * (l + r);
            (std::isfinite(A(m)) ? l : r) = m;
        }
        hi = l;
        best_v = std::max(best_v, phi(l));
    }
    if (hi > lo) best_v = std::max(best_v, detail::golden_max(phi, lo, hi));
    return std::max(best_v, 0.0);
}

inline double conjugate(const YoungFunction& A, double t) {
    if (A.closed_conjugate) return (*A.closed_conjugate)(t);
    return conjugate_numeric(A, t);
}

/// A~ as a Young function (closed form when available, numeric otherwise).
inline YoungFunction conjugate_function(const YoungFunction& A) {
    if (A.closed_conjugate) return *A.closed_conjugate;
    auto src = std::make_shared<YoungFunction>(A);
    YoungFunction c;
    c.name = "conj(" + A.name + ")";
    c.eval = [src](double t) { return conjugate_numeric(*src, t); };
    c.finite_valued = false;  // unknown in general
    c.closed_conjugate = src; // A~~ = A for Young functions
    return c;
}

// ---------------------------------------------------------------------------
// Closed-form members

inline YoungFunction linear();
inline YoungFunction jump();

inline YoungFunction power(double p, double coef = 1.0) {
    hermconv::detail::require(p >= 1.0 && std::isfinite(p), "power: p must be >= 1");
    hermconv::detail::require(coef > 0.0 && std::isfinite(coef), "power: coefficient must be positive");
    YoungFunction A;
    std::ostringstream os;
    os << "power:" << p;
    if (coef != 1.0) os << "," << coef;
    A.name = os.str();
    A.eval = [p, coef](double t) { return coef * std::pow(t, p); };
    A.closed_inverse = [p, coef](double u) { return std::pow(u / coef, 1.0 / p); };
    auto c = std::make_shared<YoungFunction>();
    if (p == 1.0) {
        c->name = "conj(" + A.name + ")";
        c->eval = [coef](double s) { return s <= coef ? 0.0 : kInf; };
        c->finite_valued = false;
    } else {
        const double q = p / (p - 1.0);
        c->name = "conj(" + A.name + ")";
        c->eval = [p, q, coef](double s) { return (p - 1.0) * coef * std::pow(s / (coef * p), q); };
        c->closed_inverse = [p, q, coef](double u) { return coef * p * std::pow(u / ((p - 1.0) * coef), 1.0 / q); };
    }
    A.closed_conjugate = c;
    return A;
}

inline YoungFunction linear() {
    YoungFunction A = power(1.0);
    A.name = "linear";
    return A;
}

/// e^t - 1.
inline YoungFunction exponential() {
    YoungFunction A;
    A.name = "exp";
    A.eval = [](double t) { return std::expm1(t); };
    A.closed_inverse = [](double u) { return std::log1p(u); };
    auto c = std::make_shared<YoungFunction>();
    c->name = "conj(exp)";
    c->eval = [](double s) { return s <= 1.0 ? 0.0 : s * std::log(s) - s + 1.0; };
    A.closed_conjugate = c;
    return A;
}

/// 0 on [0, 1], infinity beyond (left-continuous).
inline YoungFunction jump() {
    YoungFunction A;
    A.name = "jump";
    A.eval = [](double t) { return t <= 1.0 ? 0.0 : kInf; };
    A.finite_valued = false;
    auto c = std::make_shared<YoungFunction>();
    c->name = "conj(jump)";
    c->eval = [](double s) { return s; };
    A.closed_conjugate = c;
    return A;
}

// ---------------------------------------------------------------------------
// Functions prescribed only near zero and near infinity

/// Branch `low` on (0, 1/e], `high` on [e, inf), linear bridge between; then
/// the largest convex minorant of log-grid samples on [1e-3, min(1e3, end of
/// finite range)], with the raw branches kept outside that window.
inline YoungFunction asymptotic(std::string name, std::function<double(double)> low,
                                std::function<double(double)> high) {
    const double t1 = std::exp(-1.0), t2 = std::exp(1.0);
    const double y1 = low(t1), y2 = high(t2);
    auto raw = [=](double t) {
        if (t <= 0.0) return 0.0;
        if (t <= t1) return low(t);
        if (t >= t2) return high(t);
        return y1 + (y2 - y1) * (t - t1) / (t2 - t1);
    };
    double hi = 1e3;
    if (!std::isfinite(raw(hi))) {
        double l = t2, r = hi;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + r);
            (std::isfinite(raw(m)) ? l : r) = m;
        }
        hi = l;
    }
    const double lo = 1e-3;
    constexpr int kSamples = 4000;
    std::vector<double> hx, hy;  // lower hull vertices
    for (int i = 0; i < kSamples; ++i) {
        const double x = (i == kSamples - 1) ? hi : lo * std::pow(hi / lo, i / (kSamples - 1.0));
        const double y = raw(x);
        while (hx.size() >= 2) {
            const std::size_t k = hx.size();
            // Drop the middle vertex if it lies on or above the chord.
            const double cross = (hx[k - 1] - hx[k - 2]) * (y - hy[k - 2]) - (hy[k - 1] - hy[k - 2]) * (x - hx[k - 2]);
            if (cross <= 0.0) {
                hx.pop_back();
                hy.pop_back();
            } else {
                break;
            }
        }
        hx.push_back(x);
        hy.push_back(y);
    }
    auto hull = std::make_shared<std::pair<std::vector<double>, std::vector<double>>>(std::move(hx), std::move(hy));
    YoungFunction A;
    A.name = std::move(name);
    A.eval = [raw, hull, lo, hi](double t) {
        if (t < lo || t > hi) return raw(t);
        const auto& [x, y] = *hull;
        auto it = std::upper_bound(x.begin(), x.end(), t);
        if (it == x.end()) return y.back();
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        if (i == 0) return y.front();
        return y[i - 1] + (y[i] - y[i - 1]) * (t - x[i - 1]) / (x[i] - x[i - 1]);
    };
    return A;
}

/// t^p (log 1/t)^{a0} near zero, t^p (log t)^{ainf} near infinity.
inline YoungFunction powerlog(double p, double a0, double ainf) {
    hermconv::detail::require(p > 1.0 && std::isfinite(p), "powerlog: p must be in (1, inf)");
    hermconv::detail::require(std::isfinite(a0) && std::isfinite(ainf), "powerlog: exponents must be finite");
    std::ostringstream os;
    os << "powerlog:" << p << "," << a0 << "," << ainf;
    return asymptotic(
        os.str(), [=](double t) { return std::pow(t, p) * std::pow(std::log(1.0 / t), a0); },
        [=](double t) { return std::pow(t, p) * std::pow(std::log(t), ainf); });
}

inline void check_llogl(double a0, double ainf) {
    hermconv::detail::require(a0 < -1.0 && std::isfinite(a0), "llogl: alpha0 must be < -1");
    hermconv::detail::require(ainf >= 0.0 && std::isfinite(ainf), "llogl: alpha_inf must be >= 0");
}

/// A = t (log 1/t)^{a0+1} near zero, t (log t)^{ainf+1} near infinity.
inline YoungFunction llogl_A(double a0, double ainf) {
    check_llogl(a0, ainf);
    std::ostringstream os;
    os << "llogl-A:" << a0 << "," << ainf;
    return asymptotic(
        os.str(), [=](double t) { return t * std::pow(std::log(1.0 / t), a0 + 1.0); },
        [=](double t) { return t * std::pow(std::log(t), ainf + 1.0); });
}

/// B = t (log 1/t)^{a0} near zero, t (log t)^{ainf} near infinity.
inline YoungFunction llogl_B(double a0, double ainf) {
    check_llogl(a0, ainf);
    std::ostringstream os;
    os << "llogl-B:" << a0 << "," << ainf;
    return asymptotic(
        os.str(), [=](double t) { return t * std::pow(std::log(1.0 / t), a0); },
        [=](double t) { return t * std::pow(std::log(t), ainf); });
}

inline void check_exp(double b0, double binf) {
    hermconv::detail::require(b0 > 0.0 && b0 < 1.0, "exppair: beta0 must be in (0, 1)");
    hermconv::detail::require(binf > 0.0 && std::isfinite(binf), "exppair: beta_inf must be positive");
}

/// A = exp(-t^{-b0}) near zero, exp(t^{binf}) near infinity.
inline YoungFunction exp_A(double b0, double binf) {
    check_exp(b0, binf);
    std::ostringstream os;
    os << "exp-A:" << b0 << "," << binf;
    return asymptotic(
        os.str(), [=](double t) { return std::exp(-std::pow(t, -b0)); },
        [=](double t) { return std::exp(std::pow(t, binf)); });
}

/// B = exp(-t^{-b0/(1-b0)}) near zero, exp(t^{binf/(1+binf)}) near infinity.
inline YoungFunction exp_B(double b0, double binf) {
    check_exp(b0, binf);
    std::ostringstream os;
    os << "exp-B:" << b0 << "," << binf;
    const double g0 = b0 / (1.0 - b0), ginf = binf / (1.0 + binf);
    return asymptotic(
        os.str(), [=](double t) { return std::exp(-std::pow(t, -g0)); },
        [=](double t) { return std::exp(std::pow(t, ginf)); });
}

enum class Role { A, B };

/// Parses "name:params". In role B, "llogl" and "exppair" select the B member.
inline YoungFunction parse_spec(const std::string& spec, Role role = Role::A) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                args.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw config_error("young function spec: bad number '" + item + "' in " + spec);
            }
        }
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi) throw config_error("young function spec: wrong parameter count in " + spec);
    };
    try {
        if (name == "power") { need(1, 2); return power(args[0], args.size() > 1 ? args[1] : 1.0); }
        if (name == "powerlog") { need(3, 3); return powerlog(args[0], args[1], args[2]); }
        if (name == "llogl") { need(2, 2); return role == Role::A ? llogl_A(args[0], args[1]) : llogl_B(args[0], args[1]); }
        if (name == "llogl-A") { need(2, 2); return llogl_A(args[0], args[1]); }
        if (name == "llogl-B") { need(2, 2); return llogl_B(args[0], args[1]); }
        if (name == "exppair") { need(2, 2); return role == Role::A ? exp_A(args[0], args[1]) : exp_B(args[0], args[1]); }
        if (name == "exp-A") { need(2, 2); return exp_A(args[0], args[1]); }
        if (name == "exp-B") { need(2, 2); return exp_B(args[0], args[1]); }
        if (name == "linear") { need(0, 0); return linear(); }
        if (name == "exp") { need(0, 0); return exponential(); }
        if (name == "jump") { need(0, 0); return jump(); }
    } catch (const invalid_input& e) {
        throw config_error(std::string("young function spec: ") + e.what());
    }
    throw config_error("young function spec: unknown name '" + name + "'");
}

inline std::vector<YoungFunction> catalog() {
    return {power(2.0), power(1.5), power(3.0), linear(), exponential(), jump(),
            powerlog(2.0, 1.0, 1.0), llogl_A(-2.0, 0.0), llogl_B(-2.0, 0.0), exp_A(0.5, 1.0), exp_B(0.5, 1.0)};
}

// ---------------------------------------------------------------------------
// Modular, norm, fundamental function

/// int A(|f|); infinity as soon as A(|f|) is infinite on a set of positive measure.
inline double modular(const YoungFunction& A, const GridFunction& f, const quad::QuadratureSpec& spec = {}) {
    if (f.interp() == Interp::cell_constant) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.cells(); ++i) {
            const double v = std::abs(f.values()[i]);
            if (v == 0.0) continue;
            s += A(v) * (f.nodes()[i + 1] - f.nodes()[i]);
        }
        return s;
    }
    return integrate_composed(f, [&](double, double v) { return A(std::abs(v)); }, spec);
}

/// inf{lambda > 0 : int A(|f|/lambda) <= 1}; infinity when no lambda in range works.
inline double luxemburg_norm(const YoungFunction& A, const GridFunction& f) {
    if (f.is_zero()) return 0.0;
    auto ok = [&](double lam) { return modular(A, f.scaled(1.0 / lam)) <= 1.0; };
    double hi = std::max(f.sup_abs(), 1e-300);
    int guard = 0;
    while (!ok(hi)) {
        hi *= 2.0;
        if (++guard > 2000 || !std::isfinite(hi)) return kInf;
    }
    double lo = hi;
    guard = 0;
    while (ok(lo)) {
        lo *= 0.5;
        if (++guard > 2000 || lo == 0.0) return 0.0;
    }
    while (hi - lo > 1e-13 * hi) {
        const double m = 0.5 * (lo + hi);
        (ok(m) ? hi : lo) = m;
    }
    return hi;
}

/// Right-continuous generalised inverse sup{tau : A(tau) <= u}.
inline double inverse(const YoungFunction& A, double u) {
    if (A.closed_inverse) return A.closed_inverse(u);
    if (u < 0.0) return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (A(hi) <= u) {
        hi *= 2.0;
        if (++guard > 2100) return kInf;
    }
    double lo = hi;
    guard = 0;
    while (lo > 0.0 && A(lo) > u) {
        lo *= 0.5;
        if (++guard > 2100) return 0.0;
    }
    while (hi - lo > 1e-15 * hi) {
        const double m = 0.5 * (lo + hi);
        (A(m) <= u ? lo : hi) = m;
    }
    return lo;
}

/// phi_A(t) = 1 / A^{-1}(1/t).
inline double fundamental(const YoungFunction& A, double t) {
    hermconv::detail::require(t > 0.0, "fundamental: t must be positive");
    return 1.0 / inverse(A, 1.0 / t);
}

/// Membership of f in E^A: finite modular for every tested scaling c = 2^0..2^20.
inline ConditionReport in_EA(const YoungFunction& A, const GridFunction& f) {
    ConditionReport r;
    r.name = "E^A membership";
    r.metrics = {{"c_min", 1.0}, {"c_max", std::ldexp(1.0, 20)}};
    for (int j = 0; j <= 20; ++j) {
        const double c = std::ldexp(1.0, j);
        const double m = modular(A, f.scaled(c));
        if (!std::isfinite(m)) {
            r.verdict = Verdict::fail;
            r.witness = Witness{c, m, kInf};
            r.add_note("modular infinite at c = 2^" + std::to_string(j));
            return r;
        }
    }
    r.verdict = Verdict::pass;
    r.add_note("finite modular for c in 2^0..2^20 (membership for all c is not decidable on a finite scan)");
    return r;
}

// ---------------------------------------------------------------------------
// Growth conditions

inline std::vector<double> log_grid(double lo, double hi, int per_decade) {
    const int n = static_cast<int>(std::round(std::log10(hi / lo) * per_decade));
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = lo * std::pow(10.0, static_cast<double>(i) / per_decade);
    return t;
}

namespace detail {

struct RatioScan {
    double sup = 0.0;
    Witness at;
    bool unbounded = false;
};

inline RatioScan delta2_ratio(const YoungFunction& A, const std::vector<double>& grid) {
    RatioScan s;
    for (double t : grid) {
        const double a = A(t), b = A(2.0 * t);
        double r;
        if (a == 0.0 && b == 0.0) continue;
        if (a == 0.0 || !std::isfinite(b)) r = kInf;
        else r = b / a;
        if (!std::isfinite(r)) {
            if (!s.unbounded || t > s.at.t) s.at = {t, b, a};
            s.unbounded = true;
            s.sup = kInf;
        } else if (!s.unbounded && r >= s.sup) {
            s.sup = r;
            s.at = {t, b, a};
        }
    }
    return s;
}

} // namespace detail

/// Delta_2: sup A(2t)/A(t) on [lo, hi], compared with the scan extended tenfold on each end.
inline ConditionReport delta2_scan(const YoungFunction& A, double lo = 1e-6, double hi = 1e6) {
    ConditionReport r;
    r.name = "Delta_2";
    const auto base = detail::delta2_ratio(A, log_grid(lo, hi, 8));
    const auto ext = detail::delta2_ratio(A, log_grid(lo / 10.0, hi * 10.0, 8));
    r.metrics = {{"t_lo", lo}, {"t_hi", hi}, {"base_sup", base.sup}, {"extended_sup", ext.sup}};
    if (base.unbounded || ext.unbounded) {
        r.verdict = Verdict::fail;
        r.witness = base.unbounded ? base.at : ext.at;
        r.add_note("ratio A(2t)/A(t) infinite on the scanned grid");
    } else if (ext.sup > 10.0 * base.sup) {
        r.verdict = Verdict::fail;
        r.witness = ext.at;
        r.add_note("ratio grows by more than 10x when the grid is extended");
    } else if (ext.sup <= 1.05 * base.sup) {
        r.verdict = Verdict::pass;
        r.fitted_constant = ext.sup;
    } else {
        r.verdict = Verdict::inconclusive;
        r.witness = ext.at;
        r.fitted_constant = ext.sup;
        r.add_note("ratio still drifting at the edge of the scanned range");
    }
    return r;
}

/// nabla_2: smallest c in 2^1..2^20 with A(ct) >= 2c A(t) on the grid.
inline ConditionReport nabla2_scan(const YoungFunction& A, double lo = 1e-6, double hi = 1e6) {
    ConditionReport r;
    r.name = "nabla_2";
    r.metrics = {{"t_lo", lo}, {"t_hi", hi}};
    auto worst = [&](double c, const std::vector<double>& grid, Witness& w) {
        double m = kInf;
        for (double t : grid) {
            const double a = A(t);
            if (a == 0.0) continue;
            const double q = A(c * t) / (2.0 * c * a);
            if (q < m) {
                m = q;
                w = {t, 2.0 * c * a, A(c * t)};
            }
        }
        return m;
    };
    const auto base = log_grid(lo, hi, 8), ext = log_grid(lo / 10.0, hi * 10.0, 8);
    Witness w_fail;
    for (int j = 1; j <= 20; ++j) {
        const double c = std::ldexp(1.0, j);
        Witness w;
        if (worst(c, base, w) >= 1.0) {
            Witness we;
            r.fitted_constant = c;
            if (worst(c, ext, we) >= 1.0) {
                r.verdict = Verdict::pass;
            } else {
                r.verdict = Verdict::inconclusive;
                r.witness = we;
                r.add_note("c that works on the base grid fails on the extended grid");
            }
            return r;
        }
        if (j == 20) w_fail = w;
    }
    r.verdict = Verdict::fail;
    r.witness = w_fail;
    r.add_note("no c in 2^1..2^20 satisfies A(ct) >= 2c A(t)");
    return r;
}

// ---------------------------------------------------------------------------
// Integral conditions  int_0^t F(s)/s^2 ds <= G(Kt)/t

namespace detail {

struct Cumulative {
    std::vector<double> value;  // int_0^{t_i} F(s)/s^2 ds
    bool divergent_at_zero = false;
    double max_ratio = 0.0;
    double probe = 0.0;  // smallest dyadic point examined
};

inline double piece(const std::function<double(double)>& F, double a, double b, int panels = 1) {
    double s = 0.0;
    const double r = std::pow(b / a, 1.0 / panels);
    double lo = a;
    const quad::QuadratureSpec spec = quad::QuadratureSpec::for_frequency(0.0, 8);
    for (int p = 0; p < panels; ++p) {
        const double hi = p + 1 == panels ? b : lo * r;
        quad::for_each_node(lo, hi, spec, [&](double x, double w) {
            const double v = F(x);
            if (v != 0.0) s += w * v / (x * x);
        });
        lo = hi;
    }
    return s;
}

/// Dyadic pieces toward 0 decide convergence (max ratio of consecutive pieces
/// over levels 20..39 below 0.99); the value at t_0 sums 60 levels plus a
/// geometric tail, then the integral is carried cumulatively along the grid.
inline Cumulative cumulative(const std::function<double(double)>& F, const std::vector<double>& t) {
    Cumulative c;
    const double t0 = t.front();
    std::vector<double> P(60);
    for (int j = 0; j < 60; ++j) P[j] = piece(F, std::ldexp(t0, -j - 1), std::ldexp(t0, -j), 2);
    c.probe = std::ldexp(t0, -40);
    for (int j = 20; j < 39; ++j) {
        if (!std::isfinite(P[j]) || !std::isfinite(P[j + 1])) {
            c.max_ratio = kInf;
            continue;
        }
        if (P[j] > 0.0) c.max_ratio = std::max(c.max_ratio, P[j + 1] / P[j]);
    }
    c.divergent_at_zero = c.max_ratio >= 0.99;
    double I = 0.0;
    for (double p : P) I += p;
    if (P[58] > 0.0 && P[59] < P[58]) {
        const double r = P[59] / P[58];
        I += P[59] * r / (1.0 - r);
    }
    if (c.divergent_at_zero) I = kInf;
    c.value.push_back(I);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        I += piece(F, t[i], t[i + 1], 16);
        c.value.push_back(I);
    }
    return c;
}

struct KScan {
    bool ok = true;
    double K = 0.0;
    Witness witness;
    int skipped = 0;
};

/// Smallest K in [2^-20, 2^20] with lhs_i <= G(K t_i)/t_i at every grid point.
inline KScan minimal_K(const std::vector<double>& t, const std::vector<double>& lhs,
                       const std::function<double(double)>& G, bool lhs_overflow_skippable) {
    KScan s;
    s.K = std::ldexp(1.0, -20);
    auto holds = [&](double K, std::size_t i) {
        const double rhs = G(K * t[i]) / t[i];
        if (std::isinf(rhs)) return true;
        return lhs[i] <= rhs * (1.0 + 1e-9) + 1e-300;
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::isinf(lhs[i]) && lhs_overflow_skippable) {
            ++s.skipped;
            continue;
        }
        if (holds(s.K, i)) continue;
        if (!holds(std::ldexp(1.0, 20), i)) {
            if (s.ok) s.witness = {t[i], lhs[i], G(std::ldexp(1.0, 20) * t[i]) / t[i]};
            s.ok = false;
            continue;
        }
        double lo = std::log2(s.K), hi = 20.0;
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (lo + hi);
            (holds(std::exp2(m), i) ? hi : lo) = m;
        }
        s.K = std::exp2(hi);
    }
    return s;
}

} // namespace detail

struct IntegralConditionOptions {
    double t_lo = 1e-8, t_hi = 1e8;
    int per_decade = 4;
};

/// int_0^t F(s)/s^2 ds <= G(Kt)/t for all grid t, with K minimal over 2^-20..2^20.
inline ConditionReport integral_condition(const std::string& name, const YoungFunction& F, const YoungFunction& G,
                                          const IntegralConditionOptions& o = {}) {
    ConditionReport r;
    r.name = name;
    r.metrics = {{"t_lo", o.t_lo}, {"t_hi", o.t_hi}};
    std::function<double(double)> f = [&](double s) { return F(s); };
    std::function<double(double)> g = [&](double s) { return G(s); };
    auto run = [&](double lo, double hi, detail::KScan& ks, detail::Cumulative& cum) {
        const auto t = log_grid(lo, hi, o.per_decade);
        cum = detail::cumulative(f, t);
        ks = detail::minimal_K(t, cum.value, g, F.finite_valued);
        return t;
    };
    detail::KScan base, ext;
    detail::Cumulative cb, ce;
    run(o.t_lo, o.t_hi, base, cb);
    if (cb.divergent_at_zero) {
        r.verdict = Verdict::fail;
        r.witness = Witness{cb.probe, kInf, G(std::ldexp(1.0, 20) * cb.probe) / cb.probe};
        r.add_note("int_0^t F(s)/s^2 ds diverges at 0 (dyadic piece ratio " + std::to_string(cb.max_ratio) + ")");
        return r;
    }
    if (!base.ok) {
        r.verdict = Verdict::fail;
        r.witness = base.witness;
        r.add_note("no K in 2^-20..2^20 works at the witness t");
        return r;
    }
    if (base.skipped > 0) r.add_note(std::to_string(base.skipped) + " grid points skipped: lhs overflowed while F is finite");
    run(o.t_lo / 10.0, o.t_hi * 10.0, ext, ce);
    r.fitted_constant = base.K;
    r.metrics.emplace_back("K_extended", ext.K);
    if (ce.divergent_at_zero || !ext.ok || ext.K > 1.05 * base.K) {
        r.verdict = Verdict::inconclusive;
        if (!ext.ok) r.witness = ext.witness;
        r.add_note("constant not stable when the t range is extended tenfold");
    } else {
        r.verdict = Verdict::pass;
    }
    return r;
}

/// B(t) <= A(ct) for some c in 2^-20..2^20 on the grid.
inline ConditionReport domination(const YoungFunction& A, const YoungFunction& B,
                                  const IntegralConditionOptions& o = {}) {
    ConditionReport r;
    r.name = "domination";
    r.metrics = {{"t_lo", o.t_lo}, {"t_hi", o.t_hi}};
    auto scan = [&](const std::vector<double>& t, double& c, std::optional<Witness>& bad) {
        c = std::ldexp(1.0, -20);
        for (double x : t) {
            const double b = B(x);
            auto holds = [&](double cc) { return b <= A(cc * x) * (1.0 + 1e-12); };
            if (holds(c)) continue;
            if (!holds(std::ldexp(1.0, 20))) {
                if (!bad) bad = Witness{x, b, A(std::ldexp(1.0, 20) * x)};
                continue;
            }
            double lo = std::log2(c), hi = 20.0;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (lo + hi);
                (holds(std::exp2(m)) ? hi : lo) = m;
            }
            c = std::exp2(hi);
        }
    };
    double c = 0.0, ce = 0.0;
    std::optional<Witness> bad, bade;
    scan(log_grid(o.t_lo, o.t_hi, o.per_decade), c, bad);
    if (bad) {
        r.verdict = Verdict::fail;
        r.witness = bad;
        return r;
    }
    scan(log_grid(o.t_lo / 10.0, o.t_hi * 10.0, o.per_decade), ce, bade);
    r.fitted_constant = c;
    r.metrics.emplace_back("c_extended", ce);
    r.verdict = (!bade && ce <= 1.05 * c) ? Verdict::pass : Verdict::inconclusive;
    if (r.verdict == Verdict::inconclusive) r.add_note("constant not stable when the t range is extended tenfold");
    return r;
}

/// int_0^inf B(kappa log(1 + 1/t)) dt < infinity for some kappa in 2^-20..2^20,
/// decided by dyadic pieces toward 0 and toward infinity.
inline ConditionReport check_log_membership(const YoungFunction& B) {
    ConditionReport r;
    r.name = "log-integrability";
    r.metrics = {{"kappa_min", std::ldexp(1.0, -20)}, {"kappa_max", std::ldexp(1.0, 20)}};
    const quad::QuadratureSpec spec = quad::QuadratureSpec::for_frequency(0.0, 8);
    struct Outcome {
        bool finite;
        double ratio;
        Witness w;
    };
    auto test = [&](double kappa) {
        auto piece = [&](int j) {
            double s = 0.0;
            quad::for_each_node(std::ldexp(1.0, j), std::ldexp(1.0, j + 1), spec, [&](double t, double w) {
                s += w * B(kappa * std::log1p(1.0 / t));
            });
            return s;
        };
        Outcome out{true, 0.0, {}};
        auto side = [&](int dir) {
            std::vector<double> P(40);
            for (int j = 0; j < 40; ++j) P[j] = piece(dir * j);
            for (int j = 20; j < 39; ++j) {
                double q;
                if (!std::isfinite(P[j + 1]) || !std::isfinite(P[j])) q = kInf;
                else if (P[j] > 0.0) q = P[j + 1] / P[j];
                else continue;
                if (q > out.ratio) {
                    out.ratio = q;
                    out.w = {std::ldexp(1.0, dir * (j + 1)), P[j + 1], P[j]};
                }
            }
        };
        side(-1);
        side(+1);
        out.finite = out.ratio < 0.99;
        return out;
    };
    std::optional<Outcome> first_fail;
    double best = 0.0;
    for (int j = -20; j <= 20; ++j) {
        const double kappa = std::ldexp(1.0, j);
        const auto o = test(kappa);
        if (o.finite) best = kappa;
        else if (!first_fail) first_fail = o;
    }
    if (best > 0.0) {
        r.verdict = Verdict::pass;
        r.fitted_constant = best;
        r.add_note("largest passing kappa reported");
    } else {
        r.verdict = Verdict::fail;
        r.witness = first_fail->w;
        r.add_note("dyadic pieces fail to decay for every kappa");
    }
    return r;
}

inline Verdict combine_verdicts(const std::vector<ConditionReport>& parts) {
    bool any_fail = false, all_pass = true;
    for (const auto& p : parts) {
        any_fail = any_fail || p.verdict == Verdict::fail;
        all_pass = all_pass && p.verdict == Verdict::pass;
    }
    return any_fail ? Verdict::fail : (all_pass ? Verdict::pass : Verdict::inconclusive);
}

/// Hypotheses and condition (ii) for a pair (A, B):
///   B(t) <= A(ct); int_0^t B(s)/s^2 <= A(Kt)/t; int_0^t A~(s)/s^2 <= B~(Kt)/t;
///   int_0^inf B(kappa log(1+1/t)) dt < infinity.
inline ConditionReport check_pair(const YoungFunction& A, const YoungFunction& B,
                                  const IntegralConditionOptions& o = {}) {
    hermconv::detail::require(A.finite_valued, "check_pair: A must be finite-valued");
    ConditionReport r;
    r.name = "pair(" + A.name + ", " + B.name + ")";
    const YoungFunction At = conjugate_function(A), Bt = conjugate_function(B);
    r.children.push_back(domination(A, B, o));
    r.children.push_back(integral_condition("B-integral", B, A, o));
    r.children.push_back(integral_condition("conjugate-integral", At, Bt, o));
    r.children.push_back(check_log_membership(B));
    r.verdict = combine_verdicts(r.children);
    for (const auto& c : r.children)
        if (c.verdict == Verdict::fail && !r.witness) {
            r.witness = c.witness;
            r.add_note("failed: " + c.name);
        }
    const auto& k1 = r.children[1].fitted_constant;
    const auto& k2 = r.children[2].fitted_constant;
    if (k1 && k2) r.fitted_constant = std::max(*k1, *k2);
    return r;
}

} // namespace hermconv::orlicz
