#include "catch_amalgamated.hpp"

#include <hermconv/corpus.hpp>
#include <hermconv/gridfn.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace hermconv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("evaluation outside the support is zero", "[gridfn]") {
    const auto f = GridFunction::cell_constant({0.0, 1.0, 3.0}, {3.0, 1.0});
    CHECK(f(-0.5) == 0.0);
    CHECK(f(3.0) == 0.0);
    CHECK(f(7.0) == 0.0);
    CHECK(f(0.0) == 3.0);
    CHECK(f(1.0) == 1.0);
    const auto g = GridFunction::piecewise_linear({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    CHECK(g(0.5) == 0.5);
    CHECK(g(1.5) == 0.0);
}

TEST_CASE("construction rejects bad grids", "[gridfn]") {
    CHECK_THROWS_AS(GridFunction::cell_constant({0.0, 0.0}, {1.0}), invalid_input);
    CHECK_THROWS_AS(GridFunction::cell_constant({0.0, 1.0}, {std::nan("")}), invalid_input);
    CHECK_THROWS_AS(GridFunction::cell_constant({0.0, 1.0}, {INFINITY}), invalid_input);
    CHECK_THROWS_AS(GridFunction::cell_constant({-1.0, 1.0}, {1.0}, DomainKind::half_line), invalid_input);
}

TEST_CASE("integrate", "[gridfn]") {
    CHECK(integrate(GridFunction::indicator(0.0, 1.0)) == 1.0);
    CHECK(integrate(GridFunction::zero()) == 0.0);

    const double two_pi = 2.0 * std::numbers::pi;
    const auto s = GridFunction::sample([](double x) { return std::sin(50.0 * x); }, 0.0, two_pi, 4000,
                                        Interp::piecewise_linear);
    CHECK(std::abs(integrate(s, quad::QuadratureSpec::for_frequency(50.0))) <= 1e-10);

    // Composite Gauss against the antiderivative of sin(50x), and a non-symmetric window.
    auto spec = quad::QuadratureSpec::for_frequency(50.0);
    const double full = quad::integrate([](double x) { return std::sin(50.0 * x); }, 0.0, two_pi, spec);
    CHECK(std::abs(full) <= 1e-10);
    const double part = quad::integrate([](double x) { return std::sin(50.0 * x); }, 0.1, 1.3, spec);
    CHECK_THAT(part, WithinAbs((std::cos(5.0) - std::cos(65.0)) / 50.0, 1e-12));

    CHECK(integrate(s, spec) == integrate(s, spec));
}

TEST_CASE("quadrature configuration errors", "[gridfn]") {
    auto f = [](double x) { return std::exp(-x); };
    CHECK_THROWS_AS(quad::integrate(f, 0.0, INFINITY), config_error);
    CHECK_THAT(quad::integrate(f, 0.0, INFINITY, quad::QuadratureSpec::tail()), WithinRel(1.0, 1e-12));
    // log(1 + 1/t) has an integrable singularity at 0 and a 1/t^2 tail: int_0^inf log(1+1/t)/(1+t) dt = pi^2/6.
    auto g = [](double t) { return std::log1p(1.0 / t) / (1.0 + t); };
    CHECK_THAT(quad::integrate(g, 0.0, INFINITY, quad::QuadratureSpec::tail()),
               WithinRel(std::numbers::pi * std::numbers::pi / 6.0, 1e-10));
    quad::QuadratureSpec bad;
    bad.points_per_panel = 0;
    CHECK_THROWS_AS(quad::integrate(f, 0.0, 1.0, bad), config_error);
}

TEST_CASE("panel width stays below a quarter wavelength", "[gridfn]") {
    for (double freq : {0.5, 3.0, 50.0, 1234.5}) {
        auto spec = quad::QuadratureSpec::for_frequency(freq);
        for (double len : {0.001, 0.7, 2.0, 13.0}) {
            const double width = len / spec.panels_for(len);
            CHECK(width <= 0.25 * 2.0 * std::numbers::pi / freq * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("gauss rules integrate polynomials exactly", "[gridfn]") {
    for (int m : {1, 2, 5, 8, 16, 33, 64}) {
        const auto& r = quad::gauss_legendre(m);
        for (int d = 0; d <= 2 * m - 1 && d <= 60; ++d) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK_THAT(s, WithinAbs(exact, 1e-13));
        }
    }
}

TEST_CASE("lp_norm", "[gridfn]") {
    CHECK_THAT(lp_norm(GridFunction::indicator(0.0, 4.0), 2.0), WithinRel(2.0, 1e-15));
    CHECK(lp_norm(GridFunction::zero(), 3.0) == 0.0);
    CHECK_THAT(lp_norm(corpus::triangle(), 1.0), WithinRel(1.0, 1e-14));
    // int_{-1}^{1} (1-|x|)^p = 2/(p+1)
    for (double p : {1.2, 2.0, 6.0})
        CHECK_THAT(lp_norm(corpus::triangle(), p), WithinRel(std::pow(2.0 / (p + 1.0), 1.0 / p), 1e-8));
    CHECK_THROWS_AS(lp_norm(corpus::triangle(), 0.5), invalid_input);

    // Sign change inside a linear cell: int_0^1 |2x-1|^p dx = 1/(p+1)
    const auto s = GridFunction::piecewise_linear({0.0, 1.0}, {-1.0, 1.0});
    CHECK_THAT(lp_norm(s, 1.5), WithinRel(std::pow(1.0 / 2.5, 1.0 / 1.5), 1e-12));
}

TEST_CASE("rearrangement of simple functions", "[gridfn]") {
    const auto a = rearrangement(GridFunction::cell_constant({0.0, 1.0, 3.0}, {3.0, 1.0}));
    CHECK(a.domain_kind() == DomainKind::half_line);
    CHECK(a.nodes() == std::vector<double>{0.0, 1.0, 3.0});
    CHECK(a.values() == std::vector<double>{3.0, 1.0, 0.0});

    const auto b = rearrangement(GridFunction::cell_constant({0.0, 2.0, 5.0, 6.0}, {1.0, 0.0, 3.0}));
    CHECK(b.nodes() == std::vector<double>{0.0, 1.0, 3.0});
    CHECK(b.values() == std::vector<double>{3.0, 1.0, 0.0});

    CHECK(rearrangement(GridFunction::zero()).is_zero());
    const auto c = rearrangement(GridFunction::indicator(-1.0, 1.0, -2.0));
    CHECK(c.nodes() == std::vector<double>{0.0, 2.0});
    CHECK(c.values().front() == 2.0);
}

TEST_CASE("rearrangement is equimeasurable on random functions", "[gridfn]") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = corpus::random_cell_constant(rng);
        const auto fs = rearrangement(f);

        for (std::size_t i = 0; i + 2 < fs.nodes().size(); ++i) CHECK(fs.values()[i] >= fs.values()[i + 1]);

        // Oracle: sorted list of (|v|, width) pairs built independently.
        std::vector<std::pair<double, double>> cells;
        for (std::size_t i = 0; i < f.cells(); ++i)
            cells.emplace_back(std::abs(f.values()[i]), f.nodes()[i + 1] - f.nodes()[i]);
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
            double s = 0.0;
            for (auto [v, w] : cells) s += std::pow(v, p) * w;
            CHECK_THAT(lp_norm(fs, p), WithinRel(std::pow(s, 1.0 / p), 1e-12));
            CHECK_THAT(lp_norm(fs, p), WithinRel(lp_norm(f, p), 1e-12));
        }
        const double top = f.sup_abs();
        for (int j = 0; j < 64; ++j) {
            const double lam = top * j / 64.0;
            double m = 0.0;
            for (auto [v, w] : cells)
                if (v > lam) m += w;
            CHECK_THAT(distribution(fs, lam), WithinAbs(m, 1e-12));
            CHECK_THAT(distribution(f, lam), WithinAbs(m, 1e-12));
        }
    }
}

TEST_CASE("rearrangement of piecewise-linear input resamples first", "[gridfn]") {
    const auto t = corpus::triangle();
    const auto ts = rearrangement(t);
    // f*(s) of the triangle is 1 - s/2 on (0, 2); the 4x resample has 8 cells
    // whose values pair up, leaving 4 levels.
    CHECK(ts.cells() == 4);
    CHECK_THAT(ts.nodes().back(), WithinAbs(2.0, 1e-15));
    for (double s : {0.1, 0.7, 1.3, 1.9}) CHECK_THAT(ts(s), WithinAbs(1.0 - s / 2.0, 0.125));
    CHECK_THAT(lp_norm(ts, 1.0), WithinRel(1.0, 1e-14));
}

TEST_CASE("dilation", "[gridfn]") {
    const auto f = GridFunction::indicator(0.0, 1.0);
    const auto d = dilate(f, 2.0);
    CHECK(d.nodes() == std::vector<double>{0.0, 2.0});
    CHECK(dilate(f, 1.0).nodes() == f.nodes());
    CHECK_THROWS_AS(dilate(f, 0.0), invalid_input);
    CHECK_THROWS_AS(dilate(f, -1.0), invalid_input);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = corpus::random_cell_constant(rng);
        for (double a : {0.25, 0.5, 2.0, 4.0})
            for (double p : {1.0, 2.0, 3.5}) {
                const double lhs = lp_norm(dilate(g, a), p);
                CHECK_THAT(lhs, WithinRel(std::pow(a, 1.0 / p) * lp_norm(g, p), 1e-10));
                CHECK(lhs <= std::max(1.0, a) * lp_norm(g, p) * (1.0 + 1e-12));
            }
    }
}

TEST_CASE("integrate is linear", "[gridfn]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = corpus::random_cell_constant(rng);
        const auto g = corpus::random_cell_constant(rng);
        const double a = coef(rng), b = coef(rng);
        const double scale = std::max({1.0, std::abs(integrate(f)), std::abs(integrate(g))});
        const double err = std::abs(integrate(combine(a, f, b, g)) - a * integrate(f) - b * integrate(g));
        CHECK(err <= 1e-12 * (std::abs(a) + std::abs(b)) * scale);
    }
}

TEST_CASE("random corpus is seed-determined", "[gridfn]") {
    std::mt19937_64 r1(5), r2(5);
    const auto a = corpus::random_cell_constant(r1);
    const auto b = corpus::random_cell_constant(r2);
    CHECK(a.nodes() == b.nodes());
    CHECK(a.values() == b.values());
}
