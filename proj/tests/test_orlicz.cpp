#include "catch_amalgamated.hpp"

#include <hermconv/corpus.hpp>
#include <hermconv/orlicz.hpp>

#include <cmath>
#include <random>

using namespace hermconv;
using namespace hermconv::orlicz;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

YoungFunction numeric_only(YoungFunction A) {
    A.closed_conjugate.reset();
    A.closed_inverse = nullptr;
    return A;
}

} // namespace

TEST_CASE("catalog members are Young functions") {
    for (const auto& A : catalog()) {
        INFO(A.name);
        REQUIRE_NOTHROW(validate(A));
    }
    YoungFunction concave;
    concave.name = "sqrt";
    concave.eval = [](double t) { return std::sqrt(t); };
    REQUIRE_THROWS_AS(validate(concave), invalid_input);
}

TEST_CASE("conjugate against closed-form Legendre transforms") {
    // t^2/2 is self-conjugate; t^3/3 has conjugate t^{3/2}/(3/2).
    const auto half = numeric_only(power(2.0, 0.5));
    const auto third = numeric_only(power(3.0, 1.0 / 3.0));
    for (double t : {1e-3, 0.1, 0.5, 1.0, 2.0, 7.0, 100.0}) {
        CHECK_THAT(conjugate(half, t), WithinRel(t * t / 2.0, 1e-8));
        CHECK_THAT(conjugate(third, t), WithinRel(std::pow(t, 1.5) / 1.5, 1e-8));
        CHECK_THAT(conjugate(power(3.0, 1.0 / 3.0), t), WithinRel(std::pow(t, 1.5) / 1.5, 1e-12));
    }
    const auto lin = numeric_only(linear());
    CHECK(conjugate(lin, 0.5) == 0.0);
    CHECK(conjugate(lin, 1.0) == 0.0);
    CHECK(std::isinf(conjugate(lin, 1.5)));
    const auto e = numeric_only(exponential());
    for (double s : {0.5, 2.0, 10.0}) CHECK_THAT(conjugate(e, s), WithinAbs(conjugate(exponential(), s), 1e-9));
    // The jump function's conjugate is the identity; the finite-domain edge is located exactly.
    CHECK_THAT(conjugate(numeric_only(jump()), 3.0), WithinRel(3.0, 1e-12));
}

TEST_CASE("Young inequality and involution") {
    for (const auto& A : {powerlog(2.0, 1.0, 1.0), llogl_A(-2.0, 0.0), exp_B(0.5, 1.0)}) {
        INFO(A.name);
        const auto At = conjugate_function(A);
        for (double s : {1e-3, 0.1, 1.0, 5.0})
            for (double t : {1e-2, 0.3, 1.0, 4.0}) {
                const double rhs = A(s) + At(t);
                CHECK(s * t <= rhs * (1.0 + 1e-9) + 1e-300);
            }
        const auto Att = conjugate_function(numeric_only(At));
        for (double t : {0.05, 0.5, 1.0, 3.0}) CHECK_THAT(Att(t), WithinAbs(A(t), 1e-6 * (1.0 + A(t))));
    }
}

TEST_CASE("modular") {
    const auto sq = power(2.0);
    CHECK(modular(sq, GridFunction::zero(DomainKind::real_line)) == 0.0);
    CHECK_THAT(modular(sq, GridFunction::indicator(0.0, 4.0, 1.0)), WithinRel(4.0, 1e-15));
    CHECK(std::isinf(modular(jump(), GridFunction::indicator(0.0, 1.0, 2.0))));
    CHECK(modular(jump(), GridFunction::indicator(0.0, 1.0, 1.0)) == 0.0);
    // Piecewise-linear triangle: int (1-|x|)^2 = 2/3.
    CHECK_THAT(modular(sq, corpus::triangle()), WithinRel(2.0 / 3.0, 1e-12));
}

TEST_CASE("Luxemburg norm of t^p is the Lp norm") {
    std::mt19937_64 rng(20260418);
    for (double p : {1.5, 2.0, 4.0}) {
        const auto A = power(p);
        for (int i = 0; i < 50; ++i) {
            const auto f = corpus::random_cell_constant(rng, {});
            CHECK_THAT(luxemburg_norm(A, f), WithinRel(lp_norm(f, p), 1e-9));
        }
        CHECK_THAT(luxemburg_norm(A, corpus::triangle()), WithinRel(lp_norm(corpus::triangle(), p), 1e-9));
    }
    CHECK(luxemburg_norm(power(2.0), GridFunction::zero(DomainKind::real_line)) == 0.0);
}

TEST_CASE("fundamental function") {
    CHECK_THAT(fundamental(power(2.0), 4.0), WithinRel(2.0, 1e-15));
    for (const auto& A : {power(2.0), exponential(), llogl_A(-2.0, 0.0), numeric_only(power(3.0))}) {
        INFO(A.name);
        double prev = 0.0;
        for (double t : log_grid(1e-6, 1e6, 4)) {
            const double v = fundamental(A, t);
            CHECK(v >= prev);
            prev = v;
        }
        for (double s : {0.01, 0.5, 3.0})
            CHECK_THAT(luxemburg_norm(A, GridFunction::indicator(0.0, s, 1.0)), WithinRel(fundamental(A, s), 1e-9));
    }
    CHECK(fundamental(power(2.0), 1e-12) < 1e-5);
    CHECK_THAT(fundamental(jump(), 1e-12), WithinRel(1.0, 1e-12));
}

TEST_CASE("Delta_2 and nabla_2 scans") {
    for (double p : {1.5, 2.0, 3.0}) {
        const auto r = delta2_scan(power(p));
        CHECK(r.verdict == Verdict::pass);
        CHECK_THAT(*r.fitted_constant, WithinRel(std::pow(2.0, p), 1e-12));
        const auto n = nabla2_scan(power(p));
        CHECK(n.verdict == Verdict::pass);
        CHECK(*n.fitted_constant >= std::pow(2.0, 1.0 / (p - 1.0)));
    }
    const auto e = delta2_scan(exponential());
    CHECK(e.verdict == Verdict::fail);
    REQUIRE(e.witness);
    CHECK(e.witness->t >= 1e6);
    CHECK(delta2_scan(powerlog(2.0, 1.0, 1.0)).verdict == Verdict::pass);
    CHECK(nabla2_scan(linear()).verdict == Verdict::fail);
    CHECK(nabla2_scan(exponential()).verdict == Verdict::fail);  // linear near 0
}

TEST_CASE("Delta_2 agrees with the conjugate-side integral condition") {
    for (const auto& A : {power(2.0), power(3.0), exponential(), linear(), jump()}) {
        INFO(A.name);
        const auto At = conjugate_function(A);
        const bool d2 = delta2_scan(A).passed();
        const bool integral = integral_condition("conj", At, At).passed();
        CHECK(d2 == integral);
    }
}

TEST_CASE("check_pair verdicts") {
    SECTION("equal powers") {
        for (double p : {1.5, 2.0, 3.0}) {
            const auto r = check_pair(power(p), power(p));
            INFO(p << " " << r.notes);
            CHECK(r.verdict == Verdict::pass);
            const double K = *r.children[1].fitted_constant;
            CHECK_THAT(std::pow(K, p), WithinRel(1.0 / (p - 1.0), 0.1));
        }
    }
    SECTION("B linear near zero diverges") {
        const auto r = check_pair(power(2.0), linear());
        CHECK(r.verdict == Verdict::fail);
        REQUIRE(r.witness);
        CHECK(r.witness->t < 1e-8);
    }
    SECTION("L log L pair") {
        const auto r = check_pair(llogl_A(-2.0, 0.0), llogl_B(-2.0, 0.0));
        INFO(r.notes);
        for (const auto& c : r.children) INFO(c.name << ": " << to_string(c.verdict) << " " << c.notes);
        CHECK(r.verdict == Verdict::pass);
    }
    SECTION("exponential pair") {
        const auto r = check_pair(exp_A(0.5, 1.0), exp_B(0.5, 1.0));
        INFO(r.notes);
        CHECK(r.verdict == Verdict::pass);
    }
}

TEST_CASE("log-integrability of B") {
    CHECK(check_log_membership(power(2.0)).verdict == Verdict::pass);
    const auto r = check_log_membership(linear());
    CHECK(r.verdict == Verdict::fail);
    REQUIRE(r.witness);
    CHECK(r.witness->t > 1e6);
}

TEST_CASE("E^A membership") {
    const auto f = GridFunction::indicator(0.0, 1.0, 1.0);
    CHECK(in_EA(power(2.0), f).passed());
    CHECK(in_EA(jump(), f).verdict == Verdict::fail);
}

TEST_CASE("spec parsing") {
    CHECK(parse_spec("power:2").name == "power:2");
    CHECK(parse_spec("llogl:-2,0", Role::B).name == "llogl-B:-2,0");
    CHECK(parse_spec("exppair:0.5,1").name == "exp-A:0.5,1");
    CHECK_NOTHROW(parse_spec("powerlog:2,1,1"));
    CHECK_THROWS_AS(parse_spec("power"), config_error);
    CHECK_THROWS_AS(parse_spec("power:abc"), config_error);
    CHECK_THROWS_AS(parse_spec("power:0.5"), config_error);
    CHECK_THROWS_AS(parse_spec("llogl:-0.5,0"), config_error);
    CHECK_THROWS_AS(parse_spec("gamma:1"), config_error);
}
