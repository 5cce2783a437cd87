#include "catch_amalgamated.hpp"

#include <hermconv/corpus.hpp>
#include <hermconv/sansone.hpp>

#include <gsl/gsl_sf_expint.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hermconv;
using namespace hermconv::sansone;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("N frequency", "[sansone]") {
    CHECK_THAT(n_frequency(0), WithinRel((1.0 + std::sqrt(3.0)) / 2.0, 1e-15));
    CHECK_THAT(n_frequency(49), WithinRel((std::sqrt(99.0) + std::sqrt(101.0)) / 2.0, 1e-15));
    for (int n = 0; n < 500; ++n) CHECK(n_frequency(n + 1) > n_frequency(n));
}

TEST_CASE("c_n", "[sansone]") {
    // c_2 from h_2(0) = -pi^{-1/4}/sqrt(2), h_3'(0) = -sqrt(3) pi^{-1/4}.
    const double q = std::pow(std::numbers::pi, -0.25);
    const double c2 = std::numbers::pi * std::sqrt(1.5) * (-q / std::sqrt(2.0)) * (-std::sqrt(3.0) * q) / std::sqrt(7.0);
    CHECK_THAT(c_constant(2), WithinRel(c2, 1e-13));
    CHECK_THAT(c_constant(0), WithinRel(std::sqrt(std::numbers::pi / 3.0), 1e-14));
    CHECK_THAT(c_constant(1), WithinRel(std::sqrt(std::numbers::pi / 3.0), 1e-14));
    int violations = 0;
    for (int n = 2; n <= 2000; n += 2)
        if (!(std::abs(c_constant(n) - 1.0) < 1.0 / (2.0 * n))) ++violations;
    CHECK(violations == 0);
    for (int n = 3; n <= 2001; n += 2) CHECK(std::abs(c_constant(n) - 1.0) < 1.0 / (2.0 * n));
}

TEST_CASE("Sansone approximation", "[sansone]") {
    for (int n : {2, 10, 400}) CHECK_THAT(approx(n, 0.0), WithinRel(hermite::zero_values(n).first, 1e-15));
    for (int n : {1, 11, 401}) CHECK(approx(n, 0.0) == 0.0);
    // n = 1000, x = 0.5: residual within a modest multiple of omega.
    const double diff = std::abs(hermite::value(1000, 0.5) - approx(1000, 0.5));
    CHECK(diff <= 10.0 * std::abs(prefactor(1000)) * omega(1000, 0.5));
    const double diff_odd = std::abs(hermite::value(1001, 0.5) - approx(1001, 0.5));
    CHECK(diff_odd <= 10.0 * std::abs(prefactor(1001)) * omega(1001, 0.5));
}

TEST_CASE("omega", "[sansone]") {
    CHECK(omega(7, 0.0) == 0.0);
    CHECK_THAT(omega(100, 1.0), WithinRel(0.02 + std::pow(10.0, -2.5), 1e-14));
    CHECK_THAT(omega(100, 1.0), WithinAbs(0.023162, 1e-6));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double w = omega(64, 0.03 * i);
        CHECK(w >= prev);
        prev = w;
    }
}

TEST_CASE("remainder envelope is uniform in n", "[sansone]") {
    const double c64 = *remainder_fit(64).fitted_constant;
    const double c4096 = *remainder_fit(4096).fitted_constant;
    INFO("C(64) = " << c64 << ", C(4096) = " << c4096);
    CHECK(c4096 <= 2.0 * c64);
    for (int n : {65, 4097}) CHECK(std::isfinite(*remainder_fit(n).fitted_constant));
}

TEST_CASE("seven-term kernel identity", "[sansone]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n : {8, 9, 32, 128, 129}) {
        for (int trial = 0; trial < 50; ++trial) {
            const double x = u(rng), y = u(rng);
            const auto t = kernel_terms(n, x, y);
            CHECK(std::abs(t.residual_identity) <= 1e-9 * std::max(1.0, std::abs(t.lhs)));
            // lhs equals pi sqrt((n+1)/2)(x-y) k_n(x,y) from the kernel class.
            CHECK_THAT(t.lhs, WithinAbs(std::numbers::pi * std::sqrt((n + 1) / 2.0) * (x - y) * hermite::cd_kernel(n, x, y),
                                        1e-10));
            // K_7 antisymmetry.
            const auto s = kernel_terms(n, y, x);
            for (int k = 0; k < 7; ++k) CHECK_THAT(s.K[k], WithinAbs(-t.K[k], 1e-12));
        }
        const auto d = kernel_terms(n, 0.7, 0.7);
        CHECK(d.K[0] == 0.0);
        CHECK(d.K[6] == 0.0);
    }
}

TEST_CASE("K1 second representation", "[sansone]") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> un(0, 5000);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int n = un(rng);
        const double x = u(rng), y = u(rng);
        worst = std::max(worst, std::abs(k1_residual(n, x, y)));
    }
    CHECK(worst <= 1e-12);
    CHECK(k1_residual(5, 0.4, 0.4) == 0.0);
    CHECK(std::abs(k1_residual(0, 0.3, -1.1)) <= 1e-15);
    // The (x-y)*2N reading is not an identity.
    CHECK(std::abs(k1_residual(0, 0.3, -1.1, K1Variant::times_2N)) > 1e-3);
    CHECK(std::abs(k1_residual(40, 1.3, 0.2, K1Variant::times_2N)) > 1e-3);
}

TEST_CASE("Dirichlet operator", "[sansone]") {
    CHECK(dirichlet(GridFunction::zero(), 1.0, 10.0, 0.3) == 0.0);
    for (double T : {0.5, 1.0, 1.2})
        for (double N : {3.0, 10.0, 90.5}) {
            const auto f = GridFunction::indicator(-T, T);
            for (double x : {-3.0, -1.0, -0.2, 0.0, 0.45, 1.0, 2.2, 7.0}) {
                const double exact = gsl_sf_Si(N * (x + T)) - gsl_sf_Si(N * (x - T));
                CHECK_THAT(dirichlet(f, T, N, x), WithinAbs(exact, 1e-8));
            }
        }
    const auto b = corpus::smooth_bump(256);
    for (double x : {0.1, 0.9, 1.6}) CHECK_THAT(dirichlet(b, 1.0, 20.0, -x), WithinAbs(dirichlet(b, 1.0, 20.0, x), 1e-12));
    CHECK_THROWS_AS(dirichlet(b, 1.0, 20.0, 0.0, quad::QuadratureSpec::for_frequency(5.0)), config_error);
}

TEST_CASE("envelopes", "[sansone]") {
    const hermite::TruncationSchedule s;
    CHECK(envelope_beta(s.T(4096), 4096) < envelope_beta(s.T(64), 64));
    for (int n : {1, 2, 10, 1000}) {
        CHECK(envelope_alpha(1.0, n) <= 2.0);
        CHECK(envelope_alpha(1.0, n) >= 1.0);
        CHECK(envelope_alpha(3.0, n) >= 1.0);
    }
}

TEST_CASE("comb sets", "[sansone]") {
    const double N = 7.3, P = std::numbers::pi / N;
    for (int k = 0; k < 4; ++k) {
        const auto cells = comb_sets({N, k, 0, 5});
        REQUIRE(cells.size() == 6);
        CHECK_THAT(cells[0].second - cells[0].first, WithinRel(P / 4.0, 1e-14));
        CHECK_THAT(cells[1].first - cells[0].first, WithinRel(P, 1e-14));
        const double mid = (k + 0.5) / 4.0 * P;
        CHECK(cells[0].first < mid);
        CHECK(mid < cells[0].second);
    }
    // I_0..I_3 tile (0, pi/N).
    double covered = 0.0;
    for (int k = 0; k < 4; ++k) covered += comb_sets({N, k, 0, 0})[0].second - comb_sets({N, k, 0, 0})[0].first;
    CHECK_THAT(covered, WithinRel(P, 1e-14));
    CHECK(comb_sets({N, 3, 0, 0})[0].second == Catch::Approx(P));
    for (int k = 0; k <= 4; ++k) CHECK((k + sigma(k)) % 4 == 1);
}

TEST_CASE("comb functions", "[sansone]") {
    const auto g = GridFunction::indicator(0.0, 1.0, 1.0, DomainKind::half_line);
    const double N = n_frequency(256);
    for (int k = 1; k <= 4; ++k)
        for (int m = k - 3; m <= k; ++m) {
            const CombSpec s{N, k, m, comb_j_max(N, k, 1.2)};
            const auto f = comb_function(g, s);
            CHECK(f.support().second <= 0.0);
            for (double p : {1.0, 2.0, 5.0}) CHECK(lp_norm(f, p) <= lp_norm(g, p) + 1e-10);
            // Value check at a cell midpoint inside the shifted support.
            const double y = (k + 0.5) / 4.0 * std::numbers::pi / N + std::numbers::pi / N;
            const double shift = m / 4.0 * std::numbers::pi / N;
            CHECK(f(-y) == g(y - shift));
        }
    CHECK(comb_function(GridFunction::zero(DomainKind::half_line), {N, 1, 0, 10}).is_zero());
    CHECK_THROWS_AS(comb_function(GridFunction::indicator(0.0, 1.0, -1.0, DomainKind::half_line), {N, 1, 0, 3}),
                    invalid_input);
}

TEST_CASE("lower bound ratio", "[sansone]") {
    const auto g = GridFunction::indicator(0.0, 1.0, 1.0, DomainKind::half_line);
    const hermite::TruncationSchedule sched;
    std::vector<double> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(0.08 + 0.09 * i);
    const auto r = lower_bound_ratio(g, 256, sched, xs);
    REQUIRE(r.value("min_ratio"));
    CHECK(*r.value("min_ratio") > 0.0);
    CHECK(r.rows.size() == xs.size());
    const auto z = lower_bound_ratio(GridFunction::zero(DomainKind::half_line), 256, sched, xs);
    CHECK(z.notes.back().find("vacuous") != std::string::npos);
    CHECK_THROWS_AS(lower_bound_ratio(g, 256, sched, {5.0}), invalid_input);
    const auto alt = lower_bound_ratio(g, 256, sched, xs, MRange::proof);
    CHECK(*alt.value("min_ratio") > 0.0);
}

TEST_CASE("sign of sin(N(x+y)) on paired comb cells", "[sansone]") {
    const double N = n_frequency(100);
    auto signs = [&](int classes, int k) {
        const auto xcell = comb_sets({N, sigma(k, classes), 0, 0, classes})[0];
        const double x = 0.5 * (xcell.first + xcell.second);
        std::vector<int> out;
        for (const auto& [a, b] : comb_sets({N, k, 0, 6, classes})) {
            const double y = 0.5 * (a + b);
            const double v = std::sin(N * (x + y));
            CHECK(std::abs(v) >= std::sin(std::numbers::pi / 4.0) - 1e-12);
            out.push_back(v > 0 ? 1 : -1);
        }
        return out;
    };
    for (int k = 1; k <= 4; ++k) {
        const auto s = signs(4, k);
        for (std::size_t j = 1; j < s.size(); ++j) CHECK(s[j] == -s[j - 1]);  // period pi/N alternates
    }
    for (int k = 1; k <= 8; ++k) {
        const auto s = signs(8, k);
        for (std::size_t j = 1; j < s.size(); ++j) CHECK(s[j] == s[0]);
    }
    // Eight classes tile one period 2 pi/N.
    double covered = 0.0;
    for (int k = 0; k < 8; ++k) {
        const auto c = comb_sets({N, k, 0, 1, 8});
        covered += c[0].second - c[0].first;
        CHECK_THAT(c[1].first - c[0].first, WithinRel(2.0 * std::numbers::pi / N, 1e-14));
    }
    CHECK_THAT(covered, WithinRel(2.0 * std::numbers::pi / N, 1e-14));
}

TEST_CASE("lower bound ratio stays bounded below with sign-consistent combs", "[sansone]") {
    const auto g = GridFunction::indicator(0.0, 1.0, 1.0, DomainKind::half_line);
    const hermite::TruncationSchedule sched;
    std::vector<double> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(0.08 + 0.09 * i);
    const auto a = lower_bound_ratio(g, 256, sched, xs, MRange::lemma, CombPeriod::sign_consistent);
    const auto b = lower_bound_ratio(g, 1024, sched, xs, MRange::lemma, CombPeriod::sign_consistent);
    const double lo = std::min(*a.value("min_ratio"), *b.value("min_ratio"));
    const double hi = std::max(*a.value("min_ratio"), *b.value("min_ratio"));
    CHECK(lo > 0.5);
    CHECK(hi <= 2.0 * lo);
    CHECK(*a.value("pairs") == 64);
    // With period pi/N the comb sum cancels and shrinks as N grows.
    const auto pa = lower_bound_ratio(g, 256, sched, xs);
    const auto pb = lower_bound_ratio(g, 1024, sched, xs);
    CHECK(*pb.value("min_ratio") < *pa.value("min_ratio"));
}
