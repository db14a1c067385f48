#include <doctest.h>

#include "retailsim/errors.hpp"
#include "retailsim/stats.hpp"

#include <cmath>
#include <vector>

#include "../support/stats_fixtures.hpp"

using namespace retailsim;
using testutil::stats_fixtures;

TEST_CASE("describe: count, mean, sample standard deviation") {
    const auto d = describe({1.0, 2.0, 3.0, 4.0});
    CHECK(d.n == 4);
    CHECK(d.mean == 2.5);
    CHECK(d.sd == doctest::Approx(1.2909944487358056).epsilon(1e-12));

    const auto single = describe({5.0});
    CHECK(single.n == 1);
    CHECK(single.mean == 5.0);
    CHECK(std::isnan(single.sd));
}

TEST_CASE("welch_t: simple integer case with analytic answer") {
    const auto r = welch_t({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.34659350708733416).epsilon(1e-9));
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("welch_t and student_t reproduce the reference fixtures") {
    for (const auto& fx : stats_fixtures()) {
        const auto w = welch_t(fx.a, fx.b);
        CHECK(w.t == doctest::Approx(fx.welch_t).epsilon(1e-6));
        CHECK(w.df == doctest::Approx(fx.welch_df).epsilon(1e-6));
        CHECK(w.p == doctest::Approx(fx.welch_p).epsilon(1e-4));
        const auto s = student_t(fx.a, fx.b);
        CHECK(s.t == doctest::Approx(fx.student_t).epsilon(1e-6));
        CHECK(s.df == doctest::Approx(static_cast<double>(fx.a.size() + fx.b.size() - 2)));
        CHECK(s.p == doctest::Approx(fx.student_p).epsilon(1e-4));
    }
}

TEST_CASE("levene_test reproduces the reference fixtures") {
    for (const auto& fx : stats_fixtures()) {
        const auto l = levene_test(fx.a, fx.b);
        CHECK(l.W == doctest::Approx(fx.levene_W).epsilon(1e-6));
        CHECK(l.p == doctest::Approx(fx.levene_p).epsilon(1e-4));
    }
}

TEST_CASE("levene_test flags a strong variance difference") {
    // Two groups of 20 with standard deviations 1 and 10.
    std::vector<double> narrow, wide;
    for (int i = 0; i < 20; ++i) {
        const double z = (i - 9.5) / 5.766281297335398; // unit-sd ramp
        narrow.push_back(z);
        wide.push_back(10.0 * z);
    }
    const auto l = levene_test(narrow, wide);
    CHECK(l.p < 0.05);
}

TEST_CASE("t tests handle zero-variance input without dividing by zero") {
    const auto same = welch_t({2, 2, 2}, {2, 2, 2});
    CHECK(same.degenerate);
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);

    const auto apart = welch_t({2, 2, 2}, {3, 3, 3});
    CHECK(apart.degenerate);
    CHECK(apart.p == 0.0);

    // One degenerate side still yields a finite test.
    const auto half = welch_t({2, 2, 2}, {1, 2, 3, 4});
    CHECK(std::isfinite(half.t));
    CHECK(half.p > 0.0);
    CHECK(half.p < 1.0);
}

TEST_CASE("t tests reject groups that are too small") {
    CHECK_THROWS_AS(welch_t({1.0}, {1.0, 2.0}), DegenerateInputError);
    CHECK_THROWS_AS(student_t({}, {1.0, 2.0}), DegenerateInputError);
    CHECK_THROWS_AS(levene_test({1.0}, {1.0, 2.0}), DegenerateInputError);
}

TEST_CASE("eta_squared: pinned values") {
    CHECK(eta_squared(2.0, 38.0) == doctest::Approx(0.09523809523809523).epsilon(1e-12));
    CHECK(std::abs(eta_squared(2.0, 38.0) - 0.0952) < 1e-4);

    // Huge t statistics saturate towards 1.
    const double eta = eta_squared(-224.88, 38.0);
    CHECK(eta == doctest::Approx(0.99924915).epsilon(1e-6));
    CHECK(std::abs(eta - 0.9992) < 1e-4);

    CHECK(eta_squared(0.0, 10.0) == 0.0);
}

TEST_CASE("t_cdf and f_cdf: symmetry and known quantiles") {
    CHECK(t_cdf(0.0, 7.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t_cdf(1.5, 9.0) + t_cdf(-1.5, 9.0) == doctest::Approx(1.0).epsilon(1e-12));
    // t with 1 df is the Cauchy distribution: CDF(1) = 3/4.
    CHECK(t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-9));
    // Large df approaches the standard normal.
    CHECK(t_cdf(1.959963985, 1e6) == doctest::Approx(0.975).epsilon(1e-4));

    CHECK(f_cdf(0.0, 3.0, 5.0) == 0.0);
    // F(1, d2) is the square of a t variate: P(F <= t^2) = 2 P(T <= t) - 1.
    CHECK(f_cdf(4.0, 1.0, 12.0) == doctest::Approx(2.0 * t_cdf(2.0, 12.0) - 1.0).epsilon(1e-9));
    CHECK(f_cdf(1e9, 4.0, 4.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("incomplete_beta: endpoint and symmetry identities") {
    CHECK(incomplete_beta(2.5, 3.5, 0.0) == 0.0);
    CHECK(incomplete_beta(2.5, 3.5, 1.0) == 1.0);
    // I_x(a, b) = 1 - I_{1-x}(b, a)
    CHECK(incomplete_beta(2.0, 5.0, 0.3) ==
          doctest::Approx(1.0 - incomplete_beta(5.0, 2.0, 0.7)).epsilon(1e-9));
    // I_x(1, 1) is the identity.
    CHECK(incomplete_beta(1.0, 1.0, 0.42) == doctest::Approx(0.42).epsilon(1e-9));
}
