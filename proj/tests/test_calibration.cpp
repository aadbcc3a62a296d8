#include <doctest.h>

#include <cmath>
#include <vector>

#include "mtlab/calibration.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/procedures.hpp"
#include "mtlab/process.hpp"
#include "oracles.hpp"

using namespace mtlab;

TEST_CASE("beta_from_alpha") {
    CHECK(beta_from_alpha(0.05) == doctest::Approx(0.0512933).epsilon(1e-5));
    CHECK(beta_from_alpha(0.05) == doctest::Approx(-std::log(0.95)).epsilon(1e-14));
    CHECK(beta_from_alpha(1e-9) == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK_THROWS_AS(beta_from_alpha(1.0), std::domain_error);
    CHECK_THROWS_AS(beta_from_alpha(0.0), std::domain_error);
}

TEST_CASE("analytic ladder hits the exact survival targets") {
    const ThresholdLadder ladder = threshold_ladder(ErrorModel(Gaussian{1.0}), 0.05, 10000, 2);
    REQUIRE(ladder.thresholds.size() == 2);
    CHECK(ladder.thresholds[0] ==
          doctest::Approx(oracles::normal_upper_quantile(ladder.beta / 1e4)).epsilon(1e-9));
    CHECK(ladder.thresholds[0] == doctest::Approx(4.412).epsilon(0.001));
    CHECK(ladder.thresholds[1] == doctest::Approx(4.260).epsilon(0.001));
    CHECK(ladder.thresholds[0] > ladder.thresholds[1]);
    CHECK(ladder.se[0] == 0.0);
    // consistency: survival of t_i equals i*beta/nu
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(survival(Gaussian{1.0}, ladder.thresholds[i]) ==
              doctest::Approx((i + 1) * ladder.beta / 1e4).epsilon(1e-9));
    }
}

TEST_CASE("ladder depth beyond the mass budget is rejected") {
    // k * beta / nu >= 1
    CHECK_THROWS_AS(threshold_ladder(ErrorModel(Gaussian{1.0}), 0.05, 10, 200),
                    std::domain_error);
}

TEST_CASE("sidak convention moves only the first rung") {
    const std::size_t nu = 1000;
    const ThresholdLadder plain = threshold_ladder(ErrorModel(Gaussian{1.0}), 0.05, nu, 2);
    const ThresholdLadder sidak = threshold_ladder(ErrorModel(Gaussian{1.0}), 0.05, nu, 2,
                                                   LadderConvention::sidak);
    const double s1 = 1.0 - std::pow(0.95, 1.0 / static_cast<double>(nu));
    CHECK(survival(Gaussian{1.0}, sidak.thresholds[0]) == doctest::Approx(s1).epsilon(1e-9));
    CHECK(sidak.thresholds[1] == doctest::Approx(plain.thresholds[1]).epsilon(1e-12));
    // both conventions agree closely at alpha = 0.05
    CHECK(std::fabs(sidak.thresholds[0] - plain.thresholds[0]) < 1e-3);
}

TEST_CASE("mc_marginal_quantile recovers a known quantile") {
    const StatSampler gauss = [](Pcg64& engine) {
        return draw_value(Gaussian{1.0}, engine);
    };
    const double s = 5.129e-6;
    const QuantileEstimate q =
        mc_marginal_quantile(gauss, s, 100000000, RandomStream{21, 0}, 1);
    const double truth = oracles::normal_upper_quantile(s);
    CHECK(q.se > 0.0);
    CHECK(std::fabs(q.t - truth) < 3.0 * q.se);
    CHECK(q.se < 0.02);
}

TEST_CASE("mc_marginal_quantile on a point mass") {
    const StatSampler constant = [](Pcg64&) { return 3.0; };
    const QuantileEstimate q = mc_marginal_quantile(constant, 1e-3, 1000000, RandomStream{22, 0});
    CHECK(q.t == doctest::Approx(3.0));
    CHECK(q.se == doctest::Approx(0.0));
}

TEST_CASE("insufficient tail mass is rejected") {
    const StatSampler gauss = [](Pcg64& engine) {
        return draw_value(Gaussian{1.0}, engine);
    };
    CHECK_THROWS_AS(mc_marginal_quantile(gauss, 1e-6, 1000000, RandomStream{23, 0}),
                    InsufficientTailMassError);
}

TEST_CASE("mc quantile se shrinks like the square root of the budget") {
    const StatSampler gauss = [](Pcg64& engine) {
        return draw_value(Gaussian{1.0}, engine);
    };
    const double s = 1e-3;
    const QuantileEstimate q1 = mc_marginal_quantile(gauss, s, 1000000, RandomStream{24, 0});
    const QuantileEstimate q2 = mc_marginal_quantile(gauss, s, 4000000, RandomStream{25, 0});
    const QuantileEstimate q3 = mc_marginal_quantile(gauss, s, 16000000, RandomStream{26, 0});
    // each 4x budget should halve the se, within generous noise factors
    CHECK(q1.se / q2.se == doctest::Approx(2.0).epsilon(0.35));
    CHECK(q2.se / q3.se == doctest::Approx(2.0).epsilon(0.35));
    const double truth = oracles::normal_upper_quantile(s);
    CHECK(std::fabs(q3.t - truth) < 4.0 * q3.se);
}

TEST_CASE("mc ladder is deterministic across thread counts") {
    const StatSampler gauss = [](Pcg64& engine) {
        return draw_value(Gaussian{1.0}, engine);
    };
    const ThresholdLadder one =
        threshold_ladder(gauss, 0.05, 2000, 2, 4000000, RandomStream{27, 0}, 1);
    const ThresholdLadder four =
        threshold_ladder(gauss, 0.05, 2000, 2, 4000000, RandomStream{27, 0}, 4);
    CHECK(one.thresholds == four.thresholds);
    CHECK(one.se == four.se);
    CHECK(one.thresholds[0] > one.thresholds[1]);
}

TEST_CASE("model samplers draw the right marginals") {
    // model1 with a single weight reduces to the error marginal
    const StatSampler m1 =
        model1_stat_sampler(WeightProfile::from_values({2.0}), Gaussian{1.0});
    Pcg64 engine = RandomStream{28, 0}.engine();
    std::vector<double> draws(200000);
    for (double& x : draws) x = m1(engine);
    CHECK(oracles::sample_mean(draws) == doctest::Approx(0.0).epsilon(1).scale(0.02));
    CHECK(oracles::sample_variance(draws) == doctest::Approx(4.0).epsilon(0.02));

    // model2 with Gaussian errors: scaled t_{n-1}, variance (n/(n-1))*(n-1)/(n-3)
    const std::size_t n = 10;
    const StatSampler m2 =
        model2_stat_sampler(WeightProfile::from_values({1.0}), Gaussian{1.0}, n);
    Pcg64 engine2 = RandomStream{29, 0}.engine();
    std::vector<double> tdraws(200000);
    for (double& x : tdraws) x = m2(engine2);
    const double expected_var = (10.0 / 9.0) * (9.0 / 7.0);
    CHECK(oracles::sample_variance(tdraws) == doctest::Approx(expected_var).epsilon(0.03));
}

TEST_CASE("analytic marginals where closed forms exist") {
    ErrorModel out;

    // Gaussian errors, any weights
    REQUIRE(analytic_ma_marginal(WeightProfile::from_values({0.6, 0.8}), Gaussian{1.0}, out));
    CHECK(survival(out, 1.0) == doctest::Approx(survival(Gaussian{1.0}, 1.0)).epsilon(1e-12));

    // single weight: any marginal scales
    REQUIRE(analytic_ma_marginal(WeightProfile::from_values({2.0}), StudentT{4.0, 1.0}, out));
    CHECK(quantile_survival(out, 0.01) ==
          doctest::Approx(2.0 * quantile_survival(StudentT{4.0, 1.0}, 0.01)).epsilon(1e-9));

    // multi-weight Student t has no closed form
    CHECK_FALSE(
        analytic_ma_marginal(WeightProfile::from_values({1.0, 1.0}), StudentT{4.0, 1.0}, out));

    // positive weights stay closed-form for the positive-support families
    REQUIRE(analytic_ma_marginal(WeightProfile::from_values({3.0}), Pareto{2.0, 1.0}, out));
    CHECK(survival(out, 6.0) == doctest::Approx(0.25).epsilon(1e-12));

    // model2 Gaussian: sqrt(n/(n-1)) * t_{n-1}
    REQUIRE(analytic_t_marginal(Gaussian{1.0}, 10, out));
    const double q = quantile_survival(out, 0.01);
    CHECK(q == doctest::Approx(std::sqrt(10.0 / 9.0) * quantile_survival(StudentT{9.0, 1.0}, 0.01))
                   .epsilon(1e-9));
    CHECK_FALSE(analytic_t_marginal(StudentT{4.0, 1.0}, 10, out));
}

TEST_CASE("model2 analytic marginal agrees with the simulated t-statistic") {
    // KS check: the exact divisor-n t against its claimed scaled-t marginal
    ErrorModel marginal;
    REQUIRE(analytic_t_marginal(Gaussian{1.0}, 6, marginal));
    const StatSampler sampler =
        model2_stat_sampler(WeightProfile::from_values({1.0}), Gaussian{1.0}, 6);
    Pcg64 engine = RandomStream{30, 0}.engine();
    std::vector<double> draws(300000);
    for (double& x : draws) x = sampler(engine);
    std::sort(draws.begin(), draws.end());
    double d = 0.0;
    const double n = static_cast<double>(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = 1.0 - survival(marginal, draws[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    CHECK(d < 0.004);
}

TEST_CASE("independence: P(N >= 1) matches 1 - (1 - beta/nu)^nu") {
    const std::size_t nu = 10000;
    const std::size_t reps = 4000;
    const ThresholdLadder ladder = threshold_ladder(ErrorModel(Gaussian{1.0}), 0.05, nu, 1);
    const WeightProfile weights = WeightProfile::from_values({1.0});
    std::size_t n_pos = 0;
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
        const auto series = generate_ma(weights, Gaussian{1.0}, nu, RandomStream{31, rep});
        if (count_exceedances(series, ladder.thresholds[0]) > 0) ++n_pos;
    }
    const double expected =
        1.0 - std::pow(1.0 - ladder.beta / static_cast<double>(nu), static_cast<double>(nu));
    const double fwer = static_cast<double>(n_pos) / static_cast<double>(reps);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(reps));
    CHECK(std::fabs(fwer - expected) < 3.0 * se);
    CHECK(expected == doctest::Approx(0.05).epsilon(0.001));
}
