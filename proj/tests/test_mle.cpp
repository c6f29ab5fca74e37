#include <doctest.h>

#include <cmath>
#include <vector>

#include "synthinfo/mle.hpp"

using namespace synthinfo;

namespace {

Sample bernoulli_counts(std::size_t ones, std::size_t zeros) {
    std::vector<double> obs(ones, 1.0);
    obs.insert(obs.end(), zeros, 0.0);
    return Sample(obs);
}

}  // namespace

TEST_CASE("bernoulli mle closed form") {
    const auto bern = make_family("bernoulli");
    const MleFit fit = fit_mle(*bern, bernoulli_counts(7, 3));
    CHECK(fit.theta_hat == doctest::Approx(0.7));
    CHECK(fit.standard_error == doctest::Approx(std::sqrt(0.7 * 0.3 / 10.0)));
    CHECK(fit.data_size == 10);
    CHECK_THROWS_AS(fit_mle(*bern, bernoulli_counts(5, 0)), BoundaryError);
}

TEST_CASE("normal mean mle closed form") {
    const auto norm = make_family("normal_mu");
    const MleFit fit = fit_mle(*norm, Sample({-1.0, 1.0}));
    CHECK(fit.theta_hat == doctest::Approx(0.0));
    CHECK(fit.observed_information == doctest::Approx(2.0));
    CHECK(fit.standard_error == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("golden section maximizer") {
    const double arg = golden_section_maximize(
        [](double x) { return -(x - 2.0) * (x - 2.0); }, 0.0, 5.0);
    CHECK(std::fabs(arg - 2.0) <= 1e-8);
}

TEST_CASE("pooled log-likelihood splits into a real part and a constant") {
    const auto norm = make_family("normal_mu");
    const Sample X({0.5, 1.5, -0.3});  // distinct values
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const Sample S = d.sample(4, 21);

    const DecomposedLoglik at_half = decomposed_loglik(*norm, X, d, S, 0.5);
    CHECK(at_half.const_part == doctest::Approx(-4.0 * std::log(3.0)).epsilon(1e-12));
    CHECK(at_half.total == doctest::Approx(at_half.real_part + at_half.const_part));

    for (double theta : {-1.0, -0.25, 0.0, 0.6, 1.4, 2.0}) {
        const DecomposedLoglik dl = decomposed_loglik(*norm, X, d, S, theta);
        CHECK(std::fabs(dl.const_part - at_half.const_part) <= 1e-12);
        CHECK(std::fabs((dl.total - dl.real_part) - at_half.const_part) <= 1e-12);
    }
}

TEST_CASE("the constant part vanishes without synthetic data") {
    const auto norm = make_family("normal_mu");
    const Sample X({0.5, 1.5, -0.3});
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const DecomposedLoglik dl = decomposed_loglik(*norm, X, d, Sample{}, 0.7);
    CHECK(dl.const_part == 0.0);
    CHECK(dl.total == doctest::Approx(dl.real_part));
    CHECK(dl.real_part == doctest::Approx(norm->log_likelihood(0.7, X)));
}

TEST_CASE("constant offsets leave the argmax untouched for every generator kind") {
    const auto bern = make_family("bernoulli");
    const Sample X = bernoulli_counts(6, 4);
    const std::vector<GeneratorKind> kinds = {
        GeneratorKind::bootstrap(),
        GeneratorKind::fixed(bern, 0.5),
        GeneratorKind::posterior_predictive(bayes::BetaBernoulli{1.0, 1.0}),
    };
    for (const auto& kind : kinds) {
        const SynthDist d = SynthDist::fit(kind, X);
        const Sample S = d.sample(20, 3);
        const double argmax_pooled = golden_section_maximize(
            [&](double t) { return decomposed_loglik(*bern, X, d, S, t).total; },
            1e-9, 1.0 - 1e-9);
        const double argmax_real = golden_section_maximize(
            [&](double t) { return bern->log_likelihood(t, X); }, 1e-9, 1.0 - 1e-9);
        CHECK(std::fabs(argmax_pooled - argmax_real) <= 1e-6);
        CHECK(std::fabs(argmax_real - 0.6) <= 1e-6);
    }
}

TEST_CASE("an off-support synthetic point poisons the total") {
    const auto norm = make_family("normal_mu");
    const Sample X({0.5, 1.5, -0.3});
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const DecomposedLoglik dl = decomposed_loglik(*norm, X, d, Sample({99.0}), 0.5);
    CHECK(dl.total == kLogZero);
}

TEST_CASE("naive pooled fit shrinks the standard error by the pooled size") {
    const auto bern = make_family("bernoulli");
    const MleFit pooled =
        naive_pooled_fit(*bern, bernoulli_counts(7, 3), bernoulli_counts(70, 30));
    CHECK(pooled.theta_hat == doctest::Approx(0.7));
    CHECK(pooled.data_size == 110);
    CHECK(pooled.standard_error == doctest::Approx(std::sqrt(0.7 * 0.3 / 110.0)));
    // same point estimate as the honest fit, smaller claimed SE
    const MleFit honest = fit_mle(*bern, bernoulli_counts(7, 3));
    CHECK(pooled.theta_hat == doctest::Approx(honest.theta_hat));
    CHECK(pooled.standard_error < honest.standard_error);
}

TEST_CASE("large synthetic samples drag the pooled estimate to the resample mean") {
    const auto bern = make_family("bernoulli");
    const Sample X = bernoulli_counts(6, 4);
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const Sample S = d.sample(20000, 11);
    const MleFit pooled = naive_pooled_fit(*bern, X, S);
    double mean = 6.0;
    for (double s : S.observations) mean += s;
    mean /= static_cast<double>(10 + 20000);
    CHECK(pooled.theta_hat == doctest::Approx(mean));
    CHECK(std::fabs(pooled.theta_hat - 0.6) <= 0.02);
}

TEST_CASE("calibration report reproduces the shrinkage ratio") {
    const auto bern = make_family("bernoulli");
    const CalibrationReport rep = se_calibration_report(
        *bern, GeneratorKind::bootstrap(), 0.6, 20, 80, 300, 5150);
    CHECK(rep.rows.size() == 300);
    CHECK(rep.expected_se_ratio == doctest::Approx(std::sqrt(20.0 / 100.0)));
    CHECK(std::fabs(rep.se_ratio - rep.expected_se_ratio) <=
          0.05 * rep.expected_se_ratio);
    CHECK(rep.coverage >= 0.0);
    CHECK(rep.coverage <= 1.0);
    // naive intervals under-cover relative to the nominal level
    CHECK(rep.coverage < 0.95);
}
