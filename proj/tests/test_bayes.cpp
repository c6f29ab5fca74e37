#include <doctest.h>

#include <cmath>
#include <vector>

#include "synthinfo/synth.hpp"

using namespace synthinfo;
using namespace synthinfo::bayes;

namespace {

Sample bernoulli_counts(std::size_t ones, std::size_t zeros) {
    std::vector<double> obs(ones, 1.0);
    obs.insert(obs.end(), zeros, 0.0);
    return Sample(obs);
}

// quadrature oracle for beta-distribution tail probabilities
double beta_tail_oracle(double a, double b, double threshold) {
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const int steps = 200000;
    const double dx = (1.0 - threshold) / steps;
    double total = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t = threshold + (i + 0.5) * dx;  // midpoint rule
        total += std::exp(log_norm + (a - 1.0) * std::log(t) +
                          (b - 1.0) * std::log1p(-t)) *
                 dx;
    }
    return total;
}

}  // namespace

TEST_CASE("beta-bernoulli update counts successes and failures") {
    const Posterior p = update(ConjugateModel{BetaBernoulli{1.0, 1.0}},
                               bernoulli_counts(7, 3));
    const auto& m = std::get<BetaBernoulli>(p.model);
    CHECK(m.alpha == doctest::Approx(8.0));
    CHECK(m.beta == doctest::Approx(4.0));
    CHECK(p.n_assimilated == 10);
    CHECK(predictive_one(m) == doctest::Approx(8.0 / 12.0));
}

TEST_CASE("updating with no data is the identity") {
    const Posterior p = update(ConjugateModel{BetaBernoulli{2.0, 2.0}}, Sample{});
    const auto& m = std::get<BetaBernoulli>(p.model);
    CHECK(m.alpha == 2.0);
    CHECK(m.beta == 2.0);
}

TEST_CASE("normal-normal update matches a quadrature oracle") {
    const Posterior p =
        update(ConjugateModel{NormalNormal{0.0, 1.0}}, Sample({2.0}));
    const auto& m = std::get<NormalNormal>(p.model);
    CHECK(m.mean == doctest::Approx(1.0));
    CHECK(m.variance == doctest::Approx(0.5));

    // numerically integrate mu * prior(mu) * lik(2 | mu)
    double num = 0.0, den = 0.0;
    const int steps = 400000;
    const double lo = -8.0, hi = 10.0, dx = (hi - lo) / steps;
    for (int i = 0; i <= steps; ++i) {
        const double mu = lo + i * dx;
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        const double joint =
            std::exp(-0.5 * mu * mu) * std::exp(-0.5 * (2.0 - mu) * (2.0 - mu));
        num += w * mu * joint * dx;
        den += w * joint * dx;
    }
    CHECK(m.mean == doctest::Approx(num / den).epsilon(1e-8));
}

TEST_CASE("batch and order invariance of conjugate updates") {
    const ConjugateModel start = BetaBernoulli{1.5, 0.5};
    const Sample A = bernoulli_counts(3, 1);
    const Sample B = bernoulli_counts(2, 4);
    Sample pooled = A;
    pooled.observations.insert(pooled.observations.end(), B.observations.begin(),
                               B.observations.end());
    const Posterior two_step = update(update(start, A), B);
    const Posterior one_step = update(start, pooled);
    const auto& m2 = std::get<BetaBernoulli>(two_step.model);
    const auto& m1 = std::get<BetaBernoulli>(one_step.model);
    CHECK(m2.alpha == doctest::Approx(m1.alpha));
    CHECK(m2.beta == doctest::Approx(m1.beta));
    CHECK(two_step.n_assimilated == one_step.n_assimilated);
}

TEST_CASE("posterior sd and incomplete beta spot values") {
    CHECK(posterior_sd(ConjugateModel{BetaBernoulli{8.0, 4.0}}) ==
          doctest::Approx(std::sqrt(32.0 / (144.0 * 13.0))));
    CHECK(posterior_sd(ConjugateModel{NormalNormal{0.0, 0.25}}) ==
          doctest::Approx(0.5));
    CHECK(reg_incomplete_beta(3.0, 1.0, 0.5) == doctest::Approx(0.125));
    CHECK(reg_incomplete_beta(2.0, 2.0, 0.5) == doctest::Approx(0.5));
    CHECK(reg_incomplete_beta(3.0, 1.0, 0.5) ==
          doctest::Approx(1.0 - beta_tail_oracle(3.0, 1.0, 0.5)).epsilon(1e-8));
}

TEST_CASE("reflection identity holds exactly for both event types") {
    const std::vector<double> space = {0.0, 1.0};
    for (double a : {0.5, 1.0, 2.0, 8.0}) {
        for (double b : {0.5, 1.0, 2.0, 8.0}) {
            const Posterior p{BetaBernoulli{a, b}, 0};
            for (const EventDescriptor& ev :
                 {EventDescriptor{NextObsEvent{1.0}},
                  EventDescriptor{IntervalEvent{0.5}}}) {
                const ReflectionResult r = reflection_check(p, ev, space);
                CHECK(std::fabs(r.lhs - r.rhs) <= 1e-12);
            }
        }
    }
}

TEST_CASE("reflection spot values") {
    const Posterior p84{BetaBernoulli{8.0, 4.0}, 0};
    const ReflectionResult next =
        reflection_check(p84, NextObsEvent{1.0}, std::vector<double>{0.0, 1.0});
    CHECK(next.rhs == doctest::Approx(8.0 / 12.0));

    const Posterior flat{BetaBernoulli{1.0, 1.0}, 0};
    const ReflectionResult half =
        reflection_check(flat, IntervalEvent{0.5}, std::vector<double>{0.0, 1.0});
    CHECK(half.rhs == doctest::Approx(0.5));

    const Posterior p31{BetaBernoulli{3.0, 1.0}, 0};
    const ReflectionResult tail =
        reflection_check(p31, IntervalEvent{0.5}, std::vector<double>{0.0, 1.0});
    CHECK(tail.rhs == doctest::Approx(beta_tail_oracle(3.0, 1.0, 0.5)).epsilon(1e-8));
}

TEST_CASE("naive augmentation with k = 0 reduces to the plain update") {
    const Sample X = bernoulli_counts(6, 4);
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const Posterior naive =
        naive_augmented_update(BetaBernoulli{1.0, 1.0}, X, d, 0, 42);
    const Posterior plain = update(ConjugateModel{BetaBernoulli{1.0, 1.0}}, X);
    CHECK(std::get<BetaBernoulli>(naive.model).alpha ==
          doctest::Approx(std::get<BetaBernoulli>(plain.model).alpha));
    CHECK(std::get<BetaBernoulli>(naive.model).beta ==
          doctest::Approx(std::get<BetaBernoulli>(plain.model).beta));
}

TEST_CASE("naive augmentation assimilates exactly the seeded synthetic draw") {
    const Sample X = bernoulli_counts(6, 4);
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const std::uint64_t seed = 90210;
    const Posterior naive =
        naive_augmented_update(BetaBernoulli{1.0, 1.0}, X, d, 90, seed);
    const Sample S = d.sample(90, seed);
    double ones = 6.0;
    for (double s : S.observations) ones += s;
    const auto& m = std::get<BetaBernoulli>(naive.model);
    CHECK(m.alpha == doctest::Approx(1.0 + ones));
    CHECK(m.beta == doctest::Approx(1.0 + 100.0 - ones));
    CHECK(naive.n_assimilated == 100);
}

TEST_CASE("stability report: coherence keeps the predictive fixed, naivety narrows") {
    const Sample X = bernoulli_counts(6, 4);
    const std::vector<std::size_t> ks = {0, 10, 100, 1000};
    const StabilityReport rep =
        posterior_stability_check(BetaBernoulli{1.0, 1.0}, X, ks, 321);
    REQUIRE(rep.rows.size() == ks.size());
    for (const auto& row : rep.rows)
        CHECK(std::fabs(row.coherent_predictive - rep.rows[0].coherent_predictive) <=
              1e-12);
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].naive_sd < rep.rows[i - 1].naive_sd);
    CHECK(rep.rows.back().naive_sd <
          posterior_sd(ConjugateModel{BetaBernoulli{7.0, 5.0}}) / 2.0);
}

TEST_CASE("iterated self-assimilation settles down") {
    // repeatedly sample a batch from the current plug-in predictive and
    // assimilate it as if genuine; the per-iteration drift of the predictive
    // shrinks as the pseudo-count mass piles up
    const auto bern = make_family("bernoulli");
    ConjugateModel model = BetaBernoulli{7.0, 5.0};
    double prev = predictive_one(std::get<BetaBernoulli>(model));
    double last_change = 1.0;
    for (std::size_t it = 1; it <= 51; ++it) {
        const double plug_in = predictive_one(std::get<BetaBernoulli>(model));
        const Sample batch = bern->draw(plug_in, 2000, 1000 + it);
        model = update(model, batch).model;
        const double cur = predictive_one(std::get<BetaBernoulli>(model));
        last_change = std::fabs(cur - prev);
        prev = cur;
    }
    CHECK(last_change < 1e-3);
}
