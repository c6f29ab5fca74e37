#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthinfo/synth.hpp"

using namespace synthinfo;

namespace {

double support_prob(const SynthDist& d, double value, std::optional<int> label = {}) {
    for (const auto& pt : d.enumerate_support())
        if (pt.value == value && pt.label == label) return pt.prob;
    return 0.0;
}

PermutationAction four_cycle() {
    PermutationAction act;
    act.table = {1, 2, 3, 0};
    act.period = 4;
    act.validate();
    return act;
}

}  // namespace

TEST_CASE("bootstrap fit reproduces empirical frequencies") {
    const Sample X({1.0, 1.0, 2.0});
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    CHECK(support_prob(d, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(support_prob(d, 2.0) == doctest::Approx(1.0 / 3.0));
    CHECK(d.enumerate_support().size() == 2);
}

TEST_CASE("class reweighting splits class mass uniformly") {
    const Sample X({1.0, 2.0, 3.0, 9.0}, {0, 0, 0, 1});
    const SynthDist d = SynthDist::fit(GeneratorKind::class_reweight(), X);
    const auto& table = d.enumerate_support();
    CHECK(table.size() == 4);
    CHECK(support_prob(d, 1.0, 0) == doctest::Approx(1.0 / 6.0));
    CHECK(support_prob(d, 2.0, 0) == doctest::Approx(1.0 / 6.0));
    CHECK(support_prob(d, 3.0, 0) == doctest::Approx(1.0 / 6.0));
    CHECK(support_prob(d, 9.0, 1) == doctest::Approx(0.5));
    double class0 = 0.0, class1 = 0.0;
    for (const auto& pt : table) (pt.label == 0 ? class0 : class1) += pt.prob;
    CHECK(class0 == doctest::Approx(0.5));
    CHECK(class1 == doctest::Approx(0.5));
}

TEST_CASE("fixed distribution ignores the sample") {
    const auto norm = make_family("normal_mu");
    const GeneratorKind kind = GeneratorKind::fixed(norm, 0.0);
    const SynthDist on_empty = SynthDist::fit(kind, Sample{});
    const SynthDist on_data = SynthDist::fit(kind, Sample({4.0, 5.0, 6.0}));
    for (double s : {-1.0, 0.0, 2.5}) {
        CHECK(on_empty.conditional_log_density(s) == on_data.conditional_log_density(s));
        CHECK(on_data.conditional_log_density(s) ==
              doctest::Approx(norm->log_density(0.0, s)));
    }
}

TEST_CASE("conditional density values and the log-zero sentinel") {
    const Sample X({1.0, 2.0, 3.0, 4.0});
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    CHECK(d.conditional_log_density(3.0) == doctest::Approx(std::log(0.25)));
    CHECK(d.conditional_log_density(7.0) == kLogZero);
}

TEST_CASE("symmetry augmentation spreads bootstrap mass over the orbit") {
    // two 4-cycles over an 8-point support
    PermutationAction act;
    act.table = {1, 2, 3, 0, 5, 6, 7, 4};
    act.period = 4;
    act.validate();
    const Sample X({0.0, 4.0});  // boot mass 1/2 each
    const SynthDist d = SynthDist::fit(GeneratorKind::symmetry(act), X);
    for (double s = 0.0; s < 8.0; s += 1.0)
        CHECK(d.conditional_log_density(s) == doctest::Approx(std::log(0.125)));
}

TEST_CASE("symmetry output distribution is invariant under the action") {
    PermutationAction act = four_cycle();
    const Sample X({0.0, 0.0, 2.0});
    const SynthDist d = SynthDist::fit(GeneratorKind::symmetry(act), X);
    for (const auto& pt : d.enumerate_support()) {
        const std::size_t image = act.table[static_cast<std::size_t>(pt.value)];
        CHECK(pt.prob == support_prob(d, static_cast<double>(image)));
    }
}

TEST_CASE("symmetry action with wrong period is rejected") {
    PermutationAction act;
    act.table = {1, 2, 0};  // 3-cycle
    act.period = 4;
    CHECK_THROWS_AS(act.validate(), SchemaError);
}

TEST_CASE("enumerated support sums to one") {
    const Sample X({1.0, 1.0, 2.0, 5.0, 5.0, 5.0});
    for (const auto& kind :
         {GeneratorKind::bootstrap(),
          GeneratorKind::fixed(make_family("bernoulli"), 0.5)}) {
        const SynthDist d = SynthDist::fit(kind, X);
        double total = 0.0;
        for (const auto& pt : d.enumerate_support()) total += pt.prob;
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
    const SynthDist fixed_bern =
        SynthDist::fit(GeneratorKind::fixed(make_family("bernoulli"), 0.5), Sample{});
    CHECK(support_prob(fixed_bern, 0.0) == doctest::Approx(0.5));
    CHECK(support_prob(fixed_bern, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("refit on a permuted sample yields the identical distribution") {
    const Sample X({3.0, 1.0, 3.0, 8.0, 1.0});
    Sample perm = X;
    std::rotate(perm.observations.begin(), perm.observations.begin() + 2,
                perm.observations.end());
    const SynthDist a = SynthDist::fit(GeneratorKind::bootstrap(), X);
    const SynthDist b = SynthDist::fit(GeneratorKind::bootstrap(), perm);
    REQUIRE(a.enumerate_support().size() == b.enumerate_support().size());
    for (std::size_t i = 0; i < a.enumerate_support().size(); ++i) {
        CHECK(a.enumerate_support()[i].value == b.enumerate_support()[i].value);
        CHECK(a.enumerate_support()[i].prob == b.enumerate_support()[i].prob);
    }
}

TEST_CASE("sampling determinism and frequency checks") {
    const Sample X({1.0, 1.0, 2.0});
    const SynthDist d = SynthDist::fit(GeneratorKind::bootstrap(), X);
    CHECK(d.sample(0, 5).empty());
    CHECK(d.sample(20, 5).observations == d.sample(20, 5).observations);

    const std::size_t m = 100000;
    const Sample s = d.sample(m, 31);
    double ones = 0.0;
    for (double x : s.observations) ones += x == 1.0 ? 1.0 : 0.0;
    const double frac = ones / static_cast<double>(m);
    CHECK(std::fabs(frac - 2.0 / 3.0) <=
          3.0 * std::sqrt((2.0 / 9.0) / static_cast<double>(m)));
}

TEST_CASE("symmetry sampling hits each rotation about equally") {
    PermutationAction act = four_cycle();
    const Sample X({0.0});
    const SynthDist d = SynthDist::fit(GeneratorKind::symmetry(act), X);
    const std::size_t m = 100000;
    const Sample s = d.sample(m, 77);
    std::vector<double> counts(4, 0.0);
    for (double x : s.observations) counts[static_cast<std::size_t>(x)] += 1.0;
    const double half_width =
        3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(m));
    for (double c : counts)
        CHECK(std::fabs(c / static_cast<double>(m) - 0.25) <= half_width);
}

TEST_CASE("fit errors") {
    CHECK_THROWS_AS(SynthDist::fit(GeneratorKind::bootstrap(), Sample{}), FitError);
    CHECK_THROWS_AS(
        SynthDist::fit(GeneratorKind::class_reweight(), Sample({1.0, 2.0})),
        SchemaError);
    const SynthDist cont = SynthDist::fit(
        GeneratorKind::fixed(make_family("normal_mu"), 0.0), Sample{});
    CHECK_THROWS_AS(cont.enumerate_support(), UnsupportedError);
    const SynthDist rw = SynthDist::fit(GeneratorKind::class_reweight(),
                                        Sample({1.0, 2.0}, {0, 1}));
    CHECK_THROWS_AS(rw.conditional_log_density(1.0), SchemaError);
}

TEST_CASE("posterior predictive generator exposes the same interface") {
    const GeneratorKind kind =
        GeneratorKind::posterior_predictive(bayes::BetaBernoulli{1.0, 1.0});
    const Sample X({1.0, 1.0, 1.0, 0.0});  // Beta(4, 2) posterior
    const SynthDist d = SynthDist::fit(kind, X);
    CHECK(support_prob(d, 1.0) == doctest::Approx(4.0 / 6.0));
    CHECK(support_prob(d, 0.0) == doctest::Approx(2.0 / 6.0));
}
