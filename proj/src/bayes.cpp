#include "synthinfo/bayes.hpp"

#include <cmath>
#include <cstdlib>

#include "synthinfo/synth.hpp"

namespace synthinfo::bayes {

void validate(const ConjugateModel& model) {
    if (const auto* bb = std::get_if<BetaBernoulli>(&model)) {
        if (!(bb->alpha > 0.0) || !(bb->beta > 0.0))
            throw ConfigError("beta-bernoulli: hyperparameters must be positive");
    } else {
        const auto& nn = std::get<NormalNormal>(model);
        if (!(nn.variance > 0.0))
            throw ConfigError("normal-normal: prior variance must be positive");
    }
}

Posterior update(const ConjugateModel& model, const Sample& data) {
    validate(model);
    Posterior out{model, data.size()};
    if (auto* bb = std::get_if<BetaBernoulli>(&out.model)) {
        std::size_t ones = 0, zeros = 0;
        for (double x : data.observations) {
            if (x == 1.0)
                ++ones;
            else if (x == 0.0)
                ++zeros;
            else
                throw SchemaError("beta-bernoulli: observations must be 0 or 1");
        }
        bb->alpha += static_cast<double>(ones);
        bb->beta += static_cast<double>(zeros);
    } else {
        auto& nn = std::get<NormalNormal>(out.model);
        double total = 0.0;
        for (double x : data.observations) total += x;
        const double prec = 1.0 / nn.variance + static_cast<double>(data.size());
        nn.mean = (nn.mean / nn.variance + total) / prec;
        nn.variance = 1.0 / prec;
    }
    return out;
}

Posterior update(const Posterior& p, const Sample& data) {
    Posterior out = update(p.model, data);
    out.n_assimilated += p.n_assimilated;
    return out;
}

double predictive_one(const BetaBernoulli& m) { return m.alpha / (m.alpha + m.beta); }

double posterior_sd(const ConjugateModel& m) {
    if (const auto* bb = std::get_if<BetaBernoulli>(&m)) {
        const double s = bb->alpha + bb->beta;
        return std::sqrt(bb->alpha * bb->beta / (s * s * (s + 1.0)));
    }
    return std::sqrt(std::get<NormalNormal>(m).variance);
}

namespace {

// Lentz's continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return h;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

namespace {

double event_probability(const BetaBernoulli& m, const EventDescriptor& event) {
    if (const auto* ne = std::get_if<NextObsEvent>(&event)) {
        const double p1 = predictive_one(m);
        return ne->value == 1.0 ? p1 : 1.0 - p1;
    }
    const auto& ie = std::get<IntervalEvent>(event);
    return 1.0 - reg_incomplete_beta(m.alpha, m.beta, ie.threshold);
}

}  // namespace

ReflectionResult reflection_check(const Posterior& p, const EventDescriptor& event,
                                  std::span<const double> next_obs_space) {
    const auto* bb = std::get_if<BetaBernoulli>(&p.model);
    if (!bb)
        throw UnsupportedError("reflection_check: finite observation spaces only "
                               "(beta-bernoulli)");
    const double rhs = event_probability(*bb, event);
    double lhs = 0.0;
    for (double y : next_obs_space) {
        const double py = y == 1.0 ? predictive_one(*bb) : 1.0 - predictive_one(*bb);
        BetaBernoulli updated = *bb;
        if (y == 1.0)
            updated.alpha += 1.0;
        else
            updated.beta += 1.0;
        lhs += py * event_probability(updated, event);
    }
    return {lhs, rhs};
}

Posterior naive_augmented_update(const ConjugateModel& model, const Sample& X,
                                 const SynthDist& d, std::size_t k, std::uint64_t seed) {
    Sample pool = X;
    pool.append(d.sample(k, seed));
    return update(model, pool);
}

StabilityReport posterior_stability_check(const ConjugateModel& model, const Sample& X,
                                          std::span<const std::size_t> k_schedule,
                                          std::uint64_t seed) {
    const Posterior after_x = update(model, X);
    const auto* bb = std::get_if<BetaBernoulli>(&after_x.model);
    if (!bb) throw UnsupportedError("posterior_stability_check: beta-bernoulli only");

    // The coherent treatment: S ~ posterior predictive carries a likelihood
    // that is constant in the parameter, so the posterior after X is final.
    const double coherent_pred = predictive_one(*bb);

    const SynthDist d =
        SynthDist::fit(GeneratorKind::posterior_predictive(model), X);

    StabilityReport report;
    std::size_t idx = 0;
    for (std::size_t k : k_schedule) {
        const Posterior naive =
            naive_augmented_update(model, X, d, k, derive_seed(seed, idx++));
        const auto& nb = std::get<BetaBernoulli>(naive.model);
        const double naive_pred = predictive_one(nb);
        StabilityRow row;
        row.k = k;
        row.coherent_predictive = coherent_pred;
        row.naive_predictive = naive_pred;
        row.naive_sd = posterior_sd(naive.model);
        row.predictive_discrepancy = std::fabs(coherent_pred - naive_pred);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace synthinfo::bayes
