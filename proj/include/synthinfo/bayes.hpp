#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "synthinfo/sample.hpp"

namespace synthinfo {

class SynthDist;

namespace bayes {

struct BetaBernoulli {
    double alpha;
    double beta;
};

// Normal prior on the mean, known data variance 1.
struct NormalNormal {
    double mean;
    double variance;
};

using ConjugateModel = std::variant<BetaBernoulli, NormalNormal>;

void validate(const ConjugateModel& model);

struct Posterior {
    ConjugateModel model;
    std::size_t n_assimilated = 0;
};

Posterior update(const ConjugateModel& model, const Sample& data);
Posterior update(const Posterior& p, const Sample& data);

// P(next observation = 1) under a Beta posterior
double predictive_one(const BetaBernoulli& m);

// Posterior standard deviation of the parameter.
double posterior_sd(const ConjugateModel& m);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

// E = "next observation equals value"
struct NextObsEvent {
    double value;
};
// E = "parameter > threshold"
struct IntervalEvent {
    double threshold;
};
using EventDescriptor = std::variant<NextObsEvent, IntervalEvent>;

struct ReflectionResult {
    double lhs;  // sum over y of P'(Y=y) * P'(E | Y=y)
    double rhs;  // P'(E)
};

// Martingale identity E[P'(E|Y)] = P'(E), evaluated as an exact finite sum
// over next_obs_space. Beta-Bernoulli only; continuous observation spaces
// are unsupported.
ReflectionResult reflection_check(const Posterior& p, const EventDescriptor& event,
                                  std::span<const double> next_obs_space);

// P_naive: draws k points from d and assimilates them as if genuine.
// This is a documented anti-pattern exhibit; the posterior it produces
// over-concentrates as k grows while the data information stays fixed.
Posterior naive_augmented_update(const ConjugateModel& model, const Sample& X,
                                 const SynthDist& d, std::size_t k, std::uint64_t seed);

struct StabilityRow {
    std::size_t k;
    double coherent_predictive;  // P(next = 1), constant in k by coherence
    double naive_predictive;
    double naive_sd;
    double predictive_discrepancy;  // TV distance between the two predictives
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
};

// Contrasts the coherent treatment of same-source synthetic data (posterior
// after X is final) against P_naive across a schedule of synthetic sample
// sizes. Beta-Bernoulli only.
StabilityReport posterior_stability_check(const ConjugateModel& model, const Sample& X,
                                          std::span<const std::size_t> k_schedule,
                                          std::uint64_t seed);

}  // namespace bayes
}  // namespace synthinfo
