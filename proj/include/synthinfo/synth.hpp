#pragma once

#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synthinfo/bayes.hpp"
#include "synthinfo/families.hpp"
#include "synthinfo/sample.hpp"

namespace synthinfo {

// log of zero probability; a distinguished sentinel, not an error.
constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Finite-period action represented as a permutation over support indices
// {0, ..., size-1}.
struct PermutationAction {
    std::vector<std::size_t> table;
    std::size_t period = 1;

    // requires table to be a bijection and table^period == identity
    void validate() const;
    std::size_t apply(std::size_t idx, std::size_t iterations) const;

    // CSV rows "from_index,to_index"; optional header
    static PermutationAction load_csv(const std::filesystem::path& path, std::size_t period);
};

struct GeneratorKind {
    enum class Variant {
        NonparametricBootstrap,
        ParametricBootstrap,
        ClassReweight,
        SymmetryAugment,
        FixedDistribution,
        PosteriorPredictive,
    };

    Variant variant = Variant::NonparametricBootstrap;
    std::shared_ptr<const Family> family;          // ParametricBootstrap, FixedDistribution
    double fixed_theta = 0.0;                      // FixedDistribution
    std::optional<PermutationAction> action;       // SymmetryAugment
    std::optional<bayes::ConjugateModel> prior;    // PosteriorPredictive

    static GeneratorKind bootstrap();
    static GeneratorKind param_bootstrap(std::shared_ptr<const Family> family);
    static GeneratorKind class_reweight();
    static GeneratorKind symmetry(PermutationAction action);
    static GeneratorKind fixed(std::shared_ptr<const Family> family, double theta);
    static GeneratorKind posterior_predictive(bayes::ConjugateModel prior);

    // config names: "bootstrap", "param_bootstrap", "class_reweight",
    // "symmetry", "fixed", "posterior_predictive"
    const char* name() const;
};

struct SupportPoint {
    double value;
    std::optional<int> label;
    double prob;
};

// A fitted synthetic distribution: the image of a sample under a generator.
// Immutable after fit; the conditional density depends only on the fitted
// sample, never on any model parameter.
class SynthDist {
public:
    static SynthDist fit(const GeneratorKind& kind, const Sample& X);

    const GeneratorKind& kind() const { return kind_; }
    const Sample& fitted_on() const { return fitted_on_; }

    double conditional_log_density(double s) const;
    double conditional_log_density(double s, std::optional<int> label) const;

    Sample sample(std::size_t m, std::uint64_t seed) const;

    bool has_finite_support() const { return finite_; }
    const std::vector<SupportPoint>& enumerate_support() const;

private:
    SynthDist() = default;

    GeneratorKind kind_;
    Sample fitted_on_;

    bool finite_ = false;
    std::vector<SupportPoint> table_;  // sorted by (value, label)

    // continuous targets
    std::shared_ptr<const Family> cont_family_;
    double cont_theta_ = 0.0;
    bool normal_predictive_ = false;
    double pred_mean_ = 0.0;
    double pred_var_ = 1.0;
};

}  // namespace synthinfo
