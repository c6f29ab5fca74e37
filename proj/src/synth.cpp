#include "synthinfo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace synthinfo {

void PermutationAction::validate() const {
    const std::size_t k = table.size();
    if (k == 0) throw SchemaError("permutation action: empty table");
    if (period == 0) throw SchemaError("permutation action: period must be >= 1");
    std::vector<bool> seen(k, false);
    for (std::size_t v : table) {
        if (v >= k) throw SchemaError("permutation action: index out of range");
        if (seen[v]) throw SchemaError("permutation action: not a bijection");
        seen[v] = true;
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (apply(i, period) != i)
            throw SchemaError("permutation action: table^period is not the identity");
    }
}

std::size_t PermutationAction::apply(std::size_t idx, std::size_t iterations) const {
    for (std::size_t t = 0; t < iterations; ++t) idx = table[idx];
    return idx;
}

PermutationAction PermutationAction::load_csv(const std::filesystem::path& path,
                                              std::size_t period) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open permutation file: " + path.string());
    std::map<std::size_t, std::size_t> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.find("from") != std::string::npos) continue;  // header
        std::istringstream ls(line);
        std::size_t from, to;
        char comma;
        if (!(ls >> from >> comma >> to) || comma != ',') {
            throw DataError("permutation file " + path.string() + ": bad row at line " +
                            std::to_string(lineno));
        }
        entries[from] = to;
    }
    PermutationAction act;
    act.period = period;
    act.table.resize(entries.size());
    for (std::size_t i = 0; i < act.table.size(); ++i) {
        auto it = entries.find(i);
        if (it == entries.end())
            throw DataError("permutation file: missing from_index " + std::to_string(i));
        act.table[i] = it->second;
    }
    act.validate();
    return act;
}

GeneratorKind GeneratorKind::bootstrap() {
    return GeneratorKind{Variant::NonparametricBootstrap, nullptr, 0.0, {}, {}};
}
GeneratorKind GeneratorKind::param_bootstrap(std::shared_ptr<const Family> family) {
    return GeneratorKind{Variant::ParametricBootstrap, std::move(family), 0.0, {}, {}};
}
GeneratorKind GeneratorKind::class_reweight() {
    return GeneratorKind{Variant::ClassReweight, nullptr, 0.0, {}, {}};
}
GeneratorKind GeneratorKind::symmetry(PermutationAction action) {
    action.validate();
    return GeneratorKind{Variant::SymmetryAugment, nullptr, 0.0, std::move(action), {}};
}
GeneratorKind GeneratorKind::fixed(std::shared_ptr<const Family> family, double theta) {
    family->require_theta(theta);
    return GeneratorKind{Variant::FixedDistribution, std::move(family), theta, {}, {}};
}
GeneratorKind GeneratorKind::posterior_predictive(bayes::ConjugateModel prior) {
    bayes::validate(prior);
    return GeneratorKind{Variant::PosteriorPredictive, nullptr, 0.0, {}, std::move(prior)};
}

const char* GeneratorKind::name() const {
    switch (variant) {
        case Variant::NonparametricBootstrap: return "bootstrap";
        case Variant::ParametricBootstrap: return "param_bootstrap";
        case Variant::ClassReweight: return "class_reweight";
        case Variant::SymmetryAugment: return "symmetry";
        case Variant::FixedDistribution: return "fixed";
        case Variant::PosteriorPredictive: return "posterior_predictive";
    }
    return "?";
}

namespace {

struct Key {
    double value;
    int label;  // -1 means no label
    bool operator<(const Key& o) const {
        if (value != o.value) return value < o.value;
        return label < o.label;
    }
};

std::vector<SupportPoint> table_from_counts(const std::map<Key, double>& mass) {
    std::vector<SupportPoint> out;
    out.reserve(mass.size());
    for (const auto& [key, p] : mass) {
        SupportPoint pt;
        pt.value = key.value;
        if (key.label >= 0) pt.label = key.label;
        pt.prob = p;
        out.push_back(pt);
    }
    return out;
}

// empirical pmf of Eq-style bootstrap: mass count/n on each observed value
std::map<double, double> bootstrap_pmf(const std::vector<double>& obs) {
    std::map<double, double> pmf;
    const double n = static_cast<double>(obs.size());
    for (double x : obs) pmf[x] += 1.0 / n;
    return pmf;
}

}  // namespace

SynthDist SynthDist::fit(const GeneratorKind& kind, const Sample& X) {
    using V = GeneratorKind::Variant;
    X.validate();
    if (X.empty() && kind.variant != V::FixedDistribution)
        throw FitError(std::string(kind.name()) + ": cannot fit on an empty sample");

    SynthDist d;
    d.kind_ = kind;
    d.fitted_on_ = X;

    switch (kind.variant) {
        case V::NonparametricBootstrap: {
            std::map<Key, double> mass;
            for (const auto& [v, p] : bootstrap_pmf(X.observations)) mass[{v, -1}] = p;
            d.table_ = table_from_counts(mass);
            d.finite_ = true;
            break;
        }
        case V::ParametricBootstrap: {
            if (!kind.family) throw ConfigError("param_bootstrap: family required");
            const double theta_hat = kind.family->mle(X);
            if (kind.family->support_kind() == SupportKind::FiniteDiscrete) {
                std::map<Key, double> mass;
                for (double v : kind.family->finite_support())
                    mass[{v, -1}] = std::exp(kind.family->log_density(theta_hat, v));
                d.table_ = table_from_counts(mass);
                d.finite_ = true;
            } else {
                d.cont_family_ = kind.family;
                d.cont_theta_ = theta_hat;
            }
            break;
        }
        case V::ClassReweight: {
            if (!X.has_labels()) throw SchemaError("class_reweight: sample has no labels");
            std::map<int, std::vector<double>> classes;
            for (std::size_t i = 0; i < X.size(); ++i)
                classes[(*X.labels)[i]].push_back(X.observations[i]);
            const double n_classes = static_cast<double>(classes.size());
            std::map<Key, double> mass;
            for (const auto& [label, members] : classes) {
                for (const auto& [v, p] : bootstrap_pmf(members))
                    mass[{v, label}] += p / n_classes;
            }
            d.table_ = table_from_counts(mass);
            d.finite_ = true;
            break;
        }
        case V::SymmetryAugment: {
            const auto& act = *kind.action;
            const std::size_t k = act.table.size();
            std::vector<double> boot(k, 0.0);
            const double n = static_cast<double>(X.size());
            for (double x : X.observations) {
                if (!(x >= 0.0) || x != std::floor(x) || static_cast<std::size_t>(x) >= k)
                    throw DomainError("symmetry: observation is not a support index");
                boot[static_cast<std::size_t>(x)] += 1.0 / n;
            }
            // p(s) = (1/period) * sum_t p_boot(r^{-t}(s)); accumulated forward
            std::vector<double> probs(k, 0.0);
            for (std::size_t i = 0; i < k; ++i) {
                if (boot[i] == 0.0) continue;
                std::size_t j = i;
                for (std::size_t t = 1; t <= act.period; ++t) {
                    j = act.table[j];
                    probs[j] += boot[i] / static_cast<double>(act.period);
                }
            }
            std::map<Key, double> mass;
            for (std::size_t i = 0; i < k; ++i)
                if (probs[i] > 0.0) mass[{static_cast<double>(i), -1}] = probs[i];
            d.table_ = table_from_counts(mass);
            d.finite_ = true;
            break;
        }
        case V::FixedDistribution: {
            if (!kind.family) throw ConfigError("fixed: family required");
            if (kind.family->support_kind() == SupportKind::FiniteDiscrete) {
                std::map<Key, double> mass;
                for (double v : kind.family->finite_support())
                    mass[{v, -1}] = std::exp(kind.family->log_density(kind.fixed_theta, v));
                d.table_ = table_from_counts(mass);
                d.finite_ = true;
            } else {
                d.cont_family_ = kind.family;
                d.cont_theta_ = kind.fixed_theta;
            }
            break;
        }
        case V::PosteriorPredictive: {
            if (!kind.prior) throw ConfigError("posterior_predictive: prior required");
            const bayes::Posterior post = bayes::update(*kind.prior, X);
            if (const auto* bb = std::get_if<bayes::BetaBernoulli>(&post.model)) {
                const double p1 = bayes::predictive_one(*bb);
                std::map<Key, double> mass;
                mass[{0.0, -1}] = 1.0 - p1;
                mass[{1.0, -1}] = p1;
                d.table_ = table_from_counts(mass);
                d.finite_ = true;
            } else {
                const auto& nn = std::get<bayes::NormalNormal>(post.model);
                d.normal_predictive_ = true;
                d.pred_mean_ = nn.mean;
                d.pred_var_ = nn.variance + 1.0;  // known data variance 1
            }
            break;
        }
    }
    return d;
}

double SynthDist::conditional_log_density(double s) const {
    return conditional_log_density(s, std::nullopt);
}

double SynthDist::conditional_log_density(double s, std::optional<int> label) const {
    if (kind_.variant == GeneratorKind::Variant::ClassReweight && !label)
        throw SchemaError("class_reweight: conditional density requires a label");
    if (finite_) {
        for (const auto& pt : table_) {
            if (pt.value == s && pt.label == label) return std::log(pt.prob);
            // label-free kinds: ignore supplied label
            if (pt.value == s && !pt.label && kind_.variant != GeneratorKind::Variant::ClassReweight)
                return std::log(pt.prob);
        }
        return kLogZero;
    }
    if (normal_predictive_) {
        const double z = s - pred_mean_;
        return -0.5 * z * z / pred_var_ -
               0.5 * std::log(2.0 * 3.14159265358979323846 * pred_var_);
    }
    if (!cont_family_->in_support(s)) return kLogZero;
    return cont_family_->log_density(cont_theta_, s);
}

Sample SynthDist::sample(std::size_t m, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<double> obs;
    obs.reserve(m);
    if (finite_) {
        std::vector<double> weights;
        weights.reserve(table_.size());
        bool labelled = false;
        for (const auto& pt : table_) {
            weights.push_back(pt.prob);
            labelled = labelled || pt.label.has_value();
        }
        std::vector<int> labels;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& pt = table_[rng.categorical(weights)];
            obs.push_back(pt.value);
            if (labelled) labels.push_back(pt.label.value_or(-1));
        }
        if (labelled) return Sample(std::move(obs), std::move(labels));
        return Sample(std::move(obs));
    }
    if (normal_predictive_) {
        const double sd = std::sqrt(pred_var_);
        for (std::size_t i = 0; i < m; ++i)
            obs.push_back(pred_mean_ + sd * normal_quantile(rng.uniform()));
        return Sample(std::move(obs));
    }
    for (std::size_t i = 0; i < m; ++i)
        obs.push_back(cont_family_->quantile(cont_theta_, rng.uniform()));
    return Sample(std::move(obs));
}

const std::vector<SupportPoint>& SynthDist::enumerate_support() const {
    if (!finite_)
        throw UnsupportedError(std::string(kind_.name()) +
                               ": support is not finite, cannot enumerate");
    return table_;
}

}  // namespace synthinfo
