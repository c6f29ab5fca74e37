#include "synthinfo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "synthinfo/bayes.hpp"
#include "synthinfo/info.hpp"

namespace synthinfo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

struct ScenarioOutput {
    std::string csv;
    nlohmann::json aggregates;
    std::vector<Verdict> verdicts;
};

void add_verdict(std::vector<Verdict>& out, const std::string& name, bool pass,
                 double value, double threshold) {
    out.push_back(Verdict{name, pass, value, threshold});
}

const std::vector<double> kBernoulliGrid = {0.1, 0.3, 0.5, 0.7, 0.9};

// ---------------------------------------------------------------- theorem1

ScenarioOutput scenario_theorem1(const ExperimentConfig& cfg) {
    const auto family = make_family(cfg.family);
    const GeneratorKind kind = kind_from_config(cfg);
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "theta,n,m,i_x,i_s,i_xs,i_s_given_x,i_x_given_s\n";
    double max_marginal = 0.0, max_joint_dev = 0.0;
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::size_t m = 1; m <= 3; ++m) {
            for (double theta : kBernoulliGrid) {
                const InfoDecomposition dec =
                    exact_decomposition(*family, kind, theta, n, m);
                csv << fmt(theta) << ',' << n << ',' << m << ',' << fmt(dec.i_x.value)
                    << ',' << fmt(dec.i_s.value) << ',' << fmt(dec.i_xs.value) << ','
                    << fmt(dec.i_s_given_x.value) << ',' << fmt(dec.i_x_given_s.value)
                    << '\n';
                max_marginal = std::max(max_marginal, std::fabs(dec.i_s_given_x.value));
                const double analytic =
                    static_cast<double>(n) * family->unit_fisher(theta);
                max_joint_dev =
                    std::max(max_joint_dev, std::fabs(dec.i_xs.value - analytic));
            }
        }
    }
    out.csv = csv.str();
    out.aggregates["max_abs_i_s_given_x"] = max_marginal;
    out.aggregates["max_abs_i_xs_minus_analytic"] = max_joint_dev;
    add_verdict(out.verdicts, "marginal_info_zero", max_marginal <= 1e-8, max_marginal,
                1e-8);
    add_verdict(out.verdicts, "joint_equals_analytic", max_joint_dev <= 1e-6,
                max_joint_dev, 1e-6);
    return out;
}

// ----------------------------------------------------------- theorem2_sweep

ScenarioOutput scenario_theorem2(const ExperimentConfig& cfg) {
    const auto family = make_family(cfg.family);
    const GeneratorKind boot = GeneratorKind::bootstrap();
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "kind,theta,n,m,i_x,i_s,n_unit_fisher\n";
    double max_excess_x = -1e30, max_excess_unit = -1e30;
    double min_boot_i_s = 1e30, max_fixed_i_s = 0.0;
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::size_t m = 1; m <= 3; ++m) {
            for (double theta : kBernoulliGrid) {
                const double n_unit = static_cast<double>(n) * family->unit_fisher(theta);
                const InfoDecomposition dec =
                    exact_decomposition(*family, boot, theta, n, m);
                csv << "bootstrap," << fmt(theta) << ',' << n << ',' << m << ','
                    << fmt(dec.i_x.value) << ',' << fmt(dec.i_s.value) << ','
                    << fmt(n_unit) << '\n';
                max_excess_x = std::max(max_excess_x, dec.i_s.value - dec.i_x.value);
                max_excess_unit = std::max(max_excess_unit, dec.i_s.value - n_unit);
                min_boot_i_s = std::min(min_boot_i_s, dec.i_s.value);

                const GeneratorKind fixed =
                    GeneratorKind::fixed(family, cfg.fixed_theta);
                const InfoDecomposition decf =
                    exact_decomposition(*family, fixed, theta, n, m);
                csv << "fixed," << fmt(theta) << ',' << n << ',' << m << ','
                    << fmt(decf.i_x.value) << ',' << fmt(decf.i_s.value) << ','
                    << fmt(n_unit) << '\n';
                max_fixed_i_s = std::max(max_fixed_i_s, std::fabs(decf.i_s.value));
            }
        }
    }
    out.csv = csv.str();
    out.aggregates["max_i_s_minus_i_x"] = max_excess_x;
    out.aggregates["max_i_s_minus_n_unit_fisher"] = max_excess_unit;
    out.aggregates["min_bootstrap_i_s"] = min_boot_i_s;
    out.aggregates["max_fixed_abs_i_s"] = max_fixed_i_s;
    add_verdict(out.verdicts, "i_s_bounded_by_i_x", max_excess_x <= 1e-8, max_excess_x,
                1e-8);
    add_verdict(out.verdicts, "i_s_bounded_by_n_unit_fisher", max_excess_unit <= 1e-8,
                max_excess_unit, 1e-8);
    add_verdict(out.verdicts, "bootstrap_i_s_informative", min_boot_i_s > 0.01,
                min_boot_i_s, 0.01);
    add_verdict(out.verdicts, "fixed_i_s_zero", max_fixed_i_s <= 1e-10, max_fixed_i_s,
                1e-10);
    return out;
}

// --------------------------------------------------------- degenerate_fixed

ScenarioOutput scenario_degenerate_fixed(const ExperimentConfig& cfg) {
    const auto family = make_family(cfg.family);
    const GeneratorKind fixed = GeneratorKind::fixed(family, cfg.fixed_theta);
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "theta,n,m,i_s\n";
    double max_i_s = 0.0;
    for (double theta : kBernoulliGrid) {
        const InfoDecomposition dec =
            exact_decomposition(*family, fixed, theta, cfg.n, cfg.m);
        csv << fmt(theta) << ',' << cfg.n << ',' << cfg.m << ',' << fmt(dec.i_s.value)
            << '\n';
        max_i_s = std::max(max_i_s, std::fabs(dec.i_s.value));
    }
    out.csv = csv.str();
    out.aggregates["max_abs_i_s"] = max_i_s;
    add_verdict(out.verdicts, "i_s_zero", max_i_s <= 1e-10, max_i_s, 1e-10);
    return out;
}

// ------------------------------------------------------------ decomposition

struct ProbeSpec {
    std::string family;
    std::string kind;
    std::vector<double> theta_grid;
    double theta_draw;
    bool check_k_log_n;  // continuous X, so the bootstrap pmf is 1/n per point
};

ScenarioOutput scenario_decomposition(const ExperimentConfig& cfg) {
    const std::vector<ProbeSpec> specs = {
        {"normal_mu", "bootstrap", {-1.0, -0.5, 0.0, 0.5, 1.0}, 0.3, true},
        {"exponential", "bootstrap", {0.5, 1.0, 1.5, 2.0, 2.5}, 1.2, true},
        {"bernoulli", "bootstrap", kBernoulliGrid, 0.6, false},
        {"bernoulli", "fixed", kBernoulliGrid, 0.6, false},
        {"bernoulli", "posterior_predictive", kBernoulliGrid, 0.6, false},
    };
    const std::size_t probes_per_spec = 20;

    ScenarioOutput out;
    std::ostringstream csv;
    csv << "probe,family,kind,n,k,max_dev,const_part,boot_identity_dev\n";
    double worst_dev = 0.0, worst_boot = 0.0;
    std::size_t probe_id = 0;
    for (const auto& spec : specs) {
        const auto family = make_family(spec.family);
        ExperimentConfig kind_cfg = cfg;
        kind_cfg.family = spec.family;
        kind_cfg.kind = spec.kind;
        const GeneratorKind kind = kind_from_config(kind_cfg);
        for (std::size_t rep = 0; rep < probes_per_spec; ++rep, ++probe_id) {
            const std::size_t n = 8 + rep % 5;
            const std::size_t k = 5 + rep % 7;
            const Sample X =
                family->draw(spec.theta_draw, n, derive_seed(cfg.seed, 2 * probe_id));
            const SynthDist d = SynthDist::fit(kind, X);
            const Sample S = d.sample(k, derive_seed(cfg.seed, 2 * probe_id + 1));

            double max_dev = 0.0;
            double const_part = 0.0;
            for (std::size_t gi = 0; gi < spec.theta_grid.size(); ++gi) {
                const DecomposedLoglik dl =
                    decomposed_loglik(*family, X, d, S, spec.theta_grid[gi]);
                if (gi == 0) const_part = dl.const_part;
                max_dev = std::max(
                    max_dev, std::fabs((dl.total - dl.real_part) - const_part));
            }
            double boot_dev = 0.0;
            if (spec.check_k_log_n) {
                boot_dev = std::fabs(const_part + static_cast<double>(k) *
                                                      std::log(static_cast<double>(n)));
                worst_boot = std::max(worst_boot, boot_dev);
            }
            worst_dev = std::max(worst_dev, max_dev);
            csv << probe_id << ',' << spec.family << ',' << spec.kind << ',' << n << ','
                << k << ',' << fmt(max_dev) << ',' << fmt(const_part) << ','
                << fmt(boot_dev) << '\n';
        }
    }
    out.csv = csv.str();
    out.aggregates["max_decomposition_dev"] = worst_dev;
    out.aggregates["max_bootstrap_identity_dev"] = worst_boot;
    add_verdict(out.verdicts, "decomposition_constant_in_theta", worst_dev <= 1e-12,
                worst_dev, 1e-12);
    add_verdict(out.verdicts, "bootstrap_const_is_minus_k_log_n", worst_boot <= 5e-12,
                worst_boot, 5e-12);
    return out;
}

// ----------------------------------------------------------- mc_consistency

ScenarioOutput scenario_mc_consistency(const ExperimentConfig& cfg) {
    const auto family = make_family(cfg.family);
    const GeneratorKind kind = kind_from_config(cfg);
    const InfoEstimate est = mc_fisher_marginal(InfoTarget::X, *family, kind,
                                                cfg.theta_true, cfg.n, cfg.m,
                                                cfg.n_reps, cfg.seed);
    const double analytic =
        static_cast<double>(cfg.n) * family->unit_fisher(cfg.theta_true);
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "target,estimate,std_error,n_reps,analytic\n";
    csv << "X," << fmt(est.value) << ',' << fmt(est.std_error) << ',' << est.n_reps
        << ',' << fmt(analytic) << '\n';
    out.csv = csv.str();
    const double dev = std::fabs(est.value - analytic);
    out.aggregates["estimate"] = est.value;
    out.aggregates["std_error"] = est.std_error;
    out.aggregates["analytic"] = analytic;
    add_verdict(out.verdicts, "mc_within_4_std_errors", dev <= 4.0 * est.std_error, dev,
                4.0 * est.std_error);
    return out;
}

// --------------------------------------------------------------- reflection

ScenarioOutput scenario_reflection(const ExperimentConfig& cfg) {
    const std::vector<double> hypers = {0.5, 1.0, 2.0, 8.0};
    const std::vector<double> obs_space = {0.0, 1.0};
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "alpha,beta,event,lhs,rhs,abs_diff\n";
    double worst = 0.0;
    for (double a : hypers) {
        for (double b : hypers) {
            const bayes::Posterior p{bayes::BetaBernoulli{a, b}, 0};
            const std::vector<std::pair<std::string, bayes::EventDescriptor>> events = {
                {"next_one", bayes::NextObsEvent{1.0}},
                {"p_gt_half", bayes::IntervalEvent{0.5}},
            };
            for (const auto& [name, ev] : events) {
                const bayes::ReflectionResult r =
                    bayes::reflection_check(p, ev, obs_space);
                const double diff = std::fabs(r.lhs - r.rhs);
                worst = std::max(worst, diff);
                csv << fmt(a) << ',' << fmt(b) << ',' << name << ',' << fmt(r.lhs)
                    << ',' << fmt(r.rhs) << ',' << fmt(diff) << '\n';
            }
        }
    }
    (void)cfg;
    out.csv = csv.str();
    out.aggregates["max_abs_diff"] = worst;
    add_verdict(out.verdicts, "reflection_identity", worst <= 1e-12, worst, 1e-12);
    return out;
}

// ----------------------------------------------------------- se_calibration

ScenarioOutput scenario_se_calibration(const ExperimentConfig& cfg) {
    const auto family = make_family(cfg.family);
    const GeneratorKind kind = kind_from_config(cfg);
    std::vector<std::size_t> schedule = cfg.k_schedule;
    if (schedule.empty()) schedule = {0, 50, 200, 450};

    ScenarioOutput out;
    std::ostringstream csv;
    csv << "k,replicate,theta_hat_naive,se_naive,se_correct,covered\n";

    std::vector<double> coverages;
    double worst_ratio_dev = 0.0;
    nlohmann::json per_k = nlohmann::json::array();
    for (std::size_t ki = 0; ki < schedule.size(); ++ki) {
        const std::size_t k = schedule[ki];
        const CalibrationReport rep = se_calibration_report(
            *family, kind, cfg.theta_true, cfg.n, k, cfg.n_reps,
            derive_seed(cfg.seed, ki));
        for (const auto& row : rep.rows) {
            csv << k << ',' << row.replicate << ',' << fmt(row.theta_hat_naive) << ','
                << fmt(row.se_naive) << ',' << fmt(row.se_correct) << ','
                << (row.covered ? 1 : 0) << '\n';
        }
        coverages.push_back(rep.coverage);
        const double ratio_dev =
            std::fabs(rep.se_ratio / rep.expected_se_ratio - 1.0);
        worst_ratio_dev = std::max(worst_ratio_dev, ratio_dev);
        per_k.push_back({{"k", k},
                         {"coverage", rep.coverage},
                         {"empirical_sd", rep.empirical_sd_theta_hat},
                         {"mean_se_naive", rep.mean_se_naive},
                         {"mean_se_correct", rep.mean_se_correct},
                         {"se_ratio", rep.se_ratio},
                         {"expected_se_ratio", rep.expected_se_ratio}});
    }
    bool strictly_decreasing = true;
    for (std::size_t i = 1; i < coverages.size(); ++i)
        if (!(coverages[i] < coverages[i - 1])) strictly_decreasing = false;
    const double drop = coverages.front() - coverages.back();

    out.csv = csv.str();
    out.aggregates["per_k"] = per_k;
    out.aggregates["coverage_drop"] = drop;
    add_verdict(out.verdicts, "se_ratio_matches_shrinkage", worst_ratio_dev <= 0.05,
                worst_ratio_dev, 0.05);
    add_verdict(out.verdicts, "coverage_strictly_decreasing", strictly_decreasing,
                strictly_decreasing ? 1.0 : 0.0, 1.0);
    add_verdict(out.verdicts, "coverage_drop_at_least_10pp", drop >= 0.10, drop, 0.10);
    return out;
}

// ---------------------------------------------------------------- censoring

ScenarioOutput scenario_censoring(const ExperimentConfig& cfg) {
    const auto family = make_family("bernoulli");
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "replicate,h_obs,t_obs,theta_corrected,theta_ignore,theta_augment\n";
    std::vector<double> corrected, ignored, augmented;
    for (std::size_t rep = 0; rep < cfg.n_reps; ++rep) {
        const Sample X = family->draw(cfg.theta_true, cfg.n, derive_seed(cfg.seed, rep));
        const Sample observed = censor_every_second_h(X);
        std::size_t h_obs = 0;
        for (double x : observed.observations)
            if (x == 1.0) ++h_obs;
        const std::size_t t_obs = observed.size() - h_obs;

        const double theta_c = censored_mle(cfg.n, h_obs, t_obs);
        const double theta_i =
            static_cast<double>(h_obs) / static_cast<double>(h_obs + t_obs);
        const std::size_t reinserted = h_obs / 2;  // one 1 per observed pair of 1s
        const double theta_a = static_cast<double>(h_obs + reinserted) /
                               static_cast<double>(h_obs + t_obs + reinserted);

        corrected.push_back(theta_c);
        ignored.push_back(theta_i);
        augmented.push_back(theta_a);
        csv << rep << ',' << h_obs << ',' << t_obs << ',' << fmt(theta_c) << ','
            << fmt(theta_i) << ',' << fmt(theta_a) << '\n';
    }
    const double bias_c = mean_of(corrected) - cfg.theta_true;
    const double bias_i = mean_of(ignored) - cfg.theta_true;
    const double bias_a = mean_of(augmented) - cfg.theta_true;
    out.csv = csv.str();
    out.aggregates["mean_bias_corrected"] = bias_c;
    out.aggregates["mean_bias_ignore"] = bias_i;
    out.aggregates["mean_bias_augment"] = bias_a;
    add_verdict(out.verdicts, "corrected_bias_small", std::fabs(bias_c) < 0.01,
                std::fabs(bias_c), 0.01);
    add_verdict(out.verdicts, "ignore_bias_negative", bias_i < -0.05, bias_i, -0.05);
    return out;
}

// ------------------------------------------------------------------ overlap

ScenarioOutput scenario_overlap(const ExperimentConfig& cfg) {
    const auto family = make_family("bernoulli");
    const std::size_t k = cfg.k_schedule.empty() ? cfg.n : cfg.k_schedule.back();
    const std::vector<double> rhos = {0.0, 0.5, 1.0};
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "rho,replicate,theta_pooled,se_naive,theta_solo\n";
    nlohmann::json per_rho = nlohmann::json::array();
    double sd_solo_at_rho1 = 0.0, sd_pooled_at_rho1 = 0.0, se_naive_at_rho1 = 0.0;
    double sd_solo_at_rho0 = 0.0, sd_pooled_at_rho0 = 0.0;
    for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
        const double rho = rhos[ri];
        const std::size_t shared = static_cast<std::size_t>(
            std::llround(rho * static_cast<double>(cfg.n)));
        std::vector<double> pooled_hats, solo_hats, naive_ses;
        for (std::size_t rep = 0; rep < cfg.n_reps; ++rep) {
            const std::uint64_t base = derive_seed(cfg.seed, ri * cfg.n_reps + rep);
            const Sample X = family->draw(cfg.theta_true, cfg.n, derive_seed(base, 0));
            // third-party data shares the first `shared` observational units
            Sample xprime;
            xprime.observations.assign(
                X.observations.begin(),
                X.observations.begin() + static_cast<std::ptrdiff_t>(shared));
            const Sample fresh =
                family->draw(cfg.theta_true, cfg.n - shared, derive_seed(base, 1));
            xprime.append(fresh);
            const SynthDist sprime =
                SynthDist::fit(GeneratorKind::bootstrap(), xprime);
            const Sample S = sprime.sample(k, derive_seed(base, 2));

            const MleFit naive = naive_pooled_fit(*family, X, S);
            const MleFit solo = fit_mle(*family, X);
            pooled_hats.push_back(naive.theta_hat);
            naive_ses.push_back(naive.standard_error);
            solo_hats.push_back(solo.theta_hat);
            csv << fmt(rho) << ',' << rep << ',' << fmt(naive.theta_hat) << ','
                << fmt(naive.standard_error) << ',' << fmt(solo.theta_hat) << '\n';
        }
        const double sd_pooled = sd_of(pooled_hats);
        const double sd_solo = sd_of(solo_hats);
        const double mean_se = mean_of(naive_ses);
        per_rho.push_back({{"rho", rho},
                           {"empirical_sd_pooled", sd_pooled},
                           {"empirical_sd_solo", sd_solo},
                           {"mean_se_naive", mean_se}});
        if (rho == 1.0) {
            sd_pooled_at_rho1 = sd_pooled;
            sd_solo_at_rho1 = sd_solo;
            se_naive_at_rho1 = mean_se;
        }
        if (rho == 0.0) {
            sd_pooled_at_rho0 = sd_pooled;
            sd_solo_at_rho0 = sd_solo;
        }
    }
    out.csv = csv.str();
    out.aggregates["per_rho"] = per_rho;
    add_verdict(out.verdicts, "disjoint_third_party_reduces_sd",
                sd_pooled_at_rho0 < 0.95 * sd_solo_at_rho0, sd_pooled_at_rho0,
                0.95 * sd_solo_at_rho0);
    add_verdict(out.verdicts, "full_overlap_naive_se_miscalibrated",
                se_naive_at_rho1 < 0.8 * sd_pooled_at_rho1, se_naive_at_rho1,
                0.8 * sd_pooled_at_rho1);
    (void)sd_solo_at_rho1;
    return out;
}

// ---------------------------------------------------------------- stability

ScenarioOutput scenario_stability(const ExperimentConfig& cfg) {
    const auto family = make_family("bernoulli");
    const Sample X = family->draw(cfg.theta_true, cfg.n, derive_seed(cfg.seed, 0));
    std::vector<std::size_t> schedule = cfg.k_schedule;
    if (schedule.empty()) schedule = {0, 50, 200, 450};
    const bayes::ConjugateModel prior =
        bayes::BetaBernoulli{cfg.prior_alpha, cfg.prior_beta};
    const bayes::StabilityReport rep = bayes::posterior_stability_check(
        prior, X, schedule, derive_seed(cfg.seed, 1));
    ScenarioOutput out;
    std::ostringstream csv;
    csv << "k,coherent_predictive,naive_predictive,naive_sd,predictive_discrepancy\n";
    double max_coherent_drift = 0.0;
    bool naive_sd_decreasing = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        csv << row.k << ',' << fmt(row.coherent_predictive) << ','
            << fmt(row.naive_predictive) << ',' << fmt(row.naive_sd) << ','
            << fmt(row.predictive_discrepancy) << '\n';
        max_coherent_drift =
            std::max(max_coherent_drift, std::fabs(row.coherent_predictive -
                                                   rep.rows.front().coherent_predictive));
        if (i > 0 && rep.rows[i].k > rep.rows[i - 1].k &&
            !(row.naive_sd < rep.rows[i - 1].naive_sd))
            naive_sd_decreasing = false;
    }
    out.csv = csv.str();
    out.aggregates["max_coherent_drift"] = max_coherent_drift;
    add_verdict(out.verdicts, "coherent_predictive_constant",
                max_coherent_drift <= 1e-12, max_coherent_drift, 1e-12);
    add_verdict(out.verdicts, "naive_sd_decreasing_in_k", naive_sd_decreasing,
                naive_sd_decreasing ? 1.0 : 0.0, 1.0);
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        cfg.scenario = j.at("scenario").get<std::string>();
        if (!j.contains("seed")) throw ConfigError("config: seed is required");
        cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("family")) cfg.family = j["family"].get<std::string>();
        if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
        if (j.contains("theta_true")) cfg.theta_true = j["theta_true"].get<double>();
        if (j.contains("n")) cfg.n = j["n"].get<std::size_t>();
        if (j.contains("m")) cfg.m = j["m"].get<std::size_t>();
        if (j.contains("k_schedule"))
            cfg.k_schedule = j["k_schedule"].get<std::vector<std::size_t>>();
        if (j.contains("n_reps")) cfg.n_reps = j["n_reps"].get<std::size_t>();
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
        if (j.contains("fixed_theta")) cfg.fixed_theta = j["fixed_theta"].get<double>();
        if (j.contains("prior_alpha")) cfg.prior_alpha = j["prior_alpha"].get<double>();
        if (j.contains("prior_beta")) cfg.prior_beta = j["prior_beta"].get<double>();
        if (j.contains("perm_file")) cfg.perm_file = j["perm_file"].get<std::string>();
        if (j.contains("perm_period"))
            cfg.perm_period = j["perm_period"].get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{{"scenario", scenario},
                          {"family", family},
                          {"kind", kind},
                          {"theta_true", theta_true},
                          {"n", n},
                          {"m", m},
                          {"k_schedule", k_schedule},
                          {"n_reps", n_reps},
                          {"seed", seed},
                          {"out_dir", out_dir},
                          {"fixed_theta", fixed_theta},
                          {"prior_alpha", prior_alpha},
                          {"prior_beta", prior_beta},
                          {"perm_file", perm_file},
                          {"perm_period", perm_period}};
}

void ExperimentConfig::validate() const {
    if (scenario.empty()) throw ConfigError("config: scenario is required");
    if (n_reps < 1) throw ConfigError("config: n_reps must be >= 1");
}

GeneratorKind kind_from_config(const ExperimentConfig& cfg) {
    if (cfg.kind == "bootstrap") return GeneratorKind::bootstrap();
    if (cfg.kind == "param_bootstrap")
        return GeneratorKind::param_bootstrap(make_family(cfg.family));
    if (cfg.kind == "class_reweight") return GeneratorKind::class_reweight();
    if (cfg.kind == "fixed")
        return GeneratorKind::fixed(make_family(cfg.family), cfg.fixed_theta);
    if (cfg.kind == "posterior_predictive")
        return GeneratorKind::posterior_predictive(
            bayes::BetaBernoulli{cfg.prior_alpha, cfg.prior_beta});
    if (cfg.kind == "symmetry") {
        if (cfg.perm_file.empty())
            throw ConfigError("symmetry kind requires perm_file");
        return GeneratorKind::symmetry(
            PermutationAction::load_csv(cfg.perm_file, cfg.perm_period));
    }
    throw ConfigError("unknown generator kind: " + cfg.kind);
}

std::vector<std::string> scenario_names() {
    return {"theorem1",   "theorem2_sweep", "degenerate_fixed", "decomposition",
            "mc_consistency", "reflection", "se_calibration",   "censoring",
            "overlap",    "stability"};
}

Sample censor_every_second_h(const Sample& seq) {
    Sample out;
    std::size_t ones_seen = 0;
    for (double x : seq.observations) {
        if (x != 0.0 && x != 1.0)
            throw DomainError("censor_every_second_h: binary sequences only");
        if (x == 1.0) {
            ++ones_seen;
            if (ones_seen % 2 == 0) continue;  // drop the 2nd, 4th, ...
        }
        out.observations.push_back(x);
    }
    return out;
}

double censored_loglik(std::size_t n, std::size_t h_obs, std::size_t t_obs,
                       double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ParameterError("censored_loglik: theta outside (0,1)");
    if (t_obs > n) throw DataError("censored_loglik: t_obs exceeds n");
    const std::size_t max_h = n - t_obs;
    std::vector<std::size_t> latent;
    if (h_obs == 0) {
        latent.push_back(0);
    } else {
        if (2 * h_obs - 1 <= max_h) latent.push_back(2 * h_obs - 1);
        if (2 * h_obs <= max_h) latent.push_back(2 * h_obs);
    }
    if (latent.empty())
        throw DataError("censored_loglik: no latent count consistent with data");
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    for (std::size_t h : latent) {
        const double lc = std::lgamma(static_cast<double>(n) + 1.0) -
                          std::lgamma(static_cast<double>(h) + 1.0) -
                          std::lgamma(static_cast<double>(n - h) + 1.0);
        const double t = lc + static_cast<double>(h) * std::log(theta) +
                         static_cast<double>(n - h) * std::log1p(-theta);
        terms.push_back(t);
        best = std::max(best, t);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - best);
    return best + std::log(acc);
}

double censored_mle(std::size_t n, std::size_t h_obs, std::size_t t_obs) {
    return golden_section_maximize(
        [&](double theta) { return censored_loglik(n, h_obs, t_obs, theta); }, 1e-9,
        1.0 - 1e-9, 1e-10);
}

Sample load_csv_dataset(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset " + path.string() + ": empty file");

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        return cells;
    };
    const std::vector<std::string> header = split(line);
    auto find_col = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw SchemaError("dataset " + path.string() + ": missing column '" + name + "'");
    };
    const std::size_t vcol = find_col(schema.value_column);
    std::optional<std::size_t> lcol;
    if (schema.label_column) lcol = find_col(*schema.label_column);

    Sample out;
    if (lcol) out.labels.emplace();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() <= vcol || (lcol && cells.size() <= *lcol))
            throw SchemaError("dataset " + path.string() + ": short row " +
                              std::to_string(row));
        try {
            std::size_t pos = 0;
            const double v = std::stod(cells[vcol], &pos);
            if (pos != cells[vcol].size()) throw std::invalid_argument("trailing");
            out.observations.push_back(v);
            if (lcol) out.labels->push_back(std::stoi(cells[*lcol]));
        } catch (const std::exception&) {
            throw DataError("dataset " + path.string() + ": non-numeric value at row " +
                            std::to_string(row));
        }
    }
    return out;
}

ExperimentReport run_scenario(const ExperimentConfig& cfg) {
    cfg.validate();
    ScenarioOutput so;
    if (cfg.scenario == "theorem1")
        so = scenario_theorem1(cfg);
    else if (cfg.scenario == "theorem2_sweep")
        so = scenario_theorem2(cfg);
    else if (cfg.scenario == "degenerate_fixed")
        so = scenario_degenerate_fixed(cfg);
    else if (cfg.scenario == "decomposition")
        so = scenario_decomposition(cfg);
    else if (cfg.scenario == "mc_consistency")
        so = scenario_mc_consistency(cfg);
    else if (cfg.scenario == "reflection")
        so = scenario_reflection(cfg);
    else if (cfg.scenario == "se_calibration")
        so = scenario_se_calibration(cfg);
    else if (cfg.scenario == "censoring")
        so = scenario_censoring(cfg);
    else if (cfg.scenario == "overlap")
        so = scenario_overlap(cfg);
    else if (cfg.scenario == "stability")
        so = scenario_stability(cfg);
    else
        throw ConfigError("unknown scenario: " + cfg.scenario);

    if (so.verdicts.empty())
        throw Error("scenario produced no verdicts; report cannot be emitted");

    ExperimentReport report;
    report.config = cfg;
    report.aggregates = so.aggregates;
    report.verdicts = so.verdicts;

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    report.csv_path = dir / (cfg.scenario + "_replicates.csv");
    report.json_path = dir / (cfg.scenario + "_report.json");

    {
        std::ofstream csv(report.csv_path, std::ios::binary);
        csv << so.csv;
    }
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["aggregates"] = so.aggregates;
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : report.verdicts)
        verdicts.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"value", v.value},
                            {"threshold", v.threshold}});
    j["verdicts"] = verdicts;
    {
        std::ofstream out(report.json_path, std::ios::binary);
        out << j.dump(2) << '\n';
    }
    return report;
}

ExperimentReport censoring_case_study(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.scenario = "censoring";
    return run_scenario(c);
}

ExperimentReport overlap_demo(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.scenario = "overlap";
    return run_scenario(c);
}

}  // namespace synthinfo
