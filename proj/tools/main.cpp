#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "synthinfo/bayes.hpp"
#include "synthinfo/experiments.hpp"
#include "synthinfo/info.hpp"
#include "synthinfo/mle.hpp"
#include "synthinfo/synth.hpp"

namespace {

using nlohmann::json;
using namespace synthinfo;

// Flags mirror JSON config keys one-to-one; a run is expressible either way.
struct KindOptions {
    std::string kind = "bootstrap";
    std::string family = "bernoulli";
    double fixed_theta = 0.5;
    double prior_alpha = 1.0;
    double prior_beta = 1.0;
    std::string perm_file;
    std::size_t perm_period = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "generator kind")->capture_default_str();
        cmd->add_option("--family", family, "model family")->capture_default_str();
        cmd->add_option("--fixed-theta", fixed_theta, "parameter of the fixed kind");
        cmd->add_option("--prior-alpha", prior_alpha, "Beta prior alpha");
        cmd->add_option("--prior-beta", prior_beta, "Beta prior beta");
        cmd->add_option("--perm", perm_file, "permutation CSV for the symmetry kind");
        cmd->add_option("--period", perm_period, "period of the symmetry action");
    }

    GeneratorKind build() const {
        ExperimentConfig cfg;
        cfg.scenario = "-";
        cfg.kind = kind;
        cfg.family = family;
        cfg.fixed_theta = fixed_theta;
        cfg.prior_alpha = prior_alpha;
        cfg.prior_beta = prior_beta;
        cfg.perm_file = perm_file;
        cfg.perm_period = perm_period;
        return kind_from_config(cfg);
    }
};

struct DataOptions {
    std::string path;
    std::string value_col = "y";
    std::string label_col;

    void attach(CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--data", path, "CSV dataset");
        if (required) opt->required();
        cmd->add_option("--value-col", value_col, "value column name")
            ->capture_default_str();
        cmd->add_option("--label-col", label_col, "optional label column name");
    }

    Sample load() const {
        CsvSchema schema;
        schema.value_column = value_col;
        if (!label_col.empty()) schema.label_column = label_col;
        return load_csv_dataset(path, schema);
    }
};

json estimate_json(const InfoEstimate& e) {
    const char* method = e.method == InfoMethod::Exact ? "exact"
                         : e.method == InfoMethod::MonteCarlo ? "monte_carlo"
                                                              : "analytic";
    return json{{"value", e.value},
                {"method", method},
                {"std_error", e.std_error},
                {"n_reps", e.n_reps}};
}

json decomposition_json(const InfoDecomposition& d) {
    return json{{"theta", d.theta},
                {"n", d.n},
                {"m", d.m},
                {"i_x", estimate_json(d.i_x)},
                {"i_s", estimate_json(d.i_s)},
                {"i_xs", estimate_json(d.i_xs)},
                {"i_s_given_x", estimate_json(d.i_s_given_x)},
                {"i_x_given_s", estimate_json(d.i_x_given_s)}};
}

json fit_json(const MleFit& f) {
    return json{{"theta_hat", f.theta_hat},
                {"observed_information", f.observed_information},
                {"standard_error", f.standard_error},
                {"loglik_at_max", f.loglik_at_max},
                {"data_size", f.data_size}};
}

std::vector<std::size_t> parse_schedule(const std::string& s) {
    std::vector<std::size_t> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoull(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic-data information accounting harness"};
    app.require_subcommand(1);

    int rc = 0;

    // ------------------------------------------------------------- families
    auto* families = app.add_subcommand("families", "model family registry");
    families->require_subcommand(1);
    auto* fam_list = families->add_subcommand("list", "list available families");
    fam_list->callback([] {
        for (const auto& n : family_names()) std::cout << n << '\n';
    });
    {
        auto* describe = families->add_subcommand("describe", "family properties");
        auto family = std::make_shared<std::string>("bernoulli");
        auto theta = std::make_shared<double>(0.5);
        describe->add_option("--family", *family)->required();
        describe->add_option("--theta", *theta)->required();
        describe->callback([family, theta] {
            const auto fam = make_family(*family);
            json j{{"name", fam->name()},
                   {"unit_fisher", fam->unit_fisher(*theta)},
                   {"theta", *theta}};
            std::cout << j.dump(2) << '\n';
        });
    }

    // ---------------------------------------------------------------- synth
    auto* synth = app.add_subcommand("synth", "synthetic distribution generators");
    synth->require_subcommand(1);
    {
        auto* fit = synth->add_subcommand("fit", "fit a generator and print its support");
        auto ko = std::make_shared<KindOptions>();
        auto dopt = std::make_shared<DataOptions>();
        ko->attach(fit);
        dopt->attach(fit);
        fit->callback([ko, dopt] {
            const SynthDist d = SynthDist::fit(ko->build(), dopt->load());
            json j{{"kind", d.kind().name()}, {"fitted_on_size", d.fitted_on().size()}};
            if (d.has_finite_support()) {
                json table = json::array();
                for (const auto& pt : d.enumerate_support()) {
                    json row{{"value", pt.value}, {"prob", pt.prob}};
                    if (pt.label) row["label"] = *pt.label;
                    table.push_back(row);
                }
                j["support"] = table;
            } else {
                j["support"] = "infinite";
            }
            std::cout << j.dump(2) << '\n';
        });
    }
    {
        auto* smp = synth->add_subcommand("sample", "draw from a fitted generator");
        auto ko = std::make_shared<KindOptions>();
        auto dopt = std::make_shared<DataOptions>();
        auto m = std::make_shared<std::size_t>(10);
        auto seed = std::make_shared<std::uint64_t>(0);
        ko->attach(smp);
        dopt->attach(smp);
        smp->add_option("--m", *m, "number of draws");
        smp->add_option("--seed", *seed, "rng seed")->required();
        smp->callback([ko, dopt, m, seed] {
            const SynthDist d = SynthDist::fit(ko->build(), dopt->load());
            const Sample s = d.sample(*m, *seed);
            std::cout << (s.has_labels() ? "value,label\n" : "value\n");
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::cout << s.observations[i];
                if (s.labels) std::cout << ',' << (*s.labels)[i];
                std::cout << '\n';
            }
        });
    }

    // ----------------------------------------------------------------- info
    auto* info = app.add_subcommand("info", "Fisher information accounting");
    info->require_subcommand(1);
    {
        auto* exact = info->add_subcommand("exact", "exact enumeration decomposition");
        auto ko = std::make_shared<KindOptions>();
        auto theta = std::make_shared<double>(0.5);
        auto n = std::make_shared<std::size_t>(3);
        auto m = std::make_shared<std::size_t>(2);
        ko->attach(exact);
        exact->add_option("--theta", *theta)->required();
        exact->add_option("--n", *n)->required();
        exact->add_option("--m", *m)->required();
        exact->callback([ko, theta, n, m] {
            const auto fam = make_family(ko->family);
            const InfoDecomposition dec =
                exact_decomposition(*fam, ko->build(), *theta, *n, *m);
            std::cout << decomposition_json(dec).dump(2) << '\n';
        });
    }
    {
        auto* mc = info->add_subcommand("mc", "Monte Carlo information estimate");
        auto ko = std::make_shared<KindOptions>();
        auto target = std::make_shared<std::string>("X");
        auto theta = std::make_shared<double>(0.5);
        auto n = std::make_shared<std::size_t>(50);
        auto m = std::make_shared<std::size_t>(10);
        auto reps = std::make_shared<std::size_t>(1000);
        auto seed = std::make_shared<std::uint64_t>(0);
        ko->attach(mc);
        mc->add_option("--target", *target, "X | S | XS")->required();
        mc->add_option("--theta", *theta)->required();
        mc->add_option("--n", *n)->required();
        mc->add_option("--m", *m);
        mc->add_option("--reps", *reps);
        mc->add_option("--seed", *seed)->required();
        mc->callback([ko, target, theta, n, m, reps, seed] {
            InfoTarget t;
            if (*target == "X")
                t = InfoTarget::X;
            else if (*target == "S")
                t = InfoTarget::S;
            else if (*target == "XS")
                t = InfoTarget::XS;
            else
                throw ConfigError("target must be X, S, or XS");
            const auto fam = make_family(ko->family);
            const InfoEstimate est =
                mc_fisher_marginal(t, *fam, ko->build(), *theta, *n, *m, *reps, *seed);
            json j = estimate_json(est);
            j["target"] = *target;
            std::cout << j.dump(2) << '\n';
        });
    }

    // ------------------------------------------------------------------ mle
    auto* mle = app.add_subcommand("mle", "maximum likelihood fitting");
    mle->require_subcommand(1);
    {
        auto* fit = mle->add_subcommand("fit", "MLE on a dataset");
        auto family = std::make_shared<std::string>("bernoulli");
        auto dopt = std::make_shared<DataOptions>();
        fit->add_option("--family", *family)->capture_default_str();
        dopt->attach(fit);
        fit->callback([family, dopt] {
            const auto fam = make_family(*family);
            std::cout << fit_json(fit_mle(*fam, dopt->load())).dump(2) << '\n';
        });
    }
    {
        auto* pooled = mle->add_subcommand("pooled", "naive pooled MLE on X and S");
        auto family = std::make_shared<std::string>("bernoulli");
        auto dopt = std::make_shared<DataOptions>();
        auto spath = std::make_shared<std::string>();
        auto svcol = std::make_shared<std::string>("y");
        pooled->add_option("--family", *family)->capture_default_str();
        dopt->attach(pooled);
        pooled->add_option("--synth-data", *spath, "CSV of synthetic draws")->required();
        pooled->add_option("--synth-value-col", *svcol)->capture_default_str();
        pooled->callback([family, dopt, spath, svcol] {
            const auto fam = make_family(*family);
            const Sample S = load_csv_dataset(*spath, CsvSchema{*svcol, std::nullopt});
            std::cout << fit_json(naive_pooled_fit(*fam, dopt->load(), S)).dump(2)
                      << '\n';
        });
    }
    {
        auto* cal = mle->add_subcommand("calibration", "naive-SE calibration study");
        auto ko = std::make_shared<KindOptions>();
        auto theta = std::make_shared<double>(0.6);
        auto n = std::make_shared<std::size_t>(50);
        auto k = std::make_shared<std::size_t>(450);
        auto reps = std::make_shared<std::size_t>(2000);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto out_path = std::make_shared<std::string>();
        ko->attach(cal);
        cal->add_option("--theta", *theta)->capture_default_str();
        cal->add_option("--n", *n)->capture_default_str();
        cal->add_option("--k", *k)->capture_default_str();
        cal->add_option("--reps", *reps)->capture_default_str();
        cal->add_option("--seed", *seed)->required();
        cal->add_option("--out", *out_path, "write per-replicate CSV here");
        cal->callback([ko, theta, n, k, reps, seed, out_path] {
            const auto fam = make_family(ko->family);
            const CalibrationReport rep = se_calibration_report(
                *fam, ko->build(), *theta, *n, *k, *reps, *seed);
            if (!out_path->empty()) {
                std::ofstream csv(*out_path, std::ios::binary);
                csv << "replicate,theta_hat_naive,se_naive,se_correct,covered\n";
                for (const auto& row : rep.rows)
                    csv << row.replicate << ',' << row.theta_hat_naive << ','
                        << row.se_naive << ',' << row.se_correct << ','
                        << (row.covered ? 1 : 0) << '\n';
            }
            json j{{"theta_true", rep.theta_true},
                   {"n", rep.n},
                   {"k", rep.k},
                   {"n_reps", rep.n_reps},
                   {"empirical_sd_theta_hat", rep.empirical_sd_theta_hat},
                   {"mean_se_naive", rep.mean_se_naive},
                   {"mean_se_correct", rep.mean_se_correct},
                   {"coverage", rep.coverage},
                   {"se_ratio", rep.se_ratio},
                   {"expected_se_ratio", rep.expected_se_ratio}};
            std::cout << j.dump(2) << '\n';
        });
    }

    // ---------------------------------------------------------------- bayes
    auto* bayes_cmd = app.add_subcommand("bayes", "conjugate Bayesian updating");
    bayes_cmd->require_subcommand(1);
    {
        auto* upd = bayes_cmd->add_subcommand("update", "conjugate update on data");
        auto alpha = std::make_shared<double>(1.0);
        auto beta = std::make_shared<double>(1.0);
        auto dopt = std::make_shared<DataOptions>();
        upd->add_option("--alpha", *alpha)->capture_default_str();
        upd->add_option("--beta", *beta)->capture_default_str();
        dopt->attach(upd);
        upd->callback([alpha, beta, dopt] {
            const bayes::Posterior p =
                bayes::update(bayes::BetaBernoulli{*alpha, *beta}, dopt->load());
            const auto& m = std::get<bayes::BetaBernoulli>(p.model);
            json j{{"alpha", m.alpha},
                   {"beta", m.beta},
                   {"n_assimilated", p.n_assimilated},
                   {"predictive_one", bayes::predictive_one(m)},
                   {"posterior_sd", bayes::posterior_sd(p.model)}};
            std::cout << j.dump(2) << '\n';
        });
    }
    {
        auto* refl = bayes_cmd->add_subcommand("reflect", "reflection identity check");
        auto alpha = std::make_shared<double>(1.0);
        auto beta = std::make_shared<double>(1.0);
        auto event = std::make_shared<std::string>("next_one");
        auto threshold = std::make_shared<double>(0.5);
        refl->add_option("--alpha", *alpha)->required();
        refl->add_option("--beta", *beta)->required();
        refl->add_option("--event", *event, "next_one | p_gt")->capture_default_str();
        refl->add_option("--threshold", *threshold)->capture_default_str();
        refl->callback([alpha, beta, event, threshold] {
            const bayes::Posterior p{bayes::BetaBernoulli{*alpha, *beta}, 0};
            bayes::EventDescriptor ev;
            if (*event == "next_one")
                ev = bayes::NextObsEvent{1.0};
            else if (*event == "p_gt")
                ev = bayes::IntervalEvent{*threshold};
            else
                throw ConfigError("event must be next_one or p_gt");
            const std::vector<double> space = {0.0, 1.0};
            const bayes::ReflectionResult r = bayes::reflection_check(p, ev, space);
            json j{{"lhs", r.lhs}, {"rhs", r.rhs}, {"abs_diff", std::fabs(r.lhs - r.rhs)}};
            std::cout << j.dump(2) << '\n';
        });
    }
    {
        auto* naive = bayes_cmd->add_subcommand("naive",
                                                "P_naive trajectory over a k schedule");
        auto alpha = std::make_shared<double>(1.0);
        auto beta = std::make_shared<double>(1.0);
        auto ko = std::make_shared<KindOptions>();
        auto dopt = std::make_shared<DataOptions>();
        auto schedule = std::make_shared<std::string>("0,50,200,450");
        auto seed = std::make_shared<std::uint64_t>(0);
        naive->add_option("--alpha", *alpha)->capture_default_str();
        naive->add_option("--beta", *beta)->capture_default_str();
        ko->attach(naive);
        dopt->attach(naive);
        naive->add_option("--k-schedule", *schedule)->capture_default_str();
        naive->add_option("--seed", *seed)->required();
        naive->callback([alpha, beta, ko, dopt, schedule, seed] {
            const Sample X = dopt->load();
            const SynthDist d = SynthDist::fit(ko->build(), X);
            const bayes::ConjugateModel prior = bayes::BetaBernoulli{*alpha, *beta};
            json traj = json::array();
            std::size_t idx = 0;
            for (std::size_t k : parse_schedule(*schedule)) {
                const bayes::Posterior p = bayes::naive_augmented_update(
                    prior, X, d, k, derive_seed(*seed, idx++));
                const auto& m = std::get<bayes::BetaBernoulli>(p.model);
                traj.push_back({{"k", k},
                                {"alpha", m.alpha},
                                {"beta", m.beta},
                                {"posterior_sd", bayes::posterior_sd(p.model)},
                                {"predictive_one", bayes::predictive_one(m)}});
            }
            std::cout << traj.dump(2) << '\n';
        });
    }

    // ----------------------------------------------------------- experiment
    auto* experiment = app.add_subcommand("experiment", "scenario runner");
    experiment->require_subcommand(1);
    {
        auto* run = experiment->add_subcommand("run", "run a scenario from config");
        auto config_path = std::make_shared<std::string>();
        auto overrides = std::make_shared<ExperimentConfig>();
        auto out_dir = std::make_shared<std::string>();
        auto schedule = std::make_shared<std::string>();
        run->add_option("--config", *config_path, "JSON config file");
        run->add_option("--scenario", overrides->scenario);
        run->add_option("--family", overrides->family);
        run->add_option("--kind", overrides->kind);
        run->add_option("--theta-true", overrides->theta_true);
        auto* n_opt = run->add_option("--n", overrides->n);
        auto* m_opt = run->add_option("--m", overrides->m);
        auto* reps_opt = run->add_option("--n-reps", overrides->n_reps);
        auto* seed_opt = run->add_option("--seed", overrides->seed);
        run->add_option("--k-schedule", *schedule, "comma-separated k values");
        run->add_option("--out-dir", *out_dir, "artifact directory")
            ->envname("SYNTHINFO_OUT_DIR");
        run->callback([=, &rc] {
            ExperimentConfig cfg;
            if (!config_path->empty()) {
                std::ifstream in(*config_path);
                if (!in) throw ConfigError("cannot open config: " + *config_path);
                json j;
                in >> j;
                cfg = ExperimentConfig::from_json(j);
            } else {
                cfg.seed = 0;
            }
            // flags override config-file values
            if (!overrides->scenario.empty()) cfg.scenario = overrides->scenario;
            if (run->count("--family")) cfg.family = overrides->family;
            if (run->count("--kind")) cfg.kind = overrides->kind;
            if (run->count("--theta-true")) cfg.theta_true = overrides->theta_true;
            if (n_opt->count()) cfg.n = overrides->n;
            if (m_opt->count()) cfg.m = overrides->m;
            if (reps_opt->count()) cfg.n_reps = overrides->n_reps;
            if (seed_opt->count()) cfg.seed = overrides->seed;
            if (!schedule->empty()) cfg.k_schedule = parse_schedule(*schedule);
            if (!out_dir->empty()) cfg.out_dir = *out_dir;

            const ExperimentReport rep = run_scenario(cfg);
            for (const auto& v : rep.verdicts)
                std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.name
                          << " (value=" << v.value << ", threshold=" << v.threshold
                          << ")\n";
            std::cout << rep.config.scenario << ": wrote " << rep.csv_path.string()
                      << " and " << rep.json_path.string() << '\n';
            if (!rep.all_pass()) rc = 1;
        });
    }
    {
        auto* list = experiment->add_subcommand("list", "list scenarios");
        list->callback([] {
            for (const auto& s : scenario_names()) std::cout << s << '\n';
        });
    }

    // --------------------------------------------------------------- report
    {
        auto* report = app.add_subcommand("report", "summarize a report JSON");
        auto path = std::make_shared<std::string>();
        report->add_option("--file", *path, "report JSON")->required();
        report->callback([path, &rc] {
            std::ifstream in(*path);
            if (!in) throw ConfigError("cannot open report: " + *path);
            json j;
            in >> j;
            bool all_pass = true;
            for (const auto& v : j.at("verdicts")) {
                const bool pass = v.at("pass").get<bool>();
                all_pass = all_pass && pass;
                std::cout << (pass ? "[PASS] " : "[FAIL] ")
                          << v.at("name").get<std::string>() << '\n';
            }
            if (!all_pass) rc = 1;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        std::cerr << app.help() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
