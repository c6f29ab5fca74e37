#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "synthinfo/experiments.hpp"

using namespace synthinfo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("synthinfo_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("censoring drops every second one") {
    const Sample all_ones = censor_every_second_h(Sample({1.0, 1.0, 1.0, 1.0}));
    CHECK(all_ones.observations == std::vector<double>({1.0, 1.0}));

    const Sample zeros = censor_every_second_h(Sample({0.0, 0.0, 0.0}));
    CHECK(zeros.observations == std::vector<double>({0.0, 0.0, 0.0}));

    const Sample mixed = censor_every_second_h(Sample({1.0, 0.0, 1.0, 1.0}));
    CHECK(mixed.observations == std::vector<double>({1.0, 0.0, 1.0}));

    CHECK_THROWS_AS(censor_every_second_h(Sample({2.0})), DomainError);
}

TEST_CASE("censored likelihood spot values") {
    // nothing censored when no ones were observed
    for (double theta : {0.2, 0.5, 0.8})
        CHECK(censored_loglik(3, 0, 3, theta) ==
              doctest::Approx(3.0 * std::log1p(-theta)));

    // n = 2, one observed 1, no zeros: latent count is 1 or 2
    for (double theta : {0.3, 0.6}) {
        const double expected = std::log(2.0 * theta * (1.0 - theta) + theta * theta);
        CHECK(censored_loglik(2, 1, 0, theta) == doctest::Approx(expected));
    }

    CHECK_THROWS_AS(censored_loglik(3, 2, 2, 0.5), DataError);
    CHECK_THROWS_AS(censored_loglik(3, 1, 4, 0.5), DataError);
    CHECK_THROWS_AS(censored_loglik(3, 1, 1, 0.0), ParameterError);
}

TEST_CASE("censored mle matches a dense grid search") {
    // t_obs = 8 keeps both latent counts (11 and 12) below n - t_obs
    const std::size_t n = 20, h_obs = 6, t_obs = 8;
    // independent oracle: explicit two-term likelihood on a 1e6-point grid
    auto loglik = [&](double theta) {
        auto binom_term = [&](double h) {
            const double lc = std::lgamma(n + 1.0) - std::lgamma(h + 1.0) -
                              std::lgamma(n - h + 1.0);
            return std::exp(lc + h * std::log(theta) +
                            (n - h) * std::log1p(-theta));
        };
        return std::log(binom_term(11.0) + binom_term(12.0));
    };
    double best_theta = 0.5, best_val = -1e300;
    const int grid = 1000000;
    for (int i = 1; i < grid; ++i) {
        const double theta = static_cast<double>(i) / grid;
        const double v = loglik(theta);
        if (v > best_val) {
            best_val = v;
            best_theta = theta;
        }
    }
    CHECK(std::fabs(censored_mle(n, h_obs, t_obs) - best_theta) <= 2e-6);
}

TEST_CASE("csv dataset loading") {
    const fs::path dir = scratch_dir("csv");
    {
        std::ofstream out(dir / "data.csv");
        out << "id,value,label\n";
        out << "1,0.5,0\n";
        out << "2,-1.25,1\n";
        out << "3,3,0\n";
    }
    const Sample with_labels =
        load_csv_dataset(dir / "data.csv", {"value", "label"});
    CHECK(with_labels.observations == std::vector<double>({0.5, -1.25, 3.0}));
    REQUIRE(with_labels.labels.has_value());
    CHECK(*with_labels.labels == std::vector<int>({0, 1, 0}));

    const Sample no_labels = load_csv_dataset(dir / "data.csv", {"value", {}});
    CHECK_FALSE(no_labels.labels.has_value());

    {
        std::ofstream out(dir / "empty.csv");
        out << "value\n";
    }
    CHECK(load_csv_dataset(dir / "empty.csv", {"value", {}}).empty());

    {
        std::ofstream out(dir / "bad.csv");
        out << "value\n1.0\noops\n";
    }
    CHECK_THROWS_WITH_AS(load_csv_dataset(dir / "bad.csv", {"value", {}}),
                         doctest::Contains("row 2"), DataError);

    CHECK_THROWS_AS(load_csv_dataset(dir / "data.csv", {"missing", {}}),
                    SchemaError);
    CHECK_THROWS_AS(load_csv_dataset(dir / "nope.csv", {"value", {}}), DataError);
}

TEST_CASE("config parsing") {
    nlohmann::json j = {{"scenario", "reflection"}, {"seed", 9}};
    const ExperimentConfig cfg = ExperimentConfig::from_json(j);
    CHECK(cfg.scenario == "reflection");
    CHECK(cfg.seed == 9);
    CHECK(cfg.family == "bernoulli");

    CHECK_THROWS_AS(
        ExperimentConfig::from_json(nlohmann::json{{"scenario", "reflection"}}),
        ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json{{"seed", 1}}),
                    ConfigError);

    ExperimentConfig unknown = cfg;
    unknown.scenario = "no_such_scenario";
    CHECK_THROWS_AS(run_scenario(unknown), ConfigError);
}

TEST_CASE("scenario outputs are byte-identical across reruns") {
    ExperimentConfig cfg;
    cfg.scenario = "degenerate_fixed";
    cfg.seed = 77;
    cfg.n = 3;
    cfg.m = 2;
    cfg.out_dir = scratch_dir("determinism").string();

    const ExperimentReport first = run_scenario(cfg);
    REQUIRE(first.all_pass());
    const std::string csv1 = slurp(first.csv_path);
    const std::string json1 = slurp(first.json_path);
    CHECK_FALSE(csv1.empty());
    CHECK_FALSE(json1.empty());

    const ExperimentReport second = run_scenario(cfg);
    CHECK(slurp(second.csv_path) == csv1);
    CHECK(slurp(second.json_path) == json1);
}

TEST_CASE("reflection scenario report") {
    ExperimentConfig cfg;
    cfg.scenario = "reflection";
    cfg.seed = 1;
    cfg.out_dir = scratch_dir("reflection").string();
    const ExperimentReport rep = run_scenario(cfg);
    CHECK(rep.all_pass());
    REQUIRE(rep.verdicts.size() == 1);
    CHECK(rep.verdicts[0].name == "reflection_identity");
    CHECK(fs::exists(rep.csv_path));
    CHECK(fs::exists(rep.json_path));
    // the report embeds the exact config it was run with
    const nlohmann::json j = nlohmann::json::parse(slurp(rep.json_path));
    CHECK(j["config"]["scenario"] == "reflection");
    CHECK(j["config"]["seed"] == 1);
}
