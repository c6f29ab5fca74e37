#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthinfo/families.hpp"
#include "synthinfo/mle.hpp"
#include "synthinfo/sample.hpp"
#include "synthinfo/synth.hpp"

namespace synthinfo {

struct ExperimentConfig {
    std::string scenario;
    std::string family = "bernoulli";
    std::string kind = "bootstrap";
    double theta_true = 0.5;
    std::size_t n = 50;
    std::size_t m = 2;
    std::vector<std::size_t> k_schedule;
    std::size_t n_reps = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "out";

    // generator extras
    double fixed_theta = 0.5;
    double prior_alpha = 1.0;
    double prior_beta = 1.0;
    std::string perm_file;
    std::size_t perm_period = 1;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    nlohmann::json aggregates;
    std::vector<Verdict> verdicts;
    std::filesystem::path csv_path;
    std::filesystem::path json_path;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

// Scenarios: theorem1, theorem2_sweep, degenerate_fixed, decomposition,
// mc_consistency, reflection, se_calibration, censoring, overlap, stability.
ExperimentReport run_scenario(const ExperimentConfig& cfg);

std::vector<std::string> scenario_names();

// Scanning in order, every second occurrence of 1 (the 2nd, 4th, ...) is
// removed; zeros are untouched.
Sample censor_every_second_h(const Sample& seq);

// log sum over latent one-counts consistent with the censored observation of
// C(n,h) theta^h (1-theta)^(n-h); at most two binomial terms.
double censored_loglik(std::size_t n, std::size_t h_obs, std::size_t t_obs,
                       double theta);

ExperimentReport censoring_case_study(const ExperimentConfig& cfg);
ExperimentReport overlap_demo(const ExperimentConfig& cfg);

// MLE of the censored likelihood by golden-section search on (0, 1).
double censored_mle(std::size_t n, std::size_t h_obs, std::size_t t_obs);

struct CsvSchema {
    std::string value_column;
    std::optional<std::string> label_column;
};

Sample load_csv_dataset(const std::filesystem::path& path, const CsvSchema& schema);

// generator construction from config names (shared with the CLI)
GeneratorKind kind_from_config(const ExperimentConfig& cfg);

}  // namespace synthinfo
