#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "synthinfo/families.hpp"
#include "synthinfo/synth.hpp"

namespace synthinfo {

struct MleFit {
    double theta_hat = 0.0;
    double observed_information = 0.0;
    double standard_error = 0.0;  // 1/sqrt(observed_information)
    double loglik_at_max = 0.0;
    std::size_t data_size = 0;
};

MleFit fit_mle(const Family& family, const Sample& data);

struct DecomposedLoglik {
    double total = 0.0;
    double real_part = 0.0;   // ell_X(theta)
    double const_part = 0.0;  // log c_X(S), independent of theta
};

// Pooled log-likelihood split into the genuine-data term and the
// theta-constant synthetic term. An off-support synthetic point poisons the
// total to the log-zero sentinel rather than being dropped.
DecomposedLoglik decomposed_loglik(const Family& family, const Sample& X,
                                   const SynthDist& d, const Sample& S, double theta);

// MLE treating X and S as one iid pool of size n+k: the incorrect-but-common
// procedure. The reported standard error uses the pooled size.
MleFit naive_pooled_fit(const Family& family, const Sample& X, const Sample& S);

struct CalibrationRow {
    std::size_t replicate;
    double theta_hat_naive;
    double se_naive;
    double se_correct;
    bool covered;  // theta_true inside naive +-1.96 SE interval
};

struct CalibrationReport {
    double theta_true = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t n_reps = 0;
    std::uint64_t seed = 0;
    std::vector<CalibrationRow> rows;
    // aggregates
    double empirical_sd_theta_hat = 0.0;
    double mean_se_naive = 0.0;
    double mean_se_correct = 0.0;
    double coverage = 0.0;
    double se_ratio = 0.0;           // mean naive SE / mean correct SE
    double expected_se_ratio = 0.0;  // sqrt(n / (n + k))
};

CalibrationReport se_calibration_report(const Family& family, const GeneratorKind& kind,
                                        double theta_true, std::size_t n, std::size_t k,
                                        std::size_t n_reps, std::uint64_t seed);

// derivative-free maximizer for unimodal scalar objectives
double golden_section_maximize(const std::function<double(double)>& f, double lo,
                               double hi, double tol = 1e-10);

}  // namespace synthinfo
