#include "synthinfo/mle.hpp"

#include <cmath>

namespace synthinfo {

MleFit fit_mle(const Family& family, const Sample& data) {
    if (data.empty()) throw FitError("fit_mle: empty sample");
    MleFit fit;
    fit.theta_hat = family.mle(data);
    fit.observed_information = family.neg_loglik_hessian(fit.theta_hat, data);
    if (!(fit.observed_information > 0.0))
        throw BoundaryError("fit_mle: observed information not positive");
    fit.standard_error = 1.0 / std::sqrt(fit.observed_information);
    fit.loglik_at_max = family.log_likelihood(fit.theta_hat, data);
    fit.data_size = data.size();
    return fit;
}

DecomposedLoglik decomposed_loglik(const Family& family, const Sample& X,
                                   const SynthDist& d, const Sample& S, double theta) {
    DecomposedLoglik out;
    out.real_part = family.log_likelihood(theta, X);
    out.const_part = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        std::optional<int> label;
        if (S.labels) label = (*S.labels)[i];
        const double lq = d.conditional_log_density(S.observations[i], label);
        if (lq == kLogZero) {
            out.const_part = kLogZero;
            break;
        }
        out.const_part += lq;
    }
    out.total = out.const_part == kLogZero ? kLogZero : out.const_part + out.real_part;
    return out;
}

MleFit naive_pooled_fit(const Family& family, const Sample& X, const Sample& S) {
    Sample pool;
    pool.observations = X.observations;
    pool.observations.insert(pool.observations.end(), S.observations.begin(),
                             S.observations.end());
    if (pool.empty()) throw FitError("naive_pooled_fit: empty pooled sample");
    return fit_mle(family, pool);
}

CalibrationReport se_calibration_report(const Family& family, const GeneratorKind& kind,
                                        double theta_true, std::size_t n, std::size_t k,
                                        std::size_t n_reps, std::uint64_t seed) {
    if (n_reps < 100) throw ConfigError("se_calibration_report: n_reps must be >= 100");
    CalibrationReport report;
    report.theta_true = theta_true;
    report.n = n;
    report.k = k;
    report.n_reps = n_reps;
    report.seed = seed;

    double sum_theta = 0.0, sum_theta_sq = 0.0;
    double sum_se_naive = 0.0, sum_se_correct = 0.0;
    std::size_t covered_count = 0;

    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const Sample X = family.draw(theta_true, n, derive_seed(seed, 2 * rep));
        const SynthDist d = SynthDist::fit(kind, X);
        const Sample S = d.sample(k, derive_seed(seed, 2 * rep + 1));

        const MleFit naive = naive_pooled_fit(family, X, S);
        const MleFit correct = fit_mle(family, X);

        CalibrationRow row;
        row.replicate = rep;
        row.theta_hat_naive = naive.theta_hat;
        row.se_naive = naive.standard_error;
        row.se_correct = correct.standard_error;
        row.covered =
            std::fabs(naive.theta_hat - theta_true) <= 1.96 * naive.standard_error;
        report.rows.push_back(row);

        sum_theta += naive.theta_hat;
        sum_theta_sq += naive.theta_hat * naive.theta_hat;
        sum_se_naive += naive.standard_error;
        sum_se_correct += correct.standard_error;
        if (row.covered) ++covered_count;
    }

    const double r = static_cast<double>(n_reps);
    const double mean_theta = sum_theta / r;
    report.empirical_sd_theta_hat =
        std::sqrt(std::max(0.0, sum_theta_sq / r - mean_theta * mean_theta));
    report.mean_se_naive = sum_se_naive / r;
    report.mean_se_correct = sum_se_correct / r;
    report.coverage = static_cast<double>(covered_count) / r;
    report.se_ratio = report.mean_se_naive / report.mean_se_correct;
    report.expected_se_ratio =
        std::sqrt(static_cast<double>(n) / static_cast<double>(n + k));
    return report;
}

double golden_section_maximize(const std::function<double(double)>& f, double lo,
                               double hi, double tol) {
    constexpr double kRatio = 0.61803398874989484820;
    double a = lo, b = hi;
    double x1 = b - kRatio * (b - a);
    double x2 = a + kRatio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kRatio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kRatio * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace synthinfo
