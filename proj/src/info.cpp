#include "synthinfo/info.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace synthinfo {

namespace {

constexpr double kBaseStep = 1e-4;

double joint_conditional_loglik(const SynthDist& d, const Sample& S) {
    double total = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        std::optional<int> label;
        if (S.labels) label = (*S.labels)[i];
        const double lq = d.conditional_log_density(S.observations[i], label);
        if (lq == kLogZero) return kLogZero;
        total += lq;
    }
    return total;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// weighted mean/variance; weights assumed normalized
Moments weighted_moments(const std::vector<double>& values,
                         const std::vector<double>& weights) {
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += weights[i] * values[i];
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double dlt = values[i] - mean;
        var += weights[i] * dlt * dlt;
    }
    return {mean, var};
}

}  // namespace

double diff_step(const Family& family, double theta) {
    const Interval dom = family.parameter_domain();
    double room = std::numeric_limits<double>::infinity();
    if (std::isfinite(dom.lo)) room = std::min(room, theta - dom.lo);
    if (std::isfinite(dom.hi)) room = std::min(room, dom.hi - theta);
    return std::min(kBaseStep, 0.25 * room);
}

// f_at holds values at theta + {-h, -h/2, +h/2, +h}
double richardson_central(const std::vector<double>& f_at, double h) {
    const double d_h = (f_at[3] - f_at[0]) / (2.0 * h);
    const double d_h2 = (f_at[2] - f_at[1]) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

InfoDecomposition exact_decomposition(const Family& family, const GeneratorKind& kind,
                                      double theta, std::size_t n, std::size_t m) {
    family.require_theta(theta);
    if (n == 0) throw ConfigError("exact_decomposition: n must be >= 1");
    if (family.support_kind() != SupportKind::FiniteDiscrete)
        throw UnsupportedError("exact_decomposition: finite-support families only");

    const std::vector<double> support = family.finite_support();
    const double big = static_cast<double>(support.size());
    if (std::pow(big, static_cast<double>(n)) * std::pow(big, static_cast<double>(m)) >
        1e7)
        throw ResourceError("exact_decomposition: enumeration budget exceeded");

    const std::size_t k_sup = support.size();
    std::size_t n_x = 1, n_s = 1;
    for (std::size_t i = 0; i < n; ++i) n_x *= k_sup;
    for (std::size_t i = 0; i < m; ++i) n_s *= k_sup;

    const double h = diff_step(family, theta);
    const std::vector<double> stencil = {theta - h, theta - h / 2.0, theta + h / 2.0,
                                         theta + h};

    // per-X: log-likelihood at each stencil point plus center, and the
    // theta-free conditional log-density table over support values
    std::vector<std::vector<double>> logp_x(n_x, std::vector<double>(4));
    std::vector<double> logp_x_center(n_x);
    std::vector<std::vector<double>> logq(n_x, std::vector<double>(k_sup));

    std::vector<double> score_x(n_x), weight_x(n_x);
    for (std::size_t ix = 0; ix < n_x; ++ix) {
        std::vector<double> obs(n);
        std::size_t rem = ix;
        for (std::size_t j = n; j-- > 0;) {
            obs[j] = support[rem % k_sup];
            rem /= k_sup;
        }
        Sample x_sample(obs);
        for (int t = 0; t < 4; ++t)
            logp_x[ix][t] = family.log_likelihood(stencil[t], x_sample);
        logp_x_center[ix] = family.log_likelihood(theta, x_sample);
        weight_x[ix] = std::exp(logp_x_center[ix]);
        score_x[ix] = richardson_central(logp_x[ix], h);

        const SynthDist d = SynthDist::fit(kind, x_sample);
        for (std::size_t v = 0; v < k_sup; ++v)
            logq[ix][v] = d.conditional_log_density(support[v]);
    }

    const Moments mom_x = weighted_moments(score_x, weight_x);

    // joint enumeration: aggregate in lexicographic (X, S) index order
    std::vector<std::vector<double>> q_s(4, std::vector<double>(n_s, 0.0));
    std::vector<double> q_s_center(n_s, 0.0);
    std::vector<double> score_joint, weight_joint;
    score_joint.reserve(n_x * n_s);
    weight_joint.reserve(n_x * n_s);

    std::vector<std::size_t> digits(m);
    for (std::size_t is = 0; is < n_s; ++is) {
        std::size_t rem = is;
        for (std::size_t j = m; j-- > 0;) {
            digits[j] = rem % k_sup;
            rem /= k_sup;
        }
        for (std::size_t ix = 0; ix < n_x; ++ix) {
            double logc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double lq = logq[ix][digits[j]];
                if (lq == kLogZero) {
                    logc = kLogZero;
                    break;
                }
                logc += lq;
            }
            if (logc == kLogZero) continue;  // zero-probability joint outcome
            const double c = std::exp(logc);
            for (int t = 0; t < 4; ++t) q_s[t][is] += std::exp(logp_x[ix][t]) * c;
            q_s_center[is] += weight_x[ix] * c;

            std::vector<double> f(4);
            for (int t = 0; t < 4; ++t) f[t] = logp_x[ix][t] + logc;
            score_joint.push_back(richardson_central(f, h));
            weight_joint.push_back(weight_x[ix] * c);
        }
    }

    const Moments mom_joint = weighted_moments(score_joint, weight_joint);

    std::vector<double> score_s(n_s, 0.0);
    for (std::size_t is = 0; is < n_s; ++is) {
        if (q_s_center[is] <= 0.0) continue;
        std::vector<double> f(4);
        for (int t = 0; t < 4; ++t) f[t] = std::log(q_s[t][is]);
        score_s[is] = richardson_central(f, h);
    }
    const Moments mom_s = weighted_moments(score_s, q_s_center);

    InfoDecomposition out;
    out.theta = theta;
    out.n = n;
    out.m = m;
    out.i_x = {mom_x.variance, InfoMethod::Exact, 0.0, 0};
    out.i_xs = {mom_joint.variance, InfoMethod::Exact, 0.0, 0};
    out.i_s = {mom_s.variance, InfoMethod::Exact, 0.0, 0};
    out.i_s_given_x = {mom_joint.variance - mom_x.variance, InfoMethod::Exact, 0.0, 0};
    out.i_x_given_s = {mom_joint.variance - mom_s.variance, InfoMethod::Exact, 0.0, 0};
    return out;
}

namespace {

InfoEstimate score_variance_estimate(const std::vector<double>& scores) {
    const std::size_t r = scores.size();
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(r);
    double var = 0.0, m4 = 0.0;
    for (double s : scores) {
        const double d = s - mean;
        var += d * d;
        m4 += d * d * d * d;
    }
    var /= static_cast<double>(r);
    m4 /= static_cast<double>(r);
    const double se = std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(r));
    return {var, InfoMethod::MonteCarlo, se, r};
}

// jackknife-corrected log of the mean of positive weights
double jackknife_log_mean(const std::vector<double>& w) {
    const std::size_t b = w.size();
    double total = 0.0;
    for (double x : w) total += x;
    if (total <= 0.0) return kLogZero;
    const double plugin = std::log(total / static_cast<double>(b));
    double loo_mean = 0.0;
    for (double x : w) {
        const double rest = total - x;
        if (rest <= 0.0) return plugin;  // leave-one-out undefined, fall back
        loo_mean += std::log(rest / static_cast<double>(b - 1));
    }
    loo_mean /= static_cast<double>(b);
    return static_cast<double>(b) * plugin - static_cast<double>(b - 1) * loo_mean;
}

}  // namespace

InfoEstimate mc_fisher_marginal(InfoTarget target, const Family& family,
                                const GeneratorKind& kind, double theta, std::size_t n,
                                std::size_t m, std::size_t n_reps, std::uint64_t seed) {
    family.require_theta(theta);
    if (n_reps < 100) throw ConfigError("mc_fisher_marginal: n_reps must be >= 100");

    const double h = diff_step(family, theta);
    const std::vector<double> stencil = {theta - h, theta - h / 2.0, theta + h / 2.0,
                                         theta + h};

    std::vector<double> scores;
    scores.reserve(n_reps);
    std::vector<double> score_noise;

    for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const std::uint64_t seed_x = derive_seed(seed, 2 * rep);
        const std::uint64_t seed_s = derive_seed(seed, 2 * rep + 1);
        const Sample x_sample = family.draw(theta, n, seed_x);

        if (target == InfoTarget::X) {
            std::vector<double> f(4);
            for (int t = 0; t < 4; ++t) f[t] = family.log_likelihood(stencil[t], x_sample);
            scores.push_back(richardson_central(f, h));
            continue;
        }

        const SynthDist d = SynthDist::fit(kind, x_sample);
        const Sample s_sample = d.sample(m, seed_s);

        if (target == InfoTarget::XS) {
            const double logc = joint_conditional_loglik(d, s_sample);
            std::vector<double> f(4);
            for (int t = 0; t < 4; ++t)
                f[t] = family.log_likelihood(stencil[t], x_sample) + logc;
            scores.push_back(richardson_central(f, h));
            continue;
        }

        // target S: nested MC for q_theta(S) = E_X[ p_{S(X)}(S) ]. Inner
        // budget = n_reps with common random numbers across the difference
        // stencil; a wider step keeps the differencing noise manageable.
        // Two independent inner passes per replicate let us measure and
        // subtract the inner-MC noise contribution to the score variance.
        const double hs = std::min(0.05, 2.5 * h);
        const double probes[2] = {theta - hs, theta + hs};
        const std::size_t inner = n_reps;
        double pair[2];
        bool dropped = false;
        for (int pass = 0; pass < 2 && !dropped; ++pass) {
            double log_q[2];
            for (int side = 0; side < 2; ++side) {
                std::vector<double> w(inner);
                for (std::size_t b = 0; b < inner; ++b) {
                    Rng inner_rng(
                        derive_seed(seed_s, 1 + 2 * b + static_cast<std::size_t>(pass)
                                                            * (2 * inner + 1)));
                    // re-deriving the same stream on both sides gives common
                    // random numbers across the stencil
                    std::vector<double> obs(n);
                    for (std::size_t i = 0; i < n; ++i)
                        obs[i] = family.quantile(probes[side], inner_rng.uniform());
                    const SynthDist inner_d = SynthDist::fit(kind, Sample(obs));
                    const double lw = joint_conditional_loglik(inner_d, s_sample);
                    w[b] = lw == kLogZero ? 0.0 : std::exp(lw);
                }
                log_q[side] = jackknife_log_mean(w);
                if (log_q[side] == kLogZero) dropped = true;
            }
            pair[pass] = (log_q[1] - log_q[0]) / (2.0 * hs);
        }
        if (dropped) continue;
        scores.push_back(0.5 * (pair[0] + pair[1]));
        score_noise.push_back(pair[1] - pair[0]);
    }

    if (scores.empty())
        throw Error("mc_fisher_marginal: all replicates dropped (zero marginal mass)");
    InfoEstimate est = score_variance_estimate(scores);
    if (!score_noise.empty()) {
        // Var(mean of the pair) inflates the score variance by noise/2 where
        // noise = Var(single-pass score | replicate); E[(a-b)^2]/2 estimates
        // the per-pass noise, so subtract E[(a-b)^2]/4.
        double noise = 0.0;
        for (double dlt : score_noise) noise += dlt * dlt;
        noise /= 4.0 * static_cast<double>(score_noise.size());
        est.value -= noise;
    }
    return est;
}

std::vector<double> conditional_score_probe(const SynthDist& d, double s,
                                            std::span<const double> theta_grid) {
    constexpr double kProbeStep = 1e-5;
    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        // the conditional density admits no theta argument; both stencil
        // evaluations route through the same assembly path
        const double up = d.conditional_log_density(s);
        const double down = d.conditional_log_density(s);
        out.push_back(up == kLogZero ? 0.0 : (up - down) / (2.0 * kProbeStep));
    }
    return out;
}

std::size_t distinct_count(const Sample& s) {
    return std::set<double>(s.observations.begin(), s.observations.end()).size();
}

}  // namespace synthinfo
