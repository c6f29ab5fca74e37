#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "synthinfo/families.hpp"
#include "synthinfo/synth.hpp"

namespace synthinfo {

enum class InfoMethod { Exact, MonteCarlo, Analytic };

struct InfoEstimate {
    double value = 0.0;
    InfoMethod method = InfoMethod::Exact;
    double std_error = 0.0;  // 0 for exact/analytic
    std::size_t n_reps = 0;
};

// All five scalar information quantities at one (theta, n, m) point.
struct InfoDecomposition {
    InfoEstimate i_x;
    InfoEstimate i_s;
    InfoEstimate i_xs;
    InfoEstimate i_s_given_x;
    InfoEstimate i_x_given_s;
    double theta = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
};

// Full enumeration of the joint (X, S) outcome space for finite-support
// families. The marginal q_theta(S) = sum_X p_theta(X) p_{S(X)}(S) is built
// exactly; information values come from Richardson-extrapolated central
// differences of the exact log-densities. Guard: |support|^(n+m) <= 1e7.
InfoDecomposition exact_decomposition(const Family& family, const GeneratorKind& kind,
                                      double theta, std::size_t n, std::size_t m);

enum class InfoTarget { X, S, XS };

// Score-variance Monte Carlo estimate of the target's Fisher information.
// Scores are central finite differences of the (possibly nested-MC) marginal
// log-density; the nested path for target S uses an inner budget equal to
// n_reps with common random numbers across the difference stencil and a
// jackknife correction for the plug-in log bias.
InfoEstimate mc_fisher_marginal(InfoTarget target, const Family& family,
                                const GeneratorKind& kind, double theta, std::size_t n,
                                std::size_t m, std::size_t n_reps, std::uint64_t seed);

// d/dtheta log q(s|X) at each grid point; exactly zero everywhere because the
// conditional density admits no theta argument. Probes the factorization
// contract end-to-end through the likelihood assembly path.
std::vector<double> conditional_score_probe(const SynthDist& d, double s,
                                            std::span<const double> theta_grid);

std::size_t distinct_count(const Sample& s);

// shared differencing helpers
double diff_step(const Family& family, double theta);
double richardson_central(const std::vector<double>& f_at, double h);

}  // namespace synthinfo
