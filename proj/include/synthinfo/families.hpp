#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "synthinfo/errors.hpp"
#include "synthinfo/rng.hpp"
#include "synthinfo/sample.hpp"

namespace synthinfo {

// Open interval; boundary values are rejected, not clamped.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double v) const { return v > lo && v < hi; }
};

enum class SupportKind { FiniteDiscrete, CountableDiscrete, RealLine, PositiveReal };

// Scalar-parameter distribution family: density, score, sampler, and
// analytic per-observation Fisher information.
class Family {
public:
    virtual ~Family() = default;

    virtual const std::string& name() const = 0;
    virtual Interval parameter_domain() const = 0;
    virtual SupportKind support_kind() const = 0;
    virtual bool in_support(double x) const = 0;

    double log_density(double theta, double x) const;
    double score(double theta, double x) const;
    double unit_fisher(double theta) const;

    // inverse-CDF sampler; u in [0,1). Shared by draw() and the CRN paths
    // in the Monte Carlo information estimators.
    virtual double quantile(double theta, double u) const = 0;

    // closed-form MLE; throws BoundaryError when the maximizer lies on the
    // boundary of the parameter domain.
    virtual double mle(const Sample& data) const = 0;

    // -d2/dtheta2 of the sample log-likelihood, analytic.
    virtual double neg_loglik_hessian(double theta, const Sample& data) const = 0;

    // complete support for finite-discrete families
    virtual std::vector<double> finite_support() const {
        throw UnsupportedError(name() + ": support is not finite");
    }

    Sample draw(double theta, std::size_t n, std::uint64_t seed) const;
    double log_likelihood(double theta, const Sample& data) const;

    void require_theta(double theta) const;
    void require_support(double x) const;

protected:
    virtual double log_density_impl(double theta, double x) const = 0;
    virtual double score_impl(double theta, double x) const = 0;
    virtual double unit_fisher_impl(double theta) const = 0;
};

// "bernoulli", "normal_mu", "poisson", "exponential"
std::shared_ptr<const Family> make_family(const std::string& name);

std::vector<std::string> family_names();

}  // namespace synthinfo
