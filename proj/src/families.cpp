#include "synthinfo/families.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace synthinfo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_nonneg_integer(double x) {
    return x >= 0.0 && x == std::floor(x) && std::isfinite(x);
}

double sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

double normal_quantile(double u) {
    // Acklam (2003)
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    if (u >= 1.0) u = 1.0 - 1e-16;
    double q, r;
    if (u < plow) {
        q = std::sqrt(-2.0 * std::log(u));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (u > 1.0 - plow) {
        q = std::sqrt(-2.0 * std::log(1.0 - u));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = u - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

void Family::require_theta(double theta) const {
    if (!std::isfinite(theta) || !parameter_domain().contains(theta)) {
        std::ostringstream os;
        os << name() << ": parameter " << theta << " outside open domain";
        throw ParameterError(os.str());
    }
}

void Family::require_support(double x) const {
    if (!in_support(x)) {
        std::ostringstream os;
        os << name() << ": observation " << x << " outside support";
        throw DomainError(os.str());
    }
}

double Family::log_density(double theta, double x) const {
    require_theta(theta);
    require_support(x);
    return log_density_impl(theta, x);
}

double Family::score(double theta, double x) const {
    require_theta(theta);
    require_support(x);
    return score_impl(theta, x);
}

double Family::unit_fisher(double theta) const {
    require_theta(theta);
    return unit_fisher_impl(theta);
}

Sample Family::draw(double theta, std::size_t n, std::uint64_t seed) const {
    require_theta(theta);
    Rng rng(seed);
    std::vector<double> obs;
    obs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) obs.push_back(quantile(theta, rng.uniform()));
    return Sample(std::move(obs));
}

double Family::log_likelihood(double theta, const Sample& data) const {
    double total = 0.0;
    for (double x : data.observations) total += log_density(theta, x);
    return total;
}

namespace {

class Bernoulli final : public Family {
public:
    const std::string& name() const override {
        static const std::string n = "bernoulli";
        return n;
    }
    Interval parameter_domain() const override { return {0.0, 1.0}; }
    SupportKind support_kind() const override { return SupportKind::FiniteDiscrete; }
    bool in_support(double x) const override { return x == 0.0 || x == 1.0; }
    std::vector<double> finite_support() const override { return {0.0, 1.0}; }

    double quantile(double theta, double u) const override {
        return u < 1.0 - theta ? 0.0 : 1.0;
    }

    double mle(const Sample& data) const override {
        if (data.empty()) throw FitError("bernoulli: empty sample");
        double p = sum(data.observations) / static_cast<double>(data.size());
        if (p <= 0.0 || p >= 1.0)
            throw BoundaryError("bernoulli: MLE on parameter boundary (all outcomes equal)");
        return p;
    }

    double neg_loglik_hessian(double theta, const Sample& data) const override {
        double h = sum(data.observations);
        double t = static_cast<double>(data.size()) - h;
        return h / (theta * theta) + t / ((1.0 - theta) * (1.0 - theta));
    }

protected:
    double log_density_impl(double theta, double x) const override {
        return x == 1.0 ? std::log(theta) : std::log1p(-theta);
    }
    double score_impl(double theta, double x) const override {
        return x == 1.0 ? 1.0 / theta : -1.0 / (1.0 - theta);
    }
    double unit_fisher_impl(double theta) const override {
        return 1.0 / (theta * (1.0 - theta));
    }
};

// Normal(mu, sigma=1 known)
class NormalMu final : public Family {
public:
    const std::string& name() const override {
        static const std::string n = "normal_mu";
        return n;
    }
    Interval parameter_domain() const override { return {}; }
    SupportKind support_kind() const override { return SupportKind::RealLine; }
    bool in_support(double x) const override { return std::isfinite(x); }

    double quantile(double theta, double u) const override {
        return theta + normal_quantile(u);
    }

    double mle(const Sample& data) const override {
        if (data.empty()) throw FitError("normal_mu: empty sample");
        return sum(data.observations) / static_cast<double>(data.size());
    }

    double neg_loglik_hessian(double, const Sample& data) const override {
        return static_cast<double>(data.size());
    }

protected:
    double log_density_impl(double theta, double x) const override {
        double z = x - theta;
        return -0.5 * z * z - 0.5 * std::log(kTwoPi);
    }
    double score_impl(double theta, double x) const override { return x - theta; }
    double unit_fisher_impl(double) const override { return 1.0; }
};

class Poisson final : public Family {
public:
    const std::string& name() const override {
        static const std::string n = "poisson";
        return n;
    }
    Interval parameter_domain() const override {
        return {0.0, std::numeric_limits<double>::infinity()};
    }
    SupportKind support_kind() const override { return SupportKind::CountableDiscrete; }
    bool in_support(double x) const override { return is_nonneg_integer(x); }

    double quantile(double theta, double u) const override {
        // CDF inversion by running sum; adequate for moderate rates
        double p = std::exp(-theta);
        double cum = p;
        double k = 0.0;
        while (u >= cum && k < 1e6) {
            k += 1.0;
            p *= theta / k;
            cum += p;
        }
        return k;
    }

    double mle(const Sample& data) const override {
        if (data.empty()) throw FitError("poisson: empty sample");
        double lam = sum(data.observations) / static_cast<double>(data.size());
        if (lam <= 0.0) throw BoundaryError("poisson: MLE on parameter boundary (all zeros)");
        return lam;
    }

    double neg_loglik_hessian(double theta, const Sample& data) const override {
        return sum(data.observations) / (theta * theta);
    }

protected:
    double log_density_impl(double theta, double x) const override {
        return x * std::log(theta) - theta - std::lgamma(x + 1.0);
    }
    double score_impl(double theta, double x) const override { return x / theta - 1.0; }
    double unit_fisher_impl(double theta) const override { return 1.0 / theta; }
};

// Exponential with rate parameter
class Exponential final : public Family {
public:
    const std::string& name() const override {
        static const std::string n = "exponential";
        return n;
    }
    Interval parameter_domain() const override {
        return {0.0, std::numeric_limits<double>::infinity()};
    }
    SupportKind support_kind() const override { return SupportKind::PositiveReal; }
    bool in_support(double x) const override { return x > 0.0 && std::isfinite(x); }

    double quantile(double theta, double u) const override {
        double v = -std::log1p(-u) / theta;
        return v > 0.0 ? v : std::numeric_limits<double>::min();
    }

    double mle(const Sample& data) const override {
        if (data.empty()) throw FitError("exponential: empty sample");
        double mean = sum(data.observations) / static_cast<double>(data.size());
        if (!(mean > 0.0) || !std::isfinite(mean))
            throw BoundaryError("exponential: MLE on parameter boundary");
        return 1.0 / mean;
    }

    double neg_loglik_hessian(double theta, const Sample& data) const override {
        return static_cast<double>(data.size()) / (theta * theta);
    }

protected:
    double log_density_impl(double theta, double x) const override {
        return std::log(theta) - theta * x;
    }
    double score_impl(double theta, double x) const override { return 1.0 / theta - x; }
    double unit_fisher_impl(double theta) const override { return 1.0 / (theta * theta); }
};

}  // namespace

std::shared_ptr<const Family> make_family(const std::string& name) {
    if (name == "bernoulli") return std::make_shared<Bernoulli>();
    if (name == "normal_mu") return std::make_shared<NormalMu>();
    if (name == "poisson") return std::make_shared<Poisson>();
    if (name == "exponential") return std::make_shared<Exponential>();
    throw ConfigError("unknown family: " + name);
}

std::vector<std::string> family_names() {
    return {"bernoulli", "normal_mu", "poisson", "exponential"};
}

}  // namespace synthinfo
