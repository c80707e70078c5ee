#ifndef SAM_DISTRIBUTIONS_HPP
#define SAM_DISTRIBUTIONS_HPP

#include <iosfwd>
#include <string>

#include "sam/rng.hpp"

namespace sam {

/// Standard normal CDF Phi(u), absolute error below 1e-14 (erfc based).
double std_normal_cdf(double u);

/// Standard normal density.
double std_normal_pdf(double u);

/// Inverse standard normal CDF on (0, 1). Throws DomainError outside.
/// Wichura's AS 241 rational approximation (double precision).
double std_normal_quantile(double p);

enum class DistKind { Gaussian, Uniform, Exponential, Fixed };

const char* to_string(DistKind kind);

/// A one-dimensional process model for a statistical parameter.
///
/// Gaussian(mu, sigma), Uniform(lo, hi), Exponential(offset, rate) with
/// density rate*exp(-rate*(x-offset)) on [offset, inf), or Fixed(value) for
/// a parameter that does not vary. Parameters are validated at construction:
/// sigma > 0, rate > 0, lo < hi.
///
/// Beyond sampling and cdf/quantile, a distribution maps its variate to the
/// normalized "u-space" where it becomes standard normal: u = Phi^-1(F(x)).
/// For a Gaussian this is exactly (x - mu)/sigma. All distributions of a
/// design share that space, which is what worst-case analysis measures
/// distances in.
class Distribution {
public:
    static Distribution gaussian(double mu, double sigma);
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double offset, double rate);
    static Distribution fixed(double value);

    DistKind kind() const noexcept { return kind_; }
    bool is_fixed() const noexcept { return kind_ == DistKind::Fixed; }

    // Parameter accessors; each is meaningful only for its own kind.
    double mu() const noexcept { return a_; }
    double sigma() const noexcept { return b_; }
    double lo() const noexcept { return a_; }
    double hi() const noexcept { return b_; }
    double offset() const noexcept { return a_; }
    double rate() const noexcept { return b_; }
    double value() const noexcept { return a_; }

    /// Dispersion scale used for sensitivity ranking: sigma for Gaussian,
    /// (hi-lo)/sqrt(12) for Uniform, 1/rate for Exponential, 0 for Fixed.
    double stddev() const;

    /// Closed support bounds (+-inf where unbounded).
    double support_lo() const;
    double support_hi() const;
    bool in_support(double x) const;

    /// One variate per call via inverse-CDF transform of the generator's
    /// uniform stream. Fixed returns its value and consumes no randomness.
    double sample(Rng& rng) const;

    /// P(X <= x). Throws UnsupportedOperation for Fixed.
    double cdf(double x) const;

    /// Inverse CDF. Throws DomainError unless 0 < p < 1, and
    /// UnsupportedOperation for Fixed.
    double quantile(double p) const;

    double pdf(double x) const;

    /// u = Phi^-1(F(x)). Throws DomainError for x outside the open support
    /// interior (the image would be infinite), UnsupportedOperation for Fixed.
    double to_u(double x) const;

    /// x = F^-1(Phi(u)); inverse of to_u.
    double from_u(double u) const;

    /// dx/du of from_u, i.e. std_normal_pdf(u) / pdf(from_u(u)).
    /// Exactly sigma for a Gaussian.
    double from_u_derivative(double u) const;

    bool operator==(const Distribution& other) const noexcept = default;

private:
    Distribution(DistKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    DistKind kind_;
    double a_;  // mu / lo / offset / value
    double b_;  // sigma / hi / rate / unused
};

}  // namespace sam

#endif  // SAM_DISTRIBUTIONS_HPP
