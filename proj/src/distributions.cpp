#include "sam/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sam/error.hpp"

namespace sam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

[[noreturn]] void fixed_unsupported(const char* op) {
    throw UnsupportedOperation(std::string(op) + " is undefined for a Fixed distribution");
}

}  // namespace

double std_normal_cdf(double u) {
    // erfc keeps relative accuracy in both tails; 1 + erf would not.
    return 0.5 * std::erfc(-u * kInvSqrt2);
}

double std_normal_pdf(double u) {
    return kInvSqrt2Pi * std::exp(-0.5 * u * u);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("std_normal_quantile: p must lie in (0,1), got " + std::to_string(p));
    }
    // AS 241, algorithm PPND16 (Wichura 1988).
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = q *
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        x = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        x = num / den;
    }
    return (q < 0.0) ? -x : x;
}

const char* to_string(DistKind kind) {
    switch (kind) {
        case DistKind::Gaussian: return "gaussian";
        case DistKind::Uniform: return "uniform";
        case DistKind::Exponential: return "exponential";
        case DistKind::Fixed: return "none";
    }
    return "?";
}

Distribution Distribution::gaussian(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw DomainError("gaussian: sigma must be finite and > 0");
    }
    return Distribution(DistKind::Gaussian, mu, sigma);
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("uniform: requires finite lo < hi");
    }
    return Distribution(DistKind::Uniform, lo, hi);
}

Distribution Distribution::exponential(double offset, double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate) || !std::isfinite(offset)) {
        throw DomainError("exponential: rate must be finite and > 0");
    }
    return Distribution(DistKind::Exponential, offset, rate);
}

Distribution Distribution::fixed(double value) {
    if (!std::isfinite(value)) {
        throw DomainError("fixed: value must be finite");
    }
    return Distribution(DistKind::Fixed, value, 0.0);
}

double Distribution::stddev() const {
    switch (kind_) {
        case DistKind::Gaussian: return sigma();
        case DistKind::Uniform: return (hi() - lo()) / std::sqrt(12.0);
        case DistKind::Exponential: return 1.0 / rate();
        case DistKind::Fixed: return 0.0;
    }
    return 0.0;
}

double Distribution::support_lo() const {
    switch (kind_) {
        case DistKind::Gaussian: return -kInf;
        case DistKind::Uniform: return lo();
        case DistKind::Exponential: return offset();
        case DistKind::Fixed: return value();
    }
    return -kInf;
}

double Distribution::support_hi() const {
    switch (kind_) {
        case DistKind::Gaussian: return kInf;
        case DistKind::Uniform: return hi();
        case DistKind::Exponential: return kInf;
        case DistKind::Fixed: return value();
    }
    return kInf;
}

bool Distribution::in_support(double x) const {
    return x >= support_lo() && x <= support_hi();
}

double Distribution::sample(Rng& rng) const {
    if (kind_ == DistKind::Fixed) {
        return value();
    }
    return quantile(rng.next_open());
}

double Distribution::cdf(double x) const {
    switch (kind_) {
        case DistKind::Gaussian:
            return std_normal_cdf((x - mu()) / sigma());
        case DistKind::Uniform:
            if (x <= lo()) return 0.0;
            if (x >= hi()) return 1.0;
            return (x - lo()) / (hi() - lo());
        case DistKind::Exponential:
            if (x <= offset()) return 0.0;
            return -std::expm1(-rate() * (x - offset()));
        case DistKind::Fixed:
            fixed_unsupported("cdf");
    }
    return 0.0;
}

double Distribution::quantile(double p) const {
    if (kind_ == DistKind::Fixed) {
        fixed_unsupported("quantile");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile: p must lie in (0,1), got " + std::to_string(p));
    }
    switch (kind_) {
        case DistKind::Gaussian:
            return mu() + sigma() * std_normal_quantile(p);
        case DistKind::Uniform:
            return lo() + p * (hi() - lo());
        case DistKind::Exponential:
            return offset() - std::log1p(-p) / rate();
        case DistKind::Fixed:
            break;
    }
    return 0.0;
}

double Distribution::pdf(double x) const {
    switch (kind_) {
        case DistKind::Gaussian:
            return std_normal_pdf((x - mu()) / sigma()) / sigma();
        case DistKind::Uniform:
            return (x < lo() || x > hi()) ? 0.0 : 1.0 / (hi() - lo());
        case DistKind::Exponential:
            return (x < offset()) ? 0.0 : rate() * std::exp(-rate() * (x - offset()));
        case DistKind::Fixed:
            fixed_unsupported("pdf");
    }
    return 0.0;
}

double Distribution::to_u(double x) const {
    switch (kind_) {
        case DistKind::Gaussian:
            return (x - mu()) / sigma();
        case DistKind::Uniform:
        case DistKind::Exponential: {
            if (!(x > support_lo()) || !(x < support_hi())) {
                throw DomainError("to_u: x outside the open support interior");
            }
            if (kind_ == DistKind::Exponential) {
                // Upper tail through the survival function keeps precision:
                // u = -Phi^-1(exp(-rate*(x-offset))).
                const double sf = std::exp(-rate() * (x - offset()));
                if (sf < 0.5) {
                    return -std_normal_quantile(sf);
                }
            }
            return std_normal_quantile(cdf(x));
        }
        case DistKind::Fixed:
            fixed_unsupported("to_u");
    }
    return 0.0;
}

double Distribution::from_u(double u) const {
    switch (kind_) {
        case DistKind::Gaussian:
            return mu() + sigma() * u;
        case DistKind::Uniform:
            return lo() + std_normal_cdf(u) * (hi() - lo());
        case DistKind::Exponential: {
            // 1 - Phi(u) evaluated as Phi(-u) so the long tail stays accurate.
            const double sf = std_normal_cdf(-u);
            if (sf <= 0.0) {
                throw DomainError("from_u: u too large for the exponential tail");
            }
            return offset() - std::log(sf) / rate();
        }
        case DistKind::Fixed:
            fixed_unsupported("from_u");
    }
    return 0.0;
}

double Distribution::from_u_derivative(double u) const {
    switch (kind_) {
        case DistKind::Gaussian:
            return sigma();
        case DistKind::Uniform:
            return std_normal_pdf(u) * (hi() - lo());
        case DistKind::Exponential:
            // phi(u) / (rate * survival(x(u))), survival(x(u)) = Phi(-u).
            return std_normal_pdf(u) / (rate() * std_normal_cdf(-u));
        case DistKind::Fixed:
            fixed_unsupported("from_u_derivative");
    }
    return 0.0;
}

}  // namespace sam
