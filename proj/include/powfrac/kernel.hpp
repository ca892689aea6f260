#pragma once

// Parameter bundle (alpha, beta, p, N) of the power fractional operators and
// the power Mittag-Leffler function
//
//   pE_{k,l}(s) = sum_{n>=0} (s ln p)^n / Gamma(k n + l).

#include "powfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace powfrac {

inline constexpr double kDefaultSeriesTol = 1e-14;
inline constexpr std::size_t kMlfMaxTerms = 1'000'000;

[[nodiscard]] inline double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("log_gamma: argument must be > 0, got " + std::to_string(x));
    }
    return std::lgamma(x);
}

[[nodiscard]] inline double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw DomainError("gamma_fn: argument must be > 0, got " + std::to_string(x));
    }
    return std::exp(std::lgamma(x));
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sums sign(n) * exp(log_abs(n)) for n = first, first+1, ...
///
/// Terms whose magnitude first grows and then decays (|x|^n / Gamma(kn+l)) are
/// summed past the peak; the loop stops at the first term that is both smaller
/// than its predecessor and below tol * max(1, |partial sum|). log_abs may
/// return -inf for an exactly zero term.
template <class LogAbs, class Sign>
[[nodiscard]] double sum_peaked_series(LogAbs&& log_abs, Sign&& sign, std::size_t first,
                                       double tol, std::size_t max_terms) {
    CompensatedSum sum;
    double prev_log = std::numeric_limits<double>::infinity();
    for (std::size_t n = first; n < first + max_terms; ++n) {
        const double la = log_abs(n);
        if (la == -std::numeric_limits<double>::infinity()) {
            return sum.value();
        }
        const double term = sign(n) * std::exp(la);
        sum.add(term);
        const bool decreasing = la < prev_log;
        if (decreasing && std::abs(term) < tol * std::max(1.0, std::abs(sum.value()))) {
            return sum.value();
        }
        if (!std::isfinite(sum.value())) {
            throw ConvergenceError("series overflowed at term " + std::to_string(n));
        }
        prev_log = la;
    }
    throw ConvergenceError("series did not converge within " + std::to_string(max_terms) +
                           " terms");
}

/// Normalization function N(alpha) entering phi and psi.
class NormalizationFn {
public:
    enum class Kind { One, GammaBlend, Custom };

    static NormalizationFn one() { return NormalizationFn(Kind::One, {}); }

    /// N(alpha) = 1 - alpha + alpha / Gamma(alpha).
    static NormalizationFn gamma_blend() { return NormalizationFn(Kind::GammaBlend, {}); }

    /// Must satisfy N(0) = 1.
    static NormalizationFn custom(std::function<double(double)> fn) {
        if (!fn) {
            throw DomainError("NormalizationFn: empty custom function");
        }
        const double at_zero = fn(0.0);
        if (!(std::abs(at_zero - 1.0) <= 1e-12)) {
            throw DomainError("NormalizationFn: custom N must satisfy N(0) = 1, got " +
                              std::to_string(at_zero));
        }
        return NormalizationFn(Kind::Custom, std::move(fn));
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

    [[nodiscard]] double operator()(double alpha) const {
        switch (kind_) {
            case Kind::One:
                return 1.0;
            case Kind::GammaBlend:
                // alpha / Gamma(alpha) -> 0 as alpha -> 0
                return alpha == 0.0 ? 1.0 : 1.0 - alpha + alpha / gamma_fn(alpha);
            case Kind::Custom:
                return fn_(alpha);
        }
        return 1.0;
    }

private:
    NormalizationFn(Kind kind, std::function<double(double)> fn)
        : kind_(kind), fn_(std::move(fn)) {}

    Kind kind_;
    std::function<double(double)> fn_;
};

/// Validated (alpha, beta, p, N) with the derived phi, psi and mu cached.
class FracParams {
public:
    FracParams(double alpha, double beta, double p,
               NormalizationFn normalization = NormalizationFn::one())
        : alpha_(alpha), beta_(beta), p_(p), normalization_(std::move(normalization)) {
        if (!(alpha >= 0.0 && alpha < 1.0)) {
            throw DomainError("alpha must lie in [0, 1), got " + std::to_string(alpha));
        }
        if (!(beta > 0.0) || !std::isfinite(beta)) {
            throw DomainError("beta must be > 0, got " + std::to_string(beta));
        }
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw DomainError("p must be > 0, got " + std::to_string(p));
        }
        n_alpha_ = normalization_(alpha);
        if (!(n_alpha_ > 0.0) || !std::isfinite(n_alpha_)) {
            throw DomainError("normalization N(alpha) must be > 0, got " +
                              std::to_string(n_alpha_));
        }
        phi_ = (1.0 - alpha) / n_alpha_;
        psi_ = alpha / n_alpha_;
        mu_ = alpha / (1.0 - alpha);
        ln_p_ = std::log(p);
    }

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double ln_p() const noexcept { return ln_p_; }
    [[nodiscard]] const NormalizationFn& normalization() const noexcept { return normalization_; }
    [[nodiscard]] double normalization_value() const noexcept { return n_alpha_; }

    /// (1 - alpha) / N(alpha)
    [[nodiscard]] double phi() const noexcept { return phi_; }
    /// alpha / N(alpha)
    [[nodiscard]] double psi() const noexcept { return psi_; }
    /// alpha / (1 - alpha)
    [[nodiscard]] double mu() const noexcept { return mu_; }

private:
    double alpha_;
    double beta_;
    double p_;
    NormalizationFn normalization_;
    double n_alpha_ = 1.0;
    double phi_ = 1.0;
    double psi_ = 0.0;
    double mu_ = 0.0;
    double ln_p_ = 0.0;
};

[[nodiscard]] inline double phi(const FracParams& params) noexcept { return params.phi(); }
[[nodiscard]] inline double psi(const FracParams& params) noexcept { return params.psi(); }
[[nodiscard]] inline double mu(const FracParams& params) noexcept { return params.mu(); }

struct MlfQuery {
    double k = 1.0;
    double l = 1.0;
    double p = 2.718281828459045;
    double s = 0.0;
    double tol = kDefaultSeriesTol;

    void validate() const {
        if (!(k > 0.0) || !(l > 0.0) || !(p > 0.0) || !(tol > 0.0)) {
            throw DomainError("MlfQuery requires k > 0, l > 0, p > 0, tol > 0");
        }
        if (!std::isfinite(s)) {
            throw DomainError("MlfQuery: s must be finite");
        }
    }
};

/// Power Mittag-Leffler function evaluated from its series in log space.
[[nodiscard]] inline double power_mlf(const MlfQuery& q) {
    q.validate();
    const double z = q.s * std::log(q.p);
    if (z == 0.0) {
        return std::exp(-log_gamma(q.l));
    }
    const double log_abs_z = std::log(std::abs(z));
    const bool alternating = z < 0.0;
    return sum_peaked_series(
        [&](std::size_t n) {
            const double nd = static_cast<double>(n);
            return (n == 0 ? 0.0 : nd * log_abs_z) - std::lgamma(q.k * nd + q.l);
        },
        [&](std::size_t n) { return (alternating && (n % 2 == 1)) ? -1.0 : 1.0; }, 0, q.tol,
        kMlfMaxTerms);
}

[[nodiscard]] inline double power_mlf(double k, double l, double p, double s,
                                      double tol = kDefaultSeriesTol) {
    return power_mlf(MlfQuery{k, l, p, s, tol});
}

}  // namespace powfrac
