#pragma once

// A-priori quantities: Gronwall bounds for inequalities driven by the power
// fractional integral, the contraction certificate that gives uniqueness of
// solutions, and the local remainder bound of the two-step scheme.

#include "powfrac/error.hpp"
#include "powfrac/grid.hpp"
#include "powfrac/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace powfrac {

/// Inputs to the Gronwall bound for h(t) <= u(t) + v(t) PFI h(t).
/// v is either a constant lambda or a non-negative, non-decreasing function.
struct GronwallInput {
    ScalarFn u;
    std::variant<double, ScalarFn> v;
    FracParams params;
    double a = 0.0;
    double t = 0.0;
    double tol = kDefaultSeriesTol;
};

struct UniquenessCertificate {
    double lipschitz = 0.0;
    /// phi + ln p psi (b-a)^beta / Gamma(beta+1); condition_value = L * factor.
    double contraction_factor = 0.0;
    double condition_value = 0.0;
    bool satisfied = true;
    double margin = 1.0;
};

struct RemainderBound {
    std::size_t n = 0;
    double h = 0.0;
    double m2 = 0.0;
    double omega_at_tn = 1.0;
    double bound = 0.0;
};

namespace detail {

inline void check_gronwall_common(const GronwallInput& in) {
    if (in.params.p() < 1.0) {
        throw DomainError("Gronwall bound requires p >= 1 (got p = " +
                          std::to_string(in.params.p()) + ")");
    }
    if (!(in.t >= in.a)) {
        throw DomainError("Gronwall bound requires t >= a");
    }
    if (!(in.tol > 0.0)) {
        throw DomainError("Gronwall bound requires tol > 0");
    }
    if (!in.u) {
        throw DomainError("Gronwall bound: u is not set");
    }
}

inline void check_u(double value, double s) {
    if (!(value >= 0.0)) {
        throw DomainError("Gronwall hypothesis u(s) >= 0 violated at s = " + std::to_string(s));
    }
}

inline void check_v(double value, double phi, double s) {
    if (!(value >= 0.0)) {
        throw DomainError("Gronwall hypothesis v(s) >= 0 violated at s = " + std::to_string(s));
    }
    if (!(1.0 - phi * value > 0.0)) {
        throw DomainError("Gronwall hypothesis 1 - phi(alpha) v(s) > 0 violated at s = " +
                          std::to_string(s));
    }
}

}  // namespace detail

/// u(t)/(1 - lambda phi) * (1 + sum_{n>=1} x^n (t-a)^{n beta} / Gamma(n beta)),
/// x = ln p lambda psi / (1 - lambda phi).
[[nodiscard]] inline double gronwall_bound_constant(const GronwallInput& in) {
    detail::check_gronwall_common(in);
    const double* lambda_ptr = std::get_if<double>(&in.v);
    if (lambda_ptr == nullptr) {
        throw DomainError("gronwall_bound_constant: v must be a constant lambda");
    }
    const double lambda = *lambda_ptr;
    const FracParams& fp = in.params;
    if (!(lambda >= 0.0)) {
        throw DomainError("Gronwall hypothesis lambda >= 0 violated");
    }
    const double denom = 1.0 - lambda * fp.phi();
    if (!(denom > 0.0)) {
        throw DomainError("Gronwall hypothesis 1 - lambda phi(alpha) > 0 violated (" +
                          std::to_string(denom) + ")");
    }
    const double ut = in.u(in.t);
    detail::check_u(ut, in.t);

    const double x = fp.ln_p() * lambda * fp.psi() / denom;
    const double span = in.t - in.a;
    double series = 1.0;
    if (x > 0.0 && span > 0.0) {
        const double log_base = std::log(x) + fp.beta() * std::log(span);
        series += sum_peaked_series(
            [&](std::size_t n) {
                const double nd = static_cast<double>(n);
                return nd * log_base - std::lgamma(nd * fp.beta());
            },
            [](std::size_t) { return 1.0; }, 1, in.tol, kMlfMaxTerms);
    }
    return ut / denom * series;
}

inline constexpr std::size_t kGronwallDefaultPanels = 64;

/// Right-hand side of the Gronwall inequality for non-constant v:
///   u(t)/(1 - phi v(t))
///   + sum_{n>=1} X^n / Gamma(n beta) int_a^t (t-s)^{n beta - 1} U(s) ds,
/// X = ln p psi v(t) / (1 - phi v(t)), U = u / (1 - phi v).
/// The s-integral uses 16-point Gauss-Legendre on panels graded geometrically
/// toward s = t, with the innermost panel integrated against the exact weight.
[[nodiscard]] inline double gronwall_bound_series(const GronwallInput& in,
                                                  std::size_t panels = kGronwallDefaultPanels) {
    detail::check_gronwall_common(in);
    if (panels < 1) {
        throw DomainError("gronwall_bound_series: panels must be >= 1");
    }
    const FracParams& fp = in.params;
    const ScalarFn v = std::holds_alternative<ScalarFn>(in.v)
                           ? std::get<ScalarFn>(in.v)
                           : constant_fn(std::get<double>(in.v));
    if (!v) {
        throw DomainError("gronwall_bound_series: v is not set");
    }

    // v must be non-decreasing on [a, t]
    constexpr int kMonotoneSamples = 64;
    const double span = in.t - in.a;
    double prev_v = v(in.a);
    detail::check_v(prev_v, fp.phi(), in.a);
    for (int i = 1; i <= kMonotoneSamples; ++i) {
        const double s = in.a + span * i / kMonotoneSamples;
        const double vs = v(s);
        detail::check_v(vs, fp.phi(), s);
        if (vs < prev_v - 1e-12 * std::max(1.0, std::abs(prev_v))) {
            throw DomainError("Gronwall hypothesis v non-decreasing violated near s = " +
                              std::to_string(s));
        }
        prev_v = vs;
    }

    const double ut = in.u(in.t);
    detail::check_u(ut, in.t);
    const double vt = v(in.t);
    const double denom_t = 1.0 - fp.phi() * vt;
    const double head = ut / denom_t;
    const double x = fp.ln_p() * fp.psi() * vt / denom_t;
    if (!(x > 0.0) || span == 0.0) {
        return head;
    }

    auto big_u = [&](double s) {
        const double us = in.u(s);
        detail::check_u(us, s);
        const double vs = v(s);
        detail::check_v(vs, fp.phi(), s);
        return us / (1.0 - fp.phi() * vs);
    };

    // In y = (t - s)/(t - a) in [0, 1]; panel edges y_i = q^(P - i), y_0 = 2^-64.
    using rule = boost::math::quadrature::gauss<double, 16>;
    const auto& abscissa = rule::abscissa();
    const auto& weights = rule::weights();
    const double q = std::exp2(-64.0 / static_cast<double>(panels));
    std::vector<double> ys;
    std::vector<double> ws;
    ys.reserve(panels * 16);
    ws.reserve(panels * 16);
    std::vector<double> us;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = std::pow(q, static_cast<double>(panels - i));
        const double hi = i + 1 == panels ? 1.0 : std::pow(q, static_cast<double>(panels - i - 1));
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t r = 0; r < abscissa.size(); ++r) {
            for (double sgn : {-1.0, 1.0}) {
                if (sgn < 0.0 && abscissa[r] == 0.0) {
                    continue;
                }
                ys.push_back(mid + sgn * half * abscissa[r]);
                ws.push_back(half * weights[r]);
            }
        }
    }
    us.reserve(ys.size());
    for (double y : ys) {
        us.push_back(big_u(in.t - span * y));
    }
    const double y0 = std::pow(q, static_cast<double>(panels));
    const double u_inner = big_u(in.t - span * 0.5 * y0);

    // int_0^1 y^(n beta - 1) U(t - span y) dy
    auto scaled_moment = [&](double nb) {
        CompensatedSum acc;
        acc.add(u_inner * std::pow(y0, nb) / nb);
        for (std::size_t i = 0; i < ys.size(); ++i) {
            acc.add(ws[i] * std::pow(ys[i], nb - 1.0) * us[i]);
        }
        return acc.value();
    };

    const double log_base = std::log(x) + fp.beta() * std::log(span);
    const double tail = sum_peaked_series(
        [&](std::size_t n) {
            const double nb = static_cast<double>(n) * fp.beta();
            const double m = scaled_moment(nb);
            if (m <= 0.0) {
                return -std::numeric_limits<double>::infinity();
            }
            return static_cast<double>(n) * log_base - std::lgamma(nb) + std::log(m);
        },
        [](std::size_t) { return 1.0; }, 1, in.tol, kMlfMaxTerms);
    return head + tail;
}

/// Contraction certificate L (phi + ln p psi (b-a)^beta / Gamma(beta+1)) < 1.
[[nodiscard]] inline UniquenessCertificate uniqueness_certificate(double lipschitz,
                                                                  const FracParams& params,
                                                                  double a, double b) {
    if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
        throw DomainError("uniqueness_certificate: L must be finite and >= 0");
    }
    if (!(b > a)) {
        throw DomainError("uniqueness_certificate: requires b > a");
    }
    UniquenessCertificate cert;
    cert.lipschitz = lipschitz;
    cert.contraction_factor = params.phi() + params.ln_p() * params.psi() *
                                                 std::pow(b - a, params.beta()) /
                                                 gamma_fn(params.beta() + 1.0);
    cert.condition_value = lipschitz * cert.contraction_factor;
    cert.satisfied = cert.condition_value < 1.0;
    cert.margin = 1.0 - cert.condition_value;
    return cert;
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sampled lower estimate of the Lipschitz constant of f in y: the largest
/// difference quotient over all y-pairs of a samples x samples lattice.
[[nodiscard]] inline double estimate_lipschitz(
    const std::function<double(double, double)>& f, Range t_range, Range y_range,
    std::size_t samples) {
    if (samples < 2) {
        throw DomainError("estimate_lipschitz: at least 2 samples per axis are required");
    }
    if (!(t_range.hi >= t_range.lo) || !(y_range.hi > y_range.lo)) {
        throw DomainError("estimate_lipschitz: degenerate range");
    }
    const double dt = (t_range.hi - t_range.lo) / static_cast<double>(samples - 1);
    const double dy = (y_range.hi - y_range.lo) / static_cast<double>(samples - 1);
    std::vector<double> ys(samples);
    std::vector<double> fs(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        ys[j] = y_range.lo + dy * static_cast<double>(j);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = t_range.lo + dt * static_cast<double>(i);
        for (std::size_t j = 0; j < samples; ++j) {
            fs[j] = f(t, ys[j]);
        }
        for (std::size_t j = 0; j < samples; ++j) {
            for (std::size_t k = j + 1; k < samples; ++k) {
                best = std::max(best, std::abs(fs[j] - fs[k]) / (ys[k] - ys[j]));
            }
        }
    }
    return best;
}

/// |ln p| psi h^(beta+2) / (4 Gamma(beta+2) omega(t_n))
///   * (n+1)(n+4+2 beta) [(n+1)^beta - beta n^beta] * M2,   t_n = a + n h.
[[nodiscard]] inline RemainderBound remainder_bound(const FracParams& params,
                                                    const ScalarFn& omega, double h,
                                                    std::size_t n, double m2, double a) {
    if (!(h > 0.0)) {
        throw DomainError("remainder_bound: h must be > 0");
    }
    if (!(m2 >= 0.0)) {
        throw DomainError("remainder_bound: M2 must be >= 0");
    }
    RemainderBound r;
    r.n = n;
    r.h = h;
    r.m2 = m2;
    r.omega_at_tn = omega(a + static_cast<double>(n) * h);
    if (!(r.omega_at_tn > 0.0)) {
        throw DomainError("remainder_bound: omega(t_n) must be > 0");
    }
    const double beta = params.beta();
    const double nd = static_cast<double>(n);
    const double n_pow = n == 0 ? 0.0 : std::pow(nd, beta);
    const double growth =
        (nd + 1.0) * (nd + 4.0 + 2.0 * beta) * (std::pow(nd + 1.0, beta) - beta * n_pow);
    r.bound = std::abs(params.ln_p()) * params.psi() * std::pow(h, beta + 2.0) /
              (4.0 * gamma_fn(beta + 2.0) * r.omega_at_tn) * growth * m2;
    return r;
}

/// Largest |second central difference| of g over samples equispaced points.
[[nodiscard]] inline double estimate_M2(const ScalarFn& g, Range interval, std::size_t samples) {
    if (samples < 5) {
        throw DomainError("estimate_M2: at least 5 samples are required");
    }
    if (!(interval.hi > interval.lo)) {
        throw DomainError("estimate_M2: degenerate interval");
    }
    const double d = (interval.hi - interval.lo) / static_cast<double>(samples - 1);
    std::vector<double> v(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        v[i] = g(interval.lo + d * static_cast<double>(i));
    }
    double best = 0.0;
    for (std::size_t i = 1; i + 1 < samples; ++i) {
        best = std::max(best, std::abs(v[i - 1] - 2.0 * v[i] + v[i + 1]) / (d * d));
    }
    return best;
}

}  // namespace powfrac
