#pragma once

// Discrete power fractional operators on a uniform grid.
//
// Every integral is evaluated by product integration: the smooth factor is
// replaced by its piecewise-linear interpolant through the grid nodes and the
// kernel is integrated exactly against it. Weights depend only on the lag
// j = n - k, so each operator precomputes one table of length n_steps and
// then runs an O(n^2) history sum. Node 0 of every integral is 0.
//
// Accuracy statements assume (omega g) has a bounded second derivative; any
// evaluatable g is accepted.

#include "powfrac/error.hpp"
#include "powfrac/grid.hpp"
#include "powfrac/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace powfrac {

/// Lag-indexed product-integration weights: the integral over one subinterval
/// at lag j equals lo[j] * F_k + hi[j] * F_{k+1}. Index 0 is unused.
struct LagWeights {
    std::vector<double> lo;
    std::vector<double> hi;
};

namespace detail {

inline void check_same_size(std::span<const double> a, const Grid& grid, const char* what) {
    if (a.size() != grid.size()) {
        throw DomainError(std::string(what) + ": one value per grid node is required");
    }
}

/// out[n] = sum_{k<n} lo[n-k] F_k + hi[n-k] F_{k+1}
inline std::vector<double> lag_convolve(const LagWeights& w, std::span<const double> f) {
    const std::size_t size = f.size();
    std::vector<double> out(size, 0.0);
    for (std::size_t n = 1; n < size; ++n) {
        CompensatedSum acc;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t j = n - k;
            acc.add(w.lo[j] * f[k] + w.hi[j] * f[k + 1]);
        }
        out[n] = acc.value();
    }
    return out;
}

}  // namespace detail

/// Weights of (1/Gamma(order)) * int (t_n - s)^(order-1) F(s) ds with F
/// piecewise linear.
[[nodiscard]] inline LagWeights rl_weights(double order, const Grid& grid) {
    if (!(order > 0.0)) {
        throw DomainError("Riemann-Liouville order must be > 0");
    }
    const std::size_t n = grid.n_steps();
    LagWeights w{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
    using ld = long double;
    const ld g = order;
    const ld h = grid.h();
    const ld scale = std::exp(-static_cast<ld>(std::lgamma(order + 2.0))) / h;
    for (std::size_t j = 1; j <= n; ++j) {
        const ld u1 = static_cast<ld>(j) * h;
        const ld u0 = static_cast<ld>(j - 1) * h;
        const ld p1 = std::pow(u1, g);
        const ld p0 = j == 1 ? 0.0L : std::pow(u0, g);
        const ld q1 = p1 * u1;
        const ld q0 = p0 * u0;
        w.hi[j] = static_cast<double>(scale * ((g + 1) * u1 * (p1 - p0) - g * (q1 - q0)));
        w.lo[j] = static_cast<double>(scale * (g * (q1 - q0) - (g + 1) * u0 * (p1 - p0)));
    }
    return w;
}

/// Node values of (1/(Gamma(order) omega(t_n))) int_a^{t_n} (t_n-s)^(order-1) F(s) ds
/// where weighted_values holds F = omega g at the nodes.
[[nodiscard]] inline std::vector<double> rl_integral_nodes(std::span<const double> weighted_values,
                                                           std::span<const double> omega_nodes,
                                                           double order, const Grid& grid) {
    detail::check_same_size(weighted_values, grid, "rl_integral");
    detail::check_same_size(omega_nodes, grid, "rl_integral");
    std::vector<double> out = detail::lag_convolve(rl_weights(order, grid), weighted_values);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] /= omega_nodes[k];
    }
    return out;
}

/// Weighted Riemann-Liouville integral of order beta.
[[nodiscard]] inline Trajectory rl_integral(const ScalarFn& g, const ScalarFn& omega, double beta,
                                            const Grid& grid) {
    if (!(beta > 0.0)) {
        throw DomainError("rl_integral: beta must be > 0");
    }
    const std::vector<double> w = sample_weight(omega, grid);
    std::vector<double> f = grid.sample(g);
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] *= w[k];
    }
    return Trajectory(grid, rl_integral_nodes(f, w, beta, grid));
}

/// Power fractional integral from node values of g and omega.
[[nodiscard]] inline std::vector<double> pfi_nodes(std::span<const double> g_nodes,
                                                   std::span<const double> omega_nodes,
                                                   const FracParams& params, const Grid& grid) {
    detail::check_same_size(g_nodes, grid, "pfi");
    std::vector<double> out(g_nodes.size());
    const double rl_coeff = params.ln_p() * params.psi();
    std::vector<double> rl(g_nodes.size(), 0.0);
    if (rl_coeff != 0.0) {
        std::vector<double> f(g_nodes.begin(), g_nodes.end());
        for (std::size_t k = 0; k < f.size(); ++k) {
            f[k] *= omega_nodes[k];
        }
        rl = rl_integral_nodes(f, omega_nodes, params.beta(), grid);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = params.phi() * g_nodes[k] + rl_coeff * rl[k];
    }
    return out;
}

[[nodiscard]] inline Trajectory pfi(const ScalarFn& g, const FracParams& params,
                                    const ScalarFn& omega, const Grid& grid) {
    const std::vector<double> w = sample_weight(omega, grid);
    return Trajectory(grid, pfi_nodes(grid.sample(g), w, params, grid));
}

/// (omega g)' at the grid nodes: sampled from dg_omega when supplied,
/// otherwise second-order finite differences on a 4x refined sampling
/// (central inside, one-sided at the ends).
[[nodiscard]] inline std::vector<double> weighted_derivative_nodes(
    const ScalarFn& g, const std::optional<ScalarFn>& dg_omega, const ScalarFn& omega,
    const Grid& grid) {
    if (dg_omega) {
        return grid.sample(*dg_omega);
    }
    const double hr = grid.h() / 4.0;
    auto wg = [&](double t) { return omega(t) * g(t); };
    std::vector<double> d(grid.size());
    const std::size_t last = grid.n_steps();
    for (std::size_t k = 0; k <= last; ++k) {
        const double t = grid.node(k);
        if (k == 0) {
            d[k] = (-3.0 * wg(t) + 4.0 * wg(t + hr) - wg(t + 2.0 * hr)) / (2.0 * hr);
        } else if (k == last) {
            d[k] = (3.0 * wg(t) - 4.0 * wg(t - hr) + wg(t - 2.0 * hr)) / (2.0 * hr);
        } else {
            d[k] = (wg(t + hr) - wg(t - hr)) / (2.0 * hr);
        }
    }
    return d;
}

/// Product-integration weights for the kernel pE_{beta,1}(-mu u^beta) against a
/// piecewise-linear factor. Built from the closed-form antiderivatives
///   int_0^x K        = x   pE_{beta,2}(-mu x^beta)
///   int_0^x (x-u) K  = x^2 pE_{beta,3}(-mu x^beta)
/// evaluated once per lag.
[[nodiscard]] inline LagWeights mlf_kernel_weights(const FracParams& params, const Grid& grid,
                                                   double tol = kDefaultSeriesTol) {
    const std::size_t n = grid.n_steps();
    const double h = grid.h();
    const double beta = params.beta();
    std::vector<double> m0(n + 1, 0.0);
    std::vector<double> m2(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const double x = static_cast<double>(j) * h;
        const double s = -params.mu() * std::pow(x, beta);
        m0[j] = x * power_mlf(beta, 2.0, params.p(), s, tol);
        m2[j] = x * x * power_mlf(beta, 3.0, params.p(), s, tol);
    }
    LagWeights w{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
    for (std::size_t j = 1; j <= n; ++j) {
        const double i0 = m0[j] - m0[j - 1];
        const double i_hi = m2[j] - m2[j - 1] - h * m0[j - 1];
        w.hi[j] = i_hi / h;
        w.lo[j] = i0 - w.hi[j];
    }
    return w;
}

/// Power fractional derivative by product integration of the Mittag-Leffler
/// kernel against (omega g)'.
[[nodiscard]] inline Trajectory pfd_quadrature(const ScalarFn& g,
                                               const std::optional<ScalarFn>& dg_omega,
                                               const FracParams& params, const ScalarFn& omega,
                                               const Grid& grid,
                                               double tol = kDefaultSeriesTol) {
    const std::vector<double> w = sample_weight(omega, grid);
    const std::vector<double> d = weighted_derivative_nodes(g, dg_omega, omega, grid);
    std::vector<double> out = detail::lag_convolve(mlf_kernel_weights(params, grid, tol), d);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] /= params.phi() * w[k];
    }
    return Trajectory(grid, std::move(out));
}

inline constexpr std::size_t kPfdSeriesMaxTerms = 10'000;

/// Power fractional derivative as the series
///   (1/phi) sum_n (-mu ln p)^n RL I^{beta n + 1}((omega g)'/omega).
/// With n_terms unset, terms are added until the newest term's max-norm drops
/// below 1e-13 of the partial sum's max-norm.
[[nodiscard]] inline Trajectory pfd_series(const ScalarFn& g,
                                           const std::optional<ScalarFn>& dg_omega,
                                           const FracParams& params, const ScalarFn& omega,
                                           const Grid& grid,
                                           std::optional<std::size_t> n_terms = std::nullopt) {
    if (n_terms && *n_terms < 1) {
        throw DomainError("pfd_series: n_terms must be >= 1");
    }
    const std::vector<double> w = sample_weight(omega, grid);
    const std::vector<double> d = weighted_derivative_nodes(g, dg_omega, omega, grid);
    const double ratio = -params.mu() * params.ln_p();
    const std::size_t limit = n_terms.value_or(kPfdSeriesMaxTerms);

    std::vector<double> sum(grid.size(), 0.0);
    double coeff = 1.0;
    for (std::size_t n = 0; n < limit; ++n) {
        const double order = params.beta() * static_cast<double>(n) + 1.0;
        const std::vector<double> rl = rl_integral_nodes(d, w, order, grid);
        double term_norm = 0.0;
        double sum_norm = 0.0;
        for (std::size_t k = 0; k < sum.size(); ++k) {
            const double term = coeff * rl[k];
            sum[k] += term;
            term_norm = std::max(term_norm, std::abs(term));
            sum_norm = std::max(sum_norm, std::abs(sum[k]));
        }
        coeff *= ratio;
        if (!n_terms) {
            if (coeff == 0.0 || sum_norm == 0.0 || term_norm < 1e-13 * sum_norm) {
                break;
            }
            if (n + 1 == limit) {
                throw ConvergenceError("pfd_series: no convergence within " +
                                       std::to_string(limit) + " terms");
            }
        }
    }
    for (double& v : sum) {
        v /= params.phi();
    }
    return Trajectory(grid, std::move(sum));
}

/// max_k |PFI(PFD g)(t_k) - (g(t_k) - (omega g)(a)/omega(t_k))|, with PFD from
/// the quadrature route and PFI applied to its piecewise-linear interpolant.
[[nodiscard]] inline double inversion_residual(const ScalarFn& g, const FracParams& params,
                                               const ScalarFn& omega, const Grid& grid) {
    const std::vector<double> w = sample_weight(omega, grid);
    const std::vector<double> gv = grid.sample(g);
    const Trajectory d = pfd_quadrature(g, std::nullopt, params, omega, grid);
    const std::vector<double> composed = pfi_nodes(d.values, w, params, grid);
    const double wg_a = w.front() * gv.front();
    double residual = 0.0;
    for (std::size_t k = 0; k < gv.size(); ++k) {
        const double target = gv[k] - wg_a / w[k];
        residual = std::max(residual, std::abs(composed[k] - target));
    }
    return residual;
}

}  // namespace powfrac
