#pragma once

// Explicit two-step Lagrange product-integration scheme for
//
//   PFD y(t) = f(t, y(t)),   y(a) = y0,   t in [a, b],
//
//   y_{n+1} = (omega(a)/omega(t_n)) y0 + phi f(t_n, y_n)
//           + ln p psi h^beta / (Gamma(beta+2) omega(t_n))
//             * sum_{k=1}^{n} [ G_{k-1} A_{n-k} + G_k B_{n-k} ],   G_k = omega(t_k) f(t_k, y_k)
//
// with A_m = m^beta (m+1+beta) - (m+1)^(beta+1) and
//      B_m = (m+1)^beta (m+2+beta) - m^beta (m+2+2 beta).
// The history sum starts at k = 1; the [t_0, t_1] contribution is dropped,
// which relies on f(a, y0) = 0.

#include "powfrac/error.hpp"
#include "powfrac/grid.hpp"
#include "powfrac/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

namespace powfrac {

using RhsFn = std::function<double(double, double)>;

struct IVP {
    RhsFn rhs;
    ScalarFn omega = constant_fn(1.0);
    double a = 0.0;
    double b = 1.0;
    double y0 = 0.0;

    void validate() const {
        if (!rhs) {
            throw DomainError("IVP: rhs is not set");
        }
        if (!omega) {
            throw DomainError("IVP: omega is not set");
        }
        if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
            throw DomainError("IVP: requires finite a < b");
        }
        if (!std::isfinite(y0)) {
            throw DomainError("IVP: y0 must be finite");
        }
    }
};

/// Which node's weight divides the history and initial terms of the update
/// for y_{n+1}. AtN reproduces the printed scheme; AtNext uses omega(t_{n+1}).
enum class WeightAt { N, NPlusOne };

struct SolveOptions {
    WeightAt weight_at = WeightAt::N;
};

/// m^beta with 0^beta = 0.
[[nodiscard]] inline double lag_pow(std::size_t m, double beta) noexcept {
    return m == 0 ? 0.0 : std::pow(static_cast<double>(m), beta);
}

[[nodiscard]] inline double coeff_A(std::size_t m, double beta) {
    if (!(beta > 0.0)) {
        throw DomainError("coeff_A: beta must be > 0");
    }
    const double md = static_cast<double>(m);
    return lag_pow(m, beta) * (md + 1.0 + beta) - lag_pow(m + 1, beta) * (md + 1.0);
}

[[nodiscard]] inline double coeff_B(std::size_t m, double beta) {
    if (!(beta > 0.0)) {
        throw DomainError("coeff_B: beta must be > 0");
    }
    const double md = static_cast<double>(m);
    return lag_pow(m + 1, beta) * (md + 2.0 + beta) - lag_pow(m, beta) * (md + 2.0 + 2.0 * beta);
}

/// A and B tabulated by lag m = n - k.
struct SchemeCoeffs {
    double beta;
    std::vector<double> A;
    std::vector<double> B;

    SchemeCoeffs(double beta_, std::size_t size) : beta(beta_), A(size), B(size) {
        for (std::size_t m = 0; m < size; ++m) {
            A[m] = coeff_A(m, beta);
            B[m] = coeff_B(m, beta);
        }
    }
};

struct SolveResult {
    Trajectory trajectory;
    /// |f(a, y0)| <= 1e-12, the standing assumption of the scheme.
    bool initial_rhs_vanishes = true;
    double initial_rhs = 0.0;
};

[[nodiscard]] inline SolveResult solve(const IVP& ivp, const FracParams& params, double h,
                                       const SolveOptions& options = {}) {
    ivp.validate();
    const Grid grid = Grid::over(ivp.a, ivp.b, h);
    const std::vector<double> w = sample_weight(ivp.omega, grid);
    const std::size_t steps = grid.n_steps();
    const SchemeCoeffs coeffs(params.beta(), steps);

    const double hist_scale = params.ln_p() * params.psi() * std::pow(h, params.beta()) /
                              gamma_fn(params.beta() + 2.0);
    std::vector<double> y(grid.size(), 0.0);
    std::vector<double> g(grid.size(), 0.0);
    y[0] = ivp.y0;

    bool initial_rhs_vanishes = true;
    double initial_rhs = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
        const double f_n = ivp.rhs(grid.node(n), y[n]);
        if (!std::isfinite(f_n)) {
            throw NumericalError("solve: f(t_n, y_n) is not finite at step " + std::to_string(n),
                                 n);
        }
        g[n] = w[n] * f_n;
        if (n == 0) {
            initial_rhs = f_n;
            initial_rhs_vanishes = std::abs(f_n) <= 1e-12;
        }
        const double w_div = options.weight_at == WeightAt::N ? w[n] : w[n + 1];
        double history = 0.0;
        if (hist_scale != 0.0) {
            CompensatedSum acc;
            for (std::size_t k = 1; k <= n; ++k) {
                const std::size_t m = n - k;
                acc.add(g[k - 1] * coeffs.A[m] + g[k] * coeffs.B[m]);
            }
            history = acc.value();
        }
        y[n + 1] = (w[0] / w_div) * ivp.y0 + params.phi() * f_n + hist_scale / w_div * history;
        if (!std::isfinite(y[n + 1])) {
            throw NumericalError("solve: non-finite value at step " + std::to_string(n + 1) +
                                     " (t = " + std::to_string(grid.node(n + 1)) + ")",
                                 n + 1);
        }
    }
    return SolveResult{Trajectory(grid, std::move(y)), initial_rhs_vanishes, initial_rhs};
}

struct ConvergenceRow {
    double h = 0.0;
    double max_error = 0.0;
    /// log(e_{i-1}/e_i) / log(h_{i-1}/h_i); empty for the first row.
    std::optional<double> observed_order;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
};

/// Max error per step size against exact, or against the finest-h solution
/// when exact is absent (the finest row is then omitted). Coarse nodes must
/// coincide with fine nodes in the reference case.
[[nodiscard]] inline ConvergenceReport convergence_study(const IVP& ivp, const FracParams& params,
                                                         const std::optional<ScalarFn>& exact,
                                                         const std::vector<double>& h_list,
                                                         const SolveOptions& options = {}) {
    if (h_list.empty()) {
        throw DomainError("convergence_study: h_list is empty");
    }
    for (std::size_t i = 1; i < h_list.size(); ++i) {
        if (!(h_list[i] < h_list[i - 1])) {
            throw DomainError("convergence_study: h_list must be strictly decreasing");
        }
    }
    for (double h : h_list) {
        (void)Grid::over(ivp.a, ivp.b, h);
    }
    if (!exact && h_list.size() < 2) {
        throw DomainError("convergence_study: without an exact solution at least two steps are "
                          "required");
    }

    std::vector<std::future<SolveResult>> runs;
    runs.reserve(h_list.size());
    for (double h : h_list) {
        runs.push_back(std::async(std::launch::async,
                                  [&ivp, &params, &options, h] { return solve(ivp, params, h, options); }));
    }
    std::vector<Trajectory> trajectories;
    trajectories.reserve(h_list.size());
    for (auto& r : runs) {
        trajectories.push_back(r.get().trajectory);
    }

    std::vector<double> errors;
    if (exact) {
        for (auto& tr : trajectories) {
            tr.attach_exact(*exact);
            errors.push_back(tr.max_error());
        }
    } else {
        const Trajectory& ref = trajectories.back();
        for (std::size_t i = 0; i + 1 < trajectories.size(); ++i) {
            const Trajectory& tr = trajectories[i];
            const double ratio = tr.grid.h() / ref.grid.h();
            const auto stride = static_cast<std::size_t>(std::llround(ratio));
            if (std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
                throw DomainError("convergence_study: step sizes must be integer multiples of "
                                  "the finest step when no exact solution is given");
            }
            double err = 0.0;
            for (std::size_t k = 0; k < tr.values.size(); ++k) {
                err = std::max(err, std::abs(tr.values[k] - ref.values[k * stride]));
            }
            errors.push_back(err);
        }
    }

    ConvergenceReport report;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        ConvergenceRow row{h_list[i], errors[i], std::nullopt};
        if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0) {
            row.observed_order =
                std::log(errors[i - 1] / errors[i]) / std::log(h_list[i - 1] / h_list[i]);
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace powfrac
