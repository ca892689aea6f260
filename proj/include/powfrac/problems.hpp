#pragma once

#include "powfrac/error.hpp"
#include "powfrac/kernel.hpp"
#include "powfrac/solver.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace powfrac {

struct Problem {
    IVP ivp;
    /// Exact solution, when known, for the parameters the problem was built with.
    std::optional<ScalarFn> exact;
};

/// example1: y = PFI(t^2), omega = 1, y0 = 0 on [0, 10], with the closed form
///   y(t) = phi t^2 + 2 ln p psi / Gamma(beta+3) t^(beta+2).
/// example2: f = t^2/15 cos(2t)/(1+|y|), omega = t + 2, y0 = sqrt(pi) on [0, 4].
[[nodiscard]] inline Problem builtin_problem(std::string_view id, const FracParams& params) {
    if (id == "example1") {
        const double phi = params.phi();
        const double beta = params.beta();
        const double c = 2.0 * params.ln_p() * params.psi() / gamma_fn(beta + 3.0);
        return Problem{
            IVP{[](double t, double) { return t * t; }, constant_fn(1.0), 0.0, 10.0, 0.0},
            ScalarFn([phi, c, beta](double t) {
                return phi * t * t + c * std::pow(t, beta + 2.0);
            })};
    }
    if (id == "example2") {
        return Problem{IVP{[](double t, double y) {
                               return t * t / 15.0 * std::cos(2.0 * t) / (1.0 + std::abs(y));
                           },
                           [](double t) { return t + 2.0; }, 0.0, 4.0,
                           std::sqrt(std::numbers::pi)},
                       std::nullopt};
    }
    throw DomainError("unknown problem '" + std::string(id) + "' (expected example1 or example2)");
}

}  // namespace powfrac
