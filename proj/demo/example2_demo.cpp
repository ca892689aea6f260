// Solves the nonlinear weighted problem example2 for a few orders and prints
// y(b) next to the contraction certificate with L = 1/15.

#include "powfrac/analysis.hpp"
#include "powfrac/problems.hpp"
#include "powfrac/solver.hpp"

#include <cstdio>

int main() {
    namespace pf = powfrac;
    std::printf("%6s %20s %12s %10s\n", "alpha", "y(4)", "condition", "satisfied");
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const pf::FracParams fp(alpha, 1.0, 2.718281828459045);
        const pf::Problem pr = pf::builtin_problem("example2", fp);
        const auto res = pf::solve(pr.ivp, fp, 0.01);
        const auto cert = pf::uniqueness_certificate(1.0 / 15.0, fp, pr.ivp.a, pr.ivp.b);
        std::printf("%6.2f %20.15f %12.6f %10s\n", alpha, res.trajectory.values.back(),
                    cert.condition_value, cert.satisfied ? "yes" : "no");
    }
}
