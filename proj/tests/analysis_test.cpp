#include "powfrac/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

namespace pf = powfrac;

namespace {

pf::GronwallInput constant_input(double lambda, pf::FracParams fp, double t, double u = 1.0) {
    return pf::GronwallInput{pf::constant_fn(u), lambda, std::move(fp), 0.0, t};
}

/// 10^4 terms of 1 + sum x^n T^{n beta} / Gamma(n beta) in long double.
double brute_force_gronwall_series(double x, double span, double beta) {
    long double sum = 1.0L;
    const long double lb = std::log(static_cast<long double>(x)) +
                           beta * std::log(static_cast<long double>(span));
    for (int n = 1; n <= 10000; ++n) {
        sum += std::exp(n * lb - std::lgamma(static_cast<long double>(n) * beta));
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST(GronwallConstant, ZeroLambdaReturnsU) {
    const pf::FracParams fp(0.3, 0.5, 2.0);
    EXPECT_EQ(pf::gronwall_bound_constant(constant_input(0.0, fp, 2.0, 1.75)), 1.75);
}

TEST(GronwallConstant, UnitBase) {
    const pf::FracParams fp(0.3, 0.5, 1.0);
    EXPECT_NEAR(pf::gronwall_bound_constant(constant_input(0.5, fp, 1.0, 2.0)), 3.0769231, 1e-7);
    EXPECT_NEAR(pf::gronwall_bound_constant(constant_input(0.5, fp, 1.0, 2.0)), 2.0 / 0.65, 1e-15);
}

TEST(GronwallConstant, MatchesSeriesOracle) {
    const pf::FracParams fp(0.2, 0.5, 2.0);
    const double value = pf::gronwall_bound_constant(constant_input(0.4, fp, 1.0));
    EXPECT_NEAR(value / oracle::kGronwallConst, 1.0, 1e-10);
    const double x = std::log(2.0) * 0.4 * 0.2 / (1.0 - 0.4 * 0.8);
    const double brute = brute_force_gronwall_series(x, 1.0, 0.5) / (1.0 - 0.4 * 0.8);
    EXPECT_NEAR(value / brute, 1.0, 1e-10);
}

TEST(GronwallConstant, DominatesLeadingTerm) {
    for (double lambda : {0.1, 0.5, 0.9}) {
        for (double p : {1.0, 1.5, 7.0}) {
            const pf::FracParams fp(0.35, 0.8, p);
            const double value = pf::gronwall_bound_constant(constant_input(lambda, fp, 3.0, 2.0));
            EXPECT_GE(value, 2.0 / (1.0 - lambda * fp.phi()));
        }
    }
}

TEST(GronwallConstant, MonotoneInTimeLambdaAndBase) {
    const pf::FracParams base(0.3, 0.7, 2.0);
    double prev = 0.0;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double v = pf::gronwall_bound_constant(constant_input(0.5, base, t));
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (double lambda : {0.0, 0.2, 0.4, 0.8, 1.2}) {
        const double v = pf::gronwall_bound_constant(constant_input(lambda, base, 2.0));
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 5.0, 20.0}) {
        const double v =
            pf::gronwall_bound_constant(constant_input(0.5, pf::FracParams(0.3, 0.7, p), 2.0));
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(GronwallConstant, HypothesisViolations) {
    const pf::FracParams fp(0.2, 0.5, 2.0);
    EXPECT_THROW((void)pf::gronwall_bound_constant(constant_input(1.25, fp, 1.0)),
                 pf::DomainError);
    EXPECT_THROW((void)pf::gronwall_bound_constant(constant_input(-0.1, fp, 1.0)),
                 pf::DomainError);
    EXPECT_THROW((void)pf::gronwall_bound_constant(
                     constant_input(0.1, pf::FracParams(0.2, 0.5, 0.5), 1.0)),
                 pf::DomainError);
    EXPECT_THROW((void)pf::gronwall_bound_constant(constant_input(0.1, fp, 1.0, -1.0)),
                 pf::DomainError);
}

TEST(GronwallSeries, ZeroVReturnsU) {
    const pf::FracParams fp(0.2, 0.5, 2.0);
    pf::GronwallInput in{[](double s) { return 1.0 + s; }, pf::constant_fn(0.0), fp, 0.0, 1.0};
    EXPECT_EQ(pf::gronwall_bound_series(in), 2.0);
}

TEST(GronwallSeries, BelowCorollaryForConstantV) {
    // the corollary replaces int (t-s)^{n beta - 1} ds by (t-a)^{n beta}, which
    // dominates the theorem's term only when n beta >= 1
    const pf::FracParams fp(0.3, 1.3, 3.0);
    const pf::ScalarFn u = [](double s) { return 1.0 + s * s; };
    for (double lambda : {0.2, 0.7}) {
        pf::GronwallInput series_in{u, pf::constant_fn(lambda), fp, 0.0, 1.5};
        pf::GronwallInput const_in{u, lambda, fp, 0.0, 1.5};
        EXPECT_LE(pf::gronwall_bound_series(series_in),
                  pf::gronwall_bound_constant(const_in) + 1e-8);
    }
}

TEST(GronwallSeries, CorollaryIsNotAnUpperBoundForSmallBeta) {
    const pf::FracParams fp(0.3, 0.5, 3.0);
    pf::GronwallInput series_in{pf::constant_fn(1.0), pf::constant_fn(0.7), fp, 0.0, 1.5};
    pf::GronwallInput const_in{pf::constant_fn(1.0), 0.7, fp, 0.0, 1.5};
    EXPECT_GT(pf::gronwall_bound_series(series_in), pf::gronwall_bound_constant(const_in));
}

TEST(GronwallSeries, MatchesRefinedQuadratureOracle) {
    const pf::FracParams fp(0.2, 0.5, 2.0);
    pf::GronwallInput in{[](double s) { return 1.0 + s; }, pf::ScalarFn([](double s) {
                             return s / 10.0;
                         }),
                         fp, 0.0, 1.0};
    const double coarse = pf::gronwall_bound_series(in);
    EXPECT_NEAR(coarse / oracle::kGronwallSeries, 1.0, 1e-6);
    in.tol = 1e-14;
    const double fine = pf::gronwall_bound_series(in, 1024);
    EXPECT_NEAR(fine / oracle::kGronwallSeries, 1.0, 1e-10);
}

TEST(GronwallSeries, SmallBetaEndpointSingularity) {
    // u = 1 and constant v: the s-integrals are exact powers and the bound is
    // U * E_{beta,1}(X (t-a)^beta) with E the classical Mittag-Leffler function
    const double beta = 0.1;
    const double lambda = 0.5;
    const double span = 2.0;
    const pf::FracParams fp(0.5, beta, 4.0);
    pf::GronwallInput in{pf::constant_fn(1.0), pf::constant_fn(lambda), fp, 0.0, span};
    const double denom = 1.0 - fp.phi() * lambda;
    const double x = fp.ln_p() * fp.psi() * lambda / denom;
    const double expected =
        oracle::brute_force_mlf(beta, 1.0, std::numbers::e, x * std::pow(span, beta)) / denom;
    EXPECT_NEAR(pf::gronwall_bound_series(in) / expected, 1.0, 1e-9);
}

TEST(GronwallSeries, HypothesisViolations) {
    const pf::FracParams fp(0.2, 0.5, 2.0);
    pf::GronwallInput decreasing{pf::constant_fn(1.0),
                                 pf::ScalarFn([](double s) { return 1.0 - s / 2.0; }), fp, 0.0,
                                 1.0};
    EXPECT_THROW((void)pf::gronwall_bound_series(decreasing), pf::DomainError);
    pf::GronwallInput too_big{pf::constant_fn(1.0), pf::ScalarFn([](double s) { return 2.0 * s; }),
                              fp, 0.0, 1.0};
    EXPECT_THROW((void)pf::gronwall_bound_series(too_big), pf::DomainError);
    pf::GronwallInput negative_u{[](double s) { return s - 0.5; },
                                 pf::ScalarFn([](double s) { return s / 10.0; }), fp, 0.0, 1.0};
    EXPECT_THROW((void)pf::gronwall_bound_series(negative_u), pf::DomainError);
}

TEST(Certificate, ZeroLipschitz) {
    const auto cert = pf::uniqueness_certificate(0.0, pf::FracParams(0.5, 1.0, 2.0), 0.0, 1.0);
    EXPECT_EQ(cert.condition_value, 0.0);
    EXPECT_TRUE(cert.satisfied);
    EXPECT_EQ(cert.margin, 1.0);
}

TEST(Certificate, Example2) {
    const pf::FracParams fp(0.3, 1.0, std::numbers::e);
    const auto cert = pf::uniqueness_certificate(1.0 / 15.0, fp, 0.0, 4.0);
    EXPECT_NEAR(cert.condition_value, (1.0 + 3.0 * 0.3) / 15.0, 1e-12);
    EXPECT_NEAR(cert.condition_value, 0.12667, 1e-5);
    EXPECT_TRUE(cert.satisfied);
    EXPECT_NEAR(cert.margin, 1.0 - cert.condition_value, 1e-15);
    EXPECT_NEAR(cert.condition_value, cert.lipschitz * cert.contraction_factor, 1e-15);
}

TEST(Certificate, NotSatisfied) {
    for (double beta : {0.3, 1.0, 2.0}) {
        const auto cert = pf::uniqueness_certificate(2.0, pf::FracParams(0.0, beta, 5.0), 0.0, 3.0);
        EXPECT_EQ(cert.condition_value, 2.0);
        EXPECT_FALSE(cert.satisfied);
        EXPECT_EQ(cert.margin, -1.0);
    }
}

TEST(Certificate, LinearInLipschitz) {
    const pf::FracParams fp(0.45, 0.7, 3.3, pf::NormalizationFn::gamma_blend());
    for (double L : {0.01, 0.3, 1.7}) {
        const auto one = pf::uniqueness_certificate(L, fp, -1.0, 2.0);
        const auto two = pf::uniqueness_certificate(2.0 * L, fp, -1.0, 2.0);
        EXPECT_EQ(two.condition_value, 2.0 * one.condition_value);
    }
}

TEST(Certificate, RejectsBadInputs) {
    const pf::FracParams fp(0.45, 0.7, 3.3);
    EXPECT_THROW((void)pf::uniqueness_certificate(-1.0, fp, 0.0, 1.0), pf::DomainError);
    EXPECT_THROW((void)pf::uniqueness_certificate(1.0, fp, 1.0, 1.0), pf::DomainError);
}

TEST(Lipschitz, SimpleFunctions) {
    EXPECT_EQ(pf::estimate_lipschitz([](double, double) { return 4.0; }, {0, 1}, {-1, 1}, 20), 0.0);
    EXPECT_NEAR(pf::estimate_lipschitz([](double, double y) { return 3.0 * y; }, {0, 1}, {-1, 1}, 20),
                3.0, 1e-12);
    EXPECT_THROW((void)pf::estimate_lipschitz([](double, double y) { return y; }, {0, 1}, {1, 1}, 5),
                 pf::DomainError);
    EXPECT_THROW((void)pf::estimate_lipschitz([](double, double y) { return y; }, {0, 1}, {0, 1}, 1),
                 pf::DomainError);
}

TEST(Lipschitz, Example2RightHandSide) {
    const auto f = [](double t, double y) {
        return t * t / 15.0 * std::cos(2.0 * t) / (1.0 + std::abs(y));
    };
    const double estimate = pf::estimate_lipschitz(f, {0.0, 4.0}, {-3.0, 3.0}, 200);
    // the t^2 factor is not bounded by 1 on [0, 4]; the true constant is
    // sup_t t^2 |cos 2t| / 15, attained near t = pi
    double sup = 0.0;
    for (int i = 0; i <= 400000; ++i) {
        const double t = 4.0 * i / 400000.0;
        sup = std::max(sup, t * t * std::abs(std::cos(2.0 * t)) / 15.0);
    }
    EXPECT_LE(estimate, sup + 1e-9);
    EXPECT_GT(estimate, 0.9 * sup);
    EXPECT_GT(estimate, 1.0 / 15.0);
}

TEST(Remainder, UnitBaseIsZero) {
    const auto r = pf::remainder_bound(pf::FracParams(0.4, 0.5, 1.0), pf::constant_fn(1.0), 0.01, 7,
                                       3.0, 0.0);
    EXPECT_EQ(r.bound, 0.0);
}

TEST(Remainder, FirstStepBetaOne) {
    const pf::FracParams fp(0.4, 1.0, 3.0);
    const double h = 0.05;
    const auto r = pf::remainder_bound(fp, pf::constant_fn(1.0), h, 0, 2.5, 0.0);
    EXPECT_NEAR(r.bound, 0.75 * std::log(3.0) * fp.psi() * h * h * h * 2.5, 1e-18);
}

TEST(Remainder, Example1Value) {
    const pf::FracParams fp(0.1, 0.2, 1.1, pf::NormalizationFn::gamma_blend());
    const auto r = pf::remainder_bound(fp, pf::constant_fn(1.0), 0.01, 100, 2.0, 0.0);
    EXPECT_NEAR(r.bound / oracle::kRemainder, 1.0, 1e-12);
    EXPECT_EQ(r.n, 100u);
    EXPECT_EQ(r.omega_at_tn, 1.0);
}

TEST(Remainder, ScalesWithStep) {
    for (double beta : {0.2, 1.0, 1.7}) {
        const pf::FracParams fp(0.3, beta, 2.0);
        const pf::ScalarFn omega = [](double t) { return t + 2.0; };
        for (std::size_t n : {0u, 5u, 500u}) {
            // omega(t_n) changes with h; fix it by evaluating at a = -n h
            const double h = 0.01;
            const auto r1 = pf::remainder_bound(fp, pf::constant_fn(1.5), h, n, 1.0, 0.0);
            const auto r2 = pf::remainder_bound(fp, pf::constant_fn(1.5), 2.0 * h, n, 1.0, 0.0);
            EXPECT_NEAR(r2.bound / r1.bound, std::pow(2.0, beta + 2.0), 1e-12 * std::pow(2.0, beta + 2.0));
            const auto w = pf::remainder_bound(fp, omega, h, n, 1.0, 0.0);
            EXPECT_NEAR(w.omega_at_tn, omega(static_cast<double>(n) * h), 1e-15);
        }
    }
}

TEST(Remainder, ZeroExactlyWhenExpected) {
    const pf::ScalarFn one = pf::constant_fn(1.0);
    EXPECT_EQ(pf::remainder_bound(pf::FracParams(0.0, 0.5, 2.0), one, 0.1, 3, 1.0, 0.0).bound, 0.0);
    EXPECT_EQ(pf::remainder_bound(pf::FracParams(0.5, 0.5, 2.0), one, 0.1, 3, 0.0, 0.0).bound, 0.0);
    EXPECT_GT(pf::remainder_bound(pf::FracParams(0.5, 0.5, 2.0), one, 0.1, 3, 1.0, 0.0).bound, 0.0);
    EXPECT_THROW((void)pf::remainder_bound(pf::FracParams(0.5, 0.5, 2.0), one, 0.0, 3, 1.0, 0.0),
                 pf::DomainError);
    EXPECT_THROW((void)pf::remainder_bound(pf::FracParams(0.5, 0.5, 2.0), one, 0.1, 3, -1.0, 0.0),
                 pf::DomainError);
}

TEST(EstimateM2, Polynomials) {
    EXPECT_NEAR(pf::estimate_M2([](double t) { return t; }, {0.0, 1.0}, 101), 0.0, 1e-8);
    EXPECT_NEAR(pf::estimate_M2([](double t) { return t * t; }, {0.0, 1.0}, 101), 2.0, 1e-6);
    EXPECT_NEAR(pf::estimate_M2([](double t) { return std::sin(t); }, {0.0, std::numbers::pi}, 10000),
                1.0, 1e-4);
    EXPECT_THROW((void)pf::estimate_M2([](double t) { return t; }, {0.0, 1.0}, 4), pf::DomainError);
}
