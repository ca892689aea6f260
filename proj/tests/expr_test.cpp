#include "powfrac/expr.hpp"
#include "powfrac/kernel.hpp"
#include "powfrac/problems.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "expr_gen.hpp"

namespace pf = powfrac;
namespace ex = powfrac::expr;

namespace {

std::size_t error_column(const std::string& src) {
    try {
        (void)ex::parse(src);
    } catch (const ex::ParseError& e) {
        return e.column();
    }
    ADD_FAILURE() << "no error for '" << src << "'";
    return 0;
}

}  // namespace

TEST(ExprParse, Evaluates) {
    EXPECT_EQ(ex::parse("2+3*t")(2.0), 8.0);
    EXPECT_EQ(ex::parse("  2 + 3 * t ")(2.0), 8.0);
    EXPECT_EQ(ex::parse("1.5e2")(0.0), 150.0);
    EXPECT_EQ(ex::parse(".25")(0.0), 0.25);
    EXPECT_EQ(ex::parse("alpha * 2")(0.0, 0.0, 0.3), 0.6);
    EXPECT_EQ(ex::parse("pi")(0.0), std::numbers::pi);
    EXPECT_EQ(ex::parse("e")(0.0), std::numbers::e);
    EXPECT_EQ(ex::parse("2*e")(0.0), 2.0 * std::numbers::e);
}

TEST(ExprParse, Example2RightHandSideVanishesAtStart) {
    const auto f = ex::parse("t^2/15 * cos(2*t)/(1+abs(y))");
    EXPECT_EQ(f(0.0, std::sqrt(std::numbers::pi)), 0.0);
}

TEST(ExprParse, Precedence) {
    EXPECT_EQ(ex::parse("-t^2")(3.0), -9.0);
    EXPECT_EQ(ex::parse("2^3^2")(0.0), 512.0);
    EXPECT_EQ(ex::parse("2^-1")(0.0), 0.5);
    EXPECT_EQ(ex::parse("2^-1*4")(0.0), 2.0);
    EXPECT_EQ(ex::parse("8/4/2")(0.0), 1.0);
    EXPECT_EQ(ex::parse("2-3-4")(0.0), -5.0);
    EXPECT_EQ(ex::parse("2*-3")(0.0), -6.0);
    EXPECT_EQ(ex::parse("--2")(0.0), 2.0);
    EXPECT_EQ(ex::parse("1+2*3^2")(0.0), 19.0);
    EXPECT_EQ(ex::parse("(1+2)*3")(0.0), 9.0);
    EXPECT_EQ(ex::parse("-2*3")(0.0), -6.0);
}

TEST(ExprParse, Functions) {
    const double x = 0.7;
    EXPECT_EQ(ex::parse("sin(t)")(x), std::sin(x));
    EXPECT_EQ(ex::parse("cos(t)")(x), std::cos(x));
    EXPECT_EQ(ex::parse("tan(t)")(x), std::tan(x));
    EXPECT_EQ(ex::parse("exp(t)")(x), std::exp(x));
    EXPECT_EQ(ex::parse("ln(t)")(x), std::log(x));
    EXPECT_EQ(ex::parse("sqrt(t)")(x), std::sqrt(x));
    EXPECT_EQ(ex::parse("abs(-t)")(x), x);
    EXPECT_EQ(ex::parse("gamma(t)")(x), std::tgamma(x));
    EXPECT_EQ(ex::parse("sin (t)")(x), std::sin(x));
}

TEST(ExprParse, ErrorColumns) {
    EXPECT_EQ(error_column("(t"), 3u);
    EXPECT_EQ(error_column(""), 1u);
    EXPECT_EQ(error_column("   "), 1u);
    EXPECT_EQ(error_column("t + foo"), 5u);
    EXPECT_EQ(error_column("t)"), 2u);
    EXPECT_EQ(error_column(")"), 1u);
    EXPECT_EQ(error_column("1 +"), 4u);
    EXPECT_EQ(error_column("sin t"), 5u);
    EXPECT_EQ(error_column("2 $ 3"), 3u);
    EXPECT_EQ(error_column("t y"), 3u);
    EXPECT_EQ(error_column("sin(t"), 6u);
    EXPECT_EQ(error_column("1e999"), 1u);
    EXPECT_EQ(error_column("2*(3+(4)"), 9u);
}

TEST(ExprParse, ErrorMessagesCarryColumn) {
    try {
        (void)ex::parse("t + foo");
        FAIL();
    } catch (const ex::ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
    }
}

TEST(ExprPrint, FullyParenthesized) {
    EXPECT_EQ(ex::parse("1+2*t").print(), "(1 + (2 * t))");
    EXPECT_EQ(ex::parse("-t^2").print(), "(-(t ^ 2))");
    EXPECT_EQ(ex::parse("2^3^2").print(), "(2 ^ (3 ^ 2))");
    EXPECT_EQ(ex::parse("sin(pi*alpha)").print(), "sin((pi * alpha))");
    EXPECT_EQ(ex::parse("0.1").print(), "0.1");
}

TEST(ExprPrint, RoundTripOnGeneratedTrees) {
    expr_gen::TreeGen gen(20261019);
    for (int i = 0; i < 200; ++i) {
        const ex::Expr original(gen.tree(6));
        const std::string text = original.print();
        const ex::Expr reparsed = ex::parse(text);
        ASSERT_TRUE(reparsed == original) << text;
        EXPECT_EQ(reparsed.print(), text);
    }
}

TEST(ExprPrint, LiteralsRoundTripBitwise) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::bit_cast<double>(rng() & 0x7fefffffffffffffULL);
        auto n = std::make_shared<ex::Node>();
        n->kind = ex::Kind::Number;
        n->value = v;
        const double back = ex::parse(ex::Expr(n).print())(0.0);
        ASSERT_EQ(std::bit_cast<std::uint64_t>(back), std::bit_cast<std::uint64_t>(v));
    }
}

TEST(ExprEval, AgreesWithBuiltinClosures) {
    const pf::FracParams fp(0.1, 0.2, 1.1, pf::NormalizationFn::gamma_blend());
    const auto p1 = pf::builtin_problem("example1", fp);
    const auto p2 = pf::builtin_problem("example2", fp);
    const auto f1 = ex::parse("t^2");
    const auto f2 = ex::parse("t^2/15 * cos(2*t)/(1+abs(y))");
    const auto w2 = ex::parse("t + 2");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> t1(0.0, 10.0);
    std::uniform_real_distribution<double> t2(0.0, 4.0);
    std::uniform_real_distribution<double> yd(-10.0, 10.0);
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-15 * std::max(std::abs(a), std::abs(b));
    };
    for (int i = 0; i < 1000; ++i) {
        const double ta = t1(rng);
        const double tb = t2(rng);
        const double y = yd(rng);
        ASSERT_TRUE(close(f1(ta, y), p1.ivp.rhs(ta, y))) << ta;
        ASSERT_TRUE(close(f2(tb, y), p2.ivp.rhs(tb, y))) << tb << " " << y;
        ASSERT_TRUE(close(w2(tb), p2.ivp.omega(tb))) << tb;
    }
}

TEST(ExprEval, Uses) {
    const auto e = ex::parse("t * sin(alpha)");
    EXPECT_TRUE(e.uses(ex::Var::T));
    EXPECT_TRUE(e.uses(ex::Var::Alpha));
    EXPECT_FALSE(e.uses(ex::Var::Y));
}
