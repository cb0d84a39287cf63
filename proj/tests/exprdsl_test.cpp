// Expression DSL: grammar, printing round-trips, and dual-number derivatives
// checked against Richardson-extrapolated central differences. The finite
// difference lives here as an oracle only; the library never differences.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "folicheck/expr.hpp"

using namespace folicheck;

namespace {

double eval_at(const Expr& e, double t) {
    Env env;
    env.vars["t"] = t;
    return eval(e, env);
}

// f'(t) by central differences at h and h/2, Richardson-combined
double fd_derivative(const Expr& e, double t, double h = 1e-5) {
    auto d = [&](double hh) { return (eval_at(e, t + hh) - eval_at(e, t - hh)) / (2 * hh); };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace

TEST(ExprParse, ArithmeticAndPrecedence) {
    Env env;
    env.vars["t"] = 0.5;
    env.params["q"] = 3;
    EXPECT_DOUBLE_EQ(eval(parse("q*t"), env), 1.5);
    EXPECT_DOUBLE_EQ(eval(parse("1+2*3"), env), 7.0);
    EXPECT_DOUBLE_EQ(eval(parse("(1+2)*3"), env), 9.0);
    EXPECT_DOUBLE_EQ(eval(parse("2^3^1"), env), 8.0);
    EXPECT_DOUBLE_EQ(eval(parse("-2^2"), env), -4.0);  // unary minus binds under ^
    EXPECT_DOUBLE_EQ(eval(parse("6/3/2"), env), 1.0);  // left-associative
}

TEST(ExprParse, KnownValues) {
    Env env;
    env.vars["t"] = 0.25;
    EXPECT_NEAR(eval(parse("sin(2*pi*t)"), env), 1.0, 1e-15);
    env.vars["t"] = 0;
    EXPECT_NEAR(eval(parse("(pi/2)*cos(pi*t)"), env), M_PI / 2, 1e-15);
}

TEST(ExprParse, SyntaxErrorsCarryOffsets) {
    try {
        parse("1 + * 2");
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset, 4u);
        EXPECT_FALSE(e.expected.empty());
    }
    try {
        parse("sin(t");
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset, 5u);
    }
    EXPECT_THROW(parse("foo(t)"), UnknownFunction);
    EXPECT_THROW(parse("t^x"), SyntaxError);  // exponents are integer literals
}

TEST(ExprEval, DomainErrors) {
    Env env;
    env.vars["t"] = 0.0;
    EXPECT_THROW(eval(parse("1/t"), env), DomainError);
    env.vars["t"] = -1.0;
    EXPECT_THROW(eval(parse("sqrt(t)"), env), DomainError);
    env.vars["t"] = 0.0;
    EXPECT_THROW(eval(parse("t^0"), env), DomainError);  // 0^0
}

TEST(ExprDual, SpecExamples) {
    Env env;
    env.vars["t"] = 0.3;
    env.params["p"] = 2;
    env.seeds["t"] = {1.0};
    EvalResult r = eval_dual(parse("p*t"), env);
    EXPECT_DOUBLE_EQ(r.value, 0.6);
    EXPECT_DOUBLE_EQ(r.gradient[0], 2.0);

    env.vars["t"] = 0;
    r = eval_dual(parse("sin(2*pi*t)"), env);
    EXPECT_DOUBLE_EQ(r.value, 0.0);
    EXPECT_DOUBLE_EQ(r.gradient[0], 2 * M_PI);

    r = eval_dual(parse("(pi/2)*cos(pi*t)"), env);
    EXPECT_DOUBLE_EQ(r.value, M_PI / 2);
    EXPECT_DOUBLE_EQ(r.gradient[0], 0.0);
}

TEST(ExprDual, TwoSeedDirections) {
    Env env;
    env.vars["s"] = 0.4;
    env.vars["t"] = 0.7;
    env.seeds["s"] = {1.0, 0.0};
    env.seeds["t"] = {0.0, 1.0};
    EvalResult r = eval_dual(parse("s*s*t + cos(s)"), env);
    EXPECT_NEAR(r.gradient[0], 2 * 0.4 * 0.7 - std::sin(0.4), 1e-14);
    EXPECT_NEAR(r.gradient[1], 0.4 * 0.4, 1e-14);
}

// ----------------------------------------------------------------------------
// Randomized generator with value tracking, so every node stays inside the
// smooth domain (no abs kinks, sqrt of negatives, or near-zero divisors) and
// the finite-difference oracle is meaningful.
// ----------------------------------------------------------------------------

namespace {

struct GenNode {
    ExprPtr e;
    double v;  // value at the chosen evaluation point
};

struct Generator {
    std::mt19937_64 rng;
    double t;  // evaluation point

    // literal in the parser's image: negatives are Neg(Num)
    static ExprPtr constant(double c) {
        return c < 0 ? ExprNode::neg(ExprNode::number(-c)) : ExprNode::number(c);
    }

    explicit Generator(std::uint64_t seed, double point) : rng(seed), t(point) {}

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    }
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

    GenNode leaf() {
        switch (pick(3)) {
            case 0: {
                // the parser never produces negative literals, so stay in its
                // image: negate positives explicitly
                double c = uniform(0, 2);
                if (pick(2)) return {ExprNode::neg(ExprNode::number(c)), -c};
                return {ExprNode::number(c), c};
            }
            case 1: return {ExprNode::pi(), M_PI};
            default: return {ExprNode::var("t"), t};
        }
    }

    GenNode gen(int depth) {
        if (depth == 0) return leaf();
        switch (pick(8)) {
            case 0: {
                GenNode a = gen(depth - 1);
                return {ExprNode::neg(a.e), -a.v};
            }
            case 1: {
                GenNode a = gen(depth - 1);
                return {ExprNode::call(Fun::Sin, a.e), std::sin(a.v)};
            }
            case 2: {
                GenNode a = gen(depth - 1);
                return {ExprNode::call(Fun::Cos, a.e), std::cos(a.v)};
            }
            case 3: {
                // keep the magnitude tame before exponentiating
                GenNode a = gen(depth - 1);
                while (std::fabs(a.v) > 3) {
                    a = {ExprNode::binary(ExprNode::Kind::Mul, ExprNode::number(0.1), a.e),
                         0.1 * a.v};
                }
                return {ExprNode::call(Fun::Exp, a.e), std::exp(a.v)};
            }
            case 4: {
                // sqrt(x^2 + c) stays smooth and positive
                GenNode a = gen(depth - 1);
                ExprPtr sq = ExprNode::binary(ExprNode::Kind::Add, ExprNode::pow(a.e, 2),
                                              ExprNode::number(0.5));
                return {ExprNode::call(Fun::Sqrt, sq), std::sqrt(a.v * a.v + 0.5)};
            }
            case 5: {
                GenNode a = gen(depth - 1);
                // shift the argument away from the kink at this point
                double shift = (a.v >= 0 ? 0.5 : -0.5);
                ExprPtr arg = ExprNode::binary(ExprNode::Kind::Add, a.e, constant(shift));
                return {ExprNode::call(Fun::Abs, arg), std::fabs(a.v + shift)};
            }
            case 6: {
                GenNode a = gen(depth - 1);
                long k = 2 + pick(3);
                double v = 1;
                for (long i = 0; i < k; ++i) v *= a.v;
                if (std::fabs(v) > 1e3) return a;  // skip explosive powers
                return {ExprNode::pow(a.e, k), v};
            }
            default: {
                GenNode a = gen(depth - 1);
                GenNode b = gen(depth - 1);
                switch (pick(4)) {
                    case 0:
                        return {ExprNode::binary(ExprNode::Kind::Add, a.e, b.e), a.v + b.v};
                    case 1:
                        return {ExprNode::binary(ExprNode::Kind::Sub, a.e, b.e), a.v - b.v};
                    case 2:
                        return {ExprNode::binary(ExprNode::Kind::Mul, a.e, b.e), a.v * b.v};
                    default: {
                        if (std::fabs(b.v) < 0.3) {
                            // push the divisor away from zero
                            double shift = (b.v >= 0 ? 1.0 : -1.0);
                            b = {ExprNode::binary(ExprNode::Kind::Add, b.e, constant(shift)),
                                 b.v + shift};
                        }
                        return {ExprNode::binary(ExprNode::Kind::Div, a.e, b.e), a.v / b.v};
                    }
                }
            }
        }
    }
};

}  // namespace

TEST(ExprDual, MatchesFiniteDifferencesOn1000RandomExpressions) {
    std::mt19937_64 seed_rng(20240817);
    int tested = 0;
    for (int i = 0; i < 1000; ++i) {
        double t = 0.05 + 0.9 * (static_cast<double>(seed_rng() % 10000) / 10000.0);
        Generator g(seed_rng(), t);
        GenNode node = g.gen(2 + g.pick(5));  // depth 2..6
        Expr e{node.e};

        Env env;
        env.vars["t"] = t;
        env.seeds["t"] = {1.0};
        double dual;
        try {
            dual = eval_dual(e, env).gradient[0];
        } catch (const DomainError&) {
            continue;  // stencil wandered outside the domain; rare and fine
        }
        if (!std::isfinite(dual) || std::fabs(dual) > 1e4) continue;  // FD is hopeless on cliffs

        double fd;
        try {
            fd = fd_derivative(e, t);
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(fd)) continue;
        EXPECT_NEAR(dual, fd, 1e-6 * (1 + std::fabs(dual)))
            << "expression: " << print(e) << " at t=" << t;
        ++tested;
    }
    EXPECT_GE(tested, 900);  // the skip guards must stay rare
}

TEST(ExprPrint, RoundTripsGeneratedTrees) {
    std::mt19937_64 seed_rng(7);
    for (int i = 0; i < 500; ++i) {
        Generator g(seed_rng(), 0.3);
        GenNode node = g.gen(1 + g.pick(5));
        Expr e{node.e};
        std::string text = print(e);
        Expr back = parse(text);
        EXPECT_TRUE(back == e) << "printed: " << text << "\nreprinted: " << print(back);
    }
}

TEST(ExprPrint, RoundTripsScenarioFormulas) {
    for (const char* src : {"3*t", "2*t", "amp*sin(2*pi*t)", "0.5*cos(pi*t)",
                            "0.5 + r*cos(2*pi*t)", "s", "cos(pi*t)", "sin(pi*t)"}) {
        Expr e = parse(src);
        EXPECT_TRUE(parse(print(e)) == e) << src;
    }
}

TEST(ExprVars, FreeVariableCollection) {
    Expr e = parse("a*sin(2*pi*t) + b");
    auto vars = free_vars(e);
    EXPECT_EQ(vars.size(), 3u);
    EXPECT_TRUE(vars.count("a") && vars.count("b") && vars.count("t"));
}
