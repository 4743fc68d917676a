#include "resurge/alien.hpp"
#include "resurge/stokes.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <random>

using namespace resurge;

namespace {

using Op = OperatorPoly;
Op w(const std::string& s, Rational c = 1) { return Op::word(s, c); }
SymPoly sym(const std::string& s) { return SymPoly::symbol(s); }
SymPoly L() { return SymPoly::symbol(kTwoPiI); }

}  // namespace

TEST(OperatorPoly, RewriteAndExpand)
{
    // mu (A + l+ - l-) = l+ - l-
    EXPECT_EQ(w("uS").reduced(), w("+") - w("-"));
    EXPECT_EQ(w("S").expanded(), w("A") + w("+") - w("-"));
    EXPECT_EQ(w("SuSu").reduced(), w("S+u") - w("S-u"));
    EXPECT_EQ((w("S") * w("u")).to_string(), "1*[Su]");
    EXPECT_EQ(Op::grade("S+-u"), 3);
    EXPECT_TRUE((w("S", Rational(1, 2)) - w("S", Rational(1, 2))).is_zero());
    EXPECT_EQ((w("S+u") + w("Su")).grade_part(2), w("S+u"));
}

TEST(DeltaByPaths, LowGrades)
{
    EXPECT_EQ(delta_by_paths(1), w("Su"));
    EXPECT_EQ(delta_by_paths(2), w("S+u", Rational(1, 2)) + w("S-u", Rational(1, 2)));
    Op d3 = delta_by_paths(3);
    EXPECT_EQ(d3.coeff("S++u"), Rational(1, 3));
    EXPECT_EQ(d3.coeff("S+-u"), Rational(1, 6));
    EXPECT_EQ(d3.coeff("S-+u"), Rational(1, 6));
    EXPECT_EQ(d3.coeff("S--u"), Rational(1, 3));
    EXPECT_THROW(delta_by_paths(0), std::invalid_argument);
}

TEST(DeltaByPaths, WordCountAndWeights)
{
    for (int m = 1; m <= 8; ++m) {
        Op d = delta_by_paths(m);
        EXPECT_EQ(d.terms().size(), 1u << (m - 1));
        Rational total(0);
        for (auto& [word, c] : d.terms())
            total += c;
        // sum_p C(m-1, p) p! (m-1-p)! / m!
        Rational closed(0);
        for (int p = 0; p <= m - 1; ++p)
            closed += binomial_q(m - 1, static_cast<unsigned>(p)) * factorial_q(static_cast<unsigned>(p)) *
                      factorial_q(static_cast<unsigned>(m - 1 - p)) / factorial_q(static_cast<unsigned>(m));
        EXPECT_EQ(total, closed) << m;
        EXPECT_EQ(total, Rational(1));
    }
}

TEST(DeltaByLog, DisplayedComponents)
{
    EXPECT_EQ(delta_by_log(1), delta_plus(1));
    auto c2 = log_in_delta_plus(2);
    EXPECT_EQ(c2.size(), 2u);
    EXPECT_EQ(c2.at({2}), Rational(1));
    EXPECT_EQ(c2.at({1, 1}), Rational(-1, 2));
    auto c3 = log_in_delta_plus(3);
    EXPECT_EQ(c3.at({3}), Rational(1));
    EXPECT_EQ(c3.at({2, 1}), Rational(-1, 2));
    EXPECT_EQ(c3.at({1, 2}), Rational(-1, 2));
    EXPECT_EQ(c3.at({1, 1, 1}), Rational(1, 3));
    // Delta_2 = Delta+_2 - 1/2 Delta+_1 Delta+_1 after reduction
    Op direct = (delta_plus(2) - delta_plus(1) * delta_plus(1) * Rational(1, 2)).reduced();
    EXPECT_EQ(delta_by_log(2), direct);
}

TEST(DeltaByLog, EqualsPathsUpToGradeEight)
{
    for (int m = 1; m <= 8; ++m) {
        IdentityCheck c = verify_delta_identity(m);
        EXPECT_TRUE(c.ok) << m << ": " << c.witness;
    }
}

TEST(BIdentity, SmallGradesAndExhaustive)
{
    EXPECT_TRUE(verify_B_identity(1).ok);
    EXPECT_TRUE(verify_B_identity(2).ok);
    for (int m = 1; m <= 8; ++m) {
        IdentityCheck c = verify_B_identity(m);
        EXPECT_TRUE(c.ok) << m << ": " << c.witness;
    }
}

TEST(GradedSeries, ExpLogRoundTrips)
{
    IdentityCheck c = verify_exp_log(8);
    EXPECT_TRUE(c.ok) << c.witness;

    // log(exp(x)) = x on free words (no rewriting applies)
    GradedSeries x;
    x.truncation = 5;
    x.components[1] = w("+", Rational(2)) - w("-");
    x.components[2] = w("A+", Rational(1, 3));
    GradedSeries back = graded_log(graded_exp(x));
    for (int g = 1; g <= 5; ++g)
        EXPECT_EQ(back.components[g], x.components[g]) << g;

    GradedSeries bad;
    bad.truncation = 2;
    bad.components[0] = w("+");
    EXPECT_THROW(graded_exp(bad), std::invalid_argument);
}

TEST(StokesFlow, ZeroAndSingleInvariant)
{
    FlowCheck z = stokes_flow_check({{1, SymPoly()}}, 4);
    EXPECT_TRUE(z.ok);
    for (auto& [m, p] : z.P_flow)
        EXPECT_TRUE(p.is_zero());
    for (auto& [m, q] : z.Q_mould)
        EXPECT_TRUE(q.is_zero());

    FlowCheck f = stokes_flow_check({{1, sym("A1")}}, 2);
    ASSERT_TRUE(f.ok) << f.witness;
    EXPECT_EQ(f.P_flow.at(1), sym("A1"));
    EXPECT_EQ(f.Q_mould.at(1), -sym("A1"));
    // Q_{4 pi i} = -pi i A1^2
    EXPECT_EQ(f.Q_mould.at(2), -L() * sym("A1") * sym("A1") * CQ(Rational(1, 2)));
}

TEST(StokesFlow, RandomRationalAndSymbolic)
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    std::map<int, SymPoly> A;
    for (int m = 1; m <= 3; ++m)
        A[m] = SymPoly(CQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    FlowCheck f = stokes_flow_check(A, 6);
    EXPECT_TRUE(f.ok) << f.witness;

    std::map<int, SymPoly> S{{1, sym("a")}, {2, sym("b")}, {-1, sym("c")}, {-3, sym("d")}};
    FlowCheck g = stokes_flow_check(S, 6);
    EXPECT_TRUE(g.ok) << g.witness;
    EXPECT_EQ(g.P_flow.at(-1), sym("c"));
}

TEST(StokesFlow, InverseMapsNumerically)
{
    // (Id + Q) o (Id + P) - Id evaluated at z with |w| = t must be O(t^7) for truncation at 6.
    using cd = std::complex<double>;
    std::map<int, SymPoly> A{{1, SymPoly(CQ(Rational(1, 2)))}, {2, SymPoly(CQ(Rational(-1, 3), Rational(1, 4)))},
                             {3, SymPoly(CQ(Rational(2)))}};
    FlowCheck f = stokes_flow_check(A, 6);
    ASSERT_TRUE(f.ok);
    auto coeffs = [&](const std::map<int, SymPoly>& m) {
        std::vector<cd> c(7);
        PrecisionScope s(64);
        for (auto& [k, v] : m)
            if (k > 0) {
                CF x = v.evaluate({{kTwoPiI, two_pi_i()}});
                c[k] = cd(to_double(x.re), to_double(x.im));
            }
        return c;
    };
    std::vector<cd> P = coeffs(f.P_flow), Q = coeffs(f.Q_mould);
    auto shift = [](const std::vector<cd>& c, cd z) {
        cd s = 0;
        for (int m = 1; m <= 6; ++m)
            s += c[m] * std::exp(-2.0 * M_PI * cd(0, 1) * double(m) * z);
        return z + s;
    };
    auto residual = [&](double y) {
        cd z(0.3, -y);
        return std::abs(shift(Q, shift(P, z)) - z);
    };
    // |w| = e^{-2 pi y}; halving |w| should shrink the residual by about 2^7.
    const double y1 = 0.5, y2 = y1 + std::log(2.0) / (2 * M_PI);
    EXPECT_GT(residual(y1) / residual(y2), 64);
}

TEST(BridgeIterationMould, Values)
{
    EXPECT_EQ(bridge_iteration_mould({1}), -sym("A1"));
    EXPECT_EQ(bridge_iteration_mould({1, 1}), -L() * sym("A1") * sym("A1"));
    EXPECT_THROW(bridge_iteration_mould({}), std::invalid_argument);

    std::mt19937 rng(9);
    std::uniform_int_distribution<int> len(1, 5), letter_m(-3, 3);
    std::map<int, SymPoly> A;
    PrecisionScope s(128);
    for (int m = -3; m <= 3; ++m)
        if (m != 0)
            A[m] = SymPoly(CQ(Rational(m, 7), Rational(1, m + 5)));
    for (int t = 0; t < 20; ++t) {
        std::vector<int> ms;
        for (int r = len(rng); static_cast<int>(ms.size()) < r;)
            if (int m = letter_m(rng); m != 0)
                ms.push_back(m);
        std::vector<CF> omegas;
        CF prod(Real(1), Real(0));
        for (int m : ms) {
            omegas.push_back(two_pi_i() * Real(m));
            prod *= to_cf(A[m].coeff({}));
        }
        CF expected = -(mould_gamma(omegas) * prod);
        CF got = bridge_iteration_mould(ms, A).evaluate({{kTwoPiI, two_pi_i()}});
        EXPECT_LT(to_double(abs(got - expected)), 1e-20 * std::max(1.0, to_double(abs(expected))));
    }
}
