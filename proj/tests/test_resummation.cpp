#include "resurge/resummation.hpp"

#include <gtest/gtest.h>

using namespace resurge;
using namespace resurge::series;

namespace {

FormalSeries zs(int lo, std::vector<Rational> c, int hi)
{
    FormalSeries::ExactCoeffs v;
    for (auto& q : c)
        v.push_back(CQ(q));
    return FormalSeries(Variable::z, lo, std::move(v), hi);
}

FormalSeries zeta_series(std::vector<Rational> c, int hi)
{
    FormalSeries::ExactCoeffs v;
    for (auto& q : c)
        v.push_back(CQ(q));
    return FormalSeries(Variable::zeta, 0, std::move(v), hi);
}

// Minor of the linear equation with a = z^-2, i.e. zeta/(e^{-zeta}-1), to order n.
Minor linear_minor(int n) { return solve_linear_first(zs(2, {1}, n + 1)).borel.minor; }

double err(const CF& a, const CF& b) { return to_double(abs(a - b)); }

CF cf(double re, double im = 0) { return CF(Real(re), Real(im)); }

// -psi'(x) = -sum_{k>=0} (x+k)^-2 by a direct sum plus an Euler-Maclaurin tail.
Real minus_trigamma(int x)
{
    const int K = 2000;
    Real s(0);
    for (int k = 0; k < K; ++k)
        s += Real(1) / (Real(x + k) * Real(x + k));
    Real t(x + K);
    // sum_{k>=0} (t+k)^-2 = 1/t + 1/(2t^2) + 1/(6t^3) - 1/(30t^5) + 1/(42t^7) - 1/(30t^9)
    Real tail = 1 / t + 1 / (2 * t * t) + 1 / (6 * pow(t, 3)) - 1 / (30 * pow(t, 5)) + 1 / (42 * pow(t, 7)) -
                1 / (30 * pow(t, 9));
    return -(s + tail);
}

}  // namespace

TEST(Pade, MeromorphicPolesAndResidues)
{
    auto check = [](int L, double tol2, double tol4) {
        auto pm = pade_continue(linear_minor(2 * L + 2), L, L);
        PrecisionScope scope(128);
        int found1 = 0, found2 = 0;
        for (const auto& p : pm.singularities()) {
            long k = std::lround(to_double(p.location.im) / (2 * M_PI));
            if (k == 0 || std::abs(k) > 2 || std::abs(to_double(p.location.re)) > 0.1)
                continue;
            CF pole(Real(0), 2 * pi() * k);
            CF residue(Real(0), -2 * pi() * k);  // zeta / (-e^{-zeta}) at 2 pi i k
            double tol = std::abs(k) == 1 ? tol2 : tol4;
            EXPECT_LT(err(p.location, pole), tol) << k;
            EXPECT_LT(err(p.residue, residue), tol) << k;
            (std::abs(k) == 1 ? found1 : found2)++;
        }
        EXPECT_EQ(found1, 2);
        EXPECT_EQ(found2, 2);
        for (std::size_t i = 1; i < pm.poles.size(); ++i)
            EXPECT_LE(to_double(abs(pm.poles[i - 1].location)), to_double(abs(pm.poles[i].location)));
    };
    check(14, 1e-8, 1e-6);
    check(20, 1e-8, 1e-8);
}

TEST(Pade, PolynomialHasUnitDenominator)
{
    Minor m(zeta_series({1, 2, 0, Rational(-1, 3)}, 8));
    auto pm = pade_continue(m, 4, 4);
    EXPECT_EQ(pm.denominator.size(), 1u);
    EXPECT_TRUE(pm.poles.empty());
    EXPECT_TRUE(pm.fell_back);
    auto fl = pade_continue(Minor(m.series.to_float(128)), 4, 4);
    EXPECT_EQ(fl.denominator.size(), 1u);
    PrecisionScope scope(128);
    EXPECT_LT(err(pm.evaluate(cf(2)), CF(Real(5) - Real(8) / 3, Real(0))), 1e-30);
}

TEST(Pade, GeometricReproducedExactly)
{
    Minor m(zeta_series(std::vector<Rational>(11, Rational(1)), 10));
    auto pm = pade_continue(m, 3, 3);
    ASSERT_EQ(pm.poles.size(), 1u);
    PrecisionScope scope(128);
    EXPECT_LT(err(pm.poles[0].location, cf(1)), 1e-30);
    EXPECT_LT(err(pm.poles[0].residue, cf(-1)), 1e-30);
    EXPECT_EQ(pm.M, 1);
    EXPECT_EQ(pm.numerator.size(), 1u);
}

TEST(Pade, SpuriousPairIsFiltered)
{
    // 1/(1-zeta) + eps/(zeta-3): small residue with a zero next to the pole
    const Rational eps(1, 10000000);
    std::vector<Rational> c;
    for (int n = 0; n <= 12; ++n) {
        Rational three_n = 1;
        for (int i = 0; i <= n; ++i)
            three_n *= 3;
        c.push_back(1 - eps / three_n);
    }
    auto pm = pade_continue(Minor(zeta_series(c, 12)), 1, 2);
    ASSERT_EQ(pm.poles.size(), 2u);
    EXPECT_FALSE(pm.poles[0].spurious);
    EXPECT_TRUE(pm.poles[1].spurious);
    EXPECT_EQ(pm.singularities().size(), 1u);
}

TEST(EvalMinor, Examples)
{
    Minor m = linear_minor(60);
    m.radius_hint = 2 * M_PI;
    auto v = eval_minor(m, cf(3));
    PrecisionScope scope(128);
    Real e3 = exp(cf(-3)).re;
    EXPECT_EQ(v.method, "taylor");
    EXPECT_LT(err(v.value, CF(3 / (e3 - 1), Real(0))), 1e-12);
    auto v0 = eval_minor(m, cf(0));
    EXPECT_LT(err(v0.value, cf(-1)), 1e-30);
    auto far = eval_minor(m, cf(5.5));
    EXPECT_EQ(far.method, "pade");
    Real e55 = exp(cf(-5.5)).re;
    EXPECT_LT(err(far.value, CF(Real(5.5) / (e55 - 1), Real(0))), 1e-12);
    auto pm = pade_continue(m, 29, 29);
    EXPECT_THROW(eval_minor(pm, CF(Real(0), 2 * pi()), 1e-3), std::domain_error);
}

TEST(EvalMinor, HenonBorelMonotone)
{
    // U(tau) = i x0-hat(i tau)
    Minor m = borel(solve_henon(200)).minor;
    m.radius_hint = 2 * M_PI;
    auto U = [&](double tau) {
        auto v = eval_minor(m, cf(0, tau));
        PrecisionScope scope(128);
        return std::make_pair(to_double((CF(Real(0), Real(1)) * v.value).re), v.method);
    };
    auto u5 = U(5.0), u58 = U(5.8);
    EXPECT_EQ(u58.second, "pade");
    EXPECT_GT(u5.first, 0);
    EXPECT_GT(u58.first, u5.first);
}

TEST(Laplace, MonomialAndDelta)
{
    SRSingularity s;
    s.minor = Minor(zeta_series({0, 0, Rational(1, 2)}, 10));
    auto r = laplace_sum(s, EvalPlan{}, cf(2));
    PrecisionScope scope(128);
    EXPECT_LT(err(r.value, cf(0.125)), 1e-18);
    SRSingularity d;
    d.delta = {Scalar(1)};
    d.minor = Minor(FormalSeries::zero(Variable::zeta, 10));
    EXPECT_LT(err(laplace_sum(d, EvalPlan{}, cf(3, 1)).value, cf(1)), 1e-30);
}

TEST(Laplace, TrigammaOracle)
{
    auto lin = solve_linear_first(zs(2, {1}, 62));
    EvalPlan plan;
    plan.tol = 1e-25;
    auto r = laplace_sum(lin.borel, plan, cf(10));
    PrecisionScope scope(128);
    Real oracle = minus_trigamma(10);
    EXPECT_LT(err(r.value, CF(oracle, Real(0))), 1e-24);
    EXPECT_LT(r.error_estimate, 1e-20);
    EXPECT_NEAR(to_double(oracle), -0.105166335681, 1e-12);
}

TEST(Laplace, BorelRoundTripGeometric)
{
    auto b = borel(zs(1, std::vector<Rational>(60, Rational(1)), 60));
    EvalPlan plan;
    plan.tol = 1e-20;
    for (double z : {5.0, 10.0, 20.0}) {
        auto r = laplace_sum(b, plan, cf(z));
        PrecisionScope scope(128);
        EXPECT_LT(err(r.value, cf(1 / (z - 1))), 1e-10) << z;
        EXPECT_LE(err(r.value, CF(Real(1) / (Real(z) - 1), Real(0))), r.error_estimate) << z;
    }
}

TEST(Laplace, DirectionIndependence)
{
    auto lin = solve_linear_first(zs(2, {1}, 122));
    EvalPlan plan;
    plan.tol = 1e-20;
    CF z = cf(8, 1);
    auto r0 = laplace_sum(lin.borel, plan, z);
    for (double theta : {-0.7, -0.3, 0.4, 0.9}) {
        plan.theta = theta;
        auto r = laplace_sum(lin.borel, plan, z);
        PrecisionScope scope(128);
        EXPECT_LT(err(r.value, r0.value), 10 * plan.tol) << theta;
    }
}

TEST(Laplace, Refusals)
{
    auto lin = solve_linear_first(zs(2, {1}, 40));
    EvalPlan plan;
    plan.theta = M_PI / 2 - 0.01;
    EXPECT_THROW(laplace_sum(lin.borel, plan, cf(5)), std::domain_error);
    plan.theta = M_PI / 2 - 0.06;
    plan.pole_distance = 0.5;
    EXPECT_THROW(laplace_sum(lin.borel, plan, cf(5, -5)), std::domain_error);
    EvalPlan small;
    small.max_evaluations = 10;
    EXPECT_THROW(laplace_sum(lin.borel, small, cf(5)), BudgetExceeded);
    EXPECT_THROW(laplace_sum(lin.borel, EvalPlan{}, cf(-5)), std::domain_error);
}

TEST(Fatou, ZeroGerm)
{
    GermSpec g(FormalSeries::zero(Variable::z, 12));
    auto v = fatou_coordinates(g, cf(3, 1), Side::plus);
    PrecisionScope scope(128);
    EXPECT_TRUE(v.psi.is_zero());
    EXPECT_LT(err(v.v, cf(3, 1)), 1e-30);
    EXPECT_LT(err(v.u, cf(3, 1)), 1e-30);
}

TEST(Fatou, ConjugacyOnGrid)
{
    GermSpec g(zs(2, {Rational(1, 10)}, 40));
    FatouCoordinates fc(g);
    PrecisionScope scope(128);
    for (double x : {-15.0, 2.0, 7.5, 15.0})
        for (double y : {-3.0, 0.5, 4.0}) {
            CF z = cf(x, y);
            for (Side side : {Side::plus, Side::minus}) {
                // the orbit must stay away from the singularity of a at 0
                if (y == 0.5 && (side == Side::plus ? x < 0 : x > 0))
                    continue;
                CF r = fc.v(fc.f(z), side) - fc.v(z, side) - cf(1);
                EXPECT_LT(to_double(abs(r)), 1e-28) << x << " " << y;
                EXPECT_LT(err(fc.u(fc.v(z, side), side), z), 1e-28) << x << " " << y;
            }
        }
}

TEST(Fatou, AsymptoticMatch)
{
    auto a = zs(2, {Rational(1, 10), Rational(-1, 5)}, 40);
    GermSpec g(a);
    FatouCoordinates fc(g);
    auto psi8 = solve_abel(g, 8).psi;
    auto psi9 = solve_abel(g, 10).psi;
    PrecisionScope scope(128);
    CF z = cf(30);
    CF d = fc.v(z, Side::plus) - z - evaluate(psi8, z);
    // next term of the formal psi bounds the difference
    double next = to_double(abs(psi9.coeff_cf(9))) * std::pow(30.0, -9) + to_double(abs(psi9.coeff_cf(10))) * std::pow(30.0, -10);
    EXPECT_LT(to_double(abs(d)), 2 * next + 1e-28);
    EXPECT_GT(to_double(abs(d)), 0.0);
}

TEST(Fatou, OrbitOutsideDomainThrows)
{
    GermSpec g(zs(2, {Rational(1, 10)}, 20));
    FatouOptions opt;
    opt.min_abs = 5;
    EXPECT_THROW(fatou_coordinates(g, cf(-3, 0.1), Side::plus, opt), std::domain_error);
}

class HenonManifoldTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() { hm = new HenonManifold(200, 192); }
    static void TearDownTestSuite() { delete hm; }
    static HenonManifold* hm;
    EvalPlan plan()
    {
        EvalPlan p;
        p.bits = 192;
        p.tol = 1e-30;
        return p;
    }
};
HenonManifold* HenonManifoldTest::hm = nullptr;

TEST_F(HenonManifoldTest, MatchesOptimallyTruncatedSeries)
{
    auto x0 = solve_henon(200);
    EvalPlan p = plan();
    p.bits = 256;
    p.tol = 1e-52;
    auto pt = hm->evaluate(Side::plus, cf(20), p);
    PrecisionScope scope(256);
    // smallest term of the divergent series at z = 20
    Real best(1);
    int kbest = 1;
    for (int k = 1; 2 * k <= 200; ++k) {
        Real t = abs(x0.coeff_cf(2 * k)) / boost::multiprecision::pow(Real(20), 2 * k);
        if (t < best) {
            best = t;
            kbest = k;
        }
    }
    CF partial = evaluate(x0.truncated(2 * kbest - 2), cf(20));
    EXPECT_LT(err(pt.x, partial), 2 * to_double(best));
    EXPECT_LT(pt.error_estimate, 1e-52);
}

TEST_F(HenonManifoldTest, ResidualAndReflection)
{
    CF z = cf(12, -1.5);
    auto p0 = hm->evaluate(Side::plus, z, plan());
    auto p1 = hm->evaluate(Side::plus, z + cf(1), plan());
    PrecisionScope scope(192);
    CF xm = p0.x - p0.y;  // x(z-1)
    CF res = p1.x - p0.x * Real(2) + xm + p0.x * p0.x;
    EXPECT_LT(to_double(abs(res)), 4 * (p0.error_estimate + p1.error_estimate));
    EXPECT_LT(err(p1.y, p1.x - p0.x), 4 * (p0.error_estimate + p1.error_estimate));
    auto a = hm->evaluate(Side::plus, cf(20, -2), plan());
    auto b = hm->evaluate(Side::plus, cf(20, 2), plan());
    EXPECT_LT(err(a.x, b.x.conj()), 1e-28);
    auto c = hm->evaluate(Side::minus, cf(-20, -2), plan());
    auto d = hm->evaluate(Side::minus, cf(-20, 2), plan());
    EXPECT_LT(err(c.x, d.x.conj()), 1e-28);
}

TEST_F(HenonManifoldTest, TransportRoundTrip)
{
    EvalPlan p = plan();
    CF s = cf(30, -1);
    auto r0 = hm->seed(Side::plus, s, p), r1 = hm->seed(Side::plus, s + cf(1), p);
    PrecisionScope scope(192);
    CF a = r0.value, b = r1.value;  // x(t), x(t+1)
    const int n = 15;
    for (int k = 0; k < n; ++k) {
        CF m = a * Real(2) - b - a * a;
        b = a;
        a = m;
    }
    for (int k = 0; k < n; ++k) {
        CF q = b * Real(2) - a - b * b;
        a = b;
        b = q;
    }
    EXPECT_LT(err(a, r0.value), 1e-45);
    EXPECT_LT(err(b, r1.value), 1e-45);
}

TEST_F(HenonManifoldTest, BudgetErrors)
{
    EvalPlan p = plan();
    p.tol = 1e-70;  // below 192-bit rounding
    EXPECT_THROW(hm->evaluate(Side::plus, cf(10), p), BudgetExceeded);
    EvalPlan q = plan();
    q.max_evaluations = 10;
    EXPECT_THROW(hm->evaluate(Side::plus, cf(1e9), q), BudgetExceeded);
}
