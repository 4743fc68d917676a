#include "resurge/solvers.hpp"

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

// Bernoulli numbers from sum_{k<=n} C(n+1,k) B_k = 0.
std::vector<Rational> bernoulli(int n)
{
    std::vector<Rational> B(n + 1);
    B[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational s(0);
        for (int k = 0; k < m; ++k)
            s += binomial_q(m + 1, k) * B[k];
        B[m] = -s / (m + 1);
    }
    return B;
}

// Order-by-order solve of phi(z+1) - phi(z) = a(z + phi(z)).
FormalSeries abel_brute_force(const FormalSeries& a, int N)
{
    // phi_k is read off the z^{-k-1} residual, so work one order higher
    FormalSeries phi = FormalSeries::zero(Variable::z, N + 1);
    for (int k = 1; k <= N; ++k) {
        FormalSeries res = sub(sub(shift(phi, Scalar(1)), phi), compose_shifted(a, phi));
        // the unknown phi_k contributes -k phi_k z^{-k-1}
        CQ r = res.truncation_order() >= k + 1 ? res.coeff_exact(k + 1) : CQ();
        phi = add(phi, FormalSeries::monomial(Variable::z, k, Scalar(r / CQ(Rational(k))), N + 1));
    }
    return phi.truncated(N);
}

// Direct recursion for the even solution of P phi + 2 x0 phi = 0 with leading z^4/84.
std::vector<Rational> phi2_direct(const FormalSeries& x0, int J)
{
    std::vector<Rational> b(J + 1);
    b[0] = Rational(1, 84);
    auto a = [&](int k) { return x0.coeff_exact(2 * k).re; };
    for (int m = 2; m <= J + 1; ++m) {
        Rational s(0);
        for (int i = 0; i < m - 1; ++i)
            s += 2 * binomial_q(4 - 2 * i, static_cast<unsigned>(2 * (m - i))) * b[i];
        for (int k = 2; k <= m; ++k)
            s += 2 * a(k) * b[m - k];
        long p = 4 - 2 * (m - 1);
        b[m - 1] = -s / Rational(p * (p - 1) - 12);
    }
    return b;
}

}  // namespace

TEST(LinearFirst, TrigammaExample)
{
    auto sol = solve_linear_first(zs(2, {1}, 12));
    const auto& phi = sol.series;
    EXPECT_EQ(phi.coeff_exact(1), CQ(Rational(-1)));
    EXPECT_EQ(phi.coeff_exact(2), CQ(Rational(-1, 2)));
    EXPECT_EQ(phi.coeff_exact(3), CQ(Rational(-1, 6)));
    EXPECT_EQ(phi.coeff_exact(4), CQ(Rational(0)));
    // -trigamma asymptotics: -1/z - 1/(2z^2) - sum B_{2k} z^{-2k-1}
    auto B = bernoulli(12);
    for (int k = 1; 2 * k + 1 <= phi.truncation_order(); ++k)
        EXPECT_EQ(phi.coeff_exact(2 * k + 1), CQ(-B[2 * k]));
    EXPECT_TRUE(sub(sub(shift(phi, Scalar(1)), phi), zs(2, {1}, 12)).truncated(phi.truncation_order()).is_zero());
}

TEST(LinearFirst, Examples)
{
    EXPECT_TRUE(solve_linear_first(FormalSeries::zero(Variable::z, 8)).series.is_zero());
    auto sol = solve_linear_first(zs(3, {1}, 10));
    EXPECT_EQ(sol.borel.minor.series.coeff_exact(1), CQ(Rational(-1, 2)));
    EXPECT_EQ(sol.borel.minor.series.coeff_exact(2), CQ(Rational(-1, 4)));
    EXPECT_THROW(solve_linear_first(zs(1, {1}, 10)), std::invalid_argument);
}

TEST(LinearSecond, Examples)
{
    auto sol = solve_linear_second(zs(3, {1}, 12));
    EXPECT_EQ(sol.borel.minor.series.coeff_exact(0), CQ(Rational(1, 2)));
    EXPECT_EQ(sol.borel.minor.series.coeff_exact(1), CQ(Rational(0)));
    EXPECT_EQ(sol.borel.minor.series.coeff_exact(2), CQ(Rational(-1, 24)));
    EXPECT_TRUE(solve_linear_second(FormalSeries::zero(Variable::z, 8)).series.is_zero());
    auto twice = solve_linear_second(zs(3, {2}, 12));
    EXPECT_EQ(twice.series, scale(sol.series, Scalar(2)));
    EXPECT_TRUE(sub(diff_P(sol.series), zs(3, {1}, 12)).truncated(sol.series.truncation_order()).is_zero());
}

TEST(Abel, ZeroGerm)
{
    auto sol = solve_abel(GermSpec(FormalSeries::zero(Variable::z, 12)), 10);
    EXPECT_TRUE(sol.phi.is_zero());
    EXPECT_TRUE(sol.psi.is_zero());
}

TEST(Abel, MatchesBruteForce)
{
    auto a = zs(2, {Rational(1, 10)}, 16);
    auto sol = solve_abel(GermSpec(a), 14);
    auto oracle = abel_brute_force(a, 14);
    EXPECT_EQ(sol.phi.truncation_order(), 14);
    EXPECT_EQ(sol.phi, oracle);
    EXPECT_EQ(sol.phi.coeff_exact(1), CQ(Rational(-1, 10)));
}

TEST(Abel, GeneralPerturbation)
{
    auto a = zs(2, {Rational(1, 3), Rational(-2, 7), 0, Rational(5, 2)}, 13);
    auto sol = solve_abel(GermSpec(a), 12);
    EXPECT_EQ(sol.phi, abel_brute_force(a, 12));
    // defining equation residual
    auto res = sub(sub(shift(sol.phi, Scalar(1)), sol.phi), compose_shifted(a, sol.phi));
    EXPECT_TRUE(res.truncated(12).is_zero());
    // stages: valuation 2n-2, and their sum is borel(phi)
    for (std::size_t n = 1; n <= sol.stages.size(); ++n) {
        const auto& s = sol.stages[n - 1].series;
        if (!s.is_zero())
            EXPECT_GE(s.min_order(), static_cast<int>(2 * n - 2));
    }
    EXPECT_EQ(borel(sol.phi).minor.series, sol.phi_hat.series);
    // psi: (Id + phi) o (Id + psi) = Id
    EXPECT_TRUE(add(sol.psi, compose_shifted(sol.phi, sol.psi)).is_zero());
}

TEST(Abel, OffsetGerm)
{
    auto a = zs(2, {Rational(1, 10)}, 14);
    GermSpec g(a, Scalar(Rational(3, 10)));
    auto sol = solve_abel(g, 12);
    EXPECT_EQ(sol.phi, abel_brute_force(shift(a, Scalar(Rational(3, 10))), 12));
}

TEST(Abel, RejectsResiter)
{
    try {
        solve_abel(GermSpec(zs(1, {1}, 10)), 8);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("rho != 0"), std::string::npos);
    }
}

TEST(Abel, FloatAgreesWithExact)
{
    auto a = zs(2, {Rational(1, 10)}, 22);
    auto ex = solve_abel(GermSpec(a), 20);
    auto fl = solve_abel(GermSpec(a.to_float(160)), 20);
    PrecisionScope scope(160);
    for (int k = 1; k <= 20; ++k) {
        CF e = ex.phi.coeff_cf(k), f = fl.phi.coeff_cf(k);
        EXPECT_LE(to_double(abs(e - f)), 1e-35 * std::max(1.0, to_double(abs(e)))) << k;
    }
}

TEST(Henon, GoldenCoefficients)
{
    auto x0 = solve_henon(6);
    EXPECT_EQ(x0.coeff_exact(2), CQ(Rational(-6)));
    EXPECT_EQ(x0.coeff_exact(4), CQ(Rational(15, 2)));
    EXPECT_EQ(x0.coeff_exact(6), CQ(Rational(-663, 40)));
    for (int k = 3; k <= 5; k += 2)
        EXPECT_EQ(x0.coeff_exact(k), CQ());
    EXPECT_THROW(solve_henon(1), std::invalid_argument);
}

TEST(Henon, ResidualAndAlternation)
{
    auto x0 = solve_henon(120);
    EXPECT_TRUE(add(diff_P(x0), mul(x0, x0)).is_zero());
    for (int k = 1; 2 * k <= 120; ++k) {
        Rational a = x0.coeff_exact(2 * k).re;
        EXPECT_GT(k % 2 ? Rational(-a) : a, 0) << k;
    }
    // translates x0(z + c) also solve the equation
    auto xc = shift(x0, Scalar(Rational(1, 3)));
    EXPECT_TRUE(add(diff_P(xc), mul(xc, xc)).is_zero());
}

TEST(Henon, FloatMatchesExact)
{
    auto ex = solve_henon(80);
    auto fl = solve_henon_float(80, 256);
    PrecisionScope scope(256);
    for (int k = 2; k <= 80; k += 2) {
        CF e = ex.coeff_cf(k);
        EXPECT_LE(to_double(abs(e - fl.coeff_cf(k)) / abs(e)), 1e-60);
    }
}

TEST(Henon, BorelPositivity)
{
    // U(tau) = i x0-hat(i tau) = sum (-1)^k a_k tau^{2k-1}/(2k-1)!
    auto x0 = solve_henon(200);
    std::vector<Rational> u;
    for (int k = 1; 2 * k <= 200; ++k) {
        Rational a = x0.coeff_exact(2 * k).re;
        Rational c = (k % 2 ? Rational(-a) : a) / factorial_q(2 * k - 1);
        EXPECT_GT(c, 0);
        u.push_back(c);
    }
    PrecisionScope scope(128);
    auto U = [&](double tau) {
        Real t(tau), acc(0), p = t;
        for (const auto& c : u) {
            acc += to_real(c) * p;
            p *= t * t;
        }
        return acc;
    };
    Real prev(0);
    for (double tau : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 5.8}) {
        Real v = U(tau);
        EXPECT_GT(v, prev) << tau;
        prev = v;
    }
}

TEST(HenonLinearized, LeadingTerms)
{
    auto lin = solve_henon_linearized(12);
    EXPECT_EQ(lin.phi1.min_order(), 3);
    EXPECT_EQ(lin.phi1.coeff_exact(3), CQ(Rational(12)));
    EXPECT_EQ(lin.phi2.coeff_exact(-4), CQ(Rational(1, 84)));
    EXPECT_EQ(lin.phi2.coeff_exact(-2), CQ(Rational(17, 840)));
    EXPECT_EQ(lin.phi2.coeff_exact(0), CQ(Rational(-17, 2240)));
    EXPECT_TRUE(parity_part(lin.phi2, true).is_zero());
}

TEST(HenonLinearized, MatchesDirectRecursion)
{
    auto x0 = solve_henon(40);
    auto lin = solve_henon_linearized(30);
    auto b = phi2_direct(x0, 17);
    for (int j = 0; j <= 17; ++j)
        EXPECT_EQ(lin.phi2.coeff_exact(2 * j - 4), CQ(b[j])) << j;
}

TEST(HenonLinearized, WronskianAndResidual)
{
    auto lin = solve_henon_linearized(46);
    auto W = wronskian(lin.phi1, lin.phi2);
    EXPECT_GE(W.truncation_order(), 40);
    EXPECT_EQ(W.truncated(40), zs(0, {1}, 40));
    auto x0 = solve_henon(52);
    auto r = add(diff_P(lin.phi2), scale(mul(x0, lin.phi2), Scalar(2)));
    EXPECT_TRUE(r.is_zero());
    EXPECT_GE(r.truncation_order(), 40);
}

TEST(FormalIntegral, StructureAndResidual)
{
    auto fi = formal_integral(4, 40);
    const auto& xs = fi.coeffs_by_b_power;
    ASSERT_EQ(xs.size(), 5u);
    EXPECT_EQ(xs[0], solve_henon(40).truncated(40));
    EXPECT_EQ(xs[1], solve_henon_linearized(40).phi2);
    for (int n = 0; n <= 4; ++n) {
        EXPECT_EQ(xs[n].truncation_order(), 40);
        if (n >= 1)
            EXPECT_EQ(xs[n].min_order(), -(6 * n - 2)) << n;
        EXPECT_TRUE(parity_part(xs[n], true).is_zero());
        if (n >= 2)
            EXPECT_EQ(xs[n].coeff_exact(-4), CQ());
    }
    for (const auto& r : formal_integral_residual(fi))
        EXPECT_TRUE(r.is_zero());
}

TEST(Cohomological, GammaValues)
{
    auto g = cohomological_gamma(3);
    EXPECT_EQ(g[0], Rational(-1, 12));
    EXPECT_EQ(g[1], Rational(1, 240));
    auto s = sin_gamma_coefficients(40);
    for (int k = 0; k <= 40; ++k)
        EXPECT_GE(s[k], 0) << k;
}

TEST(Cohomological, PsiExamples)
{
    FormalSeries t2(Variable::b, 2, FormalSeries::ExactCoeffs{CQ(Rational(1))}, 10);
    auto sol = solve_cohomological(t2, 3);
    EXPECT_EQ(sol.psi[0], scale(t2, Scalar(Rational(-1, 12))));
    EXPECT_EQ(sol.psi[1].coeff_exact(0), CQ(Rational(2, 240)));
    auto z = solve_cohomological(FormalSeries::zero(Variable::b, 10), 4);
    for (const auto& p : z.psi)
        EXPECT_TRUE(p.is_zero());
}

TEST(Cohomological, EisensteinSums)
{
    // Gamma_n = (2n+1) sum_{nu in 2 pi i Z*} nu^{-2n-2}
    PrecisionScope scope(128);
    auto g = cohomological_gamma(4);
    for (int n = 1; n < 4; ++n) {
        Real s(0);
        for (long m = 20000; m >= 1; --m) {
            Real nu = 2 * pi() * m;
            Real t = 1 / boost::multiprecision::pow(nu, 2 * n + 2);
            s += 2 * t * ((n + 1) % 2 ? -1 : 1);
        }
        EXPECT_NEAR(to_double((2 * n + 1) * s), to_double(to_real(g[n])), 1e-12) << n;
    }
    // nu-sum of the closed form converges to Gamma-hat(1) like 1/M
    CF target = gamma_hat(CF(Real(1), Real(0)), 30);
    double e100 = to_double(abs(gamma_hat_nu_sum(CF(Real(1), Real(0)), 100) - target));
    double e200 = to_double(abs(gamma_hat_nu_sum(CF(Real(1), Real(0)), 200) - target));
    EXPECT_NEAR(e100 * 100, 1.0 / (2 * M_PI * M_PI), 2e-3);
    EXPECT_NEAR(e100 / e200, 2.0, 0.05);
}
