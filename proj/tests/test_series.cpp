#include "resurge/series.hpp"

#include <gtest/gtest.h>

#include <random>

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

FormalSeries random_series(std::mt19937& rng, int lo, int hi, Variable var = Variable::z)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    FormalSeries::ExactCoeffs v;
    for (int k = lo; k <= hi; ++k)
        v.push_back(CQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    return FormalSeries(var, lo, std::move(v), hi);
}

void expect_coeffs(const FormalSeries& s, int lo, const std::vector<Rational>& c)
{
    for (std::size_t i = 0; i < c.size(); ++i)
        EXPECT_EQ(s.coeff_exact(lo + static_cast<int>(i)), CQ(c[i])) << "order " << lo + static_cast<int>(i);
}

}  // namespace

TEST(Series, MonomialProducts)
{
    auto a = zs(1, {1}, 10);
    auto p = mul(a, a);
    EXPECT_EQ(p.min_order(), 2);
    EXPECT_EQ(p.coeff_exact(2), CQ(Rational(1)));
    auto b = zs(2, {-6}, 10);
    EXPECT_EQ(mul(b, b).coeff_exact(4), CQ(Rational(36)));
}

TEST(Series, HenonSquareToSixthOrder)
{
    auto x0 = zs(2, {-6, 0, Rational(15, 2)}, 6);
    auto sq = mul(x0, x0).truncated(6);
    expect_coeffs(sq, 4, {36, 0, -90});
    EXPECT_EQ(sq.truncation_order(), 6);
}

TEST(Series, TruncationIsPessimistic)
{
    auto a = zs(1, {1, 1}, 5);
    auto b = zs(2, {1}, 9);
    EXPECT_EQ(mul(a, b).truncation_order(), 7);
    EXPECT_EQ(add(a, b).truncation_order(), 5);
}

TEST(Series, ZeroSeriesCanonical)
{
    auto z = FormalSeries::zero(Variable::z, 8);
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.size(), 0u);
    auto a = zs(2, {1, 2}, 8);
    EXPECT_TRUE(sub(a, a).is_zero());
    EXPECT_EQ(sub(a, a).min_order(), 9);
}

TEST(Series, MismatchErrors)
{
    auto a = zs(1, {1}, 5);
    auto b = a.with_variable(Variable::zeta);
    EXPECT_THROW(add(a, b), std::invalid_argument);
    EXPECT_THROW(mul(a, a.to_float(128)), std::invalid_argument);
}

TEST(Series, ScalarMulThroughArith)
{
    auto c = FormalSeries::constant(Variable::z, Scalar(Rational(3, 2)), 5);
    auto a = zs(1, {2, 4}, 5);
    expect_coeffs(arith(ArithOp::scalar_mul, c, a), 1, {3, 6});
    EXPECT_THROW(arith(ArithOp::scalar_mul, a, a), std::invalid_argument);
}

TEST(Series, ShiftExamples)
{
    auto inv = zs(1, {1}, 6);
    expect_coeffs(shift(inv, Scalar(1)), 1, {1, -1, 1, -1, 1, -1});
    EXPECT_EQ(shift(inv, Scalar(0)), inv);
    auto sq = zs(-2, {1}, 4);
    expect_coeffs(shift(sq, Scalar(1)), -2, {1, 2, 1, 0});
}

TEST(Series, DifferenceOperators)
{
    auto p = diff_P(zs(2, {1}, 8));
    expect_coeffs(p, 2, {0, 0, 6, 0, 10, 0, 14});
    EXPECT_TRUE(diff_P(zs(0, {1}, 8)).is_zero());
    auto d = diff_D(zs(-1, {1}, 8));
    expect_coeffs(d, 0, {1, 0, 0});
}

TEST(Series, ComposeShifted)
{
    auto psi = zs(1, {1}, 8);
    auto one = zs(0, {1}, 8);
    EXPECT_EQ(compose_shifted(psi, one), shift(psi, Scalar(1)));
    EXPECT_EQ(compose_shifted(psi, FormalSeries::zero(Variable::z, 8)), psi);
    // (z + 1/z)^{-2} = z^{-2} (1 + z^{-2})^{-2}
    auto r = compose_shifted(zs(2, {1}, 8), zs(1, {1}, 8));
    expect_coeffs(r, 2, {1, 0, -2, 0, 3, 0, -4});
    EXPECT_THROW(compose_shifted(psi, zs(-1, {1}, 8)), std::invalid_argument);
}

TEST(Series, LagrangeInvert)
{
    auto phi = lagrange_invert(zs(1, {1}, 7));
    // inverse of w = z + 1/z: z = (w + sqrt(w^2 - 4))/2 = w - 1/w - 1/w^3 - 2/w^5 - 5/w^7
    expect_coeffs(phi, 1, {-1, 0, -1, 0, -2, 0, -5});
    EXPECT_TRUE(lagrange_invert(FormalSeries::zero(Variable::z, 6)).is_zero());
    auto c = lagrange_invert(zs(0, {Rational(3, 4)}, 6));
    expect_coeffs(c, 0, {Rational(-3, 4), 0, 0, 0});
}

TEST(Series, SubstituteConvergent)
{
    auto psi = zs(1, {1}, 6);
    expect_coeffs(substitute_convergent(convergent_geometric(10), psi), 0, {1, 1, 1, 1, 1, 1, 1});
    auto e0 = substitute_convergent(convergent_exp(10), FormalSeries::zero(Variable::z, 6));
    expect_coeffs(e0, 0, {1, 0, 0});
    expect_coeffs(substitute_convergent(convergent_exp(10), psi), 0,
                  {1, 1, Rational(1, 2), Rational(1, 6), Rational(1, 24)});
    EXPECT_THROW(convergent_reciprocal(Scalar(0), 5), std::domain_error);
    auto r = substitute_convergent(convergent_reciprocal(Scalar(2), 10), psi);
    expect_coeffs(r, 0, {Rational(1, 2), Rational(-1, 4), Rational(1, 8)});
}

TEST(Series, TextRoundTrip)
{
    auto a = zs(-1, {Rational(1, 3), 0, Rational(-7, 2)}, 4);
    EXPECT_EQ(FormalSeries::from_text(a.to_text()), a);
    auto f = a.to_float(128);
    auto g = FormalSeries::from_text(f.to_text());
    EXPECT_EQ(g.min_order(), f.min_order());
    PrecisionScope scope(128);
    EXPECT_LT(abs(g.coeff_cf(-1) - f.coeff_cf(-1)), Real(1e-35));
}

TEST(SeriesProperty, MulCommutativeAssociative)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_series(rng, 1, 30), b = random_series(rng, -2, 30), c = random_series(rng, 0, 30);
        EXPECT_EQ(mul(a, b), mul(b, a));
        EXPECT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
    }
}

TEST(SeriesProperty, ShiftRoundTrip)
{
    std::mt19937 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_series(rng, -3, 20);
        EXPECT_EQ(shift(shift(a, Scalar(1)), Scalar(-1)), a);
    }
}

TEST(SeriesProperty, PEqualsDDShift)
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_series(rng, -2, 20);
        EXPECT_EQ(diff_P(a), diff_D(diff_D(shift(a, Scalar(1)))));
    }
}

TEST(SeriesProperty, LagrangeTwoSidedInverse)
{
    std::mt19937 rng(14);
    for (int trial = 0; trial < 4; ++trial) {
        auto chi = random_series(rng, 0, 14);
        auto phi = lagrange_invert(chi);
        // (Id + chi) o (Id + phi) = Id  <=>  phi + chi(z + phi) = 0
        EXPECT_TRUE(add(phi, compose_shifted(chi, phi)).is_zero());
        EXPECT_TRUE(add(chi, compose_shifted(phi, chi)).is_zero());
    }
}

TEST(SeriesProperty, FloatMatchesExact)
{
    std::mt19937 rng(15);
    const unsigned bits = 128;
    auto a = random_series(rng, 1, 25), b = random_series(rng, 0, 25);
    auto exact = lagrange_invert(mul(a, shift(b, Scalar(Rational(1, 3)))));
    auto flt = lagrange_invert(mul(a.to_float(bits), shift(b.to_float(bits), Scalar(Rational(1, 3)).to_mode(Mode::floating, bits))));
    PrecisionScope scope(bits);
    Real tol = epsilon_for_bits(bits - 10);
    for (int k = exact.min_order(); k <= exact.truncation_order(); ++k) {
        CF e = exact.coeff_cf(k), f = flt.coeff_cf(k);
        Real scale = std::max(abs(e), Real(1));
        EXPECT_LE(abs(e - f) / scale, tol) << "order " << k;
    }
}
