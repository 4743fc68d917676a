#pragma once

#include "resurge/numeric.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace resurge {

enum class Mode { exact, floating };

// z: Laurent series at infinity, order k is the coefficient of z^{-k}.
// zeta, b: power series, order k is the coefficient of zeta^k (b^k).
enum class Variable { z, zeta, b };

std::string to_string(Variable v);
Variable parse_variable(std::string_view s);

class Scalar {
public:
    Scalar() : value_(CQ()) {}
    Scalar(const CQ& q) : value_(q) {}
    Scalar(const Rational& q) : value_(CQ(q)) {}
    Scalar(long n) : value_(CQ(Rational(n))) {}
    Scalar(int n) : value_(CQ(Rational(n))) {}
    Scalar(const CF& x, unsigned bits);

    Mode mode() const { return value_.index() == 0 ? Mode::exact : Mode::floating; }
    unsigned precision_bits() const { return bits_; }
    const CQ& exact() const;
    const CF& floating() const;
    // Value as a float at the current default precision.
    CF to_cf() const;
    Scalar to_mode(Mode m, unsigned bits) const;
    bool is_zero() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend Scalar operator-(const Scalar& a);
    friend bool operator==(const Scalar& a, const Scalar& b);

    std::string to_string() const;

private:
    void check_same_mode(const Scalar& o) const;

    std::variant<CQ, CF> value_;
    unsigned bits_ = 0;
};

class FormalSeries {
public:
    using ExactCoeffs = std::vector<CQ>;
    using FloatCoeffs = std::vector<CF>;

    // Exact zero z-series known to order 0.
    FormalSeries();
    FormalSeries(Variable var, int min_order, ExactCoeffs coeffs, int truncation_order,
                 bool gevrey = false);
    FormalSeries(Variable var, int min_order, FloatCoeffs coeffs, int truncation_order,
                 unsigned precision_bits, bool gevrey = false);

    static FormalSeries zero(Variable var, int truncation_order, Mode mode = Mode::exact,
                             unsigned precision_bits = 0);
    static FormalSeries monomial(Variable var, int order, const Scalar& c, int truncation_order);
    static FormalSeries constant(Variable var, const Scalar& c, int truncation_order);

    Variable variable() const { return var_; }
    // For the zero series min_order is truncation_order + 1 and coeffs are empty.
    int min_order() const { return min_order_; }
    int truncation_order() const { return trunc_; }
    Mode mode() const { return data_.index() == 0 ? Mode::exact : Mode::floating; }
    unsigned precision_bits() const { return bits_; }
    bool gevrey() const { return gevrey_; }
    bool is_zero() const { return size() == 0; }
    std::size_t size() const;

    const ExactCoeffs& exact() const;
    const FloatCoeffs& floating() const;
    // Coefficient of order k; zero below min_order, throws above truncation.
    Scalar coeff(int k) const;
    CQ coeff_exact(int k) const;
    CF coeff_cf(int k) const;

    FormalSeries truncated(int n) const;
    FormalSeries with_gevrey(bool g) const;
    FormalSeries with_variable(Variable v) const;
    // Float copy; values computed at `bits` precision.
    FormalSeries to_float(unsigned bits) const;
    bool same_kind(const FormalSeries& o) const;

    std::string to_text() const;
    static FormalSeries from_text(std::string_view text);

    friend bool operator==(const FormalSeries& a, const FormalSeries& b);

private:
    void normalize();

    Variable var_ = Variable::z;
    int min_order_ = 1;
    int trunc_ = 0;
    std::variant<ExactCoeffs, FloatCoeffs> data_;
    unsigned bits_ = 0;
    bool gevrey_ = false;
};

// Coefficients of b^n, each a z-series.
struct TwoVarSeries {
    std::vector<FormalSeries> coeffs_by_b_power;
    int truncation_b = 0;
};

namespace series {

enum class ArithOp { add, sub, mul, scalar_mul };

// For scalar_mul, `a` must be a constant series and its value scales `b`
// (scale() is the direct form).
FormalSeries arith(ArithOp op, const FormalSeries& a, const FormalSeries& b);
FormalSeries add(const FormalSeries& a, const FormalSeries& b);
FormalSeries sub(const FormalSeries& a, const FormalSeries& b);
FormalSeries mul(const FormalSeries& a, const FormalSeries& b);
FormalSeries scale(const FormalSeries& a, const Scalar& s);
FormalSeries neg(const FormalSeries& a);
FormalSeries power(const FormalSeries& a, unsigned n);
// Multiplicative inverse; leading coefficient must be nonzero.
FormalSeries reciprocal(const FormalSeries& a);
FormalSeries divide(const FormalSeries& a, const FormalSeries& b);
// Multiply by the variable^k (z^k lowers orders by k; zeta^k raises them).
FormalSeries mul_var_power(const FormalSeries& a, int k);

// d/dz or d/dzeta.
FormalSeries derivative(const FormalSeries& a);
// Primitive with zero constant term; throws if a z^-1 (log) term is present.
FormalSeries primitive(const FormalSeries& a);
// Odd or even part (in z or the power-series variable).
FormalSeries parity_part(const FormalSeries& a, bool odd);
FormalSeries shift(const FormalSeries& phi, const Scalar& h);
FormalSeries diff_D(const FormalSeries& phi);
FormalSeries diff_P(const FormalSeries& phi);
FormalSeries compose_shifted(const FormalSeries& psi, const FormalSeries& chi);
FormalSeries lagrange_invert(const FormalSeries& chi);

// Coefficient generators for substitute_convergent, as power series in w
// (variable b) known to order n.
FormalSeries convergent_geometric(int n, Mode mode = Mode::exact, unsigned bits = 0);
FormalSeries convergent_exp(int n, Mode mode = Mode::exact, unsigned bits = 0);
FormalSeries convergent_reciprocal(const Scalar& c, int n);
FormalSeries substitute_convergent(const FormalSeries& C, const FormalSeries& psi);

// Evaluate a z-series (truncated sum) at a point; float mode at current precision.
CF evaluate(const FormalSeries& a, const CF& x);
// Same as evaluate for the derivative.
CF evaluate_derivative(const FormalSeries& a, const CF& x);

}  // namespace series

}  // namespace resurge
