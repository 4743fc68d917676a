#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace resurge {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Decimal digits handed to MPFR so that the mantissa has at least `bits` bits.
unsigned digits10_for_bits(unsigned bits);
unsigned current_precision_bits();

// Sets the default MPFR precision for newly created Real values and restores
// the previous one on scope exit.  Not thread safe: the default is process wide.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits10_;
};

template <class T>
struct Complex {
    T re{};
    T im{};

    Complex() = default;
    Complex(T r) : re(std::move(r)), im(0) {}
    Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}
    template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
    Complex(I r) : re(r), im(0) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        if (o.im == 0) {
            re *= o.re;
            im *= o.re;
            return *this;
        }
        T r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        if (o.im == 0) {
            re /= o.re;
            im /= o.re;
            return *this;
        }
        T d = o.re * o.re + o.im * o.im;
        T r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const T& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const T& s) { re /= s; im /= s; return *this; }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator*(Complex a, const T& s) { return a *= s; }
    friend Complex operator*(const T& s, Complex a) { return a *= s; }
    friend Complex operator/(Complex a, const T& s) { return a /= s; }
    friend Complex operator-(Complex a) { a.re = -a.re; a.im = -a.im; return a; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

    bool is_zero() const { return re == 0 && im == 0; }
    Complex conj() const { return Complex(re, -im); }
    T norm2() const { return re * re + im * im; }
};

using CQ = Complex<Rational>;
using CF = Complex<Real>;

// Float helpers (all results at the current default precision).
Real to_real(const Rational& q);
CF to_cf(const CQ& q);
Real abs(const CF& z);
Real arg(const CF& z);
CF exp(const CF& z);
CF log(const CF& z);
CF sqrt(const CF& z);
CF pow(const CF& z, long n);
CF polar(const Real& r, const Real& theta);
Real pi();
CF two_pi_i();
Real epsilon_for_bits(unsigned bits);
double to_double(const Real& x);
double abs_double(const CF& z);

// Gaussian-rational helpers.
CQ pow(const CQ& z, long n);
Rational factorial_q(unsigned n);
Rational binomial_q(long n, unsigned k);  // generalized: n may be negative

// Parsing: rationals ("p/q", "-3", "0.125", "1e-3", "2.5e2") and complex
// literals ("20-2i", "3i", "1/2+1/3i", "-1e9").  Decimal input is read exactly.
Rational parse_rational(std::string_view s);
CQ parse_complex_exact(std::string_view s);
CF parse_complex(std::string_view s);

// Canonical text: "p/q" (or "p") for rationals, scientific notation for floats,
// complex values as "re", "re+imi" or "re-imi".
std::string to_string(const Rational& q);
std::string to_string(const CQ& z);
std::string to_string(const Real& x, int digits10 = 0);
std::string to_string(const CF& z, int digits10 = 0);

}  // namespace resurge
