#include "resurge/numeric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace resurge {

unsigned digits10_for_bits(unsigned bits)
{
    // MPFR gets ceil(d * log2(10)) + 1 bits from Boost, so this never undershoots.
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

unsigned current_precision_bits()
{
    Real x;
    return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision())
{
    if (bits < 64)
        throw std::invalid_argument("precision below 64 bits");
    Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

Real to_real(const Rational& q)
{
    Real r;
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}

CF to_cf(const CQ& q) { return CF(to_real(q.re), to_real(q.im)); }

Real abs(const CF& z)
{
    if (z.im == 0)
        return boost::multiprecision::abs(z.re);
    Real r;
    mpfr_hypot(r.backend().data(), z.re.backend().data(), z.im.backend().data(), MPFR_RNDN);
    return r;
}

Real arg(const CF& z)
{
    Real r;
    mpfr_atan2(r.backend().data(), z.im.backend().data(), z.re.backend().data(), MPFR_RNDN);
    return r;
}

CF exp(const CF& z)
{
    Real m = boost::multiprecision::exp(z.re);
    if (z.im == 0)
        return CF(m, Real(0));
    Real s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), z.im.backend().data(), MPFR_RNDN);
    return CF(m * c, m * s);
}

CF log(const CF& z)
{
    if (z.is_zero())
        throw std::domain_error("log(0)");
    return CF(boost::multiprecision::log(abs(z)), arg(z));
}

CF sqrt(const CF& z)
{
    if (z.is_zero())
        return z;
    Real r = abs(z);
    Real a = boost::multiprecision::sqrt((r + boost::multiprecision::abs(z.re)) / 2);
    if (z.re >= 0)
        return CF(a, z.im / (2 * a));
    Real b = z.im < 0 ? Real(-a) : a;
    return CF(boost::multiprecision::abs(z.im) / (2 * a), b);
}

CF pow(const CF& z, long n)
{
    if (n < 0)
        return CF(Real(1), Real(0)) / pow(z, -n);
    CF result(Real(1), Real(0));
    CF base = z;
    while (n > 0) {
        if (n & 1)
            result *= base;
        n >>= 1;
        if (n)
            base *= base;
    }
    return result;
}

CF polar(const Real& r, const Real& theta)
{
    Real s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), theta.backend().data(), MPFR_RNDN);
    return CF(r * c, r * s);
}

Real pi()
{
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

CF two_pi_i() { return CF(Real(0), 2 * pi()); }

Real epsilon_for_bits(unsigned bits)
{
    Real e(1);
    mpfr_mul_2si(e.backend().data(), e.backend().data(), -static_cast<long>(bits), MPFR_RNDN);
    return e;
}

double to_double(const Real& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDN); }

double abs_double(const CF& z) { return std::hypot(to_double(z.re), to_double(z.im)); }

CQ pow(const CQ& z, long n)
{
    if (n < 0)
        return CQ(Rational(1)) / pow(z, -n);
    CQ result(Rational(1));
    CQ base = z;
    while (n > 0) {
        if (n & 1)
            result *= base;
        n >>= 1;
        if (n)
            base *= base;
    }
    return result;
}

Rational factorial_q(unsigned n)
{
    Integer f = 1;
    for (unsigned k = 2; k <= n; ++k)
        f *= k;
    return Rational(f);
}

Rational binomial_q(long n, unsigned k)
{
    Rational r(1);
    for (unsigned i = 0; i < k; ++i) {
        r *= Rational(n - static_cast<long>(i));
        r /= Rational(static_cast<long>(i) + 1);
    }
    return r;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Unsigned decimal or p/q literal starting at s[pos]; advances pos.
Rational scan_unsigned(std::string_view s, std::size_t& pos)
{
    std::size_t start = pos;
    Integer mant = 0;
    long frac_digits = 0;
    bool any = false;
    while (pos < s.size() && is_digit(s[pos])) {
        mant = mant * 10 + (s[pos] - '0');
        ++pos;
        any = true;
    }
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && is_digit(s[pos])) {
            mant = mant * 10 + (s[pos] - '0');
            ++frac_digits;
            ++pos;
            any = true;
        }
    }
    if (!any)
        throw std::invalid_argument("expected a number at '" + std::string(s.substr(start)) + "'");
    long exponent = -frac_digits;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        std::size_t epos = pos + 1;
        int esign = 1;
        if (epos < s.size() && (s[epos] == '+' || s[epos] == '-')) {
            esign = s[epos] == '-' ? -1 : 1;
            ++epos;
        }
        if (epos < s.size() && is_digit(s[epos])) {
            long e = 0;
            while (epos < s.size() && is_digit(s[epos])) {
                e = e * 10 + (s[epos] - '0');
                if (e > 100000)
                    throw std::invalid_argument("exponent out of range");
                ++epos;
            }
            exponent += esign * e;
            pos = epos;
        }
    }
    Rational value(mant);
    Integer ten = 10;
    if (exponent > 0)
        value *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(exponent)));
    else if (exponent < 0)
        value /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-exponent)));
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        Rational den = scan_unsigned(s, pos);
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        value /= den;
    }
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = trim(text);
    std::size_t pos = 0;
    int sign = 1;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        sign = s[pos] == '-' ? -1 : 1;
        ++pos;
    }
    Rational v = scan_unsigned(s, pos);
    if (pos != s.size())
        throw std::invalid_argument("trailing characters in '" + std::string(text) + "'");
    return sign < 0 ? Rational(-v) : v;
}

CQ parse_complex_exact(std::string_view text)
{
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            compact.push_back(c);
    std::string_view s = compact;
    if (s.empty())
        throw std::invalid_argument("empty complex literal");
    CQ result;
    std::size_t pos = 0;
    bool first = true;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!first) {
            throw std::invalid_argument("malformed complex literal '" + compact + "'");
        }
        Rational mag(1);
        bool imaginary = false;
        if (pos < s.size() && s[pos] == 'i') {
            imaginary = true;
            ++pos;
        } else {
            mag = scan_unsigned(s, pos);
            if (pos < s.size() && s[pos] == '*' && pos + 1 < s.size() && s[pos + 1] == 'i') {
                imaginary = true;
                pos += 2;
            } else if (pos < s.size() && s[pos] == 'i') {
                imaginary = true;
                ++pos;
            }
        }
        if (sign < 0)
            mag = -mag;
        if (imaginary)
            result.im += mag;
        else
            result.re += mag;
        first = false;
    }
    return result;
}

CF parse_complex(std::string_view s) { return to_cf(parse_complex_exact(s)); }

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(const CQ& z)
{
    if (z.im == 0)
        return to_string(z.re);
    std::string im = to_string(boost::multiprecision::abs(z.im)) + "i";
    if (z.re == 0)
        return (z.im < 0 ? "-" : "") + im;
    return to_string(z.re) + (z.im < 0 ? "-" : "+") + im;
}

std::string to_string(const Real& x, int digits10)
{
    if (digits10 <= 0) {
        long bits = mpfr_get_prec(x.backend().data());
        digits10 = static_cast<int>(std::floor(bits * 0.30102999566398120));
    }
    return x.str(digits10, std::ios_base::scientific);
}

std::string to_string(const CF& z, int digits10)
{
    if (z.im == 0)
        return to_string(z.re, digits10);
    std::string im = to_string(Real(boost::multiprecision::abs(z.im)), digits10) + "i";
    return to_string(z.re, digits10) + (z.im < 0 ? "-" : "+") + im;
}

}  // namespace resurge
