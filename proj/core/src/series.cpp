#include "resurge/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace resurge {

std::string to_string(Variable v)
{
    switch (v) {
    case Variable::z: return "z";
    case Variable::zeta: return "zeta";
    case Variable::b: return "b";
    }
    return "?";
}

Variable parse_variable(std::string_view s)
{
    if (s == "z") return Variable::z;
    if (s == "zeta") return Variable::zeta;
    if (s == "b") return Variable::b;
    throw std::invalid_argument("unknown variable '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(const CF& x, unsigned bits) : value_(x), bits_(bits)
{
    if (bits < 64)
        throw std::invalid_argument("float scalars need at least 64 bits");
}

const CQ& Scalar::exact() const
{
    if (mode() != Mode::exact)
        throw std::logic_error("scalar is not exact");
    return std::get<CQ>(value_);
}

const CF& Scalar::floating() const
{
    if (mode() != Mode::floating)
        throw std::logic_error("scalar is not a float");
    return std::get<CF>(value_);
}

CF Scalar::to_cf() const
{
    if (mode() == Mode::exact)
        return resurge::to_cf(std::get<CQ>(value_));
    const CF& v = std::get<CF>(value_);
    return CF(Real(v.re), Real(v.im));
}

Scalar Scalar::to_mode(Mode m, unsigned bits) const
{
    if (m == Mode::exact) {
        if (mode() != Mode::exact)
            throw std::logic_error("cannot convert a float scalar to exact");
        return *this;
    }
    PrecisionScope scope(bits);
    return Scalar(to_cf(), bits);
}

bool Scalar::is_zero() const
{
    if (mode() == Mode::exact)
        return std::get<CQ>(value_).is_zero();
    PrecisionScope scope(bits_);
    return abs(std::get<CF>(value_)) < epsilon_for_bits(bits_ / 2);
}

void Scalar::check_same_mode(const Scalar& o) const
{
    if (mode() != o.mode())
        throw std::invalid_argument("scalar mode mismatch");
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    check_same_mode(o);
    if (mode() == Mode::exact)
        std::get<CQ>(value_) += std::get<CQ>(o.value_);
    else {
        bits_ = std::min(bits_, o.bits_);
        std::get<CF>(value_) += std::get<CF>(o.value_);
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    check_same_mode(o);
    if (mode() == Mode::exact)
        std::get<CQ>(value_) -= std::get<CQ>(o.value_);
    else {
        bits_ = std::min(bits_, o.bits_);
        std::get<CF>(value_) -= std::get<CF>(o.value_);
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    check_same_mode(o);
    if (mode() == Mode::exact)
        std::get<CQ>(value_) *= std::get<CQ>(o.value_);
    else {
        bits_ = std::min(bits_, o.bits_);
        std::get<CF>(value_) *= std::get<CF>(o.value_);
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    check_same_mode(o);
    if (o.is_zero())
        throw std::domain_error("division by zero scalar");
    if (mode() == Mode::exact)
        std::get<CQ>(value_) /= std::get<CQ>(o.value_);
    else {
        bits_ = std::min(bits_, o.bits_);
        std::get<CF>(value_) /= std::get<CF>(o.value_);
    }
    return *this;
}

Scalar operator-(const Scalar& a)
{
    Scalar r = a;
    if (r.mode() == Mode::exact)
        std::get<CQ>(r.value_) = -std::get<CQ>(r.value_);
    else
        std::get<CF>(r.value_) = -std::get<CF>(r.value_);
    return r;
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.mode() != b.mode())
        return false;
    if (a.mode() == Mode::exact)
        return std::get<CQ>(a.value_) == std::get<CQ>(b.value_);
    return std::get<CF>(a.value_) == std::get<CF>(b.value_);
}

std::string Scalar::to_string() const
{
    if (mode() == Mode::exact)
        return resurge::to_string(std::get<CQ>(value_));
    return resurge::to_string(std::get<CF>(value_));
}

// ---------------------------------------------------------- FormalSeries

namespace {

// Dense coefficient block of one mode: orders lo..hi, c.size() == hi - lo + 1.
template <class T>
struct Dense {
    using value_type = T;
    int lo = 1;
    int hi = 0;
    std::vector<T> c;

    const T* at(int k) const { return (k < lo || k > hi) ? nullptr : &c[k - lo]; }
};

template <class T>
T zero_value()
{
    if constexpr (std::is_same_v<T, CQ>)
        return CQ();
    else
        return CF(Real(0), Real(0));
}

template <class T>
T from_rational(const Rational& q)
{
    if constexpr (std::is_same_v<T, CQ>)
        return CQ(q);
    else
        return CF(to_real(q), Real(0));
}

template <class T>
Dense<T> dense_of(const FormalSeries& s)
{
    Dense<T> d;
    d.lo = s.min_order();
    d.hi = s.truncation_order();
    if constexpr (std::is_same_v<T, CQ>)
        d.c = s.exact();
    else
        d.c = s.floating();
    return d;
}

template <class T>
FormalSeries series_of(const FormalSeries& like, Dense<T> d, bool gevrey)
{
    if constexpr (std::is_same_v<T, CQ>)
        return FormalSeries(like.variable(), d.lo, std::move(d.c), d.hi, gevrey);
    else
        return FormalSeries(like.variable(), d.lo, std::move(d.c), d.hi, like.precision_bits(), gevrey);
}

// Runs f on the typed dense form of `a` under the right precision scope.
template <class F>
FormalSeries dispatch(const FormalSeries& a, bool gevrey, F&& f)
{
    if (a.mode() == Mode::exact)
        return series_of(a, f(dense_of<CQ>(a)), gevrey);
    PrecisionScope scope(a.precision_bits());
    return series_of(a, f(dense_of<CF>(a)), gevrey);
}

template <class F>
FormalSeries dispatch2(const FormalSeries& a, const FormalSeries& b, bool gevrey, F&& f)
{
    if (a.variable() != b.variable())
        throw std::invalid_argument("series variable mismatch");
    if (a.mode() != b.mode())
        throw std::invalid_argument("series mode mismatch");
    if (a.mode() == Mode::exact)
        return series_of(a, f(dense_of<CQ>(a), dense_of<CQ>(b)), gevrey);
    unsigned bits = std::min(a.precision_bits(), b.precision_bits());
    PrecisionScope scope(bits);
    FormalSeries like = a.precision_bits() <= b.precision_bits() ? a : b;
    return series_of(like, f(dense_of<CF>(a), dense_of<CF>(b)), gevrey);
}

template <class T>
Dense<T> dense_add(const Dense<T>& a, const Dense<T>& b, bool subtract)
{
    Dense<T> r;
    r.hi = std::min(a.hi, b.hi);
    r.lo = std::min(a.lo, b.lo);
    if (r.lo > r.hi) {
        r.lo = r.hi + 1;
        return r;
    }
    r.c.assign(r.hi - r.lo + 1, zero_value<T>());
    for (int k = r.lo; k <= r.hi; ++k) {
        T& v = r.c[k - r.lo];
        if (auto p = a.at(k))
            v += *p;
        if (auto p = b.at(k)) {
            if (subtract)
                v -= *p;
            else
                v += *p;
        }
    }
    return r;
}

template <class T>
Dense<T> dense_mul(const Dense<T>& a, const Dense<T>& b)
{
    Dense<T> r;
    r.lo = a.lo + b.lo;
    r.hi = std::min(a.hi + b.lo, b.hi + a.lo);
    if (a.c.empty() || b.c.empty() || r.lo > r.hi) {
        r.lo = r.hi + 1;
        r.c.clear();
        return r;
    }
    r.c.assign(r.hi - r.lo + 1, zero_value<T>());
    const int na = static_cast<int>(a.c.size());
    const int nb = static_cast<int>(b.c.size());
    for (int i = 0; i < na; ++i) {
        if (a.c[i].is_zero())
            continue;
        const int jmax = std::min(nb - 1, r.hi - r.lo - i);
        for (int j = 0; j <= jmax; ++j)
            r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

template <class T>
Dense<T> dense_scale(Dense<T> a, const T& s)
{
    for (auto& v : a.c)
        v *= s;
    return a;
}

template <class T>
Dense<T> dense_reciprocal(const Dense<T>& a)
{
    if (a.c.empty())
        throw std::domain_error("reciprocal of a zero series");
    const int n = a.hi - a.lo;  // relative length
    Dense<T> r;
    r.lo = -a.lo;
    r.hi = -a.lo + n;
    r.c.assign(n + 1, zero_value<T>());
    T inv = from_rational<T>(Rational(1)) / a.c[0];
    r.c[0] = inv;
    for (int k = 1; k <= n; ++k) {
        T acc = zero_value<T>();
        for (int j = 1; j <= k; ++j)
            if (!a.c[j].is_zero())
                acc += a.c[j] * r.c[k - j];
        r.c[k] = -(acc * inv);
    }
    return r;
}

template <class T>
T scalar_as(const Scalar& s)
{
    if constexpr (std::is_same_v<T, CQ>)
        return s.exact();
    else
        return s.to_cf();
}

}  // namespace

FormalSeries::FormalSeries() : var_(Variable::z), min_order_(1), trunc_(0), data_(ExactCoeffs{}) {}

FormalSeries::FormalSeries(Variable var, int min_order, ExactCoeffs coeffs, int truncation_order,
                           bool gevrey)
    : var_(var), min_order_(min_order), trunc_(truncation_order), data_(std::move(coeffs)),
      gevrey_(gevrey)
{
    normalize();
}

FormalSeries::FormalSeries(Variable var, int min_order, FloatCoeffs coeffs, int truncation_order,
                           unsigned precision_bits, bool gevrey)
    : var_(var), min_order_(min_order), trunc_(truncation_order), data_(std::move(coeffs)),
      bits_(precision_bits), gevrey_(gevrey)
{
    if (precision_bits < 64)
        throw std::invalid_argument("float series need at least 64 bits");
    normalize();
}

void FormalSeries::normalize()
{
    std::size_t n = size();
    std::size_t expected = trunc_ >= min_order_ ? static_cast<std::size_t>(trunc_ - min_order_ + 1) : 0;
    if (n > expected) {
        // Drop coefficients beyond the truncation order.
        std::visit([&](auto& v) { v.resize(expected); }, data_);
    } else if (n < expected) {
        std::visit([&](auto& v) {
            using T = typename std::decay_t<decltype(v)>::value_type;
            v.resize(expected, zero_value<T>());
        }, data_);
    }
    std::size_t lead = 0;
    if (mode() == Mode::exact) {
        auto& v = std::get<ExactCoeffs>(data_);
        while (lead < v.size() && v[lead].is_zero())
            ++lead;
        v.erase(v.begin(), v.begin() + static_cast<long>(lead));
    } else {
        PrecisionScope scope(bits_);
        Real eps = epsilon_for_bits(bits_ / 2);
        auto& v = std::get<FloatCoeffs>(data_);
        // zeta coefficients are compared on the k! scale (the z-side magnitude)
        auto scaled = [&](std::size_t i) {
            Real m = abs(v[i]);
            if (var_ == Variable::zeta)
                for (int k = 2; k <= min_order_ + static_cast<int>(i); ++k)
                    m *= k;
            return m;
        };
        while (lead < v.size() && scaled(lead) < eps)
            ++lead;
        v.erase(v.begin(), v.begin() + static_cast<long>(lead));
    }
    min_order_ += static_cast<int>(lead);
    if (size() == 0)
        min_order_ = trunc_ + 1;
}

FormalSeries FormalSeries::zero(Variable var, int truncation_order, Mode mode, unsigned precision_bits)
{
    if (mode == Mode::exact)
        return FormalSeries(var, truncation_order + 1, ExactCoeffs{}, truncation_order);
    return FormalSeries(var, truncation_order + 1, FloatCoeffs{}, truncation_order, precision_bits);
}

FormalSeries FormalSeries::monomial(Variable var, int order, const Scalar& c, int truncation_order)
{
    if (c.mode() == Mode::exact)
        return FormalSeries(var, order, ExactCoeffs{c.exact()}, truncation_order);
    PrecisionScope scope(c.precision_bits());
    return FormalSeries(var, order, FloatCoeffs{c.to_cf()}, truncation_order, c.precision_bits());
}

FormalSeries FormalSeries::constant(Variable var, const Scalar& c, int truncation_order)
{
    return monomial(var, 0, c, truncation_order);
}

std::size_t FormalSeries::size() const
{
    return std::visit([](const auto& v) { return v.size(); }, data_);
}

const FormalSeries::ExactCoeffs& FormalSeries::exact() const
{
    if (mode() != Mode::exact)
        throw std::logic_error("series is not exact");
    return std::get<ExactCoeffs>(data_);
}

const FormalSeries::FloatCoeffs& FormalSeries::floating() const
{
    if (mode() != Mode::floating)
        throw std::logic_error("series is not float");
    return std::get<FloatCoeffs>(data_);
}

Scalar FormalSeries::coeff(int k) const
{
    if (k > trunc_)
        throw std::out_of_range("coefficient beyond truncation order");
    if (mode() == Mode::exact)
        return Scalar(coeff_exact(k));
    PrecisionScope scope(bits_);
    return Scalar(coeff_cf(k), bits_);
}

CQ FormalSeries::coeff_exact(int k) const
{
    if (k > trunc_)
        throw std::out_of_range("coefficient beyond truncation order");
    const auto& v = exact();
    if (k < min_order_)
        return CQ();
    return v[k - min_order_];
}

CF FormalSeries::coeff_cf(int k) const
{
    if (k > trunc_)
        throw std::out_of_range("coefficient beyond truncation order");
    if (mode() == Mode::exact)
        return to_cf(coeff_exact(k));
    const auto& v = floating();
    if (k < min_order_)
        return CF(Real(0), Real(0));
    return CF(Real(v[k - min_order_].re), Real(v[k - min_order_].im));
}

FormalSeries FormalSeries::truncated(int n) const
{
    FormalSeries r = *this;
    if (n >= trunc_)
        return r;
    r.trunc_ = n;
    r.normalize();
    return r;
}

FormalSeries FormalSeries::with_gevrey(bool g) const
{
    FormalSeries r = *this;
    r.gevrey_ = g;
    return r;
}

FormalSeries FormalSeries::with_variable(Variable v) const
{
    FormalSeries r = *this;
    r.var_ = v;
    return r;
}

FormalSeries FormalSeries::to_float(unsigned bits) const
{
    PrecisionScope scope(bits);
    FloatCoeffs c;
    c.reserve(size());
    if (mode() == Mode::exact) {
        for (const auto& q : exact())
            c.push_back(resurge::to_cf(q));
    } else {
        for (const auto& x : floating())
            c.push_back(CF(Real(x.re), Real(x.im)));
    }
    return FormalSeries(var_, min_order_, std::move(c), trunc_, bits, gevrey_);
}

bool FormalSeries::same_kind(const FormalSeries& o) const
{
    return var_ == o.var_ && mode() == o.mode();
}

std::string FormalSeries::to_text() const
{
    std::ostringstream out;
    out << "variable=" << resurge::to_string(var_) << " min_order=" << min_order_
        << " truncation_order=" << trunc_ << " mode=" << (mode() == Mode::exact ? "exact" : "float")
        << " precision_bits=" << bits_ << " gevrey=" << (gevrey_ ? 1 : 0) << " coeffs=[";
    for (std::size_t i = 0; i < size(); ++i) {
        if (i)
            out << ", ";
        if (mode() == Mode::exact)
            out << resurge::to_string(exact()[i]);
        else
            out << resurge::to_string(floating()[i]);
    }
    out << "]";
    return out.str();
}

FormalSeries FormalSeries::from_text(std::string_view text)
{
    auto field = [&](std::string_view key) -> std::string {
        std::string k = std::string(key) + "=";
        auto pos = text.find(k);
        if (pos == std::string_view::npos)
            throw std::invalid_argument("series text lacks '" + std::string(key) + "'");
        pos += k.size();
        auto end = text.find(' ', pos);
        return std::string(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    };
    Variable var = parse_variable(field("variable"));
    int lo = std::stoi(field("min_order"));
    int hi = std::stoi(field("truncation_order"));
    std::string mode = field("mode");
    unsigned bits = static_cast<unsigned>(std::stoul(field("precision_bits")));
    bool gevrey = field("gevrey") == "1";
    auto open = text.find("coeffs=[");
    auto close = text.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw std::invalid_argument("series text lacks coefficient list");
    std::string_view body = text.substr(open + 8, close - open - 8);
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        std::string_view item = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        std::string s(item);
        s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
        if (!s.empty())
            items.push_back(s);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    if (mode == "exact") {
        ExactCoeffs c;
        for (const auto& s : items)
            c.push_back(parse_complex_exact(s));
        return FormalSeries(var, lo, std::move(c), hi, gevrey);
    }
    if (mode != "float")
        throw std::invalid_argument("unknown series mode '" + mode + "'");
    PrecisionScope scope(bits);
    FloatCoeffs c;
    for (const auto& s : items) {
        // Float text is parsed exactly and then rounded once.
        c.push_back(parse_complex(s));
    }
    return FormalSeries(var, lo, std::move(c), hi, bits, gevrey);
}

bool operator==(const FormalSeries& a, const FormalSeries& b)
{
    if (a.var_ != b.var_ || a.min_order_ != b.min_order_ || a.trunc_ != b.trunc_ || a.mode() != b.mode())
        return false;
    return a.data_ == b.data_;
}

// ------------------------------------------------------------ operations

namespace series {

FormalSeries add(const FormalSeries& a, const FormalSeries& b)
{
    return dispatch2(a, b, a.gevrey() && b.gevrey(),
                     [](const auto& x, const auto& y) { return dense_add(x, y, false); });
}

FormalSeries sub(const FormalSeries& a, const FormalSeries& b)
{
    return dispatch2(a, b, a.gevrey() && b.gevrey(),
                     [](const auto& x, const auto& y) { return dense_add(x, y, true); });
}

FormalSeries mul(const FormalSeries& a, const FormalSeries& b)
{
    return dispatch2(a, b, a.gevrey() && b.gevrey(),
                     [](const auto& x, const auto& y) { return dense_mul(x, y); });
}


FormalSeries arith(ArithOp op, const FormalSeries& a, const FormalSeries& b)
{
    switch (op) {
    case ArithOp::add: return add(a, b);
    case ArithOp::sub: return sub(a, b);
    case ArithOp::mul: return mul(a, b);
    case ArithOp::scalar_mul: {
        if (a.variable() != b.variable())
            throw std::invalid_argument("series variable mismatch");
        if (!a.is_zero() && (a.min_order() != 0 || a.size() > 1)) {
            for (int k = a.min_order(); k <= a.truncation_order(); ++k)
                if (k != 0 && !a.coeff(k).is_zero())
                    throw std::invalid_argument("scalar_mul expects a constant first operand");
        }
        Scalar s = a.min_order() <= 0 && a.truncation_order() >= 0 ? a.coeff(0)
                                                                   : Scalar(0).to_mode(a.mode(), a.precision_bits());
        return scale(b, s);
    }
    }
    throw std::invalid_argument("unknown arithmetic op");
}

FormalSeries scale(const FormalSeries& a, const Scalar& s)
{
    if (s.mode() != a.mode())
        throw std::invalid_argument("scalar/series mode mismatch");
    return dispatch(a, a.gevrey(), [&](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::value_type;
        return dense_scale(x, scalar_as<T>(s));
    });
}

FormalSeries neg(const FormalSeries& a)
{
    return dispatch(a, a.gevrey(), [](auto x) {
        for (auto& v : x.c)
            v = -v;
        return x;
    });
}

FormalSeries power(const FormalSeries& a, unsigned n)
{
    if (n == 0)
        return FormalSeries::constant(a.variable(), Scalar(1).to_mode(a.mode(), a.precision_bits()),
                                      a.truncation_order());
    FormalSeries result = a;
    for (unsigned k = 1; k < n; ++k)
        result = mul(result, a);
    return result;
}

FormalSeries reciprocal(const FormalSeries& a)
{
    return dispatch(a, false, [](const auto& x) { return dense_reciprocal(x); });
}

FormalSeries divide(const FormalSeries& a, const FormalSeries& b) { return mul(a, reciprocal(b)); }

FormalSeries mul_var_power(const FormalSeries& a, int k)
{
    int delta = a.variable() == Variable::z ? -k : k;
    return dispatch(a, a.gevrey(), [&](auto x) {
        x.lo += delta;
        x.hi += delta;
        return x;
    });
}

FormalSeries derivative(const FormalSeries& a)
{
    const bool at_infinity = a.variable() == Variable::z;
    return dispatch(a, a.gevrey(), [&](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::value_type;
        Dense<T> r;
        if (at_infinity) {
            // c z^{-k} -> -k c z^{-k-1}
            r.lo = x.lo + 1;
            r.hi = x.hi + 1;
            r.c.reserve(x.c.size());
            for (std::size_t i = 0; i < x.c.size(); ++i) {
                int k = x.lo + static_cast<int>(i);
                r.c.push_back(x.c[i] * from_rational<T>(Rational(-k)));
            }
        } else {
            r.lo = std::max(x.lo, 1) - 1;
            r.hi = x.hi - 1;
            for (int k = r.lo + 1; k <= x.hi; ++k) {
                const T* p = x.at(k);
                r.c.push_back(p ? *p * from_rational<T>(Rational(k)) : zero_value<T>());
            }
            if (r.hi < r.lo) {
                r.lo = r.hi + 1;
                r.c.clear();
            }
        }
        return r;
    });
}

FormalSeries primitive(const FormalSeries& a)
{
    const bool at_infinity = a.variable() == Variable::z;
    return dispatch(a, a.gevrey(), [&](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::value_type;
        Dense<T> r;
        if (at_infinity) {
            // c z^{-k} -> c z^{1-k}/(1-k)
            r.lo = x.lo - 1;
            r.hi = x.hi - 1;
            for (std::size_t i = 0; i < x.c.size(); ++i) {
                int k = x.lo + static_cast<int>(i);
                if (k == 1) {
                    if (!x.c[i].is_zero())
                        throw std::domain_error("primitive: z^-1 term gives a logarithm");
                    r.c.push_back(zero_value<T>());
                    continue;
                }
                r.c.push_back(x.c[i] / from_rational<T>(Rational(1 - k)));
            }
        } else {
            r.lo = x.lo + 1;
            r.hi = x.hi + 1;
            for (std::size_t i = 0; i < x.c.size(); ++i) {
                int k = x.lo + static_cast<int>(i);
                r.c.push_back(x.c[i] / from_rational<T>(Rational(k + 1)));
            }
        }
        return r;
    });
}

FormalSeries parity_part(const FormalSeries& a, bool odd)
{
    return dispatch(a, a.gevrey(), [&](auto x) {
        for (std::size_t i = 0; i < x.c.size(); ++i) {
            int k = x.lo + static_cast<int>(i);
            bool is_odd = (k % 2) != 0;
            if (is_odd != odd)
                x.c[i] = zero_value<typename decltype(x)::value_type>();
        }
        return x;
    });
}

FormalSeries shift(const FormalSeries& phi, const Scalar& h)
{
    if (phi.variable() != Variable::z)
        throw std::invalid_argument("shift acts on series in z");
    if (h.mode() != phi.mode())
        throw std::invalid_argument("scalar/series mode mismatch");
    return dispatch(phi, phi.gevrey(), [&](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::value_type;
        Dense<T> r;
        r.lo = x.lo;
        r.hi = x.hi;
        if (x.c.empty())
            return x;
        r.c.assign(r.hi - r.lo + 1, zero_value<T>());
        const int span = r.hi - r.lo;
        const T hv = scalar_as<T>(h);
        std::vector<T> hp(span + 1, from_rational<T>(Rational(1)));
        for (int j = 1; j <= span; ++j)
            hp[j] = hp[j - 1] * hv;
        // (z+h)^{-k} = sum_j binom(-k, j) h^j z^{-k-j}
        for (std::size_t i = 0; i < x.c.size(); ++i) {
            if (x.c[i].is_zero())
                continue;
            const int k = x.lo + static_cast<int>(i);
            Rational binom(1);
            for (int j = 0; k + j <= r.hi; ++j) {
                if (j > 0) {
                    binom *= Rational(-k - (j - 1));
                    binom /= Rational(j);
                    if (binom == 0)
                        break;
                }
                r.c[k + j - r.lo] += x.c[i] * hp[j] * from_rational<T>(binom);
            }
        }
        return r;
    });
}

FormalSeries diff_D(const FormalSeries& phi)
{
    return sub(phi, shift(phi, Scalar(-1).to_mode(phi.mode(), phi.precision_bits())));
}

FormalSeries diff_P(const FormalSeries& phi)
{
    Scalar one = Scalar(1).to_mode(phi.mode(), phi.precision_bits());
    FormalSeries up = shift(phi, one);
    FormalSeries down = shift(phi, -one);
    return sub(add(up, down), scale(phi, Scalar(2).to_mode(phi.mode(), phi.precision_bits())));
}

namespace {

Scalar rational_scalar(const Rational& q, const FormalSeries& like)
{
    return Scalar(q).to_mode(like.mode(), like.precision_bits());
}

}  // namespace

FormalSeries compose_shifted(const FormalSeries& psi, const FormalSeries& chi)
{
    if (psi.variable() != Variable::z || chi.variable() != Variable::z)
        throw std::invalid_argument("compose_shifted acts on series in z");
    if (!chi.is_zero() && chi.min_order() < 0)
        throw std::invalid_argument("compose_shifted: chi has positive powers of z, composition diverges");
    if (psi.is_zero())
        return psi;
    const int n0 = psi.min_order();
    const int trunc = std::min(psi.truncation_order(), chi.truncation_order() + n0 + 1);
    // Split off the constant part of chi, which acts as a plain shift.
    Scalar c0 = chi.min_order() == 0 ? chi.coeff(0) : rational_scalar(0, chi);
    FormalSeries base = c0.is_zero() ? psi : shift(psi, c0);
    FormalSeries chi1 = chi.min_order() == 0 ? sub(chi, FormalSeries::constant(Variable::z, c0, chi.truncation_order()))
                                             : chi;
    if (chi1.is_zero())
        return base.truncated(trunc);
    FormalSeries result = base;
    FormalSeries deriv = base;
    FormalSeries chipow = FormalSeries::constant(Variable::z, rational_scalar(1, chi), chi1.truncation_order());
    Rational fact(1);
    for (int r = 1; n0 + 2 * r <= trunc; ++r) {
        deriv = derivative(deriv);
        if (deriv.is_zero())
            break;
        chipow = mul(chipow, chi1);
        fact *= r;
        result = add(result.truncated(trunc), scale(mul(deriv, chipow), rational_scalar(1 / fact, chi)).truncated(trunc));
    }
    return result.truncated(trunc);
}

FormalSeries lagrange_invert(const FormalSeries& chi)
{
    if (chi.variable() != Variable::z)
        throw std::invalid_argument("lagrange_invert acts on series in z");
    if (!chi.is_zero() && chi.min_order() < 0)
        throw std::invalid_argument("lagrange_invert: chi has positive powers of z");
    const int trunc = chi.truncation_order();
    FormalSeries result = FormalSeries::zero(Variable::z, trunc, chi.mode(), chi.precision_bits());
    if (chi.is_zero())
        return result;
    FormalSeries chipow = FormalSeries::constant(Variable::z, rational_scalar(1, chi), trunc);
    Rational fact(1);
    for (int k = 1; k <= trunc + 1; ++k) {
        chipow = mul(chipow, chi).truncated(trunc);
        fact *= k;
        FormalSeries term = chipow;
        for (int d = 0; d < k - 1 && !term.is_zero(); ++d)
            term = derivative(term).truncated(trunc);
        if (term.is_zero())
            continue;
        Rational sgn = (k % 2 == 0) ? Rational(1) : Rational(-1);
        result = add(result, scale(term, rational_scalar(sgn / fact, chi)).truncated(trunc));
    }
    return result.truncated(trunc);
}

FormalSeries convergent_geometric(int n, Mode mode, unsigned bits)
{
    FormalSeries::ExactCoeffs c(n + 1, CQ(Rational(1)));
    FormalSeries s(Variable::b, 0, std::move(c), n);
    return mode == Mode::exact ? s : s.to_float(bits);
}

FormalSeries convergent_exp(int n, Mode mode, unsigned bits)
{
    FormalSeries::ExactCoeffs c;
    Rational f(1);
    for (int k = 0; k <= n; ++k) {
        if (k > 0)
            f /= k;
        c.push_back(CQ(f));
    }
    FormalSeries s(Variable::b, 0, std::move(c), n);
    return mode == Mode::exact ? s : s.to_float(bits);
}

FormalSeries convergent_reciprocal(const Scalar& c, int n)
{
    if (c.is_zero())
        throw std::domain_error("1/(c+w) needs c != 0");
    // 1/(c+w) = sum_k (-1)^k w^k / c^{k+1}
    if (c.mode() == Mode::exact) {
        FormalSeries::ExactCoeffs v;
        CQ inv = CQ(Rational(1)) / c.exact();
        CQ term = inv;
        for (int k = 0; k <= n; ++k) {
            v.push_back(term);
            term *= -inv;
        }
        return FormalSeries(Variable::b, 0, std::move(v), n);
    }
    PrecisionScope scope(c.precision_bits());
    FormalSeries::FloatCoeffs v;
    CF inv = CF(Real(1), Real(0)) / c.to_cf();
    CF term = inv;
    for (int k = 0; k <= n; ++k) {
        v.push_back(term);
        term *= -inv;
    }
    return FormalSeries(Variable::b, 0, std::move(v), n, c.precision_bits());
}

FormalSeries substitute_convergent(const FormalSeries& C, const FormalSeries& psi)
{
    if (C.variable() == Variable::z)
        throw std::invalid_argument("substitute_convergent: outer function must be a power series");
    if (C.mode() != psi.mode())
        throw std::invalid_argument("series mode mismatch");
    if (!C.is_zero() && C.min_order() < 0)
        throw std::invalid_argument("substitute_convergent: outer series has negative powers");
    if (!psi.is_zero() && psi.min_order() < 1)
        throw std::invalid_argument("substitute_convergent: inner series needs min_order >= 1");
    const int v = psi.is_zero() ? psi.truncation_order() + 1 : psi.min_order();
    const long bound = static_cast<long>(C.truncation_order() + 1) * v - 1;
    const int trunc = static_cast<int>(std::min<long>(psi.truncation_order(), bound));
    FormalSeries result = FormalSeries::zero(psi.variable(), trunc, psi.mode(), psi.precision_bits());
    FormalSeries p = FormalSeries::constant(psi.variable(), rational_scalar(1, psi), trunc);
    for (int n = 0; n <= C.truncation_order(); ++n) {
        if (n > 0) {
            p = mul(p, psi).truncated(trunc);
            if (p.is_zero())
                break;
        }
        Scalar cn = C.coeff(n);
        if (!cn.is_zero())
            result = add(result, scale(p, cn));
    }
    return result.truncated(trunc);
}

namespace {

template <class T>
CF to_cf_value(const T& v)
{
    if constexpr (std::is_same_v<T, CQ>)
        return resurge::to_cf(v);
    else
        return CF(Real(v.re), Real(v.im));
}

}  // namespace

CF evaluate(const FormalSeries& a, const CF& x)
{
    CF acc(Real(0), Real(0));
    if (a.is_zero())
        return acc;
    const bool at_infinity = a.variable() == Variable::z;
    CF t = at_infinity ? CF(Real(1), Real(0)) / x : x;
    auto run = [&](const auto& c) {
        for (std::size_t i = c.size(); i-- > 0;) {
            acc *= t;
            acc += to_cf_value(c[i]);
        }
    };
    if (a.mode() == Mode::exact)
        run(a.exact());
    else
        run(a.floating());
    // acc = sum_i c_i t^i; multiply by t^{min_order}
    return acc * pow(t, a.min_order());
}

CF evaluate_derivative(const FormalSeries& a, const CF& x) { return evaluate(derivative(a), x); }

}  // namespace series
}  // namespace resurge
