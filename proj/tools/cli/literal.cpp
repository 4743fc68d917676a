#include "literal.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

namespace resurge::cli {

namespace {

class Reader {
public:
    explicit Reader(std::string_view s) : s_(s) {}

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool done()
    {
        skip();
        return pos_ >= s_.size();
    }
    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c)
    {
        if (peek() != c)
            return false;
        ++pos_;
        return true;
    }
    bool accept_word(std::string_view w)
    {
        skip();
        if (s_.substr(pos_, w.size()) != w)
            return false;
        pos_ += w.size();
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("series literal '" + std::string(s_) + "': " + what + " at offset " +
                                    std::to_string(pos_));
    }

    // digits[.digits][e[+-]digits][/digits]
    std::string number()
    {
        skip();
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t b = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            return pos_ > b;
        };
        bool any = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            any = digits() || any;
        }
        if (!any)
            fail("expected a number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-'))
                ++pos_;
            if (!digits())
                fail("malformed exponent");
        }
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            if (!digits())
                fail("malformed denominator");
        }
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string parenthesized()
    {
        std::size_t close = s_.find(')', pos_);
        if (close == std::string_view::npos)
            fail("unbalanced parenthesis");
        std::string inner(s_.substr(pos_, close - pos_));
        pos_ = close + 1;
        return inner;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

FormalSeries parse_series_literal(std::string_view text, Variable var, int truncation)
{
    Reader r(text);
    if (r.done())
        r.fail("empty literal");
    std::map<int, CQ> terms;
    bool first = true;
    while (!r.done()) {
        int sign = 1;
        if (r.accept('+')) {
        } else if (r.accept('-')) {
            sign = -1;
        } else if (!first) {
            r.fail("expected + or -");
        }
        first = false;

        CQ c(Rational(1));
        bool have_coeff = false;
        if (r.peek() == '(') {
            r.accept('(');
            c = parse_complex_exact(r.parenthesized());
            have_coeff = true;
        } else if (std::isdigit(static_cast<unsigned char>(r.peek())) || r.peek() == '.') {
            c = CQ(parse_rational(r.number()));
            have_coeff = true;
        }
        if (have_coeff && !r.accept('*')) {
            // constant term
            if (!r.done() && r.peek() != '+' && r.peek() != '-')
                r.fail("expected '*' after coefficient");
            terms[0] += c * CQ(Rational(sign));
            continue;
        }
        bool z_var = false;
        if (r.accept_word("zeta") || r.accept('t') || r.accept('b'))
            z_var = false;
        else if (r.accept('z'))
            z_var = true;
        else
            r.fail("expected a variable");
        if (z_var != (var == Variable::z))
            r.fail(var == Variable::z ? "expected the variable z" : "expected a power-series variable (t, b, zeta)");
        int power = 1;
        if (r.accept('^')) {
            int s = 1;
            if (r.accept('-'))
                s = -1;
            else
                r.accept('+');
            std::string n = r.number();
            if (n.find_first_not_of("0123456789") != std::string::npos)
                r.fail("exponent must be an integer");
            power = s * std::stoi(n);
        }
        // z^p has order -p; power-series variables use the exponent directly
        int order = z_var ? -power : power;
        if (!z_var && order < 0)
            r.fail("negative exponent in a power series");
        terms[order] += c * CQ(Rational(sign));
    }

    std::erase_if(terms, [](const auto& kv) { return kv.second.is_zero(); });
    int top = truncation;
    for (auto& [k, v] : terms)
        top = std::max(top, k);
    if (terms.empty())
        return FormalSeries::zero(var, top);
    const int lo = terms.begin()->first;
    FormalSeries::ExactCoeffs coeffs(static_cast<std::size_t>(terms.rbegin()->first - lo + 1));
    for (auto& [k, v] : terms)
        coeffs[static_cast<std::size_t>(k - lo)] = v;
    return FormalSeries(var, lo, std::move(coeffs), top);
}

}  // namespace resurge::cli
