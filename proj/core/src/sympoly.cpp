#include "resurge/sympoly.hpp"

#include <stdexcept>

namespace resurge {

SymPoly::SymPoly(const CQ& c)
{
    if (!c.is_zero())
        terms_[Monomial{}] = c;
}

SymPoly SymPoly::symbol(const std::string& name, int power)
{
    if (power < 0)
        throw std::invalid_argument("SymPoly: negative power");
    SymPoly p;
    Monomial m;
    if (power > 0)
        m[name] = power;
    p.terms_[m] = CQ(Rational(1));
    return p;
}

void SymPoly::add_term(const Monomial& m, const CQ& c)
{
    if (c.is_zero())
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        terms_.erase(it);
}

int SymPoly::degree(const std::string& name) const
{
    int d = 0;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(name);
        if (it != m.end())
            d = std::max(d, it->second);
    }
    return d;
}

SymPoly SymPoly::divide_by_symbol(const std::string& name) const
{
    SymPoly out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(name);
        if (it == m.end())
            throw std::domain_error("SymPoly: not divisible by " + name);
        Monomial r = m;
        if (--r[name] == 0)
            r.erase(name);
        out.terms_[r] = c;
    }
    return out;
}

CF SymPoly::evaluate(const std::map<std::string, CF>& values) const
{
    CF acc(Real(0), Real(0));
    for (const auto& [m, c] : terms_) {
        CF t = to_cf(c);
        for (const auto& [s, e] : m) {
            auto it = values.find(s);
            if (it == values.end())
                throw std::invalid_argument("SymPoly: no value for symbol " + s);
            t *= pow(it->second, e);
        }
        acc += t;
    }
    return acc;
}

CQ SymPoly::coeff(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? CQ() : it->second;
}

SymPoly& SymPoly::operator+=(const SymPoly& o)
{
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o)
{
    for (const auto& [m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

SymPoly& SymPoly::operator*=(const SymPoly& o)
{
    SymPoly out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma;
            for (const auto& [s, e] : mb)
                m[s] += e;
            out.add_term(m, ca * cb);
        }
    terms_ = std::move(out.terms_);
    return *this;
}

SymPoly& SymPoly::operator*=(const CQ& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_)
        v *= c;
    return *this;
}

std::string SymPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        std::string coef = resurge::to_string(c);
        bool complex = !c.re.is_zero() && !c.im.is_zero();
        if (complex)
            coef = "(" + coef + ")";
        std::string mono;
        for (const auto& [s, e] : m)
            mono += (mono.empty() ? "" : "*") + s + (e > 1 ? "^" + std::to_string(e) : "");
        std::string term;
        if (mono.empty())
            term = coef;
        else if (c == CQ(Rational(1)))
            term = mono;
        else if (c == CQ(Rational(-1)))
            term = "-" + mono;
        else
            term = coef + "*" + mono;
        if (!out.empty())
            out += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        else
            out = term;
    }
    return out;
}

}  // namespace resurge
