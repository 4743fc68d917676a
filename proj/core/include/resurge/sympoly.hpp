#pragma once

#include "resurge/numeric.hpp"

#include <map>
#include <string>

namespace resurge {

// Commutative polynomial in named symbols with Gaussian-rational coefficients.
class SymPoly {
public:
    using Monomial = std::map<std::string, int>;  // symbol -> positive exponent

    SymPoly() = default;
    SymPoly(const CQ& c);
    SymPoly(const Rational& c) : SymPoly(CQ(c)) {}
    SymPoly(long c) : SymPoly(CQ(Rational(c))) {}
    SymPoly(int c) : SymPoly(CQ(Rational(c))) {}
    static SymPoly symbol(const std::string& name, int power = 1);

    const std::map<Monomial, CQ>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Highest total degree in `name`.
    int degree(const std::string& name) const;
    // Exact division by the symbol; throws std::domain_error if not divisible.
    SymPoly divide_by_symbol(const std::string& name) const;
    // Substitutes numeric values for every symbol (missing symbols throw).
    CF evaluate(const std::map<std::string, CF>& values) const;
    // Coefficient of a monomial.
    CQ coeff(const Monomial& m) const;

    SymPoly& operator+=(const SymPoly& o);
    SymPoly& operator-=(const SymPoly& o);
    SymPoly& operator*=(const SymPoly& o);
    SymPoly& operator*=(const CQ& c);
    friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
    friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
    friend SymPoly operator*(SymPoly a, const SymPoly& b) { return a *= b; }
    friend SymPoly operator*(SymPoly a, const CQ& c) { return a *= c; }
    friend SymPoly operator-(SymPoly a) { return a *= CQ(Rational(-1)); }
    friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const SymPoly& a, const SymPoly& b) { return !(a == b); }

    std::string to_string() const;

private:
    void add_term(const Monomial& m, const CQ& c);
    std::map<Monomial, CQ> terms_;
};

// The symbol used for 2 pi i in exact Stokes formulas.
inline const std::string kTwoPiI = "L";

}  // namespace resurge
