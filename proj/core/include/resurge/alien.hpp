#pragma once

#include "resurge/numeric.hpp"
#include "resurge/sympoly.hpp"

#include <map>
#include <string>
#include <vector>

namespace resurge {

// Letters of operator words, composed right to left (the rightmost letter acts first).
namespace letter {
inline constexpr char plus = '+';   // lateral continuation l+
inline constexpr char minus = '-';  // lateral continuation l-
inline constexpr char A = 'A';      // residuum extraction
inline constexpr char mu = 'u';     // forget the delta part
inline constexpr char S = 'S';      // A + l+ - l-
inline constexpr char D = 'D';      // l+ - l-
}  // namespace letter

// Formal linear combination of words with rational coefficients.
class OperatorPoly {
public:
    using Word = std::string;

    OperatorPoly() = default;
    static OperatorPoly identity();
    static OperatorPoly word(const Word& w, const Rational& c = Rational(1));

    const std::map<Word, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(const Word& w) const;

    // Applies mu S -> D, expands D into l+ - l- and drops zero terms.  S and A
    // are kept as letters.
    OperatorPoly reduced() const;
    // Also expands S into A + l+ - l-.
    OperatorPoly expanded() const;
    // Components of grade m (the number of letters other than mu).
    OperatorPoly grade_part(int m) const;
    static int grade(const Word& w);

    OperatorPoly& operator+=(const OperatorPoly& o);
    OperatorPoly& operator-=(const OperatorPoly& o);
    OperatorPoly& operator*=(const Rational& c);
    friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
    friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
    friend OperatorPoly operator*(OperatorPoly a, const Rational& c) { return a *= c; }
    // Composition (concatenation of words).
    friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b);
    friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const OperatorPoly& a, const OperatorPoly& b) { return !(a == b); }

    std::string to_string() const;

private:
    void add(const Word& w, const Rational& c);
    std::map<Word, Rational> terms_;
};

// Homogeneous components indexed by grade.
struct GradedSeries {
    std::map<int, OperatorPoly> components;
    int truncation = 0;
};

// p! q! / m! for a sign sequence with p pluses and q minuses.
Rational path_weight(int p, int q);

// sum over eps of p!q!/m! S l_{eps_{m-1}} ... l_{eps_1} mu, reduced.
OperatorPoly delta_by_paths(int m);
// Grade-m component of log(Id + sum_k S l+^{k-1} mu), reduced.
OperatorPoly delta_by_log(int m);
// S l+^{m-1} mu.
OperatorPoly delta_plus(int m);
// Coefficients of the products Delta+_{m_1} ... Delta+_{m_r} in the grade-m
// component of the logarithm: (-1)^{r-1}/r for every composition.
std::map<std::vector<int>, Rational> log_in_delta_plus(int m);

struct IdentityCheck {
    bool ok = true;
    std::string witness;  // first differing word and both coefficients
};

// B_{m-1} against sum_eps p!q!/m! l_{eps_{m-1}} ... l_{eps_1}.
IdentityCheck verify_B_identity(int m);
// delta_by_paths(m) == delta_by_log(m).
IdentityCheck verify_delta_identity(int m);
// exp(sum_{m<=M} delta_by_log(m)) reproduces Id + sum_{m<=M} delta_plus(m) up to grade M.
IdentityCheck verify_exp_log(int M);

GradedSeries graded_log(const GradedSeries& x);  // x has no grade-0 part beyond Id
GradedSeries graded_exp(const GradedSeries& x);  // x has no grade-0 part

// ---------------------------------------------------------------- flows and moulds

struct FlowCheck {
    bool ok = true;
    std::map<int, SymPoly> P_flow;   // from the time-1 map of the vector field
    std::map<int, SymPoly> P_mould;  // from the mould formula
    std::map<int, SymPoly> Q_mould;
    std::string witness;
};

// Keys of A give the sides.  Positive side: D = -2 pi i sum A_m w^{m+1} d/dw with
// w = e^{-2 pi i z}; negative side: D = +2 pi i sum A_{-m} w^{m+1} d/dw with w = e^{2 pi i z}.
FlowCheck stokes_flow_check(const std::map<int, SymPoly>& A, int M);

// -A_{omega_1} ... A_{omega_r} Gamma_{omega_1 ... omega_r}, omega_j = 2 pi i m_j.
// Missing A entries default to the symbol "A<m>" (e.g. "A1", "A-2").
SymPoly bridge_iteration_mould(const std::vector<int>& ms, const std::map<int, SymPoly>& A = {});

}  // namespace resurge
