#pragma once

#include "resurge/borel.hpp"
#include "resurge/series.hpp"

#include <optional>
#include <vector>

namespace resurge {

// f(z) = z + 1 + a(z + offset).  The offset keeps conjugated germs exact
// without re-expanding a.
struct GermSpec {
    FormalSeries a;
    Scalar offset;
    std::optional<double> radius_hint;  // a(w) is evaluated for |w| > radius_hint

    GermSpec() = default;
    explicit GermSpec(FormalSeries a_, Scalar offset_ = Scalar(0), std::optional<double> radius = std::nullopt);
    // a(z + offset) as a series in z (same truncation as a).
    FormalSeries shifted_a() const;
};

struct LinearSolution {
    SRSingularity borel;
    FormalSeries series;
};

// phi(z+1) - phi(z) = a(z), a in z^-2 C[[z^-1]].
LinearSolution solve_linear_first(const FormalSeries& a);
// phi(z+1) - 2 phi(z) + phi(z-1) = b(z), b in z^-3 C[[z^-1]].
LinearSolution solve_linear_second(const FormalSeries& b);

struct AbelSolution {
    FormalSeries phi;                // u = Id + phi conjugates z+1 to f
    FormalSeries psi;                // v = Id + psi, inverse of u
    std::vector<Minor> stages;       // stages[n-1] is the epsilon^n part of borel(phi)
    Minor phi_hat;                   // sum of the stages
};

// Solves phi(z+1) - phi(z) = a(z + phi(z)) with a taken from the germ
// (a(z + offset) expanded); N is the z-truncation of phi.
AbelSolution solve_abel(const GermSpec& g, int N);

// x0 with P x0 = -x0^2, even, exact; truncation N.
FormalSeries solve_henon(int N);
// Same recursion in floating point.
FormalSeries solve_henon_float(int N, unsigned bits);

struct HenonLinearized {
    FormalSeries phi1;
    FormalSeries phi2;
};
// phi1 = d x0/dz and the even phi2 = z^4/84 + ...; both truncated at N.
HenonLinearized solve_henon_linearized(int N);

// Finite-difference Wronskian phi1(z-1) phi2(z) - phi2(z-1) phi1(z).
FormalSeries wronskian(const FormalSeries& phi1, const FormalSeries& phi2);

// x(z,b) = sum_n b^n x_n(z) with x_0 = henon, x_1 = phi2, x_n (n >= 2) even
// with no z^4 term.  Every x_n is truncated at Nz.
TwoVarSeries formal_integral(int Nb, int Nz);
// Coefficients of P x + x^2 by powers of b, truncated at Nz.
std::vector<FormalSeries> formal_integral_residual(const TwoVarSeries& x);

struct CohomologicalSolution {
    std::vector<FormalSeries> psi;  // psi[n-1] = Gamma_{n-1} d^{2n-2} beta / dt^{2n-2}
    std::vector<Rational> gamma;    // Gamma_0, Gamma_1, ...
};

// -1 + X^2/(4 sinh^2(X/2)) = sum_{n>=0} Gamma_n X^{2n+2}.
std::vector<Rational> cohomological_gamma(int count);
// Taylor coefficients of X^2/(4 sin^2(X/2)) up to X^order.
std::vector<Rational> sin_gamma_coefficients(int order);
// beta is a series in the b slot standing for t.
CohomologicalSolution solve_cohomological(const FormalSeries& beta, int N);
// Gamma-hat(xi) = sum_{n<terms} Gamma_n xi^{2n+1}/(2n+1)!
CF gamma_hat(const CF& xi, int terms);
// sum over nu = 2 pi i m, 0 < |m| <= M, of nu^-2 exp(xi/nu).
CF gamma_hat_nu_sum(const CF& xi, long M);

}  // namespace resurge
