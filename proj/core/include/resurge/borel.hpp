#pragma once

#include "resurge/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace resurge {

// Regular germ in the Borel plane.
struct Minor {
    FormalSeries series;  // variable zeta, min_order >= 0
    std::optional<double> radius_hint;

    Minor();
    explicit Minor(FormalSeries s, std::optional<double> radius = std::nullopt);
};

// delta[k] multiplies delta^(k) (the Borel image of z^k); trailing zeros trimmed.
struct SRSingularity {
    std::vector<Scalar> delta;
    Minor minor;

    Mode mode() const { return minor.series.mode(); }
    unsigned precision_bits() const { return minor.series.precision_bits(); }
    int truncation_order() const { return minor.series.truncation_order(); }
};

SRSingularity borel(const FormalSeries& phi);
FormalSeries inverse_borel(const SRSingularity& s);
// Inverse Borel of a pure minor.
FormalSeries inverse_borel(const Minor& m);
SRSingularity convolve(const SRSingularity& a, const SRSingularity& b);
Minor convolve(const Minor& a, const Minor& b);

enum class EntireKind { exp_minus_one, four_sinh_sq, minus_zeta, polynomial };

struct EntireFunction {
    EntireKind kind = EntireKind::minus_zeta;
    FormalSeries poly;  // variable zeta, used for kind == polynomial

    // Accepts "exp(-zeta)-1", "4sinh^2(zeta/2)", "-zeta" (a few spellings each).
    static EntireFunction named(std::string_view name);
    static EntireFunction polynomial(FormalSeries p);
    // Taylor coefficients to order n.
    FormalSeries taylor(int n, Mode mode = Mode::exact, unsigned bits = 0) const;
};

SRSingularity mult_by_entire(const SRSingularity& s, const EntireFunction& alpha);

// |c_n| <= K rho^n envelope of the minor's coefficients (upper hull fit).
struct GrowthEstimate {
    double K = 0;
    double rho = 0;
    int samples = 0;
};
GrowthEstimate estimate_growth(const Minor& m);

// ---------------------------------------------------------------- singularity fit

struct SingularitySample {
    CF zeta;
    CF value;
    // Value at the same point reached after one clockwise turn around omega.
    std::optional<CF> other_branch;
};

struct ModelDegrees {
    int pole_order = 1;
    int variation_order = 1;
    int regular_order = 1;
};

// Model around omega, xi = zeta - omega:
//   (1/2 pi i) sum_{p<P} polar[p] p! / xi^{p+1}
//     + variation(xi) log(xi) / (2 pi i) + sum_{j<R} regular[j] xi^j.
// The residuum is polar[0].
struct SimpleSingularityFit {
    CF omega;
    Scalar residuum;
    std::vector<CF> polar;
    Minor variation;
    std::vector<CF> regular;
    double regular_norm = 0;  // rms residual of the full model on the samples
    double condition = 0;
    unsigned precision_bits = 0;
};

// Refuses (std::runtime_error) when a normal-equation condition estimate
// exceeds cond_limit.
SimpleSingularityFit fit_simple_singularity(const std::vector<SingularitySample>& samples, const CF& omega,
                                            ModelDegrees degrees, unsigned bits = 128,
                                            double cond_limit = 1e10);

// Model value at zeta on the principal log branch.
CF evaluate_model(const SimpleSingularityFit& fit, const CF& zeta);

}  // namespace resurge
