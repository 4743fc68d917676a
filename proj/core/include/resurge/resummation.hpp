#pragma once

#include "resurge/borel.hpp"
#include "resurge/solvers.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace resurge {

// Thrown when a computation would exceed its evaluation or precision budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- Pade

struct PadePole {
    CF location;
    CF residue;
    bool spurious = false;
};

// P(zeta)/Q(zeta) with Q(0) = 1, coefficients in ascending powers.
struct PadeModel {
    std::vector<CF> numerator;
    std::vector<CF> denominator;
    std::vector<PadePole> poles;  // sorted by modulus
    std::vector<CF> zeros;
    int source_order = 0;
    int L = 0;
    int M = 0;
    bool fell_back = false;  // degrees were lowered after a singular Hankel system
    unsigned precision_bits = 0;

    // Non-spurious poles.
    std::vector<PadePole> singularities() const;
    CF evaluate(const CF& zeta) const;
};

// Roots of sum c_k x^k (Aberth iteration, Newton polish) at the current precision.
std::vector<CF> polynomial_roots(const std::vector<CF>& coeffs);

PadeModel pade_continue(const Minor& m, int L, int M, unsigned bits = 128);

struct MinorValue {
    CF value;
    std::string method;  // "taylor" or "pade"
};

// Taylor inside 0.7 radius_hint (radius estimated from growth when absent),
// diagonal Pade beyond.
MinorValue eval_minor(const Minor& m, const CF& zeta, unsigned bits = 128);
// Throws std::domain_error within d_min of a non-spurious pole.
MinorValue eval_minor(const PadeModel& p, const CF& zeta, double d_min = 1e-6);

// ---------------------------------------------------------------- Laplace

struct EvalPlan {
    double theta = 0;         // ray direction
    double radius = 0;        // truncation radius R; 0 picks it from tol and growth
    int nodes = 24;           // Gauss-Legendre nodes per panel
    double tol = 1e-20;
    unsigned bits = 128;
    double margin = 0.05;     // minimal distance of theta from pi/2 + pi Z
    double pole_distance = 0.05;
    long max_evaluations = 2000000;
};

struct LaplaceResult {
    CF value;
    double error_estimate = 0;
    double radius = 0;
    long evaluations = 0;
    std::string method;
};

// Evaluates a minor along a ray: Taylor inside 0.7 radius, Pade beyond.
class MinorEvaluator {
public:
    MinorEvaluator(const Minor& m, unsigned bits);
    CF operator()(const CF& zeta);
    bool used_pade() const { return used_pade_; }
    // Throws if a non-spurious Pade pole lies within d of the segment [0, R e^{i theta}].
    void check_ray(double theta, double R, double d);
    double taylor_radius() const { return taylor_radius_; }
    // Estimated model error at zeta: Taylor remainder, or the distance to the
    // next lower diagonal Pade approximant.
    double error_bound(const CF& zeta);

private:
    const PadeModel& pade();

    std::vector<CF> coeffs_;
    Minor minor_;
    double taylor_radius_ = 0;
    unsigned bits_;
    std::optional<PadeModel> pade_;
    std::optional<PadeModel> pade_lower_;
    bool used_pade_ = false;
};

LaplaceResult laplace_sum(const SRSingularity& s, const EvalPlan& plan, const CF& z);
// delta[k] multiplies z^k.
LaplaceResult laplace_sum(const PadeModel& p, const std::vector<Scalar>& delta, const EvalPlan& plan,
                          const CF& z);

// ---------------------------------------------------------------- Fatou coordinates

enum class Side { plus, minus };

struct FatouOptions {
    double tol = 1e-30;
    unsigned bits = 128;
    int asymptotic_order = 30;   // truncation of the formal psi used for the orbit tail
    double tail_radius = 60;     // the tail switches to the formal psi beyond this |w|
    double min_abs = 0.5;        // a is evaluated only for |w + offset| above this
    long max_terms = 100000;
    int max_newton = 100;
};

struct FatouValue {
    CF psi;
    CF v;
    CF u;
    long terms = 0;
    double error_estimate = 0;
};

class FatouCoordinates {
public:
    FatouCoordinates(const GermSpec& g, FatouOptions opt = {});

    CF f(const CF& z) const;
    CF f_inverse(const CF& z) const;
    CF psi(const CF& z, Side side, long* terms = nullptr) const;
    CF v(const CF& z, Side side) const { return z + psi(z, side); }
    CF u(const CF& z, Side side) const;
    // Formal psi truncated at asymptotic_order, and its derivative.
    CF psi_formal(const CF& z) const;
    CF psi_formal_derivative(const CF& z) const;
    const FatouOptions& options() const { return opt_; }

private:
    CF a_value(const CF& w) const;
    CF a_derivative(const CF& w) const;
    CF orbit(const CF& z, Side side, long* terms, CF* derivative) const;

    FatouOptions opt_;
    FormalSeries a_;
    FormalSeries a_prime_;
    CF offset_;
    FormalSeries psi_formal_;
    FormalSeries psi_formal_prime_;
};

FatouValue fatou_coordinates(const GermSpec& g, const CF& z, Side side, const FatouOptions& opt = {});

// ---------------------------------------------------------------- Henon manifolds

struct ManifoldPoint {
    CF x;
    CF y;  // x(z) - x(z-1)
    double error_estimate = 0;
    int steps = 0;
};

class HenonManifold {
public:
    // x0-hat is built from the formal series truncated at `order`.
    HenonManifold(int order, unsigned bits);
    ManifoldPoint evaluate(Side side, const CF& z, const EvalPlan& plan) const;
    // Borel sum of x0 in direction 0 (plus) or pi (minus).
    LaplaceResult seed(Side side, const CF& z, const EvalPlan& plan) const;
    double seed_abscissa = 30;

private:
    SRSingularity x0_hat_;
    unsigned bits_;
};

ManifoldPoint henon_manifold(Side side, const CF& z, const EvalPlan& plan, int order = 200);

}  // namespace resurge
