#pragma once

#include "resurge/resummation.hpp"
#include "resurge/sympoly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resurge {

// Maps are keyed by m for omega = 2 pi i m.

struct StokesEntry {
    CF value;
    double error = 0;
    std::string method;
};

struct StokesReport {
    std::map<int, StokesEntry> A;
    std::map<int, StokesEntry> B;
    std::map<int, StokesEntry> Q;
    std::map<int, StokesEntry> P;
    std::optional<StokesEntry> theta;
    std::optional<StokesEntry> mu;
    std::map<std::string, double> diagnostics;
};

// ---------------------------------------------------------------- linear equation

struct LinearStokes {
    std::map<int, SymPoly> exact;  // polynomial in L = 2 pi i
    std::map<int, CF> value;
    std::vector<CF> sample_points;
    std::vector<CF> measured;  // phi+ - phi- at the sample points
    double max_relative_error = 0;  // measured phi+ - phi- against the exponential sum
};

// A_{2 pi i m} = -2 pi i a-hat(2 pi i m), 1 <= m <= M, for a convergent a read
// as the polynomial formed by its known coefficients.  The check compares
// phi+ - phi- with sum_{m<=M} A_m e^{-2 pi i m z} at `samples` points on Im z = im_z.
LinearStokes linear_stokes(const FormalSeries& a, int M, unsigned bits = 128, double im_z = -3, int samples = 8);

// ---------------------------------------------------------------- horn maps

struct HornMapOptions {
    int samples = 256;
    double max_periodicity = 1e-10;
    FatouOptions fatou;
    bool upper = true;  // also sample Im z = +s
};

struct HornMap {
    std::map<int, CF> B;  // m > 0 from the lower line, m < 0 from the upper line
    std::map<int, double> error;
    double periodicity_residual = 0;
    double constant_term = 0;  // |B_0|, zero up to the Fatou tolerance
    double s = 0;
    int samples = 0;
};

HornMap horn_map_coeffs(const GermSpec& g, double s, int M, const HornMapOptions& opt = {});

// ---------------------------------------------------------------- moulds

// omega_1 (omega_1 + omega_2) ... (omega_1 + ... + omega_{r-1}).
CF mould_gamma(const std::vector<CF>& omegas);
// Same for omega_j = 2 pi i m_j, as an exact polynomial in L.
SymPoly mould_gamma_exact(const std::vector<int>& ms);

// A keyed by m (both signs allowed).  Returns Q and P for every |m| <= M on
// the sides present in A.
struct Passage {
    std::map<int, SymPoly> Q;
    std::map<int, SymPoly> P;
};
Passage invariants_to_passage(const std::map<int, SymPoly>& A, int M);

struct PassageF {
    std::map<int, CF> Q;
    std::map<int, CF> P;
};
PassageF invariants_to_passage(const std::map<int, CF>& A, int M);

// B_m = Q_{2 pi i m} and B_{-m} = P_{-2 pi i m}; triangular solve for A.
std::map<int, SymPoly> passage_to_invariants(const std::map<int, SymPoly>& B, int M);
std::map<int, CF> passage_to_invariants(const std::map<int, CF>& B, int M);

// Power series in w with symbolic coefficients; index k holds w^k.
using WSeries = std::vector<SymPoly>;
WSeries wseries_mul(const WSeries& a, const WSeries& b, int M);
WSeries wseries_exp(const WSeries& x, int M);  // x[0] must vanish
WSeries wseries_log(const WSeries& y, int M);  // y[0] must be 1
// (Id + sum X_m e_omega) o (Id + sum Y_m e_omega) - Id with omega = 2 pi i s m,
// as a series in w = e^{-2 pi i s z}.
WSeries compose_shift_maps(const WSeries& X, const WSeries& Y, int s, int M);

// True when Id + sum Q e_omega and Id + sum P e_omega are mutually inverse to
// order M (sides taken from the keys present).
bool passage_maps_inverse(const Passage& p, int M, std::string* witness = nullptr);

// ---------------------------------------------------------------- Henon constants

struct Richardson {
    double value = 0;
    double error = 0;
    std::vector<double> stages;  // successive extrapolation stages at the last point
};

// Neville extrapolation to x = 0 of values f(x_i) assumed polynomial in x.
Richardson richardson(const std::vector<Real>& x, const std::vector<Real>& f, int depth);

enum class HenonMethod { large_order, splitting_fit };

struct HenonParams {
    // large_order
    int order = 200;        // number of even coefficients K (x0 known to z^-2K)
    int depth = 8;
    double convergence = 2e-3;
    unsigned bits = 256;
    // splitting_fit
    double y0 = 10;
    int points = 8;
    double re_min = 10;
    double re_max = 11;
    int basis_order = 20;
    double max_residual = 1e-3;
    bool error_from_second_height = true;
};

struct HenonConstants {
    std::optional<StokesEntry> theta;
    std::optional<StokesEntry> mu;
    double fit_residual = 0;
    double contamination = 0;
    unsigned precision_bits = 0;
    std::vector<double> stages;
};

HenonConstants henon_constants(HenonMethod method, const HenonParams& params = {});

// ---------------------------------------------------------------- Bridge residues

struct BridgeResidues {
    CF A_plus;   // A_{2 pi i}
    CF A_minus;  // A_{-2 pi i}
    double error_plus = 0;
    double error_minus = 0;
    int terms = 0;
};

// Large-order estimate from the Taylor coefficients of phi-hat, whose nearest
// singularities are at +-2 pi i.
BridgeResidues bridge_residues(const Minor& phi_hat, int depth = 8, double convergence = 2e-3,
                               unsigned bits = 256);

// Leading-order angle (64 pi / 9) |Theta| eps^-7 e^{-2 pi^2 / eps}.
double splitting_angle(double eps, double abs_theta);

}  // namespace resurge
