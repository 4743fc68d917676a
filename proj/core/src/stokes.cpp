#include "resurge/stokes.hpp"

#include "resurge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace resurge {

namespace {

CF czero() { return CF(Real(0), Real(0)); }
CF cone() { return CF(Real(1), Real(0)); }

// a read as a polynomial in 1/z: coefficients past its truncation are zero.
FormalSeries padded(const FormalSeries& a, int N)
{
    if (a.truncation_order() >= N)
        return a;
    if (a.mode() == Mode::exact) {
        FormalSeries::ExactCoeffs c;
        for (int k = 2; k <= N; ++k)
            c.push_back(k <= a.truncation_order() ? a.coeff_exact(k) : CQ());
        return FormalSeries(Variable::z, 2, std::move(c), N);
    }
    PrecisionScope scope(a.precision_bits());
    FormalSeries::FloatCoeffs c;
    for (int k = 2; k <= N; ++k)
        c.push_back(k <= a.truncation_order() ? a.coeff_cf(k) : czero());
    return FormalSeries(Variable::z, 2, std::move(c), N, a.precision_bits());
}

void for_each_composition(int n, std::vector<int>& parts, const std::function<void(const std::vector<int>&)>& f)
{
    if (n == 0) {
        f(parts);
        return;
    }
    for (int first = 1; first <= n; ++first) {
        parts.push_back(first);
        for_each_composition(n - first, parts, f);
        parts.pop_back();
    }
}

SymPoly scaled(const SymPoly& x, const Rational& q) { return x * CQ(q); }
CF scaled(const CF& x, const Rational& q) { return x * to_real(q); }
bool is_zero_value(const SymPoly& x) { return x.is_zero(); }
bool is_zero_value(const CF& x) { return x.is_zero(); }

SymPoly gamma_of(const std::vector<int>& ms, const SymPoly*) { return mould_gamma_exact(ms); }
CF gamma_of(const std::vector<int>& ms, const CF*)
{
    std::vector<CF> w;
    for (int m : ms)
        w.push_back(two_pi_i() * Real(m));
    return mould_gamma(w);
}

template <class T>
T zero_value()
{
    if constexpr (std::is_same_v<T, CF>)
        return czero();
    else
        return T();
}

// Sum over compositions of n (sign s) with r >= rmin parts of
// coef(r) Gamma A...A, where coef(r) = sign_r / r!.
template <class T>
T composition_sum(const std::map<int, T>& A, int n, int s, int rmin, bool alternate)
{
    T total = zero_value<T>();
    std::vector<int> parts;
    for_each_composition(n, parts, [&](const std::vector<int>& p) {
        const int r = static_cast<int>(p.size());
        if (r < rmin)
            return;
        T prod = zero_value<T>();
        bool first = true;
        std::vector<int> signed_parts;
        for (int m : p) {
            auto it = A.find(s * m);
            if (it == A.end() || is_zero_value(it->second))
                return;
            prod = first ? it->second : prod * it->second;
            first = false;
            signed_parts.push_back(s * m);
        }
        Rational c = Rational(1) / factorial_q(static_cast<unsigned>(r));
        if (alternate && r % 2 == 0)
            c = -c;
        total += scaled(gamma_of(signed_parts, static_cast<const T*>(nullptr)) * prod, c);
    });
    return total;
}

template <class T>
bool side_active(const std::map<int, T>& m, int s)
{
    for (const auto& [k, v] : m)
        if (k * s > 0)
            return true;
    return false;
}

template <class T>
std::pair<std::map<int, T>, std::map<int, T>> to_passage(const std::map<int, T>& A, int M)
{
    std::map<int, T> Q, P;
    for (int s : {1, -1}) {
        if (!side_active(A, s))
            continue;
        for (int n = 1; n <= M; ++n) {
            Q[s * n] = -composition_sum(A, n, s, 1, false);
            P[s * n] = composition_sum(A, n, s, 1, true);
        }
    }
    return {Q, P};
}

template <class T>
std::map<int, T> from_passage(const std::map<int, T>& B, int M)
{
    std::map<int, T> A;
    for (int s : {1, -1}) {
        if (!side_active(B, s))
            continue;
        for (int n = 1; n <= M; ++n) {
            auto it = B.find(s * n);
            T b = it == B.end() ? zero_value<T>() : it->second;
            if (s > 0)
                A[n] = -b - composition_sum(A, n, 1, 2, false);  // B_m = Q_{2 pi i m}
            else
                A[-n] = b - composition_sum(A, n, -1, 2, true);  // B_{-m} = P_{-2 pi i m}
        }
    }
    return A;
}

Real richardson_value(const std::vector<Real>& x, const std::vector<Real>& f, std::vector<Real>* stages)
{
    // Neville tableau evaluated at 0 on the given points.
    const std::size_t n = x.size();
    std::vector<Real> p = f;
    if (stages)
        stages->push_back(f.back());
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = n - 1; i >= k; --i) {
            p[i] = (x[i] * p[i - 1] - x[i - k] * p[i]) / (x[i] - x[i - k]);
            if (i == k)
                break;
        }
        if (stages)
            stages->push_back(p[n - 1]);
    }
    return p[n - 1];
}

}  // namespace

// ---------------------------------------------------------------- linear equation

LinearStokes linear_stokes(const FormalSeries& a, int M, unsigned bits, double im_z, int samples)
{
    if (a.variable() != Variable::z)
        throw std::invalid_argument("linear_stokes: a must be a z-series");
    if (!a.is_zero() && a.min_order() < 2)
        throw std::invalid_argument("linear_stokes: a must start at z^-2");
    if (M < 1 || samples < 1)
        throw std::invalid_argument("linear_stokes: M and samples must be positive");
    if (im_z >= 0)
        throw std::invalid_argument("linear_stokes: sample line must lie in the lower half-plane");

    LinearStokes out;
    PrecisionScope scope(bits);
    const int top = a.is_zero() ? 1 : a.truncation_order();
    const int first = a.is_zero() ? 2 : std::max(2, a.min_order());
    auto weight = [](int m, int n) {
        return Rational(-boost::multiprecision::pow(Integer(m), static_cast<unsigned>(n - 1))) /
               factorial_q(static_cast<unsigned>(n - 1));
    };
    // A_{2 pi i m} = -sum_n a_n m^{n-1} L^n / (n-1)!
    auto value = [&](int m) {
        CF v = czero();
        for (int n = first; n <= top; ++n)
            v += a.coeff_cf(n) * pow(two_pi_i(), n) * to_real(weight(m, n));
        return v;
    };
    for (int m = 1; m <= M; ++m) {
        if (a.mode() == Mode::exact) {
            SymPoly e;
            for (int n = first; n <= top; ++n) {
                CQ c = a.coeff_exact(n);
                if (!c.is_zero())
                    e += SymPoly::symbol(kTwoPiI, n) * (c * CQ(weight(m, n)));
            }
            out.exact[m] = e;
        }
        CF v = value(m);
        if (!std::isfinite(to_double(v.re)) || !std::isfinite(to_double(v.im)))
            throw std::overflow_error("linear_stokes: A value overflows");
        out.value[m] = v;
    }

    // phi+ = -sum_{k<K} a(z+k) + phi~(z+K), phi- = sum_{k=1..K} a(z-k) + phi~(z-K)
    const int K = 200;
    const int N = std::max(30, top + 10);
    FormalSeries ap = padded(a.is_zero() ? FormalSeries::zero(Variable::z, N) : a, N);
    FormalSeries phi = solve_linear_first(ap).series;
    const int check_terms = std::max(M, 12);
    std::vector<CF> A_check;
    for (int m = 1; m <= check_terms; ++m)
        A_check.push_back(value(m));
    for (int j = 0; j < samples; ++j) {
        CF z(Real(j) / Real(samples), Real(im_z));
        CF plus = series::evaluate(phi, z + CF(Real(K), Real(0)));
        for (int k = 0; k < K; ++k)
            plus -= series::evaluate(ap, z + CF(Real(k), Real(0)));
        CF minus = series::evaluate(phi, z - CF(Real(K), Real(0)));
        for (int k = 1; k <= K; ++k)
            minus += series::evaluate(ap, z - CF(Real(k), Real(0)));
        CF predicted = czero();
        Real scale(0);
        for (int m = 1; m <= check_terms; ++m) {
            CF t = A_check[static_cast<std::size_t>(m - 1)] * exp(CF(Real(0), -2 * pi() * m) * z);
            predicted += t;
            scale = std::max(scale, abs(t));
        }
        Real err = abs(plus - minus - predicted);
        double rel = to_double(scale > 0 ? err / scale : err);
        out.max_relative_error = std::max(out.max_relative_error, rel);
        out.sample_points.push_back(z);
        out.measured.push_back(plus - minus);
    }
    return out;
}

// ---------------------------------------------------------------- horn maps

HornMap horn_map_coeffs(const GermSpec& g, double s, int M, const HornMapOptions& opt)
{
    if (s <= 0)
        throw std::invalid_argument("horn_map_coeffs: s must be positive");
    if (M < 1)
        throw std::invalid_argument("horn_map_coeffs: M must be positive");
    HornMap out;
    out.s = s;
    out.samples = std::max(opt.samples, 4 * M);
    const int n = out.samples;
    const int Mr = std::min(M, n / 2);

    if (g.a.is_zero()) {
        for (int m = 1; m <= Mr; ++m) {
            out.B[m] = CF(Real(0), Real(0));
            out.error[m] = 0;
            if (opt.upper) {
                out.B[-m] = CF(Real(0), Real(0));
                out.error[-m] = 0;
            }
        }
        return out;
    }

    FatouCoordinates fc(g, opt.fatou);
    PrecisionScope scope(opt.fatou.bits);
    auto chi = [&](const CF& z) { return fc.v(fc.u(z, Side::minus), Side::plus) - z; };

    std::vector<int> lines = {-1};
    if (opt.upper)
        lines.push_back(1);
    for (int line : lines) {
        const Real y = Real(line) * Real(s);
        std::vector<CF> values;
        for (int j = 0; j < n; ++j)
            values.push_back(chi(CF(Real(j) / Real(n), y)));
        CF again = chi(CF(Real(1), y));
        double periodic = to_double(abs(again - values[0]));
        out.periodicity_residual = std::max(out.periodicity_residual, periodic);
        if (periodic > opt.max_periodicity)
            throw std::runtime_error("horn_map_coeffs: periodicity residual " + std::to_string(periodic) +
                                     " exceeds the limit");
        const double delta = opt.fatou.tol + periodic;
        for (int m = 0; m <= Mr; ++m) {
            // lower line: B_m = mean chi e^{2 pi i m z}; upper: B_{-m} = mean chi e^{-2 pi i m z}
            const int key = line < 0 ? m : -m;
            CF acc = czero();
            for (int j = 0; j < n; ++j) {
                CF z(Real(j) / Real(n), y);
                acc += values[static_cast<std::size_t>(j)] * exp(CF(Real(0), 2 * pi() * key) * z);
            }
            acc /= Real(n);
            if (m == 0) {
                out.constant_term = std::max(out.constant_term, to_double(abs(acc)));
                continue;
            }
            out.B[key] = acc;
            out.error[key] = delta * std::exp(2 * M_PI * m * s);
        }
    }
    return out;
}

// ---------------------------------------------------------------- moulds

CF mould_gamma(const std::vector<CF>& omegas)
{
    if (omegas.empty())
        throw std::invalid_argument("mould_gamma: empty word");
    CF g = cone(), partial = czero();
    for (std::size_t j = 0; j + 1 < omegas.size(); ++j) {
        partial += omegas[j];
        g *= partial;
    }
    return g;
}

SymPoly mould_gamma_exact(const std::vector<int>& ms)
{
    if (ms.empty())
        throw std::invalid_argument("mould_gamma: empty word");
    SymPoly g(1);
    long partial = 0;
    for (std::size_t j = 0; j + 1 < ms.size(); ++j) {
        partial += ms[j];
        g *= SymPoly::symbol(kTwoPiI) * CQ(Rational(partial));
    }
    return g;
}

Passage invariants_to_passage(const std::map<int, SymPoly>& A, int M)
{
    auto [Q, P] = to_passage(A, M);
    return {Q, P};
}

PassageF invariants_to_passage(const std::map<int, CF>& A, int M)
{
    auto [Q, P] = to_passage(A, M);
    return {Q, P};
}

std::map<int, SymPoly> passage_to_invariants(const std::map<int, SymPoly>& B, int M) { return from_passage(B, M); }
std::map<int, CF> passage_to_invariants(const std::map<int, CF>& B, int M) { return from_passage(B, M); }

// ---------------------------------------------------------------- w-series

WSeries wseries_mul(const WSeries& a, const WSeries& b, int M)
{
    WSeries c(static_cast<std::size_t>(M + 1));
    for (int i = 0; i <= M && i < static_cast<int>(a.size()); ++i) {
        if (a[static_cast<std::size_t>(i)].is_zero())
            continue;
        for (int j = 0; i + j <= M && j < static_cast<int>(b.size()); ++j)
            c[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    }
    return c;
}

WSeries wseries_exp(const WSeries& x, int M)
{
    if (!x.empty() && !x[0].is_zero())
        throw std::invalid_argument("wseries_exp: constant term must vanish");
    // e' = x' e  =>  n e_n = sum_k k x_k e_{n-k}
    WSeries e(static_cast<std::size_t>(M + 1));
    e[0] = SymPoly(1);
    for (int n = 1; n <= M; ++n) {
        SymPoly acc;
        for (int k = 1; k <= n && k < static_cast<int>(x.size()); ++k)
            acc += x[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(n - k)] * CQ(Rational(k));
        e[static_cast<std::size_t>(n)] = acc * CQ(Rational(1, n));
    }
    return e;
}

WSeries wseries_log(const WSeries& y, int M)
{
    if (y.empty() || y[0] != SymPoly(1))
        throw std::invalid_argument("wseries_log: constant term must be 1");
    // y l' = y'  =>  n l_n = n y_n - sum_{k=1}^{n-1} k l_k y_{n-k}
    WSeries l(static_cast<std::size_t>(M + 1));
    auto at = [&](int k) { return k < static_cast<int>(y.size()) ? y[static_cast<std::size_t>(k)] : SymPoly(); };
    for (int n = 1; n <= M; ++n) {
        SymPoly acc = at(n) * CQ(Rational(n));
        for (int k = 1; k < n; ++k)
            acc -= l[static_cast<std::size_t>(k)] * at(n - k) * CQ(Rational(k));
        l[static_cast<std::size_t>(n)] = acc * CQ(Rational(1, n));
    }
    return l;
}

// (Id + sum X_omega e_omega) o (Id + sum Y_omega e_omega) - Id on side s, as a
// w-series with w = e^{-s 2 pi i z}.
WSeries compose_shift_maps(const WSeries& X, const WSeries& Y, int s, int M)
{
    WSeries out = Y;
    out.resize(static_cast<std::size_t>(M + 1));
    const SymPoly L = SymPoly::symbol(kTwoPiI);
    for (int m = 1; m <= M && m < static_cast<int>(X.size()); ++m) {
        if (X[static_cast<std::size_t>(m)].is_zero())
            continue;
        // e_omega(z + Y) = w^m exp(-s m L Y)
        WSeries arg(static_cast<std::size_t>(M + 1));
        for (int k = 1; k <= M && k < static_cast<int>(Y.size()); ++k)
            arg[static_cast<std::size_t>(k)] = Y[static_cast<std::size_t>(k)] * L * CQ(Rational(-s * m));
        WSeries e = wseries_exp(arg, M - m);
        for (int k = 0; k + m <= M; ++k)
            out[static_cast<std::size_t>(k + m)] += X[static_cast<std::size_t>(m)] * e[static_cast<std::size_t>(k)];
    }
    return out;
}

bool passage_maps_inverse(const Passage& p, int M, std::string* witness)
{
    for (int s : {1, -1}) {
        if (!side_active(p.Q, s) && !side_active(p.P, s))
            continue;
        WSeries Q(static_cast<std::size_t>(M + 1)), P(static_cast<std::size_t>(M + 1));
        for (int m = 1; m <= M; ++m) {
            if (auto it = p.Q.find(s * m); it != p.Q.end())
                Q[static_cast<std::size_t>(m)] = it->second;
            if (auto it = p.P.find(s * m); it != p.P.end())
                P[static_cast<std::size_t>(m)] = it->second;
        }
        for (int order = 0; order < 2; ++order) {
            WSeries r = order == 0 ? compose_shift_maps(Q, P, s, M) : compose_shift_maps(P, Q, s, M);
            for (int m = 1; m <= M; ++m) {
                if (!r[static_cast<std::size_t>(m)].is_zero()) {
                    if (witness)
                        *witness = std::string(order == 0 ? "Q o P" : "P o Q") + " differs from Id at omega = " +
                                   std::to_string(s * m) + " (2 pi i): " + r[static_cast<std::size_t>(m)].to_string();
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------- Richardson

Richardson richardson(const std::vector<Real>& x, const std::vector<Real>& f, int depth)
{
    if (x.size() != f.size() || x.empty())
        throw std::invalid_argument("richardson: mismatched or empty samples");
    const std::size_t use = std::min(x.size(), static_cast<std::size_t>(depth + 1));
    std::vector<Real> xs(x.end() - static_cast<long>(use), x.end());
    std::vector<Real> fs(f.end() - static_cast<long>(use), f.end());
    std::vector<Real> stages;
    Real v = richardson_value(xs, fs, &stages);
    Richardson out;
    out.value = to_double(v);
    for (const Real& s : stages)
        out.stages.push_back(to_double(s));
    if (stages.size() >= 2)
        out.error = std::abs(out.stages[stages.size() - 1] - out.stages[stages.size() - 2]);
    return out;
}

// ---------------------------------------------------------------- Henon constants

namespace {

// Leading singular part of U-hat at 2 pi, divided by |Theta|: the Taylor
// coefficient of zeta^n of 2 (1/2pi) [d_-2 4!/xi^5 - d_-1 2!/xi^3 + d_0/xi]
// with xi = 2 pi - zeta, the factor 2 accounting for -2 pi.
Real large_order_model(int n)
{
    const Real tp = 2 * pi();
    const Real dm2 = Real(1) / 84, dm1 = Real(17) / 840, d0 = Real(-17) / 2240;
    auto binom = [](int a, int b) { return to_real(binomial_q(a, static_cast<unsigned>(b))); };
    Real s = 24 * dm2 * binom(n + 4, 4) / pow(tp, n + 5) - 2 * dm1 * binom(n + 2, 2) / pow(tp, n + 3) +
             d0 / pow(tp, n + 1);
    return 2 * s / tp;
}

HenonConstants henon_large_order(const HenonParams& prm)
{
    if (prm.order < 100)
        throw std::invalid_argument("henon_constants: large_order needs at least 100 coefficients");
    if (prm.depth < 1)
        throw std::invalid_argument("henon_constants: Richardson depth must be positive");
    FormalSeries x0 = solve_henon(2 * prm.order);
    PrecisionScope scope(prm.bits);
    std::vector<Real> xs, fs;
    Real fact(1);  // (2k-1)!
    for (int k = 1; k <= prm.order; ++k) {
        if (k > 1)
            fact *= Real(2 * k - 2) * Real(2 * k - 1);
        const int n = 2 * k - 1;
        Real u = abs(to_real(x0.coeff_exact(2 * k).re)) / fact;
        xs.push_back(Real(1) / Real(k));
        fs.push_back(u / large_order_model(n));
    }
    Richardson r = richardson(xs, fs, prm.depth);
    HenonConstants out;
    out.stages = r.stages;
    out.precision_bits = prm.bits;
    const double last = r.stages.back(), prev = r.stages[r.stages.size() - 2];
    if (!(std::abs(last - prev) <= prm.convergence * std::abs(last)))
        throw std::runtime_error("henon_constants: Richardson stages disagree (" + std::to_string(prev) + " vs " +
                                 std::to_string(last) + ")");
    // Im Theta < 0 by convention; the modulus is what the coefficients determine.
    out.theta = StokesEntry{CF(Real(0), Real(-r.value)), r.error, "large_order"};
    return out;
}

struct FitResult {
    CF theta;
    CF mu;
    double residual = 0;
    double sigma_theta = 0;  // least-squares standard errors
    double sigma_mu = 0;
    unsigned bits = 0;
};

FitResult splitting_fit_at(const HenonParams& prm, double y0, HenonManifold& hm)
{
    if (prm.points < 6)
        throw std::invalid_argument("henon_constants: splitting_fit needs at least 6 points");
    if (y0 <= 0)
        throw std::invalid_argument("henon_constants: y0 must be positive");
    HenonLinearized lin = solve_henon_linearized(prm.basis_order);

    // Rough size of x+ - x- from one low-accuracy evaluation, then the working tolerance.
    EvalPlan plan;
    plan.bits = prm.bits;
    const double expected = std::exp(-2 * M_PI * y0);
    CF z_probe(Real(prm.re_min), Real(-y0));
    unsigned bits = prm.bits;
    double size;
    {
        plan.tol = expected * 1e-6;
        ManifoldPoint a = hm.evaluate(Side::plus, z_probe, plan), b = hm.evaluate(Side::minus, z_probe, plan);
        PrecisionScope scope(plan.bits);
        size = to_double(abs(a.x - b.x));
    }
    const double tol = std::max(size, 1e-300) * std::ldexp(1.0, -60);
    bits = std::max(bits, static_cast<unsigned>(-std::log2(tol)) + 64);
    plan.bits = bits;
    plan.tol = tol;

    PrecisionScope scope(bits);
    linalg::MatrixF A(prm.points, 2, czero());
    std::vector<CF> rhs;
    for (int j = 0; j < prm.points; ++j) {
        Real x = Real(prm.re_min) + Real(prm.re_max - prm.re_min) * Real(j) / Real(prm.points - 1);
        CF z(x, Real(-y0));
        ManifoldPoint p = hm.evaluate(Side::plus, z, plan), m = hm.evaluate(Side::minus, z, plan);
        CF d = exp(CF(Real(0), 2 * pi()) * z) * (p.x - m.x);
        A(j, 0) = series::evaluate(lin.phi2, z);
        A(j, 1) = series::evaluate(lin.phi1, z);
        rhs.push_back(d);
    }
    Real norm(0);
    for (const CF& d : rhs)
        norm += d.norm2();
    linalg::LeastSquares ls = linalg::least_squares(A, rhs);
    FitResult out;
    out.theta = ls.x[0];
    out.mu = ls.x[1];
    out.residual = to_double(ls.residual_norm / sqrt(norm));
    out.bits = bits;
    // sigma^2 diag((A^H A)^-1) for the two columns
    Real g00(0), g11(0);
    CF g01 = czero();
    for (int j = 0; j < prm.points; ++j) {
        g00 += A(j, 0).norm2();
        g11 += A(j, 1).norm2();
        g01 += A(j, 0).conj() * A(j, 1);
    }
    Real det = g00 * g11 - g01.norm2();
    Real sigma2 = ls.residual_norm * ls.residual_norm / Real(prm.points - 2);
    out.sigma_theta = to_double(sqrt(sigma2 * g11 / det));
    out.sigma_mu = to_double(sqrt(sigma2 * g00 / det));
    return out;
}

HenonConstants henon_splitting_fit(const HenonParams& prm)
{
    HenonManifold hm(2 * prm.order, prm.bits);
    FitResult main = splitting_fit_at(prm, prm.y0, hm);
    HenonConstants out;
    out.fit_residual = main.residual;
    out.contamination = std::exp(-2 * M_PI * prm.y0);
    out.precision_bits = main.bits;
    if (main.residual > prm.max_residual)
        throw std::runtime_error("henon_constants: fit residual " + std::to_string(main.residual) +
                                 " above threshold");
    double e_theta = 0, e_mu = 0;
    PrecisionScope scope(main.bits);
    if (prm.error_from_second_height) {
        FitResult other = splitting_fit_at(prm, prm.y0 - 1, hm);
        e_theta = to_double(abs(main.theta - other.theta));
        e_mu = to_double(abs(main.mu - other.mu));
    }
    // three standard errors of the fit, plus the spread between heights
    e_theta += 3 * main.sigma_theta;
    e_mu += 3 * main.sigma_mu;
    out.theta = StokesEntry{main.theta, e_theta, "splitting_fit"};
    out.mu = StokesEntry{main.mu, e_mu, "splitting_fit"};
    return out;
}

}  // namespace

HenonConstants henon_constants(HenonMethod method, const HenonParams& params)
{
    return method == HenonMethod::large_order ? henon_large_order(params) : henon_splitting_fit(params);
}

// ---------------------------------------------------------------- Bridge residues

BridgeResidues bridge_residues(const Minor& phi_hat, int depth, double convergence, unsigned bits)
{
    const FormalSeries& s = phi_hat.series;
    BridgeResidues out;
    PrecisionScope scope(bits);
    out.A_plus = czero();
    out.A_minus = czero();
    if (s.is_zero())
        return out;
    const int top = s.truncation_order();
    if (top < 2 * depth + 4)
        throw std::invalid_argument("bridge_residues: too few Taylor coefficients");

    // t_n = -(2 pi i)^{n+2} c_n -> A+ + (-1)^{n+1} A-, up to 1/n corrections.
    const CF L = two_pi_i();
    CF Lpow = pow(L, 2);
    std::vector<CF> t;
    for (int n = 0; n <= top; ++n) {
        t.push_back(-(Lpow * s.coeff_cf(n)));
        Lpow *= L;
    }
    CF cls[2];
    double err[2];
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<Real> xs, re, im;
        for (int n = parity == 0 ? 2 : 1; n <= top; n += 2) {
            xs.push_back(Real(1) / Real(n));
            re.push_back(t[static_cast<std::size_t>(n)].re);
            im.push_back(t[static_cast<std::size_t>(n)].im);
        }
        Richardson rr = richardson(xs, re, depth), ri = richardson(xs, im, depth);
        cls[parity] = CF(Real(rr.value), Real(ri.value));
        err[parity] = std::hypot(rr.error, ri.error);
        const double size = to_double(abs(cls[parity]));
        const double scale = std::max(size, to_double(abs(t.back())));
        if (scale > 0 && err[parity] > convergence * scale)
            throw std::runtime_error("bridge_residues: Richardson stages disagree");
    }
    // even n: A+ - A-, odd n: A+ + A-
    out.A_plus = (cls[0] + cls[1]) * Real(0.5);
    out.A_minus = (cls[1] - cls[0]) * Real(0.5);
    out.error_plus = out.error_minus = 0.5 * (err[0] + err[1]);
    out.terms = top + 1;
    return out;
}

double splitting_angle(double eps, double abs_theta)
{
    if (!(eps > 0))
        throw std::domain_error("splitting_angle: eps must be positive");
    const double e = std::exp(-2 * M_PI * M_PI / eps);
    return 64 * M_PI / 9 * abs_theta * std::pow(eps, -7) * e;
}

}  // namespace resurge
