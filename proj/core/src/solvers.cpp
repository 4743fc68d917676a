#include "resurge/solvers.hpp"

#include <stdexcept>

namespace resurge {

using namespace series;

namespace {

Scalar like(const Rational& q, const FormalSeries& s) { return Scalar(q).to_mode(s.mode(), s.precision_bits()); }

// Taylor series of X/(e^X - 1) (sign = +1) or X/(1 - e^-X) (sign = -1) to order n,
// in the b slot.
FormalSeries bernoulli_generator(int n, int sign)
{
    // (e^{sX} - 1)/(sX) = sum X^k s^k/(k+1)!
    FormalSeries::ExactCoeffs c;
    Rational f(1);
    for (int k = 0; k <= n; ++k) {
        f /= (k + 1);
        c.push_back(CQ((sign < 0 && k % 2) ? Rational(-f) : f));
    }
    return reciprocal(FormalSeries(Variable::b, 0, std::move(c), n));
}

// sum_n op[n] d^n y / dz^n
FormalSeries apply_derivative_series(const FormalSeries& y, const FormalSeries& op)
{
    if (y.is_zero())
        return y;
    const int span = y.truncation_order() - y.min_order();
    FormalSeries result = FormalSeries::zero(y.variable(), y.truncation_order(), y.mode(), y.precision_bits());
    FormalSeries d = y;
    for (int n = 0; n <= span && n <= op.truncation_order(); ++n) {
        if (n > 0)
            d = derivative(d).truncated(y.truncation_order());
        if (d.is_zero())
            break;
        Scalar c = op.coeff(n).to_mode(y.mode(), y.precision_bits());
        if (!c.is_zero())
            result = add(result, scale(d, c));
    }
    return result.truncated(y.truncation_order());
}

// Minor of zeta/(e^{-zeta} - 1) to order n.
FormalSeries shift_inverse_kernel(int n, Mode mode, unsigned bits)
{
    // (e^{-z} - 1)/z = sum (-1)^{k+1} z^k/(k+1)!
    FormalSeries::ExactCoeffs c;
    Rational f(1);
    for (int k = 0; k <= n; ++k) {
        f /= (k + 1);
        c.push_back(CQ(k % 2 ? f : Rational(-f)));
    }
    FormalSeries r = reciprocal(FormalSeries(Variable::zeta, 0, std::move(c), n));
    return mode == Mode::exact ? r : r.to_float(bits);
}

FormalSeries sinh_kernel(int n, Mode mode, unsigned bits)
{
    // zeta^2/(4 sinh^2(zeta/2)) = 1/(2 sinh(zeta/2)/zeta)^2
    FormalSeries::ExactCoeffs c(static_cast<std::size_t>(n + 1));
    Rational f(1);
    for (int k = 0; 2 * k <= n; ++k) {
        if (k > 0)
            f /= Rational(4 * (2 * k) * (2 * k + 1));
        c[2 * k] = CQ(f);
    }
    FormalSeries s(Variable::zeta, 0, std::move(c), n);
    FormalSeries r = reciprocal(mul(s, s));
    return mode == Mode::exact ? r : r.to_float(bits);
}

FormalSeries divide_by_zeta(const FormalSeries& m, int k)
{
    if (!m.is_zero() && m.min_order() < k)
        throw std::logic_error("minor not divisible by zeta^k");
    return mul_var_power(m, -k);
}

}  // namespace

GermSpec::GermSpec(FormalSeries a_, Scalar offset_, std::optional<double> radius)
    : a(std::move(a_)), offset(std::move(offset_)), radius_hint(radius)
{
    if (a.variable() != Variable::z)
        throw std::invalid_argument("germ perturbation a must be a series in z");
}

FormalSeries GermSpec::shifted_a() const
{
    if (offset.is_zero())
        return a;
    return shift(a, offset.to_mode(a.mode(), a.precision_bits()));
}

LinearSolution solve_linear_first(const FormalSeries& a)
{
    if (!a.is_zero() && a.min_order() < 2)
        throw std::invalid_argument("solve_linear_first: a must lie in z^-2 C[[z^-1]]");
    SRSingularity ah = borel(a);
    const FormalSeries& m = ah.minor.series;
    LinearSolution out;
    FormalSeries q = divide_by_zeta(m, 1);
    FormalSeries kern = shift_inverse_kernel(std::max(q.truncation_order(), 0), m.mode(), m.precision_bits());
    out.borel.minor = Minor(mul(q, kern).truncated(q.truncation_order()), 2 * 3.14159265358979323846);
    out.series = inverse_borel(out.borel).with_gevrey(true);
    return out;
}

LinearSolution solve_linear_second(const FormalSeries& b)
{
    if (!b.is_zero() && b.min_order() < 3)
        throw std::invalid_argument("solve_linear_second: b must lie in z^-3 C[[z^-1]]");
    SRSingularity bh = borel(b);
    const FormalSeries& m = bh.minor.series;
    LinearSolution out;
    FormalSeries q = divide_by_zeta(m, 2);
    FormalSeries kern = sinh_kernel(std::max(q.truncation_order(), 0), m.mode(), m.precision_bits());
    out.borel.minor = Minor(mul(q, kern).truncated(q.truncation_order()), 2 * 3.14159265358979323846);
    out.series = inverse_borel(out.borel).with_gevrey(true);
    return out;
}

// ---------------------------------------------------------------- Abel

AbelSolution solve_abel(const GermSpec& g, int N)
{
    if (N < 1)
        throw std::invalid_argument("solve_abel: order must be positive");
    FormalSeries a = g.shifted_a();
    if (!a.is_zero() && a.min_order() < 2)
        throw std::invalid_argument(
            "solve_abel: a has a z^-1 (or lower) term; the nonzero resiter case (rho != 0, log terms) is not supported");
    const Mode mode = a.mode();
    const unsigned bits = a.precision_bits();
    AbelSolution out;
    if (a.truncation_order() < N + 1)
        throw std::invalid_argument("solve_abel: a must be known to order N+1");
    a = a.truncated(N + 1);
    if (a.is_zero()) {
        out.phi = FormalSeries::zero(Variable::z, N, mode, bits);
        out.psi = out.phi;
        out.phi_hat = Minor(FormalSeries::zero(Variable::zeta, N - 1, mode, bits));
        return out;
    }

    const int target = N - 1;  // zeta order of phi-hat
    FormalSeries ahat = borel(a).minor.series;
    FormalSeries kern = shift_inverse_kernel(target + 1, mode, bits);
    auto E = [&](const FormalSeries& s) {
        FormalSeries q = divide_by_zeta(s.truncated(target + 1), 1);
        return mul(q, kern).truncated(std::min(q.truncation_order(), target));
    };
    auto conv = [&](const FormalSeries& x, const FormalSeries& y) {
        return convolve(Minor(x), Minor(y)).series.truncated(target + 1);
    };

    const int nmax = (target + 2) / 2;  // stage n has valuation 2n - 2 <= target
    std::vector<FormalSeries> stage;     // stage[n-1]
    std::vector<FormalSeries> a_r;       // a_r[r] = (-zeta)^r a-hat / r!
    a_r.push_back(ahat);
    // T[r][m] = sum over k_1+...+k_r = m of stage_{k_1} * ... * stage_{k_r}
    std::vector<std::vector<FormalSeries>> T(nmax + 1, std::vector<FormalSeries>(nmax + 1));
    stage.push_back(E(ahat));
    T[1][1] = stage[0];
    Rational fact(1);
    for (int n = 2; n <= nmax; ++n) {
        const int m = n - 1;
        // complete T[r][m] for r >= 2 (T[1][m] = stage m)
        for (int r = 2; r <= m; ++r) {
            FormalSeries acc;
            bool first = true;
            for (int k = 1; k <= m - r + 1; ++k) {
                FormalSeries term = conv(stage[k - 1], T[r - 1][m - k]);
                acc = first ? term : add(acc, term);
                first = false;
            }
            T[r][m] = acc;
        }
        while (static_cast<int>(a_r.size()) <= m) {
            int r = static_cast<int>(a_r.size());
            fact *= r;
            Rational c = (r % 2 ? Rational(-1) : Rational(1)) / fact;
            a_r.push_back(scale(mul_var_power(ahat, r), like(c, ahat)).truncated(target + 1));
        }
        FormalSeries S;
        bool first = true;
        for (int r = 1; r <= m; ++r) {
            FormalSeries term = conv(a_r[r], T[r][m]);
            S = first ? term : add(S, term);
            first = false;
        }
        stage.push_back(E(S));
        T[1][n] = stage.back();
    }

    FormalSeries total = stage[0];
    for (std::size_t n = 1; n < stage.size(); ++n)
        total = add(total, stage[n]);
    total = total.truncated(std::min(total.truncation_order(), 2 * nmax - 1));
    for (auto& s : stage)
        out.stages.push_back(Minor(s, 2 * 3.14159265358979323846));
    out.phi_hat = Minor(total, 2 * 3.14159265358979323846);
    out.phi = inverse_borel(out.phi_hat).with_gevrey(true);
    out.psi = lagrange_invert(out.phi).with_gevrey(true);
    return out;
}

// ---------------------------------------------------------------- Henon

namespace {

template <class T>
std::vector<T> henon_coefficients(int K, const T& one)
{
    // x0 = sum_k a_k z^{-2k}; P z^{-n} = sum_{j>=1} 2 C(n+2j-1, 2j) z^{-n-2j}
    std::vector<T> a(K + 1, one * 0);
    if (K < 1)
        return a;
    a[1] = one * (-6);
    for (int m = 3; m <= K + 1; ++m) {
        T s = one * 0;
        // P part: sum_{k <= m-2} 2 C(2m-1, 2m-2k) a_k
        std::vector<Integer> row(2 * m, Integer(0));
        row[0] = 1;
        for (int j = 1; j < 2 * m; ++j)
            row[j] = row[j - 1] * (2 * m - j) / j;
        for (int k = 1; k <= m - 2; ++k) {
            const Integer& c = row[2 * m - 2 * k];
            if constexpr (std::is_same_v<T, Rational>)
                s += a[k] * Rational(2 * c);
            else
                s += a[k] * T(2 * c);
        }
        for (int i = 2; i <= m - 2; ++i)
            s += a[i] * a[m - i];
        T pivot = one * (2 * m - 1) * (2 * m - 2) + a[1] * 2;
        a[m - 1] = -s / pivot;
    }
    return a;
}

}  // namespace

FormalSeries solve_henon(int N)
{
    if (N < 2)
        throw std::invalid_argument("solve_henon: order must be at least 2");
    const int K = N / 2;
    auto a = henon_coefficients<Rational>(K, Rational(1));
    FormalSeries::ExactCoeffs c(static_cast<std::size_t>(N - 1));
    for (int k = 1; k <= K; ++k)
        c[2 * k - 2] = CQ(a[k]);
    return FormalSeries(Variable::z, 2, std::move(c), N, true);
}

FormalSeries solve_henon_float(int N, unsigned bits)
{
    if (N < 2)
        throw std::invalid_argument("solve_henon: order must be at least 2");
    PrecisionScope scope(bits);
    const int K = N / 2;
    auto a = henon_coefficients<Real>(K, Real(1));
    FormalSeries::FloatCoeffs c(static_cast<std::size_t>(N - 1), CF(Real(0), Real(0)));
    for (int k = 1; k <= K; ++k)
        c[2 * k - 2] = CF(a[k], Real(0));
    return FormalSeries(Variable::z, 2, std::move(c), N, bits, true);
}

FormalSeries wronskian(const FormalSeries& phi1, const FormalSeries& phi2)
{
    Scalar m1 = like(Rational(-1), phi1);
    return sub(mul(shift(phi1, m1), phi2), mul(shift(phi2, m1), phi1));
}

namespace {

HenonLinearized linearized_from(const FormalSeries& x0, int N)
{
    HenonLinearized out;
    FormalSeries phi1 = derivative(x0);
    // chi = 1/(phi1(z) phi1(z-1)), D psi = chi, psi = gamma(d) d^{-1} chi with gamma(X) = X/(1-e^{-X})
    FormalSeries chi = reciprocal(mul(phi1, shift(phi1, Scalar(-1))));
    FormalSeries prim = primitive(chi);
    FormalSeries psi = apply_derivative_series(prim, bernoulli_generator(prim.truncation_order() - prim.min_order(), -1));
    FormalSeries phi2 = mul(psi, phi1);
    // phi2 + c phi1 is even for exactly one c (phi1 is odd)
    FormalSeries odd = parity_part(phi2, true);
    if (!odd.is_zero()) {
        CQ c = odd.coeff_exact(3) / phi1.coeff_exact(3);
        phi2 = sub(phi2, scale(phi1, Scalar(c)));
    }
    phi2 = phi2.truncated(N);
    if (!parity_part(phi2, true).is_zero())
        throw std::logic_error("linearized Henon solution has a residual odd part");
    out.phi1 = phi1.truncated(N).with_gevrey(true);
    out.phi2 = phi2.with_gevrey(true);
    if (out.phi2.truncation_order() < N)
        throw std::logic_error("linearized Henon solution lost truncation order");
    return out;
}

}  // namespace

HenonLinearized solve_henon_linearized(int N)
{
    if (N < 0)
        throw std::invalid_argument("solve_henon_linearized: negative order");
    return linearized_from(solve_henon(N + 6), N);
}

// ---------------------------------------------------------------- formal integral

namespace {

std::optional<TwoVarSeries> formal_integral_at(int Nb, int Nz, int internal)
{
    FormalSeries x0 = solve_henon(internal + 6);
    HenonLinearized lin = linearized_from(x0, internal);
    const FormalSeries& phi1 = lin.phi1;
    const FormalSeries& phi2 = lin.phi2;
    TwoVarSeries out;
    out.truncation_b = Nb;
    out.coeffs_by_b_power.push_back(x0.truncated(internal));
    if (Nb >= 1)
        out.coeffs_by_b_power.push_back(phi2);
    // c(z+1) - c(z) = chi  <=>  c = (d/(e^d - 1)) d^{-1} chi
    for (int n = 2; n <= Nb; ++n) {
        const auto& xs = out.coeffs_by_b_power;
        FormalSeries psi = mul(xs[1], xs[n - 1]);
        for (int k = 2; k < n; ++k)
            psi = add(psi, mul(xs[k], xs[n - k]));
        psi = neg(psi);
        FormalSeries chi1 = neg(mul(phi2, psi));
        FormalSeries chi2 = mul(phi1, psi);
        auto solve_shift = [](const FormalSeries& chi) {
            FormalSeries p = primitive(chi);
            return apply_derivative_series(p, bernoulli_generator(p.truncation_order() - p.min_order(), 1));
        };
        FormalSeries xn = add(mul(solve_shift(chi1), phi1), mul(solve_shift(chi2), phi2));
        // normalisation: no z^4 term, even
        if (xn.min_order() <= -4 && xn.truncation_order() >= -4) {
            CQ c4 = xn.coeff_exact(-4);
            xn = sub(xn, scale(phi2, Scalar(c4 / phi2.coeff_exact(-4))));
        }
        FormalSeries odd = parity_part(xn, true);
        if (!odd.is_zero() && odd.truncation_order() >= 3) {
            CQ c = odd.coeff_exact(3) / phi1.coeff_exact(3);
            xn = sub(xn, scale(phi1, Scalar(c)));
        }
        if (!parity_part(xn, true).is_zero())
            throw std::logic_error("formal integral component has a residual odd part");
        if (xn.truncation_order() < Nz)
            return std::nullopt;
        out.coeffs_by_b_power.push_back(xn);
    }
    for (auto& x : out.coeffs_by_b_power) {
        if (x.truncation_order() < Nz)
            return std::nullopt;
        x = x.truncated(Nz).with_gevrey(true);
    }
    return out;
}

}  // namespace

TwoVarSeries formal_integral(int Nb, int Nz)
{
    if (Nb < 1)
        throw std::invalid_argument("formal_integral: b-order must be at least 1");
    // Each b-level costs a bounded number of z-orders; grow the working order
    // until every component reaches Nz.
    int internal = Nz + 12 * Nb + 8;
    for (int attempt = 0; attempt < 12; ++attempt) {
        if (auto r = formal_integral_at(Nb, Nz, internal))
            return *r;
        internal += 8 * Nb;
    }
    throw std::runtime_error("formal_integral: could not reach the requested z-order");
}

std::vector<FormalSeries> formal_integral_residual(const TwoVarSeries& x)
{
    std::vector<FormalSeries> res;
    const auto& xs = x.coeffs_by_b_power;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        FormalSeries r = diff_P(xs[n]);
        for (std::size_t i = 0; i <= n; ++i)
            r = add(r, mul(xs[i], xs[n - i]));
        res.push_back(r);
    }
    return res;
}

// ---------------------------------------------------------------- cohomological

namespace {

std::vector<Rational> gamma_series(int order, bool sine)
{
    // X^2/(4 sinh^2(X/2)) (or sin) up to X^order
    FormalSeries::ExactCoeffs c(static_cast<std::size_t>(order + 1));
    Rational f(1);
    for (int k = 0; 2 * k <= order; ++k) {
        if (k > 0)
            f /= Rational(4 * (2 * k) * (2 * k + 1));
        c[2 * k] = CQ(sine && k % 2 ? Rational(-f) : f);
    }
    FormalSeries s(Variable::b, 0, std::move(c), order);
    FormalSeries r = reciprocal(mul(s, s));
    std::vector<Rational> out;
    for (int k = 0; k <= order; ++k)
        out.push_back(r.coeff_exact(k).re);
    return out;
}

}  // namespace

std::vector<Rational> cohomological_gamma(int count)
{
    auto g = gamma_series(2 * count, false);
    std::vector<Rational> out;
    for (int n = 0; n < count; ++n)
        out.push_back(g[2 * n + 2]);
    return out;
}

std::vector<Rational> sin_gamma_coefficients(int order) { return gamma_series(order, true); }

CohomologicalSolution solve_cohomological(const FormalSeries& beta, int N)
{
    if (N < 1)
        throw std::invalid_argument("solve_cohomological: N must be positive");
    if (beta.variable() == Variable::z)
        throw std::invalid_argument("solve_cohomological: beta is a power series in t");
    CohomologicalSolution out;
    out.gamma = cohomological_gamma(N);
    FormalSeries d = beta;
    for (int n = 1; n <= N; ++n) {
        if (n > 1)
            d = derivative(derivative(d));
        out.psi.push_back(scale(d, like(out.gamma[n - 1], beta)));
    }
    return out;
}

CF gamma_hat(const CF& xi, int terms)
{
    auto g = cohomological_gamma(terms);
    CF acc(Real(0), Real(0));
    CF x2 = xi * xi;
    CF p = xi;
    Real fact(1);
    for (int n = 0; n < terms; ++n) {
        if (n > 0) {
            p *= x2;
            fact *= Real((2 * n) * (2 * n + 1));
        }
        acc += p * (to_real(g[n]) / fact);
    }
    return acc;
}

CF gamma_hat_nu_sum(const CF& xi, long M)
{
    CF acc(Real(0), Real(0));
    const Real tp = 2 * pi();
    for (long m = M; m >= 1; --m) {
        CF nu(Real(0), tp * m);
        CF inv = CF(Real(1), Real(0)) / nu;
        CF inv2 = inv * inv;
        acc += inv2 * (exp(xi * inv) + exp(-(xi * inv)));
    }
    return acc;
}

}  // namespace resurge
