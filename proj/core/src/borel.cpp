#include "resurge/borel.hpp"
#include "resurge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resurge {

using namespace series;

Minor::Minor() : series(FormalSeries::zero(Variable::zeta, 0)) {}

Minor::Minor(FormalSeries s, std::optional<double> radius) : series(std::move(s)), radius_hint(radius)
{
    if (series.variable() != Variable::zeta)
        throw std::invalid_argument("a minor is a series in zeta");
    if (!series.is_zero() && series.min_order() < 0)
        throw std::invalid_argument("a minor has no negative powers of zeta");
}

namespace {

Scalar zero_like(const FormalSeries& s) { return Scalar(0).to_mode(s.mode(), s.precision_bits()); }
Scalar rat_like(const Rational& q, const FormalSeries& s) { return Scalar(q).to_mode(s.mode(), s.precision_bits()); }

void trim(std::vector<Scalar>& d)
{
    while (!d.empty() && d.back().is_zero())
        d.pop_back();
}

void add_delta(std::vector<Scalar>& d, std::size_t k, const Scalar& v, const FormalSeries& like)
{
    if (d.size() <= k)
        d.resize(k + 1, zero_like(like));
    d[k] += v;
}

// Rescale coefficients: coefficient of order k times f(k).
FormalSeries rescale(const FormalSeries& s, Variable var, int shift, bool multiply_factorial)
{
    // Series s in `from` variable; result order k+shift, coefficient c_k * k! or / (k+shift)!.
    const int lo = s.min_order();
    const int hi = s.truncation_order();
    if (s.mode() == Mode::exact) {
        FormalSeries::ExactCoeffs c;
        c.reserve(s.size());
        for (int k = lo; k <= hi; ++k) {
            CQ v = s.coeff_exact(k);
            if (multiply_factorial)
                v *= factorial_q(static_cast<unsigned>(k));
            else
                v /= factorial_q(static_cast<unsigned>(k + shift));
            c.push_back(std::move(v));
        }
        return FormalSeries(var, lo + shift, std::move(c), hi + shift, s.gevrey());
    }
    PrecisionScope scope(s.precision_bits());
    FormalSeries::FloatCoeffs c;
    c.reserve(s.size());
    Real f(1);
    int fk = 0;
    auto fact = [&](int n) {
        if (n < fk) {
            f = 1;
            fk = 0;
        }
        while (fk < n)
            f *= ++fk;
        return f;
    };
    for (int k = lo; k <= hi; ++k) {
        CF v = s.coeff_cf(k);
        if (multiply_factorial)
            v *= fact(k);
        else
            v /= fact(k + shift);
        c.push_back(std::move(v));
    }
    return FormalSeries(var, lo + shift, std::move(c), hi + shift, s.precision_bits(), s.gevrey());
}

// z^{-n-1} part -> minor zeta^n / n!
FormalSeries minor_of_tail(const FormalSeries& tail)
{
    if (tail.is_zero())
        return FormalSeries::zero(Variable::zeta, tail.truncation_order() - 1, tail.mode(), tail.precision_bits());
    return rescale(tail, Variable::zeta, -1, false);
}

// k-fold derivative of a minor, tracking values at 0 dropped into delta terms:
// delta^(k) * m = sum_{j<k} m^{(j)}(0) delta^(k-1-j) + m^{(k)}.
std::pair<FormalSeries, std::vector<Scalar>> delta_act(const FormalSeries& m, std::size_t k)
{
    FormalSeries cur = m;
    std::vector<Scalar> d;
    for (std::size_t step = 0; step < k; ++step) {
        if (cur.truncation_order() < 1)
            throw std::runtime_error("convolution: truncation exhausted");
        d.insert(d.begin(), cur.coeff(0));
        cur = derivative(cur);
    }
    return {cur, d};
}

}  // namespace

SRSingularity borel(const FormalSeries& phi)
{
    if (phi.variable() != Variable::z)
        throw std::invalid_argument("borel acts on series in z");
    SRSingularity out;
    const int N = phi.truncation_order();
    if (!phi.is_zero() && phi.min_order() <= 0) {
        if (N < 0)
            throw std::invalid_argument("borel: polynomial part not fully known (truncation below 0)");
        for (int k = phi.min_order(); k <= 0; ++k)
            add_delta(out.delta, static_cast<std::size_t>(-k), phi.coeff(k), phi);
        trim(out.delta);
    }
    FormalSeries tail = phi;
    if (!phi.is_zero() && phi.min_order() <= 0) {
        FormalSeries poly = FormalSeries::zero(Variable::z, N, phi.mode(), phi.precision_bits());
        for (int k = phi.min_order(); k <= 0; ++k)
            poly = add(poly, FormalSeries::monomial(Variable::z, k, phi.coeff(k), N));
        tail = sub(phi, poly);
    }
    out.minor = Minor(minor_of_tail(tail));
    return out;
}

FormalSeries inverse_borel(const Minor& m)
{
    const FormalSeries& s = m.series;
    if (s.is_zero())
        return FormalSeries::zero(Variable::z, s.truncation_order() + 1, s.mode(), s.precision_bits());
    return rescale(s, Variable::z, 1, true);
}

FormalSeries inverse_borel(const SRSingularity& s)
{
    FormalSeries out = inverse_borel(s.minor);
    const int N = out.truncation_order();
    for (std::size_t k = 0; k < s.delta.size(); ++k)
        if (!s.delta[k].is_zero())
            out = add(out, FormalSeries::monomial(Variable::z, -static_cast<int>(k), s.delta[k], N));
    return out;
}

Minor convolve(const Minor& a, const Minor& b)
{
    // zeta^n/n! * zeta^m/m! = zeta^{n+m+1}/(n+m+1)!: multiply the factorial-scaled
    // coefficients and divide back.
    const FormalSeries& x = a.series;
    const FormalSeries& y = b.series;
    if (x.mode() != y.mode())
        throw std::invalid_argument("convolution: mode mismatch");
    FormalSeries px = rescale(x, Variable::zeta, 0, true);
    FormalSeries py = rescale(y, Variable::zeta, 0, true);
    FormalSeries prod = mul(px, py);
    FormalSeries r = prod.is_zero()
                         ? FormalSeries::zero(Variable::zeta, prod.truncation_order() + 1, x.mode(), x.precision_bits())
                         : rescale(prod, Variable::zeta, 1, false);
    std::optional<double> radius;
    if (a.radius_hint && b.radius_hint)
        radius = std::min(*a.radius_hint, *b.radius_hint);
    return Minor(r.with_gevrey(false), radius);
}

SRSingularity convolve(const SRSingularity& a, const SRSingularity& b)
{
    const FormalSeries& am = a.minor.series;
    const FormalSeries& bm = b.minor.series;
    if (am.mode() != bm.mode())
        throw std::invalid_argument("convolution: mode mismatch");
    SRSingularity out;
    Minor mm = convolve(a.minor, b.minor);
    FormalSeries minor = mm.series;
    for (std::size_t i = 0; i < a.delta.size(); ++i)
        for (std::size_t j = 0; j < b.delta.size(); ++j)
            if (!a.delta[i].is_zero() && !b.delta[j].is_zero())
                add_delta(out.delta, i + j, a.delta[i] * b.delta[j], am);
    auto act = [&](const std::vector<Scalar>& coeffs, const FormalSeries& m) {
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k].is_zero())
                continue;
            auto [dm, dd] = delta_act(m, k);
            minor = add(minor, scale(dm, coeffs[k]));
            for (std::size_t j = 0; j < dd.size(); ++j)
                add_delta(out.delta, j, coeffs[k] * dd[j], m);
        }
    };
    act(a.delta, bm);
    act(b.delta, am);
    trim(out.delta);
    out.minor = Minor(minor, mm.radius_hint);
    return out;
}

EntireFunction EntireFunction::named(std::string_view name)
{
    std::string s;
    for (char c : name)
        if (c != ' ')
            s.push_back(c);
    EntireFunction f;
    if (s == "exp(-zeta)-1" || s == "exp(-ζ)-1" || s == "e^-zeta-1" || s == "exp_minus_one")
        f.kind = EntireKind::exp_minus_one;
    else if (s == "4sinh^2(zeta/2)" || s == "4*sinh^2(zeta/2)" || s == "4sinh²(ζ/2)" || s == "four_sinh_sq")
        f.kind = EntireKind::four_sinh_sq;
    else if (s == "-zeta" || s == "-ζ" || s == "minus_zeta")
        f.kind = EntireKind::minus_zeta;
    else
        throw std::invalid_argument("unsupported entire function '" + std::string(name) + "'");
    return f;
}

EntireFunction EntireFunction::polynomial(FormalSeries p)
{
    if (p.variable() != Variable::zeta)
        throw std::invalid_argument("polynomial multiplier must be a series in zeta");
    EntireFunction f;
    f.kind = EntireKind::polynomial;
    f.poly = std::move(p);
    return f;
}

FormalSeries EntireFunction::taylor(int n, Mode mode, unsigned bits) const
{
    FormalSeries::ExactCoeffs c(static_cast<std::size_t>(std::max(n, 0) + 1));
    switch (kind) {
    case EntireKind::exp_minus_one: {
        Rational f(1);
        for (int k = 1; k <= n; ++k) {
            f /= k;
            c[k] = CQ(k % 2 ? Rational(-f) : f);
        }
        break;
    }
    case EntireKind::four_sinh_sq: {
        // 4 sinh^2(z/2) = 2 cosh z - 2 = sum_{k>=1} 2 z^{2k}/(2k)!
        Rational f(1);
        for (int k = 1; k <= n; ++k) {
            f /= k;
            if (k % 2 == 0)
                c[k] = CQ(2 * f);
        }
        break;
    }
    case EntireKind::minus_zeta:
        if (n >= 1)
            c[1] = CQ(Rational(-1));
        break;
    case EntireKind::polynomial: {
        if (poly.mode() != Mode::exact) {
            if (mode == Mode::exact)
                throw std::invalid_argument("float polynomial multiplier on an exact singularity");
            PrecisionScope scope(bits);
            FormalSeries::FloatCoeffs fc;
            for (int k = 0; k <= n; ++k)
                fc.push_back(k <= poly.truncation_order() ? poly.coeff_cf(k) : CF(Real(0), Real(0)));
            return FormalSeries(Variable::zeta, 0, std::move(fc), n, bits);
        }
        for (int k = 0; k <= n && k <= poly.truncation_order(); ++k)
            c[k] = poly.coeff_exact(k);
        break;
    }
    }
    FormalSeries r(Variable::zeta, 0, std::move(c), n);
    return mode == Mode::exact ? r : r.to_float(bits);
}

SRSingularity mult_by_entire(const SRSingularity& s, const EntireFunction& alpha)
{
    const FormalSeries& m = s.minor.series;
    const int K = static_cast<int>(s.delta.size());
    const int n = std::max(m.truncation_order() + 2, K);
    FormalSeries a = alpha.taylor(n, m.mode(), m.precision_bits());
    SRSingularity out;
    FormalSeries minor = mul(m, a);
    if (minor.truncation_order() > m.truncation_order() + std::max(a.min_order(), 0))
        minor = minor.truncated(m.truncation_order() + std::max(a.min_order(), 0));
    // zeta^j delta^(k) = (-1)^j k!/(k-j)! delta^(k-j)
    for (int k = 0; k < K; ++k) {
        if (s.delta[k].is_zero())
            continue;
        Rational f(1);
        for (int j = 0; j <= k; ++j) {
            if (j > 0)
                f *= Rational(-(k - j + 1));
            Scalar aj = a.coeff(j);
            if (aj.is_zero())
                continue;
            add_delta(out.delta, static_cast<std::size_t>(k - j), s.delta[k] * aj * rat_like(f, m), m);
        }
    }
    trim(out.delta);
    out.minor = Minor(minor, s.minor.radius_hint);
    return out;
}

GrowthEstimate estimate_growth(const Minor& m)
{
    GrowthEstimate g;
    const FormalSeries& s = m.series;
    if (s.is_zero())
        return g;
    std::vector<std::pair<int, double>> pts;
    {
        PrecisionScope scope(s.mode() == Mode::exact ? 128 : s.precision_bits());
        for (int k = std::max(1, s.min_order()); k <= s.truncation_order(); ++k) {
            CF c = s.coeff_cf(k);
            if (c.is_zero())
                continue;
            double l = to_double(boost::multiprecision::log(abs(c)));
            pts.emplace_back(k, l);
        }
    }
    if (pts.size() < 2) {
        g.K = pts.empty() ? 0 : std::exp(pts[0].second);
        g.rho = 0;
        g.samples = static_cast<int>(pts.size());
        return g;
    }
    // Least-squares slope over the upper half of the index range.
    const int kmid = pts.back().first / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto [k, l] : pts) {
        if (k < kmid)
            continue;
        sx += k;
        sy += l;
        sxx += double(k) * k;
        sxy += k * l;
        ++n;
    }
    double slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    g.rho = std::exp(slope);
    double logK = -1e300;
    for (auto [k, l] : pts)
        logK = std::max(logK, l - k * slope);
    if (s.min_order() == 0) {
        PrecisionScope scope(s.mode() == Mode::exact ? 128 : s.precision_bits());
        logK = std::max(logK, to_double(boost::multiprecision::log(abs(s.coeff_cf(0)))));
    }
    g.K = std::exp(logK);
    g.samples = n;
    return g;
}

// ---------------------------------------------------------------- singularity fit

namespace {

// Log with the cut on the outward ray from omega (direction arg omega); the
// branch agrees with the principal log on the opposite direction.
CF branch_log(const CF& xi, const CF& omega)
{
    const Real pi_ = pi();
    Real beta = omega.is_zero() ? pi_ : arg(omega);
    Real a = arg(xi);
    // wanted range: (beta - 2pi, beta] + 2pi*k, with k chosen so beta - pi is principal
    Real centre = beta - pi_;
    Real shift(0);
    while (centre + shift <= -pi_)
        shift += 2 * pi_;
    while (centre + shift > pi_)
        shift -= 2 * pi_;
    Real lo = beta - 2 * pi_ + shift;
    Real hi = beta + shift;
    while (a <= lo)
        a += 2 * pi_;
    while (a > hi)
        a -= 2 * pi_;
    return CF(boost::multiprecision::log(abs(xi)), a);
}

void check_condition(const linalg::LeastSquares& ls, double limit, const char* what)
{
    if (ls.rank_deficient)
        throw std::runtime_error(std::string("singularity fit: rank-deficient ") + what + " system");
    Real normal_cond = ls.condition * ls.condition;
    if (normal_cond > Real(limit))
        throw std::runtime_error(std::string("singularity fit: ill-conditioned ") + what +
                                 " normal equations (condition " + to_string(normal_cond, 4) + " > " +
                                 to_string(Real(limit), 3) + ")");
}

}  // namespace

SimpleSingularityFit fit_simple_singularity(const std::vector<SingularitySample>& samples, const CF& omega_in,
                                            ModelDegrees deg, unsigned bits, double cond_limit)
{
    if (deg.pole_order < 0 || deg.variation_order < 0 || deg.regular_order < 0)
        throw std::invalid_argument("singularity fit: negative model degree");
    PrecisionScope scope(bits);
    const CF zero(Real(0), Real(0));
    const CF omega(Real(omega_in.re), Real(omega_in.im));
    const CF tpi = two_pi_i();
    const bool two_branch =
        !samples.empty() && std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.other_branch.has_value(); });

    SimpleSingularityFit fit;
    fit.omega = omega;
    fit.precision_bits = bits;
    std::vector<Real> facts(std::max(deg.pole_order, 1), Real(1));
    for (int p = 1; p < deg.pole_order; ++p)
        facts[p] = facts[p - 1] * p;

    const int m = static_cast<int>(samples.size());
    std::vector<CF> xi(m), lg(m);
    for (int s = 0; s < m; ++s) {
        xi[s] = CF(Real(samples[s].zeta.re), Real(samples[s].zeta.im)) - omega;
        if (xi[s].is_zero())
            throw std::invalid_argument("singularity fit: sample at omega");
        lg[s] = branch_log(xi[s], omega);
    }

    std::vector<CF> var(deg.variation_order, zero);
    double worst_cond = 0;
    if (two_branch && deg.variation_order > 0) {
        if (m < deg.variation_order)
            throw std::invalid_argument("singularity fit: too few samples for the variation");
        linalg::MatrixF A(m, deg.variation_order, zero);
        std::vector<CF> rhs(m);
        for (int s = 0; s < m; ++s) {
            CF p(Real(1), Real(0));
            for (int j = 0; j < deg.variation_order; ++j) {
                A(s, j) = p;
                p *= xi[s];
            }
            rhs[s] = CF(Real(samples[s].value.re), Real(samples[s].value.im)) -
                     CF(Real(samples[s].other_branch->re), Real(samples[s].other_branch->im));
        }
        auto ls = linalg::least_squares(A, rhs);
        check_condition(ls, cond_limit, "variation");
        worst_cond = std::max(worst_cond, to_double(ls.condition * ls.condition));
        var = ls.x;
    }

    // Columns: polar terms, (variation terms if not fitted already), regular terms.
    const int nvar = two_branch ? 0 : deg.variation_order;
    const int ncols = deg.pole_order + nvar + deg.regular_order;
    if (ncols > m)
        throw std::invalid_argument("singularity fit: more unknowns than samples");
    linalg::MatrixF A(m, ncols, zero);
    std::vector<CF> rhs(m);
    for (int s = 0; s < m; ++s) {
        CF v(Real(samples[s].value.re), Real(samples[s].value.im));
        CF known = zero;
        CF p(Real(1), Real(0));
        for (int j = 0; j < static_cast<int>(var.size()) && two_branch; ++j) {
            known += var[j] * p;
            p *= xi[s];
        }
        rhs[s] = v - known * lg[s] / tpi;
        int col = 0;
        CF inv = CF(Real(1), Real(0)) / xi[s];
        CF ip = inv;
        for (int q = 0; q < deg.pole_order; ++q, ++col) {
            A(s, col) = ip * facts[q] / tpi;
            ip *= inv;
        }
        p = CF(Real(1), Real(0));
        for (int j = 0; j < nvar; ++j, ++col) {
            A(s, col) = p * lg[s] / tpi;
            p *= xi[s];
        }
        p = CF(Real(1), Real(0));
        for (int j = 0; j < deg.regular_order; ++j, ++col) {
            A(s, col) = p;
            p *= xi[s];
        }
    }
    if (ncols > 0) {
        auto ls = linalg::least_squares(A, rhs);
        check_condition(ls, cond_limit, "model");
        worst_cond = std::max(worst_cond, to_double(ls.condition * ls.condition));
        int col = 0;
        fit.polar.assign(ls.x.begin(), ls.x.begin() + deg.pole_order);
        col = deg.pole_order;
        if (!two_branch)
            var.assign(ls.x.begin() + col, ls.x.begin() + col + nvar);
        col += nvar;
        fit.regular.assign(ls.x.begin() + col, ls.x.end());
    }
    fit.condition = worst_cond;
    fit.residuum = fit.polar.empty() ? Scalar(CF(Real(0), Real(0)), bits) : Scalar(fit.polar[0], bits);
    FormalSeries::FloatCoeffs vc(var.begin(), var.end());
    int vtrunc = static_cast<int>(vc.size()) - 1;
    fit.variation = Minor(vc.empty() ? FormalSeries::zero(Variable::zeta, -1, Mode::floating, bits)
                                     : FormalSeries(Variable::zeta, 0, std::move(vc), vtrunc, bits));

    Real rss(0);
    for (int s = 0; s < m; ++s) {
        CF v(Real(samples[s].value.re), Real(samples[s].value.im));
        rss += (evaluate_model(fit, samples[s].zeta) - v).norm2();
    }
    fit.regular_norm = m > 0 ? to_double(boost::multiprecision::sqrt(rss / m)) : 0.0;
    return fit;
}

CF evaluate_model(const SimpleSingularityFit& fit, const CF& zeta)
{
    PrecisionScope scope(std::max(fit.precision_bits, 64u));
    const CF tpi = two_pi_i();
    CF xi = CF(Real(zeta.re), Real(zeta.im)) - fit.omega;
    CF out(Real(0), Real(0));
    CF inv = CF(Real(1), Real(0)) / xi;
    CF ip = inv;
    Real f(1);
    for (std::size_t p = 0; p < fit.polar.size(); ++p) {
        if (p > 0)
            f *= static_cast<long>(p);
        out += fit.polar[p] * ip * f / tpi;
        ip *= inv;
    }
    const FormalSeries& v = fit.variation.series;
    if (!v.is_zero())
        out += series::evaluate(v, xi) * branch_log(xi, fit.omega) / tpi;
    CF p(Real(1), Real(0));
    for (const auto& r : fit.regular) {
        out += r * p;
        p *= xi;
    }
    return out;
}

}  // namespace resurge
