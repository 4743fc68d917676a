#include "resurge/resummation.hpp"

#include "resurge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace resurge {

namespace {

CF czero() { return CF(Real(0), Real(0)); }
CF cone() { return CF(Real(1), Real(0)); }

CF horner(const std::vector<CF>& c, const CF& x)
{
    CF acc = czero();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc *= x;
        acc += c[i];
    }
    return acc;
}

std::vector<CF> derivative_coeffs(const std::vector<CF>& c)
{
    std::vector<CF> d;
    for (std::size_t i = 1; i < c.size(); ++i)
        d.push_back(c[i] * Real(static_cast<long>(i)));
    return d;
}

// Coefficients of the minor as floats at the current precision.
std::vector<CF> minor_coeffs(const FormalSeries& s)
{
    std::vector<CF> c(static_cast<std::size_t>(std::max(0, s.truncation_order() + 1)), czero());
    for (int k = std::max(0, s.min_order()); k <= s.truncation_order(); ++k)
        c[static_cast<std::size_t>(k)] = s.coeff_cf(k);
    return c;
}

double radius_of(const Minor& m)
{
    if (m.radius_hint)
        return *m.radius_hint;
    GrowthEstimate g = estimate_growth(m);
    if (g.rho <= 0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / g.rho;
}

}  // namespace

// ---------------------------------------------------------------- roots

std::vector<CF> polynomial_roots(const std::vector<CF>& coeffs_in)
{
    std::vector<CF> c = coeffs_in;
    while (!c.empty() && c.back().is_zero())
        c.pop_back();
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0)
        return {};
    std::vector<CF> d = derivative_coeffs(c);
    const unsigned bits = current_precision_bits();
    Real eps = epsilon_for_bits(bits - 4);

    // Initial guesses on a circle whose radius is the geometric mean root size.
    Real r = boost::multiprecision::pow(abs(c[0] / c[n]), Real(1) / n);
    if (r == 0)
        r = 1;
    std::vector<CF> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        z[k] = polar(r, 2 * pi() * (Real(k) + Real(0.25)) / n + Real(0.4));

    for (int iter = 0; iter < 500; ++iter) {
        Real worst(0);
        for (int k = 0; k < n; ++k) {
            CF p = horner(c, z[k]);
            CF dp = horner(d, z[k]);
            if (p.is_zero())
                continue;
            CF ratio = p / dp;
            CF sum = czero();
            for (int j = 0; j < n; ++j)
                if (j != k)
                    sum += cone() / (z[k] - z[j]);
            CF step = ratio / (cone() - ratio * sum);
            z[k] -= step;
            Real rel = abs(step) / std::max(Real(1), abs(z[k]));
            if (rel > worst)
                worst = rel;
        }
        if (worst < eps)
            break;
    }
    for (auto& x : z) {
        for (int it = 0; it < 3; ++it) {
            CF dp = horner(d, x);
            if (dp.is_zero())
                break;
            x -= horner(c, x) / dp;
        }
    }
    return z;
}

// ---------------------------------------------------------------- Pade

std::vector<PadePole> PadeModel::singularities() const
{
    std::vector<PadePole> out;
    for (const auto& p : poles)
        if (!p.spurious)
            out.push_back(p);
    return out;
}

CF PadeModel::evaluate(const CF& zeta) const
{
    PrecisionScope scope(precision_bits);
    return horner(numerator, zeta) / horner(denominator, zeta);
}

namespace {

// Denominator coefficients q_1..q_M of the (L, M) approximant, or nullopt.
std::optional<std::vector<CF>> hankel_exact(const FormalSeries& s, int L, int M)
{
    linalg::MatrixQ h(M, M, CQ());
    std::vector<CQ> rhs(static_cast<std::size_t>(M));
    auto c = [&](int k) { return k < 0 ? CQ() : s.coeff_exact(k); };
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j)
            h(i, j) = c(L + i + 1 - (j + 1));
        rhs[i] = -c(L + i + 1);
    }
    auto q = linalg::solve_exact(h, rhs);
    if (!q)
        return std::nullopt;
    std::vector<CF> out;
    for (auto& x : *q)
        out.push_back(to_cf(x));
    return out;
}

std::optional<std::vector<CF>> hankel_float(const std::vector<CF>& c_all, int L, int M)
{
    linalg::MatrixF h(M, M, czero());
    std::vector<CF> rhs(static_cast<std::size_t>(M));
    auto c = [&](int k) { return k < 0 ? czero() : c_all[static_cast<std::size_t>(k)]; };
    Real scale(0);
    for (int k = 0; k <= L + M; ++k)
        scale = std::max(scale, abs(c(k)));
    if (scale == 0)
        return std::nullopt;
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j)
            h(i, j) = c(L + i + 1 - (j + 1));
        rhs[i] = -c(L + i + 1);
    }
    Real tiny = epsilon_for_bits(current_precision_bits() / 2);
    return linalg::solve(h, rhs, tiny);
}

}  // namespace

PadeModel pade_continue(const Minor& m, int L, int M, unsigned bits)
{
    if (L < 0 || M < 0)
        throw std::invalid_argument("pade_continue: negative degree");
    const FormalSeries& s = m.series;
    if (s.truncation_order() < L + M)
        throw std::invalid_argument("pade_continue: minor has fewer than L+M+1 coefficients");
    PrecisionScope scope(bits);
    std::vector<CF> c = minor_coeffs(s);

    PadeModel out;
    out.source_order = s.truncation_order();
    out.precision_bits = bits;
    std::vector<CF> q;
    for (;;) {
        if (M == 0) {
            q.clear();
            break;
        }
        std::optional<std::vector<CF>> sol;
        if (s.mode() == Mode::exact && M <= 32) {
            sol = hankel_exact(s, L, M);
        } else {
            // Hankel systems lose about 4 bits per degree to conditioning
            unsigned guard = bits + 4 * static_cast<unsigned>(M);
            PrecisionScope wide(guard);
            std::vector<CF> cw = minor_coeffs(s);
            sol = hankel_float(cw, L, M);
            if (sol) {
                PrecisionScope back(bits);
                for (auto& x : *sol)
                    x = CF(Real(x.re), Real(x.im));
            }
        }
        if (sol) {
            q = *sol;
            break;
        }
        out.fell_back = true;
        if (L == 0) {
            M = 0;
            continue;
        }
        --L;
        --M;
    }
    out.L = L;
    out.M = M;
    out.denominator.push_back(cone());
    for (auto& x : q)
        out.denominator.push_back(x);
    while (out.denominator.size() > 1 && out.denominator.back().is_zero())
        out.denominator.pop_back();
    for (int i = 0; i <= L; ++i) {
        CF acc = czero();
        for (int j = 0; j <= std::min(i, static_cast<int>(out.denominator.size()) - 1); ++j)
            acc += out.denominator[j] * c[i - j];
        out.numerator.push_back(acc);
    }
    while (out.numerator.size() > 1 && out.numerator.back().is_zero())
        out.numerator.pop_back();

    std::vector<CF> roots = polynomial_roots(out.denominator);
    out.zeros = polynomial_roots(out.numerator);
    std::vector<CF> dq = derivative_coeffs(out.denominator);
    Real max_res(0);
    for (const auto& p : roots) {
        PadePole pole{p, horner(out.numerator, p) / horner(dq, p), false};
        max_res = std::max(max_res, abs(pole.residue));
        out.poles.push_back(pole);
    }
    for (auto& pole : out.poles) {
        bool small = abs(pole.residue) < Real(1e-3) * max_res;
        bool paired = false;
        for (const auto& zr : out.zeros)
            if (abs(zr - pole.location) < Real(1e-3))
                paired = true;
        pole.spurious = small && paired;
    }
    std::sort(out.poles.begin(), out.poles.end(),
              [](const PadePole& a, const PadePole& b) { return abs(a.location) < abs(b.location); });
    return out;
}

MinorValue eval_minor(const PadeModel& p, const CF& zeta, double d_min)
{
    PrecisionScope scope(p.precision_bits);
    for (const auto& pole : p.poles)
        if (!pole.spurious && abs(zeta - pole.location) < Real(d_min))
            throw std::domain_error("eval_minor: point within d_min of a pole at " + to_string(pole.location, 12));
    return {p.evaluate(zeta), "pade"};
}

MinorValue eval_minor(const Minor& m, const CF& zeta, unsigned bits)
{
    PrecisionScope scope(bits);
    MinorEvaluator ev(m, bits);
    CF v = ev(zeta);
    return {v, ev.used_pade() ? "pade" : "taylor"};
}

// ---------------------------------------------------------------- evaluator

MinorEvaluator::MinorEvaluator(const Minor& m, unsigned bits) : minor_(m), bits_(bits)
{
    PrecisionScope scope(bits);
    coeffs_ = minor_coeffs(m.series);
    taylor_radius_ = 0.7 * radius_of(m);
}

const PadeModel& MinorEvaluator::pade()
{
    if (!pade_) {
        int n = std::min(minor_.series.truncation_order(), 80);
        int L = n / 2;
        int M = n - L;
        pade_ = pade_continue(minor_, L, M, bits_);
    }
    return *pade_;
}

CF MinorEvaluator::operator()(const CF& zeta)
{
    if (to_double(abs(zeta)) < taylor_radius_)
        return horner(coeffs_, zeta);
    used_pade_ = true;
    const PadeModel& p = pade();
    return horner(p.numerator, zeta) / horner(p.denominator, zeta);
}

double MinorEvaluator::error_bound(const CF& zeta)
{
    const double r = to_double(abs(zeta));
    if (r < taylor_radius_) {
        const double rho = taylor_radius_ / 0.7;
        const double q = r / rho;
        const std::size_t N = coeffs_.size();
        double last = 0;
        for (std::size_t k = N >= 2 ? N - 2 : 0; k < N; ++k)
            last = std::max(last, to_double(abs(coeffs_[k])) * std::pow(r, static_cast<double>(k)));
        return last * q / (1 - q);
    }
    const PadeModel& p = pade();
    if (!pade_lower_) {
        if (p.L == 0 || p.M == 0)
            return 0;
        pade_lower_ = pade_continue(minor_, p.L - 1, p.M - 1, bits_);
    }
    CF a = horner(p.numerator, zeta) / horner(p.denominator, zeta);
    CF b = horner(pade_lower_->numerator, zeta) / horner(pade_lower_->denominator, zeta);
    return to_double(abs(a - b));
}

void MinorEvaluator::check_ray(double theta, double R, double d)
{
    if (R < taylor_radius_)
        return;
    PrecisionScope scope(bits_);
    const PadeModel& p = pade();
    CF dir = polar(Real(1), Real(theta));
    for (const auto& pole : p.poles) {
        if (pole.spurious)
            continue;
        // distance from the pole to the segment [0, R dir]
        CF local = pole.location * dir.conj();
        double t = std::clamp(to_double(local.re), 0.0, R);
        double dist = to_double(abs(local - CF(Real(t), Real(0))));
        if (dist < d)
            throw std::domain_error("laplace_sum: Pade pole at " + to_string(pole.location, 10) +
                                    " lies near the integration ray; choose another direction");
    }
}

// ---------------------------------------------------------------- Laplace

namespace {

struct GaussRule {
    std::vector<Real> x;  // nodes on [-1, 1]
    std::vector<Real> w;
};

const GaussRule& gauss_rule(int n)
{
    static std::map<std::pair<int, unsigned>, GaussRule> cache;
    unsigned bits = current_precision_bits();
    auto key = std::make_pair(n, bits);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    GaussRule g;
    Real eps = epsilon_for_bits(bits - 6);
    for (int i = 1; i <= n; ++i) {
        Real x = boost::multiprecision::cos(pi() * (Real(i) - Real(0.25)) / (Real(n) + Real(0.5)));
        Real dp(0);
        for (int it2 = 0; it2 < 100; ++it2) {
            Real p0(1), p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            Real step = p1 / dp;
            x -= step;
            if (boost::multiprecision::abs(step) < eps)
                break;
        }
        // recompute the derivative at the converged node
        Real p0(1), p1 = x;
        for (int k = 2; k <= n; ++k) {
            Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        g.x.push_back(x);
        g.w.push_back(2 / ((1 - x * x) * dp * dp));
    }
    return cache.emplace(key, std::move(g)).first->second;
}

using Integrand = std::function<CF(const CF&)>;
using ModelError = std::function<double(const CF&)>;

struct RayIntegrator {
    const Integrand& phi;
    CF dir;
    CF w;  // z e^{i theta}
    const EvalPlan& plan;
    long evaluations = 0;

    CF f(const Real& r)
    {
        if (++evaluations > plan.max_evaluations)
            throw BudgetExceeded("laplace_sum: evaluation budget of " + std::to_string(plan.max_evaluations) +
                                 " exhausted");
        return phi(dir * r) * exp(-(w * r));
    }

    CF panel(const Real& a, const Real& b)
    {
        const GaussRule& g = gauss_rule(plan.nodes);
        Real half = (b - a) / 2, mid = (a + b) / 2;
        CF acc = czero();
        for (std::size_t i = 0; i < g.x.size(); ++i)
            acc += f(mid + half * g.x[i]) * g.w[i];
        return acc * half;
    }

    CF adaptive(const Real& a, const Real& b, const CF& whole, const Real& tol, int depth, Real& err)
    {
        Real m = (a + b) / 2;
        CF left = panel(a, m), right = panel(m, b);
        CF both = left + right;
        Real diff = abs(both - whole);
        if (diff < tol || depth > 40) {
            err += diff;
            return both;
        }
        return adaptive(a, m, left, tol / 2, depth + 1, err) + adaptive(m, b, right, tol / 2, depth + 1, err);
    }
};

void check_direction(const EvalPlan& plan)
{
    double t = std::remainder(plan.theta - M_PI / 2, M_PI);
    if (std::abs(t) < plan.margin)
        throw std::domain_error("laplace_sum: direction within the margin of a Stokes direction pi/2 + k pi");
}

LaplaceResult integrate(const Integrand& phi, const std::function<void(double)>& check, const ModelError& model_error,
                        const EvalPlan& plan, const CF& z)
{
    check_direction(plan);
    CF dir = polar(Real(1), Real(plan.theta));
    CF w = z * dir;
    double rew = to_double(w.re);
    if (rew <= 0)
        throw std::domain_error("laplace_sum: Re(z e^{i theta}) must be positive");
    const double tol = plan.tol;

    // Growth fit |phi(r dir)| <= K e^{tau r} on samples, then the radius where the tail drops below tol.
    double R = plan.radius > 0 ? plan.radius : std::log(1 / tol) / rew;
    double K = 0, tau = 0;
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> rs, ls;
        double kmax = 0;
        for (int j = 1; j <= 8; ++j) {
            double r = R * j / 8;
            double m = to_double(abs(phi(dir * Real(r))));
            if (m > 0) {
                rs.push_back(r);
                ls.push_back(std::log(m));
            }
            kmax = std::max(kmax, m);
        }
        if (rs.empty()) {
            K = 0;
            break;
        }
        tau = 0;
        if (rs.size() >= 4) {
            std::size_t h = rs.size() / 2;
            double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
            for (std::size_t i = h; i < rs.size(); ++i) {
                sx += rs[i];
                sy += ls[i];
                sxx += rs[i] * rs[i];
                sxy += rs[i] * ls[i];
                n += 1;
            }
            double den = n * sxx - sx * sx;
            if (den > 0)
                tau = std::max(0.0, (n * sxy - sx * sy) / den);
        }
        K = 0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            K = std::max(K, 2 * std::exp(ls[i] - tau * rs[i]));
        if (rew - tau <= 0)
            throw std::domain_error("laplace_sum: Re(z e^{i theta}) does not exceed the growth rate " +
                                    std::to_string(tau));
        if (plan.radius > 0)
            break;
        double sigma = rew - tau;
        double Rn = std::log(std::max(4 * K / (tol * sigma), 2.0)) / sigma;
        if (std::abs(Rn - R) < 1e-3 * R) {
            R = Rn;
            break;
        }
        R = std::max(Rn, 1e-300);
    }
    check(R);

    LaplaceResult out;
    out.radius = R;
    if (K == 0 && plan.radius == 0) {
        out.value = czero();
        out.method = "zero";
        return out;
    }
    RayIntegrator ri{phi, dir, w, plan};
    double h0 = std::min(1.0, 4.0 / to_double(abs(w)));
    int panels = std::max(1, static_cast<int>(std::ceil(R / h0)));
    Real h = Real(R) / panels;
    CF acc = czero();
    Real err(0);
    Real ptol = Real(tol) / (2 * panels);
    for (int p = 0; p < panels; ++p) {
        Real a = h * p, b = h * (p + 1);
        CF whole = ri.panel(a, b);
        acc += ri.adaptive(a, b, whole, ptol, 0, err);
    }
    acc *= dir;
    double sigma = rew - tau;
    double tail = K * std::exp(-sigma * R) / sigma;
    // model error of the minor itself, integrated against |e^{-z zeta}|
    double model = 0;
    if (model_error) {
        const int samples = 64;
        for (int j = 0; j < samples; ++j) {
            double r = R * (j + 0.5) / samples;
            model += model_error(dir * Real(r)) * std::exp(-rew * r) * R / samples;
        }
    }
    out.value = acc;
    out.error_estimate = to_double(err) + tail + model;
    out.evaluations = ri.evaluations;
    return out;
}

CF delta_part(const std::vector<Scalar>& delta, const CF& z)
{
    CF acc = czero();
    CF p = cone();
    for (const auto& d : delta) {
        acc += d.to_cf() * p;
        p *= z;
    }
    return acc;
}

}  // namespace

LaplaceResult laplace_sum(const SRSingularity& s, const EvalPlan& plan, const CF& z_in)
{
    PrecisionScope scope(plan.bits);
    CF z(Real(z_in.re), Real(z_in.im));
    MinorEvaluator ev(s.minor, plan.bits);
    Integrand phi = [&](const CF& zeta) { return ev(zeta); };
    auto check = [&](double R) { ev.check_ray(plan.theta, R, plan.pole_distance); };
    ModelError model = [&](const CF& zeta) { return ev.error_bound(zeta); };
    LaplaceResult r = s.minor.series.is_zero() ? LaplaceResult{czero(), 0, 0, 0, "zero"}
                                               : integrate(phi, check, model, plan, z);
    if (r.method.empty())
        r.method = ev.used_pade() ? "taylor+pade" : "taylor";
    r.value += delta_part(s.delta, z);
    return r;
}

LaplaceResult laplace_sum(const PadeModel& p, const std::vector<Scalar>& delta, const EvalPlan& plan,
                          const CF& z_in)
{
    PrecisionScope scope(plan.bits);
    CF z(Real(z_in.re), Real(z_in.im));
    Integrand phi = [&](const CF& zeta) { return horner(p.numerator, zeta) / horner(p.denominator, zeta); };
    auto check = [&](double R) {
        CF dir = polar(Real(1), Real(plan.theta));
        for (const auto& pole : p.poles) {
            if (pole.spurious)
                continue;
            CF local = pole.location * dir.conj();
            double t = std::clamp(to_double(local.re), 0.0, R);
            if (to_double(abs(local - CF(Real(t), Real(0)))) < plan.pole_distance)
                throw std::domain_error("laplace_sum: Pade pole at " + to_string(pole.location, 10) +
                                        " lies near the integration ray; choose another direction");
        }
    };
    LaplaceResult r = integrate(phi, check, ModelError(), plan, z);
    r.method = "pade";
    r.value += delta_part(delta, z);
    return r;
}

// ---------------------------------------------------------------- Fatou coordinates

FatouCoordinates::FatouCoordinates(const GermSpec& g, FatouOptions opt) : opt_(opt)
{
    PrecisionScope scope(opt_.bits);
    a_ = g.a.to_float(opt_.bits);
    a_prime_ = series::derivative(a_);
    offset_ = g.offset.to_cf();
    // solve_abel needs a one order beyond the requested psi order
    int n = std::min(opt_.asymptotic_order, g.a.truncation_order() - 1);
    if (n < 1)
        throw std::invalid_argument("fatou_coordinates: a must be known to order 2 or more");
    AbelSolution sol = solve_abel(g, n);
    psi_formal_ = sol.psi.to_float(opt_.bits);
    psi_formal_prime_ = series::derivative(psi_formal_);
}

CF FatouCoordinates::a_value(const CF& w) const
{
    CF x = w + offset_;
    if (to_double(abs(x)) < opt_.min_abs)
        throw std::domain_error("fatou_coordinates: orbit leaves the validity domain of a");
    return series::evaluate(a_, x);
}

CF FatouCoordinates::a_derivative(const CF& w) const { return series::evaluate(a_prime_, w + offset_); }

CF FatouCoordinates::f(const CF& z) const
{
    PrecisionScope scope(opt_.bits);
    return z + cone() + a_value(z);
}

CF FatouCoordinates::f_inverse(const CF& z) const
{
    PrecisionScope scope(opt_.bits);
    CF w = z - cone();
    Real tol = epsilon_for_bits(opt_.bits - 8) * std::max(Real(1), abs(z));
    for (int it = 0; it < opt_.max_newton; ++it) {
        CF r = w + cone() + a_value(w) - z;
        CF step = r / (cone() + a_derivative(w));
        w -= step;
        if (abs(step) <= tol)
            return w;
    }
    throw std::runtime_error("fatou_coordinates: Newton iteration for the inverse germ did not converge");
}

CF FatouCoordinates::psi_formal(const CF& z) const
{
    PrecisionScope scope(opt_.bits);
    return series::evaluate(psi_formal_, z);
}

CF FatouCoordinates::psi_formal_derivative(const CF& z) const
{
    PrecisionScope scope(opt_.bits);
    return series::evaluate(psi_formal_prime_, z);
}

CF FatouCoordinates::psi(const CF& z_in, Side side, long* terms) const { return orbit(z_in, side, terms, nullptr); }

// psi along the orbit; `derivative` (when given) receives psi'(z), carried
// through the chain rule dw_{k+1} = (1 + a'(w_k)) dw_k.
CF FatouCoordinates::orbit(const CF& z_in, Side side, long* terms, CF* derivative) const
{
    PrecisionScope scope(opt_.bits);
    CF w(Real(z_in.re), Real(z_in.im));
    CF acc = czero(), dacc = czero(), dw = cone();
    long k = 0;
    auto done = [&](const CF& x) {
        if (to_double(abs(x)) < opt_.tail_radius)
            return false;
        return side == Side::plus ? x.re >= 0 : x.re <= 0;
    };
    if (side == Side::plus) {
        while (!done(w)) {
            CF av = a_value(w);
            acc += av;
            if (derivative) {
                CF ad = a_derivative(w);
                dacc += ad * dw;
                dw *= cone() + ad;
            }
            w = w + cone() + av;
            if (++k > opt_.max_terms)
                throw BudgetExceeded("fatou_coordinates: orbit did not reach the asymptotic region");
        }
    } else {
        while (!done(w)) {
            w = f_inverse(w);
            acc -= a_value(w);
            if (derivative) {
                CF ad = a_derivative(w);
                dw /= cone() + ad;
                dacc -= ad * dw;
            }
            if (++k > opt_.max_terms)
                throw BudgetExceeded("fatou_coordinates: orbit did not reach the asymptotic region");
        }
    }
    if (terms)
        *terms = k;
    if (derivative)
        *derivative = dacc + series::evaluate(psi_formal_prime_, w) * dw;
    return acc + series::evaluate(psi_formal_, w);
}

CF FatouCoordinates::u(const CF& z_in, Side side) const
{
    PrecisionScope scope(opt_.bits);
    CF z(Real(z_in.re), Real(z_in.im));
    CF x = z - series::evaluate(psi_formal_, z);
    Real tol = Real(opt_.tol) * std::max(Real(1), abs(z));
    for (int it = 0; it < opt_.max_newton; ++it) {
        CF d;
        CF r = x + orbit(x, side, nullptr, &d) - z;
        if (abs(r) <= tol)
            return x;
        x -= r / (cone() + d);
    }
    throw std::runtime_error("fatou_coordinates: Newton iteration for u did not converge");
}

FatouValue fatou_coordinates(const GermSpec& g, const CF& z, Side side, const FatouOptions& opt)
{
    FatouCoordinates fc(g, opt);
    PrecisionScope scope(opt.bits);
    FatouValue out;
    out.psi = fc.psi(z, side, &out.terms);
    out.v = z + out.psi;
    out.u = fc.u(z, side);
    out.error_estimate = opt.tol;
    return out;
}

// ---------------------------------------------------------------- Henon manifolds

HenonManifold::HenonManifold(int order, unsigned bits) : bits_(bits)
{
    x0_hat_ = borel(solve_henon(order));
    x0_hat_.minor.radius_hint = 2 * M_PI;
}

LaplaceResult HenonManifold::seed(Side side, const CF& z, const EvalPlan& plan) const
{
    EvalPlan p = plan;
    if (side == Side::minus)
        p.theta = plan.theta + M_PI;
    return laplace_sum(x0_hat_, p, z);
}

ManifoldPoint HenonManifold::evaluate(Side side, const CF& z_in, const EvalPlan& plan) const
{
    PrecisionScope scope(plan.bits);
    CF z(Real(z_in.re), Real(z_in.im));
    const double re = to_double(z.re);
    int n = side == Side::plus ? std::max(0, static_cast<int>(std::ceil(seed_abscissa - re)))
                               : std::max(0, static_cast<int>(std::ceil(re + seed_abscissa)));
    if (epsilon_for_bits(plan.bits) * (n + 2) > Real(plan.tol))
        throw BudgetExceeded("henon_manifold: working precision too low for the requested tolerance");
    EvalPlan sp = plan;
    sp.tol = plan.tol / (8.0 * (n + 2));

    ManifoldPoint out;
    out.steps = n + 1;
    Real ulp = epsilon_for_bits(plan.bits - 2);
    if (side == Side::plus) {
        // seeds at s, s+1 with s = z + n, then n + 1 backward steps
        CF s = z + CF(Real(n), Real(0));
        LaplaceResult r0 = seed(side, s, sp), r1 = seed(side, s + cone(), sp);
        CF x0 = r0.value, x1 = r1.value;  // x(t), x(t+1)
        // first-order error propagation: (dx(t), dx(t+1)) = J (dx(s), dx(s+1))
        CF j00 = cone(), j01 = czero(), j10 = czero(), j11 = cone();
        Real rounding(0);
        for (int k = 0; k <= n; ++k) {
            CF xm = x0 * Real(2) - x1 - x0 * x0;
            CF g = CF(Real(2), Real(0)) - x0 * Real(2);
            CF n0 = g * j00 - j10, n1 = g * j01 - j11;
            j10 = j00;
            j11 = j01;
            j00 = n0;
            j01 = n1;
            rounding += ulp * (abs(x0) * 3 + abs(x1)) * (n + 1);
            x1 = x0;
            x0 = xm;
        }
        // now x0 = x(z-1), x1 = x(z)
        double e_s = r0.error_estimate, e_s1 = r1.error_estimate;
        out.x = x1;
        out.y = x1 - x0;
        double ez = to_double(abs(j10)) * e_s + to_double(abs(j11)) * e_s1;
        double ezm = to_double(abs(j00)) * e_s + to_double(abs(j01)) * e_s1;
        out.error_estimate = ez + ezm + 2 * to_double(rounding);
    } else {
        // seeds at s-1, s with s = z - n, then n forward steps
        CF s = z - CF(Real(n), Real(0));
        LaplaceResult rm = seed(side, s - cone(), sp), r0 = seed(side, s, sp);
        CF xm = rm.value, x0 = r0.value;  // x(t-1), x(t)
        // (dx(t), dx(t-1)) = J (dx(s), dx(s-1))
        CF j00 = cone(), j01 = czero(), j10 = czero(), j11 = cone();
        Real rounding(0);
        for (int k = 0; k < n; ++k) {
            CF xp = x0 * Real(2) - xm - x0 * x0;
            CF g = CF(Real(2), Real(0)) - x0 * Real(2);
            CF n0 = g * j00 - j10, n1 = g * j01 - j11;
            j10 = j00;
            j11 = j01;
            j00 = n0;
            j01 = n1;
            rounding += ulp * (abs(x0) * 3 + abs(xm)) * (n + 1);
            xm = x0;
            x0 = xp;
        }
        double e_s = r0.error_estimate, e_sm = rm.error_estimate;
        out.x = x0;
        out.y = x0 - xm;
        double ez = to_double(abs(j00)) * e_s + to_double(abs(j01)) * e_sm;
        double ezm = to_double(abs(j10)) * e_s + to_double(abs(j11)) * e_sm;
        out.error_estimate = ez + ezm + 2 * to_double(rounding);
    }
    if (out.error_estimate > plan.tol)
        throw BudgetExceeded("henon_manifold: propagated error " + std::to_string(out.error_estimate) +
                             " exceeds the tolerance");
    return out;
}

ManifoldPoint henon_manifold(Side side, const CF& z, const EvalPlan& plan, int order)
{
    HenonManifold hm(order, plan.bits);
    return hm.evaluate(side, z, plan);
}

}  // namespace resurge
