#include "cli.hpp"

#include "config.hpp"
#include "json_io.hpp"
#include "literal.hpp"

#include "resurge/alien.hpp"
#include "resurge/resummation.hpp"
#include "resurge/solvers.hpp"
#include "resurge/stokes.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace resurge::cli {

namespace {

// What a command produces: a JSON result, or CSV rows with a header line.
struct Output {
    Json result;
    std::string csv_header;
    std::string csv_rows;
    bool failed = false;  // verification failure, reported with exit 5
};

struct Flags {
    std::string config_path;
    std::string output_path;
    std::optional<unsigned> prec;
    std::optional<double> tol;
    std::optional<int> order;
    std::optional<int> depth;
    std::optional<long> budget;
    std::optional<int> samples;
    std::optional<std::string> format;
    std::optional<int> threads;
};

Config effective_config(const Flags& f)
{
    Config c = load_config(f.config_path);
    Json over = Json::object();
    if (f.prec)
        over["precision_bits"] = *f.prec;
    if (f.tol)
        over["tol"] = *f.tol;
    if (f.order)
        over["order"] = *f.order;
    if (f.depth)
        over["richardson_depth"] = *f.depth;
    if (f.budget)
        over["budget"] = *f.budget;
    if (f.samples)
        over["fourier_samples"] = *f.samples;
    if (f.format)
        over["format"] = *f.format;
    if (f.threads)
        over["threads"] = *f.threads;
    c.merge(over);
    return c;
}

Side parse_side(const std::string& s)
{
    if (s == "plus" || s == "+")
        return Side::plus;
    if (s == "minus" || s == "-")
        return Side::minus;
    throw std::invalid_argument("side must be plus or minus");
}

EvalPlan make_plan(const Config& c, Side side, std::optional<double> theta)
{
    EvalPlan p;
    p.bits = c.precision_bits;
    p.tol = c.tol;
    p.nodes = c.quad_nodes;
    p.max_evaluations = c.budget;
    p.theta = theta ? *theta : (side == Side::plus ? 0.0 : M_PI);
    return p;
}

Json singularity_to_json(const SRSingularity& s)
{
    Json j;
    Json d = Json::array();
    for (const auto& x : s.delta)
        d.push_back(x.to_string());
    j["delta"] = std::move(d);
    j["minor"] = series_to_json(s.minor.series);
    return j;
}

Json entry_to_json(const StokesEntry& e)
{
    Json j = complex_to_json(e.value, 15);
    j["error"] = e.error;
    j["method"] = e.method;
    return j;
}

Json check(bool ok) { return ok; }

// ---------------------------------------------------------------- solve

Output solve_linear1(const Config& c, const std::string& a_text)
{
    FormalSeries a = parse_series_literal(a_text, Variable::z, c.order);
    LinearSolution sol = solve_linear_first(a);
    FormalSeries res = series::sub(series::sub(series::shift(sol.series, Scalar(1)), sol.series), a);
    Output o;
    o.result["solver"] = "linear1";
    o.result["input"] = series_to_json(a);
    o.result["phi"] = series_to_json(sol.series);
    o.result["borel"] = singularity_to_json(sol.borel);
    o.result["checks"]["difference_equation"] = check(res.is_zero());
    o.csv_rows = series_to_csv(sol.series, "phi");
    return o;
}

Output solve_linear2(const Config& c, const std::string& b_text)
{
    FormalSeries b = parse_series_literal(b_text, Variable::z, c.order);
    LinearSolution sol = solve_linear_second(b);
    FormalSeries res = series::sub(series::diff_P(sol.series), b);
    Output o;
    o.result["solver"] = "linear2";
    o.result["input"] = series_to_json(b);
    o.result["phi"] = series_to_json(sol.series);
    o.result["borel"] = singularity_to_json(sol.borel);
    o.result["checks"]["difference_equation"] = check(res.is_zero());
    o.csv_rows = series_to_csv(sol.series, "phi");
    return o;
}

Output solve_abel_cmd(const Config& c, const std::string& a_text, const std::string& offset)
{
    // the stage recursion reads a one order past the output truncation
    FormalSeries a = parse_series_literal(a_text, Variable::z, c.order + 1);
    GermSpec g(a, Scalar(parse_rational(offset)));
    AbelSolution sol = solve_abel(g, c.order);
    using namespace series;
    FormalSeries conj = sub(sub(shift(sol.phi, Scalar(1)), sol.phi), compose_shifted(g.shifted_a(), sol.phi));
    FormalSeries inv = add(sol.phi, compose_shifted(sol.psi, sol.phi));
    Output o;
    o.result["solver"] = "abel";
    o.result["input"] = series_to_json(a);
    o.result["offset"] = offset;
    o.result["phi"] = series_to_json(sol.phi);
    o.result["psi"] = series_to_json(sol.psi);
    o.result["phi_hat"] = series_to_json(sol.phi_hat.series);
    o.result["stages"] = sol.stages.size();
    o.result["checks"]["conjugacy"] = check(conj.is_zero());
    o.result["checks"]["inverse"] = check(inv.is_zero());
    o.csv_rows = series_to_csv(sol.phi, "phi") + series_to_csv(sol.psi, "psi");
    return o;
}

bool alternates(const FormalSeries& x0)
{
    for (int k = 1; 2 * k <= x0.truncation_order(); ++k) {
        Rational a = x0.coeff_exact(2 * k).re;
        if ((k % 2 ? Rational(-a) : a) <= 0)
            return false;
    }
    return true;
}

Output solve_henon_cmd(const Config& c)
{
    FormalSeries x0 = solve_henon(c.order);
    using namespace series;
    Output o;
    o.result["solver"] = "henon";
    o.result["x0"] = series_to_json(x0);
    o.result["checks"]["equation"] = check(add(diff_P(x0), mul(x0, x0)).is_zero());
    o.result["checks"]["sign_alternation"] = check(alternates(x0));
    o.result["checks"]["even"] = check(parity_part(x0, true).is_zero());
    o.csv_rows = series_to_csv(x0, "x0");
    return o;
}

Output solve_henon_lin_cmd(const Config& c)
{
    HenonLinearized lin = solve_henon_linearized(c.order);
    FormalSeries W = wronskian(lin.phi1, lin.phi2);
    FormalSeries x0 = solve_henon(c.order + 12);
    using namespace series;
    FormalSeries one = FormalSeries::constant(Variable::z, Scalar(1), W.truncation_order());
    Output o;
    o.result["solver"] = "henon-lin";
    o.result["phi1"] = series_to_json(lin.phi1);
    o.result["phi2"] = series_to_json(lin.phi2);
    o.result["wronskian"] = series_to_json(W);
    o.result["checks"]["wronskian_is_one"] = check(sub(W, one).is_zero());
    o.result["checks"]["wronskian_order"] = W.truncation_order();
    o.result["checks"]["phi2_equation"] =
        check(add(diff_P(lin.phi2), scale(mul(x0, lin.phi2), Scalar(2))).is_zero());
    o.csv_rows = series_to_csv(lin.phi1, "phi1") + series_to_csv(lin.phi2, "phi2");
    return o;
}

Output solve_formal_integral_cmd(const Config& c, int nb)
{
    if (nb < 1)
        throw std::invalid_argument("--order-b must be positive");
    TwoVarSeries x = formal_integral(nb, c.order);
    std::vector<FormalSeries> res = formal_integral_residual(x);
    bool residual_zero = true;
    for (const auto& r : res)
        residual_zero = residual_zero && r.is_zero();
    Output o;
    o.result["solver"] = "formal-integral";
    o.result["truncation_b"] = x.truncation_b;
    Json xs = Json::array();
    Json vals = Json::array();
    bool valuation_ok = true;
    for (std::size_t n = 0; n < x.coeffs_by_b_power.size(); ++n) {
        const FormalSeries& xn = x.coeffs_by_b_power[n];
        xs.push_back(series_to_json(xn));
        vals.push_back(xn.min_order());
        if (n >= 1 && xn.min_order() < -(6 * static_cast<int>(n) - 2))
            valuation_ok = false;
        o.csv_rows += series_to_csv(xn, "x" + std::to_string(n));
    }
    o.result["x"] = std::move(xs);
    o.result["valuations"] = std::move(vals);
    o.result["checks"]["residual"] = check(residual_zero);
    o.result["checks"]["valuation_bound"] = check(valuation_ok);
    return o;
}

Output solve_cohomological_cmd(const Config& c, const std::string& beta_text, int terms)
{
    if (terms < 1)
        throw std::invalid_argument("--terms must be positive");
    FormalSeries beta = beta_text == "exp" ? series::convergent_exp(c.order)
                                           : parse_series_literal(beta_text, Variable::b, c.order);
    CohomologicalSolution sol = solve_cohomological(beta, terms);
    std::vector<Rational> sin_coeffs = sin_gamma_coefficients(40);
    bool nonneg = std::all_of(sin_coeffs.begin(), sin_coeffs.end(), [](const Rational& q) { return q >= 0; });
    Output o;
    o.result["solver"] = "cohomological";
    o.result["beta"] = series_to_json(beta);
    Json g = Json::array();
    for (const auto& q : sol.gamma)
        g.push_back(to_string(q));
    o.result["gamma"] = std::move(g);
    Json psi = Json::array();
    for (std::size_t n = 0; n < sol.psi.size(); ++n) {
        psi.push_back(series_to_json(sol.psi[n]));
        o.csv_rows += series_to_csv(sol.psi[n], "psi" + std::to_string(n + 1));
    }
    o.result["psi"] = std::move(psi);
    o.result["checks"]["sin_coefficients_nonnegative"] = check(nonneg);
    return o;
}

// ---------------------------------------------------------------- sum

Output sum_cmd(const Config& c, const std::string& solver, const std::string& side_text, const std::string& z_text,
               const std::string& a_text, std::optional<double> theta)
{
    Side side = parse_side(side_text);
    CF z;
    {
        PrecisionScope s(c.precision_bits);
        z = to_cf(parse_complex_exact(z_text));
    }
    EvalPlan plan = make_plan(c, side, theta);
    Output o;
    o.result["solver"] = solver;
    o.result["side"] = side == Side::plus ? "plus" : "minus";
    o.result["z"] = z_text;
    auto emit = [&](const CF& v, double err, const std::string& method) {
        PrecisionScope s(c.precision_bits);
        o.result["value_re"] = to_string(v.re);
        o.result["value_im"] = to_string(v.im);
        o.result["method"] = method;
        o.result["error_estimate"] = err;
    };
    if (solver == "henon") {
        HenonManifold hm(c.henon_order, c.precision_bits);
        ManifoldPoint p = hm.evaluate(side, z, plan);
        emit(p.x, p.error_estimate, "borel-laplace+transport");
        PrecisionScope s(c.precision_bits);
        o.result["y_re"] = to_string(p.y.re);
        o.result["y_im"] = to_string(p.y.im);
        o.result["steps"] = p.steps;
        return o;
    }
    if (a_text.empty())
        throw std::invalid_argument("sum --solver " + solver + " needs --a");
    FormalSeries a = parse_series_literal(a_text, Variable::z, solver == "abel" ? c.order + 1 : c.order);
    LaplaceResult r;
    if (solver == "linear1")
        r = laplace_sum(solve_linear_first(a).borel, plan, z);
    else if (solver == "linear2")
        r = laplace_sum(solve_linear_second(a).borel, plan, z);
    else if (solver == "abel")
        r = laplace_sum(borel(solve_abel(GermSpec(a), c.order).phi), plan, z);
    else
        throw std::invalid_argument("unknown solver '" + solver + "'");
    emit(r.value, r.error_estimate, r.method);
    o.result["radius"] = r.radius;
    o.result["evaluations"] = r.evaluations;
    return o;
}

// ---------------------------------------------------------------- stokes

Output stokes_linear_cmd(const Config& c, const std::string& a_text, int M, double im_z, int samples)
{
    FormalSeries a = parse_series_literal(a_text, Variable::z, c.order);
    LinearStokes ls = linear_stokes(a, M, c.precision_bits, im_z, samples);
    Output o;
    Json A = Json::array();
    PrecisionScope s(c.precision_bits);
    for (const auto& [m, v] : ls.value) {
        Json e = complex_to_json(v);
        e["m"] = m;
        e["exact"] = sympoly_to_json(ls.exact.at(m));
        e["method"] = "linear";
        A.push_back(std::move(e));
    }
    o.result["A"] = std::move(A);
    o.result["input"] = series_to_json(a);
    o.result["sample_im"] = im_z;
    o.result["samples"] = samples;
    o.result["max_relative_error"] = ls.max_relative_error;
    return o;
}

Output stokes_henon_cmd(const Config& c, const std::string& method, double y0, int points)
{
    HenonParams p;
    p.order = c.henon_order;
    p.depth = c.richardson_depth;
    p.convergence = c.convergence;
    p.bits = c.precision_bits;
    p.y0 = y0;
    p.points = points;
    auto report = [&](const HenonConstants& h) {
        Json j;
        if (h.theta)
            j["theta"] = entry_to_json(*h.theta);
        if (h.mu)
            j["mu"] = entry_to_json(*h.mu);
        j["diagnostics"]["fit_residual"] = h.fit_residual;
        j["diagnostics"]["contamination"] = h.contamination;
        j["diagnostics"]["precision_bits"] = h.precision_bits;
        j["diagnostics"]["stages"] = h.stages;
        return j;
    };
    Output o;
    if (method == "large_order" || method == "splitting_fit") {
        o.result = report(henon_constants(method == "large_order" ? HenonMethod::large_order : HenonMethod::splitting_fit, p));
        return o;
    }
    if (method != "both")
        throw std::invalid_argument("method must be large_order, splitting_fit or both");
    HenonConstants lo = henon_constants(HenonMethod::large_order, p);
    HenonConstants fit = henon_constants(HenonMethod::splitting_fit, p);
    o.result["large_order"] = report(lo);
    o.result["splitting_fit"] = report(fit);
    PrecisionScope s(128);
    const double diff = to_double(abs(lo.theta->value - fit.theta->value));
    o.result["theta_difference"] = diff;
    o.result["theta_agree"] = diff <= lo.theta->error + fit.theta->error;
    return o;
}

Output stokes_horn_cmd(const Config& c, const std::string& a_text, const std::string& offset, double s_line, int M,
                       bool with_bridge)
{
    FormalSeries a = parse_series_literal(a_text, Variable::z, c.order + 1);
    GermSpec g(a, Scalar(parse_rational(offset)));
    HornMapOptions opt;
    opt.samples = c.fourier_samples;
    opt.max_periodicity = c.periodicity_tol;
    opt.fatou.tol = c.fatou_tol;
    opt.fatou.bits = c.precision_bits;
    HornMap h = horn_map_coeffs(g, s_line, M, opt);
    std::map<int, CF> A = passage_to_invariants(h.B, M);

    Output o;
    PrecisionScope scope(c.precision_bits);
    Json B = Json::array(), Aj = Json::array();
    for (const auto& [m, b] : h.B) {
        Json e = complex_to_json(b, 15);
        e["m"] = m;
        e["error"] = h.error.at(m);
        B.push_back(std::move(e));
    }
    for (const auto& [m, v] : A) {
        Json e = complex_to_json(v, 15);
        e["m"] = m;
        e["method"] = "horn_map";
        Aj.push_back(std::move(e));
    }
    o.result["B"] = std::move(B);
    o.result["A"] = std::move(Aj);
    o.result["diagnostics"]["periodicity_residual"] = h.periodicity_residual;
    o.result["diagnostics"]["constant_term"] = h.constant_term;
    o.result["diagnostics"]["samples"] = h.samples;
    o.result["diagnostics"]["s"] = h.s;
    if (with_bridge) {
        AbelSolution sol = solve_abel(GermSpec(a.to_float(c.precision_bits), g.offset), c.order);
        BridgeResidues r = bridge_residues(sol.phi_hat, c.richardson_depth, c.convergence, c.precision_bits);
        Json br;
        br["A_plus"] = complex_to_json(r.A_plus, 15);
        br["A_plus"]["error"] = r.error_plus;
        br["A_minus"] = complex_to_json(r.A_minus, 15);
        br["A_minus"]["error"] = r.error_minus;
        br["terms"] = r.terms;
        if (A.count(1) && A.count(-1)) {
            const double dp = to_double(abs(A.at(1) - r.A_plus));
            const double dm = to_double(abs(A.at(-1) - r.A_minus));
            br["agree_plus"] = dp <= r.error_plus + h.error.at(1);
            br["agree_minus"] = dm <= r.error_minus + h.error.at(-1);
        }
        o.result["bridge"] = std::move(br);
    }
    return o;
}

// ---------------------------------------------------------------- verify

Output verify_alien_cmd(int max_grade)
{
    if (max_grade < 1 || max_grade > 12)
        throw std::invalid_argument("--max-grade must lie in [1, 12]");
    Output o;
    Json grades = Json::array();
    for (int m = 1; m <= max_grade; ++m) {
        IdentityCheck d = verify_delta_identity(m);
        IdentityCheck b = verify_B_identity(m);
        Json g;
        g["grade"] = m;
        g["delta_paths_equals_log"] = d.ok;
        g["B_identity"] = b.ok;
        if (!d.ok)
            g["delta_witness"] = d.witness;
        if (!b.ok)
            g["B_witness"] = b.witness;
        g["pass"] = d.ok && b.ok;
        o.failed = o.failed || !(d.ok && b.ok);
        grades.push_back(std::move(g));
    }
    IdentityCheck e = verify_exp_log(max_grade);
    o.result["grades"] = std::move(grades);
    o.result["exp_log"] = e.ok;
    if (!e.ok)
        o.result["exp_log_witness"] = e.witness;
    o.failed = o.failed || !e.ok;
    o.result["pass"] = !o.failed;
    return o;
}

Output verify_roundtrip_cmd(const Config& c, int M, unsigned seed)
{
    if (M < 1 || M > 12)
        throw std::invalid_argument("--m must lie in [1, 12]");
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    std::map<int, SymPoly> A;
    for (int m = 1; m <= M; ++m) {
        A[m] = SymPoly(CQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
        A[-m] = SymPoly(CQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    }
    Output o;
    Json checks;

    Passage p = invariants_to_passage(A, M);
    std::map<int, SymPoly> B;
    for (int m = 1; m <= M; ++m) {
        B[m] = p.Q.at(m);
        B[-m] = p.P.at(-m);
    }
    checks["passage_round_trip"] = passage_to_invariants(B, M) == A;
    std::string witness;
    checks["passage_maps_inverse"] = passage_maps_inverse(p, M, &witness);
    FlowCheck f = stokes_flow_check(A, M);
    checks["stokes_flow"] = f.ok;
    if (!f.ok)
        o.result["flow_witness"] = f.witness;
    if (!witness.empty())
        o.result["inverse_witness"] = witness;

    FormalSeries x0 = solve_henon(c.order);
    checks["series_text_round_trip"] = FormalSeries::from_text(x0.to_text()) == x0;
    checks["series_json_round_trip"] = series_from_json(Json::parse(series_to_json(x0).dump())) == x0;
    checks["borel_round_trip"] = inverse_borel(borel(x0)) == x0;

    bool ok = true;
    for (auto& [k, v] : checks.items())
        ok = ok && v.get<bool>();
    o.result["m"] = M;
    o.result["seed"] = seed;
    o.result["checks"] = std::move(checks);
    o.result["pass"] = ok;
    o.failed = !ok;
    return o;
}

Output verify_residuals_cmd(const Config& c, int nb)
{
    using namespace series;
    Json checks;
    FormalSeries x0 = solve_henon(c.order);
    checks["henon_equation"] = add(diff_P(x0), mul(x0, x0)).is_zero();
    checks["henon_sign_alternation"] = alternates(x0);
    HenonLinearized lin = solve_henon_linearized(c.order + 6);
    FormalSeries W = wronskian(lin.phi1, lin.phi2);
    checks["wronskian_is_one"] =
        sub(W, FormalSeries::constant(Variable::z, Scalar(1), W.truncation_order())).is_zero();
    TwoVarSeries x = formal_integral(nb, c.order);
    bool res = true, val = true;
    for (const auto& r : formal_integral_residual(x))
        res = res && r.is_zero();
    for (int n = 1; n < static_cast<int>(x.coeffs_by_b_power.size()); ++n)
        val = val && x.coeffs_by_b_power[static_cast<std::size_t>(n)].min_order() >= -(6 * n - 2);
    checks["formal_integral_residual"] = res;
    checks["formal_integral_valuation"] = val;
    std::vector<Rational> s = sin_gamma_coefficients(40);
    checks["sin_coefficients_nonnegative"] =
        std::all_of(s.begin(), s.end(), [](const Rational& q) { return q >= 0; });

    Output o;
    bool ok = true;
    for (auto& [k, v] : checks.items())
        ok = ok && v.get<bool>();
    o.result["checks"] = std::move(checks);
    o.result["wronskian_order"] = W.truncation_order();
    o.result["pass"] = ok;
    o.failed = !ok;
    return o;
}

// ---------------------------------------------------------------- export-plot

struct PlotArgs {
    std::string kind = "coefficients";
    std::string side = "plus";
    double im = -2;
    double re_min = 10;
    double re_max = 11;
    int points = 16;
    long m_max = 400;
};

Output export_plot_cmd(const Config& c, const PlotArgs& a)
{
    if (a.points < 2)
        throw std::invalid_argument("--points must be at least 2");
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    PrecisionScope scope(c.precision_bits);
    auto line = [&](int i) {
        double re = a.re_min + (a.re_max - a.re_min) * i / (a.points - 1);
        return CF(Real(re), Real(a.im));
    };
    if (a.kind == "coefficients") {
        columns = {"k", "a_k", "log10_abs"};
        FormalSeries x0 = solve_henon(c.order);
        for (int k = 1; 2 * k <= c.order; ++k) {
            Real v = to_real(x0.coeff_exact(2 * k).re);
            rows.push_back({std::to_string(k), to_string(v, 20),
                            to_string(Real(boost::multiprecision::log10(boost::multiprecision::abs(v))), 12)});
        }
    } else if (a.kind == "manifold" || a.kind == "splitting") {
        HenonManifold hm(c.henon_order, c.precision_bits);
        EvalPlan pp = make_plan(c, Side::plus, std::nullopt), pm = make_plan(c, Side::minus, std::nullopt);
        if (a.kind == "manifold") {
            Side side = parse_side(a.side);
            columns = {"re_z", "im_z", "x_re", "x_im", "error"};
            for (int i = 0; i < a.points; ++i) {
                CF z = line(i);
                ManifoldPoint p = hm.evaluate(side, z, side == Side::plus ? pp : pm);
                rows.push_back({to_string(z.re, 17), to_string(z.im, 17), to_string(p.x.re, 30), to_string(p.x.im, 30),
                                to_string(Real(p.error_estimate), 6)});
            }
        } else {
            columns = {"re_z", "im_z", "diff_re", "diff_im", "error"};
            for (int i = 0; i < a.points; ++i) {
                CF z = line(i);
                ManifoldPoint p = hm.evaluate(Side::plus, z, pp), q = hm.evaluate(Side::minus, z, pm);
                CF d = p.x - q.x;
                rows.push_back({to_string(z.re, 17), to_string(z.im, 17), to_string(d.re, 30), to_string(d.im, 30),
                                to_string(Real(p.error_estimate + q.error_estimate), 6)});
            }
        }
    } else if (a.kind == "gamma-hat") {
        columns = {"M", "abs_error"};
        CF one(Real(1), Real(0));
        CF target = gamma_hat(one, 40);
        for (int i = 0; i < a.points; ++i) {
            long M = std::max(1L, a.m_max * (i + 1) / a.points);
            rows.push_back({std::to_string(M), to_string(abs(gamma_hat_nu_sum(one, M) - target), 17)});
        }
    } else {
        throw std::invalid_argument("unknown plot kind '" + a.kind + "'");
    }
    Output o;
    o.result["kind"] = a.kind;
    o.result["columns"] = columns;
    o.result["rows"] = rows;
    for (std::size_t i = 0; i < columns.size(); ++i)
        o.csv_header += (i ? "," : "") + columns[i];
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            o.csv_rows += (i ? "," : "") + r[i];
        o.csv_rows += '\n';
    }
    return o;
}

// ---------------------------------------------------------------- driver

constexpr const char* kLiteralHelp =
    "Series literals: terms c*z^-n joined by + or -, c rational (p/q, decimal) or "
    "(complex) such as (1/2-3i); e.g. \"1/10*z^-2 - 0.05*z^-3\".";

void write_artifact(std::ostream& out, const std::string& command, const std::vector<std::string>& args,
                    const Config& c, const Output& o, bool csv)
{
    if (csv) {
        Json echo;
        echo["schema"] = kSchemaId;
        echo["command"] = command;
        echo["config"] = c.to_json();
        out << "# " << echo.dump() << '\n';
        if (!o.csv_header.empty())
            out << o.csv_header << '\n';
        else
            out << "series,order,re,im\n";
        out << o.csv_rows;
        return;
    }
    Json doc;
    doc["schema"] = kSchemaId;
    doc["command"] = command;
    doc["arguments"] = args;
    doc["config"] = c.to_json();
    doc["result"] = o.result;
    out << doc.dump(2) << '\n';
}

void write_error(std::ostream& out, const std::string& command, int code, const std::string& message)
{
    Json doc;
    doc["schema"] = kSchemaId;
    doc["command"] = command;
    doc["error"]["code"] = code;
    doc["error"]["message"] = message;
    out << doc.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Resurgence toolkit: formal solvers, Borel-Laplace sums and Stokes constants.\n" +
                 std::string(kLiteralHelp)};
    app.name("resurge");
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--config", flags.config_path, std::string("JSON config file (default: $") + kConfigEnv + ")");
    app.add_option("--output,-o", flags.output_path, "Write the artifact to this file");
    app.add_option("--prec", flags.prec, "Working precision in bits");
    app.add_option("--tol", flags.tol, "Laplace tolerance");
    app.add_option("--order", flags.order, "Truncation order");
    app.add_option("--depth", flags.depth, "Richardson depth");
    app.add_option("--budget", flags.budget, "Integrand evaluations per Laplace sum");
    app.add_option("--samples", flags.samples, "Fourier samples per horn-map line");
    app.add_option("--format", flags.format, "json or csv");
    app.add_option("--threads", flags.threads, "Parallelism degree");

    std::string command;
    std::function<Output(const Config&)> action;
    bool csv_allowed = false;
    using Action = std::function<Output(const Config&)>;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, bool csv, Action fn) {
        CLI::App* s = parent->add_subcommand(name, desc);
        s->fallthrough();
        s->callback([&, name, parent, csv, fn] {
            command = parent->get_name().empty() ? name : parent->get_name() + " " + name;
            csv_allowed = csv;
            action = fn;
        });
        return s;
    };

    // solve
    CLI::App* solve = app.add_subcommand("solve", "Formal solutions of the difference equations");
    solve->require_subcommand(1);
    solve->fallthrough();
    std::string a_text = "1/10*z^-2", b_text = "z^-3", offset = "0", beta = "exp";
    int order_b = 4, terms = 3;
    {
        auto* s = leaf(solve, "linear1", "phi(z+1) - phi(z) = a(z)", true,
                 [&](const Config& c) { return solve_linear1(c, a_text); });
        s->add_option("--a", a_text, "Right-hand side a(z)");
        s = leaf(solve, "linear2", "phi(z+1) - 2 phi(z) + phi(z-1) = b(z)", true,
                 [&](const Config& c) { return solve_linear2(c, b_text); });
        s->add_option("--b", b_text, "Right-hand side b(z)");
        s = leaf(solve, "abel", "Abel equation for f(z) = z + 1 + a(z + offset)", true,
                 [&](const Config& c) { return solve_abel_cmd(c, a_text, offset); });
        s->add_option("--a", a_text, "Perturbation a(z)");
        s->add_option("--offset", offset, "Conjugating translation c");
        s = leaf(solve, "henon", "Even formal solution x0 of the Henon separatrix equation", true,
                 [&](const Config& c) { return solve_henon_cmd(c); });
        s = leaf(solve, "henon-lin", "Solutions phi1, phi2 of the linearized equation", true,
                 [&](const Config& c) { return solve_henon_lin_cmd(c); });
        s = leaf(solve, "formal-integral", "Two-parameter formal integral x(z, b)", true,
                 [&](const Config& c) { return solve_formal_integral_cmd(c, order_b); });
        s->add_option("--order-b", order_b, "Highest power of b");
        s = leaf(solve, "cohomological", "Cohomological equation with a beta(t) source", true,
                 [&](const Config& c) { return solve_cohomological_cmd(c, beta, terms); });
        s->add_option("--beta", beta, "beta(t) as a literal in t, or exp");
        s->add_option("--terms", terms, "Number of psi_n");
    }

    // sum
    std::string solver = "henon", side = "plus", z_text = "20-2i", sum_a;
    std::optional<double> theta;
    {
        CLI::App* s = app.add_subcommand("sum", "Borel-Laplace sum of a formal solution");
        s->fallthrough();
        s->add_option("--solver", solver, "henon, linear1, linear2 or abel");
        s->add_option("--side", side, "plus or minus");
        s->add_option("--z", z_text, "Evaluation point, e.g. 20-2i");
        s->add_option("--a", sum_a, "Right-hand side or perturbation for the non-Henon solvers");
        s->add_option("--theta", theta, "Ray direction (default 0 for plus, pi for minus)");
        s->callback([&] {
            command = "sum";
            action = [&](const Config& c) { return sum_cmd(c, solver, side, z_text, sum_a, theta); };
        });
    }

    // stokes
    CLI::App* stokes = app.add_subcommand("stokes", "Stokes constants");
    stokes->require_subcommand(1);
    stokes->fallthrough();
    int M = 3, points = 8, lin_samples = 8;
    double im_z = -3, y0 = 10, s_line = 2;
    std::string method = "large_order", horn_a = "1/10*z^-2", horn_offset = "0", lin_a = "z^-2";
    bool with_bridge = false;
    {
        auto* s = leaf(stokes, "linear", "A_m for phi(z+1) - phi(z) = a(z) with polynomial a", false,
                       [&](const Config& c) { return stokes_linear_cmd(c, lin_a, M, im_z, lin_samples); });
        s->add_option("--a", lin_a, "a(z)");
        s->add_option("--m", M, "Largest m");
        s->add_option("--im", im_z, "Im z of the sampling line");
        s->add_option("--points", lin_samples, "Sample points for the measured difference");
        s = leaf(stokes, "henon", "Theta and mu for the Henon separatrix", false,
                 [&](const Config& c) { return stokes_henon_cmd(c, method, y0, points); });
        s->add_option("--method", method, "large_order, splitting_fit or both");
        s->add_option("--y0", y0, "Sampling height |Im z| for splitting_fit");
        s->add_option("--points", points, "Sampling points for splitting_fit");
        s = leaf(stokes, "horn", "Horn-map coefficients B_m and invariants A_m of a parabolic germ", false,
                 [&](const Config& c) { return stokes_horn_cmd(c, horn_a, horn_offset, s_line, M, with_bridge); });
        s->add_option("--a", horn_a, "Perturbation a(z) of f(z) = z + 1 + a(z)");
        s->add_option("--offset", horn_offset, "Conjugating translation c");
        s->add_option("--s", s_line, "Half-height of the sampling lines Im z = -s, +s");
        s->add_option("--m", M, "Largest |m|");
        s->add_flag("--bridge", with_bridge, "Also estimate A from the Borel large-order behaviour");
    }

    // verify
    CLI::App* verify = app.add_subcommand("verify", "Invariant suites; exit 5 on any failure");
    verify->require_subcommand(1);
    verify->fallthrough();
    int max_grade = 8, rt_m = 6, nb = 4;
    unsigned seed = 1;
    {
        auto* s = leaf(verify, "alien", "Alien-derivation identities per grade", false,
                       [&](const Config&) { return verify_alien_cmd(max_grade); });
        s->add_option("--max-grade", max_grade, "Highest grade");
        s = leaf(verify, "roundtrip", "Mould, passage, flow, Borel and serialization round trips", false,
                 [&](const Config& c) { return verify_roundtrip_cmd(c, rt_m, seed); });
        s->add_option("--m", rt_m, "Order of the mould checks");
        s->add_option("--seed", seed, "Seed for the random invariants");
        s = leaf(verify, "residuals", "Exact residuals of the Henon solvers", false,
                 [&](const Config& c) { return verify_residuals_cmd(c, nb); });
        s->add_option("--order-b", nb, "Highest power of b in the formal integral");
    }

    // export-plot
    PlotArgs plot;
    {
        CLI::App* s = app.add_subcommand("export-plot", "Plot-ready sampled data (no plotting)");
        s->fallthrough();
        s->add_option("--kind", plot.kind, "coefficients, manifold, splitting or gamma-hat");
        s->add_option("--side", plot.side, "plus or minus (manifold)");
        s->add_option("--im", plot.im, "Im z of the sampled line");
        s->add_option("--re-min", plot.re_min, "First Re z");
        s->add_option("--re-max", plot.re_max, "Last Re z");
        s->add_option("--points", plot.points, "Number of samples");
        s->add_option("--m-max", plot.m_max, "Largest truncation M (gamma-hat)");
        s->callback([&] {
            command = "export-plot";
            csv_allowed = true;
            action = [&](const Config& c) { return export_plot_cmd(c, plot); };
        });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        write_error(out, command, exit_code::invalid_args, e.what());
        return exit_code::invalid_args;
    }
    if (!action) {
        err << "no command given\n";
        return exit_code::invalid_args;
    }

    auto fail = [&](int code, const std::string& message) {
        err << message << '\n';
        write_error(out, command, code, message);
        return code;
    };
    try {
        Config c = effective_config(flags);
        const bool csv = c.format == "csv";
        if (csv && !csv_allowed)
            throw std::invalid_argument("CSV output is limited to coefficient tables and plot data");
        Output o = action(c);
        std::ostringstream buf;
        write_artifact(buf, command, args, c, o, csv);
        if (flags.output_path.empty()) {
            out << buf.str();
        } else {
            std::ofstream f(flags.output_path);
            if (!f)
                throw std::invalid_argument("cannot write '" + flags.output_path + "'");
            f << buf.str();
        }
        if (o.failed) {
            err << command << ": verification failed\n";
            return exit_code::verification_failed;
        }
        return exit_code::ok;
    } catch (const BudgetExceeded& e) {
        return fail(exit_code::budget, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_code::invalid_args, e.what());
    } catch (const std::exception& e) {
        return fail(exit_code::solver_error, e.what());
    }
}

}  // namespace resurge::cli
