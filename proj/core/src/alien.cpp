#include "resurge/alien.hpp"

#include "resurge/stokes.hpp"

#include <functional>
#include <stdexcept>

namespace resurge {

namespace {

void check_grade(int m, const char* what)
{
    if (m < 1)
        throw std::invalid_argument(std::string(what) + ": grade must be positive");
}

// Calls f for every expansion of the D letters of w into l+ (sign +1) and l- (sign -1).
void expand_letter(const std::string& w, char target, const std::string& replacements,
                   const std::function<void(const std::string&, int)>& f)
{
    const auto pos = w.find(target);
    if (pos == std::string::npos) {
        f(w, 1);
        return;
    }
    // S -> A + l+ - l-, D -> l+ - l-
    for (char r : replacements) {
        std::string next = w;
        next[pos] = r;
        int sign = r == letter::minus ? -1 : 1;
        expand_letter(next, target, replacements, [&](const std::string& x, int s) { f(x, sign * s); });
    }
}

std::string compositions_word(const std::vector<int>& parts)
{
    // S l+^{k_1 - 1} mu S l+^{k_2 - 1} mu ...
    std::string w;
    for (int k : parts) {
        w += letter::S;
        w.append(static_cast<std::size_t>(k - 1), letter::plus);
        w += letter::mu;
    }
    return w;
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

IdentityCheck compare(const OperatorPoly& a, const OperatorPoly& b)
{
    IdentityCheck out;
    OperatorPoly d = a - b;
    if (d.is_zero())
        return out;
    const std::string& w = d.terms().begin()->first;
    out.ok = false;
    out.witness = "word '" + w + "': " + to_string(a.coeff(w)) + " vs " + to_string(b.coeff(w));
    return out;
}

}  // namespace

// ---------------------------------------------------------------- OperatorPoly

OperatorPoly OperatorPoly::identity() { return word(""); }

OperatorPoly OperatorPoly::word(const Word& w, const Rational& c)
{
    OperatorPoly p;
    p.add(w, c);
    return p;
}

Rational OperatorPoly::coeff(const Word& w) const
{
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

void OperatorPoly::add(const Word& w, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

int OperatorPoly::grade(const Word& w)
{
    int g = 0;
    for (char c : w)
        if (c != letter::mu)
            ++g;
    return g;
}

OperatorPoly OperatorPoly::reduced() const
{
    OperatorPoly out;
    const std::string rewrite_from = {letter::mu, letter::S};
    for (const auto& [w0, c] : terms_) {
        std::string w = w0;
        for (auto pos = w.find(rewrite_from); pos != std::string::npos; pos = w.find(rewrite_from))
            w.replace(pos, 2, 1, letter::D);
        expand_letter(w, letter::D, {letter::plus, letter::minus},
                      [&](const std::string& x, int s) { out.add(x, s > 0 ? c : Rational(-c)); });
    }
    return out;
}

OperatorPoly OperatorPoly::expanded() const
{
    OperatorPoly r = reduced(), out;
    for (const auto& [w, c] : r.terms_)
        expand_letter(w, letter::S, {letter::A, letter::plus, letter::minus},
                      [&](const std::string& x, int s) { out.add(x, s > 0 ? c : Rational(-c)); });
    return out;
}

OperatorPoly OperatorPoly::grade_part(int m) const
{
    OperatorPoly out;
    for (const auto& [w, c] : terms_)
        if (grade(w) == m)
            out.add(w, c);
    return out;
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& o)
{
    for (const auto& [w, c] : o.terms_)
        add(w, c);
    return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& o)
{
    for (const auto& [w, c] : o.terms_)
        add(w, -c);
    return *this;
}

OperatorPoly& OperatorPoly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, v] : terms_)
        v *= c;
    return *this;
}

OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b)
{
    OperatorPoly out;
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_)
            out.add(wa + wb, ca * cb);
    return out;
}

std::string OperatorPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string s;
    for (const auto& [w, c] : terms_) {
        std::string cs = resurge::to_string(c);
        if (!s.empty())
            s += cs[0] == '-' ? " - " : " + ";
        else if (cs[0] == '-')
            s += "-";
        if (cs[0] == '-')
            cs.erase(0, 1);
        s += cs + "*[" + w + "]";
    }
    return s;
}

// ---------------------------------------------------------------- alien derivations

Rational path_weight(int p, int q)
{
    return factorial_q(static_cast<unsigned>(p)) * factorial_q(static_cast<unsigned>(q)) /
           factorial_q(static_cast<unsigned>(p + q + 1));
}

OperatorPoly delta_by_paths(int m)
{
    check_grade(m, "delta_by_paths");
    OperatorPoly out;
    const int n = m - 1;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        // bit r-1 set: eps_r = -; the word lists eps_{m-1} first
        std::string mid;
        int q = 0;
        for (int r = n; r >= 1; --r) {
            bool minus = (mask >> (r - 1)) & 1u;
            mid += minus ? letter::minus : letter::plus;
            q += minus;
        }
        out += OperatorPoly::word(std::string(1, letter::S) + mid + letter::mu, path_weight(n - q, q));
    }
    return out.reduced();
}

OperatorPoly delta_plus(int m)
{
    check_grade(m, "delta_plus");
    return OperatorPoly::word(compositions_word({m}));
}

std::map<std::vector<int>, Rational> log_in_delta_plus(int m)
{
    check_grade(m, "log_in_delta_plus");
    std::map<std::vector<int>, Rational> out;
    std::vector<int> parts;
    for_each_composition(m, parts, [&](const std::vector<int>& p) {
        const int r = static_cast<int>(p.size());
        out[p] = Rational(r % 2 ? 1 : -1, r);
    });
    return out;
}

OperatorPoly delta_by_log(int m)
{
    OperatorPoly out;
    for (const auto& [parts, c] : log_in_delta_plus(m))
        out += OperatorPoly::word(compositions_word(parts), c);
    return out.reduced();
}

IdentityCheck verify_B_identity(int m)
{
    check_grade(m, "verify_B_identity");
    // sum over m_1 + ... + m_r + r = m of (-1)^{r-1}/r l+^{m_1} D l+^{m_2} ... D l+^{m_r}
    OperatorPoly lhs;
    std::vector<int> parts;
    for_each_composition(m, parts, [&](const std::vector<int>& p) {
        const int r = static_cast<int>(p.size());
        std::string w;
        for (int i = 0; i < r; ++i) {
            if (i > 0)
                w += letter::D;
            w.append(static_cast<std::size_t>(p[static_cast<std::size_t>(i)] - 1), letter::plus);
        }
        lhs += OperatorPoly::word(w, Rational(r % 2 ? 1 : -1, r));
    });
    lhs = lhs.reduced();

    OperatorPoly rhs;
    const int n = m - 1;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        std::string w;
        int q = 0;
        for (int r = n; r >= 1; --r) {
            bool minus = (mask >> (r - 1)) & 1u;
            w += minus ? letter::minus : letter::plus;
            q += minus;
        }
        rhs += OperatorPoly::word(w, path_weight(n - q, q));
    }
    return compare(lhs, rhs);
}

IdentityCheck verify_delta_identity(int m) { return compare(delta_by_paths(m), delta_by_log(m)); }

namespace {

// Product of two graded series truncated at grade T, reduced.
GradedSeries graded_mul(const GradedSeries& a, const GradedSeries& b, int T)
{
    GradedSeries out;
    out.truncation = T;
    for (const auto& [ga, pa] : a.components)
        for (const auto& [gb, pb] : b.components)
            if (ga + gb <= T)
                out.components[ga + gb] += (pa * pb).reduced();
    return out;
}

void check_positive(const GradedSeries& x)
{
    for (const auto& [g, p] : x.components)
        if (g < 1 && !p.is_zero())
            throw std::invalid_argument("graded series: grade-0 part must vanish");
}

}  // namespace

GradedSeries graded_log(const GradedSeries& x)
{
    check_positive(x);
    const int T = x.truncation;
    GradedSeries out, power = x;
    out.truncation = T;
    for (int r = 1; r <= T && !power.components.empty(); ++r) {
        for (const auto& [g, p] : power.components)
            out.components[g] += p * Rational(r % 2 ? 1 : -1, r);
        power = graded_mul(power, x, T);
    }
    return out;
}

GradedSeries graded_exp(const GradedSeries& x)
{
    check_positive(x);
    const int T = x.truncation;
    GradedSeries out, power = x;
    out.truncation = T;
    Rational inv_fact(1);
    for (int r = 1; r <= T && !power.components.empty(); ++r) {
        inv_fact /= r;
        for (const auto& [g, p] : power.components)
            out.components[g] += p * inv_fact;
        power = graded_mul(power, x, T);
    }
    return out;
}

IdentityCheck verify_exp_log(int M)
{
    check_grade(M, "verify_exp_log");
    GradedSeries logs;
    logs.truncation = M;
    for (int m = 1; m <= M; ++m)
        logs.components[m] = delta_by_log(m);
    GradedSeries e = graded_exp(logs);
    for (int m = 1; m <= M; ++m) {
        IdentityCheck c = compare(e.components[m].reduced(), delta_plus(m).reduced());
        if (!c.ok) {
            c.witness = "grade " + std::to_string(m) + ", " + c.witness;
            return c;
        }
    }
    return {};
}

// ---------------------------------------------------------------- flows and moulds

FlowCheck stokes_flow_check(const std::map<int, SymPoly>& A, int M)
{
    if (M < 1)
        throw std::invalid_argument("stokes_flow_check: order must be positive");
    FlowCheck out;
    const SymPoly L = SymPoly::symbol(kTwoPiI);
    for (int s : {1, -1}) {
        bool active = false;
        for (const auto& [m, a] : A)
            active = active || m * s > 0;
        if (!active)
            continue;
        // V = sum A_{s m} w^{m+1}, D f = -s L V f'
        WSeries V(static_cast<std::size_t>(M + 2));
        for (int m = 1; m <= M; ++m)
            if (auto it = A.find(s * m); it != A.end())
                V[static_cast<std::size_t>(m + 1)] = it->second * L * CQ(Rational(-s));
        auto apply = [&](const WSeries& f) {
            WSeries df(static_cast<std::size_t>(M + 2));
            for (int k = 1; k <= M + 1; ++k)
                df[static_cast<std::size_t>(k - 1)] = f[static_cast<std::size_t>(k)] * CQ(Rational(k));
            return wseries_mul(V, df, M + 1);
        };
        // exp(D) w
        WSeries term(static_cast<std::size_t>(M + 2)), image(static_cast<std::size_t>(M + 2));
        term[1] = SymPoly(1);
        image[1] = SymPoly(1);
        for (int k = 1; k <= M; ++k) {
            term = apply(term);
            for (auto& c : term)
                c *= CQ(Rational(1, k));
            for (int j = 0; j <= M + 1; ++j)
                image[static_cast<std::size_t>(j)] += term[static_cast<std::size_t>(j)];
        }
        // image = w exp(-s L P(w))
        WSeries ratio(image.begin() + 1, image.end());
        WSeries lg = wseries_log(ratio, M);
        for (int m = 1; m <= M; ++m)
            out.P_flow[s * m] = (lg[static_cast<std::size_t>(m)] * CQ(Rational(-s))).divide_by_symbol(kTwoPiI);
    }
    Passage p = invariants_to_passage(A, M);
    out.P_mould = p.P;
    out.Q_mould = p.Q;
    for (const auto& [m, v] : out.P_flow) {
        if (v != out.P_mould[m]) {
            out.ok = false;
            out.witness = "P at omega = " + std::to_string(m) + " (2 pi i): flow " + v.to_string() + " vs mould " +
                          out.P_mould[m].to_string();
            return out;
        }
    }
    Passage q{out.Q_mould, out.P_flow};
    out.ok = passage_maps_inverse(q, M, &out.witness);
    return out;
}

SymPoly bridge_iteration_mould(const std::vector<int>& ms, const std::map<int, SymPoly>& A)
{
    if (ms.empty())
        throw std::invalid_argument("bridge_iteration_mould: empty word");
    SymPoly prod = -mould_gamma_exact(ms);
    for (int m : ms) {
        if (m == 0)
            throw std::invalid_argument("bridge_iteration_mould: omega must be nonzero");
        auto it = A.find(m);
        prod *= it != A.end() ? it->second : SymPoly::symbol("A" + std::to_string(m));
    }
    return prod;
}

}  // namespace resurge
