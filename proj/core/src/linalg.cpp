#include "resurge/linalg.hpp"

#include <stdexcept>

namespace resurge::linalg {

std::optional<std::vector<CQ>> solve_exact(MatrixQ a, std::vector<CQ> b)
{
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_exact: shape mismatch");
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && a(p, k).is_zero())
            ++p;
        if (p == n)
            return std::nullopt;
        if (p != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        CQ inv = CQ(Rational(1)) / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (a(i, k).is_zero())
                continue;
            CQ f = a(i, k) * inv;
            for (int j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<CQ> x(n);
    for (int i = n - 1; i >= 0; --i) {
        CQ s = b[i];
        for (int j = i + 1; j < n; ++j)
            s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::optional<std::vector<CF>> solve(MatrixF a, std::vector<CF> b, const Real& tiny)
{
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve: shape mismatch");
    Real scale(0);
    for (const auto& v : a.data)
        scale = std::max(scale, abs(v));
    if (scale == 0)
        return std::nullopt;
    for (int k = 0; k < n; ++k) {
        int p = k;
        Real best = abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            Real m = abs(a(i, k));
            if (m > best) {
                best = m;
                p = i;
            }
        }
        if (best <= tiny * scale)
            return std::nullopt;
        if (p != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            CF f = a(i, k) / a(k, k);
            for (int j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<CF> x(n, CF(Real(0), Real(0)));
    for (int i = n - 1; i >= 0; --i) {
        CF s = b[i];
        for (int j = i + 1; j < n; ++j)
            s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

LeastSquares least_squares(MatrixF a, std::vector<CF> b)
{
    const int m = a.rows, n = a.cols;
    if (m < n || static_cast<int>(b.size()) != m)
        throw std::invalid_argument("least_squares: need rows >= cols");
    const CF zero(Real(0), Real(0));

    std::vector<Real> colscale(n, Real(1));
    for (int j = 0; j < n; ++j) {
        Real s(0);
        for (int i = 0; i < m; ++i)
            s += a(i, j).norm2();
        s = boost::multiprecision::sqrt(s);
        if (s > 0) {
            colscale[j] = s;
            for (int i = 0; i < m; ++i)
                a(i, j) /= s;
        }
    }

    LeastSquares out;
    for (int k = 0; k < n; ++k) {
        Real norm(0);
        for (int i = k; i < m; ++i)
            norm += a(i, k).norm2();
        norm = boost::multiprecision::sqrt(norm);
        if (norm == 0)
            continue;
        // alpha = -e^{i arg a_kk} ||x||, v = x - alpha e_1
        Real akk = abs(a(k, k));
        CF phase = akk > 0 ? a(k, k) / akk : CF(Real(1), Real(0));
        CF alpha = -(phase * norm);
        std::vector<CF> v(m - k, zero);
        for (int i = k; i < m; ++i)
            v[i - k] = a(i, k);
        v[0] -= alpha;
        Real vn(0);
        for (const auto& e : v)
            vn += e.norm2();
        if (vn == 0)
            continue;
        auto reflect = [&](auto&& get) {
            CF dot = zero;
            for (int i = k; i < m; ++i)
                dot += v[i - k].conj() * get(i);
            dot = dot * (Real(2) / vn);
            for (int i = k; i < m; ++i)
                get(i) -= v[i - k] * dot;
        };
        for (int j = k; j < n; ++j)
            reflect([&](int i) -> CF& { return a(i, j); });
        reflect([&](int i) -> CF& { return b[i]; });
    }

    Real rmax(0), rmin(-1);
    for (int k = 0; k < n; ++k) {
        Real d = abs(a(k, k));
        rmax = std::max(rmax, d);
        rmin = rmin < 0 ? d : std::min(rmin, d);
    }
    Real tiny = epsilon_for_bits(current_precision_bits() - 8) * (rmax > 0 ? rmax : Real(1));
    out.x.assign(n, zero);
    if (rmin <= tiny) {
        out.rank_deficient = true;
        out.condition = Real(-1);
        out.residual_norm = Real(-1);
        return out;
    }
    for (int i = n - 1; i >= 0; --i) {
        CF s = b[i];
        for (int j = i + 1; j < n; ++j)
            s -= a(i, j) * out.x[j];
        out.x[i] = s / a(i, i);
    }

    // ||R^{-1}||_F from solving R X = I column by column.
    Real rnorm(0), rinv(0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            rnorm += a(i, j).norm2();
    for (int c = 0; c < n; ++c) {
        std::vector<CF> col(n, zero);
        for (int i = c; i >= 0; --i) {
            CF s = i == c ? CF(Real(1), Real(0)) : zero;
            for (int j = i + 1; j <= c; ++j)
                s -= a(i, j) * col[j];
            col[i] = s / a(i, i);
            rinv += col[i].norm2();
        }
    }
    out.condition = boost::multiprecision::sqrt(rnorm * rinv);

    Real res(0);
    for (int i = n; i < m; ++i)
        res += b[i].norm2();
    out.residual_norm = boost::multiprecision::sqrt(res);
    for (int j = 0; j < n; ++j)
        out.x[j] /= colscale[j];
    return out;
}

}  // namespace resurge::linalg
