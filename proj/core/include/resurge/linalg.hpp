#pragma once

#include "resurge/numeric.hpp"

#include <optional>
#include <vector>

namespace resurge::linalg {

// Row-major dense complex matrix.
template <class T>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(int r, int c, const T& fill) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}
    T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

using MatrixQ = Matrix<CQ>;
using MatrixF = Matrix<CF>;

// Gaussian elimination with pivoting on the first nonzero entry (exact).
// Returns nullopt when the matrix is singular.
std::optional<std::vector<CQ>> solve_exact(MatrixQ a, std::vector<CQ> b);

// Partial-pivoting LU solve at the current precision.  Returns nullopt when a
// pivot falls below `tiny` times the largest column entry.
std::optional<std::vector<CF>> solve(MatrixF a, std::vector<CF> b, const Real& tiny);

struct LeastSquares {
    std::vector<CF> x;
    Real residual_norm;
    // Frobenius estimate ||R|| ||R^-1|| of the column-scaled problem.
    Real condition;
    bool rank_deficient = false;
};

// min ||A x - b||_2 via Householder QR with column scaling.
LeastSquares least_squares(MatrixF a, std::vector<CF> b);

}  // namespace resurge::linalg
