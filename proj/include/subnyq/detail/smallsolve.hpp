// Dense Gaussian elimination with partial pivoting for the tiny (n <= 5)
// normal-equation systems of the harmonic fits and grid oracles.

#ifndef SUBNYQ_DETAIL_SMALLSOLVE_HPP
#define SUBNYQ_DETAIL_SMALLSOLVE_HPP

#include <array>
#include <cmath>
#include <utility>

namespace subnyq::detail {

// Solves m * x = rhs in place (solution left in rhs). Returns false when a
// pivot falls below 1e-12 of the diagonal scale (rank deficiency).
template <int N>
bool solve_dense(std::array<std::array<double, N>, N>& m, std::array<double, N>& rhs) {
    double scale = 0.0;
    for (int i = 0; i < N; ++i) scale = std::max(scale, std::abs(m[i][i]));
    const double tol = 1e-12 * std::max(scale, 1e-300);
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (std::abs(m[piv][col]) < tol) return false;
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = col + 1; r < N; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < N; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int col = N - 1; col >= 0; --col) {
        double v = rhs[col];
        for (int c = col + 1; c < N; ++c) v -= m[col][c] * rhs[c];
        rhs[col] = v / m[col][col];
    }
    return true;
}

}  // namespace subnyq::detail

#endif
