#include "subdivkit/rational_linalg.hpp"

#include <stdexcept>

namespace subdivkit::ratlin {

Mat mat_mul(const Mat& A, const Mat& B) {
    size_t n = A.size(), k = B.size(), m = k ? B[0].size() : 0;
    Mat C(n, Vec(m, 0));
    for (size_t i = 0; i < n; ++i) {
        if (A[i].size() != k) throw std::invalid_argument("mat_mul: shape mismatch");
        for (size_t l = 0; l < k; ++l) {
            if (sgn(A[i][l]) == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
        }
    }
    return C;
}

Mat identity(size_t n) {
    Mat I(n, Vec(n, 0));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

namespace {

// Row echelon reduction in place; returns pivot column per pivot row.
std::vector<size_t> echelon(Mat& A) {
    std::vector<size_t> pivots;
    if (A.empty()) return pivots;
    size_t rows = A.size(), cols = A[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && sgn(A[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        mpq_class inv = 1 / A[r][c];
        for (size_t j = c; j < cols; ++j) A[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(A[i][c]) == 0) continue;
            mpq_class f = A[i][c];
            for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

size_t rank(Mat A) { return echelon(A).size(); }

AffineSolution solve_affine(Mat A, Vec b) {
    AffineSolution out;
    size_t rows = A.size();
    if (rows != b.size()) throw std::invalid_argument("solve_affine: shape mismatch");
    size_t cols = rows ? A[0].size() : 0;
    for (size_t i = 0; i < rows; ++i) A[i].push_back(b[i]);
    if (rows == 0) {
        out.consistent = true;
        out.particular.assign(cols, 0);
        return out;
    }
    std::vector<size_t> piv = echelon(A);
    // A pivot in the augmented column means inconsistency.
    if (!piv.empty() && piv.back() == cols) return out;
    out.consistent = true;
    out.particular.assign(cols, 0);
    std::vector<long> pivot_of_col(cols, -1);
    for (size_t r = 0; r < piv.size(); ++r) pivot_of_col[piv[r]] = static_cast<long>(r);
    for (size_t r = 0; r < piv.size(); ++r) out.particular[piv[r]] = A[r][cols];
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        Vec dir(cols, 0);
        dir[c] = 1;
        for (size_t r = 0; r < piv.size(); ++r) dir[piv[r]] = -A[r][c];
        out.nullspace.push_back(std::move(dir));
    }
    return out;
}

std::vector<Vec> nullspace(const Mat& A) {
    if (A.empty()) return {};
    Vec zero(A.size(), 0);
    return solve_affine(A, zero).nullspace;
}

}  // namespace subdivkit::ratlin
