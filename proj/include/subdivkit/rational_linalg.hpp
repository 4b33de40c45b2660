#pragma once

#include <gmpxx.h>

#include <vector>

namespace subdivkit::ratlin {

using Vec = std::vector<mpq_class>;
using Mat = std::vector<Vec>;  // row-major, rectangular

Mat mat_mul(const Mat& A, const Mat& B);
Mat identity(size_t n);

size_t rank(Mat A);

// Solution set of A x = b: consistent flag, one particular solution and a
// basis of the nullspace (exact).
struct AffineSolution {
    bool consistent = false;
    Vec particular;
    std::vector<Vec> nullspace;
};
AffineSolution solve_affine(Mat A, Vec b);

// Basis of { x : A x = 0 }.
std::vector<Vec> nullspace(const Mat& A);

}  // namespace subdivkit::ratlin
