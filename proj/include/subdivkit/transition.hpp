#pragma once

#include "subdivkit/mask.hpp"
#include "subdivkit/rational_linalg.hpp"

#include <complex>
#include <vector>

namespace subdivkit::transition {

// Matrix of the shifted transition operator
//   [T_{a,M,gamma} v](n) = M sum_k a(k) v(gamma + M n - k)
// restricted to Z cap K_{a,gamma}, K_{a,gamma} = (M-1)^{-1} [fs(a) - gamma].
// The restriction is invariant and carries every nonzero eigenvalue.
struct TransitionMatrix {
    long gamma = 0;
    long dilation = 2;
    long lo = 0, hi = -1;  // lo > hi encodes the empty range
    std::vector<std::vector<Scalar>> entries;  // entries[n-lo][m-lo] = M a(gamma + Mn - m)

    long dim() const { return hi - lo + 1; }
    bool exact() const;
};

TransitionMatrix transition_matrix(const Mask& a, long gamma);

// All eigenvalues of the restricted matrix (dense float solve).
std::vector<std::complex<double>> spectrum(const TransitionMatrix& T);

// The eigenvector v with T v = v normalized to sum(v) = 1.  For exact
// matrices, existence and simplicity of eigenvalue 1 are decided exactly via
// rank(T - I) and rank((T - I)^2); the eigenvector is an exact rational
// nullspace solve.  Float path: eigenvalue cluster within 1e-8 of 1 must be
// a singleton.  Throws std::runtime_error when eigenvalue 1 is absent, not
// simple, or the eigenvector sums to zero.
FiniteSequence unit_eigenvector(const TransitionMatrix& T);

// w(k) = phi(k) for the interpolating refinable function of a (sum w = 1).
// Requires sr(a, M) >= 1.
FiniteSequence integer_samples(const Mask& a);

// phi(s) for s in the M-adic rationals D_M: find minimal (m_s, n_s) with
// M^{m_s} (M^{n_s}-1) s integral, take the unit eigenvector v of
// T_{A_{n_s}, M^{n_s}, gamma} and return M^{m_s} [A_{m_s} * v](0).
// Exact for exact masks.
struct PhiValue {
    Scalar value;
    unsigned m_s = 0, n_s = 1;
    long gamma = 0;
};
PhiValue eval_phi(const Mask& a, const Scalar& s);

// Grid samples values(k) = phi(M^{-level} k); for deriv = j >= 1 emits
// M^{j*level} nabla^j of the level data.
struct PhiSamples {
    unsigned level = 0;
    unsigned deriv = 0;
    FiniteSequence values;
};
PhiSamples sample_phi_grid(const Mask& a, unsigned level, unsigned deriv = 0);

}  // namespace subdivkit::transition
