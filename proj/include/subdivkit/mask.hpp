#pragma once

#include "subdivkit/sequence.hpp"

#include <optional>

namespace subdivkit {

// A subdivision mask: finitely supported coefficients plus a dilation factor M >= 2.
struct Mask {
    Mask() = default;
    Mask(FiniteSequence s, long M) : seq(std::move(s)), dilation(M) {
        if (M < 2) throw std::invalid_argument("Mask: dilation must be >= 2");
    }

    FiniteSequence seq;
    long dilation = 2;

    bool exact() const { return seq.exact(); }
};

namespace seqalg {

// [S_{a,M} v](j) = M * sum_k v(k) a(j - M k)
FiniteSequence subdivide_once(const Mask& a, const FiniteSequence& v);

// A_n = M^{-n} S^n delta, symbol a~(z^{M^{n-1}}) ... a~(z); A_0 = delta.
// Exact for exact masks (repeated upsample + convolve).
FiniteSequence iterated_mask(const Mask& a, unsigned n);

// mask of the centered hat function: M^{-2} z^{1-M} (1+z+...+z^{M-1})^2
Mask hat_mask(long M);

// c with a(c-k) = a(k) for all k, if the mask is symmetric (c = lower+upper).
// Float masks compare with tolerance 1e-12 * max|a|.
std::optional<long> symmetry_center(const Mask& a);

// sum a(k) == 1; floats within 1e-12
bool is_normalized(const Mask& a);

}  // namespace seqalg
}  // namespace subdivkit
