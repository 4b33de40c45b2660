#pragma once

#include "subdivkit/interp.hpp"
#include "subdivkit/mask.hpp"

#include <vector>

namespace subdivkit::quasistat {

// An r-periodic scheme: level i applies mask masks[i mod r] (masks[0] first).
// All masks share one dilation M.
struct SchemeSpec {
    std::vector<Mask> masks;
    long dilation = 2;

    SchemeSpec() = default;
    explicit SchemeSpec(std::vector<Mask> ms);
    size_t period() const { return masks.size(); }
    bool exact() const;
};

// Composed mask a = M^{-r} S_{a_r} ... S_{a_1} delta with dilation M^r;
// computed by the operator route and cross-checked against the symbol route
// a~(z) = a_1~(z^{M^{r-1}}) ... a_r~(z).
Mask compose_masks(const SchemeSpec& spec);

// n applications of the periodic operator to v (masks[0] applied first).
FiniteSequence quasi_subdivide(const SchemeSpec& spec, const FiniteSequence& v, unsigned n);

// Theorem-style verification at smoothness target m:
//   (i)  sr(a_l, M) > m for every mask,
//   (ii) certified sm_inf(a, M^r) bound > m for the composed mask,
//   (iii) interpolation certificate of the composed mask at s_a.
struct QuasiCertificate {
    interp::Verdict verdict = interp::Verdict::failed;
    std::string reason;
    std::vector<unsigned> mask_sum_rules;
    interp::InterpolationCertificate composed;
    Mask composed_mask;
};
QuasiCertificate verify_quasi(const SchemeSpec& spec, const Scalar& s_a, unsigned m,
                              const std::vector<unsigned>& levels = {1, 2, 3});

// Cauchy-style convergence diagnostic (never part of verdicts): ratios of
//   d_n = max_k | M^{jn} [nabla^j S^n v](k) - M^{j(n+r)} [nabla^j S^{n+r} v](M^r k) |
// over block-aligned levels n = r, 2r, 3r.
std::vector<double> convergence_diagnostic(const SchemeSpec& spec, const FiniteSequence& v,
                                           unsigned deriv);

}  // namespace subdivkit::quasistat
