#pragma once

#include "subdivkit/interp.hpp"
#include "subdivkit/mask.hpp"
#include "subdivkit/rational_linalg.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace subdivkit::construct {

struct ConstructionSpec {
    long dilation = 2;
    unsigned sum_rules = 1;  // J, the order imposed structurally
    long lo = 0, hi = 0;     // requested filter support [l_a, h_a]
    Scalar s_a;              // rational interpolation point
    bool symmetric = false;
    unsigned m = 0;          // target smoothness: accept iff |lambda_c| < M^{-2m-2}
    bool optimize = false;
    unsigned starts = 64;    // multi-start solver budget
    unsigned iterations = 200;
};

// Affine family of quotients b with a~(z) = (1+z+...+z^{M-1})^J b~(z):
// b(t) = base + sum_i t_i directions[i], every rational t giving an exact
// member that satisfies all construction constraints.
struct MaskFamily {
    long dilation = 2;
    unsigned sum_rules = 0;
    long b_lo = 0;
    ratlin::Vec base;
    std::vector<ratlin::Vec> directions;

    size_t dim() const { return directions.size(); }
    FiniteSequence quotient(const std::vector<Scalar>& t) const;
    Mask member(const std::vector<Scalar>& t) const;
};

struct Candidate {
    Mask mask;
    FiniteSequence quotient;     // b of the S1 parameterization
    std::vector<Scalar> params;  // coordinates in the post-moment parameter space
    FiniteSequence w;            // phi(M^{m_s} s_a + .) when m_s > 0
    bool exact = true;
    double residual = 0;         // max interpolation residual (0 on exact passes)
    std::complex<double> lambda_c;
    double sm2 = 0;              // -1/2 - (1/2) log_M |lambda_c|
    bool accepted = false;       // |lambda_c| < M^{-2m-2}
    interp::Verdict verdict = interp::Verdict::failed;
};

struct FamilyInfo {
    bool present = false;
    bool exact = false;  // affine family certified in rational arithmetic
    size_t dimension = 0;
    std::optional<MaskFamily> family;  // populated when exact
};

struct ConstructionResult {
    interp::Admissibility params;
    std::vector<Candidate> candidates;  // ranked: accepted, exact, sm2 desc
    FamilyInfo family;
    std::optional<Candidate> optimized;

    const Candidate& best() const { return candidates.front(); }
};

// S1+S2 state: affine parameterization of the quotient b after the
// linear-phase moment solve. dirs empty <=> the mask is pinned.
struct LinearModel {
    long dilation = 2;
    unsigned sum_rules = 0;
    long lo = 0, hi = 0;  // mask support
    long b_lo = 0;
    size_t nb = 0;  // quotient length: b(b_lo..b_lo+nb-1)
    ratlin::Vec base;
    std::vector<ratlin::Vec> dirs;
};

// S1: unknowns b(l_a)..b(h_a - (M-1)J), symmetry folded when requested.
// Throws Infeasible when the support cannot carry J sum rules, and
// std::invalid_argument when symmetry contradicts s_a.
LinearModel parameterize(const ConstructionSpec& spec);

// S2: impose sum_k k^j a(k) = ((M-1)s_a)^j for j = 0..J-1 (exact).
void solve_moment_constraints(LinearModel& model, const Scalar& s_a);

// S3+S4: interpolation conditions (linear fast paths where available,
// multi-start damped Gauss-Newton otherwise), rationalization with exact
// re-verification, family detection, distinguished small-support members,
// and the spectral gate. Throws Infeasible when no candidate exists.
ConstructionResult solve_interpolation_constraints(const ConstructionSpec& spec,
                                                   const LinearModel& model);

// Whole pipeline; runs the free-parameter optimizer when spec.optimize.
ConstructionResult run(const ConstructionSpec& spec);

// Derivative-free sm2 maximization over the solution set, walking tangent
// directions of the constraint variety from the seed member (projected back
// after every step). Deterministic; supports 1..3 free directions.
Candidate optimize_free_parameters(const ConstructionSpec& spec, const LinearModel& model,
                                   const Candidate& seed);

}  // namespace subdivkit::construct
