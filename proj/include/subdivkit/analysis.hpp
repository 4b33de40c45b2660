#pragma once

#include "subdivkit/mask.hpp"

#include <complex>
#include <map>
#include <vector>

namespace subdivkit::analysis {

// a~(z) = (1 + z + ... + z^{M-1})^order * quotient~(z) with maximal order.
// Exact masks factor exactly; float masks decide divisibility with remainder
// tolerance 1e-10 * ||a||_1 and reconstruct to residual < 1e-12.
struct SumRuleFactorization {
    unsigned order = 0;
    FiniteSequence quotient;
};
SumRuleFactorization sum_rule_factorization(const Mask& a);

// Spatial form of order-J sum rules:
//   sum_k p(gamma + M k) a(gamma + M k) = M^{-1} sum_k p(k) a(k)
// for all monomials p of degree < J and gamma = 0..M-1.
bool spatial_sum_rule_check(const Mask& a, unsigned J);

// mu[j] = sum_k k^j a(k) for j = 0..jmax; m_a = mu[1]; s_a = m_a / (M-1).
struct MaskMoments {
    std::vector<Scalar> mu;
    Scalar m_a;
    Scalar s_a;
};
MaskMoments moments(const Mask& a, unsigned jmax);

// Order-J linear-phase moments: sum_k k^j a(k) = m_a^j for j = 0..J-1,
// J = sr(a, M).  Residuals reported per j.
struct LinearPhaseReport {
    bool holds = false;
    unsigned order = 0;
    std::vector<Scalar> residuals;
};
LinearPhaseReport linear_phase_check(const Mask& a);

// sm_2(a, M) = -1/2 - (1/2) log_M |lambda_c| where lambda_c is the largest
// (in modulus) eigenvalue of ( c(Mk - j) ) over j,k in [l_b - h_b, h_b - l_b],
// c~ = b~(z) b~(1/z), b the sum-rule quotient at order J = sr(a, M).
struct Sm2Result {
    unsigned sum_rules = 0;
    double value = 0;
    std::complex<double> lambda_c;
    bool inexact = false;
};
Sm2Result sm2(const Mask& a);

// Largest-modulus eigenvalue of ( c(Mk - j) ), j,k in [l_b - h_b, h_b - l_b],
// where c = b * reflect(b).  Equals lambda_c of sm2 when b is the sum-rule
// quotient at order sr(a, M).
std::complex<double> autocorrelation_eigenvalue(const FiniteSequence& b, long M);

// Coset lower bound for sm_inf(a, M) at level n >= 1:
//   -(1/n) log_M max_{0<=gamma<M^n} sum_k |[S_b^n delta](gamma + M^n k)|.
// Each n gives a valid lower bound; requires sr(a, M) >= 1.
double sminf_lower_bound(const Mask& a, unsigned n);

// || nabla^J S_a^n delta ||_inf^{1/n}, an empirical estimate of rho_J.
double rho_empirical(const Mask& a, unsigned n);

struct SmoothnessReport {
    unsigned sum_rules = 0;
    Sm2Result sm2;
    std::map<unsigned, double> sminf_coset;  // n -> lower bound
    std::map<unsigned, double> rho_est;      // n -> empirical rho_J estimate
    double certified_sminf = 0;              // max(sm2 - 1/2, coset bounds)
    bool inexact = false;
};
SmoothnessReport smoothness_summary(const Mask& a, const std::vector<unsigned>& levels = {1, 2, 3},
                                    bool with_rho = false);

}  // namespace subdivkit::analysis
