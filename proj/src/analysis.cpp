#include "subdivkit/analysis.hpp"

#include "subdivkit/errors.hpp"
#include "subdivkit/intmath.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace subdivkit::analysis {

using seqalg::convolve;
using seqalg::coset;
using seqalg::norm1;
using seqalg::reflect;
using seqalg::subdivide_once;
using seqalg::upsample;

namespace {

// Long division by 1 + z + ... + z^{M-1}.  Returns the quotient if the
// remainder vanishes (exactly, or within tol * ||dividend||_1 for floats).
std::optional<FiniteSequence> divide_by_ones(const FiniteSequence& d, long M, double rel_tol) {
    if (d.is_zero()) return std::nullopt;
    long l = d.lower(), h = d.upper();
    if (h - l + 1 < M) return std::nullopt;
    std::vector<Scalar> rem(d.coeffs());
    std::vector<Scalar> q(static_cast<size_t>(h - M + 1 - l + 1));
    for (long i = l; i <= h - M + 1; ++i) {
        Scalar qi = rem[static_cast<size_t>(i - l)];
        q[static_cast<size_t>(i - l)] = qi;
        if (qi.is_zero()) continue;
        for (long j = 0; j < M; ++j) rem[static_cast<size_t>(i - l + j)] -= qi;
    }
    bool ok;
    if (d.exact()) {
        ok = true;
        for (long i = h - M + 2; i <= h; ++i)
            if (!rem[static_cast<size_t>(i - l)].is_zero()) ok = false;
    } else {
        double tol = rel_tol * norm1(d).dbl();
        double worst = 0;
        for (long i = h - M + 2; i <= h; ++i)
            worst = std::max(worst, std::abs(rem[static_cast<size_t>(i - l)].dbl()));
        ok = worst <= tol;
    }
    if (!ok) return std::nullopt;
    return FiniteSequence(l, std::move(q));
}

FiniteSequence ones_power(long M, unsigned J) {
    FiniteSequence g(0, std::vector<Scalar>(static_cast<size_t>(M), Scalar(1)));
    FiniteSequence r = FiniteSequence::dirac();
    for (unsigned i = 0; i < J; ++i) r = convolve(r, g);
    return r;
}

}  // namespace

SumRuleFactorization sum_rule_factorization(const Mask& a) {
    if (a.seq.is_zero()) throw std::invalid_argument("sum_rule_factorization: zero mask");
    SumRuleFactorization out;
    out.quotient = a.seq;
    for (;;) {
        auto q = divide_by_ones(out.quotient, a.dilation, 1e-10);
        if (!q) break;
        out.quotient = *q;
        ++out.order;
    }
    if (!a.exact()) {
        // reconstruction residual must stay tiny
        FiniteSequence rec = convolve(ones_power(a.dilation, out.order), out.quotient);
        double worst = 0;
        FiniteSequence diff = seqalg::sub(rec, a.seq);
        for (const auto& s : diff.coeffs()) worst = std::max(worst, std::abs(s.dbl()));
        if (worst > 1e-12 * std::max(1.0, norm1(a.seq).dbl()))
            throw std::runtime_error("sum_rule_factorization: float reconstruction drifted");
    }
    return out;
}

bool spatial_sum_rule_check(const Mask& a, unsigned J) {
    const long M = a.dilation;
    bool exact = a.exact();
    // right-hand side: M^{-1} sum_k k^j a(k)
    for (unsigned j = 0; j < J; ++j) {
        Scalar rhs(0);
        for (long k = a.seq.lower(); k <= a.seq.upper(); ++k)
            rhs += Scalar(k).pow(j) * a.seq.at(k);
        rhs = rhs / Scalar(M);
        for (long g = 0; g < M; ++g) {
            Scalar lhs(0);
            for (long k = a.seq.lower(); k <= a.seq.upper(); ++k)
                if ((k - g) % M == 0) lhs += Scalar(k).pow(j) * a.seq.at(k);
            if (exact) {
                if (lhs != rhs) return false;
            } else if (std::abs(lhs.dbl() - rhs.dbl()) > 1e-10 * std::max(1.0, norm1(a.seq).dbl())) {
                return false;
            }
        }
    }
    return true;
}

MaskMoments moments(const Mask& a, unsigned jmax) {
    MaskMoments m;
    for (unsigned j = 0; j <= jmax; ++j) {
        Scalar mu(0);
        for (long k = a.seq.lower(); k <= a.seq.upper(); ++k)
            mu += Scalar(k).pow(j) * a.seq.at(k);
        m.mu.push_back(mu);
    }
    m.m_a = jmax >= 1 ? m.mu[1] : [&] {
        Scalar mu1(0);
        for (long k = a.seq.lower(); k <= a.seq.upper(); ++k) mu1 += Scalar(k) * a.seq.at(k);
        return mu1;
    }();
    m.s_a = m.m_a / Scalar(a.dilation - 1);
    return m;
}

LinearPhaseReport linear_phase_check(const Mask& a) {
    LinearPhaseReport rep;
    rep.order = sum_rule_factorization(a).order;
    MaskMoments m = moments(a, rep.order == 0 ? 1 : rep.order - 1);
    rep.holds = true;
    for (unsigned j = 0; j < rep.order; ++j) {
        Scalar res = m.mu[j] - m.m_a.pow(j);
        rep.residuals.push_back(res);
        if (a.exact()) {
            if (!res.is_zero()) rep.holds = false;
        } else if (std::abs(res.dbl()) > 1e-10 * std::max(1.0, norm1(a.seq).dbl())) {
            rep.holds = false;
        }
    }
    return rep;
}

std::complex<double> autocorrelation_eigenvalue(const FiniteSequence& b, long M) {
    if (b.is_zero()) throw std::invalid_argument("autocorrelation_eigenvalue: zero quotient");
    FiniteSequence c = convolve(b, reflect(b));
    long w = b.upper() - b.lower();  // matrix over [-w, w]
    long n = 2 * w + 1;
    Eigen::MatrixXd T(n, n);
    for (long j = -w; j <= w; ++j)
        for (long k = -w; k <= w; ++k)
            T(j + w, k + w) = c.at(M * k - j).rounded_dbl();
    Eigen::EigenSolver<Eigen::MatrixXd> es(T, /*computeEigenvectors=*/false);
    std::complex<double> lc = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) > std::abs(lc)) lc = es.eigenvalues()(i);
    return lc;
}

Sm2Result sm2(const Mask& a) {
    Sm2Result out;
    SumRuleFactorization f = sum_rule_factorization(a);
    out.sum_rules = f.order;
    out.inexact = !a.exact();
    out.lambda_c = autocorrelation_eigenvalue(f.quotient, a.dilation);
    out.value = -0.5 - 0.5 * std::log(std::abs(out.lambda_c)) / std::log(double(a.dilation));
    return out;
}

double sminf_lower_bound(const Mask& a, unsigned n) {
    if (n < 1) throw std::invalid_argument("sminf_lower_bound: n >= 1 required");
    SumRuleFactorization f = sum_rule_factorization(a);
    if (f.order < 1)
        throw std::invalid_argument("sminf_lower_bound: mask has no sum rules (sr = 0)");
    const long M = a.dilation;
    long width = f.quotient.upper() - f.quotient.lower();
    mpz_class pred = (pow_z(M, n) - 1) / (M - 1) * width + 1;
    check_coeff_budget(pred.fits_slong_p() ? pred.get_si() : max_coeff_budget() + 1,
                       "sminf_lower_bound");

    Mask bm(f.quotient, M);
    FiniteSequence s = FiniteSequence::dirac();
    for (unsigned i = 0; i < n; ++i) s = subdivide_once(bm, s);

    mpz_class Mn = pow_z(M, n);
    if (!Mn.fits_slong_p() || Mn.get_si() > max_coeff_budget())
        throw ResourceLimit("sminf_lower_bound: M^n coset count exceeds budget");
    long Mn_l = Mn.get_si();
    double best = 0;
    bool exact = s.exact();
    mpq_class best_q = 0;
    for (long g = 0; g < Mn_l; ++g) {
        if (exact) {
            mpq_class acc = 0;
            for (long k = s.lower() + ((g - s.lower()) % Mn_l + Mn_l) % Mn_l; k <= s.upper(); k += Mn_l)
                acc += ::abs(s.at(k).rat());
            if (acc > best_q) best_q = acc;
        } else {
            double acc = 0;
            for (long k = s.lower() + ((g - s.lower()) % Mn_l + Mn_l) % Mn_l; k <= s.upper(); k += Mn_l)
                acc += std::abs(s.at(k).dbl());
            best = std::max(best, acc);
        }
    }
    double sup = exact ? mpf_class(best_q, 128).get_d() : best;
    return -std::log(sup) / (double(n) * std::log(double(M)));
}

double rho_empirical(const Mask& a, unsigned n) {
    if (n < 1) throw std::invalid_argument("rho_empirical: n >= 1 required");
    unsigned J = sum_rule_factorization(a).order;
    const long M = a.dilation;
    long width = a.seq.upper() - a.seq.lower();
    mpz_class pred = (pow_z(M, n) - 1) / (M - 1) * width + 1 + J;
    check_coeff_budget(pred.fits_slong_p() ? pred.get_si() : max_coeff_budget() + 1,
                       "rho_empirical");
    FiniteSequence s = FiniteSequence::dirac();
    for (unsigned i = 0; i < n; ++i) s = subdivide_once(a, s);
    FiniteSequence d = seqalg::backward_difference(s, J);
    double norm = seqalg::norm_inf(d).exact() ? mpf_class(seqalg::norm_inf(d).rat(), 128).get_d()
                                              : seqalg::norm_inf(d).dbl();
    return std::pow(norm, 1.0 / double(n));
}

SmoothnessReport smoothness_summary(const Mask& a, const std::vector<unsigned>& levels,
                                    bool with_rho) {
    SmoothnessReport rep;
    rep.sm2 = sm2(a);
    rep.sum_rules = rep.sm2.sum_rules;
    rep.inexact = !a.exact();
    rep.certified_sminf = rep.sm2.value - 0.5;
    for (unsigned n : levels) {
        if (rep.sum_rules >= 1) {
            double b = sminf_lower_bound(a, n);
            rep.sminf_coset[n] = b;
            rep.certified_sminf = std::max(rep.certified_sminf, b);
        }
        if (with_rho) rep.rho_est[n] = rho_empirical(a, n);
    }
    return rep;
}

}  // namespace subdivkit::analysis
