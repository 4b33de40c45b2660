#include "subdivkit/interp.hpp"

#include "subdivkit/errors.hpp"
#include "subdivkit/intmath.hpp"
#include "subdivkit/transition.hpp"

#include <cmath>
#include <stdexcept>

namespace subdivkit::interp {

using seqalg::convolve;
using seqalg::iterated_mask;
using seqalg::subdivide_once;

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::verified: return "verified";
        case Verdict::unconfirmed: return "unconfirmed";
        default: return "failed";
    }
}

Admissibility admissible_params(const Scalar& s_a, long M) {
    if (!s_a.exact())
        throw std::invalid_argument("admissible_params: s_a must be an exact rational");
    const mpq_class& s = s_a.rat();
    for (unsigned ms = 0; ms <= 32; ++ms) {
        mpz_class Mm = pow_z(M, ms);
        for (unsigned ns = 1; ns <= 32; ++ns) {
            mpq_class g = mpq_class(Mm * (pow_z(M, ns) - 1)) * s;
            g.canonicalize();
            if (g.get_den() == 1) {
                if (!g.get_num().fits_slong_p())
                    throw std::overflow_error("admissible_params: gamma out of range");
                return Admissibility{ms, ns, g.get_num().get_si()};
            }
        }
    }
    throw std::domain_error("admissible_params: s_a not M-adic within the (32, 32) search bounds");
}

namespace {

struct ResidualAcc {
    bool exact;
    double tol = 0;
    double worst = 0;
    bool ok = true;
    void feed(const Scalar& r) {
        if (exact) {
            if (!r.is_zero()) ok = false;
        } else {
            double v = std::abs(r.dbl());
            worst = std::max(worst, v);
            if (v > tol) ok = false;
        }
    }
};

}  // namespace

InterpolationCertificate verify_interpolatory(const Mask& a, const Scalar& s_a, unsigned m,
                                              const std::vector<unsigned>& levels) {
    InterpolationCertificate cert;
    cert.s_a = s_a;
    cert.m = m;
    cert.exact = a.exact() && s_a.exact();

    if (!seqalg::is_normalized(a)) {
        cert.reason = "mask is not normalized (sum != 1)";
        return cert;
    }
    try {
        cert.params = admissible_params(s_a, a.dilation);
    } catch (const std::exception& e) {
        cert.reason = e.what();
        return cert;
    }

    const long M = a.dilation;
    const unsigned ms = cert.params.m_s, ns = cert.params.n_s;
    const long gamma = cert.params.gamma;
    FiniteSequence An = iterated_mask(a, ns);
    mpz_class Mns_z = pow_z(M, ns);
    if (!Mns_z.fits_slong_p()) throw ResourceLimit("verify_interpolatory: M^{n_s} out of range");
    const long Mns = Mns_z.get_si();
    Scalar inv_Mns = Scalar(1) / Scalar(Mns);

    ResidualAcc acc{cert.exact, 1e-10 * std::max(1.0, seqalg::norm1(An).dbl())};

    if (ms == 0) {
        cert.w = FiniteSequence::dirac();
        for (long k = floor_div(An.lower() - gamma, Mns) - 1;
             k <= ceil_div(An.upper() - gamma, Mns) + 1; ++k)
            acc.feed(An.at(gamma + Mns * k) - (k == 0 ? inv_Mns : Scalar(0)));
        if (!acc.ok) {
            cert.max_residual = acc.worst;
            cert.reason = "interpolation identity failed: A_{n_s} is not a scaled delta on the shifted coset";
            return cert;
        }
    } else {
        try {
            cert.w = transition::unit_eigenvector(
                transition::transition_matrix(Mask(An, Mns), gamma));
        } catch (const std::exception& e) {
            cert.reason = std::string("canonical w unavailable: ") + e.what();
            return cert;
        }
        // support of w must stay strictly inside (l_a/(M-1) - M^{m_s} s_a, h_a/(M-1) - M^{m_s} s_a)
        mpq_class Mms(pow_z(M, ms));
        mpq_class lo_bound = mpq_class(a.seq.lower(), M - 1) - Mms * s_a.rat();
        mpq_class hi_bound = mpq_class(a.seq.upper(), M - 1) - Mms * s_a.rat();
        lo_bound.canonicalize();
        hi_bound.canonicalize();
        if (!cert.w.is_zero() &&
            (mpq_class(cert.w.lower()) <= lo_bound || mpq_class(cert.w.upper()) >= hi_bound)) {
            cert.reason = "canonical w escapes the admissible support window";
            return cert;
        }
        FiniteSequence Am = iterated_mask(a, ms);
        mpz_class Mms_z = pow_z(M, ms);
        const long Mms_l = Mms_z.get_si();
        Scalar inv_Mms = Scalar(1) / Scalar(Mms_l);
        FiniteSequence Amw = convolve(Am, cert.w);
        for (long k = floor_div(Amw.lower(), Mms_l) - 1; k <= ceil_div(Amw.upper(), Mms_l) + 1; ++k)
            acc.feed(Amw.at(Mms_l * k) - (k == 0 ? inv_Mms : Scalar(0)));
        FiniteSequence Anw = convolve(An, cert.w);
        long klo = floor_div(Anw.lower() - gamma, Mns) - 1;
        long khi = ceil_div(Anw.upper() - gamma, Mns) + 1;
        if (!cert.w.is_zero()) {
            klo = std::min(klo, cert.w.lower());
            khi = std::max(khi, cert.w.upper());
        }
        for (long k = klo; k <= khi; ++k)
            acc.feed(Anw.at(gamma + Mns * k) - inv_Mns * cert.w.at(k));
        if (!acc.ok) {
            cert.max_residual = acc.worst;
            cert.reason = "interpolation identities for (m_s, n_s) failed on canonical w";
            return cert;
        }
    }
    cert.max_residual = acc.worst;

    cert.smoothness = analysis::smoothness_summary(a, levels);
    if (cert.smoothness.certified_sminf > double(m)) {
        cert.verdict = Verdict::verified;
    } else {
        cert.verdict = Verdict::unconfirmed;
        cert.reason = "identities hold but certified smoothness bound does not exceed m";
    }
    return cert;
}

StepCheck ns_step_check(const Mask& a, const Scalar& s_a, const FiniteSequence& v, unsigned q) {
    Admissibility ad = admissible_params(s_a, a.dilation);
    if (ad.m_s != 0)
        throw std::invalid_argument("ns_step_check: requires m_s = 0 (direct n_s-step scheme)");
    const long M = a.dilation;
    mpz_class Mns = pow_z(M, ad.n_s);
    mpz_class Mq = pow_z(M, ad.n_s * q);
    mpz_class geo = (Mq - 1) / (Mns - 1);  // 1 + M^{n_s} + ... + M^{(q-1) n_s}
    mpq_class shift_q = mpq_class(geo * (Mns - 1)) * s_a.rat();
    shift_q.canonicalize();
    mpz_class shift_z = shift_q.get_num();  // integral by admissibility
    if (!shift_z.fits_slong_p() || !Mq.fits_slong_p())
        throw ResourceLimit("ns_step_check: shift out of range");
    const long shift = shift_z.get_si(), Mql = Mq.get_si();

    FiniteSequence r = v;
    for (unsigned i = 0; i < ad.n_s * q; ++i) r = subdivide_once(a, r);

    StepCheck out;
    out.ok = true;
    bool exact = r.exact() && v.exact();
    double tol = 1e-9 * std::max(1.0, seqalg::norm_inf(v).dbl());
    long klo = v.is_zero() ? 0 : v.lower(), khi = v.is_zero() ? 0 : v.upper();
    if (!r.is_zero()) {
        klo = std::min(klo, floor_div(r.lower() - shift, Mql));
        khi = std::max(khi, ceil_div(r.upper() - shift, Mql));
    }
    for (long k = klo; k <= khi; ++k) {
        Scalar res = r.at(shift + Mql * k) - v.at(k);
        if (exact) {
            if (!res.is_zero()) out.ok = false;
        } else {
            double d = std::abs(res.dbl());
            out.max_residual = std::max(out.max_residual, d);
            if (d > tol) out.ok = false;
        }
    }
    return out;
}

StepCheck polynomial_reproduction_check(const Mask& a, unsigned degree, unsigned n) {
    unsigned sr = analysis::sum_rule_factorization(a).order;
    if (degree >= sr)
        throw std::invalid_argument("polynomial_reproduction_check: degree must be < sr(a, M)");
    const long M = a.dilation;
    const long l = a.seq.lower(), h = a.seq.upper();
    const long W = 4 * (h - l + 1);
    Scalar s_a = analysis::moments(a, 1).s_a;
    mpz_class Mn = pow_z(M, n);
    Scalar inv_Mn = Scalar(1) / Scalar(mpq_class(Mn));

    StepCheck out;
    out.ok = true;
    bool exact = a.exact();
    double tol = 1e-10 * std::max(1.0, seqalg::norm1(a.seq).dbl());
    for (unsigned j = 0; j <= degree; ++j) {
        std::vector<Scalar> vals;
        for (long k = -W; k <= W; ++k) vals.push_back(Scalar(k).pow(j));
        FiniteSequence p(-W, std::move(vals));
        long A = -W, B = W;
        FiniteSequence r = p;
        for (unsigned i = 0; i < n; ++i) {
            r = subdivide_once(a, r);
            long A2 = M * (A - 1) + h + 1, B2 = M * (B + 1) + l - 1;  // trimmed valid core
            A = A2;
            B = B2;
        }
        if (A > B) throw std::invalid_argument("polynomial_reproduction_check: window too small");
        for (long k = A; k <= B; ++k) {
            Scalar x = inv_Mn * (s_a + Scalar(k)) - s_a;
            Scalar res = r.at(k) - x.pow(j);
            if (exact) {
                if (!res.is_zero()) out.ok = false;
            } else {
                double d = std::abs(res.dbl());
                out.max_residual = std::max(out.max_residual, d);
                if (d > tol) out.ok = false;
            }
        }
    }
    return out;
}

StepCheck prop21_phi_check(const Mask& a, unsigned level) {
    unsigned sr = analysis::sum_rule_factorization(a).order;
    Scalar s_a = analysis::moments(a, 1).s_a;
    transition::PhiSamples ps = transition::sample_phi_grid(a, level);
    mpz_class Mn_z = pow_z(a.dilation, level);
    const long Mn = Mn_z.get_si();
    Scalar inv_Mn = Scalar(1) / Scalar(Mn);

    StepCheck out;
    out.ok = true;
    bool exact = ps.values.exact() && s_a.exact();
    for (long i = 0; i < Mn; ++i) {
        Scalar x = inv_Mn * Scalar(i);
        for (unsigned j = 0; j < sr; ++j) {
            Scalar lhs(0);
            for (long idx = ps.values.lower(); idx <= ps.values.upper(); ++idx) {
                if ((idx - i) % Mn != 0) continue;
                long k = (idx - i) / Mn;
                lhs += Scalar(k).pow(j) * ps.values.at(idx);
            }
            Scalar res = lhs - (s_a - x).pow(j);
            if (exact) {
                if (!res.is_zero()) out.ok = false;
            } else {
                double d = std::abs(res.dbl());
                out.max_residual = std::max(out.max_residual, d);
                if (d > 1e-9) out.ok = false;
            }
        }
    }
    return out;
}

}  // namespace subdivkit::interp
