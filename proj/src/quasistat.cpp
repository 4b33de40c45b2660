#include "subdivkit/quasistat.hpp"

#include "subdivkit/errors.hpp"
#include "subdivkit/intmath.hpp"

#include <cmath>
#include <stdexcept>

namespace subdivkit::quasistat {

using seqalg::convolve;
using seqalg::subdivide_once;
using seqalg::upsample;

SchemeSpec::SchemeSpec(std::vector<Mask> ms) : masks(std::move(ms)) {
    if (masks.empty()) throw std::invalid_argument("SchemeSpec: needs at least one mask");
    dilation = masks[0].dilation;
    for (const auto& m : masks)
        if (m.dilation != dilation)
            throw std::invalid_argument("SchemeSpec: all masks must share one dilation");
}

bool SchemeSpec::exact() const {
    for (const auto& m : masks)
        if (!m.exact()) return false;
    return true;
}

Mask compose_masks(const SchemeSpec& spec) {
    const long M = spec.dilation;
    const size_t r = spec.period();
    // operator route
    FiniteSequence op = FiniteSequence::dirac();
    for (size_t i = 0; i < r; ++i) op = subdivide_once(spec.masks[i], op);
    mpz_class Mr = pow_z(M, static_cast<unsigned>(r));
    if (!Mr.fits_slong_p()) throw ResourceLimit("compose_masks: M^r out of range");
    op = seqalg::scale(Scalar(1) / Scalar(mpq_class(Mr)), op);
    // symbol route: a_1~(z^{M^{r-1}}) ... a_r~(z)
    FiniteSequence sym = FiniteSequence::dirac();
    for (size_t i = 0; i < r; ++i) {
        long L = pow_z(M, static_cast<unsigned>(r - 1 - i)).get_si();
        sym = convolve(sym, upsample(spec.masks[i].seq, L));
    }
    if (spec.exact()) {
        if (!(op == sym)) throw std::logic_error("compose_masks: operator and symbol routes disagree");
    } else {
        FiniteSequence diff = seqalg::sub(op, sym);
        double tol = 1e-12 * std::max(1.0, seqalg::norm1(sym).dbl());
        for (const auto& s : diff.coeffs())
            if (std::abs(s.dbl()) > tol)
                throw std::logic_error("compose_masks: operator and symbol routes disagree");
    }
    return Mask(op, Mr.get_si());
}

FiniteSequence quasi_subdivide(const SchemeSpec& spec, const FiniteSequence& v, unsigned n) {
    FiniteSequence r = v;
    for (unsigned i = 0; i < n; ++i) r = subdivide_once(spec.masks[i % spec.period()], r);
    return r;
}

QuasiCertificate verify_quasi(const SchemeSpec& spec, const Scalar& s_a, unsigned m,
                              const std::vector<unsigned>& levels) {
    QuasiCertificate cert;
    for (const auto& mask : spec.masks)
        cert.mask_sum_rules.push_back(analysis::sum_rule_factorization(mask).order);
    cert.composed_mask = compose_masks(spec);
    cert.composed = interp::verify_interpolatory(cert.composed_mask, s_a, m, levels);
    for (size_t i = 0; i < cert.mask_sum_rules.size(); ++i) {
        if (cert.mask_sum_rules[i] <= m) {
            cert.verdict = interp::Verdict::failed;
            cert.reason = "mask " + std::to_string(i + 1) + " has sr <= m";
            return cert;
        }
    }
    cert.verdict = cert.composed.verdict;
    cert.reason = cert.composed.reason;
    return cert;
}

std::vector<double> convergence_diagnostic(const SchemeSpec& spec, const FiniteSequence& v,
                                           unsigned deriv) {
    const long M = spec.dilation;
    const unsigned r = static_cast<unsigned>(spec.period());
    mpz_class Mr_z = pow_z(M, r);
    if (!Mr_z.fits_slong_p()) throw ResourceLimit("convergence_diagnostic: M^r out of range");
    const long Mr = Mr_z.get_si();

    auto level_data = [&](unsigned n) {
        FiniteSequence s = quasi_subdivide(spec, v, n);
        if (deriv >= 1) {
            Scalar f = Scalar(mpq_class(pow_z(M, n * deriv)));
            s = seqalg::scale(f, seqalg::backward_difference(s, deriv));
        }
        return s;
    };

    std::vector<double> dists;
    for (unsigned blocks = 1; blocks <= 3; ++blocks) {
        unsigned n = blocks * r;
        FiniteSequence lo = level_data(n), hi = level_data(n + r);
        double worst = 0;
        long klo = lo.is_zero() ? 0 : lo.lower();
        long khi = lo.is_zero() ? 0 : lo.upper();
        if (!hi.is_zero()) {
            klo = std::min(klo, floor_div(hi.lower(), Mr));
            khi = std::max(khi, ceil_div(hi.upper(), Mr));
        }
        for (long k = klo; k <= khi; ++k)
            worst = std::max(worst, std::abs(lo.at(k).dbl() - hi.at(Mr * k).dbl()));
        dists.push_back(worst);
    }
    return dists;
}

}  // namespace subdivkit::quasistat
