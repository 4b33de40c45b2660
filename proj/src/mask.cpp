#include "subdivkit/mask.hpp"

#include <cmath>

namespace subdivkit::seqalg {

FiniteSequence subdivide_once(const Mask& a, const FiniteSequence& v) {
    // S_{a,M} v = M * (upsample(v, M) * a)
    return scale(Scalar(a.dilation), convolve(upsample(v, a.dilation), a.seq));
}

FiniteSequence iterated_mask(const Mask& a, unsigned n) {
    FiniteSequence r = FiniteSequence::dirac();
    for (unsigned i = 0; i < n; ++i) r = convolve(upsample(r, a.dilation), a.seq);
    return r;
}

Mask hat_mask(long M) {
    std::vector<Scalar> ones(static_cast<size_t>(M), Scalar(1));
    FiniteSequence g(0, ones);
    FiniteSequence sq = convolve(g, g);
    FiniteSequence s = scale(Scalar::ratio(1, M * M), shift(sq, 1 - M));
    return Mask(s, M);
}

std::optional<long> symmetry_center(const Mask& a) {
    if (a.seq.is_zero()) return std::nullopt;
    long c = a.seq.lower() + a.seq.upper();
    if (a.exact()) {
        for (long k = a.seq.lower(); k <= a.seq.upper(); ++k)
            if (a.seq.at(k) != a.seq.at(c - k)) return std::nullopt;
        return c;
    }
    double tol = 1e-12 * norm_inf(a.seq).dbl();
    for (long k = a.seq.lower(); k <= a.seq.upper(); ++k)
        if (std::abs(a.seq.at(k).dbl() - a.seq.at(c - k).dbl()) > tol) return std::nullopt;
    return c;
}

bool is_normalized(const Mask& a) {
    Scalar s = sum(a.seq);
    if (a.exact()) return s == Scalar(1);
    return std::abs(s.dbl() - 1.0) <= 1e-12;
}

}  // namespace subdivkit::seqalg
