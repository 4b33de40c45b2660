#include "subdivkit/sequence.hpp"

#include "subdivkit/errors.hpp"
#include "subdivkit/intmath.hpp"

#include <stdexcept>

namespace subdivkit::seqalg {

FiniteSequence add(const FiniteSequence& u, const FiniteSequence& v) {
    if (u.is_zero()) return v;
    if (v.is_zero()) return u;
    long lo = std::min(u.lower(), v.lower());
    long hi = std::max(u.upper(), v.upper());
    std::vector<Scalar> c(static_cast<size_t>(hi - lo + 1));
    for (long k = lo; k <= hi; ++k) c[static_cast<size_t>(k - lo)] = u.at(k) + v.at(k);
    return FiniteSequence(lo, std::move(c));
}

FiniteSequence negate(const FiniteSequence& u) {
    std::vector<Scalar> c(u.coeffs());
    for (auto& s : c) s = -s;
    return FiniteSequence(u.lower(), std::move(c));
}

FiniteSequence sub(const FiniteSequence& u, const FiniteSequence& v) {
    return add(u, negate(v));
}

FiniteSequence scale(const Scalar& s, const FiniteSequence& u) {
    std::vector<Scalar> c(u.coeffs());
    for (auto& x : c) x = s * x;
    return FiniteSequence(u.lower(), std::move(c));
}

FiniteSequence convolve(const FiniteSequence& u, const FiniteSequence& v) {
    if (u.is_zero() || v.is_zero()) return FiniteSequence();
    long lo = u.lower() + v.lower();
    size_t n = u.coeffs().size(), m = v.coeffs().size();
    check_coeff_budget(static_cast<long>(n + m - 1), "convolve");
    std::vector<Scalar> c(n + m - 1, Scalar(0));
    for (size_t i = 0; i < n; ++i) {
        if (u.coeffs()[i].is_zero()) continue;
        for (size_t j = 0; j < m; ++j)
            c[i + j] += u.coeffs()[i] * v.coeffs()[j];
    }
    return FiniteSequence(lo, std::move(c));
}

FiniteSequence upsample(const FiniteSequence& u, long L) {
    if (L < 1) throw std::invalid_argument("upsample: L must be >= 1");
    if (u.is_zero() || L == 1) return u;
    if ((u.size() - 1) > (max_coeff_budget() - 1) / L)
        throw ResourceLimit("upsample: predicted coefficient count exceeds budget");
    std::vector<Scalar> c(static_cast<size_t>((u.size() - 1) * L + 1), Scalar(0));
    for (long k = 0; k < u.size(); ++k)
        c[static_cast<size_t>(k * L)] = u.coeffs()[static_cast<size_t>(k)];
    return FiniteSequence(u.lower() * L, std::move(c));
}

FiniteSequence shift(const FiniteSequence& u, long s) {
    if (u.is_zero()) return u;
    return FiniteSequence(u.lower() + s, u.coeffs());
}

FiniteSequence reflect(const FiniteSequence& u) {
    if (u.is_zero()) return u;
    std::vector<Scalar> c(u.coeffs().rbegin(), u.coeffs().rend());
    return FiniteSequence(-u.upper(), std::move(c));
}

FiniteSequence backward_difference(const FiniteSequence& u, unsigned j) {
    FiniteSequence d(0, {Scalar(1), Scalar(-1)});  // delta - delta(.-1)
    FiniteSequence r = u;
    for (unsigned i = 0; i < j; ++i) r = convolve(r, d);
    return r;
}

FiniteSequence coset(const FiniteSequence& u, long gamma, long M) {
    if (M < 1) throw std::invalid_argument("coset: M must be >= 1");
    if (gamma < 0 || gamma >= M) throw std::invalid_argument("coset: gamma out of [0, M)");
    if (u.is_zero()) return u;
    long k0 = ceil_div(u.lower() - gamma, M);  // smallest k with gamma + M k >= lower
    std::vector<Scalar> c;
    long k = k0;
    for (; gamma + M * k <= u.upper(); ++k) c.push_back(u.at(gamma + M * k));
    return FiniteSequence(k0, std::move(c));
}

FiniteSequence interleave(const std::vector<FiniteSequence>& cosets, long M) {
    if (static_cast<long>(cosets.size()) != M)
        throw std::invalid_argument("interleave: need exactly M cosets");
    FiniteSequence r;
    for (long g = 0; g < M; ++g) {
        FiniteSequence up = upsample(cosets[static_cast<size_t>(g)], M);
        r = add(r, shift(up, g));
    }
    return r;
}

Scalar symbol_eval(const FiniteSequence& u, const Scalar& z) {
    if (z.is_zero()) throw std::domain_error("symbol_eval: z must be nonzero");
    if (u.is_zero()) return Scalar(0);
    // Horner over z starting at the top, then multiply by z^lower.
    Scalar acc(0);
    for (long k = u.upper(); k >= u.lower(); --k) acc = acc * z + u.at(k);
    Scalar zl(1);
    long e = u.lower();
    Scalar base = e >= 0 ? z : Scalar(1) / z;
    for (long i = 0; i < std::labs(e); ++i) zl *= base;
    return acc * zl;
}

Scalar sum(const FiniteSequence& u) {
    Scalar s(0);
    for (const auto& x : u.coeffs()) s += x;
    return s;
}

Scalar norm1(const FiniteSequence& u) {
    Scalar s(0);
    for (const auto& x : u.coeffs()) s += x.abs();
    return s;
}

Scalar norm_inf(const FiniteSequence& u) {
    Scalar s(0);
    for (const auto& x : u.coeffs()) {
        Scalar a = x.abs();
        if (s < a) s = a;
    }
    return s;
}

}  // namespace subdivkit::seqalg
