#pragma once

#include "subdivkit/scalar.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace subdivkit {

// Finitely supported sequence u: Z -> scalars, stored densely over its
// minimal support [lower, upper].  The zero sequence has empty storage.
class FiniteSequence {
public:
    FiniteSequence() = default;
    FiniteSequence(long lo, std::vector<Scalar> coeffs) : lo_(lo), c_(std::move(coeffs)) {
        trim();
    }

    static FiniteSequence dirac() { return FiniteSequence(0, {Scalar(1)}); }

    bool is_zero() const { return c_.empty(); }
    std::optional<std::pair<long, long>> support() const {
        if (c_.empty()) return std::nullopt;
        return std::make_pair(lo_, lo_ + static_cast<long>(c_.size()) - 1);
    }
    long lower() const { return lo_; }
    long upper() const { return lo_ + static_cast<long>(c_.size()) - 1; }
    long size() const { return static_cast<long>(c_.size()); }

    Scalar at(long k) const {
        if (c_.empty() || k < lo_ || k > upper()) return Scalar(0);
        return c_[static_cast<size_t>(k - lo_)];
    }

    // All stored coefficients are exact rationals (the zero sequence is exact).
    bool exact() const {
        for (const auto& s : c_)
            if (!s.exact()) return false;
        return true;
    }

    const std::vector<Scalar>& coeffs() const { return c_; }

    friend bool operator==(const FiniteSequence& a, const FiniteSequence& b) {
        return a.lo_ == b.lo_ && a.c_.size() == b.c_.size() &&
               [&] {
                   for (size_t i = 0; i < a.c_.size(); ++i)
                       if (a.c_[i] != b.c_[i]) return false;
                   return true;
               }();
    }

private:
    void trim() {
        size_t b = 0, e = c_.size();
        while (b < e && c_[b].is_zero()) ++b;
        while (e > b && c_[e - 1].is_zero()) --e;
        if (b == e) {
            c_.clear();
            lo_ = 0;
        } else {
            if (b > 0 || e < c_.size())
                c_ = std::vector<Scalar>(c_.begin() + b, c_.begin() + e);
            lo_ += static_cast<long>(b);
        }
    }

    long lo_ = 0;
    std::vector<Scalar> c_;
};

namespace seqalg {

FiniteSequence add(const FiniteSequence& u, const FiniteSequence& v);
FiniteSequence sub(const FiniteSequence& u, const FiniteSequence& v);
FiniteSequence scale(const Scalar& s, const FiniteSequence& u);
FiniteSequence negate(const FiniteSequence& u);

// (u*v)(j) = sum_k u(k) v(j-k)
FiniteSequence convolve(const FiniteSequence& u, const FiniteSequence& v);

// upsample(u, L)(Lk) = u(k), zero elsewhere: symbol z -> z^L
FiniteSequence upsample(const FiniteSequence& u, long L);

// shift(u, s)(k) = u(k - s)
FiniteSequence shift(const FiniteSequence& u, long s);

// reflect(u)(k) = u(-k)   (real coefficients, so this is the conjugate flip)
FiniteSequence reflect(const FiniteSequence& u);

// backward difference iterated j times; (nabla u)(k) = u(k) - u(k-1)
FiniteSequence backward_difference(const FiniteSequence& u, unsigned j = 1);

// coset extraction u^{[gamma:M]}(k) = u(gamma + M k), 0 <= gamma < M
FiniteSequence coset(const FiniteSequence& u, long gamma, long M);

// inverse of coset extraction: v(gamma + M k) = cosets[gamma](k)
FiniteSequence interleave(const std::vector<FiniteSequence>& cosets, long M);

// exact evaluation of the symbol u~(z) = sum u(k) z^k at rational z != 0
Scalar symbol_eval(const FiniteSequence& u, const Scalar& z);

Scalar sum(const FiniteSequence& u);
Scalar norm1(const FiniteSequence& u);      // sum |u(k)|, exactness preserved
Scalar norm_inf(const FiniteSequence& u);   // max |u(k)|, exactness preserved

}  // namespace seqalg
}  // namespace subdivkit
