#include "fixtures.hpp"

#include <cmath>

namespace fx {

using namespace subdivkit;

FiniteSequence seq_of(long lo, std::vector<Scalar> c) { return FiniteSequence(lo, std::move(c)); }

Mask m2_s7() {
    return Mask(seq_of(-2, {q(-1, 28), q(3, 14), q(15, 28), q(2, 7)}), 2);
}

Mask m2_s3_t0() {
    return Mask(seq_of(-2, {q(-1, 12), q(1, 6), q(7, 12), q(1, 3)}), 2);
}

Mask m2_s3_curve() {
    return Mask(seq_of(-2, {q(-49, 2208), q(7, 69), q(3991, 8832), q(32, 69), q(117, 1472),
                            q(-3, 46), q(-27, 2944)}),
                2);
}

Mask m3_j2() {
    return Mask(seq_of(-3, {q(-1, 36), q(1, 36), q(1, 6), q(1, 3), q(1, 3), q(1, 6), q(1, 36),
                            q(-1, 36)}),
                3);
}

Mask m3_j3(const Scalar& t) {
    // symmetric about 1/2: a(k) = a(1-k)
    std::vector<Scalar> half = {
        q(137, 432),                       // a(1)
        q(3, 16),                          // a(2)
        q(1, 16) - q(2, 3) * t,            // a(3)
        q(-19, 432) + q(2, 3) * t,         // a(4)
        q(-1, 48),                         // a(5)
        q(-1, 72) + q(1, 3) * t,           // a(6)
        q(5, 432) - q(1, 3) * t,           // a(7)
    };
    std::vector<Scalar> c;
    for (size_t i = half.size(); i-- > 0;) c.push_back(half[i]);  // a(-6..0) = a(7..1)
    for (const auto& v : half) c.push_back(v);
    return Mask(seq_of(-6, std::move(c)), 3);
}

namespace {

Mask mirror_about_half(long M, std::vector<Scalar> right) {
    // a(k) = a(1-k) with a(1..K) given; support [1-K, K]
    std::vector<Scalar> c;
    for (size_t i = right.size(); i-- > 0;) c.push_back(right[i]);
    for (const auto& v : right) c.push_back(v);
    return Mask(seq_of(1 - static_cast<long>(right.size()), std::move(c)), M);
}

}  // namespace

Mask m3_j5() {
    return mirror_about_half(
        3, {q(87651329, 277385472), q(25, 128), q(3486281, 69346368), q(-40618421, 1386927360),
            q(-25, 768), q(-95969, 10668672), q(4981993, 1040195520), q(1, 256),
            q(3609913, 4160782080), q(-130015, 416078208), q(0, 1), q(26003, 4160782080)});
}

Mask m4_j2() {
    return Mask(seq_of(-4, {q(-1, 64), q(1, 64), q(3, 32), q(5, 32), q(1, 4), q(1, 4), q(5, 32),
                            q(3, 32), q(1, 64), q(-1, 64)}),
                4);
}

Mask m4_j3() {
    return mirror_about_half(4, {q(807, 3328), q(607, 3328), q(645, 6656), q(141, 6656),
                                 q(-83, 6656), q(-123, 6656), q(-9, 832), q(-1, 832)});
}

Mask m4_j5() {
    return mirror_about_half(
        4, {q(6327597, 26083328), q(34295435, 182583296), q(18691499, 182583296),
            q(37613109, 1460666368), q(-24468257, 1460666368), q(-10210465, 365166592),
            q(-6463745, 365166592), q(-3546873, 912916480), q(186261, 91291648),
            q(1281515, 365166592), q(710475, 365166592), q(331365, 1460666368),
            q(198819, 7303331840)});
}

Mask two_ring(const Scalar& inner, const Scalar& outer) {
    Scalar center = Scalar(1) - Scalar(2) * inner - Scalar(2) * outer;
    FiniteSequence kernel(-2, {outer, inner, center, inner, outer});
    FiniteSequence quartic(0, {Scalar(1), Scalar(4), Scalar(6), Scalar(4), Scalar(1)});
    FiniteSequence prod = seqalg::shift(seqalg::convolve(kernel, quartic), -2);
    return Mask(seqalg::scale(q(1, 16), prod), 2);
}

Mask one_ring(const Scalar& t) {
    Scalar center = Scalar(1) - Scalar(2) * t;
    FiniteSequence kernel(-1, {t, center, t});
    FiniteSequence square(0, {Scalar(1), Scalar(2), Scalar(1)});
    FiniteSequence prod = seqalg::shift(seqalg::convolve(kernel, square), -1);
    return Mask(seqalg::scale(q(1, 4), prod), 2);
}

quasistat::SchemeSpec ring1_pair() {
    return quasistat::SchemeSpec({one_ring(q(-11, 42)), one_ring(q(11, 32))});
}

quasistat::SchemeSpec ring2_pair(int variant) {
    if (variant == 0) {
        double s = std::sqrt(721.0);
        return quasistat::SchemeSpec({two_ring(Scalar(-(s + 55) / 256), Scalar(0.0)),
                                      two_ring(Scalar((s - 33) / 64), Scalar(-9.0 / 32))});
    }
    double s = std::sqrt(161.0);
    return quasistat::SchemeSpec({two_ring(Scalar(-(s + 19) / 16), Scalar(5.0 / 16)),
                                  two_ring(Scalar((s - 11) / 4), Scalar(0.0))});
}

quasistat::SchemeSpec ring2_triple() {
    double s = std::sqrt(713.0);
    Mask a1 = two_ring(Scalar(-(s + 41) / 32), Scalar(11.0 / 32));
    Mask a2 = two_ring(Scalar(179 * s / 616 - 140873.0 / 19712),
                       Scalar(40137.0 / 39424 - 51 * s / 1232));
    Mask a3 = two_ring(q(19, 64), q(0, 1));
    return quasistat::SchemeSpec({a1, a2, a3});
}

const std::vector<Labeled>& verified_fixtures() {
    static const std::vector<Labeled> all = {
        {"hat2", seqalg::hat_mask(2), q(0, 1), 0},
        {"hat3", seqalg::hat_mask(3), q(0, 1), 0},
        {"hat4", seqalg::hat_mask(4), q(0, 1), 0},
        {"m2_s7", m2_s7(), q(1, 7), 0},
        {"m2_s3_t0", m2_s3_t0(), q(1, 3), 0},
        {"m2_s3_curve", m2_s3_curve(), q(1, 3), 1},
        {"m3_j2", m3_j2(), q(1, 4), 1},
        {"m3_j3_a", m3_j3(q(5, 144)), q(1, 4), 1},
        {"m3_j3_b", m3_j3(q(7, 256)), q(1, 4), 2},
        {"m3_j5", m3_j5(), q(1, 4), 3},
        {"m4_j2", m4_j2(), q(1, 6), 1},
        {"m4_j3", m4_j3(), q(1, 6), 2},
        {"m4_j5", m4_j5(), q(1, 6), 2},
    };
    return all;
}

}  // namespace fx
