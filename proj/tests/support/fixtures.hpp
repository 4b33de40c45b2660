#pragma once

#include "subdivkit/mask.hpp"
#include "subdivkit/quasistat.hpp"

#include <vector>

// Reference masks used across the test suite.  Names encode dilation and the
// interpolation point (m2_s7 <-> M=2, s_a=1/7) or the imposed sum-rule order.
namespace fx {

using subdivkit::FiniteSequence;
using subdivkit::Mask;
using subdivkit::Scalar;

inline Scalar q(long n, long d) { return Scalar::ratio(n, d); }

FiniteSequence seq_of(long lo, std::vector<Scalar> c);

// dilation 2
Mask m2_s7();                       // s_a = 1/7, support [-2,1], 3-step interpolatory
Mask m2_s3_t0();                    // s_a = 1/3, support [-2,1], 2-step interpolatory
Mask m2_s3_curve();                 // s_a = 1/3, support [-2,4], the smoother curve member
// dilation 3, s_a = 1/4
Mask m3_j2();                       // support [-3,4]
Mask m3_j3(const Scalar& t);        // one-parameter symmetric family, support [-6,7]
Mask m3_j5();                       // support [-11,12]
// dilation 4, s_a = 1/6
Mask m4_j2();                       // support [-4,5]
Mask m4_j3();                       // support [-7,8]
Mask m4_j5();                       // support [-12,13]

// (1/16) z^-2 (1+z)^4 (o z^-2 + i z^-1 + (1-2i-2o) + i z + o z^2), dilation 2
Mask two_ring(const Scalar& inner, const Scalar& outer);
// (1/4) z^-1 (1+z)^2 (t z^-1 + (1-2t) + t z), dilation 2
Mask one_ring(const Scalar& t);

// periodic schemes over dilation 2 (first mask applied first)
subdivkit::quasistat::SchemeSpec ring1_pair();             // r = 2, rational
subdivkit::quasistat::SchemeSpec ring2_pair(int variant);  // r = 2, surds; variant 0 or 1 (1 is smoother)
subdivkit::quasistat::SchemeSpec ring2_triple();           // r = 3, mixed surd/rational

struct Labeled {
    const char* name;
    Mask mask;
    Scalar s_a;
    unsigned m;  // smoothness target the certificate should reach
};

// Every rational mask whose interpolation certificate verifies exactly.
const std::vector<Labeled>& verified_fixtures();

}  // namespace fx
