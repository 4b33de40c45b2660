#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>

namespace subdivkit {

// Best continued-fraction approximation p/q of x with q <= max_den.
// Returns nullopt when no convergent with q <= max_den lands within tol.
inline std::optional<mpq_class> rationalize(double x, long max_den = 1000000,
                                            double tol = 1e-9) {
    if (!std::isfinite(x)) return std::nullopt;
    mpz_class h0 = 1, h1, k0 = 0, k1 = 1;  // h/k convergents; (h1,k1) current
    h1 = mpz_class(std::to_string(static_cast<long long>(std::floor(x))));
    double frac = x - std::floor(x);
    mpq_class best(h1);
    for (int it = 0; it < 64; ++it) {
        mpq_class cand(h1, k1);
        cand.canonicalize();
        best = cand;
        if (std::abs(cand.get_d() - x) <= tol) return best;
        if (frac == 0.0) break;
        double inv = 1.0 / frac;
        if (inv > 1e18) break;
        double a = std::floor(inv);
        frac = inv - a;
        mpz_class az(std::to_string(static_cast<long long>(a)));
        mpz_class h2 = az * h1 + h0, k2 = az * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    }
    if (std::abs(best.get_d() - x) <= tol) return best;
    return std::nullopt;
}

}  // namespace subdivkit
