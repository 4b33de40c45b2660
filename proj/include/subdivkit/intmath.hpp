#pragma once

#include <gmpxx.h>

#include <stdexcept>

namespace subdivkit {

// floor / ceil division with positive divisor (C++ '/' truncates toward zero)
inline long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

// floor / ceil of an exact rational as a long
inline long floor_rat(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!f.fits_slong_p()) throw std::overflow_error("floor_rat: out of range");
    return f.get_si();
}
inline long ceil_rat(const mpq_class& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!c.fits_slong_p()) throw std::overflow_error("ceil_rat: out of range");
    return c.get_si();
}

inline mpz_class pow_z(long base, unsigned e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

}  // namespace subdivkit
