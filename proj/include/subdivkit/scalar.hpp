#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace subdivkit {

// Coefficient scalar: either an exact rational (arbitrary precision, lowest
// terms, positive denominator) or a binary float64.  Promotion is one-way:
// any operation touching a float yields a float.  There is no implicit
// float -> exact conversion.
class Scalar {
public:
    Scalar() : v_(mpq_class(0)) {}
    Scalar(int n) : v_(mpq_class(n)) {}
    Scalar(long n) : v_(mpq_class(static_cast<signed long>(n))) {}
    Scalar(long long n) : v_(mpq_class(std::to_string(n))) {}
    Scalar(const mpz_class& n) : v_(mpq_class(n)) {}
    Scalar(mpq_class q) : v_(std::move(q)) { canon(); }
    explicit Scalar(double d) : v_(d) {}

    static Scalar ratio(long num, long den) {
        if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }
    static Scalar ratio(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }

    bool exact() const { return std::holds_alternative<mpq_class>(v_); }
    bool is_zero() const {
        return exact() ? sgn(rat()) == 0 : std::get<double>(v_) == 0.0;
    }
    bool is_integer() const { return exact() && rat().get_den() == 1; }

    const mpq_class& rat() const {
        if (!exact()) throw std::logic_error("Scalar: float has no exact value");
        return std::get<mpq_class>(v_);
    }
    double dbl() const {
        return exact() ? rat().get_d() : std::get<double>(v_);
    }

    Scalar operator-() const {
        if (exact()) return Scalar(mpq_class(-rat()));
        return Scalar(-std::get<double>(v_));
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.exact() && b.exact()) return Scalar(mpq_class(a.rat() + b.rat()));
        return Scalar(a.dbl() + b.dbl());
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        if (a.exact() && b.exact()) return Scalar(mpq_class(a.rat() - b.rat()));
        return Scalar(a.dbl() - b.dbl());
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.exact() && b.exact()) return Scalar(mpq_class(a.rat() * b.rat()));
        return Scalar(a.dbl() * b.dbl());
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
        if (a.exact() && b.exact()) return Scalar(mpq_class(a.rat() / b.rat()));
        return Scalar(a.dbl() / b.dbl());
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    // Exact scalars compare exactly; if either side is a float both are
    // compared as doubles.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.exact() && b.exact()) return a.rat() == b.rat();
        return a.dbl() == b.dbl();
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.exact() && b.exact()) return a.rat() < b.rat();
        return a.dbl() < b.dbl();
    }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return a < b || a == b; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return b <= a; }

    Scalar abs() const { return (*this < Scalar(0)) ? -*this : *this; }

    Scalar pow(unsigned e) const {
        Scalar r(1);
        Scalar base = *this;
        for (unsigned i = 0; i < e; ++i) r *= base;
        return r;
    }

    // "p/q" (or "p" for integers) for exact values, shortest decimal otherwise.
    std::string str() const;

    // Exact values render via their correctly-rounded nearest double.
    double rounded_dbl() const;

private:
    void canon() {
        if (exact()) std::get<mpq_class>(v_).canonicalize();
    }
    std::variant<mpq_class, double> v_;
};

inline Scalar abs(const Scalar& s) { return s.abs(); }

}  // namespace subdivkit
