#include "subdivkit/scalar.hpp"

#include <charconv>
#include <cstdio>

namespace subdivkit {

std::string Scalar::str() const {
    if (exact()) {
        const mpq_class& q = rat();
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    double d = std::get<double>(v_);
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

double Scalar::rounded_dbl() const {
    if (!exact()) return std::get<double>(v_);
    // mpq_get_d truncates toward zero; go through a 128-bit float for a
    // correctly rounded result.
    mpf_class f(rat(), 128);
    return f.get_d();
}

}  // namespace subdivkit
