#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace subdivkit {

// Coefficient budget exceeded (CLI exit code 4).
struct ResourceLimit : std::runtime_error {
    explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

// Construction problem has no admissible solution (CLI exit code 3).
struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

// Total coefficient budget for long convolutions / refinements.
// Overridable via SUBDIVKIT_MAX_COEFFS.
inline long max_coeff_budget() {
    static long cached = [] {
        if (const char* env = std::getenv("SUBDIVKIT_MAX_COEFFS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end && *end == '\0' && v > 0) return v;
        }
        return 10000000L;
    }();
    return cached;
}

inline void check_coeff_budget(long predicted, const char* where) {
    if (predicted > max_coeff_budget())
        throw ResourceLimit(std::string(where) + ": predicted coefficient count " +
                            std::to_string(predicted) + " exceeds budget " +
                            std::to_string(max_coeff_budget()));
}

}  // namespace subdivkit
