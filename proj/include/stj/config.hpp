#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace stj::config {

// Degree cap for user-constructed polynomials.  Derived results (products,
// antiderivatives) may exceed it; see Poly::raw.
inline int& max_poly_degree_ref() {
    static int cap = 6;
    return cap;
}

inline int max_poly_degree() { return max_poly_degree_ref(); }

inline void set_max_poly_degree(int d) {
    if (d < 0) throw std::invalid_argument("degree cap must be nonnegative");
    max_poly_degree_ref() = d;
}

// Honors STJ_MAX_DEGREE when set.  Call once at process start (the CLI does).
inline void load_env_overrides() {
    if (const char* s = std::getenv("STJ_MAX_DEGREE")) {
        set_max_poly_degree(std::stoi(std::string(s)));
    }
}

}  // namespace stj::config
