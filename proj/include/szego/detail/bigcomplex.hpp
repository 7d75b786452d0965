#pragma once

// Small GMP float helpers for the polynomial root finder.

#include <gmpxx.h>

#include <cmath>
#include <limits>

namespace szego::detail {

// log2 of an mpf magnitude, -inf for zero.
inline double log2_mpf(const mpf_class& x) {
    long e = 0;
    const double m = mpf_get_d_2exp(&e, x.get_mpf_t());
    if (m == 0.0)
        return -std::numeric_limits<double>::infinity();
    return std::log2(std::abs(m)) + double(e);
}

} // namespace szego::detail
