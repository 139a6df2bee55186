#ifndef CCLAB_LOGMATH_HPP
#define CCLAB_LOGMATH_HPP

#include <cmath>
#include <limits>

namespace cclab {

// All rates and densities in this library are base-2 (bits / symbol).

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double x) { return std::isinf(x) && x < 0; }

// log2(2^a + 2^b), stable for widely separated exponents; -inf propagates.
inline double log2_add(double a, double b) {
    if (is_neg_inf(a)) return b;
    if (is_neg_inf(b)) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

// Binary entropy h(p) in bits; h(0) = h(1) = 0.
inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace cclab

#endif
