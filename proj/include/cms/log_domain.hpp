#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace cms {

/// Sentinel for log(0): forbidden transitions, empty sums, zero measure.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double x) { return x == kNegInf; }

/// log(e^a + e^b) with kNegInf absorbed.
inline double log_add(double a, double b) {
    if (is_neg_inf(a)) return b;
    if (is_neg_inf(b)) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// log sum_i e^{v_i}, max-shifted. All-kNegInf (or empty) input gives kNegInf.
inline double log_sum_exp(std::span<const double> values) {
    double hi = kNegInf;
    for (double v : values) hi = std::max(hi, v);
    if (is_neg_inf(hi)) return kNegInf;
    if (std::isinf(hi)) return hi;
    double acc = 0.0;
    for (double v : values) {
        if (!is_neg_inf(v)) acc += std::exp(v - hi);
    }
    return hi + std::log(acc);
}

} // namespace cms
