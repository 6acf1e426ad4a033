#pragma once

#include <algorithm>
#include <cmath>

namespace slrt {

// log(2*pi) to full double precision.
inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// log(exp(a) + exp(b)) without overflow/underflow. Symmetric in (a, b);
// tolerates -inf arguments (returns the other one).
inline double log_sum_exp(double a, double b) {
    if (a == b) return a + 0.6931471805599453094;  // log 2; keeps lse(x,x) = x + log2 exact-ish
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    if (std::isinf(hi) && hi < 0.0) return hi;  // both -inf
    return hi + std::log1p(std::exp(lo - hi));
}

// log density of N(mu, 1) at x.
inline double gaussian_logpdf(double x, double mu) {
    const double r = x - mu;
    return -0.5 * kLog2Pi - 0.5 * r * r;
}

}  // namespace slrt
