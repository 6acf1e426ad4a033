#include "slrt/rng.hpp"

#include <cmath>
#include <numbers>

namespace slrt::rng {

double NormalSampler::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = rng_.next_double_open();
    const double u2 = rng_.next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace slrt::rng
