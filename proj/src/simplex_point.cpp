#include "carascale/simplex_point.hpp"

#include <algorithm>

namespace carascale {

void SimplexPoint::set_weight(std::size_t i, double v) {
    const bool was_member = w_[i] > 0.0;
    if (v > 0.0) {
        w_[i] = v;
        if (!was_member) support_.insert(std::lower_bound(support_.begin(), support_.end(), i), i);
    } else {
        w_[i] = 0.0;
        if (was_member) {
            auto it = std::lower_bound(support_.begin(), support_.end(), i);
            support_.erase(it);
        }
    }
}

void SimplexPoint::scale_all(double s) {
    if (s == 0.0) {
        for (std::size_t i : support_) w_[i] = 0.0;
        support_.clear();
        return;
    }
    for (std::size_t i : support_) w_[i] *= s;
}

double SimplexPoint::renormalize() {
    const double s = sum();
    if (s <= 0.0) return 1.0;
    const double f = 1.0 / s;
    scale_all(f);
    return f;
}

} // namespace carascale
