#pragma once

#include <cstddef>
#include <vector>

#include "carascale/dense.hpp"

namespace carascale {

/// Point of the standard simplex (weights >= 0 summing to 1), stored as a
/// dense weight array plus an explicit sorted support list. Only strictly
/// positive weights are members of the support; zeroing a weight removes it.
class SimplexPoint {
public:
    explicit SimplexPoint(std::size_t n) : w_(n, 0.0) {}

    static SimplexPoint unit(std::size_t n, std::size_t i) {
        SimplexPoint x(n);
        x.set_weight(i, 1.0);
        return x;
    }

    std::size_t dim() const { return w_.size(); }
    double weight(std::size_t i) const { return w_[i]; }
    const std::vector<std::size_t>& support() const { return support_; }

    double sum() const {
        double s = 0.0;
        for (std::size_t i : support_) s += w_[i];
        return s;
    }

    /// Largest weight; 0 for the empty point.
    double max_weight() const {
        double m = 0.0;
        for (std::size_t i : support_) m = std::max(m, w_[i]);
        return m;
    }

    /// Smallest index attaining the largest weight.
    std::size_t max_weight_index() const {
        double m = -1.0;
        std::size_t arg = 0;
        for (std::size_t i : support_) // ascending, so first strict improvement wins ties
            if (w_[i] > m) {
                m = w_[i];
                arg = i;
            }
        return arg;
    }

    void set_weight(std::size_t i, double v);
    void add_weight(std::size_t i, double delta) { set_weight(i, w_[i] + delta); }
    void set_zero(std::size_t i) { set_weight(i, 0.0); }

    /// Multiply every weight by s (s = 0 clears the point).
    void scale_all(double s);

    /// Divide weights by their sum so they sum to 1 (up to one rounding).
    /// Returns the applied factor.
    double renormalize();

    DenseVector to_dense() const { return w_; }

private:
    std::vector<double> w_;
    std::vector<std::size_t> support_; // ascending
};

} // namespace carascale
