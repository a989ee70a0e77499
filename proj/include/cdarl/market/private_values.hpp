#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "cdarl/core/bytes.hpp"
#include "cdarl/core/rng.hpp"

namespace cdarl {

/// Marginal private values over inventory transitions.
///
/// Entry i holds the marginal value of moving from inventory position
/// (i - span/2) to (i - span/2 + 1); with span 20 that covers the
/// transitions -10 -> -9 up to +9 -> +10. Entries are non-increasing, so
/// the more units held, the less the next unit is worth. Positions past
/// the ends clamp to the outermost entry.
class PrivateValues {
public:
    PrivateValues() = default;

    explicit PrivateValues(std::vector<double> marginals) : marginal_(std::move(marginals)) {
        std::sort(marginal_.begin(), marginal_.end(), std::greater<double>());
    }

    static PrivateValues draw(int span, double sigma, Rng& rng) {
        std::normal_distribution<double> dist(0.0, sigma);
        std::vector<double> vals(static_cast<std::size_t>(span));
        for (double& v : vals) v = dist(rng);
        return PrivateValues(std::move(vals));
    }

    bool empty() const { return marginal_.empty(); }
    int span() const { return static_cast<int>(marginal_.size()); }

    /// Marginal value of acquiring one unit at current inventory.
    double buy_gain(int inventory) const { return at_transition(inventory); }

    /// Marginal value of the unit given up when selling at current inventory.
    double sell_loss(int inventory) const { return at_transition(inventory - 1); }

    /// Cumulative private value of holding an inventory position,
    /// accumulated transition by transition from zero.
    double cumulative(int inventory) const {
        if (marginal_.empty()) return 0.0;
        double v = 0.0;
        if (inventory > 0) {
            for (int k = 0; k < inventory; ++k) v += at_transition(k);
        } else {
            for (int k = inventory; k < 0; ++k) v -= at_transition(k);
        }
        return v;
    }

    /// Largest inventory whose cumulative value is maximal, i.e. the
    /// position at which acquiring further units stops paying.
    int preferred_inventory() const {
        int count_positive = 0;
        for (double v : marginal_)
            if (v > 0.0) ++count_positive;
        return count_positive - span() / 2;
    }

    const std::vector<double>& marginals() const { return marginal_; }

    void serialize(ByteSink& sink) const { sink.put_range(marginal_); }

private:
    /// Marginal value of the transition from `position` to `position + 1`.
    double at_transition(int position) const {
        if (marginal_.empty()) return 0.0;
        int idx = position + span() / 2;
        idx = std::clamp(idx, 0, span() - 1);
        return marginal_[static_cast<std::size_t>(idx)];
    }

    std::vector<double> marginal_;  // sorted descending
};

}  // namespace cdarl
