#pragma once

#include <algorithm>
#include <cmath>

#include "cdarl/core/bytes.hpp"
#include "cdarl/core/rng.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// One step of the mean-reverting fundamental walk, truncated at zero:
///   r' = max(0, kappa * r_bar + (1 - kappa) * (r + shock)).
inline double step_fundamental(double r, const MarketParams& p, double shock) {
    return std::max(0.0, p.kappa * p.r_bar + (1.0 - p.kappa) * (r + shock));
}

/// Expectation of the final fundamental value r_T given r_t at time t:
///   (1 - (1-kappa)^(T-t)) * r_bar + (1-kappa)^(T-t) * r_t.
inline double expected_final_fundamental(double r_t, Tick t, const MarketParams& p) {
    const double decay = std::pow(1.0 - p.kappa, static_cast<double>(p.total_steps - t));
    return (1.0 - decay) * p.r_bar + decay * r_t;
}

/// Fundamental value advanced lazily, one tick at a time, consuming one
/// Gaussian draw per tick from the caller's stream.
class FundamentalProcess {
public:
    FundamentalProcess() = default;
    FundamentalProcess(double value, Tick time) : value_(value), time_(time) {}

    double value() const { return value_; }
    Tick time() const { return time_; }

    void advance_to(Tick t, const MarketParams& p, Rng& rng) {
        std::normal_distribution<double> shock(0.0, std::sqrt(p.sigma_s_sq));
        while (time_ < t) {
            value_ = step_fundamental(value_, p, shock(rng));
            ++time_;
        }
    }

    void serialize(ByteSink& sink) const {
        sink.put(value_);
        sink.put(time_);
    }

private:
    double value_ = 0.0;
    Tick time_ = 0;
};

}  // namespace cdarl
