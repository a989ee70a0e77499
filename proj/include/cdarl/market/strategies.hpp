#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "cdarl/core/rng.hpp"
#include "cdarl/market/accounts.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// Draws the next arrival: an exponential interarrival with mean 1/rate,
/// rounded to the nearest tick (minimum 1) and added to `current`. Nothing
/// is scheduled past the horizon.
inline std::optional<Tick> schedule_next_arrival(Tick current, double rate, Tick horizon,
                                                 Rng& rng) {
    std::exponential_distribution<double> gap(rate);
    const Tick g = std::max<Tick>(1, std::llround(gap(rng)));
    const Tick next = current + g;
    if (next > horizon) return std::nullopt;
    return next;
}

/// Zero-intelligence order decision for one arrival.
///
/// The trader values a unit at r_hat plus the marginal private value of the
/// transition it would make, and demands `surplus_draw` on top. If trading
/// immediately at the standing quote already captures at least eta of the
/// desired surplus, it takes the quote instead of resting a limit order.
/// Limit prices that round to zero or below produce no order.
inline std::optional<Order> zi_order(const AgentAccount& account, const ZiParams& zi, Side side,
                                     double r_hat, std::optional<Price> bid,
                                     std::optional<Price> ask, double surplus_draw,
                                     AgentId owner, Tick now) {
    if (side == Side::Buy) {
        const double unit_value = r_hat + account.pv.buy_gain(account.inventory);
        if (ask && unit_value - static_cast<double>(*ask) >= zi.eta * surplus_draw)
            return Order{Side::Buy, *ask, owner, now, 0};
        const Price limit = std::llround(unit_value - surplus_draw);
        if (limit <= 0) return std::nullopt;
        return Order{Side::Buy, limit, owner, now, 0};
    }
    const double unit_value = r_hat + account.pv.sell_loss(account.inventory);
    if (bid && static_cast<double>(*bid) - unit_value >= zi.eta * surplus_draw)
        return Order{Side::Sell, *bid, owner, now, 0};
    const Price limit = std::llround(unit_value + surplus_draw);
    if (limit <= 0) return std::nullopt;
    return Order{Side::Sell, limit, owner, now, 0};
}

/// Market-maker ladder around the expected final fundamental: K sell rungs
/// starting min_spread/2 above round(r_hat) and K buy rungs mirrored below,
/// spaced rung_size apart. Prices are truncated to at least 1.
inline std::vector<Order> mm_ladder(double r_hat, const MmParams& mm, AgentId owner, Tick now) {
    std::vector<Order> orders;
    orders.reserve(static_cast<std::size_t>(2 * mm.num_rungs));
    const Price center = std::llround(r_hat);
    const Price half_spread = mm.min_spread / 2;
    for (int j = 1; j <= mm.num_rungs; ++j) {
        const Price offset = half_spread + static_cast<Price>(j - 1) * mm.rung_size;
        orders.push_back(Order{Side::Sell, std::max<Price>(1, center + offset), owner, now, 0});
        orders.push_back(Order{Side::Buy, std::max<Price>(1, center - offset), owner, now, 0});
    }
    return orders;
}

}  // namespace cdarl
