#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cdarl/core/bytes.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// Limit order book for unit-size orders under price-time priority.
///
/// Both sides are kept sorted with the highest-priority order at the back:
/// buys by (price asc, seq desc), sells by (price desc, seq desc). An
/// incoming order either transacts against the best opposite order at the
/// resting order's price, or it rests.
class OrderBook {
public:
    std::optional<Price> bid() const {
        return buys_.empty() ? std::nullopt : std::optional<Price>(buys_.back().price);
    }
    std::optional<Price> ask() const {
        return sells_.empty() ? std::nullopt : std::optional<Price>(sells_.back().price);
    }

    const std::vector<Order>& buys() const { return buys_; }
    const std::vector<Order>& sells() const { return sells_; }
    std::size_t size() const { return buys_.size() + sells_.size(); }

    /// Submits an order; returns the transaction if it matched.
    std::optional<Transaction> submit(Order order) {
        if (order.price <= 0) throw std::invalid_argument("OrderBook: order price must be positive");
        order.seq = next_seq_++;
        if (order.side == Side::Buy) {
            if (!sells_.empty() && order.price >= sells_.back().price) {
                const Order resting = sells_.back();
                sells_.pop_back();
                return Transaction{order.owner, resting.owner, resting.price, order.submit_time};
            }
            insert_sorted(buys_, order, buy_before);
        } else {
            if (!buys_.empty() && order.price <= buys_.back().price) {
                const Order resting = buys_.back();
                buys_.pop_back();
                return Transaction{resting.owner, order.owner, resting.price, order.submit_time};
            }
            insert_sorted(sells_, order, sell_before);
        }
        return std::nullopt;
    }

    void cancel_owner(AgentId owner) {
        auto drop = [owner](const Order& o) { return o.owner == owner; };
        std::erase_if(buys_, drop);
        std::erase_if(sells_, drop);
    }

    std::size_t count_owner(AgentId owner) const {
        auto pred = [owner](const Order& o) { return o.owner == owner; };
        return static_cast<std::size_t>(std::count_if(buys_.begin(), buys_.end(), pred) +
                                        std::count_if(sells_.begin(), sells_.end(), pred));
    }

    void clear() {
        buys_.clear();
        sells_.clear();
    }

    /// Best buy strictly below best sell whenever both sides are nonempty.
    bool is_uncrossed() const {
        if (buys_.empty() || sells_.empty()) return true;
        return buys_.back().price < sells_.back().price;
    }

    void serialize(ByteSink& sink) const {
        auto put_order = [&sink](const Order& o) {
            sink.put(static_cast<std::uint8_t>(o.side));
            sink.put(o.price);
            sink.put(o.owner);
            sink.put(o.submit_time);
            sink.put(o.seq);
        };
        sink.put<std::uint64_t>(buys_.size());
        for (const Order& o : buys_) put_order(o);
        sink.put<std::uint64_t>(sells_.size());
        for (const Order& o : sells_) put_order(o);
        sink.put(next_seq_);
    }

private:
    // "before" = lower priority, so the best order sorts to the back.
    static bool buy_before(const Order& a, const Order& b) {
        if (a.price != b.price) return a.price < b.price;
        return a.seq > b.seq;
    }
    static bool sell_before(const Order& a, const Order& b) {
        if (a.price != b.price) return a.price > b.price;
        return a.seq > b.seq;
    }

    template <typename Cmp>
    static void insert_sorted(std::vector<Order>& side, const Order& order, Cmp cmp) {
        side.insert(std::upper_bound(side.begin(), side.end(), order, cmp), order);
    }

    std::vector<Order> buys_;
    std::vector<Order> sells_;
    std::uint64_t next_seq_ = 0;
};

}  // namespace cdarl
