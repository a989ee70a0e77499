#pragma once

#include <cstdint>
#include <vector>

#include "cdarl/core/bytes.hpp"
#include "cdarl/market/private_values.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// Per-agent inventory, cash, and (for background traders) private values.
/// Inventory and cash both net to zero across all agents at all times.
struct AgentAccount {
    int inventory = 0;
    std::int64_t cash = 0;
    PrivateValues pv;  // empty for the market maker

    void serialize(ByteSink& sink) const {
        sink.put(inventory);
        sink.put(cash);
        pv.serialize(sink);
    }
};

/// Applies a transaction to the two accounts involved. The buyer pays the
/// trade price and gains one unit; the seller mirrors it.
inline void settle(std::vector<AgentAccount>& accounts, const Transaction& tx) {
    AgentAccount& buyer = accounts[static_cast<std::size_t>(tx.buyer)];
    AgentAccount& seller = accounts[static_cast<std::size_t>(tx.seller)];
    buyer.cash -= tx.price;
    buyer.inventory += 1;
    seller.cash += tx.price;
    seller.inventory -= 1;
}

/// Final payoff once inventory is liquidated at r_T: cash plus liquidation
/// value plus (for background traders) the cumulative private value of the
/// held position.
inline double final_payoff(const AgentAccount& a, double r_final) {
    return static_cast<double>(a.cash) + static_cast<double>(a.inventory) * r_final +
           a.pv.cumulative(a.inventory);
}

}  // namespace cdarl
