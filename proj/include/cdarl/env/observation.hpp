#pragma once

#include <optional>
#include <vector>

#include "cdarl/market/private_values.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// What the self agent senses at a decision point. Contains nothing about
/// other agents. The learner's features are the two quote surpluses and
/// the time remaining; the rest is exposed for logging and accounting.
struct Observation {
    Tick time_remaining = 0;
    double fundamental = 0.0;
    double r_hat_final = 0.0;  // expected final fundamental at this time
    std::optional<Price> bid;
    std::optional<Price> ask;
    int inventory = 0;
    std::int64_t cash = 0;
    PrivateValues private_values;
    std::optional<Side> role;  // set in FlipKnown mode
    bool terminal = false;

    /// Surplus from buying immediately at the ASK; absent book side maps to
    /// -infinity so it lands in the lowest surplus region.
    double surplus_buy_at_ask() const {
        if (!ask) return -std::numeric_limits<double>::infinity();
        return (r_hat_final + private_values.buy_gain(inventory)) - static_cast<double>(*ask);
    }

    /// Surplus from selling immediately at the BID.
    double surplus_sell_at_bid() const {
        if (!bid) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(*bid) - (r_hat_final + private_values.sell_loss(inventory));
    }
};

/// Self-agent action: do nothing, or demand a configured surplus on one
/// side of the market.
struct MarketAction {
    enum class Kind { Noop, Buy, Sell };
    Kind kind = Kind::Noop;
    Price surplus = 0;

    static MarketAction noop() { return {}; }
    static MarketAction buy(Price s) { return {Kind::Buy, s}; }
    static MarketAction sell(Price s) { return {Kind::Sell, s}; }
};

enum class SelfAgentMode {
    NoFlip,     // the agent picks the order side itself
    FlipKnown,  // a coin flip picks the side; the agent sees it before acting
};

/// Indexed action set for a given mode and surplus menu. In NoFlip the set
/// is NOOP + BUY and SELL at each surplus; in FlipKnown it is NOOP + the
/// surpluses, with the side taken from the observation's role. The NoFlip
/// set therefore strictly contains both side-constrained FlipKnown sets.
class ActionSpace {
public:
    ActionSpace() = default;
    ActionSpace(SelfAgentMode mode, std::vector<Price> surpluses)
        : mode_(mode), surpluses_(std::move(surpluses)) {}

    SelfAgentMode mode() const { return mode_; }
    const std::vector<Price>& surpluses() const { return surpluses_; }

    int size() const {
        const int n = static_cast<int>(surpluses_.size());
        return mode_ == SelfAgentMode::NoFlip ? 1 + 2 * n : 1 + n;
    }

    /// Materializes an indexed action; in FlipKnown the side comes from the
    /// coin-flip role.
    MarketAction action(int index, std::optional<Side> role = std::nullopt) const {
        const int n = static_cast<int>(surpluses_.size());
        if (index == 0) return MarketAction::noop();
        if (mode_ == SelfAgentMode::NoFlip) {
            if (index <= n) return MarketAction::buy(surpluses_[static_cast<std::size_t>(index - 1)]);
            return MarketAction::sell(surpluses_[static_cast<std::size_t>(index - n - 1)]);
        }
        const Price s = surpluses_[static_cast<std::size_t>(index - 1)];
        return (role == Side::Sell) ? MarketAction::sell(s) : MarketAction::buy(s);
    }

    std::string label(int index) const {
        if (index == 0) return "NOOP";
        const int n = static_cast<int>(surpluses_.size());
        if (mode_ == SelfAgentMode::NoFlip) {
            if (index <= n) return "BUY:" + std::to_string(surpluses_[static_cast<std::size_t>(index - 1)]);
            return "SELL:" + std::to_string(surpluses_[static_cast<std::size_t>(index - n - 1)]);
        }
        return "TRADE:" + std::to_string(surpluses_[static_cast<std::size_t>(index - 1)]);
    }

    bool contains(const MarketAction& a) const {
        if (a.kind == MarketAction::Kind::Noop) return true;
        for (Price s : surpluses_)
            if (s == a.surplus) return true;
        return false;
    }

private:
    SelfAgentMode mode_ = SelfAgentMode::NoFlip;
    std::vector<Price> surpluses_;
};

}  // namespace cdarl
