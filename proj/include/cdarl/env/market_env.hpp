#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cdarl/core/rng.hpp"
#include "cdarl/env/observation.hpp"
#include "cdarl/market/mixture.hpp"
#include "cdarl/market/presets.hpp"
#include "cdarl/market/simulation.hpp"

namespace cdarl {

/// One generative-model sample: the checkpointed hidden state at the next
/// decision point (or terminal), the observation there, and the reward
/// accumulated since the previous decision point.
struct EnvSample {
    MarketState state;
    Observation obs;
    double reward = 0.0;
    bool terminal = false;
};

/// Account snapshot at a decision point, used for the telescoping reward.
struct AccountSnapshot {
    int inventory = 0;
    std::int64_t cash = 0;
    double r_hat = 0.0;
};

/// Intermediate reward between consecutive decision points:
///   (I' * r_hat' - I * r_hat) + (c' - c), plus the cumulative private
/// value of the final position when the run terminates. Summed over a
/// trajectory this telescopes to the trader's total surplus.
inline double reward_increment(const AccountSnapshot& prev, const AccountSnapshot& next,
                               bool terminal, double terminal_private_value) {
    double r = (static_cast<double>(next.inventory) * next.r_hat -
                static_cast<double>(prev.inventory) * prev.r_hat) +
               static_cast<double>(next.cash - prev.cash);
    if (terminal) r += terminal_private_value;
    return r;
}

/// Converts an indexed action into a limit order at the decision point.
/// BUY prices the unit at its value minus the demanded surplus; SELL at
/// its value plus the surplus. NOOP (or a price that rounds below 1)
/// places nothing.
inline std::optional<Order> action_to_order(const MarketAction& action, const Observation& obs,
                                            AgentId owner, Tick now) {
    if (action.kind == MarketAction::Kind::Noop) return std::nullopt;
    Price price = 0;
    if (action.kind == MarketAction::Kind::Buy) {
        const double value = obs.r_hat_final + obs.private_values.buy_gain(obs.inventory);
        price = std::llround(value - static_cast<double>(action.surplus));
        if (price <= 0) return std::nullopt;
        return Order{Side::Buy, price, owner, now, 0};
    }
    const double value = obs.r_hat_final + obs.private_values.sell_loss(obs.inventory);
    price = std::llround(value + static_cast<double>(action.surplus));
    if (price <= 0) return std::nullopt;
    return Order{Side::Sell, price, owner, now, 0};
}

/// The market as a generative POMDP for the self agent (background trader
/// 0). Hidden states are plain MarketState values: copying one is the
/// checkpoint clone, and because states carry no RNG, resuming twice from
/// the same checkpoint with fresh stream draws yields independent futures.
/// Scheduled arrivals of other agents are dropped at every pause and
/// regenerated from the pause time on resume.
class MarketEnv {
public:
    MarketEnv(EnvPreset preset, StrategyMixture mixture, SelfAgentMode mode)
        : preset_(std::move(preset)),
          mixture_(std::move(mixture)),
          actions_(mode, preset_.action_surpluses) {
        preset_.params.validate();
        mixture_.validate();
    }

    static constexpr AgentId kSelfAgent = 0;

    const EnvPreset& preset() const { return preset_; }
    const MarketParams& params() const { return preset_.params; }
    const StrategyMixture& mixture() const { return mixture_; }
    const ActionSpace& actions() const { return actions_; }
    SelfAgentMode mode() const { return actions_.mode(); }

    /// Draws the other agents' pure strategies from the mixture, runs to
    /// the self agent's first arrival, and returns the observation there
    /// with reward 0. If the self agent never arrives the sample is
    /// terminal with reward 0.
    EnvSample sample_initial(Rng& rng) const {
        std::vector<ZiParams> bg(static_cast<std::size_t>(params().num_background));
        for (auto& z : bg) z = mixture_.draw_bg(rng);
        const MmParams mm = mixture_.draw_mm(rng);

        EnvSample s;
        s.state = init_market_state(params(), std::move(bg), mm, rng);
        const RunOutcome outcome = advance(s.state, kSelfAgent, rng);
        finish_sample(s, outcome, rng, /*terminal_reward_base=*/std::nullopt);
        s.reward = 0.0;  // reward is defined to be 0 in the initial state
        return s;
    }

    /// Applies the self agent's action at the checkpointed decision point
    /// and resumes until its next arrival or the horizon.
    EnvSample generate_sample(const MarketState& checkpoint, const MarketAction& action,
                              Rng& rng) const {
        if (checkpoint.finished)
            throw std::logic_error("generate_sample: checkpoint is terminal");
        if (!actions_.contains(action))
            throw std::invalid_argument("generate_sample: action not in the configured set");
        if (mode() == SelfAgentMode::FlipKnown && action.kind != MarketAction::Kind::Noop &&
            checkpoint.pending_role &&
            action.kind != (*checkpoint.pending_role == Side::Buy ? MarketAction::Kind::Buy
                                                                  : MarketAction::Kind::Sell))
            throw std::invalid_argument("generate_sample: action side contradicts assigned role");

        EnvSample s;
        s.state = checkpoint;  // deep copy
        const AccountSnapshot before = snapshot(s.state);

        const Observation here = observe(s.state);
        if (auto order = action_to_order(action, here, kSelfAgent, s.state.now)) {
            if (auto tx = s.state.book.submit(*order)) settle(s.state.accounts, *tx);
        }
        s.state.pending_role = std::nullopt;

        // Regenerate every arrival from the pause time; the exponential law
        // is memoryless, so the fresh draw is the correct conditional.
        for (int i = 0; i < s.state.num_agents(); ++i) {
            const double rate =
                (i == s.state.mm_agent()) ? params().lambda_mm : params().lambda_bg;
            s.state.next_arrival[static_cast<std::size_t>(i)] =
                schedule_next_arrival(s.state.now, rate, params().total_steps, rng);
        }

        const RunOutcome outcome = advance(s.state, kSelfAgent, rng);
        finish_sample(s, outcome, rng, before);
        return s;
    }

    /// The observation at a paused (or finished) state.
    Observation observe(const MarketState& st) const {
        Observation o;
        o.time_remaining = params().total_steps - st.now;
        o.fundamental = st.fundamental.value();
        o.r_hat_final = expected_final_fundamental(o.fundamental, st.now, params());
        o.bid = st.book.bid();
        o.ask = st.book.ask();
        const AgentAccount& acct = st.accounts[kSelfAgent];
        o.inventory = acct.inventory;
        o.cash = acct.cash;
        o.private_values = acct.pv;
        o.role = st.pending_role;
        o.terminal = st.finished;
        return o;
    }

private:
    AccountSnapshot snapshot(const MarketState& st) const {
        const AgentAccount& acct = st.accounts[kSelfAgent];
        return {acct.inventory, acct.cash,
                expected_final_fundamental(st.fundamental.value(), st.now, params())};
    }

    void finish_sample(EnvSample& s, RunOutcome outcome, Rng& rng,
                       std::optional<AccountSnapshot> before) const {
        if (outcome == RunOutcome::Paused && mode() == SelfAgentMode::FlipKnown)
            s.state.pending_role = (rng() & 1u) ? Side::Buy : Side::Sell;
        s.terminal = (outcome == RunOutcome::Finished);
        if (before) {
            const AgentAccount& acct = s.state.accounts[kSelfAgent];
            s.reward = reward_increment(*before, snapshot(s.state), s.terminal,
                                        s.terminal ? acct.pv.cumulative(acct.inventory) : 0.0);
        }
        s.obs = observe(s.state);
    }

    EnvPreset preset_;
    StrategyMixture mixture_;
    ActionSpace actions_;
};

}  // namespace cdarl
