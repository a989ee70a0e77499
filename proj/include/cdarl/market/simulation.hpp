#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cdarl/core/bytes.hpp"
#include "cdarl/core/rng.hpp"
#include "cdarl/market/accounts.hpp"
#include "cdarl/market/fundamental.hpp"
#include "cdarl/market/order_book.hpp"
#include "cdarl/market/strategies.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// Complete simulator state. Copying the struct is a deep copy; no RNG
/// state is stored, so all randomness comes from the stream the caller
/// supplies when advancing.
///
/// Agents 0..num_background-1 are background traders (agent 0 doubles as
/// the self agent in RL mode); the market maker is the last agent.
struct MarketState {
    MarketParams params;
    Tick now = 0;
    FundamentalProcess fundamental;
    OrderBook book;
    std::vector<AgentAccount> accounts;
    std::vector<ZiParams> bg_strategy;
    MmParams mm_strategy;
    std::vector<std::optional<Tick>> next_arrival;
    std::optional<Side> pending_role;  // FlipKnown coin flip at a pause
    bool finished = false;

    int num_agents() const { return params.num_background + 1; }
    AgentId mm_agent() const { return params.num_background; }

    void serialize(ByteSink& sink) const {
        sink.put(now);
        sink.put(finished);
        sink.put(pending_role ? static_cast<int>(*pending_role) : -1);
        fundamental.serialize(sink);
        book.serialize(sink);
        for (const auto& a : accounts) a.serialize(sink);
        for (const auto& na : next_arrival) sink.put(na.value_or(-1));
    }

    std::uint64_t fingerprint() const {
        ByteSink sink;
        serialize(sink);
        return sink.hash();
    }
};

enum class RunOutcome { Paused, Finished };

namespace detail {

inline void submit_and_settle(MarketState& st, const Order& order,
                              std::vector<Transaction>* log) {
    if (auto tx = st.book.submit(order)) {
        settle(st.accounts, *tx);
        if (log) log->push_back(*tx);
    }
}

inline void process_background_arrival(MarketState& st, AgentId agent, Rng& rng,
                                       std::vector<Transaction>* log) {
    st.book.cancel_owner(agent);
    const ZiParams& zi = st.bg_strategy[static_cast<std::size_t>(agent)];
    const Side side = (rng() & 1u) ? Side::Buy : Side::Sell;
    std::uniform_real_distribution<double> surplus(zi.r_min, zi.r_max);
    const double draw = surplus(rng);
    const double r_hat = expected_final_fundamental(st.fundamental.value(), st.now, st.params);
    auto order = zi_order(st.accounts[static_cast<std::size_t>(agent)], zi, side, r_hat,
                          st.book.bid(), st.book.ask(), draw, agent, st.now);
    if (order) submit_and_settle(st, *order, log);
}

inline void process_mm_arrival(MarketState& st, Rng& rng, std::vector<Transaction>* log) {
    (void)rng;
    const AgentId mm = st.mm_agent();
    st.book.cancel_owner(mm);
    const double r_hat = expected_final_fundamental(st.fundamental.value(), st.now, st.params);
    for (const Order& o : mm_ladder(r_hat, st.mm_strategy, mm, st.now))
        submit_and_settle(st, o, log);
}

}  // namespace detail

/// Builds the opening state: zeroed accounts, freshly drawn private values
/// for every background trader, fundamental at r_bar, and a first arrival
/// scheduled for every agent.
inline MarketState init_market_state(const MarketParams& params,
                                     std::vector<ZiParams> bg_strategies, const MmParams& mm,
                                     Rng& rng) {
    params.validate();
    if (static_cast<int>(bg_strategies.size()) != params.num_background)
        throw std::invalid_argument("init_market_state: need one strategy per background trader");
    for (const auto& z : bg_strategies) z.validate();
    mm.validate();

    MarketState st;
    st.params = params;
    st.fundamental = FundamentalProcess(params.r_bar, 0);
    st.bg_strategy = std::move(bg_strategies);
    st.mm_strategy = mm;
    st.accounts.resize(static_cast<std::size_t>(st.num_agents()));
    for (int i = 0; i < params.num_background; ++i)
        st.accounts[static_cast<std::size_t>(i)].pv =
            PrivateValues::draw(params.pv_span, params.pv_sigma, rng);
    st.next_arrival.resize(static_cast<std::size_t>(st.num_agents()));
    for (int i = 0; i < st.num_agents(); ++i) {
        const double rate = (i == st.mm_agent()) ? params.lambda_mm : params.lambda_bg;
        st.next_arrival[static_cast<std::size_t>(i)] =
            schedule_next_arrival(0, rate, params.total_steps, rng);
    }
    return st;
}

/// Runs the event loop. Arrivals are processed in (tick, agent index)
/// order. If `self_agent` is set, the loop pauses when that agent arrives:
/// its resting orders are canceled, every scheduled arrival is dropped
/// (to be regenerated from the pause time on resume), and Paused is
/// returned. Otherwise the loop runs out of arrivals, advances the
/// fundamental to T, and finishes.
inline RunOutcome advance(MarketState& st, std::optional<AgentId> self_agent, Rng& rng,
                          std::vector<Transaction>* log = nullptr) {
    while (true) {
        Tick best_time = std::numeric_limits<Tick>::max();
        AgentId best_agent = -1;
        for (int i = 0; i < st.num_agents(); ++i) {
            const auto& na = st.next_arrival[static_cast<std::size_t>(i)];
            if (na && *na < best_time) {
                best_time = *na;
                best_agent = i;
            }
        }
        if (best_agent < 0) {
            st.fundamental.advance_to(st.params.total_steps, st.params, rng);
            st.now = st.params.total_steps;
            st.finished = true;
            return RunOutcome::Finished;
        }

        st.now = best_time;
        st.fundamental.advance_to(best_time, st.params, rng);

        if (self_agent && best_agent == *self_agent) {
            st.book.cancel_owner(*self_agent);
            for (auto& na : st.next_arrival) na = std::nullopt;
            return RunOutcome::Paused;
        }

        st.next_arrival[static_cast<std::size_t>(best_agent)] = std::nullopt;
        if (best_agent == st.mm_agent())
            detail::process_mm_arrival(st, rng, log);
        else
            detail::process_background_arrival(st, best_agent, rng, log);
        const double rate =
            (best_agent == st.mm_agent()) ? st.params.lambda_mm : st.params.lambda_bg;
        st.next_arrival[static_cast<std::size_t>(best_agent)] =
            schedule_next_arrival(st.now, rate, st.params.total_steps, rng);
    }
}

struct SimulationResult {
    std::vector<double> payoffs;  // one per agent, market maker last
    double r_final = 0.0;
    std::vector<Transaction> transactions;
};

/// Full run with every agent on its assigned strategy. A pure function of
/// (params, strategies, seed).
inline SimulationResult run_simulation(const MarketParams& params,
                                       const std::vector<ZiParams>& bg_strategies,
                                       const MmParams& mm, std::uint64_t seed,
                                       bool keep_transactions = false) {
    Rng rng = make_rng(seed);
    MarketState st = init_market_state(params, bg_strategies, mm, rng);
    SimulationResult res;
    advance(st, std::nullopt, rng, keep_transactions ? &res.transactions : nullptr);
    res.r_final = st.fundamental.value();
    res.payoffs.reserve(st.accounts.size());
    for (const auto& a : st.accounts) res.payoffs.push_back(final_payoff(a, res.r_final));
    return res;
}

}  // namespace cdarl
