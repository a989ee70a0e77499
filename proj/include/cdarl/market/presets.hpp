#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cdarl/market/mixture.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// A named market environment: simulator parameters plus the surplus
/// action set and time-axis tile thresholds used by learning agents.
struct EnvPreset {
    std::string name;
    MarketParams params;
    std::vector<Price> action_surpluses;
    std::vector<Tick> time_thresholds;
};

/// The 13 background ZI strategies used in equilibration.
inline const std::vector<ZiParams>& zi_strategy_table() {
    static const std::vector<ZiParams> table = {
        {0, 65, 0.8},   {0, 125, 0.8},   {0, 125, 1},    {0, 250, 0.8},  {0, 250, 1},
        {0, 500, 1},    {0, 1000, 0.8},  {0, 1000, 1},   {0, 1500, 0.6}, {0, 2500, 1},
        {250, 500, 1},  {500, 1000, 0.4}, {1000, 2000, 0.4},
    };
    return table;
}

/// The 7 market-maker ladder strategies used in equilibration.
inline const std::vector<MmParams>& mm_strategy_table() {
    static const std::vector<MmParams> table = {
        {100, 25, 256}, {100, 50, 64},   {100, 50, 128}, {100, 50, 256},
        {100, 50, 512}, {100, 50, 1024}, {100, 100, 512},
    };
    return table;
}

inline EnvPreset env_preset(const std::string& name) {
    EnvPreset p;
    p.name = name;
    p.params = MarketParams{};
    if (name == "A-1k") {
        p.params.total_steps = 1000;
        p.params.lambda_bg = 0.0005;
        p.action_surpluses = {30, 60, 120, 240, 360};
        p.time_thresholds = {250, 500, 750};
    } else if (name == "B-1k") {
        p.params.total_steps = 1000;
        p.params.lambda_bg = 0.005;
        p.action_surpluses = {20, 50, 100, 200, 400};
        p.time_thresholds = {250, 500, 750};
    } else if (name == "A-4k") {
        p.params.total_steps = 4000;
        p.params.lambda_bg = 0.0005;
        p.action_surpluses = {30, 60, 120, 240, 360};
        p.time_thresholds = {1000, 2000, 3000};
    } else {
        throw std::invalid_argument("unknown environment preset: " + name);
    }
    return p;
}

/// Named other-agent mixtures (one equilibrium and one arbitrary mixture
/// per environment). The A-1k-eq weights as published sum to 1.0099; the
/// second weight is corrected to the complement of the first.
inline StrategyMixture mixture_preset(const std::string& name) {
    StrategyMixture m;
    m.name = name;
    if (name == "A-1k-eq") {
        m.bg_strategies = {{0, 250, 0.8}, {0, 500, 1}};
        m.bg_probs = {0.6868, 0.3132};
        m.mm_strategies = {{100, 50, 512}};
    } else if (name == "A-1k-arb") {
        m.bg_strategies = {{0, 65, 0.8}, {500, 1000, 0.4}};
        m.bg_probs = {0.5, 0.5};
        m.mm_strategies = {{100, 50, 512}};
    } else if (name == "B-1k-eq") {
        m.bg_strategies = {{0, 500, 1}, {250, 500, 1}};
        m.bg_probs = {0.3674, 0.6326};
        m.mm_strategies = {{100, 100, 512}};
    } else if (name == "B-1k-arb") {
        m.bg_strategies = {{0, 65, 0.8}, {0, 250, 1}};
        m.bg_probs = {0.5, 0.5};
        m.mm_strategies = {{100, 100, 512}};
    } else if (name == "A-4k-eq") {
        m.bg_strategies = {{0, 125, 1}, {0, 250, 1}};
        m.bg_probs = {0.1298, 0.8702};
        m.mm_strategies = {{100, 100, 512}};
    } else if (name == "A-4k-arb") {
        m.bg_strategies = {{0, 125, 0.8}, {500, 1000, 0.4}};
        m.bg_probs = {0.5, 0.5};
        m.mm_strategies = {{100, 100, 512}};
    } else {
        throw std::invalid_argument("unknown mixture preset: " + name);
    }
    m.mm_probs = {1.0};
    m.validate();
    return m;
}

inline std::string default_mixture_for_env(const std::string& env, bool equilibrium) {
    return env + (equilibrium ? "-eq" : "-arb");
}

}  // namespace cdarl
