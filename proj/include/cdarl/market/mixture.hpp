#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdarl/core/rng.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// Probability-weighted strategy mixture for the background-trader and
/// market-maker roles. Each role's probabilities must sum to 1 (within
/// 1e-9); pure strategies are drawn per agent per run.
struct StrategyMixture {
    std::string name;
    std::vector<ZiParams> bg_strategies;
    std::vector<double> bg_probs;
    std::vector<MmParams> mm_strategies;
    std::vector<double> mm_probs;

    void validate() const {
        auto check = [](const std::vector<double>& probs, const char* role) {
            if (probs.empty()) throw std::invalid_argument(std::string(role) + ": empty mixture");
            double sum = 0.0;
            for (double p : probs) {
                if (p < 0.0) throw std::invalid_argument(std::string(role) + ": negative weight");
                sum += p;
            }
            if (std::fabs(sum - 1.0) > 1e-9)
                throw std::invalid_argument(std::string(role) + ": mixture must sum to 1");
        };
        if (bg_strategies.size() != bg_probs.size() || mm_strategies.size() != mm_probs.size())
            throw std::invalid_argument("StrategyMixture: strategy/probability size mismatch");
        check(bg_probs, "background mixture");
        check(mm_probs, "market-maker mixture");
        for (const auto& z : bg_strategies) z.validate();
        for (const auto& m : mm_strategies) m.validate();
    }

    ZiParams draw_bg(Rng& rng) const {
        return bg_strategies[draw_index(bg_probs, rng)];
    }
    MmParams draw_mm(Rng& rng) const {
        return mm_strategies[draw_index(mm_probs, rng)];
    }

private:
    static std::size_t draw_index(const std::vector<double>& probs, Rng& rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double x = u(rng);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            x -= probs[i];
            if (x <= 0.0) return i;
        }
        return probs.size() - 1;
    }
};

}  // namespace cdarl
