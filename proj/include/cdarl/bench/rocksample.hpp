#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdarl/core/rng.hpp"

namespace cdarl {

/// RockSample[7,8]: a rover on a 7x7 grid with 8 rocks of hidden quality.
/// A noisy sensor reads a rock's label with accuracy decaying in distance
/// (exact at distance zero). Sampling a good rock pays +10 once and turns
/// it bad; sampling a bad rock costs 10. Exiting east pays +10 and ends
/// the episode. Returns are discounted.
struct RockSampleSpec {
    int size = 7;
    std::vector<std::pair<int, int>> rocks = {{2, 0}, {0, 1}, {3, 1}, {6, 3},
                                              {2, 4}, {3, 4}, {5, 5}, {1, 6}};
    int start_x = 0;
    int start_y = 3;
    double half_efficiency_distance = 20.0;
    double good_reward = 10.0;
    double bad_penalty = -10.0;
    double exit_reward = 10.0;
    double discount = 0.95;

    int num_rocks() const { return static_cast<int>(rocks.size()); }

    double sensor_accuracy(int x, int y, int rock) const {
        const double dx = static_cast<double>(x - rocks[static_cast<std::size_t>(rock)].first);
        const double dy = static_cast<double>(y - rocks[static_cast<std::size_t>(rock)].second);
        const double d = std::sqrt(dx * dx + dy * dy);
        return 0.5 * (1.0 + std::pow(2.0, -d / half_efficiency_distance));
    }

    int rock_at(int x, int y) const {
        for (int r = 0; r < num_rocks(); ++r)
            if (rocks[static_cast<std::size_t>(r)] == std::make_pair(x, y)) return r;
        return -1;
    }
};

struct RockSampleState {
    std::int8_t x = 0, y = 0;
    std::uint8_t good = 0;  // bit r set when rock r is good
    bool terminal = false;
};

/// Actions: 0 north, 1 south, 2 east, 3 west, 4 sample, 5 + r sense rock r.
/// Observations: 0 none, 1 good, 2 bad.
class RockSample {
public:
    using State = RockSampleState;

    explicit RockSample(RockSampleSpec spec = RockSampleSpec{}) : spec_(std::move(spec)) {}

    const RockSampleSpec& spec() const { return spec_; }
    int max_actions() const { return 5 + spec_.num_rocks(); }
    double discount() const { return spec_.discount; }

    struct PlanStep {
        State state;
        std::uint64_t obs = 0;
        double reward = 0.0;
        bool terminal = false;
    };

    PlanStep plan_initial(Rng& rng) const {
        State s;
        s.x = static_cast<std::int8_t>(spec_.start_x);
        s.y = static_cast<std::int8_t>(spec_.start_y);
        for (int r = 0; r < spec_.num_rocks(); ++r)
            if (rng() & 1u) s.good |= static_cast<std::uint8_t>(1u << r);
        return PlanStep{s, 0, 0.0, false};
    }

    void legal_actions(const State& s, std::vector<int>& out) const {
        out.clear();
        if (s.y + 1 < spec_.size) out.push_back(0);
        if (s.y - 1 >= 0) out.push_back(1);
        out.push_back(2);  // east always legal; off the east edge exits
        if (s.x - 1 >= 0) out.push_back(3);
        if (spec_.rock_at(s.x, s.y) >= 0) out.push_back(4);
        for (int r = 0; r < spec_.num_rocks(); ++r) out.push_back(5 + r);
    }

    PlanStep plan_step(const State& s, int action, Rng& rng) const {
        State next = s;
        if (action == 0 || action == 1 || action == 2 || action == 3) {
            const int nx = s.x + (action == 2) - (action == 3);
            const int ny = s.y + (action == 0) - (action == 1);
            if (nx >= spec_.size) {
                next.terminal = true;
                return PlanStep{next, 0, spec_.exit_reward, true};
            }
            if (nx < 0 || ny < 0 || ny >= spec_.size)
                throw std::invalid_argument("rocksample: move off the grid");
            next.x = static_cast<std::int8_t>(nx);
            next.y = static_cast<std::int8_t>(ny);
            return PlanStep{next, 0, 0.0, false};
        }
        if (action == 4) {
            const int rock = spec_.rock_at(s.x, s.y);
            if (rock < 0) throw std::invalid_argument("rocksample: sampling off-rock");
            const bool was_good = (s.good >> rock) & 1u;
            next.good &= static_cast<std::uint8_t>(~(1u << rock));
            return PlanStep{next, 0, was_good ? spec_.good_reward : spec_.bad_penalty, false};
        }
        const int rock = action - 5;
        if (rock < 0 || rock >= spec_.num_rocks())
            throw std::invalid_argument("rocksample: bad action");
        const double accuracy = spec_.sensor_accuracy(s.x, s.y, rock);
        const bool truth = (s.good >> rock) & 1u;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const bool correct = u(rng) < accuracy;
        const bool reading = correct ? truth : !truth;
        return PlanStep{next, reading ? 1u : 2u, 0.0, false};
    }

private:
    RockSampleSpec spec_;
};

}  // namespace cdarl
