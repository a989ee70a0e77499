#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdarl/core/rng.hpp"
#include "cdarl/env/tiles.hpp"
#include "cdarl/learn/value_table.hpp"

namespace cdarl {

/// Stochastic shortest path on a lattice under shifting wind. Headings are
/// the 8 compass directions; sailing directly into the wind is illegal;
/// move cost grows with the angle off the wind, diagonals cost sqrt(2)
/// extra, and letting the wind cross the stern (a tack) adds a penalty.
/// After each move the wind shifts uniformly to one of the three nearest
/// directions.
struct SailingSpec {
    int size = 20;
    double tack_penalty = 3.0;
    int max_steps = 1000;
    // Base cost by angular difference (in 45-degree units) between the
    // heading and the direction the wind blows toward.
    double angle_cost[4] = {1.0, 2.0, 3.0, 4.0};

    static constexpr int dx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    static constexpr int dy[8] = {1, 1, 0, -1, -1, -1, 0, 1};

    int goal_x() const { return size - 1; }
    int goal_y() const { return size - 1; }

    static int angle_between(int heading, int wind) {
        const int diff = std::abs(heading - wind) % 8;
        return std::min(diff, 8 - diff);
    }

    /// Side of the boat the wind is on: sign of the cross product of the
    /// heading and wind vectors; 0 when parallel.
    static int wind_side(int heading, int wind) {
        const int cross = dx[heading] * dy[wind] - dy[heading] * dx[wind];
        return (cross > 0) - (cross < 0);
    }

    bool in_grid(int x, int y) const { return x >= 0 && x < size && y >= 0 && y < size; }

    double move_cost(int heading, int wind, int prev_side) const {
        const int angle = angle_between(heading, wind);
        double cost = angle_cost[angle];
        if (heading % 2 == 1) cost *= std::numbers::sqrt2;
        const int side = wind_side(heading, wind);
        if (prev_side != 0 && side != 0 && side != prev_side) cost += tack_penalty;
        return cost;
    }
};

struct SailingState {
    std::int8_t x = 0, y = 0;
    std::int8_t wind = 0;
    std::int8_t side = 0;  // wind side on the previous leg; 0 at start
    std::int16_t steps = 0;
    bool terminal = false;
};

class Sailing {
public:
    using State = SailingState;

    explicit Sailing(SailingSpec spec = SailingSpec{}) : spec_(spec) {}

    const SailingSpec& spec() const { return spec_; }
    int max_actions() const { return 8; }
    double discount() const { return 1.0; }

    struct PlanStep {
        State state;
        std::uint64_t obs = 0;
        double reward = 0.0;
        bool terminal = false;
    };

    PlanStep plan_initial(Rng& rng) const {
        State s;
        std::uniform_int_distribution<int> wind(0, 7);
        s.wind = static_cast<std::int8_t>(wind(rng));
        return PlanStep{s, obs_key(s), 0.0, false};
    }

    void legal_actions(const State& s, std::vector<int>& out) const {
        out.clear();
        for (int h = 0; h < 8; ++h) {
            if (SailingSpec::angle_between(h, s.wind) == 4) continue;  // dead into the wind
            if (!spec_.in_grid(s.x + SailingSpec::dx[h], s.y + SailingSpec::dy[h])) continue;
            out.push_back(h);
        }
    }

    PlanStep plan_step(const State& s, int heading, Rng& rng) const {
        if (SailingSpec::angle_between(heading, s.wind) == 4)
            throw std::invalid_argument("sailing: heading directly into the wind");
        const int nx = s.x + SailingSpec::dx[heading];
        const int ny = s.y + SailingSpec::dy[heading];
        if (!spec_.in_grid(nx, ny)) throw std::invalid_argument("sailing: heading off the grid");

        State next = s;
        next.x = static_cast<std::int8_t>(nx);
        next.y = static_cast<std::int8_t>(ny);
        const double cost = spec_.move_cost(heading, s.wind, s.side);
        const int side = SailingSpec::wind_side(heading, s.wind);
        if (side != 0) next.side = static_cast<std::int8_t>(side);
        std::uniform_int_distribution<int> shift(-1, 1);
        next.wind = static_cast<std::int8_t>((next.wind + shift(rng) + 8) % 8);
        next.steps = static_cast<std::int16_t>(s.steps + 1);
        next.terminal = (nx == spec_.goal_x() && ny == spec_.goal_y()) ||
                        next.steps >= spec_.max_steps;
        return PlanStep{next, obs_key(next), -cost, next.terminal};
    }

    /// Fully observed state; the key doubles as the tabular state index.
    std::uint64_t obs_key(const State& s) const {
        return static_cast<std::uint64_t>(
            ((s.y * spec_.size + s.x) * 8 + s.wind) * 3 + (s.side + 1));
    }

    int state_count() const { return spec_.size * spec_.size * 8 * 3; }

private:
    SailingSpec spec_;
};

/// Tabular TD task over the fully observed sailing state.
class SailingTask {
public:
    explicit SailingTask(SailingSpec spec = SailingSpec{})
        : env_(spec), tiles_(TileConfig::discrete(env_.state_count())) {}

    struct Step {
        double reward = 0.0;
        bool terminal = false;
        Decision next;
    };

    int num_actions() const { return 8; }
    int num_roles() const { return 1; }
    const TileConfig& tiles() const { return tiles_; }
    const Sailing& env() const { return env_; }

    SmallActionSet legal_for_tile(int tile) const {
        // Decode the wind from the state index to recover legality.
        const int wind = (tile / 3) % 8;
        const int cell = tile / 24;
        const int x = cell % env_.spec().size, y = cell / env_.spec().size;
        SmallActionSet legal;
        for (int h = 0; h < 8; ++h) {
            if (SailingSpec::angle_between(h, wind) == 4) continue;
            if (!env_.spec().in_grid(x + SailingSpec::dx[h], y + SailingSpec::dy[h])) continue;
            legal.add(h);
        }
        if (legal.count == 0) legal.add(0);  // unreachable filler tiles
        return legal;
    }

    std::optional<Decision> begin_episode(Rng& rng) {
        auto ps = env_.plan_initial(rng);
        state_ = ps.state;
        return decision();
    }

    Step step(int action, Rng& rng) {
        auto ps = env_.plan_step(state_, action, rng);
        state_ = ps.state;
        Step out;
        out.reward = ps.reward;
        out.terminal = ps.terminal;
        if (!out.terminal) out.next = decision();
        return out;
    }

private:
    Decision decision() const {
        Decision d;
        const int idx = static_cast<int>(env_.obs_key(state_));
        d.keys = TileKeys{idx, 0, 0};
        d.refined = idx;
        d.role = 0;
        std::vector<int> legal;
        env_.legal_actions(state_, legal);
        for (int a : legal) d.legal.add(a);
        return d;
    }

    Sailing env_;
    TileConfig tiles_;
    SailingState state_{};
};

}  // namespace cdarl
