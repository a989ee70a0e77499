#pragma once

#include <deque>
#include <stdexcept>
#include <vector>

#include "cdarl/core/rng.hpp"
#include "cdarl/env/tiles.hpp"
#include "cdarl/learn/value_table.hpp"

namespace cdarl {

/// Shortest-path maze with barrier cells, a step reward of -1, and a
/// uniformly random start over the free non-goal cells. The default map is
/// the classic 9x6 maze whose mean optimal return over starts is -8.78.
struct GridSpec {
    int width = 9;
    int height = 6;
    std::vector<int> barriers;  // row-major cell indices
    int goal = 8;               // row 0, col 8

    static GridSpec standard() {
        GridSpec g;
        auto cell = [&g](int row, int col) { return row * g.width + col; };
        g.barriers = {cell(1, 2), cell(2, 2), cell(3, 2), cell(4, 5),
                      cell(0, 7), cell(1, 7), cell(2, 7)};
        g.goal = cell(0, 8);
        return g;
    }

    int cells() const { return width * height; }

    bool blocked(int cell) const {
        for (int b : barriers)
            if (b == cell) return true;
        return false;
    }

    bool free_cell(int cell) const { return !blocked(cell); }

    std::vector<int> start_cells() const {
        std::vector<int> out;
        for (int c = 0; c < cells(); ++c)
            if (free_cell(c) && c != goal) out.push_back(c);
        return out;
    }

    /// Moves: 0 up, 1 down, 2 left, 3 right. Blocked and out-of-bounds
    /// moves leave the position unchanged.
    int move(int cell, int action) const {
        const int row = cell / width, col = cell % width;
        int nr = row, nc = col;
        switch (action) {
            case 0: nr = row - 1; break;
            case 1: nr = row + 1; break;
            case 2: nc = col - 1; break;
            case 3: nc = col + 1; break;
            default: throw std::invalid_argument("gridworld: bad action");
        }
        if (nr < 0 || nr >= height || nc < 0 || nc >= width) return cell;
        const int next = nr * width + nc;
        return blocked(next) ? cell : next;
    }

    /// BFS distances to the goal; -1 where unreachable.
    std::vector<int> distances() const {
        std::vector<int> dist(static_cast<std::size_t>(cells()), -1);
        std::deque<int> queue{goal};
        dist[static_cast<std::size_t>(goal)] = 0;
        while (!queue.empty()) {
            const int c = queue.front();
            queue.pop_front();
            for (int a = 0; a < 4; ++a) {
                // Moves are symmetric on this map, so scan neighbors directly.
                const int row = c / width, col = c % width;
                int nr = row + (a == 1) - (a == 0), nc = col + (a == 3) - (a == 2);
                if (nr < 0 || nr >= height || nc < 0 || nc >= width) continue;
                const int n = nr * width + nc;
                if (blocked(n) || dist[static_cast<std::size_t>(n)] >= 0) continue;
                dist[static_cast<std::size_t>(n)] = dist[static_cast<std::size_t>(c)] + 1;
                queue.push_back(n);
            }
        }
        return dist;
    }

    /// Mean of -distance over the uniform start distribution; the planning
    /// oracle the learners are validated against.
    double optimal_mean_return() const {
        const auto dist = distances();
        double sum = 0.0;
        int n = 0;
        for (int c : start_cells()) {
            if (dist[static_cast<std::size_t>(c)] < 0)
                throw std::logic_error("gridworld: goal unreachable from a start cell");
            sum += dist[static_cast<std::size_t>(c)];
            ++n;
        }
        return -sum / n;
    }
};

/// TD task over the maze: tabular (one tile per cell), four actions, no
/// roles. An episode is capped to keep early random-walk returns finite.
class GridworldTask {
public:
    explicit GridworldTask(GridSpec spec = GridSpec::standard(), int max_steps = 2000)
        : spec_(std::move(spec)),
          starts_(spec_.start_cells()),
          tiles_(TileConfig::discrete(spec_.cells())),
          max_steps_(max_steps) {}

    struct Step {
        double reward = 0.0;
        bool terminal = false;
        Decision next;
    };

    int num_actions() const { return 4; }
    int num_roles() const { return 1; }
    const TileConfig& tiles() const { return tiles_; }
    const GridSpec& spec() const { return spec_; }
    SmallActionSet legal_for_tile(int) const { return SmallActionSet::all(4); }

    std::optional<Decision> begin_episode(Rng& rng) {
        std::uniform_int_distribution<std::size_t> pick(0, starts_.size() - 1);
        cell_ = starts_[pick(rng)];
        steps_ = 0;
        return decision();
    }

    Step step(int action, Rng&) {
        cell_ = spec_.move(cell_, action);
        ++steps_;
        Step out;
        out.reward = -1.0;
        out.terminal = (cell_ == spec_.goal) || steps_ >= max_steps_;
        if (!out.terminal) out.next = decision();
        return out;
    }

private:
    Decision decision() const {
        Decision d;
        d.keys = TileKeys{cell_, 0, 0};
        d.refined = cell_;
        d.role = 0;
        d.legal = SmallActionSet::all(4);
        return d;
    }

    GridSpec spec_;
    std::vector<int> starts_;
    TileConfig tiles_;
    int max_steps_;
    int cell_ = 0;
    int steps_ = 0;
};

}  // namespace cdarl
