#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdarl/core/rng.hpp"

namespace cdarl {

/// 128-bit cell mask for a 10x10 board.
struct CellMask {
    std::uint64_t lo = 0, hi = 0;

    bool test(int cell) const {
        return cell < 64 ? (lo >> cell) & 1u : (hi >> (cell - 64)) & 1u;
    }
    void set(int cell) {
        if (cell < 64) lo |= (1ULL << cell);
        else hi |= (1ULL << (cell - 64));
    }
    int count() const { return __builtin_popcountll(lo) + __builtin_popcountll(hi); }
    bool intersects(const CellMask& o) const { return (lo & o.lo) || (hi & o.hi); }
    void merge(const CellMask& o) {
        lo |= o.lo;
        hi |= o.hi;
    }
    bool operator==(const CellMask&) const = default;
};

/// Solitaire Battleship: a hidden fleet on a 10x10 grid, strikes observe
/// hit or miss, and the game ends when every ship cell is hit. Each strike
/// costs 1 and completion pays the 100-cell move budget, so the total
/// return is the number of moves remaining at game completion. Ships are
/// placed uniformly at random without overlapping or touching (diagonals
/// included). Repeat strikes are illegal.
struct BattleshipSpec {
    int size = 10;
    std::vector<int> ship_lengths = {5, 4, 3, 2};

    int cells() const { return size * size; }
    int fleet_cells() const {
        int n = 0;
        for (int l : ship_lengths) n += l;
        return n;
    }
};

struct BattleshipState {
    CellMask ships;
    CellMask struck;
    std::int16_t hits_left = 0;
    bool terminal = false;
};

class Battleship {
public:
    using State = BattleshipState;

    explicit Battleship(BattleshipSpec spec = BattleshipSpec{}) : spec_(std::move(spec)) {}

    const BattleshipSpec& spec() const { return spec_; }
    int max_actions() const { return spec_.cells(); }
    double discount() const { return 1.0; }

    struct PlanStep {
        State state;
        std::uint64_t obs = 0;  // 1 hit, 0 miss
        double reward = 0.0;
        bool terminal = false;
    };

    PlanStep plan_initial(Rng& rng) const {
        State s;
        s.ships = random_fleet(rng);
        s.hits_left = static_cast<std::int16_t>(spec_.fleet_cells());
        return PlanStep{s, 2, 0.0, false};
    }

    void legal_actions(const State& s, std::vector<int>& out) const {
        out.clear();
        for (int c = 0; c < spec_.cells(); ++c)
            if (!s.struck.test(c)) out.push_back(c);
    }

    PlanStep plan_step(const State& s, int cell, Rng&) const {
        if (cell < 0 || cell >= spec_.cells() || s.struck.test(cell))
            throw std::invalid_argument("battleship: illegal strike");
        State next = s;
        next.struck.set(cell);
        const bool hit = s.ships.test(cell);
        if (hit) --next.hits_left;
        double reward = -1.0;
        if (next.hits_left == 0) {
            next.terminal = true;
            reward += static_cast<double>(spec_.cells());
        }
        return PlanStep{next, hit ? 1u : 0u, reward, next.terminal};
    }

    /// Uniform random non-overlapping placement with a one-cell buffer
    /// around every ship.
    CellMask random_fleet(Rng& rng) const {
        while (true) {
            CellMask fleet, buffer;
            bool ok = true;
            for (int len : spec_.ship_lengths) {
                if (!place_ship(len, fleet, buffer, rng)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return fleet;
        }
    }

private:
    bool place_ship(int len, CellMask& fleet, CellMask& buffer, Rng& rng) const {
        std::uniform_int_distribution<int> coord(0, spec_.size - 1);
        std::uniform_int_distribution<int> orient(0, 1);
        for (int attempt = 0; attempt < 200; ++attempt) {
            const bool horizontal = orient(rng) == 1;
            const int x = coord(rng), y = coord(rng);
            const int x2 = horizontal ? x + len - 1 : x;
            const int y2 = horizontal ? y : y + len - 1;
            if (x2 >= spec_.size || y2 >= spec_.size) continue;
            CellMask ship;
            for (int i = 0; i < len; ++i)
                ship.set(cell_at(horizontal ? x + i : x, horizontal ? y : y + i));
            if (ship.intersects(buffer)) continue;
            fleet.merge(ship);
            for (int yy = y - 1; yy <= y2 + 1; ++yy)
                for (int xx = x - 1; xx <= x2 + 1; ++xx)
                    if (xx >= 0 && xx < spec_.size && yy >= 0 && yy < spec_.size)
                        buffer.set(cell_at(xx, yy));
            return true;
        }
        return false;
    }

    int cell_at(int x, int y) const { return y * spec_.size + x; }

    BattleshipSpec spec_;
};

}  // namespace cdarl
