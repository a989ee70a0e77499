#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdarl/env/tiles.hpp"

namespace cdarl {

/// Learning-rate schedule: the sample-mean rate 1/k (k = visits of the
/// updated cell) or a fixed constant.
struct LearningRate {
    enum class Kind { InverseVisits, Constant };
    Kind kind = Kind::InverseVisits;
    double alpha = 0.1;

    static LearningRate inverse_visits() { return {Kind::InverseVisits, 0.0}; }
    static LearningRate constant(double a) { return {Kind::Constant, a}; }

    double operator()(std::uint32_t visits) const {
        return kind == Kind::InverseVisits ? 1.0 / static_cast<double>(visits) : alpha;
    }
};

/// Up to 16 action ids; tasks trained by the TD learners stay small.
struct SmallActionSet {
    std::uint8_t count = 0;
    std::array<std::uint8_t, 16> ids{};

    void add(int a) { ids[count++] = static_cast<std::uint8_t>(a); }
    static SmallActionSet all(int n) {
        SmallActionSet s;
        for (int a = 0; a < n; ++a) s.add(a);
        return s;
    }
    bool contains(int a) const {
        for (int i = 0; i < count; ++i)
            if (ids[static_cast<std::size_t>(i)] == a) return true;
        return false;
    }
};

/// A decision point as the learner sees it: one tile per tiling, the
/// refined-partition tile (the policy domain), the coin-flip role when one
/// applies, and the legal action set.
struct Decision {
    TileKeys keys{};
    int role = 0;
    int refined = 0;
    SmallActionSet legal;
};

/// Estimated action values with visit counts, kept per (tiling, tile,
/// role, action). Multi-tiling reads average the per-tiling estimates;
/// updates apply the full TD target to every tiling's tile, each under its
/// own visit count.
class ValueTable {
public:
    ValueTable(std::vector<int> tiles_per_tiling, int num_roles, int num_actions,
               LearningRate rate = LearningRate::inverse_visits(), double gamma = 1.0)
        : tiles_per_tiling_(std::move(tiles_per_tiling)),
          num_roles_(num_roles),
          num_actions_(num_actions),
          rate_(rate),
          gamma_(gamma) {
        offsets_.reserve(tiles_per_tiling_.size());
        std::size_t total = 0;
        for (int tiles : tiles_per_tiling_) {
            offsets_.push_back(total);
            total += static_cast<std::size_t>(tiles) * static_cast<std::size_t>(num_roles_) *
                     static_cast<std::size_t>(num_actions_);
        }
        cells_.resize(total);
    }

    static ValueTable for_tiles(const TileConfig& cfg, int num_roles, int num_actions,
                                LearningRate rate = LearningRate::inverse_visits(),
                                double gamma = 1.0) {
        std::vector<int> sizes;
        for (int j = 0; j < cfg.num_tilings(); ++j) sizes.push_back(cfg.tiles_in(j));
        return ValueTable(std::move(sizes), num_roles, num_actions, rate, gamma);
    }

    struct Cell {
        double q = 0.0;
        std::uint32_t visits = 0;
    };

    int num_tilings() const { return static_cast<int>(tiles_per_tiling_.size()); }
    int num_roles() const { return num_roles_; }
    int num_actions() const { return num_actions_; }
    double gamma() const { return gamma_; }
    const LearningRate& rate() const { return rate_; }

    std::size_t flat_index(int tiling, int tile, int role, int action) const {
        return offsets_[static_cast<std::size_t>(tiling)] +
               (static_cast<std::size_t>(tile) * static_cast<std::size_t>(num_roles_) +
                static_cast<std::size_t>(role)) *
                   static_cast<std::size_t>(num_actions_) +
               static_cast<std::size_t>(action);
    }

    const Cell& cell(std::size_t flat) const { return cells_[flat]; }

    double q(int tiling, int tile, int role, int action) const {
        return cells_[flat_index(tiling, tile, role, action)].q;
    }

    /// Mean of the per-tiling estimates at this decision point.
    double tiled_q(const TileKeys& keys, int role, int action) const {
        double sum = 0.0;
        for (int j = 0; j < num_tilings(); ++j)
            sum += cells_[flat_index(j, keys[static_cast<std::size_t>(j)], role, action)].q;
        return sum / static_cast<double>(num_tilings());
    }

    double max_q(const Decision& d) const {
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < d.legal.count; ++i)
            best = std::max(best, tiled_q(d.keys, d.role, d.legal.ids[static_cast<std::size_t>(i)]));
        return best;
    }

    /// Greedy action with ties broken by fixed (lowest-index) order.
    int argmax(const Decision& d) const {
        int best = d.legal.ids[0];
        double best_q = tiled_q(d.keys, d.role, best);
        for (int i = 1; i < d.legal.count; ++i) {
            const int a = d.legal.ids[static_cast<std::size_t>(i)];
            const double qa = tiled_q(d.keys, d.role, a);
            if (qa > best_q) {
                best = a;
                best_q = qa;
            }
        }
        return best;
    }

    /// Records one visit of (keys, role, action) and moves each tiling's
    /// estimate toward the target under its own 1/k (or constant) rate.
    void apply_target(const TileKeys& keys, int role, int action, double target) {
        for (int j = 0; j < num_tilings(); ++j) {
            Cell& c = cells_[flat_index(j, keys[static_cast<std::size_t>(j)], role, action)];
            ++c.visits;
            const double a = rate_(c.visits);
            c.q = (1.0 - a) * c.q + a * target;
        }
    }

    /// Marks a visit (used by the eligibility-trace learner, which applies
    /// the weighted value move itself).
    void count_visit(const TileKeys& keys, int role, int action) {
        for (int j = 0; j < num_tilings(); ++j)
            ++cells_[flat_index(j, keys[static_cast<std::size_t>(j)], role, action)].visits;
    }

    /// Trace-weighted move of a single cell toward the target.
    void nudge_cell(std::size_t flat, double trace, double target) {
        Cell& c = cells_[flat];
        const double a = rate_(std::max<std::uint32_t>(1, c.visits)) * trace;
        c.q = (1.0 - a) * c.q + a * target;
    }

private:
    std::vector<int> tiles_per_tiling_;
    int num_roles_;
    int num_actions_;
    LearningRate rate_;
    double gamma_;
    std::vector<std::size_t> offsets_;
    std::vector<Cell> cells_;
};

}  // namespace cdarl
