#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <vector>

#include "cdarl/env/observation.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

inline constexpr int kMaxTilings = 3;
using TileKeys = std::array<int, kMaxTilings>;

/// One partition of the (surplusBuyAtAsk, surplusSellAtBid, timeRemaining)
/// feature space. The region index along an axis is the number of
/// thresholds less than or equal to the value, so -infinity (missing
/// quote) lands in region 0 and every value has exactly one tile.
struct Tiling {
    std::vector<double> surplus_buy_thresholds;   // ascending
    std::vector<double> surplus_sell_thresholds;  // ascending
    std::vector<Tick> time_thresholds;            // ascending

    int buy_regions() const { return static_cast<int>(surplus_buy_thresholds.size()) + 1; }
    int sell_regions() const { return static_cast<int>(surplus_sell_thresholds.size()) + 1; }
    int time_regions() const { return static_cast<int>(time_thresholds.size()) + 1; }
    int tile_count() const { return buy_regions() * sell_regions() * time_regions(); }

    template <typename T>
    static int region_of(const std::vector<T>& thresholds, double v) {
        int r = 0;
        for (const T& t : thresholds) {
            if (v >= static_cast<double>(t)) ++r;
            else break;
        }
        return r;
    }

    int tile_of(double surplus_buy, double surplus_sell, Tick time_remaining) const {
        const int b = region_of(surplus_buy_thresholds, surplus_buy);
        const int s = region_of(surplus_sell_thresholds, surplus_sell);
        const int t = region_of(time_thresholds, static_cast<double>(time_remaining));
        return (b * sell_regions() + s) * time_regions() + t;
    }

    void validate() const {
        auto ascending = [](const auto& v) {
            return std::is_sorted(v.begin(), v.end()) &&
                   std::adjacent_find(v.begin(), v.end()) == v.end();
        };
        if (!ascending(surplus_buy_thresholds) || !ascending(surplus_sell_thresholds) ||
            !ascending(time_thresholds))
            throw std::invalid_argument("Tiling: thresholds must be strictly ascending");
    }
};

inline const std::vector<double>& standard_surplus_thresholds() {
    static const std::vector<double> t = {-300, -250, -130, -80, -40, 0, 40, 80};
    return t;
}

/// Either the single 324-tile partition or the three coarser tilings whose
/// common refinement reproduces it. The canonical (full-threshold) tiling
/// is kept alongside to index the refined partition, which is the domain
/// of extracted policies and of search-tree history keys.
class TileConfig {
public:
    static TileConfig single(const std::vector<Tick>& time_thresholds) {
        Tiling full{standard_surplus_thresholds(), standard_surplus_thresholds(),
                    time_thresholds};
        return TileConfig({full}, full);
    }

    static TileConfig three(const std::vector<Tick>& time_thresholds) {
        if (time_thresholds.size() != 3)
            throw std::invalid_argument("TileConfig::three: expected quarter-split thresholds");
        const std::vector<Tick> halves = {time_thresholds[1]};
        Tiling t1{{-130, 0}, {-130, 0}, time_thresholds};
        Tiling t2{{-300, -80, 40}, {-300, -80, 40}, halves};
        Tiling t3{{-250, -40, 80}, {-250, -40, 80}, {}};
        Tiling full{standard_surplus_thresholds(), standard_surplus_thresholds(),
                    time_thresholds};
        return TileConfig({t1, t2, t3}, full);
    }

    /// A single tiling over an already-discrete state space of n states
    /// (used by the tabular benchmark tasks).
    static TileConfig discrete(int n_states) {
        TileConfig cfg;
        cfg.discrete_states_ = n_states;
        return cfg;
    }

    bool is_discrete() const { return discrete_states_ > 0; }
    int num_tilings() const { return is_discrete() ? 1 : static_cast<int>(tilings_.size()); }
    const std::vector<Tiling>& tilings() const { return tilings_; }
    const Tiling& canonical() const { return canonical_; }

    int tiles_in(int tiling) const {
        if (is_discrete()) return discrete_states_;
        return tilings_[static_cast<std::size_t>(tiling)].tile_count();
    }

    int refined_tile_count() const {
        return is_discrete() ? discrete_states_ : canonical_.tile_count();
    }

    /// Tile of the observation in each tiling.
    TileKeys keys(const Observation& o) const {
        return keys(o.surplus_buy_at_ask(), o.surplus_sell_at_bid(), o.time_remaining);
    }

    TileKeys keys(double surplus_buy, double surplus_sell, Tick time_remaining) const {
        TileKeys k{};
        for (int j = 0; j < num_tilings(); ++j)
            k[static_cast<std::size_t>(j)] =
                tilings_[static_cast<std::size_t>(j)].tile_of(surplus_buy, surplus_sell,
                                                              time_remaining);
        return k;
    }

    int refined_tile(const Observation& o) const {
        return canonical_.tile_of(o.surplus_buy_at_ask(), o.surplus_sell_at_bid(),
                                  o.time_remaining);
    }

    /// Per-tiling keys of a refined tile, via representative feature values
    /// of its canonical regions. Valid because every tiling's thresholds
    /// are a subset of the canonical ones.
    TileKeys keys_of_refined(int refined) const {
        if (is_discrete()) return TileKeys{refined, 0, 0};
        const int tr = canonical_.time_regions();
        const int sr = canonical_.sell_regions();
        const int t = refined % tr;
        const int s = (refined / tr) % sr;
        const int b = refined / (tr * sr);
        const double vb = representative(canonical_.surplus_buy_thresholds, b);
        const double vs = representative(canonical_.surplus_sell_thresholds, s);
        const Tick vt =
            (t == 0) ? 0 : canonical_.time_thresholds[static_cast<std::size_t>(t - 1)];
        return keys(vb, vs, vt);
    }

private:
    TileConfig() = default;
    TileConfig(std::vector<Tiling> tilings, Tiling canonical)
        : tilings_(std::move(tilings)), canonical_(std::move(canonical)) {
        for (const auto& t : tilings_) t.validate();
        canonical_.validate();
    }

    template <typename T>
    static double representative(const std::vector<T>& thresholds, int region) {
        if (region == 0) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(thresholds[static_cast<std::size_t>(region - 1)]);
    }

    std::vector<Tiling> tilings_;
    Tiling canonical_;
    int discrete_states_ = 0;
};

}  // namespace cdarl
