#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "cdarl/core/rng.hpp"
#include "cdarl/env/tiles.hpp"

using namespace cdarl;

namespace {

Observation random_obs(Rng& rng, Tick total_steps) {
    std::uniform_real_distribution<double> surplus(-600.0, 300.0);
    std::uniform_int_distribution<Tick> time(0, total_steps);
    std::uniform_int_distribution<int> coin(0, 3);

    Observation o;
    o.r_hat_final = 100000.0;
    o.time_remaining = time(rng);
    o.inventory = 0;
    o.private_values = PrivateValues(std::vector<double>(20, 0.0));
    // Sometimes leave one or both quotes missing.
    const int c = coin(rng);
    if (c != 0) o.ask = std::llround(o.r_hat_final - surplus(rng));
    if (c != 1) o.bid = std::llround(o.r_hat_final + surplus(rng));
    return o;
}

}  // namespace

TEST_CASE("single tiling spans 324 reachable tiles") {
    TileConfig cfg = TileConfig::single({250, 500, 750});
    REQUIRE(cfg.num_tilings() == 1);
    REQUIRE(cfg.tiles_in(0) == 324);
    REQUIRE(cfg.refined_tile_count() == 324);

    // Every tile id is reachable by construction from region representatives.
    std::set<int> seen;
    for (int id = 0; id < 324; ++id) {
        const TileKeys k = cfg.keys_of_refined(id);
        seen.insert(k[0]);
    }
    CHECK(seen.size() == 324);
}

TEST_CASE("surplus and time regions count thresholds below the value") {
    TileConfig cfg = TileConfig::single({250, 500, 750});
    const Tiling& t = cfg.canonical();
    CHECK(Tiling::region_of(t.surplus_buy_thresholds, -100.0) == 3);  // [-130, -80)
    CHECK(Tiling::region_of(t.surplus_buy_thresholds,
                            -std::numeric_limits<double>::infinity()) == 0);
    CHECK(Tiling::region_of(t.surplus_buy_thresholds, 1000.0) == 8);
    CHECK(Tiling::region_of(t.time_thresholds, 600.0) == 2);  // [500, 750)
    CHECK(Tiling::region_of(t.time_thresholds, 250.0) == 1);  // boundary joins upper region
}

TEST_CASE("three tilings each map every observation to exactly one tile") {
    TileConfig cfg = TileConfig::three({250, 500, 750});
    REQUIRE(cfg.num_tilings() == 3);
    CHECK(cfg.tiles_in(0) == 3 * 3 * 4);
    CHECK(cfg.tiles_in(1) == 4 * 4 * 2);
    CHECK(cfg.tiles_in(2) == 4 * 4);

    Rng rng = make_rng(31);
    for (int i = 0; i < 1000; ++i) {
        Observation o = random_obs(rng, 1000);
        const TileKeys k = cfg.keys(o);
        for (int j = 0; j < 3; ++j) {
            CHECK(k[static_cast<std::size_t>(j)] >= 0);
            CHECK(k[static_cast<std::size_t>(j)] < cfg.tiles_in(j));
        }
    }
}

TEST_CASE("the three tilings refine to the 324-tile partition") {
    TileConfig three = TileConfig::three({250, 500, 750});
    TileConfig single = TileConfig::single({250, 500, 750});

    std::map<std::tuple<int, int, int>, int> triple_to_tile;
    std::map<int, std::tuple<int, int, int>> tile_to_triple;
    Rng rng = make_rng(77);
    for (int i = 0; i < 10000; ++i) {
        Observation o = random_obs(rng, 1000);
        const TileKeys k = three.keys(o);
        const int refined = single.refined_tile(o);
        const auto triple = std::make_tuple(k[0], k[1], k[2]);
        auto [it, fresh] = triple_to_tile.emplace(triple, refined);
        if (!fresh) CHECK(it->second == refined);
        auto [it2, fresh2] = tile_to_triple.emplace(refined, triple);
        if (!fresh2) CHECK(it2->second == triple);
    }
}

TEST_CASE("the third tiling ignores time") {
    TileConfig cfg = TileConfig::three({250, 500, 750});
    Rng rng = make_rng(5);
    for (int i = 0; i < 200; ++i) {
        Observation o = random_obs(rng, 1000);
        Observation shifted = o;
        shifted.time_remaining = (o.time_remaining + 613) % 1001;
        CHECK(cfg.keys(o)[2] == cfg.keys(shifted)[2]);
    }
}

TEST_CASE("missing quotes land in the lowest surplus region") {
    TileConfig cfg = TileConfig::single({250, 500, 750});
    Observation o;
    o.r_hat_final = 100000.0;
    o.time_remaining = 10;
    o.private_values = PrivateValues(std::vector<double>(20, 0.0));
    const TileKeys k = cfg.keys(o);  // no bid, no ask
    const Tiling& t = cfg.canonical();
    const int expected = t.tile_of(-1e18, -1e18, 10);
    CHECK(k[0] == expected);
}

TEST_CASE("refined keys round-trip through representative values") {
    TileConfig cfg = TileConfig::three({1000, 2000, 3000});
    TileConfig single = TileConfig::single({1000, 2000, 3000});
    Rng rng = make_rng(41);
    for (int i = 0; i < 2000; ++i) {
        Observation o = random_obs(rng, 4000);
        const int refined = single.refined_tile(o);
        CHECK(cfg.keys_of_refined(refined) == cfg.keys(o));
    }
}
