#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cdarl/bench/gridworld.hpp"
#include "cdarl/core/stats.hpp"
#include "cdarl/learn/trainer.hpp"
#include "test_util.hpp"

using namespace cdarl;

namespace {

Decision tab(int state, int n_actions = 2) {
    Decision d;
    d.keys = TileKeys{state, 0, 0};
    d.refined = state;
    d.legal = SmallActionSet::all(n_actions);
    return d;
}

ValueTable flat_table(int states, int actions,
                      LearningRate rate = LearningRate::inverse_visits(), double gamma = 1.0) {
    return ValueTable({states}, 1, actions, rate, gamma);
}

}  // namespace

TEST_CASE("epsilon zero always exploits") {
    ValueTable t = flat_table(1, 4);
    t.apply_target(TileKeys{0, 0, 0}, 0, 2, 10.0);
    Rng rng = make_rng(1);
    for (int i = 0; i < 100; ++i) CHECK(epsilon_greedy(t, tab(0, 4), 0.0, rng) == 2);
}

TEST_CASE("epsilon one explores uniformly") {
    ValueTable t = flat_table(1, 6);
    Rng rng = make_rng(2);
    std::vector<int> counts(6, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(
        epsilon_greedy(t, tab(0, 6), 1.0, rng))];
    // chi-square, 5 dof; 20.5 is the 0.1% critical value.
    CHECK(cdarl_test::chi_square_uniform(counts) < 20.5);
}

TEST_CASE("epsilon splits probability between greedy and uniform") {
    ValueTable t = flat_table(1, 6);
    t.apply_target(TileKeys{0, 0, 0}, 0, 3, 1.0);  // unique greedy action
    Rng rng = make_rng(3);
    std::vector<int> counts(6, 0);
    const int n = 200000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(
        epsilon_greedy(t, tab(0, 6), 0.2, rng))];
    for (int a = 0; a < 6; ++a) {
        const double expect = (a == 3) ? 0.8 + 0.2 / 6 : 0.2 / 6;
        CHECK(static_cast<double>(counts[static_cast<std::size_t>(a)]) / n ==
              Catch::Approx(expect).margin(0.01));
    }
}

TEST_CASE("q update moves toward the bootstrap target") {
    ValueTable t = flat_table(2, 2, LearningRate::constant(0.5));
    // Seed Q(s1, a0) = 2 so max Q(s') is 2.
    t.apply_target(TileKeys{1, 0, 0}, 0, 0, 4.0);  // 0.5 * 4 = 2
    REQUIRE(t.q(0, 1, 0, 0) == Catch::Approx(2.0));

    q_update(t, tab(0), 0, 10.0, tab(1), false);
    CHECK(t.q(0, 0, 0, 0) == Catch::Approx(6.0));

    ValueTable frozen = flat_table(2, 2, LearningRate::constant(0.0));
    q_update(frozen, tab(0), 0, 10.0, tab(1), false);
    CHECK(frozen.q(0, 0, 0, 0) == 0.0);
}

TEST_CASE("terminal transitions use the reward alone") {
    ValueTable t = flat_table(2, 2, LearningRate::constant(1.0));
    t.apply_target(TileKeys{1, 0, 0}, 0, 0, 100.0);
    q_update(t, tab(0), 0, 7.0, tab(1), true);
    CHECK(t.q(0, 0, 0, 0) == Catch::Approx(7.0));
}

TEST_CASE("inverse-visit rate makes Q the exact running mean of targets") {
    ValueTable t = flat_table(1, 1);
    Rng rng = make_rng(4);
    std::uniform_real_distribution<double> r(-5.0, 5.0);
    double sum = 0.0;
    for (int k = 1; k <= 1000; ++k) {
        const double target = r(rng);
        sum += target;
        q_update(t, tab(0, 1), 0, target, tab(0, 1), true);
        REQUIRE(t.q(0, 0, 0, 0) == Catch::Approx(sum / k).margin(1e-9));
    }
}

TEST_CASE("q learning converges to the value of a two-state chain") {
    // Chain: s0 -r0-> s1 -r1-> terminal, E r0 = 1, E r1 = 2, so
    // Q(s0) = 3 and Q(s1) = 2 analytically.
    ValueTable t = flat_table(2, 1);
    Rng rng = make_rng(5);
    std::uniform_real_distribution<double> r0(0.0, 2.0), r1(1.0, 3.0);
    for (int i = 0; i < 1000000; ++i) {
        q_update(t, tab(0, 1), 0, r0(rng), tab(1, 1), false);
        q_update(t, tab(1, 1), 0, r1(rng), tab(0, 1), true);
    }
    CHECK(t.q(0, 1, 0, 0) == Catch::Approx(2.0).margin(1e-3));
    CHECK(t.q(0, 0, 0, 0) == Catch::Approx(3.0).margin(1e-3));
}

TEST_CASE("sarsa bootstraps on the behavior action") {
    ValueTable t = flat_table(2, 2, LearningRate::constant(0.5));
    t.apply_target(TileKeys{1, 0, 0}, 0, 1, 2.0);  // Q(s1, a1) = 1
    REQUIRE(t.q(0, 1, 0, 1) == Catch::Approx(1.0));
    sarsa_update(t, tab(0), 0, 10.0, tab(1), 1, false);
    CHECK(t.q(0, 0, 0, 0) == Catch::Approx(5.5));

    ValueTable frozen = flat_table(2, 2, LearningRate::constant(0.0));
    sarsa_update(frozen, tab(0), 0, 10.0, tab(1), 1, false);
    CHECK(frozen.q(0, 0, 0, 0) == 0.0);
}

TEST_CASE("greedy sarsa and q-learning stay identical on a shared stream") {
    ValueTable q = flat_table(4, 3);
    ValueTable s = flat_table(4, 3);
    Rng rng = make_rng(6);
    std::uniform_int_distribution<int> state(0, 3), action(0, 2);
    std::uniform_real_distribution<double> reward(-1.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const Decision from = tab(state(rng), 3);
        const Decision to = tab(state(rng), 3);
        const int a = action(rng);
        const double r = reward(rng);
        const bool terminal = (i % 7) == 0;
        const int greedy_next = s.argmax(to);  // fixed-order tie break on both sides
        q_update(q, from, a, r, to, terminal);
        sarsa_update(s, from, a, r, to, greedy_next, terminal);
        for (int st = 0; st < 4; ++st)
            for (int ac = 0; ac < 3; ++ac)
                REQUIRE(q.q(0, st, 0, ac) == s.q(0, st, 0, ac));
    }
}

TEST_CASE("traces start empty, decay geometrically, and stay in [0,1]") {
    ValueTable t = flat_table(5, 2);
    TraceSet traces;
    traces.reset();
    CHECK(traces.support() == 0);

    sarsa_lambda_step(t, traces, tab(0), 0, 0.0, tab(1), 0, false, 0.9);
    CHECK(traces.support() == 1);
    CHECK(traces.trace_at(t.flat_index(0, 0, 0, 0)) == Catch::Approx(0.9));

    sarsa_lambda_step(t, traces, tab(1), 0, 0.0, tab(2), 0, false, 0.9);
    sarsa_lambda_step(t, traces, tab(2), 0, 0.0, tab(3), 0, false, 0.9);
    // The pair visited two steps before the last decay carries 0.9^3; right
    // after its own sweep-and-decay it held 0.9, then decayed twice more.
    CHECK(traces.trace_at(t.flat_index(0, 0, 0, 0)) == Catch::Approx(0.9 * 0.9 * 0.9));
    CHECK(traces.max_trace() <= 1.0);
}

TEST_CASE("a pair visited two steps ago holds trace 0.81 before the sweep") {
    ValueTable t = flat_table(5, 2);
    TraceSet traces;
    traces.visit(t, tab(0), 0);
    traces.decay(0.9);
    traces.decay(0.9);
    CHECK(traces.trace_at(t.flat_index(0, 0, 0, 0)) == Catch::Approx(0.81));
}

TEST_CASE("lambda zero reduces sarsa(lambda) to plain sarsa") {
    ValueTable plain = flat_table(4, 2);
    ValueTable traced = flat_table(4, 2);
    TraceSet traces;
    Rng rng = make_rng(7);
    std::uniform_int_distribution<int> state(0, 3), action(0, 1);
    std::uniform_real_distribution<double> reward(-1.0, 1.0);
    for (int episode = 0; episode < 50; ++episode) {
        traces.reset();
        for (int i = 0; i < 20; ++i) {
            const Decision from = tab(state(rng));
            const Decision to = tab(state(rng));
            const int a = action(rng), a2 = action(rng);
            const double r = reward(rng);
            const bool terminal = i == 19;
            sarsa_update(plain, from, a, r, to, a2, terminal);
            sarsa_lambda_step(traced, traces, from, a, r, to, a2, terminal, 0.0);
        }
    }
    for (int st = 0; st < 4; ++st)
        for (int ac = 0; ac < 2; ++ac)
            CHECK(plain.q(0, st, 0, ac) == Catch::Approx(traced.q(0, st, 0, ac)).epsilon(1e-12));
}

TEST_CASE("replay buffer is a drop-out queue") {
    ReplayBuffer buf(3);
    for (int i = 0; i < 4; ++i) {
        Transition t;
        t.reward = i;
        buf.push(t);
    }
    CHECK(buf.size() == 3);
    CHECK(buf.at(0).reward == 1.0);  // oldest was evicted
    CHECK(buf.at(2).reward == 3.0);
}

TEST_CASE("replaying an empty memory is a no-op") {
    ValueTable t = flat_table(2, 2);
    ReplayBuffer buf(10);
    Rng rng = make_rng(8);
    replay_step(buf, t, 100, rng);
    CHECK(t.q(0, 0, 0, 0) == 0.0);
}

TEST_CASE("large replay preset revisits a sample about four times") {
    // Memory 40000, batch 4000 per 1000 runs, one transition per run:
    // a sample lives ~40 replay rounds and is drawn 4000/40000 per round.
    Rng rng = make_rng(9);
    const int capacity = 40000, batch = 4000, every = 1000;
    std::deque<long> ids;
    std::vector<int> replay_counts;
    long next_id = 0;
    RunningStats per_sample;
    std::vector<long> draws(400000, 0);
    for (int run = 1; run <= 300000; ++run) {
        if (static_cast<int>(ids.size()) == capacity) {
            const long retired = ids.front();
            ids.pop_front();
            if (retired > 50000)  // skip warmup
                per_sample.add(static_cast<double>(draws[static_cast<std::size_t>(retired)]));
        }
        ids.push_back(next_id++);
        if (run % every == 0) {
            std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
            for (int i = 0; i < batch; ++i) ++draws[static_cast<std::size_t>(ids[pick(rng)])];
        }
    }
    CHECK(per_sample.mean() == Catch::Approx(4.0).margin(0.1));
}

TEST_CASE("tiled values average across tilings") {
    ValueTable t({10, 10, 10}, 1, 2, LearningRate::constant(1.0));
    const TileKeys keys{3, 5, 7};
    t.apply_target(keys, 0, 0, 2.0);
    CHECK(t.tiled_q(keys, 0, 0) == Catch::Approx(2.0));  // mean of equal values

    // Force distinct per-tiling values 1, 2, 3 via direct nudges.
    ValueTable t2({10, 10, 10}, 1, 2, LearningRate::constant(1.0));
    t2.nudge_cell(t2.flat_index(0, 3, 0, 0), 1.0, 1.0);
    t2.nudge_cell(t2.flat_index(1, 5, 0, 0), 1.0, 2.0);
    t2.nudge_cell(t2.flat_index(2, 7, 0, 0), 1.0, 3.0);
    CHECK(t2.tiled_q(keys, 0, 0) == Catch::Approx(2.0));
}

TEST_CASE("fresh tables extract the first action everywhere") {
    TileConfig cfg = TileConfig::discrete(9);
    ValueTable t = ValueTable::for_tiles(cfg, 1, 3);
    GreedyPolicy p = extract_greedy_policy(t, cfg, [](int) { return SmallActionSet::all(3); }, 0);
    for (int tile = 0; tile < 9; ++tile) CHECK(p.action_at(tile, 0) == 0);
}

TEST_CASE("policies round-trip through their text form") {
    TileConfig cfg = TileConfig::discrete(6);
    ValueTable t = ValueTable::for_tiles(cfg, 2, 3);
    Rng rng = make_rng(10);
    for (int tile = 0; tile < 6; ++tile)
        for (int role = 0; role < 2; ++role)
            t.apply_target(TileKeys{tile, 0, 0}, role,
                           static_cast<int>(rng() % 3), 1.0);
    GreedyPolicy p = extract_greedy_policy(t, cfg, [](int) { return SmallActionSet::all(3); }, 42);
    p.environment = "unit";
    p.mode = "noflip";
    p.tiling = "single";
    p.action_labels = {"A", "B", "C"};

    GreedyPolicy q = GreedyPolicy::parse(p.text());
    CHECK(q.training_runs == 42);
    CHECK(q.environment == "unit");
    CHECK(q.num_roles == 2);
    for (int tile = 0; tile < 6; ++tile)
        for (int role = 0; role < 2; ++role)
            CHECK(q.action_at(tile, role) == p.action_at(tile, role));
}

TEST_CASE("gridworld optimal mean return matches the map oracle") {
    GridSpec g = GridSpec::standard();
    CHECK(g.optimal_mean_return() == Catch::Approx(-8.78).margin(0.005));
    CHECK(g.distances()[static_cast<std::size_t>(2 * 9 + 0)] == 14);  // classic start cell
}

TEST_CASE("blocked moves stay put and cost a step") {
    GridSpec g = GridSpec::standard();
    const int cell = 1 * 9 + 1;  // barrier at (1,2) blocks the move right
    CHECK(g.move(cell, 3) == cell);
    CHECK(g.move(0, 0) == 0);  // off the top edge

    GridworldTask task(g);
    Rng rng = make_rng(11);
    REQUIRE(task.begin_episode(rng).has_value());
}

TEST_CASE("sarsa(lambda) learns the maze quickly") {
    GridworldTask task;
    TdConfig cfg;
    cfg.algorithm = TdAlgorithm::SarsaLambda;
    TdTrainer trainer(task, cfg);
    Rng rng = make_rng(12);
    trainer.run_episodes(4000, rng);
    GreedyPolicy p = trainer.snapshot_policy();
    auto returns = evaluate_policy_on(task, p, 4000, rng);
    CHECK(mean_of(returns) > -9.5);
}
