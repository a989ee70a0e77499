#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "cdarl/core/rng.hpp"
#include "cdarl/core/stats.hpp"

namespace cdarl {

/// UCB1 arm score: mean + c * scale * sqrt(2 ln n / n_i). An untried arm
/// scores +infinity so every arm is sampled before any is repeated. The
/// scale factor normalizes the exploration term to the environment's
/// reward range.
inline double ucb1_score(double mean, std::uint64_t n, std::uint64_t n_i, double c = 1.0,
                         double scale = 1.0) {
    if (n_i == 0) return std::numeric_limits<double>::infinity();
    return mean + c * scale * std::sqrt(2.0 * std::log(static_cast<double>(n)) /
                                        static_cast<double>(n_i));
}

struct PlannerConfig {
    int playouts_per_action = 100;
    // Per-decision search budget = playouts_per_action * |legal root actions|
    // when true, otherwise playouts_per_action alone.
    bool budget_per_root_action = true;
    int min_particles = 100;
    double exploration = 1.0;
    double exploration_scale = 1.0;
    double value_init_mean = 0.0;
    int value_init_count = 0;
    int max_depth = 400;
    std::uint64_t rejection_attempt_factor = 10000;  // attempts cap = factor * min_particles
    int particle_cap = 1024;                         // reservoir size per tree node
};

struct DecisionLog {
    int history_length = 0;
    int particle_count = 0;
    bool starved = false;
    int chosen_action = -1;
    std::vector<std::pair<int, double>> root_means;  // (action, mean) for tried arms
};

inline std::ostream& operator<<(std::ostream& os, const DecisionLog& d) {
    os << "decision history_len=" << d.history_length << " particles=" << d.particle_count
       << " starved=" << (d.starved ? 1 : 0) << " action=" << d.chosen_action << " means=";
    for (std::size_t i = 0; i < d.root_means.size(); ++i) {
        if (i) os << ",";
        os << d.root_means[i].first << ":" << d.root_means[i].second;
    }
    return os;
}

/// Monte Carlo planning over histories with particle beliefs (UCB1 tree
/// policy, uniform-random rollouts, mean-return action choice). With a
/// fully observed environment (the observation key identifies the state)
/// this is plain UCT; with partial observability it is the particle-belief
/// search of the POMDP literature. One planner instance mutates one tree;
/// run episodes in parallel only across separate instances.
///
/// Environment contract:
///   using State (copyable value; copies are independent checkpoints)
///   struct PlanStep { State state; std::uint64_t obs; double reward; bool terminal; };
///   PlanStep plan_initial(Rng&) const;
///   PlanStep plan_step(const State&, int action, Rng&) const;
///   void legal_actions(const State&, std::vector<int>&) const;  // observation-measurable
///   int max_actions() const;  double discount() const;
template <typename Env>
class PomcpPlanner {
public:
    using State = typename Env::State;
    using PlanStep = typename Env::PlanStep;

    PomcpPlanner(const Env& env, PlannerConfig cfg) : env_(env), cfg_(cfg) {}

    const PlannerConfig& config() const { return cfg_; }

    /// Runs one full episode, planning at every decision point; returns the
    /// discounted return actually realized. Per-decision diagnostics go to
    /// `log` when provided.
    double run_episode(Rng& rng, std::vector<DecisionLog>* log = nullptr) {
        PlanStep real = env_.plan_initial(rng);
        double total = real.reward;
        double weight = 1.0;
        if (real.terminal) return total;

        // Root belief: draws from the initial distribution.
        history_.clear();
        history_.push_back(HistoryItem{-1, real.obs});
        belief_.assign(1, real.state);
        while (static_cast<int>(belief_.size()) < cfg_.min_particles)
            belief_.push_back(env_.plan_initial(rng).state);
        reset_tree(real.state);

        while (true) {
            const int action = plan(rng, log);
            PlanStep next = env_.plan_step(real.state, action, rng);
            total += weight * next.reward;
            weight *= env_.discount();
            if (next.terminal) return total;
            advance(action, next, rng);
            real = std::move(next);
        }
    }

    /// Chooses an action for the current root by running the configured
    /// budget of simulations from the root belief.
    int plan(Rng& rng, std::vector<DecisionLog>* log = nullptr) {
        const long legal_count = static_cast<long>(nodes_[root_].legal.size());
        const long budget = cfg_.budget_per_root_action
                                ? static_cast<long>(cfg_.playouts_per_action) * legal_count
                                : static_cast<long>(cfg_.playouts_per_action);
        std::uniform_int_distribution<std::size_t> pick(0, belief_.size() - 1);
        for (long i = 0; i < budget; ++i) {
            State s = belief_[pick(rng)];
            simulate(root_, std::move(s), 0, rng);
        }
        const int action = best_root_action();
        if (log) {
            DecisionLog d;
            d.history_length = static_cast<int>(history_.size());
            d.particle_count = static_cast<int>(belief_.size());
            d.starved = last_starved_;
            d.chosen_action = action;
            const Node& r = nodes_[root_];
            for (int a : r.legal)
                if (r.arms[static_cast<std::size_t>(a)].n > 0)
                    d.root_means.emplace_back(a, r.arms[static_cast<std::size_t>(a)].mean);
            log->push_back(std::move(d));
        }
        return action;
    }

    /// Root arm statistics (visits, mean) for inspection.
    std::vector<std::pair<std::uint64_t, double>> root_arm_stats() const {
        std::vector<std::pair<std::uint64_t, double>> out;
        const Node& r = nodes_[root_];
        for (int a = 0; a < env_.max_actions(); ++a)
            out.emplace_back(r.arms[static_cast<std::size_t>(a)].n,
                             r.arms[static_cast<std::size_t>(a)].mean);
        return out;
    }

    std::uint64_t root_total() const { return nodes_[root_].total; }
    std::size_t tree_size() const { return nodes_.size(); }
    std::size_t belief_size() const { return belief_.size(); }
    const std::vector<State>& belief() const { return belief_; }
    bool last_resample_starved() const { return last_starved_; }

    /// Visit total of the child reached by (action, obs), if it exists.
    std::optional<std::uint64_t> child_total(int action, std::uint64_t obs) const {
        for (const auto& [a, o, c] : nodes_[root_].children)
            if (a == action && o == obs) return nodes_[c].total;
        return std::nullopt;
    }

    /// Seeds a fresh root from a known state (used by tests and by callers
    /// that plan from a fixed checkpoint).
    void reset_tree(const State& root_state) {
        nodes_.clear();
        root_ = make_node(root_state);
        if (belief_.empty()) belief_.assign(1, root_state);
    }

    void set_belief(std::vector<State> particles) { belief_ = std::move(particles); }

    /// Visit-count consistency: every node's total equals the sum of its
    /// arm counts (value-init priors included).
    bool visit_accounting_holds() const {
        for (const Node& n : nodes_) {
            std::uint64_t sum = 0;
            for (const Arm& a : n.arms) sum += a.n;
            if (n.total != sum) return false;
        }
        return true;
    }

    /// Rejection-samples hidden states consistent with the given history
    /// (initial observation, then alternating action/observation), starting
    /// from fresh initial draws. Returns when `want` particles are found or
    /// the attempt cap is hit; the starved flag reports the latter.
    struct BeliefResult {
        std::vector<State> particles;
        bool starved = false;
        std::uint64_t attempts = 0;
    };

    struct HistoryItem {
        int action;  // -1 for the initial observation
        std::uint64_t obs;
    };

    BeliefResult belief_states(const std::vector<HistoryItem>& history, std::size_t want,
                               Rng& rng) const {
        BeliefResult res;
        const std::uint64_t cap =
            cfg_.rejection_attempt_factor * static_cast<std::uint64_t>(cfg_.min_particles);
        while (res.particles.size() < want && res.attempts < cap) {
            ++res.attempts;
            PlanStep ps = env_.plan_initial(rng);
            if (ps.terminal || ps.obs != history.front().obs) continue;
            bool ok = true;
            for (std::size_t i = 1; i < history.size(); ++i) {
                ps = env_.plan_step(ps.state, history[i].action, rng);
                if (ps.obs != history[i].obs || (ps.terminal && i + 1 < history.size())) {
                    ok = false;
                    break;
                }
            }
            if (ok && !ps.terminal) res.particles.push_back(std::move(ps.state));
        }
        res.starved = res.particles.size() < want;
        return res;
    }

private:
    struct Arm {
        std::uint64_t n = 0;
        double mean = 0.0;
    };

    struct Node {
        std::vector<Arm> arms;   // dense over max_actions
        std::vector<int> legal;  // fixed per history
        std::uint64_t total = 0;
        std::vector<std::tuple<int, std::uint64_t, std::uint32_t>> children;
        std::vector<State> particles;
        std::uint64_t particles_seen = 0;
    };

    std::uint32_t make_node(const State& s) {
        Node n;
        n.arms.assign(static_cast<std::size_t>(env_.max_actions()), Arm{});
        env_.legal_actions(s, n.legal);
        for (int a : n.legal) {
            n.arms[static_cast<std::size_t>(a)].n =
                static_cast<std::uint64_t>(cfg_.value_init_count);
            n.arms[static_cast<std::size_t>(a)].mean = cfg_.value_init_mean;
            n.total += static_cast<std::uint64_t>(cfg_.value_init_count);
        }
        nodes_.push_back(std::move(n));
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    }

    std::uint32_t* find_child(Node& n, int action, std::uint64_t obs) {
        for (auto& [a, o, c] : n.children)
            if (a == action && o == obs) return &c;
        return nullptr;
    }

    int select_ucb(const Node& n, Rng& rng) const {
        double best = -std::numeric_limits<double>::infinity();
        int picks[128];
        int ties = 0;
        for (int a : n.legal) {
            const Arm& arm = n.arms[static_cast<std::size_t>(a)];
            const double score =
                ucb1_score(arm.mean, n.total, arm.n, cfg_.exploration, cfg_.exploration_scale);
            if (score > best) {
                best = score;
                ties = 0;
                picks[ties++] = a;
            } else if (score == best && ties < 128) {
                picks[ties++] = a;
            }
        }
        if (ties == 1) return picks[0];
        std::uniform_int_distribution<int> pick(0, ties - 1);
        return picks[pick(rng)];
    }

    /// One search iteration: UCB descent, single-node expansion, rollout,
    /// and backpropagation of the return into every node on the path.
    double simulate(std::uint32_t node_idx, State state, int depth, Rng& rng) {
        if (depth >= cfg_.max_depth) return 0.0;
        const int action = select_ucb(nodes_[node_idx], rng);
        PlanStep ps = env_.plan_step(state, action, rng);
        double g = ps.reward;
        if (!ps.terminal) {
            std::uint32_t* child = find_child(nodes_[node_idx], action, ps.obs);
            std::uint32_t child_idx;
            bool fresh = false;
            if (!child) {
                child_idx = make_node(ps.state);
                nodes_[node_idx].children.emplace_back(action, ps.obs, child_idx);
                fresh = true;
            } else {
                child_idx = *child;
            }
            deposit_particle(nodes_[child_idx], ps.state, rng);
            if (fresh)
                g += env_.discount() * rollout(std::move(ps.state), depth + 1, rng);
            else
                g += env_.discount() * simulate(child_idx, std::move(ps.state), depth + 1, rng);
        }
        Node& n = nodes_[node_idx];
        Arm& arm = n.arms[static_cast<std::size_t>(action)];
        ++arm.n;
        ++n.total;
        arm.mean += (g - arm.mean) / static_cast<double>(arm.n);
        return g;
    }

    double rollout(State state, int depth, Rng& rng) {
        double g = 0.0;
        double w = 1.0;
        std::vector<int>& legal = rollout_legal_;
        while (depth < cfg_.max_depth) {
            env_.legal_actions(state, legal);
            if (legal.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
            PlanStep ps = env_.plan_step(state, legal[pick(rng)], rng);
            g += w * ps.reward;
            if (ps.terminal) break;
            w *= env_.discount();
            if (w < 1e-4) break;
            state = std::move(ps.state);
            ++depth;
        }
        return g;
    }

    void deposit_particle(Node& n, const State& s, Rng& rng) {
        ++n.particles_seen;
        if (static_cast<int>(n.particles.size()) < cfg_.particle_cap) {
            n.particles.push_back(s);
            return;
        }
        // Reservoir replacement keeps a uniform sample of encounters.
        std::uniform_int_distribution<std::uint64_t> slot(0, n.particles_seen - 1);
        const std::uint64_t j = slot(rng);
        if (j < static_cast<std::uint64_t>(cfg_.particle_cap))
            n.particles[static_cast<std::size_t>(j)] = s;
    }

    int best_root_action() const {
        const Node& r = nodes_[root_];
        double best = -std::numeric_limits<double>::infinity();
        int choice = r.legal.front();
        for (int a : r.legal) {
            const Arm& arm = r.arms[static_cast<std::size_t>(a)];
            if (arm.n == 0) continue;
            if (arm.mean > best) {
                best = arm.mean;
                choice = a;
            }
        }
        return choice;
    }

public:
    /// After the real step (action, obs): reuse the matching child as the
    /// new root (keeping its statistics), rebuild the belief from its
    /// particles, one-step filtering of the old belief, and full-history
    /// rejection sampling, in that order.
    void advance(int action, const PlanStep& real, Rng& rng) {
        history_.push_back(HistoryItem{action, real.obs});
        std::vector<State> next_belief;
        std::uint32_t* child = find_child(nodes_[root_], action, real.obs);
        if (child) next_belief = nodes_[*child].particles;

        // One-step particle filter over the previous belief.
        const std::size_t want = static_cast<std::size_t>(cfg_.min_particles);
        std::uint64_t attempts = 0;
        const std::uint64_t cap =
            cfg_.rejection_attempt_factor * static_cast<std::uint64_t>(cfg_.min_particles) / 10;
        std::uniform_int_distribution<std::size_t> pick(0, belief_.size() - 1);
        while (next_belief.size() < want && attempts < cap) {
            ++attempts;
            PlanStep ps = env_.plan_step(belief_[pick(rng)], action, rng);
            if (!ps.terminal && ps.obs == real.obs) next_belief.push_back(std::move(ps.state));
        }

        last_starved_ = false;
        if (next_belief.size() < want) {
            BeliefResult extra = belief_states(history_, want - next_belief.size(), rng);
            for (auto& s : extra.particles) next_belief.push_back(std::move(s));
            last_starved_ = extra.starved;
        }
        if (next_belief.empty()) next_belief.push_back(real.state);  // largest set found

        // Re-root at the matching child, compacting the arena.
        if (child) {
            std::vector<Node> kept;
            kept.reserve(nodes_.size() / 2 + 1);
            copy_subtree(*child, kept);
            nodes_ = std::move(kept);
            root_ = 0;
        } else {
            reset_tree(real.state);
        }
        belief_ = std::move(next_belief);
    }

private:
    std::uint32_t copy_subtree(std::uint32_t idx, std::vector<Node>& out) {
        out.push_back(std::move(nodes_[idx]));
        const std::uint32_t self = static_cast<std::uint32_t>(out.size() - 1);
        // Index by position: recursive copies grow `out` and invalidate
        // references into it.
        for (std::size_t i = 0; i < out[self].children.size(); ++i) {
            const std::uint32_t old_child = std::get<2>(out[self].children[i]);
            const std::uint32_t new_child = copy_subtree(old_child, out);
            std::get<2>(out[self].children[i]) = new_child;
        }
        return self;
    }

    const Env& env_;
    PlannerConfig cfg_;
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
    std::vector<State> belief_;
    std::vector<HistoryItem> history_;
    std::vector<int> rollout_legal_;
    bool last_starved_ = false;
};

}  // namespace cdarl
