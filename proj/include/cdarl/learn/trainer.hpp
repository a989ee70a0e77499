#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cdarl/learn/policy.hpp"
#include "cdarl/learn/replay.hpp"
#include "cdarl/learn/td.hpp"

namespace cdarl {

enum class TdAlgorithm { QLearning, Sarsa, SarsaLambda, QLearningReplay };

inline const char* to_string(TdAlgorithm a) {
    switch (a) {
        case TdAlgorithm::QLearning: return "q";
        case TdAlgorithm::Sarsa: return "sarsa";
        case TdAlgorithm::SarsaLambda: return "sarsa_lambda";
        case TdAlgorithm::QLearningReplay: return "q_replay";
    }
    return "?";
}

inline TdAlgorithm td_algorithm_from(const std::string& s) {
    if (s == "q") return TdAlgorithm::QLearning;
    if (s == "sarsa") return TdAlgorithm::Sarsa;
    if (s == "sarsa_lambda") return TdAlgorithm::SarsaLambda;
    if (s == "q_replay") return TdAlgorithm::QLearningReplay;
    throw std::invalid_argument("unknown learner: " + s);
}

struct TdConfig {
    TdAlgorithm algorithm = TdAlgorithm::QLearning;
    double epsilon = 0.2;
    double lambda = 0.9;
    double gamma = 1.0;
    LearningRate rate = LearningRate::inverse_visits();
    // Replay parameters; this default is the small preset used by the
    // market experiments. replay_large() is the bigger published variant.
    int replay_capacity = 1000;
    int replay_batch = 400;
    int replay_every = 100;

    TdConfig& replay_large() {
        replay_capacity = 40000;
        replay_batch = 4000;
        replay_every = 1000;
        return *this;
    }
};

/// Episode driver for the TD learners over any task exposing the decision
/// protocol:
///   std::optional<Decision> begin_episode(Rng&);
///   struct Step { double reward; bool terminal; Decision next; };
///   Step step(int action, Rng&);
///   int num_actions(); int num_roles(); const TileConfig& tiles();
/// Training is strictly sequential; policies extracted from the table are
/// immutable snapshots.
template <typename Task>
class TdTrainer {
public:
    TdTrainer(Task& task, TdConfig cfg)
        : task_(task),
          cfg_(cfg),
          table_(ValueTable::for_tiles(task.tiles(), task.num_roles(), task.num_actions(),
                                       cfg.rate, cfg.gamma)),
          buffer_(static_cast<std::size_t>(cfg.replay_capacity)) {}

    const ValueTable& table() const { return table_; }
    long episodes_run() const { return episodes_; }

    /// Runs n training episodes (a run with no decision point still counts).
    void run_episodes(long n, Rng& rng) {
        for (long i = 0; i < n; ++i) {
            run_one(rng);
            ++episodes_;
            if (cfg_.algorithm == TdAlgorithm::QLearningReplay &&
                episodes_ % cfg_.replay_every == 0)
                replay_step(buffer_, table_, cfg_.replay_batch, rng);
        }
    }

    GreedyPolicy snapshot_policy() const {
        return extract_greedy_policy(table_, task_.tiles(),
                                     [this](int tile) { return task_.legal_for_tile(tile); },
                                     episodes_);
    }

private:
    void run_one(Rng& rng) {
        std::optional<Decision> d = task_.begin_episode(rng);
        if (!d) return;
        if (cfg_.algorithm == TdAlgorithm::SarsaLambda) traces_.reset();

        int action = epsilon_greedy(table_, *d, cfg_.epsilon, rng);
        while (true) {
            const auto out = task_.step(action, rng);
            switch (cfg_.algorithm) {
                case TdAlgorithm::QLearning:
                case TdAlgorithm::QLearningReplay: {
                    q_update(table_, *d, action, out.reward, out.next, out.terminal);
                    if (cfg_.algorithm == TdAlgorithm::QLearningReplay)
                        buffer_.push(Transition{*d, action, out.reward, out.next, 0, out.terminal});
                    if (out.terminal) return;
                    d = out.next;
                    action = epsilon_greedy(table_, *d, cfg_.epsilon, rng);
                    break;
                }
                case TdAlgorithm::Sarsa: {
                    if (out.terminal) {
                        sarsa_update(table_, *d, action, out.reward, out.next, 0, true);
                        return;
                    }
                    const int next_action = epsilon_greedy(table_, out.next, cfg_.epsilon, rng);
                    sarsa_update(table_, *d, action, out.reward, out.next, next_action, false);
                    d = out.next;
                    action = next_action;
                    break;
                }
                case TdAlgorithm::SarsaLambda: {
                    if (out.terminal) {
                        sarsa_lambda_step(table_, traces_, *d, action, out.reward, out.next, 0,
                                          true, cfg_.lambda);
                        return;
                    }
                    const int next_action = epsilon_greedy(table_, out.next, cfg_.epsilon, rng);
                    sarsa_lambda_step(table_, traces_, *d, action, out.reward, out.next,
                                      next_action, false, cfg_.lambda);
                    d = out.next;
                    action = next_action;
                    break;
                }
            }
        }
    }

    Task& task_;
    TdConfig cfg_;
    ValueTable table_;
    TraceSet traces_;
    ReplayBuffer buffer_;
    long episodes_ = 0;
};

/// Greedy rollouts of a fixed policy; returns one total reward per episode.
template <typename Task>
std::vector<double> evaluate_policy_on(Task& task, const GreedyPolicy& policy, long episodes,
                                       Rng& rng) {
    std::vector<double> returns;
    returns.reserve(static_cast<std::size_t>(episodes));
    for (long i = 0; i < episodes; ++i) {
        double total = 0.0;
        double discount = 1.0;
        const double gamma = policy.gamma;
        std::optional<Decision> d = task.begin_episode(rng);
        while (d) {
            const int action = policy.action_at(d->refined, d->role);
            const auto out = task.step(action, rng);
            total += discount * out.reward;
            discount *= gamma;
            if (out.terminal) break;
            d = out.next;
        }
        returns.push_back(total);
    }
    return returns;
}

}  // namespace cdarl
