#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "cdarl/core/rng.hpp"
#include "cdarl/learn/value_table.hpp"

namespace cdarl {

/// Uniform-random action with probability epsilon, otherwise greedy with
/// exact ties broken uniformly at random.
inline int epsilon_greedy(const ValueTable& table, const Decision& d, double epsilon, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (epsilon > 0.0 && u(rng) < epsilon) {
        std::uniform_int_distribution<int> pick(0, d.legal.count - 1);
        return d.legal.ids[static_cast<std::size_t>(pick(rng))];
    }
    double best_q = -std::numeric_limits<double>::infinity();
    int best[16];
    int ties = 0;
    for (int i = 0; i < d.legal.count; ++i) {
        const int a = d.legal.ids[static_cast<std::size_t>(i)];
        const double qa = table.tiled_q(d.keys, d.role, a);
        if (qa > best_q) {
            best_q = qa;
            ties = 0;
            best[ties++] = a;
        } else if (qa == best_q) {
            best[ties++] = a;
        }
    }
    if (ties == 1) return best[0];
    std::uniform_int_distribution<int> pick(0, ties - 1);
    return best[pick(rng)];
}

/// Off-policy TD(0): moves Q(s,a) toward R + gamma * max_a' Q(s',a');
/// a terminal successor contributes the reward alone.
inline void q_update(ValueTable& table, const Decision& s, int action, double reward,
                     const Decision& next, bool terminal) {
    const double target = terminal ? reward : reward + table.gamma() * table.max_q(next);
    table.apply_target(s.keys, s.role, action, target);
}

/// On-policy TD(0): bootstraps on the action the behavior policy will
/// actually take at s'.
inline void sarsa_update(ValueTable& table, const Decision& s, int action, double reward,
                         const Decision& next, int next_action, bool terminal) {
    const double target =
        terminal ? reward : reward + table.gamma() * table.tiled_q(next.keys, next.role, next_action);
    table.apply_target(s.keys, s.role, action, target);
}

/// Eligibility traces over table cells. Zero at episode start; visiting a
/// pair sets its trace to 1; traces decay by gamma*lambda per step and are
/// purged once negligible, so sweep cost tracks the trace support.
class TraceSet {
public:
    void reset() { traces_.clear(); }

    void visit(const ValueTable& table, const Decision& d, int action) {
        for (int j = 0; j < table.num_tilings(); ++j)
            traces_[table.flat_index(j, d.keys[static_cast<std::size_t>(j)], d.role, action)] = 1.0;
    }

    void sweep(ValueTable& table, double target) {
        for (const auto& [flat, trace] : traces_) table.nudge_cell(flat, trace, target);
    }

    void decay(double factor) {
        for (auto it = traces_.begin(); it != traces_.end();) {
            it->second *= factor;
            if (it->second < 1e-6)
                it = traces_.erase(it);
            else
                ++it;
        }
    }

    std::size_t support() const { return traces_.size(); }
    double trace_at(std::size_t flat) const {
        auto it = traces_.find(flat);
        return it == traces_.end() ? 0.0 : it->second;
    }
    double max_trace() const {
        double m = 0.0;
        for (const auto& [_, t] : traces_) m = std::max(m, t);
        return m;
    }

private:
    std::unordered_map<std::size_t, double> traces_;
};

/// One Sarsa(lambda) transition: mark the visited pair, sweep every traced
/// pair toward the shared target, then decay.
inline void sarsa_lambda_step(ValueTable& table, TraceSet& traces, const Decision& s, int action,
                              double reward, const Decision& next, int next_action, bool terminal,
                              double lambda) {
    table.count_visit(s.keys, s.role, action);
    traces.visit(table, s, action);
    const double target =
        terminal ? reward : reward + table.gamma() * table.tiled_q(next.keys, next.role, next_action);
    traces.sweep(table, target);
    traces.decay(table.gamma() * lambda);
}

}  // namespace cdarl
