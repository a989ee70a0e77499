#pragma once

#include <deque>

#include "cdarl/core/rng.hpp"
#include "cdarl/learn/td.hpp"
#include "cdarl/learn/value_table.hpp"

namespace cdarl {

struct Transition {
    Decision s;
    int action = 0;
    double reward = 0.0;
    Decision next;
    int next_action = 0;
    bool terminal = false;
};

/// Drop-out queue of past transitions: oldest-first eviction at capacity.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

    void push(Transition t) {
        if (queue_.size() == capacity_) queue_.pop_front();
        queue_.push_back(std::move(t));
    }

    std::size_t size() const { return queue_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return queue_.empty(); }
    const Transition& at(std::size_t i) const { return queue_[i]; }

    const Transition& sample(Rng& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, queue_.size() - 1);
        return queue_[pick(rng)];
    }

private:
    std::size_t capacity_;
    std::deque<Transition> queue_;
};

/// Replays a uniformly drawn batch as if experienced again: each drawn
/// transition is applied through the Q-learning update with the current
/// table's bootstrap target. No-op on an empty memory.
inline void replay_step(ReplayBuffer& buffer, ValueTable& table, int batch, Rng& rng) {
    if (buffer.empty()) return;
    for (int i = 0; i < batch; ++i) {
        const Transition& t = buffer.sample(rng);
        q_update(table, t.s, t.action, t.reward, t.next, t.terminal);
    }
}

}  // namespace cdarl
