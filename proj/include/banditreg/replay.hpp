#pragma once

#include <cstddef>
#include <vector>

#include "banditreg/rng.hpp"
#include "banditreg/types.hpp"

namespace banditreg {

// One bandit interaction. No next-state: each prediction is a complete
// one-step episode.
struct Transition {
    Vector state;
    double raw_x = 0.0;
    double action = 0.0;
    double reward = 0.0;
    double target_y = 0.0;
};

// Complete binary tree with priorities at the leaves and partial sums above,
// for O(log n) proportional sampling. Capacity rounds up to a power of two.
class SumTree {
public:
    explicit SumTree(std::size_t capacity);

    std::size_t leaf_count() const { return leaf_count_; }
    double total() const { return nodes_[1]; }
    double leaf(std::size_t i) const;
    void set_leaf(std::size_t i, double priority);

    // Leaf index whose cumulative-sum interval contains `mass`,
    // 0 <= mass < total().
    std::size_t find_prefix(double mass) const;

private:
    std::size_t leaf_count_;
    std::vector<double> nodes_; // 1-based heap layout; leaves at [leaf_count_, 2*leaf_count_)
};

struct PerConfig {
    double alpha = 0.6;            // priority exponent
    double beta_start = 0.4;       // IS-weight annealing endpoints
    double beta_end = 1.0;
    double epsilon_priority = 1e-3; // keeps priorities strictly positive
    std::size_t capacity = 10000;
};

struct SampleBatch {
    std::vector<std::size_t> indices;
    Matrix states;  // batch x feature_dim
    Vector actions;
    Vector rewards;
    Vector weights; // importance-sampling weights, max-normalized to 1
};

// Ring buffer of transitions with a sum tree over priorities. Proportional
// (PER) and uniform sampling share the same storage. Single writer, single
// reader; one buffer per training run.
class ReplayBuffer {
public:
    explicit ReplayBuffer(const PerConfig& config);

    // Stores t, overwriting the oldest slot when full. The new slot gets the
    // maximum priority seen so far (1.0 while nothing has been updated).
    // Returns the slot index.
    std::size_t push(Transition t);

    // Stratified proportional sampling: one draw per equal-mass segment of
    // the priority total. Weights are (N * P(i))^-beta, normalized so the
    // batch maximum is 1. Throws std::invalid_argument on an empty buffer.
    SampleBatch sample(std::size_t batch, double beta, Rng& rng) const;

    // I.i.d. uniform indices, all weights 1.
    SampleBatch sample_uniform(std::size_t batch, Rng& rng) const;

    // priority_i = (|error_i| + epsilon_priority)^alpha. Throws
    // std::out_of_range on a bad index.
    void update_priorities(const std::vector<std::size_t>& indices, const Vector& errors);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return config_.capacity; }
    const PerConfig& config() const { return config_; }
    double max_priority() const { return max_priority_; }
    double priority(std::size_t i) const { return tree_.leaf(i); }
    double total_priority() const { return tree_.total(); }
    const Transition& transition(std::size_t i) const { return storage_[i]; }

private:
    SampleBatch gather(std::vector<std::size_t> indices, Vector weights) const;

    PerConfig config_;
    std::vector<Transition> storage_;
    SumTree tree_;
    std::size_t next_ = 0;        // ring cursor
    std::size_t size_ = 0;
    double max_priority_ = 1.0;   // running max of every priority ever stored
    Index state_dim_ = -1;        // fixed by the first push
};

} // namespace banditreg
