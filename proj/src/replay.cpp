#include "banditreg/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditreg {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

SumTree::SumTree(std::size_t capacity)
    : leaf_count_(next_pow2(std::max<std::size_t>(capacity, 1))),
      nodes_(2 * leaf_count_, 0.0) {}

double SumTree::leaf(std::size_t i) const {
    if (i >= leaf_count_) throw std::out_of_range("SumTree::leaf: index out of range");
    return nodes_[leaf_count_ + i];
}

void SumTree::set_leaf(std::size_t i, double priority) {
    if (i >= leaf_count_) throw std::out_of_range("SumTree::set_leaf: index out of range");
    if (!(priority >= 0.0)) {
        throw std::invalid_argument("SumTree::set_leaf: priority must be >= 0");
    }
    std::size_t node = leaf_count_ + i;
    nodes_[node] = priority;
    // Recompute parents as child sums; no incremental drift.
    while (node > 1) {
        node >>= 1;
        nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
    }
}

std::size_t SumTree::find_prefix(double mass) const {
    std::size_t node = 1;
    while (node < leaf_count_) {
        const std::size_t left = 2 * node;
        if (mass < nodes_[left]) {
            node = left;
        } else {
            mass -= nodes_[left];
            node = left + 1;
        }
    }
    return node - leaf_count_;
}

ReplayBuffer::ReplayBuffer(const PerConfig& config)
    : config_(config), tree_(config.capacity) {
    if (config.capacity == 0) {
        throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
    }
    if (!(config.epsilon_priority > 0.0)) {
        throw std::invalid_argument("ReplayBuffer: epsilon_priority must be > 0");
    }
    if (config.beta_start > config.beta_end) {
        throw std::invalid_argument("ReplayBuffer: beta_start must be <= beta_end");
    }
    storage_.resize(config.capacity);
}

std::size_t ReplayBuffer::push(Transition t) {
    if (state_dim_ < 0) {
        state_dim_ = t.state.size();
    } else if (t.state.size() != state_dim_) {
        throw std::invalid_argument("ReplayBuffer::push: state dimension changed");
    }
    const std::size_t slot = next_;
    storage_[slot] = std::move(t);
    tree_.set_leaf(slot, max_priority_);
    next_ = (next_ + 1) % config_.capacity;
    size_ = std::min(size_ + 1, config_.capacity);
    return slot;
}

SampleBatch ReplayBuffer::gather(std::vector<std::size_t> indices, Vector weights) const {
    const auto batch = static_cast<Index>(indices.size());
    SampleBatch out;
    out.states.resize(batch, state_dim_);
    out.actions.resize(batch);
    out.rewards.resize(batch);
    for (Index i = 0; i < batch; ++i) {
        const Transition& t = storage_[indices[i]];
        out.states.row(i) = t.state.transpose();
        out.actions[i] = t.action;
        out.rewards[i] = t.reward;
    }
    out.indices = std::move(indices);
    out.weights = std::move(weights);
    return out;
}

SampleBatch ReplayBuffer::sample(std::size_t batch, double beta, Rng& rng) const {
    if (size_ == 0) throw std::invalid_argument("ReplayBuffer::sample: buffer is empty");
    if (batch == 0) throw std::invalid_argument("ReplayBuffer::sample: batch must be >= 1");

    const double total = tree_.total();
    if (!(total > 0.0)) throw std::invalid_argument("ReplayBuffer::sample: zero total priority");

    std::vector<std::size_t> indices(batch);
    Vector weights(static_cast<Index>(batch));
    const double segment = total / static_cast<double>(batch);
    const double n = static_cast<double>(size_);
    for (std::size_t j = 0; j < batch; ++j) {
        const double mass = (static_cast<double>(j) + rng.uniform01()) * segment;
        std::size_t idx = tree_.find_prefix(std::min(mass, std::nextafter(total, 0.0)));
        idx = std::min(idx, size_ - 1); // guard against landing on an unfilled leaf
        indices[j] = idx;
        const double p = tree_.leaf(idx) / total;
        weights[static_cast<Index>(j)] = std::pow(n * p, -beta);
    }
    weights /= weights.maxCoeff();
    return gather(std::move(indices), std::move(weights));
}

SampleBatch ReplayBuffer::sample_uniform(std::size_t batch, Rng& rng) const {
    if (size_ == 0) throw std::invalid_argument("ReplayBuffer::sample_uniform: buffer is empty");
    if (batch == 0) throw std::invalid_argument("ReplayBuffer::sample_uniform: batch must be >= 1");

    std::vector<std::size_t> indices(batch);
    for (auto& idx : indices) {
        idx = static_cast<std::size_t>(rng.uniform_index(size_));
    }
    return gather(std::move(indices), Vector::Ones(static_cast<Index>(batch)));
}

void ReplayBuffer::update_priorities(const std::vector<std::size_t>& indices,
                                     const Vector& errors) {
    if (static_cast<Index>(indices.size()) != errors.size()) {
        throw std::invalid_argument("update_priorities: indices/errors size mismatch");
    }
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const std::size_t idx = indices[j];
        if (idx >= size_) throw std::out_of_range("update_priorities: index out of range");
        const double err = std::abs(errors[static_cast<Index>(j)]);
        const double priority = std::pow(err + config_.epsilon_priority, config_.alpha);
        tree_.set_leaf(idx, priority);
        max_priority_ = std::max(max_priority_, priority);
    }
}

} // namespace banditreg
