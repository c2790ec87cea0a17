#include <doctest.h>

#include <cmath>
#include <vector>

#include "banditreg/replay.hpp"

using namespace banditreg;

namespace {

Transition make_transition(double x, double action = 0.0, double reward = 0.5) {
    Vector state(1);
    state[0] = x;
    return Transition{state, x, action, reward, std::sin(x)};
}

// Exhaustive oracle: recompute the root as a plain sum over leaves.
double leaf_sum(const SumTree& tree) {
    double sum = 0.0;
    for (std::size_t i = 0; i < tree.leaf_count(); ++i) sum += tree.leaf(i);
    return sum;
}

} // namespace

TEST_CASE("sum tree: root tracks the leaf sum exactly") {
    SumTree tree(6); // rounds to 8 leaves
    CHECK(tree.leaf_count() == 8);
    tree.set_leaf(0, 1.0);
    tree.set_leaf(3, 2.5);
    CHECK(tree.total() == doctest::Approx(3.5));
    SUBCASE("setting a leaf moves the root by the leaf delta") {
        const double before = tree.total();
        tree.set_leaf(3, 2.0);
        CHECK(tree.total() == doctest::Approx(before - 0.5));
    }
}

TEST_CASE("sum tree: find_prefix picks the leaf owning the mass interval") {
    SumTree tree(4);
    tree.set_leaf(0, 1.0);
    tree.set_leaf(1, 3.0);
    CHECK(tree.find_prefix(0.0) == 0);
    CHECK(tree.find_prefix(0.999) == 0);
    CHECK(tree.find_prefix(1.0) == 1);
    CHECK(tree.find_prefix(3.999) == 1);
}

TEST_CASE("sum tree: root equals leaf sum after random operation storms") {
    Rng rng(31);
    for (std::size_t capacity : {1u, 5u, 64u}) {
        SumTree tree(capacity);
        for (int op = 0; op < 2000; ++op) {
            const std::size_t leaf = rng.uniform_index(tree.leaf_count());
            tree.set_leaf(leaf, rng.uniform(0.0, 10.0));
            if (op % 100 == 0) {
                CHECK(std::abs(tree.total() - leaf_sum(tree)) < 1e-9);
            }
        }
        CHECK(std::abs(tree.total() - leaf_sum(tree)) < 1e-9);
    }
}

TEST_CASE("push: first slot gets index 0 and priority 1") {
    PerConfig cfg;
    cfg.capacity = 8;
    ReplayBuffer buffer(cfg);
    CHECK(buffer.push(make_transition(0.1)) == 0);
    CHECK(buffer.priority(0) == 1.0);
    CHECK(buffer.size() == 1);
}

TEST_CASE("push: ring overwrite keeps size at capacity") {
    PerConfig cfg;
    cfg.capacity = 4;
    ReplayBuffer buffer(cfg);
    for (int i = 0; i < 5; ++i) buffer.push(make_transition(static_cast<double>(i)));
    CHECK(buffer.size() == 4);
    CHECK(buffer.transition(0).raw_x == 4.0); // oldest slot overwritten
    CHECK(buffer.transition(1).raw_x == 1.0);
}

TEST_CASE("push: new transitions inherit the running max priority") {
    PerConfig cfg;
    cfg.capacity = 8;
    cfg.alpha = 1.0;
    cfg.epsilon_priority = 1e-3;
    ReplayBuffer buffer(cfg);
    buffer.push(make_transition(0.0));
    Vector errors(1);
    errors << 5.0 - cfg.epsilon_priority; // priority (|e|+eps)^1 = 5.0
    buffer.update_priorities({0}, errors);
    CHECK(buffer.max_priority() == doctest::Approx(5.0));
    const std::size_t idx = buffer.push(make_transition(1.0));
    CHECK(buffer.priority(idx) == doctest::Approx(5.0));
}

TEST_CASE("update_priorities: zero error keeps a strictly positive priority") {
    PerConfig cfg;
    cfg.capacity = 4;
    ReplayBuffer buffer(cfg);
    buffer.push(make_transition(0.0));
    buffer.update_priorities({0}, Vector::Zero(1));
    CHECK(buffer.priority(0) == doctest::Approx(std::pow(cfg.epsilon_priority, cfg.alpha)));
    CHECK(buffer.priority(0) > 0.0);
}

TEST_CASE("update_priorities: bad index throws") {
    PerConfig cfg;
    cfg.capacity = 4;
    ReplayBuffer buffer(cfg);
    buffer.push(make_transition(0.0));
    CHECK_THROWS_AS(buffer.update_priorities({3}, Vector::Ones(1)), std::out_of_range);
}

TEST_CASE("sample: degenerate mass always returns the hot index") {
    PerConfig cfg;
    cfg.capacity = 4;
    cfg.alpha = 1.0;
    cfg.epsilon_priority = 1e-12;
    ReplayBuffer buffer(cfg);
    for (int i = 0; i < 4; ++i) buffer.push(make_transition(static_cast<double>(i)));
    Vector errors(4);
    errors << 1.0, 0.0, 0.0, 0.0;
    buffer.update_priorities({0, 1, 2, 3}, errors);
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const SampleBatch batch = buffer.sample(1, 0.4, rng);
        CHECK(batch.indices[0] == 0);
    }
}

TEST_CASE("sample: frequencies follow priority proportions") {
    PerConfig cfg;
    cfg.capacity = 2;
    cfg.alpha = 1.0;
    cfg.epsilon_priority = 1e-9;
    ReplayBuffer buffer(cfg);
    buffer.push(make_transition(0.0));
    buffer.push(make_transition(1.0));
    Vector errors(2);
    errors << 1.0 - cfg.epsilon_priority, 3.0 - cfg.epsilon_priority;
    buffer.update_priorities({0, 1}, errors);

    Rng rng(77);
    int hits = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        if (buffer.sample(1, 0.4, rng).indices[0] == 1) ++hits;
    }
    const double freq = static_cast<double>(hits) / draws;
    CHECK(freq > 0.74);
    CHECK(freq < 0.76);
}

TEST_CASE("sample: uniform priorities give unit IS weights for any beta") {
    PerConfig cfg;
    cfg.capacity = 8;
    ReplayBuffer buffer(cfg);
    for (int i = 0; i < 8; ++i) buffer.push(make_transition(static_cast<double>(i)));
    Rng rng(3);
    for (double beta : {0.0, 0.4, 1.0}) {
        const SampleBatch batch = buffer.sample(4, beta, rng);
        for (Index i = 0; i < batch.weights.size(); ++i) {
            CHECK(batch.weights[i] == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("sample: batch max weight is always 1") {
    PerConfig cfg;
    cfg.capacity = 16;
    ReplayBuffer buffer(cfg);
    Rng rng(9);
    for (int i = 0; i < 16; ++i) buffer.push(make_transition(static_cast<double>(i)));
    std::vector<std::size_t> indices(16);
    Vector errors(16);
    for (int i = 0; i < 16; ++i) {
        indices[i] = i;
        errors[i] = rng.uniform(0.0, 4.0);
    }
    buffer.update_priorities(indices, errors);
    for (int trial = 0; trial < 50; ++trial) {
        const SampleBatch batch = buffer.sample(8, 0.7, rng);
        CHECK(batch.weights.maxCoeff() == doctest::Approx(1.0));
        CHECK(batch.weights.minCoeff() > 0.0);
    }
}

TEST_CASE("sample: empty buffer throws") {
    PerConfig cfg;
    cfg.capacity = 4;
    ReplayBuffer buffer(cfg);
    Rng rng(1);
    CHECK_THROWS_AS(buffer.sample(1, 0.4, rng), std::invalid_argument);
    CHECK_THROWS_AS(buffer.sample_uniform(1, rng), std::invalid_argument);
}

TEST_CASE("sample_uniform: single element, unit weights") {
    PerConfig cfg;
    cfg.capacity = 4;
    ReplayBuffer buffer(cfg);
    buffer.push(make_transition(0.5));
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const SampleBatch batch = buffer.sample_uniform(3, rng);
        for (std::size_t idx : batch.indices) CHECK(idx == 0);
        for (Index w = 0; w < batch.weights.size(); ++w) CHECK(batch.weights[w] == 1.0);
    }
}

TEST_CASE("sample_uniform: frequencies are flat over the stored range") {
    PerConfig cfg;
    cfg.capacity = 10;
    ReplayBuffer buffer(cfg);
    for (int i = 0; i < 10; ++i) buffer.push(make_transition(static_cast<double>(i)));
    Rng rng(13);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        ++counts[buffer.sample_uniform(1, rng).indices[0]];
    }
    for (int i = 0; i < 10; ++i) {
        const double freq = static_cast<double>(counts[i]) / draws;
        CHECK(freq > 0.09);
        CHECK(freq < 0.11);
    }
}

TEST_CASE("buffer invariant: root equals leaf sum after interleaved push/update") {
    PerConfig cfg;
    cfg.capacity = 64;
    ReplayBuffer buffer(cfg);
    Rng rng(41);
    for (int op = 0; op < 10000; ++op) {
        if (buffer.size() == 0 || rng.uniform01() < 0.5) {
            buffer.push(make_transition(rng.uniform(-5.0, 5.0)));
        } else {
            const std::size_t idx = rng.uniform_index(buffer.size());
            Vector err(1);
            err << rng.uniform(0.0, 3.0);
            buffer.update_priorities({idx}, err);
        }
    }
    // Unfilled leaves hold zero, so the stored-slot sum is the whole mass.
    double sum = 0.0;
    for (std::size_t i = 0; i < buffer.size(); ++i) sum += buffer.priority(i);
    CHECK(std::abs(buffer.total_priority() - sum) < 1e-9);
    CHECK(buffer.size() == 64);
}
