#pragma once

#include <cstdint>
#include <vector>

#include "banditreg/env.hpp"
#include "banditreg/nn.hpp"
#include "banditreg/replay.hpp"
#include "banditreg/rng.hpp"
#include "banditreg/types.hpp"

namespace banditreg {

struct ActorCriticConfig {
    int feature_dim = 1;
    std::vector<int> actor_hidden = {128, 64};
    std::vector<int> critic_hidden = {128, 64};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double exploration_noise_std = 0.1;
    std::uint64_t seed = 0;
};

struct CriticUpdateResult {
    double loss = 0.0;         // weighted MSE before the step
    Vector abs_residuals;      // |Q(s,a) - r| per sample, for priority updates
};

// Deterministic Tanh actor and unbounded Q-critic for the one-step bandit:
// the critic regresses Q(s,a) onto the immediate reward, the actor ascends
// the critic. No target networks, no discounting.
class ActorCritic {
public:
    explicit ActorCritic(const ActorCriticConfig& config);

    // Deterministic policy, strictly inside (-1, 1).
    double act(const Vector& state) const;
    Vector act(const Matrix& states) const;

    // act() plus Gaussian noise, clipped to [-1, 1].
    double act_explore(const Vector& state, Rng& rng) const;
    Vector act_explore(const Matrix& states, Rng& rng) const;

    double critic_value(const Vector& state, double action) const;
    Vector critic_value(const Matrix& states, const Vector& actions) const;

    // One Adam step on the critic minimizing mean_i w_i (Q(s_i,a_i) - r_i)^2.
    // Returns the pre-step loss and per-sample absolute residuals. Throws on
    // non-finite inputs without updating.
    CriticUpdateResult critic_update(const Matrix& states, const Vector& actions,
                                     const Vector& rewards, const Vector& is_weights);

    // One Adam step on the actor minimizing -mean_i Q(s_i, pi(s_i)); the
    // gradient flows through the critic's action input. Critic parameters are
    // untouched. Returns the pre-step actor loss.
    double actor_update(const Matrix& states);

    int feature_dim() const { return config_.feature_dim; }
    double exploration_noise_std() const { return config_.exploration_noise_std; }

    const MlpSpec& actor_spec() const { return actor_spec_; }
    const MlpSpec& critic_spec() const { return critic_spec_; }
    const MlpParams& actor_params() const { return actor_params_; }
    const MlpParams& critic_params() const { return critic_params_; }
    MlpParams& actor_params() { return actor_params_; }
    MlpParams& critic_params() { return critic_params_; }

private:
    ActorCriticConfig config_;
    MlpSpec actor_spec_;
    MlpSpec critic_spec_;
    MlpParams actor_params_;
    MlpParams critic_params_;
    AdamState actor_adam_;
    AdamState critic_adam_;
};

struct UpdateReport {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double mean_batch_reward = 0.0;        // mean reward of the fresh interactions
    double mean_abs_critic_residual = 0.0;
};

struct TrainStepOptions {
    std::size_t batch_size = 64;  // training batch drawn from the buffer
    bool per_enabled = false;
    double beta = 1.0;            // PER IS-weight exponent for this step
    bool per_weighted_is = true;  // apply IS weights to the critic loss
    int train_batches = 1;        // buffer batches per interaction minibatch
};

// One interaction + update cycle: featurize each minibatch point, act with
// exploration noise, reward, store; then sample a training batch (PER or
// uniform), update the critic, refresh priorities from the residuals (PER),
// and update the actor on the sampled states.
UpdateReport train_step(ActorCritic& agent, ReplayBuffer& buffer, const RewardKernel& kernel,
                        const Vector& xs, const Vector& ys, const Featurizer& featurizer,
                        const TrainStepOptions& opts, Rng& rng);

} // namespace banditreg
