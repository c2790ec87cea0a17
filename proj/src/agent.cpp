#include "banditreg/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditreg {

ActorCritic::ActorCritic(const ActorCriticConfig& config)
    : config_(config),
      actor_spec_{config.feature_dim, config.actor_hidden, 1, OutputActivation::Tanh},
      critic_spec_{config.feature_dim + 1, config.critic_hidden, 1, OutputActivation::Linear},
      actor_params_(init_params(actor_spec_, derive_seed(config.seed, 1))),
      critic_params_(init_params(critic_spec_, derive_seed(config.seed, 2))),
      actor_adam_(make_adam_state(actor_spec_, config.actor_lr)),
      critic_adam_(make_adam_state(critic_spec_, config.critic_lr)) {
    if (config.exploration_noise_std < 0.0) {
        throw std::invalid_argument("ActorCritic: exploration_noise_std must be >= 0");
    }
}

Vector ActorCritic::act(const Matrix& states) const {
    return forward(actor_spec_, actor_params_, states).col(0);
}

double ActorCritic::act(const Vector& state) const {
    return act(Matrix(state.transpose()))[0];
}

Vector ActorCritic::act_explore(const Matrix& states, Rng& rng) const {
    Vector actions = act(states);
    if (config_.exploration_noise_std > 0.0) {
        for (Index i = 0; i < actions.size(); ++i) {
            actions[i] += rng.normal(0.0, config_.exploration_noise_std);
        }
    }
    return actions.cwiseMax(-1.0).cwiseMin(1.0);
}

double ActorCritic::act_explore(const Vector& state, Rng& rng) const {
    return act_explore(Matrix(state.transpose()), rng)[0];
}

namespace {

Matrix join_state_action(const Matrix& states, const Vector& actions) {
    Matrix joined(states.rows(), states.cols() + 1);
    joined.leftCols(states.cols()) = states;
    joined.col(states.cols()) = actions;
    return joined;
}

} // namespace

Vector ActorCritic::critic_value(const Matrix& states, const Vector& actions) const {
    return forward(critic_spec_, critic_params_, join_state_action(states, actions)).col(0);
}

double ActorCritic::critic_value(const Vector& state, double action) const {
    Vector a(1);
    a[0] = action;
    return critic_value(Matrix(state.transpose()), a)[0];
}

CriticUpdateResult ActorCritic::critic_update(const Matrix& states, const Vector& actions,
                                              const Vector& rewards, const Vector& is_weights) {
    const Index batch = states.rows();
    if (batch == 0) throw std::invalid_argument("critic_update: empty batch");
    if (actions.size() != batch || rewards.size() != batch || is_weights.size() != batch) {
        throw std::invalid_argument("critic_update: batch size mismatch");
    }
    if (!states.allFinite() || !actions.allFinite() || !rewards.allFinite() ||
        !is_weights.allFinite()) {
        throw NumericalError("critic_update: non-finite input");
    }

    ForwardTrace trace;
    const Matrix inputs = join_state_action(states, actions);
    const Vector q = forward(critic_spec_, critic_params_, inputs, &trace).col(0);
    const Vector residuals = q - rewards;

    CriticUpdateResult result;
    result.loss = (is_weights.array() * residuals.array().square()).mean();
    result.abs_residuals = residuals.cwiseAbs();

    // d/dq of mean_i w_i (q_i - r_i)^2.
    Matrix output_grads =
        (2.0 * is_weights.array() * residuals.array() / static_cast<double>(batch)).matrix();
    BackwardResult back = backward(critic_spec_, critic_params_, trace, output_grads);
    adam_step(critic_params_, back.grads, critic_adam_);
    return result;
}

double ActorCritic::actor_update(const Matrix& states) {
    const Index batch = states.rows();
    if (batch == 0) throw std::invalid_argument("actor_update: empty batch");
    if (!states.allFinite()) throw NumericalError("actor_update: non-finite states");

    ForwardTrace actor_trace;
    const Vector actions = forward(actor_spec_, actor_params_, states, &actor_trace).col(0);

    ForwardTrace critic_trace;
    const Matrix critic_inputs = join_state_action(states, actions);
    const Vector q =
        forward(critic_spec_, critic_params_, critic_inputs, &critic_trace).col(0);
    const double actor_loss = -q.mean();

    // d(-mean q)/dq = -1/B; chain through the critic's action column.
    const Matrix dq = Matrix::Constant(batch, 1, -1.0 / static_cast<double>(batch));
    BackwardResult critic_back = backward(critic_spec_, critic_params_, critic_trace, dq);
    const Matrix action_grads = critic_back.input_grads.rightCols(1);

    BackwardResult actor_back = backward(actor_spec_, actor_params_, actor_trace, action_grads);
    adam_step(actor_params_, actor_back.grads, actor_adam_);
    return actor_loss;
}

UpdateReport train_step(ActorCritic& agent, ReplayBuffer& buffer, const RewardKernel& kernel,
                        const Vector& xs, const Vector& ys, const Featurizer& featurizer,
                        const TrainStepOptions& opts, Rng& rng) {
    if (xs.size() == 0 || xs.size() != ys.size()) {
        throw std::invalid_argument("train_step: empty or mismatched minibatch");
    }
    if (opts.train_batches < 1) {
        throw std::invalid_argument("train_step: train_batches must be >= 1");
    }

    // Interact: featurize, act with exploration, reward, store.
    const Matrix states = featurize(featurizer, xs);
    const Vector actions = agent.act_explore(states, rng);
    const Vector rewards = gaussian_reward(kernel, actions, ys);
    for (Index i = 0; i < xs.size(); ++i) {
        buffer.push(Transition{states.row(i).transpose(), xs[i], actions[i], rewards[i], ys[i]});
    }

    UpdateReport report;
    report.mean_batch_reward = rewards.mean();

    // Learn: critic first, then actor, on a batch replayed from the buffer.
    for (int round = 0; round < opts.train_batches; ++round) {
        SampleBatch batch = opts.per_enabled ? buffer.sample(opts.batch_size, opts.beta, rng)
                                             : buffer.sample_uniform(opts.batch_size, rng);
        Vector weights = batch.weights; // uniform sampling already yields all ones
        if (opts.per_enabled && !opts.per_weighted_is) weights.setOnes();
        CriticUpdateResult critic =
            agent.critic_update(batch.states, batch.actions, batch.rewards, weights);
        if (opts.per_enabled) {
            buffer.update_priorities(batch.indices, critic.abs_residuals);
        }
        report.critic_loss += critic.loss;
        report.mean_abs_critic_residual += critic.abs_residuals.mean();
        report.actor_loss += agent.actor_update(batch.states);
    }
    report.critic_loss /= opts.train_batches;
    report.mean_abs_critic_residual /= opts.train_batches;
    report.actor_loss /= opts.train_batches;
    return report;
}

} // namespace banditreg
