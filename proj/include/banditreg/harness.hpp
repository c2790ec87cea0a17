#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "banditreg/agent.hpp"
#include "banditreg/env.hpp"
#include "banditreg/replay.hpp"
#include "banditreg/types.hpp"

namespace banditreg {

// Complete hyperparameter bundle for one experiment run. stage_id 1..4 are
// the case-study presets; 0 marks a custom configuration.
struct StageConfig {
    int stage_id = 0;
    double train_lo = -M_PI;
    double train_hi = M_PI;
    double eval_lo = -2.0 * M_PI;
    double eval_hi = 2.0 * M_PI;
    int n_samples = 1000;
    double noise_std = 0.1;
    Featurizer featurizer;
    std::vector<int> actor_hidden = {128, 64};
    std::vector<int> critic_hidden = {128, 64};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    int batch_size = 64;
    int epochs = 500;
    double sigma_reward = 0.2;
    double exploration_noise_std = 0.1;
    bool per_enabled = false;
    PerConfig per;
    bool per_weighted_is = true;
    int train_batches_per_step = 1;
    int eval_points = 1201;
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

// Presets for the four case-study stages. Throws std::invalid_argument on an
// unknown id.
StageConfig stage_preset(int stage_id);

struct MetricsRow {
    int epoch = 0;
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double mean_reward = 0.0;
    double train_mse = 0.0;
    double eval_mse = 0.0;
};

struct EvalTable {
    Vector xs;
    Vector y_true;
    Vector y_pred;
    Vector abs_err;
    Vector reward;
    double mse = 0.0;
};

struct RunArtifacts {
    std::vector<MetricsRow> metrics; // one row per epoch
    EvalTable evaluation;            // final dense-grid evaluation
    Dataset dataset;
    StageConfig config;
    double wall_seconds = 0.0;
};

// Uniform inclusive linspace; points must be >= 2.
Vector make_grid(double lo, double hi, int points);

// Linear PER beta schedule over epochs; epoch 0 gets beta_start and the last
// epoch beta_end.
double beta_at_epoch(const PerConfig& per, int epoch, int total_epochs);

// Per grid point: y_pred = predictor(x), y_true = sin(x), abs_err, reward.
EvalTable evaluate(const std::function<double(double)>& predictor, const RewardKernel& kernel,
                   const Vector& grid);
EvalTable evaluate(const ActorCritic& agent, const Featurizer& featurizer,
                   const RewardKernel& kernel, const Vector& grid);

// Mean squared error of an evaluation table restricted to lo <= x <= hi.
double eval_mse_in_range(const EvalTable& table, double lo, double hi);

// Full training run: build dataset/agent/buffer, loop epochs of shuffled
// minibatch train_steps with PER beta annealing, record per-epoch metrics,
// and evaluate on the dense grid. Deterministic for a fixed config.
RunArtifacts run_stage(const StageConfig& config);

// Artifact files inside a per-run directory.
void write_run_artifacts(const RunArtifacts& artifacts, const std::string& dir);
void write_metrics_csv(const std::vector<MetricsRow>& metrics, const std::string& path);
void write_predictions_csv(const EvalTable& table, const std::string& path);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);
EvalTable read_predictions_csv(const std::string& path);

} // namespace banditreg
