#include "banditreg/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "banditreg/config_io.hpp"
#include "banditreg/rng.hpp"

namespace banditreg {

void StageConfig::validate() const {
    if (!(train_lo < train_hi)) throw ConfigError("train range must satisfy lo < hi");
    if (!(eval_lo < eval_hi)) throw ConfigError("eval range must satisfy lo < hi");
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
    if (featurizer.mode == FeatureMode::PositionalEncoding &&
        (featurizer.pe_dim < 2 || featurizer.pe_dim % 2 != 0)) {
        throw ConfigError("pe_dim must be even and >= 2");
    }
    if (actor_hidden.empty() || critic_hidden.empty()) {
        throw ConfigError("hidden layer lists must be non-empty");
    }
    for (int d : actor_hidden) {
        if (d < 1) throw ConfigError("actor hidden dims must be >= 1");
    }
    for (int d : critic_hidden) {
        if (d < 1) throw ConfigError("critic hidden dims must be >= 1");
    }
    if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw ConfigError("learning rates must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(sigma_reward > 0.0)) throw ConfigError("sigma_reward must be > 0");
    if (exploration_noise_std < 0.0) throw ConfigError("exploration_noise_std must be >= 0");
    if (per.capacity < 1) throw ConfigError("per_capacity must be >= 1");
    if (!(per.epsilon_priority > 0.0)) throw ConfigError("per_epsilon_priority must be > 0");
    if (per.alpha < 0.0) throw ConfigError("per_alpha must be >= 0");
    if (per.beta_start > per.beta_end) throw ConfigError("per_beta_start must be <= per_beta_end");
    if (train_batches_per_step < 1) throw ConfigError("train_batches_per_step must be >= 1");
    if (eval_points < 2) throw ConfigError("eval_points must be >= 2");
}

StageConfig stage_preset(int stage_id) {
    StageConfig c;
    c.stage_id = stage_id;
    switch (stage_id) {
        case 1:
            c.train_lo = -M_PI;
            c.train_hi = M_PI;
            c.eval_lo = -2.0 * M_PI;
            c.eval_hi = 2.0 * M_PI;
            c.actor_hidden = {128, 64};
            c.critic_hidden = {128, 64};
            c.per_enabled = false;
            c.featurizer.mode = FeatureMode::Raw;
            break;
        case 2:
            c.train_lo = -5.0 * M_PI;
            c.train_hi = 5.0 * M_PI;
            c.eval_lo = -6.0 * M_PI;
            c.eval_hi = 6.0 * M_PI;
            c.actor_hidden = {128, 64};
            c.critic_hidden = {128, 64};
            c.per_enabled = true;
            c.featurizer.mode = FeatureMode::Raw;
            break;
        case 3:
            c.train_lo = -5.0 * M_PI;
            c.train_hi = 5.0 * M_PI;
            c.eval_lo = -6.0 * M_PI;
            c.eval_hi = 6.0 * M_PI;
            c.actor_hidden = {256, 128, 64};
            c.critic_hidden = {256, 128, 64};
            c.per_enabled = true;
            c.featurizer.mode = FeatureMode::Raw;
            break;
        case 4:
            c.train_lo = -5.0 * M_PI;
            c.train_hi = 5.0 * M_PI;
            c.eval_lo = -6.0 * M_PI;
            c.eval_hi = 6.0 * M_PI;
            c.actor_hidden = {256, 128, 64};
            c.critic_hidden = {256, 128, 64};
            c.per_enabled = true;
            c.featurizer.mode = FeatureMode::PositionalEncoding;
            c.featurizer.pe_dim = 16;
            break;
        default:
            throw std::invalid_argument("stage_preset: stage_id must be 1..4");
    }
    return c;
}

Vector make_grid(double lo, double hi, int points) {
    if (points < 2) throw std::invalid_argument("make_grid: points must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("make_grid: lo must be < hi");
    Vector grid(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    return grid;
}

double beta_at_epoch(const PerConfig& per, int epoch, int total_epochs) {
    if (total_epochs <= 1) return per.beta_end;
    const double frac = static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
    return per.beta_start + (per.beta_end - per.beta_start) * std::min(frac, 1.0);
}

EvalTable evaluate(const std::function<double(double)>& predictor, const RewardKernel& kernel,
                   const Vector& grid) {
    if (grid.size() == 0) throw std::invalid_argument("evaluate: empty grid");
    EvalTable table;
    table.xs = grid;
    table.y_true = grid.array().sin().matrix();
    table.y_pred.resize(grid.size());
    for (Index i = 0; i < grid.size(); ++i) {
        table.y_pred[i] = predictor(grid[i]);
    }
    table.abs_err = (table.y_pred - table.y_true).cwiseAbs();
    table.reward = gaussian_reward(kernel, table.y_pred, table.y_true);
    table.mse = table.abs_err.array().square().mean();
    return table;
}

EvalTable evaluate(const ActorCritic& agent, const Featurizer& featurizer,
                   const RewardKernel& kernel, const Vector& grid) {
    if (grid.size() == 0) throw std::invalid_argument("evaluate: empty grid");
    EvalTable table;
    table.xs = grid;
    table.y_true = grid.array().sin().matrix();
    table.y_pred = agent.act(featurize(featurizer, grid));
    table.abs_err = (table.y_pred - table.y_true).cwiseAbs();
    table.reward = gaussian_reward(kernel, table.y_pred, table.y_true);
    table.mse = table.abs_err.array().square().mean();
    return table;
}

double eval_mse_in_range(const EvalTable& table, double lo, double hi) {
    double sum = 0.0;
    long count = 0;
    for (Index i = 0; i < table.xs.size(); ++i) {
        if (table.xs[i] >= lo && table.xs[i] <= hi) {
            sum += table.abs_err[i] * table.abs_err[i];
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("eval_mse_in_range: no grid points in range");
    return sum / static_cast<double>(count);
}

RunArtifacts run_stage(const StageConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RunArtifacts artifacts;
    artifacts.config = config;
    artifacts.dataset = sample_dataset(config.train_lo, config.train_hi, config.n_samples,
                                       config.noise_std, derive_seed(config.seed, 10));

    ActorCriticConfig agent_config;
    agent_config.feature_dim = config.featurizer.dim();
    agent_config.actor_hidden = config.actor_hidden;
    agent_config.critic_hidden = config.critic_hidden;
    agent_config.actor_lr = config.actor_lr;
    agent_config.critic_lr = config.critic_lr;
    agent_config.exploration_noise_std = config.exploration_noise_std;
    agent_config.seed = derive_seed(config.seed, 20);
    ActorCritic agent(agent_config);

    PerConfig per = config.per;
    ReplayBuffer buffer(per);
    const RewardKernel kernel{config.sigma_reward};
    Rng rng(derive_seed(config.seed, 30));

    const Vector grid = make_grid(config.eval_lo, config.eval_hi, config.eval_points);
    const Matrix grid_features = featurize(config.featurizer, grid);
    const Vector grid_truth = grid.array().sin().matrix();
    const Matrix train_features = featurize(config.featurizer, artifacts.dataset.xs);

    TrainStepOptions opts;
    opts.batch_size = static_cast<std::size_t>(config.batch_size);
    opts.per_enabled = config.per_enabled;
    opts.per_weighted_is = config.per_weighted_is;
    opts.train_batches = config.train_batches_per_step;

    const int n = config.n_samples;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    artifacts.metrics.reserve(config.epochs);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        opts.beta = beta_at_epoch(per, epoch, config.epochs);

        // Seeded Fisher-Yates shuffle of the dataset order.
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
            std::swap(order[i], order[j]);
        }

        MetricsRow row;
        row.epoch = epoch;
        int steps = 0;
        for (int begin = 0; begin < n; begin += config.batch_size) {
            const int count = std::min(config.batch_size, n - begin);
            Vector xs(count), ys(count);
            for (int i = 0; i < count; ++i) {
                xs[i] = artifacts.dataset.xs[order[begin + i]];
                ys[i] = artifacts.dataset.ys[order[begin + i]];
            }
            const UpdateReport report =
                train_step(agent, buffer, kernel, xs, ys, config.featurizer, opts, rng);
            if (!std::isfinite(report.critic_loss) || !std::isfinite(report.actor_loss)) {
                throw NumericalError("run_stage: non-finite loss at epoch " +
                                     std::to_string(epoch) + ", step " + std::to_string(steps));
            }
            row.critic_loss += report.critic_loss;
            row.actor_loss += report.actor_loss;
            row.mean_reward += report.mean_batch_reward;
            ++steps;
        }
        row.critic_loss /= steps;
        row.actor_loss /= steps;
        row.mean_reward /= steps;

        const Vector train_pred = agent.act(train_features);
        row.train_mse = (train_pred - artifacts.dataset.ys).array().square().mean();
        const Vector eval_pred = agent.act(grid_features);
        row.eval_mse = (eval_pred - grid_truth).array().square().mean();
        artifacts.metrics.push_back(row);
    }

    artifacts.evaluation = evaluate(agent, config.featurizer, kernel, grid);
    artifacts.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return artifacts;
}

namespace {

// Shortest text that parses back to the same double.
std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

void write_metrics_csv(const std::vector<MetricsRow>& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path);
    out << "epoch,critic_loss,actor_loss,mean_reward,train_mse,eval_mse\n";
    for (const auto& row : metrics) {
        out << row.epoch << ',' << format_double(row.critic_loss) << ','
            << format_double(row.actor_loss) << ',' << format_double(row.mean_reward) << ','
            << format_double(row.train_mse) << ',' << format_double(row.eval_mse) << '\n';
    }
}

void write_predictions_csv(const EvalTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_predictions_csv: cannot open " + path);
    out << "x,y_true,y_pred,abs_err,reward\n";
    for (Index i = 0; i < table.xs.size(); ++i) {
        out << format_double(table.xs[i]) << ',' << format_double(table.y_true[i]) << ','
            << format_double(table.y_pred[i]) << ',' << format_double(table.abs_err[i]) << ','
            << format_double(table.reward[i]) << '\n';
    }
}

void write_run_artifacts(const RunArtifacts& artifacts, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_metrics_csv(artifacts.metrics, (base / "metrics.csv").string());
    write_predictions_csv(artifacts.evaluation, (base / "predictions.csv").string());
    write_config_snapshot(artifacts.config, (base / "config.txt").string());
    write_dataset_csv(artifacts.dataset, (base / "dataset.csv").string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_metrics_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "epoch,critic_loss,actor_loss,mean_reward,train_mse,eval_mse") {
        throw std::runtime_error("read_metrics_csv: unexpected header in " + path);
    }
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw std::runtime_error("read_metrics_csv: malformed row in " + path);
        }
        MetricsRow row;
        row.epoch = std::stoi(fields[0]);
        row.critic_loss = std::stod(fields[1]);
        row.actor_loss = std::stod(fields[2]);
        row.mean_reward = std::stod(fields[3]);
        row.train_mse = std::stod(fields[4]);
        row.eval_mse = std::stod(fields[5]);
        rows.push_back(row);
    }
    return rows;
}

EvalTable read_predictions_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_predictions_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "x,y_true,y_pred,abs_err,reward") {
        throw std::runtime_error("read_predictions_csv: unexpected header in " + path);
    }
    std::vector<double> xs, y_true, y_pred, abs_err, reward;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw std::runtime_error("read_predictions_csv: malformed row in " + path);
        }
        xs.push_back(std::stod(fields[0]));
        y_true.push_back(std::stod(fields[1]));
        y_pred.push_back(std::stod(fields[2]));
        abs_err.push_back(std::stod(fields[3]));
        reward.push_back(std::stod(fields[4]));
    }
    EvalTable table;
    const auto n = static_cast<Index>(xs.size());
    table.xs = Eigen::Map<const Vector>(xs.data(), n);
    table.y_true = Eigen::Map<const Vector>(y_true.data(), n);
    table.y_pred = Eigen::Map<const Vector>(y_pred.data(), n);
    table.abs_err = Eigen::Map<const Vector>(abs_err.data(), n);
    table.reward = Eigen::Map<const Vector>(reward.data(), n);
    table.mse = n > 0 ? table.abs_err.array().square().mean() : 0.0;
    return table;
}

} // namespace banditreg
