#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "banditreg/config_io.hpp"
#include "banditreg/harness.hpp"
#include "banditreg/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace banditreg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;     // bad flags or config
constexpr int kExitNumerical = 3; // training produced a non-finite value

std::string output_root(const std::string& out_flag) {
    if (!out_flag.empty()) return out_flag;
    if (const char* env = std::getenv("BANDIT_REGRESSOR_OUT"); env && *env) return env;
    return "runs";
}

StageConfig resolve_config(int stage, const std::string& config_path, bool seed_given,
                           std::uint64_t seed) {
    StageConfig config;
    if (!config_path.empty() && stage > 0) {
        throw ConfigError("--stage and --config are mutually exclusive");
    }
    if (!config_path.empty()) {
        config = parse_config_file(config_path);
    } else if (stage > 0) {
        config = stage_preset(stage);
    } else {
        throw ConfigError("either --stage or --config is required");
    }
    if (seed_given) config.seed = seed;
    config.validate();
    return config;
}

std::string run_dir_name(const StageConfig& config) {
    const std::string base =
        config.stage_id >= 1 ? "stage" + std::to_string(config.stage_id) : "custom";
    return base + "-seed" + std::to_string(config.seed);
}

int cmd_train(int stage, const std::string& config_path, bool seed_given, std::uint64_t seed,
              const std::string& out_flag) {
    const StageConfig config = resolve_config(stage, config_path, seed_given, seed);
    fs::path dir = fs::path(output_root(out_flag));
    if (out_flag.empty()) dir /= run_dir_name(config);

    const RunArtifacts artifacts = run_stage(config);
    write_run_artifacts(artifacts, dir.string());
    std::printf("run_dir=%s\n", dir.string().c_str());
    std::printf("final_eval_mse=%.6g\n", artifacts.evaluation.mse);
    std::printf("wall_seconds=%.3f\n", artifacts.wall_seconds);
    return kExitOk;
}

int cmd_sweep(int stage, const std::string& config_path, int seeds, const std::string& out_flag,
              int jobs) {
    if (seeds < 1) throw ConfigError("--seeds must be >= 1");
    const StageConfig base = resolve_config(stage, config_path, false, 0);

    fs::path root = fs::path(output_root(out_flag));
    if (out_flag.empty()) {
        root /= "sweep-" + (base.stage_id >= 1 ? "stage" + std::to_string(base.stage_id)
                                               : std::string("custom"));
    }
    fs::create_directories(root);

    struct SeedResult {
        double mse;
        double wall;
    };
    std::vector<SeedResult> results(seeds);

    const int workers =
        std::max(1, std::min(jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency()),
                             seeds));
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (int s = next.fetch_add(1); s < seeds; s = next.fetch_add(1)) {
                StageConfig config = base;
                config.seed = static_cast<std::uint64_t>(s);
                const RunArtifacts artifacts = run_stage(config);
                write_run_artifacts(artifacts, (root / ("seed" + std::to_string(s))).string());
                results[s] = {artifacts.evaluation.mse, artifacts.wall_seconds};
            }
        }));
    }
    for (auto& f : futures) f.get();

    std::ofstream summary(root / "summary.csv");
    if (!summary) throw std::runtime_error("cannot open summary.csv");
    summary << "seed,final_eval_mse,wall_clock_s\n";
    for (int s = 0; s < seeds; ++s) {
        char line[96];
        std::snprintf(line, sizeof(line), "%d,%.17g,%.3f\n", s, results[s].mse, results[s].wall);
        summary << line;
    }
    std::printf("sweep_dir=%s\nseeds=%d\n", root.string().c_str(), seeds);
    return kExitOk;
}

int cmd_eval(const std::string& run_dir, double lo, double hi, bool range_given) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "predictions.csv")) {
        throw ConfigError("missing predictions.csv in " + run_dir);
    }
    const EvalTable table = read_predictions_csv((dir / "predictions.csv").string());
    const double mse = range_given ? eval_mse_in_range(table, lo, hi) : table.mse;
    double max_err = 0.0;
    long points = 0;
    for (Index i = 0; i < table.xs.size(); ++i) {
        if (range_given && (table.xs[i] < lo || table.xs[i] > hi)) continue;
        max_err = std::max(max_err, table.abs_err[i]);
        ++points;
    }
    std::printf("points=%ld\n", points);
    std::printf("mse=%.6g\n", mse);
    std::printf("max_abs_err=%.6g\n", max_err);
    return kExitOk;
}

int cmd_plot(const std::string& run_dir) {
    const fs::path dir(run_dir);
    for (const char* name : {"predictions.csv", "metrics.csv", "config.txt"}) {
        if (!fs::exists(dir / name)) {
            throw ConfigError(std::string("missing ") + name + " in " + run_dir);
        }
    }
    const EvalTable table = read_predictions_csv((dir / "predictions.csv").string());
    const auto metrics = read_metrics_csv((dir / "metrics.csv").string());
    const StageConfig config = parse_config_file((dir / "config.txt").string());

    write_prediction_svg((dir / "prediction.svg").string(), table, config.train_lo,
                         config.train_hi);
    write_error_svg((dir / "error.svg").string(), table);
    if (!metrics.empty()) {
        write_losses_svg((dir / "losses.svg").string(), metrics);
        std::printf("wrote %s/{prediction,error,losses}.svg\n", run_dir.c_str());
    } else {
        std::printf("wrote %s/{prediction,error}.svg (no metric rows for losses.svg)\n",
                    run_dir.c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sine-regression-as-bandit experiment runner"};
    app.require_subcommand(1);

    int stage = 0;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_flag;
    int seeds = 5;
    int jobs = 0;
    std::string run_dir;
    double lo = 0.0, hi = 0.0;

    auto* train = app.add_subcommand("train", "Train one run (a stage preset or custom config)");
    train->add_option("--stage", stage, "Stage preset 1..4")->check(CLI::Range(1, 4));
    train->add_option("--config", config_path, "Flat key=value config file");
    auto* seed_opt = train->add_option("--seed", seed, "Run seed");
    train->add_option("--out", out_flag, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Train several seeds and summarize");
    sweep->add_option("--stage", stage, "Stage preset 1..4")->check(CLI::Range(1, 4));
    sweep->add_option("--config", config_path, "Flat key=value config file");
    sweep->add_option("--seeds", seeds, "Number of seeds (0..N-1)")->required();
    sweep->add_option("--out", out_flag, "Output directory");
    sweep->add_option("--jobs", jobs, "Parallel workers (default: hardware)");

    auto* eval = app.add_subcommand("eval", "Report MSE stats from a saved run");
    eval->add_option("--run", run_dir, "Run directory")->required();
    auto* lo_opt = eval->add_option("--lo", lo, "Restrict to x >= lo");
    auto* hi_opt = eval->add_option("--hi", hi, "Restrict to x <= hi");
    lo_opt->needs(hi_opt);
    hi_opt->needs(lo_opt);

    auto* plot = app.add_subcommand("plot", "Emit prediction/error/losses SVG plots for a run");
    plot->add_option("--run", run_dir, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (train->parsed()) {
            return cmd_train(stage, config_path, seed_opt->count() > 0, seed, out_flag);
        }
        if (sweep->parsed()) {
            return cmd_sweep(stage, config_path, seeds, out_flag, jobs);
        }
        if (eval->parsed()) {
            return cmd_eval(run_dir, lo, hi, lo_opt->count() > 0 && hi_opt->count() > 0);
        }
        if (plot->parsed()) {
            return cmd_plot(run_dir);
        }
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid arguments: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
