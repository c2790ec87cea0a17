#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "banditreg/svg_plot.hpp"

using namespace banditreg;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

EvalTable sample_table() {
    EvalTable table;
    table.xs = make_grid(-2.0 * M_PI, 2.0 * M_PI, 201);
    table.y_true = table.xs.array().sin().matrix();
    table.y_pred = (table.xs.array() * 0.2).tanh().matrix();
    table.abs_err = (table.y_pred - table.y_true).cwiseAbs();
    table.reward = (-table.abs_err.array().square() / 0.08).exp().matrix();
    table.mse = table.abs_err.array().square().mean();
    return table;
}

} // namespace

TEST_CASE("prediction.svg holds exactly two polylines plus axes") {
    const auto dir = std::filesystem::temp_directory_path() / "banditreg_svg_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "prediction.svg";
    write_prediction_svg(path.string(), sample_table(), -M_PI, M_PI);

    const std::string svg = slurp(path);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    CHECK(count_occurrences(svg, "<line") >= 2); // the two axes
    CHECK(count_occurrences(svg, "<svg") == 1);
    CHECK(count_occurrences(svg, "</svg>") == 1);
    // Every opened group closes.
    CHECK(count_occurrences(svg, "<g") == count_occurrences(svg, "</g>"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("error.svg labels its y extent with the max abs error") {
    const auto dir = std::filesystem::temp_directory_path() / "banditreg_svg_test2";
    std::filesystem::create_directories(dir);
    const auto path = dir / "error.svg";
    const EvalTable table = sample_table();
    write_error_svg(path.string(), table);

    const std::string svg = slurp(path);
    std::smatch match;
    REQUIRE(std::regex_search(svg, match,
                              std::regex("id=\"y-max\"[^>]*>([^<]+)</text>")));
    const double labeled = std::stod(match[1].str());
    CHECK(labeled == doctest::Approx(table.abs_err.maxCoeff()).epsilon(1e-5));
    std::filesystem::remove_all(dir);
}

TEST_CASE("losses.svg draws critic and actor series") {
    const auto dir = std::filesystem::temp_directory_path() / "banditreg_svg_test3";
    std::filesystem::create_directories(dir);
    const auto path = dir / "losses.svg";
    std::vector<MetricsRow> metrics;
    for (int e = 0; e < 20; ++e) {
        MetricsRow row;
        row.epoch = e;
        row.critic_loss = 0.5 / (1.0 + e);
        row.actor_loss = -0.1 * e;
        metrics.push_back(row);
    }
    write_losses_svg(path.string(), metrics);
    const std::string svg = slurp(path);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    CHECK(svg.find("critic_loss") != std::string::npos);
    CHECK(svg.find("actor_loss") != std::string::npos);
    std::filesystem::remove_all(dir);
}
