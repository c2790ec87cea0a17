#include <doctest.h>

#include <sstream>

#include "banditreg/config_io.hpp"

using namespace banditreg;

TEST_CASE("empty config falls back to the stage-4 preset") {
    std::stringstream ss("");
    const StageConfig c = parse_config_text(ss);
    const StageConfig preset = stage_preset(4);
    CHECK(c.stage_id == 0); // custom, but with stage-4 values
    CHECK(c.train_lo == preset.train_lo);
    CHECK(c.actor_hidden == preset.actor_hidden);
    CHECK(c.featurizer.mode == FeatureMode::PositionalEncoding);
    CHECK(c.featurizer.pe_dim == 16);
    CHECK(c.epochs == 500);
}

TEST_CASE("keys override the base preset") {
    std::stringstream ss(
        "stage=2\n"
        "epochs=10\n"
        "seed=99\n"
        "actor_hidden=32,16\n"
        "featurizer=pe\n"
        "pe_dim=8\n");
    const StageConfig c = parse_config_text(ss);
    CHECK(c.stage_id == 2);
    CHECK(c.epochs == 10);
    CHECK(c.seed == 99);
    CHECK(c.actor_hidden == std::vector<int>{32, 16});
    CHECK(c.featurizer.mode == FeatureMode::PositionalEncoding);
    CHECK(c.featurizer.pe_dim == 8);
    CHECK(c.per_enabled == true); // inherited from the stage-2 preset
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
    std::stringstream ss(
        "# a comment\n"
        "\n"
        "  sigma_reward = 0.2  \n"
        "batch_size=8\n");
    const StageConfig c = parse_config_text(ss);
    CHECK(c.sigma_reward == doctest::Approx(0.2));
    CHECK(c.batch_size == 8);
}

TEST_CASE("sigma_reward round-trips through a snapshot") {
    StageConfig c = stage_preset(4);
    c.sigma_reward = 0.2;
    c.seed = 123;

    std::string text;
    for (const auto& [key, value] : config_to_keyvalues(c)) {
        text += key + "=" + value + "\n";
    }
    CHECK(text.find("sigma_reward=0.2") != std::string::npos);

    std::stringstream ss(text);
    const StageConfig back = parse_config_text(ss);
    CHECK(back.sigma_reward == c.sigma_reward);
    CHECK(back.seed == c.seed);
    CHECK(back.stage_id == c.stage_id);
    CHECK(back.train_lo == c.train_lo);
    CHECK(back.train_hi == c.train_hi);
    CHECK(back.eval_lo == c.eval_lo);
    CHECK(back.eval_hi == c.eval_hi);
    CHECK(back.actor_hidden == c.actor_hidden);
    CHECK(back.critic_hidden == c.critic_hidden);
    CHECK(back.per.alpha == c.per.alpha);
    CHECK(back.per.epsilon_priority == c.per.epsilon_priority);
    CHECK(back.per_weighted_is == c.per_weighted_is);
    CHECK(back.eval_points == c.eval_points);
}

TEST_CASE("non-numeric value names the key") {
    std::stringstream ss("epochs=abc\n");
    try {
        parse_config_text(ss);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("epochs") != std::string::npos);
        CHECK(e.line == 1);
    }
}

TEST_CASE("malformed line names the line number") {
    std::stringstream ss("epochs=5\nthis is not a key value pair\n");
    try {
        parse_config_text(ss);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected") {
    std::stringstream ss("learning_rate=0.5\n");
    CHECK_THROWS_AS(parse_config_text(ss), ConfigError);
}

TEST_CASE("stage key outside 1..4 is rejected") {
    std::stringstream ss("stage=7\n");
    CHECK_THROWS_AS(parse_config_text(ss), ConfigError);
    std::stringstream custom("stage=custom\n");
    CHECK(parse_config_text(custom).stage_id == 0);
}

TEST_CASE("locale-independent decimal parsing") {
    std::stringstream ss("actor_lr=1e-4\ncritic_lr=0.001\n");
    const StageConfig c = parse_config_text(ss);
    CHECK(c.actor_lr == doctest::Approx(1e-4));
    CHECK(c.critic_lr == doctest::Approx(1e-3));
    std::stringstream bad("actor_lr=0,001\n"); // comma decimals never accepted
    CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
}
