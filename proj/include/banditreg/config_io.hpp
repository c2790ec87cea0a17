#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "banditreg/harness.hpp"

namespace banditreg {

// Resolved config as ordered key=value pairs. The same keys are accepted
// back by parse_config_*, so a snapshot round-trips to an identical config.
std::vector<std::pair<std::string, std::string>> config_to_keyvalues(const StageConfig& config);

void write_config_snapshot(const StageConfig& config, const std::string& path);

// Flat key=value text, '#' comments and blank lines allowed. Missing keys
// fall back to the stage-4 preset (or the preset named by a `stage` key).
// Unknown keys and malformed lines raise ConfigError naming the line.
StageConfig parse_config_text(std::istream& in);
StageConfig parse_config_file(const std::string& path);

} // namespace banditreg
