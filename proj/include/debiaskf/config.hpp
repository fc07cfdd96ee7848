#pragma once

// Strict key-value scenario config: `key = value` lines, `#` comments.
// Unknown keys are rejected with their line number; repeated `transmitter`
// and `target` lines accumulate. See ScenarioConfig::to_text for the
// canonical form.

#include <string>

#include "debiaskf/scenario.hpp"

namespace debiaskf {

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);
ScenarioConfig load_config_file(const std::string& path);  // ConfigError

}  // namespace debiaskf
