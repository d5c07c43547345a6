#pragma once

#include "silverkite/evaluate.hpp"
#include "silverkite/forecast.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace silverkite {

// Flat `key = value` text with dotted keys; '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string &text);
std::map<std::string, std::string> parse_config_file(const std::string &path);

// Preset parameter bundles; explicit keys always win over the template.
const std::map<std::string, std::map<std::string, std::string>> &model_templates();
std::string default_template_for(const Frequency &freq);

struct CliSetup {
	std::string input;
	std::string output_dir = ".";
	std::string template_name;
	ForecastConfig forecast;

	int backtest_k = 10;
	int backtest_period = 1;
	WindowMode backtest_window = WindowMode::expanding;
	std::optional<std::int64_t> backtest_train_length;
	std::optional<std::int64_t> backtest_min_train;

	std::vector<std::string> explore_periods; // empty = derive from the data
};

// Validates keys (unknown keys are rejected by name), applies the template,
// resolves holidays into events, and fills frequency-dependent defaults.
CliSetup resolve_setup(const std::map<std::string, std::string> &entries, const Frequency &freq,
                       const std::vector<std::string> &regressor_names);

// Minimum train length for backtests: two cycles of the longest configured
// seasonality, in grid steps.
std::int64_t default_min_train_length(const ForecastConfig &config, const Frequency &freq);

} // namespace silverkite
