#pragma once

#include "silverkite/changepoint.hpp"
#include "silverkite/evaluate.hpp"
#include "silverkite/features.hpp"
#include "silverkite/series.hpp"
#include "silverkite/solvers.hpp"
#include "silverkite/volatility.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace silverkite {

enum class FitAlgorithm { ols, ridge, quantile };

struct FitSpec {
	FitAlgorithm algo = FitAlgorithm::ridge;
	std::optional<double> lambda; // fixed; unset => rolling-origin CV over cv_grid (ridge)
	std::vector<double> cv_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
	double quantile_q = 0.5;
};

enum class ArMode { plugin, simulate };

struct ForecastConfig {
	std::optional<GrowthSpec> growth;
	bool auto_changepoints = false; // detected points merge with manual ones
	bool auto_seasonality_changepoints = false;
	std::vector<SeasonalitySpec> seasonality;
	std::vector<EventSpec> events;
	std::vector<std::string> indicators;
	LagSpec lags;
	std::vector<RegressorSpec> regressors;
	std::vector<InteractionSpec> interactions;
	FitSpec fit;
	std::vector<AnomalyWindow> anomalies;
	int horizon = 1;
	double coverage = 0.95;
	std::vector<std::string> volatility_features;
	VolatilityMethod volatility_method = VolatilityMethod::gaussian;
	int volatility_min_group = 20;
	ArMode ar_mode = ArMode::plugin;
	int sim_paths = 50;
	std::uint64_t seed = 42;
	DetectionConfig detection;
};

struct ComponentBreakdown {
	std::vector<Timestamp> grid;
	// intercept, trend, seasonality_<tag>..., events, autoregression,
	// regressors, interactions — in that order, all always present.
	std::vector<std::pair<std::string, std::vector<double>>> groups;
	std::vector<double> total;
};

struct FittedForecastModel {
	ForecastConfig config;          // snapshot
	FeatureConfig feature_config;   // with resolved changepoints
	FeatureContext context;
	TimeSeries train;               // imputed training series
	std::vector<std::uint8_t> imputed; // originally missing or anomaly-masked
	DesignMatrix design;            // training design matrix
	LinearFit fit;
	ChangepointSet changepoints;
	VolatilityGroupTable volatility;
	std::map<std::string, std::vector<double>> regressors; // imputed, train grid
	double cv_lambda = 0.0;         // chosen by CV when applicable
};

struct ForecastResult {
	std::vector<Timestamp> grid;
	std::vector<double> forecast;
	std::vector<double> lower;
	std::vector<double> upper;
	ComponentBreakdown components;
};

FittedForecastModel fit(const TimeSeries &ts, const ForecastConfig &config,
                        const std::map<std::string, std::vector<double>> &regressors = {});

ForecastResult predict(const FittedForecastModel &model, int horizon,
                       const std::map<std::string, std::vector<double>> &future_regressors = {});

// Per-group contributions on the training grid; groups sum to the fitted values.
ComponentBreakdown decompose(const FittedForecastModel &model);

std::string summarize(const FittedForecastModel &model);

// Refits the configured model on every split of the plan.
BenchmarkReport run_backtest(const TimeSeries &ts, const ForecastConfig &config,
                             const SplitPlan &plan,
                             const std::map<std::string, std::vector<double>> &regressors = {});

// Aligns raw (timestamp, value) observations onto a canonical grid.
std::vector<double> align_to_grid(const TimeSeries &canonical, std::span<const Timestamp> raw_ts,
                                  std::span<const double> raw_values);

} // namespace silverkite
