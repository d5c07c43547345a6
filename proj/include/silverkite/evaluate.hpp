#pragma once

#include "silverkite/series.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace silverkite {

enum class WindowMode { expanding, moving };

struct SplitPlan {
	struct Split {
		std::int64_t train_start = 0;
		std::int64_t train_end = 0; // inclusive
		std::int64_t test_start = 0;
		std::int64_t test_end = 0; // inclusive
	};
	std::vector<Split> splits; // chronological by test_start
	int horizon = 1;
	int period = 1;
	WindowMode window = WindowMode::expanding;
	std::int64_t train_length = 0; // moving windows only
};

// Test starts are n - horizon - i*period for i = 0..K-1; the latest split
// always ends at the final index.
SplitPlan make_rolling_splits(std::int64_t n, int horizon, int period, int k, WindowMode window,
                              std::optional<std::int64_t> moving_length = std::nullopt,
                              std::int64_t min_train_length = 1);

// Out-of-sample MAE over the m-seasonal naive's in-sample MAE.
double mase(std::span<const double> train_actuals, std::span<const double> test_actuals,
            std::span<const double> test_forecasts, int m);
// Percent errors; throw ZeroDenominator naming the offending index.
double mape(std::span<const double> test_actuals, std::span<const double> test_forecasts);
double smape(std::span<const double> test_actuals, std::span<const double> test_forecasts);

// Seasonal naive period by data frequency: 24 hourly, 7 daily, 12 monthly.
int seasonal_naive_period(const Frequency &freq);

struct BenchmarkReport {
	struct Row {
		std::int64_t split_idx = 0;
		Timestamp test_start = 0;
		int horizon_step = 0; // 1-based
		double actual = 0.0;
		double forecast = 0.0;
		double abs_err = 0.0;
		bool scored = true; // false for imputed test points
	};
	std::vector<Row> rows;

	struct SplitScore {
		std::int64_t split_idx = 0;
		Timestamp test_start = 0;
		double mase = 0.0, mape = 0.0, smape = 0.0;
		bool mase_ok = false, mape_ok = false, smape_ok = false;
		bool failed = false;
		std::string error;
		double runtime_seconds = 0.0;
	};
	std::vector<SplitScore> splits;

	int horizon = 1;
	int n_failed = 0;
	double total_runtime_seconds = 0.0;

	// Arithmetic mean over splits where the metric is defined.
	double aggregate_mase() const;
	double aggregate_mape() const;
	double aggregate_smape() const;
	int n_scored_mase() const;

	std::string detail_csv() const;
	std::string summary_csv() const;
};

// Fit on a training slice, forecast `horizon` values past its end.
using Forecaster = std::function<std::vector<double>(const TimeSeries &train, int horizon)>;

// `imputed` flags grid points excluded from error sums (originally missing).
BenchmarkReport run_backtest_with(const TimeSeries &ts, const SplitPlan &plan,
                                  const Forecaster &forecaster, int seasonal_m,
                                  std::span<const std::uint8_t> imputed);

} // namespace silverkite
