#pragma once

#include "silverkite/features.hpp"
#include "silverkite/series.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace silverkite {

struct DetectionConfig {
	std::optional<Frequency> agg_target; // unset = default for the data frequency
	bool no_aggregation = false;
	int n_candidates = 100; // capped at half the (aggregated) length
	double end_exclusion_frac = 0.1;
	std::optional<double> min_distance_days; // default 14 (trend) / 30 (seasonality)
	double lambda_strength = 0.6;            // position on the lasso path, 0 = weakest
	int yearly_order = 6;                    // yearly control when detecting trend
};

// weekly for daily data, daily for hourly/minute, none for monthly/weekly.
std::optional<Frequency> default_detection_aggregation(const Frequency &freq);

struct TrendDetectionResult {
	std::vector<Timestamp> changepoints;
	std::vector<double> scores;        // |post-selection coefficient| per changepoint
	std::vector<double> fitted_trend;  // on the original grid, original scale
	int candidate_count = 0;
};

struct SeasonalityDetectionResult {
	std::map<std::string, std::vector<Timestamp>> changepoints; // by period tag
	std::map<std::string, std::vector<double>> scores;
	int candidate_count = 0;
};

struct ChangepointSet {
	std::vector<Timestamp> trend;
	std::map<std::string, std::vector<Timestamp>> seasonality;
	std::vector<double> trend_scores;
	std::map<std::string, std::vector<double>> seasonality_scores;
	int trend_candidates = 0;
	int seasonality_candidates = 0;
};

// Aggregates, places evenly spaced candidates outside the end-exclusion
// window, runs the two-stage weighted lasso on growth + candidate hinges with
// a yearly control, refits the selected support, and merges nearby survivors.
TrendDetectionResult detect_trend_changepoints(const TimeSeries &ts, const DetectionConfig &cfg);

// Same machinery on the de-trended series, over indicator-gated Fourier
// blocks; a candidate is kept when any coefficient in its block survives.
SeasonalityDetectionResult detect_seasonality_changepoints(const TimeSeries &ts,
                                                           std::span<const SeasonalitySpec> periods,
                                                           const DetectionConfig &cfg,
                                                           const TrendDetectionResult &trend);

// Greedy left-to-right: points chained closer than min_distance form a run;
// the largest |score| in each run survives, earliest on ties.
std::vector<Timestamp> merge_changepoints(std::span<const Timestamp> points,
                                          std::span<const double> scores,
                                          std::int64_t min_distance_seconds);

} // namespace silverkite
