#pragma once

#include "silverkite/calendar.hpp"
#include "silverkite/series.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace silverkite {

enum class GrowthFunc { linear, sqrt, quadratic };

double growth_value(GrowthFunc f, double t);
std::string growth_func_name(GrowthFunc f);

struct GrowthSpec {
	GrowthFunc func = GrowthFunc::linear;
	std::vector<Timestamp> changepoints; // strictly increasing, inside training range
};

// Named period tags carry fixed anchors: daily = midnight, weekly =
// Monday 00:00, yearly = Jan 1. A custom period is measured in grid units
// from the training start.
struct SeasonalitySpec {
	std::string tag;                  // "daily", "weekly", "yearly" or custom
	int order = 1;                    // Fourier order M
	double period_units = 0.0;        // > 0 for custom periods
	std::vector<Timestamp> changepoints;

	bool is_named() const { return period_units <= 0.0; }
};

SeasonalitySpec daily_seasonality(int order);
SeasonalitySpec weekly_seasonality(int order);
SeasonalitySpec yearly_seasonality(int order);

struct EventSpec {
	std::string name;                 // sanitized into column names
	std::vector<Timestamp> dates;     // calendar days (midnight timestamps)
	int pre_days = 0;
	int post_days = 0;
};

struct LagSpec {
	std::vector<int> lags;
	std::vector<std::vector<int>> agg_lags; // each set averaged into one column

	bool empty() const { return lags.empty() && agg_lags.empty(); }
	int max_order() const;
	int min_order() const; // 0 when empty
};

enum class RegressorMode { future_provided, lagged };

struct RegressorSpec {
	std::string name;
	RegressorMode mode = RegressorMode::future_provided;
	int lag = 0; // used when mode == lagged
};

struct InteractionSpec {
	std::string left;  // glob patterns over generated column names, '*' wildcard
	std::string right;
};

enum class ColumnGroup {
	intercept,
	trend,
	seasonality,
	events, // holiday/event indicators and calendar-boundary indicators
	autoregression,
	regressors,
	interactions,
};

struct ColumnInfo {
	std::string name;
	ColumnGroup group = ColumnGroup::events;
	std::string season_tag; // set for seasonality columns
};

struct NamedColumns {
	std::vector<ColumnInfo> columns;
	Eigen::MatrixXd values;
};

struct FeatureConfig {
	std::optional<GrowthSpec> growth;
	std::vector<SeasonalitySpec> seasonality;
	std::vector<EventSpec> events;
	std::vector<std::string> indicators; // subset of indicator_feature_names()
	LagSpec lags;
	std::vector<RegressorSpec> regressors;
	std::vector<InteractionSpec> interactions;
};

// Anchors shared by fit-time and predict-time featurization.
struct FeatureContext {
	Timestamp train_start = 0;
	Timestamp train_end = 0;
	Frequency freq;

	double t_units(Timestamp t) const { return grid_units_between(train_start, freq, t); }
};

struct DesignMatrix {
	std::vector<ColumnInfo> columns;
	Eigen::MatrixXd values;
	std::vector<Timestamp> grid;
	std::vector<std::uint8_t> usable; // 0 where lag warm-up left the row unusable
	// For interaction columns: indices of the two factor columns, so rows can
	// be re-evaluated after autoregressive cells change during prediction.
	std::vector<std::pair<Eigen::Index, Eigen::Index>> interaction_refs;
	Eigen::Index interaction_start = 0; // first interactions column, = ncols when none

	Eigen::Index ncols() const { return values.cols(); }
	Eigen::Index nrows() const { return values.rows(); }
	std::vector<std::string> names() const;
	Eigen::Index index_of(const std::string &name) const; // -1 when absent
	void refresh_interactions(Eigen::Index row);
};

// --- column builders -------------------------------------------------------

// tod, dow, is_weekend, dom, doy_frac plus month/quarter boundary indicators.
NamedColumns time_features(std::span<const Timestamp> grid);
const std::vector<std::string> &indicator_feature_names();

// sin(2 m pi d), cos(2 m pi d) for m = 1..order, named sin{m}_{tag}/cos{m}_{tag}.
NamedColumns fourier_terms(const Eigen::VectorXd &d, int order, const std::string &tag);

// Position of each grid point inside the spec's seasonal period, in [0, 1].
Eigen::VectorXd seasonal_fraction(std::span<const Timestamp> grid, const SeasonalitySpec &spec,
                                  const FeatureContext &ctx);

// growth_{f} plus hinge columns cp{i}_{f} = 1{t > t_i} (f(t) - f(t_i)).
NamedColumns growth_basis(std::span<const Timestamp> grid, const GrowthSpec &spec,
                          const FeatureContext &ctx);

// Base Fourier columns plus scp{k}_... indicator interactions per changepoint.
NamedColumns seasonality_cp_basis(std::span<const Timestamp> grid, const SeasonalitySpec &spec,
                                  const FeatureContext &ctx);

NamedColumns event_indicators(std::span<const Timestamp> grid, std::span<const EventSpec> specs);

// y_lag{r} and y_avglag_{...} columns; head entries are missing.
NamedColumns lag_features(std::span<const double> y, const LagSpec &spec);
// Lag cells for a single row at position idx of an extended target vector.
Eigen::VectorXd lag_row(std::span<const double> y_extended, std::size_t idx, const LagSpec &spec);

// '*' wildcard match over a literal pattern.
bool glob_match(std::string_view pattern, std::string_view text);

// Column index pairs produced by the interaction patterns, in emission order.
std::vector<std::pair<Eigen::Index, Eigen::Index>>
resolve_interactions(std::span<const ColumnInfo> columns, std::span<const InteractionSpec> specs);

NamedColumns interaction_terms(const NamedColumns &base, std::span<const InteractionSpec> specs);

// Assembles the full matrix in the fixed group order. Lag sources are
// extended vectors covering history + grid: row i maps to extended index
// history_len + i, so prediction grids can reach back into training values.
DesignMatrix build_design_matrix(std::span<const Timestamp> grid, const FeatureConfig &config,
                                 const FeatureContext &ctx, std::span<const double> y_extended,
                                 const std::map<std::string, std::vector<double>> &regressor_values,
                                 std::size_t history_len = 0);

std::string sanitize_name(std::string_view raw);

// Categorical feature encoder shared with the volatility model:
// dow, is_weekend, hour, month, dom.
int categorical_feature_value(const std::string &name, Timestamp t);

} // namespace silverkite
