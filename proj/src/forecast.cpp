#include "silverkite/forecast.hpp"

#include "silverkite/error.hpp"
#include "silverkite/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace silverkite {

namespace {

std::vector<std::vector<int>> feature_rows_for(const std::vector<std::string> &features,
                                               std::span<const Timestamp> grid) {
	std::vector<std::vector<int>> rows(grid.size());
	for (std::size_t i = 0; i < grid.size(); ++i) {
		rows[i].reserve(features.size());
		for (const std::string &f : features) {
			rows[i].push_back(categorical_feature_value(f, grid[i]));
		}
	}
	return rows;
}

Eigen::MatrixXd compact_rows(const Eigen::MatrixXd &X, const std::vector<std::size_t> &rows) {
	Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
	for (std::size_t i = 0; i < rows.size(); ++i) {
		out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
	}
	return out;
}

// 3-fold rolling-origin CV inside the usable training rows; in-matrix
// one-step scoring keeps the search cheap and deterministic.
double choose_ridge_lambda(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                           const Eigen::VectorXd &y, const std::vector<double> &grid) {
	const Eigen::Index n = X.rows();
	const Eigen::Index p = X.cols();
	const Eigen::Index v = std::max<Eigen::Index>(1, n / 10);
	const Eigen::Index first_val_start = n - 3 * v;
	if (grid.empty()) return 1.0;
	if (first_val_start < p + 2 || first_val_start < 10) {
		return grid[grid.size() / 2];
	}

	double best_lambda = grid.front();
	double best_score = std::numeric_limits<double>::infinity();
	for (const double lambda : grid) {
		double score = 0.0;
		for (int fold = 0; fold < 3; ++fold) {
			const Eigen::Index val_start = n - static_cast<Eigen::Index>(3 - fold) * v;
			const Eigen::Index val_len = fold == 2 ? n - val_start : v;
			LinearFit f = fit_ridge(X.topRows(val_start), names, y.head(val_start), lambda);
			const Eigen::VectorXd pred =
			    predict_linear(f, X.middleRows(val_start, val_len), names);
			score += (pred - y.segment(val_start, val_len)).cwiseAbs().mean();
		}
		if (score < best_score - 1e-12) {
			best_score = score;
			best_lambda = lambda;
		}
	}
	return best_lambda;
}

const std::vector<std::string> &component_group_order() {
	static const std::vector<std::string> order = {"events", "autoregression", "regressors",
	                                               "interactions"};
	return order;
}

ComponentBreakdown breakdown_from_rows(const FittedForecastModel &model,
                                       const DesignMatrix &design,
                                       const Eigen::MatrixXd &values) {
	ComponentBreakdown out;
	out.grid = design.grid;
	const std::size_t n = design.grid.size();

	// Coefficient per design column, zeros where the fit dropped nothing.
	Eigen::VectorXd coef = Eigen::VectorXd::Zero(design.ncols());
	for (Eigen::Index j = 0; j < design.ncols(); ++j) {
		const auto &c = design.columns[static_cast<std::size_t>(j)];
		if (c.group != ColumnGroup::intercept) coef[j] = model.fit.coefficient(c.name);
	}

	std::vector<std::string> season_tags;
	for (const auto &c : design.columns) {
		if (c.group == ColumnGroup::seasonality &&
		    std::find(season_tags.begin(), season_tags.end(), c.season_tag) == season_tags.end()) {
			season_tags.push_back(c.season_tag);
		}
	}

	auto group_sum = [&](auto &&pred) {
		std::vector<double> acc(n, 0.0);
		for (Eigen::Index j = 0; j < design.ncols(); ++j) {
			const auto &c = design.columns[static_cast<std::size_t>(j)];
			if (!pred(c) || coef[j] == 0.0) continue;
			for (std::size_t i = 0; i < n; ++i) {
				acc[i] += coef[j] * values(static_cast<Eigen::Index>(i), j);
			}
		}
		return acc;
	};

	out.groups.emplace_back("intercept",
	                        std::vector<double>(n, model.fit.has_intercept ? model.fit.intercept : 0.0));
	out.groups.emplace_back("trend", group_sum([](const ColumnInfo &c) {
		return c.group == ColumnGroup::trend;
	}));
	for (const std::string &tag : season_tags) {
		out.groups.emplace_back("seasonality_" + tag, group_sum([&](const ColumnInfo &c) {
			return c.group == ColumnGroup::seasonality && c.season_tag == tag;
		}));
	}
	for (const std::string &gname : component_group_order()) {
		const ColumnGroup g = gname == "events"        ? ColumnGroup::events
		                      : gname == "autoregression" ? ColumnGroup::autoregression
		                      : gname == "regressors"     ? ColumnGroup::regressors
		                                                  : ColumnGroup::interactions;
		out.groups.emplace_back(gname, group_sum([g](const ColumnInfo &c) { return c.group == g; }));
	}

	out.total.assign(n, 0.0);
	for (const auto &[name, series] : out.groups) {
		for (std::size_t i = 0; i < n; ++i) out.total[i] += series[i];
	}
	return out;
}

} // namespace

std::vector<double> align_to_grid(const TimeSeries &canonical, std::span<const Timestamp> raw_ts,
                                  std::span<const double> raw_values) {
	std::vector<double> out(canonical.size(), kMissing);
	for (std::size_t i = 0; i < raw_ts.size(); ++i) {
		const std::int64_t s = steps_between(canonical.start, canonical.freq, raw_ts[i]);
		if (s >= 0 && s < static_cast<std::int64_t>(canonical.size())) {
			out[static_cast<std::size_t>(s)] = raw_values[i];
		}
	}
	return out;
}

FittedForecastModel fit(const TimeSeries &ts, const ForecastConfig &config,
                        const std::map<std::string, std::vector<double>> &regressors) {
	if (!(config.coverage > 0.0 && config.coverage < 1.0)) {
		fail(errc::bad_config, "coverage must lie in (0,1)");
	}
	if (config.horizon < 1) fail(errc::horizon_non_positive, "horizon must be >= 1");

	FittedForecastModel model;
	model.config = config;

	const TimeSeries masked = mask_anomalies(ts, config.anomalies);
	ImputeResult imp = impute_linear(masked);
	model.train = std::move(imp.series);
	model.imputed = std::move(imp.imputed);
	model.context = FeatureContext{model.train.start, model.train.end_timestamp(), model.train.freq};

	// Regressors imputed on the training grid.
	for (const RegressorSpec &reg : config.regressors) {
		auto it = regressors.find(reg.name);
		if (it == regressors.end()) {
			fail(errc::bad_config, "regressor '" + reg.name + "' not present in the input");
		}
		if (it->second.size() != model.train.size()) {
			fail(errc::bad_data, "regressor '" + reg.name + "' must align with the series grid");
		}
		TimeSeries rts{model.train.start, model.train.freq, it->second};
		model.regressors[reg.name] = impute_linear(rts).series.values;
	}

	// Changepoints: manual, detected, or both.
	std::optional<GrowthSpec> growth = config.growth;
	if (config.auto_changepoints && !growth) growth = GrowthSpec{};
	if (config.auto_changepoints) {
		TrendDetectionResult det = detect_trend_changepoints(model.train, config.detection);
		model.changepoints.trend_candidates = det.candidate_count;
		std::set<Timestamp> merged(growth->changepoints.begin(), growth->changepoints.end());
		merged.insert(det.changepoints.begin(), det.changepoints.end());
		growth->changepoints.assign(merged.begin(), merged.end());
		model.changepoints.trend = det.changepoints;
		model.changepoints.trend_scores = det.scores;

		if (config.auto_seasonality_changepoints && !config.seasonality.empty()) {
			SeasonalityDetectionResult sdet = detect_seasonality_changepoints(
			    model.train, config.seasonality, config.detection, det);
			model.changepoints.seasonality = sdet.changepoints;
			model.changepoints.seasonality_scores = sdet.scores;
			model.changepoints.seasonality_candidates = sdet.candidate_count;
		}
	} else if (growth) {
		model.changepoints.trend = growth->changepoints;
	}

	FeatureConfig fc;
	fc.growth = growth;
	fc.seasonality = config.seasonality;
	for (auto &s : fc.seasonality) {
		auto det = model.changepoints.seasonality.find(s.tag);
		if (det != model.changepoints.seasonality.end()) {
			std::set<Timestamp> merged(s.changepoints.begin(), s.changepoints.end());
			merged.insert(det->second.begin(), det->second.end());
			s.changepoints.assign(merged.begin(), merged.end());
		}
	}
	fc.events = config.events;
	fc.indicators = config.indicators;
	fc.lags = config.lags;
	fc.regressors = config.regressors;
	fc.interactions = config.interactions;
	model.feature_config = fc;

	const std::vector<Timestamp> grid = model.train.grid();
	model.design = build_design_matrix(grid, fc, model.context, model.train.values,
	                                   model.regressors, 0);

	std::vector<std::size_t> usable;
	for (std::size_t i = 0; i < model.design.usable.size(); ++i) {
		if (model.design.usable[i]) usable.push_back(i);
	}
	const Eigen::Index p = model.design.ncols();
	if (config.fit.algo == FitAlgorithm::ols) {
		if (static_cast<Eigen::Index>(usable.size()) < p) {
			fail(errc::insufficient_history, "OLS needs at least as many usable rows as columns");
		}
	} else if (usable.size() < 10) {
		fail(errc::insufficient_history, "need at least 10 usable rows");
	}

	Eigen::MatrixXd Xu = compact_rows(model.design.values, usable);
	Eigen::VectorXd yu(static_cast<Eigen::Index>(usable.size()));
	for (std::size_t i = 0; i < usable.size(); ++i) {
		yu[static_cast<Eigen::Index>(i)] = model.train.values[usable[i]];
	}
	const std::vector<std::string> names = model.design.names();

	switch (config.fit.algo) {
	case FitAlgorithm::ols:
		model.fit = fit_ols(Xu, names, yu);
		break;
	case FitAlgorithm::ridge: {
		double lambda = config.fit.lambda.value_or(-1.0);
		if (lambda < 0.0) {
			lambda = choose_ridge_lambda(Xu, names, yu, config.fit.cv_grid);
			model.cv_lambda = lambda;
		}
		model.fit = fit_ridge(Xu, names, yu, lambda);
		break;
	}
	case FitAlgorithm::quantile:
		model.fit = fit_quantile(Xu, names, yu, config.fit.quantile_q,
		                         config.fit.lambda.value_or(0.0));
		break;
	}

	// Volatility on residuals of usable, non-imputed rows.
	std::vector<double> resid;
	std::vector<Timestamp> resid_ts;
	{
		const Eigen::VectorXd fitted_all = predict_linear(model.fit, model.design.values, names);
		for (std::size_t i = 0; i < model.train.size(); ++i) {
			if (!model.design.usable[i] || model.imputed[i]) continue;
			resid.push_back(model.train.values[i] - fitted_all[static_cast<Eigen::Index>(i)]);
			resid_ts.push_back(grid[i]);
		}
	}
	if (resid.empty()) {
		// Degenerate but legal: every usable row was imputed; fall back to
		// the fit residuals so intervals still exist.
		resid.assign(model.fit.residuals.begin(), model.fit.residuals.end());
		resid_ts.clear();
		for (std::size_t i = 0; i < usable.size(); ++i) resid_ts.push_back(grid[usable[i]]);
	}
	Eigen::VectorXd resid_v = Eigen::Map<Eigen::VectorXd>(resid.data(), static_cast<Eigen::Index>(resid.size()));
	model.volatility = fit_volatility(resid_v, feature_rows_for(config.volatility_features, resid_ts),
	                                  config.volatility_features, config.volatility_min_group,
	                                  config.volatility_method);
	return model;
}

ForecastResult predict(const FittedForecastModel &model, int horizon,
                       const std::map<std::string, std::vector<double>> &future_regressors) {
	if (horizon < 1) fail(errc::horizon_non_positive, "horizon must be >= 1");
	const std::size_t n_hist = model.train.size();

	std::vector<Timestamp> grid(static_cast<std::size_t>(horizon));
	for (int s = 1; s <= horizon; ++s) {
		grid[static_cast<std::size_t>(s - 1)] =
		    advance(model.train.start, model.train.freq,
		            static_cast<std::int64_t>(n_hist - 1 + static_cast<std::size_t>(s)));
	}

	// Extended regressor vectors: training values plus the future slice.
	std::map<std::string, std::vector<double>> reg_ext;
	for (const RegressorSpec &reg : model.feature_config.regressors) {
		std::vector<double> ext = model.regressors.at(reg.name);
		const auto fut = future_regressors.find(reg.name);
		const std::size_t have = fut == future_regressors.end() ? 0 : fut->second.size();
		const std::size_t need =
		    reg.mode == RegressorMode::future_provided
		        ? static_cast<std::size_t>(horizon)
		        : static_cast<std::size_t>(std::max(0, horizon - reg.lag));
		for (std::size_t s = 0; s < need; ++s) {
			if (s >= have || is_missing(fut->second[s])) {
				fail(errc::missing_regressor_future,
				     "regressor '" + reg.name + "' needs " + std::to_string(need) +
				         " future values, only " + std::to_string(s) + " usable");
			}
		}
		for (std::size_t s = 0; s < static_cast<std::size_t>(horizon); ++s) {
			ext.push_back(s < have ? fut->second[s] : kMissing);
		}
		reg_ext[reg.name] = std::move(ext);
	}

	// Extended target vector: future cells filled step by step.
	std::vector<double> y_ext = model.train.values;
	y_ext.resize(n_hist + static_cast<std::size_t>(horizon), kMissing);

	DesignMatrix future = build_design_matrix(grid, model.feature_config, model.context, y_ext,
	                                          reg_ext, n_hist);
	const std::vector<std::string> names = future.names();
	if (names != model.design.names()) {
		fail(errc::column_mismatch, "future design does not match the fitted design");
	}

	// Coefficients aligned to design columns for fast row dot products.
	Eigen::VectorXd coef = Eigen::VectorXd::Zero(future.ncols());
	for (Eigen::Index j = 0; j < future.ncols(); ++j) {
		const auto &c = future.columns[static_cast<std::size_t>(j)];
		coef[j] = c.group == ColumnGroup::intercept ? model.fit.intercept
		                                            : model.fit.coefficient(c.name);
	}

	std::vector<Eigen::Index> lag_cols;
	for (Eigen::Index j = 0; j < future.ncols(); ++j) {
		if (future.columns[static_cast<std::size_t>(j)].group == ColumnGroup::autoregression) {
			lag_cols.push_back(j);
		}
	}

	auto fill_row = [&](DesignMatrix &m, Eigen::Index row, const std::vector<double> &ext) {
		if (!lag_cols.empty()) {
			const Eigen::VectorXd lr =
			    lag_row(ext, n_hist + static_cast<std::size_t>(row), model.feature_config.lags);
			for (std::size_t k = 0; k < lag_cols.size(); ++k) {
				m.values(row, lag_cols[k]) = lr[static_cast<Eigen::Index>(k)];
			}
		}
		m.refresh_interactions(row);
		return m.values.row(row).dot(coef);
	};

	ForecastResult out;
	out.grid = grid;
	out.forecast.assign(static_cast<std::size_t>(horizon), 0.0);

	const bool needs_recursion =
	    !model.feature_config.lags.empty() && model.feature_config.lags.min_order() < horizon;
	const bool simulate = model.config.ar_mode == ArMode::simulate && needs_recursion;

	if (!simulate) {
		// Plugin: chain predicted means into later lag cells.
		std::vector<double> ext = y_ext;
		for (int s = 0; s < horizon; ++s) {
			const double yhat = fill_row(future, s, ext);
			out.forecast[static_cast<std::size_t>(s)] = yhat;
			ext[n_hist + static_cast<std::size_t>(s)] = yhat;
		}
		out.components = breakdown_from_rows(model, future, future.values);
	} else {
		const int paths = std::max(1, model.config.sim_paths);
		const auto vol_rows = feature_rows_for(model.config.volatility_features, grid);
		Eigen::MatrixXd mean_rows = Eigen::MatrixXd::Zero(future.nrows(), future.ncols());
		DesignMatrix work = future;
		for (int p = 0; p < paths; ++p) {
			Rng rng = Rng::for_stream(model.config.seed, static_cast<std::uint64_t>(p));
			std::vector<double> ext = y_ext;
			for (int s = 0; s < horizon; ++s) {
				const double yhat = fill_row(work, s, ext);
				out.forecast[static_cast<std::size_t>(s)] += yhat;
				const double draw = model.volatility.draw(vol_rows[static_cast<std::size_t>(s)], rng);
				ext[n_hist + static_cast<std::size_t>(s)] = yhat + draw;
			}
			mean_rows += work.values;
		}
		for (double &f : out.forecast) f /= static_cast<double>(paths);
		mean_rows /= static_cast<double>(paths);
		// Component additivity holds for the path-averaged rows.
		out.components = breakdown_from_rows(model, future, mean_rows);
	}

	const auto vol_rows = feature_rows_for(model.config.volatility_features, grid);
	IntervalBand band = predict_interval(model.volatility, out.forecast, vol_rows,
	                                     1.0 - model.config.coverage);
	out.lower = std::move(band.lower);
	out.upper = std::move(band.upper);
	return out;
}

ComponentBreakdown decompose(const FittedForecastModel &model) {
	return breakdown_from_rows(model, model.design, model.design.values);
}

std::string summarize(const FittedForecastModel &model) {
	std::string out;
	char buf[160];
	auto add = [&](const char *fmt, auto... args) {
		std::snprintf(buf, sizeof(buf), fmt, args...);
		out += buf;
	};

	const char *algo = model.config.fit.algo == FitAlgorithm::ols      ? "ols"
	                   : model.config.fit.algo == FitAlgorithm::ridge ? "ridge"
	                                                                  : "quantile";
	out += "model summary\n=============\n";
	add("algorithm:        %s", algo);
	if (model.config.fit.algo == FitAlgorithm::ridge) {
		add(" (lambda = %g)", model.fit.lambda);
	} else if (model.config.fit.algo == FitAlgorithm::quantile) {
		add(" (q = %g, lambda = %g)", model.config.fit.quantile_q, model.fit.lambda);
	}
	out += '\n';
	add("rows used (n):    %lld of %lld\n", static_cast<long long>(model.fit.n),
	    static_cast<long long>(model.train.size()));
	add("columns (p):      %lld\n", static_cast<long long>(model.fit.p));
	add("in-sample loss:   %.6g\n", model.fit.loss);
	add("trend changepoints: %zu\n", model.feature_config.growth
	                                     ? model.feature_config.growth->changepoints.size()
	                                     : std::size_t{0});
	add("volatility:       %s over {", model.volatility.method == VolatilityMethod::gaussian
	                                       ? "gaussian"
	                                       : "empirical");
	for (std::size_t i = 0; i < model.volatility.features.size(); ++i) {
		if (i) out += ",";
		out += model.volatility.features[i];
	}
	add("}, N = %d\n", model.volatility.min_group_size);
	if (!model.fit.converged) out += "warning: solver did not fully converge\n";
	for (const std::string &d : model.fit.dropped_columns) {
		out += "warning: dropped constant column '" + d + "'\n";
	}
	out += '\n';

	add("%-28s %14s %12s %10s %12s\n", "coefficient", "value", "stderr", "t", "p");
	auto row = [&](const std::string &name, double value, double se, double t, double pv,
	               bool inference) {
		if (inference) {
			add("%-28s %14.6g %12.4g %10.3f %12.4g\n", name.c_str(), value, se, t, pv);
		} else {
			add("%-28s %14.6g %12s %10s %12s\n", name.c_str(), value, "n/a", "n/a", "n/a");
		}
	};
	if (model.fit.has_intercept) {
		row("intercept", model.fit.intercept, model.fit.intercept_stderr, model.fit.intercept_t,
		    model.fit.intercept_p, model.fit.has_inference);
	}
	for (std::size_t j = 0; j < model.fit.names.size(); ++j) {
		const Eigen::Index i = static_cast<Eigen::Index>(j);
		row(model.fit.names[j], model.fit.beta[i],
		    model.fit.has_inference ? model.fit.std_errors[i] : 0.0,
		    model.fit.has_inference ? model.fit.t_values[i] : 0.0,
		    model.fit.has_inference ? model.fit.p_values[i] : 0.0, model.fit.has_inference);
	}
	return out;
}

BenchmarkReport run_backtest(const TimeSeries &ts, const ForecastConfig &config,
                             const SplitPlan &plan,
                             const std::map<std::string, std::vector<double>> &regressors) {
	const ImputeResult imp = impute_linear(mask_anomalies(ts, config.anomalies));

	Forecaster forecaster = [&](const TimeSeries &train, int horizon) {
		ForecastConfig cfg = config;
		cfg.horizon = horizon;
		// Slice regressors to the train window plus the future steps.
		std::map<std::string, std::vector<double>> train_reg, future_reg;
		const std::size_t offset = static_cast<std::size_t>(
		    steps_between(ts.start, ts.freq, train.start));
		for (const auto &[name, values] : regressors) {
			train_reg[name] = std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(offset),
			                                      values.begin() + static_cast<std::ptrdiff_t>(offset + train.size()));
			const std::size_t fut_start = offset + train.size();
			const std::size_t fut_end = std::min(values.size(), fut_start + static_cast<std::size_t>(horizon));
			if (fut_start < fut_end) {
				future_reg[name] = std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(fut_start),
				                                       values.begin() + static_cast<std::ptrdiff_t>(fut_end));
			}
		}
		FittedForecastModel model = fit(train, cfg, train_reg);
		return predict(model, horizon, future_reg).forecast;
	};

	return run_backtest_with(ts, plan, forecaster, seasonal_naive_period(ts.freq), imp.imputed);
}

} // namespace silverkite
