#include "silverkite/config.hpp"
#include "silverkite/csv.hpp"
#include "silverkite/error.hpp"
#include "silverkite/forecast.hpp"
#include "silverkite/volatility.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using namespace silverkite;

int exit_code_for(errc code) {
	switch (code) {
	case errc::bad_config:
	case errc::infeasible_plan:
	case errc::horizon_non_positive:
	case errc::pattern_unmatched:
	case errc::changepoint_out_of_range:
	case errc::duplicate_column_name:
	case errc::not_coarser:
		return 2;
	case errc::bad_data:
	case errc::empty_input:
	case errc::irregular_grid:
	case errc::all_missing:
	case errc::missing_regressor_future:
	case errc::zero_denominator:
		return 3;
	default:
		return 4;
	}
}

struct LoadedInput {
	TimeSeries series;
	std::map<std::string, std::vector<double>> regressors;        // training grid
	std::map<std::string, std::vector<double>> future_regressors; // rows past the last y
	std::vector<std::string> regressor_names;
};

// Rows after the last observed y carry no target but may carry regressor
// values; they are treated as the future-regressor block rather than as
// trailing gaps to impute.
LoadedInput load_input(const std::string &path) {
	const SeriesData data = read_series_csv(path);
	std::size_t n_obs = data.y.size();
	while (n_obs > 0 && is_missing(data.y[n_obs - 1])) --n_obs;
	if (n_obs == 0) fail(errc::all_missing, path + ": no observed target values");

	std::vector<TimePoint> points(n_obs);
	for (std::size_t i = 0; i < n_obs; ++i) points[i] = {data.timestamps[i], data.y[i]};
	LoadedInput in;
	in.series = validate(points);
	in.regressor_names = data.regressor_names;
	for (std::size_t r = 0; r < data.regressor_names.size(); ++r) {
		std::vector<Timestamp> train_ts(data.timestamps.begin(),
		                                data.timestamps.begin() + static_cast<std::ptrdiff_t>(n_obs));
		std::vector<double> train_vals(data.regressors[r].begin(),
		                               data.regressors[r].begin() + static_cast<std::ptrdiff_t>(n_obs));
		in.regressors[data.regressor_names[r]] = align_to_grid(in.series, train_ts, train_vals);

		std::vector<double> future;
		for (std::size_t i = n_obs; i < data.timestamps.size(); ++i) {
			const std::int64_t step = steps_between(in.series.end_timestamp(), in.series.freq,
			                                        data.timestamps[i]);
			if (step < 1) continue;
			if (future.size() < static_cast<std::size_t>(step)) {
				future.resize(static_cast<std::size_t>(step), kMissing);
			}
			future[static_cast<std::size_t>(step - 1)] = data.regressors[r][i];
		}
		if (!future.empty()) in.future_regressors[data.regressor_names[r]] = std::move(future);
	}
	return in;
}

std::string format_ts(const Frequency &freq, Timestamp t) {
	const bool with_time = freq.unit == FreqUnit::minute || freq.unit == FreqUnit::hour;
	return format_iso8601(t, with_time);
}

void write_output(const std::string &dir, const std::string &name, const std::string &content) {
	std::filesystem::create_directories(dir);
	write_text_file(dir + "/" + name, content);
}

struct CommonArgs {
	std::string config_path;
	std::string output_dir_flag;
	std::optional<std::int64_t> seed_flag;
	std::string input_flag;
	std::string template_flag;
};

CliSetup make_setup(const CommonArgs &args, const LoadedInput *&input,
                    std::optional<LoadedInput> &storage,
                    const std::map<std::string, std::string> &overrides) {
	std::map<std::string, std::string> entries;
	if (!args.config_path.empty()) entries = parse_config_file(args.config_path);
	if (!args.input_flag.empty()) entries["input"] = args.input_flag;
	if (!args.template_flag.empty()) entries["template"] = args.template_flag;
	if (!args.output_dir_flag.empty()) entries["output_dir"] = args.output_dir_flag;
	if (args.seed_flag) entries["seed"] = std::to_string(*args.seed_flag);
	for (const auto &[k, v] : overrides) entries[k] = v;

	auto it = entries.find("input");
	if (it == entries.end() || it->second.empty()) {
		fail(errc::bad_config, "key 'input' is required (config file or --input)");
	}
	storage.emplace(load_input(it->second));
	input = &*storage;
	return resolve_setup(entries, input->series.freq, input->regressor_names);
}

int cmd_forecast(const CommonArgs &args, const std::map<std::string, std::string> &overrides) {
	const LoadedInput *input = nullptr;
	std::optional<LoadedInput> storage;
	CliSetup setup = make_setup(args, input, storage, overrides);

	FittedForecastModel model = fit(input->series, setup.forecast, input->regressors);
	ForecastResult result = predict(model, setup.forecast.horizon, input->future_regressors);

	std::string fc_csv = "ts,forecast,lower,upper\n";
	for (std::size_t i = 0; i < result.grid.size(); ++i) {
		fc_csv += format_ts(model.train.freq, result.grid[i]);
		fc_csv += ',';
		fc_csv += format_double(result.forecast[i]);
		fc_csv += ',';
		fc_csv += format_double(result.lower[i]);
		fc_csv += ',';
		fc_csv += format_double(result.upper[i]);
		fc_csv += '\n';
	}
	write_output(setup.output_dir, "forecast.csv", fc_csv);

	std::string comp_csv = "ts";
	for (const auto &[name, series] : result.components.groups) {
		(void)series;
		comp_csv += ',';
		comp_csv += name;
	}
	comp_csv += ",forecast\n";
	for (std::size_t i = 0; i < result.grid.size(); ++i) {
		comp_csv += format_ts(model.train.freq, result.grid[i]);
		for (const auto &[name, series] : result.components.groups) {
			(void)name;
			comp_csv += ',';
			comp_csv += format_double(series[i]);
		}
		comp_csv += ',';
		comp_csv += format_double(result.components.total[i]);
		comp_csv += '\n';
	}
	write_output(setup.output_dir, "components.csv", comp_csv);

	write_output(setup.output_dir, "summary.txt", summarize(model));
	write_output(setup.output_dir, "qq.csv", qq_plot_csv(model.volatility));
	return 0;
}

int cmd_backtest(const CommonArgs &args, const std::map<std::string, std::string> &overrides) {
	const LoadedInput *input = nullptr;
	std::optional<LoadedInput> storage;
	CliSetup setup = make_setup(args, input, storage, overrides);

	const std::int64_t min_train = setup.backtest_min_train.value_or(
	    default_min_train_length(setup.forecast, input->series.freq));
	SplitPlan plan = make_rolling_splits(static_cast<std::int64_t>(input->series.size()),
	                                     setup.forecast.horizon, setup.backtest_period,
	                                     setup.backtest_k, setup.backtest_window,
	                                     setup.backtest_train_length, min_train);
	BenchmarkReport report = run_backtest(input->series, setup.forecast, plan, input->regressors);

	write_output(setup.output_dir, "backtest_detail.csv", report.detail_csv());
	write_output(setup.output_dir, "backtest_summary.csv", report.summary_csv());
	if (report.n_failed > 0) {
		std::cerr << "warning: " << report.n_failed << " of " << plan.splits.size()
		          << " splits failed\n";
	}
	return 0;
}

int cmd_detect_changepoints(const CommonArgs &args,
                            const std::map<std::string, std::string> &overrides) {
	const LoadedInput *input = nullptr;
	std::optional<LoadedInput> storage;
	CliSetup setup = make_setup(args, input, storage, overrides);

	const TimeSeries masked = mask_anomalies(input->series, setup.forecast.anomalies);
	TrendDetectionResult trend = detect_trend_changepoints(masked, setup.forecast.detection);

	std::vector<SeasonalitySpec> periods = setup.forecast.seasonality;
	SeasonalityDetectionResult season;
	if (!periods.empty()) {
		season = detect_seasonality_changepoints(masked, periods, setup.forecast.detection, trend);
	}

	std::string cp_csv = "kind,period,ts,score\n";
	for (std::size_t i = 0; i < trend.changepoints.size(); ++i) {
		cp_csv += "trend,,";
		cp_csv += format_ts(input->series.freq, trend.changepoints[i]);
		cp_csv += ',';
		cp_csv += format_double(trend.scores[i]);
		cp_csv += '\n';
	}
	for (const auto &[tag, points] : season.changepoints) {
		const auto &scores = season.scores.at(tag);
		for (std::size_t i = 0; i < points.size(); ++i) {
			cp_csv += "seasonality,";
			cp_csv += tag;
			cp_csv += ',';
			cp_csv += format_ts(input->series.freq, points[i]);
			cp_csv += ',';
			cp_csv += format_double(scores[i]);
			cp_csv += '\n';
		}
	}
	write_output(setup.output_dir, "changepoints.csv", cp_csv);

	std::string trend_csv = "ts,trend\n";
	for (std::size_t i = 0; i < input->series.size(); ++i) {
		trend_csv += format_ts(input->series.freq, input->series.timestamp_at(i));
		trend_csv += ',';
		trend_csv += format_double(trend.fitted_trend[i]);
		trend_csv += '\n';
	}
	write_output(setup.output_dir, "trend_fit.csv", trend_csv);
	return 0;
}

int cmd_explore(const CommonArgs &args, const std::map<std::string, std::string> &overrides) {
	const LoadedInput *input = nullptr;
	std::optional<LoadedInput> storage;
	CliSetup setup = make_setup(args, input, storage, overrides);
	const TimeSeries &ts = input->series;

	const double span_years =
	    static_cast<double>(ts.end_timestamp() - ts.start) / (365.25 * 86400.0);
	std::vector<std::string> periods = setup.explore_periods;
	if (periods.empty()) {
		if (ts.freq.unit == FreqUnit::minute || ts.freq.unit == FreqUnit::hour) {
			periods.push_back("daily");
		}
		if (ts.freq.mean_step_seconds() < 604800.0) periods.push_back("weekly");
		if (span_years >= 2.0) periods.push_back("yearly");
	}

	for (const std::string &period : periods) {
		// (group, cycle) -> running mean
		std::map<std::string, std::map<double, std::pair<double, std::size_t>>> cells;
		const bool monthly_data = ts.freq.unit == FreqUnit::month;
		for (std::size_t i = 0; i < ts.size(); ++i) {
			if (is_missing(ts.values[i])) continue;
			const Timestamp t = ts.timestamp_at(i);
			std::string group;
			double cycle = 0.0;
			if (period == "daily") {
				if (ts.freq.mean_step_seconds() >= 86400.0) {
					fail(errc::bad_config, "daily overlay needs sub-daily data");
				}
				group = std::to_string(day_of_week(t));
				cycle = time_of_day_fraction(t) * 24.0;
			} else if (period == "weekly") {
				if (ts.freq.mean_step_seconds() >= 604800.0) {
					fail(errc::bad_config, "weekly overlay needs sub-weekly data");
				}
				const Timestamp monday = floor_to_day(t) - day_of_week(t) * 86400ll;
				group = format_iso8601(monday, false);
				cycle = day_of_week(t) + time_of_day_fraction(t);
			} else if (period == "yearly") {
				group = std::to_string(civil_from_timestamp(t).year);
				cycle = monthly_data ? civil_from_timestamp(t).month : day_of_year(t);
			} else {
				fail(errc::bad_config, "unknown overlay period '" + period + "'");
			}
			auto &cell = cells[group][cycle];
			cell.first += ts.values[i];
			cell.second += 1;
		}

		std::string csv = "cycle_position,group_label,mean_value\n";
		for (auto &[group, by_cycle] : cells) {
			double center = 0.0;
			if (period == "yearly") {
				// Overlay groups are mean-centered so curves are comparable.
				double acc = 0.0;
				std::size_t n = 0;
				for (const auto &[cycle, cell] : by_cycle) {
					(void)cycle;
					acc += cell.first / static_cast<double>(cell.second);
					++n;
				}
				center = acc / static_cast<double>(n);
			}
			for (const auto &[cycle, cell] : by_cycle) {
				csv += format_double(cycle);
				csv += ',';
				csv += group;
				csv += ',';
				csv += format_double(cell.first / static_cast<double>(cell.second) - center);
				csv += '\n';
			}
		}
		write_output(setup.output_dir, "seasonality_overlay_" + period + ".csv", csv);
	}
	return 0;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"silverkite - interpretable additive time-series forecasting"};
	app.require_subcommand(1);
	app.fallthrough();

	CommonArgs common;
	app.add_option("--config", common.config_path, "config file (key = value lines)");
	app.add_option("--output-dir", common.output_dir_flag, "output directory");
	app.add_option("--seed", common.seed_flag, "seed for simulation-based prediction");
	app.add_option("--input", common.input_flag, "input CSV (ts,y[,regressor...])");

	std::map<std::string, std::string> overrides;

	auto *fc = app.add_subcommand("forecast", "fit the model and write forecasts");
	std::int64_t horizon = 0;
	double coverage = 0.0;
	fc->add_option("--horizon", horizon, "forecast horizon (steps)");
	fc->add_option("--coverage", coverage, "prediction interval coverage");
	fc->add_option("--template", common.template_flag, "model template");

	auto *bt = app.add_subcommand("backtest", "rolling-origin evaluation");
	std::int64_t bt_k = 0, bt_period = 0, bt_train_length = 0, bt_horizon = 0;
	std::string bt_window;
	bt->add_option("--k", bt_k, "number of splits");
	bt->add_option("--period", bt_period, "steps between test starts");
	bt->add_option("--window", bt_window, "expanding|moving");
	bt->add_option("--train-length", bt_train_length, "train window length (moving)");
	bt->add_option("--horizon", bt_horizon, "forecast horizon (steps)");
	bt->add_option("--template", common.template_flag, "model template");

	auto *dc = app.add_subcommand("detect-changepoints", "trend/seasonality changepoints");
	auto *ex = app.add_subcommand("explore", "seasonality overlay exports");

	CLI11_PARSE(app, argc, argv);

	try {
		if (fc->parsed()) {
			if (horizon > 0) overrides["horizon"] = std::to_string(horizon);
			if (coverage > 0.0) overrides["coverage"] = format_double(coverage);
			return cmd_forecast(common, overrides);
		}
		if (bt->parsed()) {
			if (bt_k > 0) overrides["backtest.k"] = std::to_string(bt_k);
			if (bt_period > 0) overrides["backtest.period"] = std::to_string(bt_period);
			if (!bt_window.empty()) overrides["backtest.window"] = bt_window;
			if (bt_train_length > 0) {
				overrides["backtest.train_length"] = std::to_string(bt_train_length);
			}
			if (bt_horizon > 0) overrides["horizon"] = std::to_string(bt_horizon);
			return cmd_backtest(common, overrides);
		}
		if (dc->parsed()) return cmd_detect_changepoints(common, overrides);
		if (ex->parsed()) return cmd_explore(common, overrides);
	} catch (const Error &e) {
		const int code = exit_code_for(e.code());
		std::cerr << "ERROR " << code << ": " << e.what() << "\n";
		return code;
	} catch (const std::exception &e) {
		std::cerr << "ERROR 4: " << e.what() << "\n";
		return 4;
	}
	return 0;
}
