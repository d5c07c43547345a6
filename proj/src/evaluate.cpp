#include "silverkite/evaluate.hpp"

#include "silverkite/csv.hpp"
#include "silverkite/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace silverkite {

SplitPlan make_rolling_splits(std::int64_t n, int horizon, int period, int k, WindowMode window,
                              std::optional<std::int64_t> moving_length,
                              std::int64_t min_train_length) {
	if (horizon < 1) fail(errc::horizon_non_positive, "horizon must be >= 1");
	if (period < 1 || k < 1) fail(errc::infeasible_plan, "period and K must be >= 1");
	if (window == WindowMode::moving && !moving_length) {
		fail(errc::infeasible_plan, "moving window requires a train length");
	}

	SplitPlan plan;
	plan.horizon = horizon;
	plan.period = period;
	plan.window = window;
	plan.train_length = moving_length.value_or(0);

	for (int i = k - 1; i >= 0; --i) {
		const std::int64_t test_start = n - horizon - static_cast<std::int64_t>(i) * period;
		SplitPlan::Split s;
		s.test_start = test_start;
		s.test_end = test_start + horizon - 1;
		if (window == WindowMode::expanding) {
			s.train_start = 0;
			s.train_end = test_start - 1;
			if (test_start < min_train_length) {
				fail(errc::infeasible_plan,
				     "earliest split would train on " + std::to_string(test_start) +
				         " points; need at least " + std::to_string(min_train_length));
			}
		} else {
			s.train_start = test_start - plan.train_length;
			s.train_end = test_start - 1;
			if (plan.train_length < min_train_length) {
				fail(errc::infeasible_plan, "moving train length " + std::to_string(plan.train_length) +
				                                " is below the minimum " + std::to_string(min_train_length));
			}
			if (s.train_start < 0) {
				fail(errc::infeasible_plan, "earliest split needs data before the series start");
			}
		}
		plan.splits.push_back(s);
	}
	return plan;
}

double mase(std::span<const double> train_actuals, std::span<const double> test_actuals,
            std::span<const double> test_forecasts, int m) {
	if (static_cast<std::int64_t>(train_actuals.size()) <= m) {
		fail(errc::too_short, "training window shorter than the seasonal period");
	}
	if (test_actuals.size() != test_forecasts.size() || test_actuals.empty()) {
		fail(errc::empty_input, "test actuals and forecasts must align and be non-empty");
	}
	double denom = 0.0;
	std::size_t denom_n = 0;
	for (std::size_t t = static_cast<std::size_t>(m); t < train_actuals.size(); ++t) {
		if (is_missing(train_actuals[t]) || is_missing(train_actuals[t - static_cast<std::size_t>(m)])) {
			continue;
		}
		denom += std::abs(train_actuals[t] - train_actuals[t - static_cast<std::size_t>(m)]);
		++denom_n;
	}
	if (denom_n == 0 || denom == 0.0) {
		fail(errc::denominator_zero, "in-sample seasonal-naive MAE is zero");
	}
	denom /= static_cast<double>(denom_n);

	double num = 0.0;
	for (std::size_t i = 0; i < test_actuals.size(); ++i) {
		num += std::abs(test_actuals[i] - test_forecasts[i]);
	}
	num /= static_cast<double>(test_actuals.size());
	return num / denom;
}

double mape(std::span<const double> test_actuals, std::span<const double> test_forecasts) {
	if (test_actuals.size() != test_forecasts.size() || test_actuals.empty()) {
		fail(errc::empty_input, "test actuals and forecasts must align and be non-empty");
	}
	double acc = 0.0;
	for (std::size_t i = 0; i < test_actuals.size(); ++i) {
		if (test_actuals[i] == 0.0) {
			fail(errc::zero_denominator, "actual value is zero at index " + std::to_string(i));
		}
		acc += std::abs((test_actuals[i] - test_forecasts[i]) / test_actuals[i]);
	}
	return 100.0 * acc / static_cast<double>(test_actuals.size());
}

double smape(std::span<const double> test_actuals, std::span<const double> test_forecasts) {
	if (test_actuals.size() != test_forecasts.size() || test_actuals.empty()) {
		fail(errc::empty_input, "test actuals and forecasts must align and be non-empty");
	}
	double acc = 0.0;
	for (std::size_t i = 0; i < test_actuals.size(); ++i) {
		const double denom = std::abs(test_actuals[i]) + std::abs(test_forecasts[i]);
		if (denom == 0.0) {
			fail(errc::zero_denominator, "actual and forecast both zero at index " + std::to_string(i));
		}
		acc += 2.0 * std::abs(test_actuals[i] - test_forecasts[i]) / denom;
	}
	return 100.0 * acc / static_cast<double>(test_actuals.size());
}

int seasonal_naive_period(const Frequency &freq) {
	switch (freq.unit) {
	case FreqUnit::hour: return freq.multiple == 1 ? 24 : 1;
	case FreqUnit::day: return freq.multiple == 1 ? 7 : 1;
	case FreqUnit::month: return freq.multiple == 1 ? 12 : 1;
	default: return 1;
	}
}

namespace {

double mean_over(const std::vector<BenchmarkReport::SplitScore> &splits,
                 bool BenchmarkReport::SplitScore::*ok, double BenchmarkReport::SplitScore::*val,
                 int *count = nullptr) {
	double acc = 0.0;
	int n = 0;
	for (const auto &s : splits) {
		if (s.*ok) {
			acc += s.*val;
			++n;
		}
	}
	if (count != nullptr) *count = n;
	return n > 0 ? acc / n : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

double BenchmarkReport::aggregate_mase() const {
	return mean_over(splits, &SplitScore::mase_ok, &SplitScore::mase);
}
double BenchmarkReport::aggregate_mape() const {
	return mean_over(splits, &SplitScore::mape_ok, &SplitScore::mape);
}
double BenchmarkReport::aggregate_smape() const {
	return mean_over(splits, &SplitScore::smape_ok, &SplitScore::smape);
}
int BenchmarkReport::n_scored_mase() const {
	int n = 0;
	mean_over(splits, &SplitScore::mase_ok, &SplitScore::mase, &n);
	return n;
}

std::string BenchmarkReport::detail_csv() const {
	std::string out = "split_idx,test_start,horizon_step,actual,forecast,abs_err\n";
	for (const Row &r : rows) {
		out += std::to_string(r.split_idx);
		out += ',';
		out += format_iso8601(r.test_start, true);
		out += ',';
		out += std::to_string(r.horizon_step);
		out += ',';
		out += format_double(r.actual);
		out += ',';
		out += format_double(r.forecast);
		out += ',';
		out += r.scored ? format_double(r.abs_err) : "";
		out += '\n';
	}
	return out;
}

std::string BenchmarkReport::summary_csv() const {
	std::string out = "metric,horizon,value,n_splits,n_failed\n";
	auto line = [&](const std::string &metric, double value, int n) {
		out += metric;
		out += ',';
		out += std::to_string(horizon);
		out += ',';
		out += std::isnan(value) ? "" : format_double(value);
		out += ',';
		out += std::to_string(n);
		out += ',';
		out += std::to_string(n_failed);
		out += '\n';
	};
	int n_mase = 0, n_mape = 0, n_smape = 0;
	const double v_mase = mean_over(splits, &SplitScore::mase_ok, &SplitScore::mase, &n_mase);
	const double v_mape = mean_over(splits, &SplitScore::mape_ok, &SplitScore::mape, &n_mape);
	const double v_smape = mean_over(splits, &SplitScore::smape_ok, &SplitScore::smape, &n_smape);
	line("mase", v_mase, n_mase);
	line("mape", v_mape, n_mape);
	line("smape", v_smape, n_smape);
	return out;
}

BenchmarkReport run_backtest_with(const TimeSeries &ts, const SplitPlan &plan,
                                  const Forecaster &forecaster, int seasonal_m,
                                  std::span<const std::uint8_t> imputed) {
	BenchmarkReport report;
	report.horizon = plan.horizon;
	const auto t_all0 = std::chrono::steady_clock::now();

	for (std::size_t si = 0; si < plan.splits.size(); ++si) {
		const auto &sp = plan.splits[si];
		BenchmarkReport::SplitScore score;
		score.split_idx = static_cast<std::int64_t>(si);
		score.test_start = ts.timestamp_at(static_cast<std::size_t>(sp.test_start));
		const auto t0 = std::chrono::steady_clock::now();
		try {
			const TimeSeries train = ts.slice(static_cast<std::size_t>(sp.train_start),
			                                  static_cast<std::size_t>(sp.train_end));
			const std::vector<double> fc = forecaster(train, plan.horizon);
			if (fc.size() != static_cast<std::size_t>(plan.horizon)) {
				fail(errc::bad_data, "forecaster returned wrong horizon");
			}

			std::vector<double> scored_actuals, scored_fc;
			for (int h = 0; h < plan.horizon; ++h) {
				const std::size_t idx = static_cast<std::size_t>(sp.test_start + h);
				BenchmarkReport::Row row;
				row.split_idx = static_cast<std::int64_t>(si);
				row.test_start = score.test_start;
				row.horizon_step = h + 1;
				row.actual = ts.values[idx];
				row.forecast = fc[static_cast<std::size_t>(h)];
				const bool usable = !is_missing(ts.values[idx]) &&
				                    (imputed.empty() || imputed[idx] == 0);
				row.scored = usable;
				row.abs_err = usable ? std::abs(row.actual - row.forecast) : kMissing;
				report.rows.push_back(row);
				if (usable) {
					scored_actuals.push_back(row.actual);
					scored_fc.push_back(row.forecast);
				}
			}

			if (!scored_actuals.empty()) {
				std::vector<double> train_vals(ts.values.begin() + sp.train_start,
				                               ts.values.begin() + sp.train_end + 1);
				if (!imputed.empty()) {
					for (std::size_t i = 0; i < train_vals.size(); ++i) {
						if (imputed[static_cast<std::size_t>(sp.train_start) + i]) {
							train_vals[i] = kMissing;
						}
					}
				}
				try {
					score.mase = mase(train_vals, scored_actuals, scored_fc, seasonal_m);
					score.mase_ok = true;
				} catch (const Error &) {
				}
				try {
					score.mape = mape(scored_actuals, scored_fc);
					score.mape_ok = true;
				} catch (const Error &) {
				}
				try {
					score.smape = smape(scored_actuals, scored_fc);
					score.smape_ok = true;
				} catch (const Error &) {
				}
			}
		} catch (const std::exception &e) {
			score.failed = true;
			score.error = e.what();
			++report.n_failed;
		}
		score.runtime_seconds =
		    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		report.splits.push_back(score);
	}
	report.total_runtime_seconds =
	    std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all0).count();
	return report;
}

} // namespace silverkite
