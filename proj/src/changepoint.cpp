#include "silverkite/changepoint.hpp"

#include "silverkite/error.hpp"
#include "silverkite/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace silverkite {

namespace {

constexpr double kSelectEps = 1e-12;

// Survivors of the lasso must also clear a multiplicity-adjusted t cut in a
// post-merge refit; the cut grows with the number of penalized columns
// screened so pure-noise problems come back empty.
double refit_t_cut(std::size_t n_penalized_columns) {
	return std::sqrt(2.0 * std::log(static_cast<double>(std::max<std::size_t>(n_penalized_columns, 2)))) +
	       1.5;
}

double refit_abs_t(const LinearFit &fit, const std::string &name) {
	if (!fit.has_inference) return std::numeric_limits<double>::infinity();
	for (std::size_t i = 0; i < fit.names.size(); ++i) {
		if (fit.names[i] == name) {
			const double t = fit.t_values[static_cast<Eigen::Index>(i)];
			return std::isfinite(t) ? std::abs(t) : std::numeric_limits<double>::infinity();
		}
	}
	return std::numeric_limits<double>::infinity();
}

double stddev(const std::vector<double> &v) {
	double mean = 0.0;
	for (double x : v) mean += x;
	mean /= static_cast<double>(v.size());
	double ssq = 0.0;
	for (double x : v) ssq += (x - mean) * (x - mean);
	return std::sqrt(ssq / static_cast<double>(v.size()));
}

// Representative timestamp per aggregated bucket: the midpoint of its source
// points, so a regression on bucket means is not biased by half a bucket.
std::vector<Timestamp> bucket_centers(const TimeSeries &src, const TimeSeries &coarse) {
	std::vector<Timestamp> centers(coarse.size());
	for (std::size_t k = 0; k < coarse.size(); ++k) {
		const Timestamp lo = advance(coarse.start, coarse.freq, static_cast<std::int64_t>(k));
		const Timestamp hi = advance(coarse.start, coarse.freq, static_cast<std::int64_t>(k) + 1);
		const std::int64_t first = steps_between(src.start, src.freq, lo);
		std::int64_t last = first;
		while (advance(src.start, src.freq, last + 1) < hi) ++last;
		centers[k] = (advance(src.start, src.freq, first) + advance(src.start, src.freq, last)) / 2;
	}
	return centers;
}

// Candidate indices spread evenly over the first (1 - exclusion) of [0, n-1].
std::vector<std::size_t> candidate_indices(std::size_t n, int n_candidates, double exclusion) {
	const double span = (1.0 - exclusion) * static_cast<double>(n - 1);
	const int count = std::min<int>(n_candidates, static_cast<int>(n / 2));
	std::set<std::size_t> idx;
	for (int i = 1; i <= count; ++i) {
		const auto pos = static_cast<std::size_t>(
		    std::llround(span * static_cast<double>(i) / static_cast<double>(count)));
		if (pos >= 1 && pos <= n - 1) idx.insert(pos);
	}
	return {idx.begin(), idx.end()};
}

// Two-stage selection shared by trend and seasonality detection: a small
// ridge pilot sets per-column lasso weights, then lambda_strength picks the
// spot on the weighted path between lambda_max and 1e-4 * lambda_max.
LinearFit path_weighted_lasso(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                              const Eigen::VectorXd &y, const Eigen::VectorXd &base_factors,
                              double lambda_strength) {
	const double lmax = lasso_lambda_max(X, names, y, &base_factors);
	if (lmax <= 0.0) {
		return fit_lasso_weighted(X, names, y, 0.0, base_factors, SolverOptions{});
	}

	Eigen::VectorXd factors = base_factors;
	LinearFit pilot = fit_ridge(X, names, y, 1e-4 * lmax * static_cast<double>(X.rows()));
	const double dn = static_cast<double>(X.rows());
	std::size_t b = 0;
	for (std::size_t j = 0; j < names.size(); ++j) {
		if (names[j] == "intercept") continue;
		if (factors[static_cast<Eigen::Index>(j)] > 0.0) {
			// Pilot coefficients compare on the standardized scale.
			const Eigen::Index col = static_cast<Eigen::Index>(j);
			const double mean = X.col(col).mean();
			const double sd = std::sqrt((X.col(col).array() - mean).square().sum() / dn);
			const double std_coef = pilot.beta[static_cast<Eigen::Index>(b)] * sd;
			factors[col] = 1.0 / (std::abs(std_coef) + 1e-8);
		}
		++b;
	}
	const double wmax = lasso_lambda_max(X, names, y, &factors);
	const double path_max = wmax > 0.0 ? wmax : lmax;
	const double path_min = 1e-4 * path_max;
	const double lambda = std::exp(lambda_strength * std::log(path_max) +
	                               (1.0 - lambda_strength) * std::log(path_min));
	return fit_lasso_weighted(X, names, y, lambda, factors, SolverOptions{});
}

// OLS refit of the unpenalized columns plus `extra`; ridge fallback only
// when the support is collinear.
LinearFit refit_support(const DesignMatrix &design, const Eigen::VectorXd &factors,
                        const Eigen::VectorXd &y, const std::vector<Eigen::Index> &extra) {
	std::vector<Eigen::Index> use;
	for (Eigen::Index j = 0; j < design.ncols(); ++j) {
		if (factors[j] == 0.0) use.push_back(j);
	}
	use.insert(use.end(), extra.begin(), extra.end());
	Eigen::MatrixXd sub(design.values.rows(), static_cast<Eigen::Index>(use.size()));
	std::vector<std::string> sub_names;
	for (std::size_t c = 0; c < use.size(); ++c) {
		sub.col(static_cast<Eigen::Index>(c)) = design.values.col(use[c]);
		sub_names.push_back(design.columns[static_cast<std::size_t>(use[c])].name);
	}
	try {
		return fit_ols(sub, sub_names, y);
	} catch (const Error &) {
		return fit_ridge(sub, sub_names, y, 1e-6);
	}
}

} // namespace

std::optional<Frequency> default_detection_aggregation(const Frequency &freq) {
	switch (freq.unit) {
	case FreqUnit::minute:
	case FreqUnit::hour: return Frequency{FreqUnit::day, 1};
	case FreqUnit::day: return Frequency{FreqUnit::week, 1};
	case FreqUnit::week:
	case FreqUnit::month: return std::nullopt;
	}
	return std::nullopt;
}

std::vector<Timestamp> merge_changepoints(std::span<const Timestamp> points,
                                          std::span<const double> scores,
                                          std::int64_t min_distance_seconds) {
	if (points.size() != scores.size()) fail(errc::column_mismatch, "points/scores mismatch");
	std::vector<Timestamp> out;
	std::size_t i = 0;
	while (i < points.size()) {
		std::size_t best = i;
		std::size_t j = i + 1;
		while (j < points.size() && points[j] - points[j - 1] < min_distance_seconds) {
			if (std::abs(scores[j]) > std::abs(scores[best])) best = j;
			++j;
		}
		out.push_back(points[best]);
		i = j;
	}
	return out;
}

TrendDetectionResult detect_trend_changepoints(const TimeSeries &ts, const DetectionConfig &cfg) {
	TimeSeries work = impute_linear(ts).series;

	// Aggregate away short-term structure.
	std::optional<Frequency> agg = cfg.agg_target;
	if (!agg && !cfg.no_aggregation) agg = default_detection_aggregation(ts.freq);
	TimeSeries coarse = work;
	if (agg) {
		coarse = aggregate(work, *agg, AggStat::mean);
		coarse = impute_linear(coarse).series;
	}
	const std::size_t n = coarse.size();
	if (n < 10) fail(errc::too_short, "need at least 10 aggregated points for detection");

	TrendDetectionResult result;
	const double sd = stddev(coarse.values);
	if (sd < 1e-12) {
		// Constant series: flat trend, nothing to detect.
		result.fitted_trend.assign(ts.size(), coarse.values[0]);
		return result;
	}
	Eigen::VectorXd y(static_cast<Eigen::Index>(n));
	for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = coarse.values[i] / sd;

	const std::vector<Timestamp> grid =
	    agg ? bucket_centers(work, coarse) : coarse.grid();
	const FeatureContext ctx{grid.front(), grid.back(), coarse.freq};
	const auto cand_idx = candidate_indices(n, cfg.n_candidates, cfg.end_exclusion_frac);
	result.candidate_count = static_cast<int>(cand_idx.size());

	GrowthSpec growth;
	growth.func = GrowthFunc::linear;
	for (std::size_t idx : cand_idx) growth.changepoints.push_back(grid[idx]);

	FeatureConfig fc;
	fc.growth = growth;
	// Control for yearly seasonality when at least a full cycle is visible.
	const double span_seconds = static_cast<double>(grid.back() - grid.front());
	if (span_seconds >= 370.0 * 86400.0 && cfg.yearly_order > 0) {
		fc.seasonality.push_back(yearly_seasonality(cfg.yearly_order));
	}
	DesignMatrix design = build_design_matrix(grid, fc, ctx, {}, {});

	Eigen::VectorXd factors = Eigen::VectorXd::Zero(design.ncols());
	std::vector<Eigen::Index> hinge_cols;
	std::size_t n_penalized = 0;
	for (Eigen::Index j = 0; j < design.ncols(); ++j) {
		const std::string &name = design.columns[static_cast<std::size_t>(j)].name;
		if (name.rfind("cp", 0) == 0) {
			factors[j] = 1.0;
			hinge_cols.push_back(j);
			++n_penalized;
		}
	}

	LinearFit lasso = path_weighted_lasso(design.values, design.names(), y, factors,
	                                      cfg.lambda_strength);

	std::vector<Timestamp> selected;
	std::vector<Eigen::Index> selected_cols;
	for (std::size_t k = 0; k < hinge_cols.size(); ++k) {
		const double b = lasso.coefficient(design.columns[static_cast<std::size_t>(hinge_cols[k])].name);
		if (std::abs(b) > kSelectEps) {
			selected.push_back(growth.changepoints[k]);
			selected_cols.push_back(hinge_cols[k]);
		}
	}

	const double min_days = cfg.min_distance_days.value_or(14.0);
	const std::int64_t min_sep = static_cast<std::int64_t>(min_days * 86400.0);

	if (!selected.empty()) {
		// Shrinkage-free scores for merging, from a refit on the full support.
		const LinearFit wide = refit_support(design, factors, y, selected_cols);
		std::vector<double> wide_scores;
		for (Eigen::Index col : selected_cols) {
			wide_scores.push_back(std::abs(
			    wide.coefficient(design.columns[static_cast<std::size_t>(col)].name)));
		}
		const auto merged = merge_changepoints(selected, wide_scores, min_sep);
		std::vector<Eigen::Index> merged_cols;
		for (const Timestamp m : merged) {
			for (std::size_t k = 0; k < selected.size(); ++k) {
				if (selected[k] == m) merged_cols.push_back(selected_cols[k]);
			}
		}

		// Significance screen on the small merged support.
		const LinearFit narrow = refit_support(design, factors, y, merged_cols);
		const double cut = refit_t_cut(n_penalized);
		selected.clear();
		selected_cols.clear();
		for (std::size_t k = 0; k < merged.size(); ++k) {
			const std::string &name =
			    design.columns[static_cast<std::size_t>(merged_cols[k])].name;
			if (refit_abs_t(narrow, name) >= cut) {
				selected.push_back(merged[k]);
				selected_cols.push_back(merged_cols[k]);
			}
		}
	}

	// Final refit on the survivors for reported scores and the fitted trend.
	const LinearFit final_fit = refit_support(design, factors, y, selected_cols);
	result.changepoints = selected;
	for (Eigen::Index col : selected_cols) {
		result.scores.push_back(
		    sd * std::abs(final_fit.coefficient(design.columns[static_cast<std::size_t>(col)].name)));
	}

	GrowthSpec final_growth;
	final_growth.func = GrowthFunc::linear;
	final_growth.changepoints = result.changepoints;
	const std::vector<Timestamp> orig_grid = work.grid();
	NamedColumns trend_cols = growth_basis(orig_grid, final_growth, ctx);
	result.fitted_trend.assign(ts.size(), final_fit.intercept);
	for (std::size_t c = 0; c < trend_cols.columns.size(); ++c) {
		// Hinge columns renumber after merging; map coefficients by position.
		const std::string &name =
		    c == 0 ? trend_cols.columns[0].name
		           : design.columns[static_cast<std::size_t>(selected_cols[c - 1])].name;
		const double b = final_fit.coefficient(name);
		for (std::size_t i = 0; i < ts.size(); ++i) {
			result.fitted_trend[i] += b * trend_cols.values(static_cast<Eigen::Index>(i),
			                                                static_cast<Eigen::Index>(c));
		}
	}
	for (double &v : result.fitted_trend) v *= sd;
	return result;
}

SeasonalityDetectionResult detect_seasonality_changepoints(const TimeSeries &ts,
                                                           std::span<const SeasonalitySpec> periods,
                                                           const DetectionConfig &cfg,
                                                           const TrendDetectionResult &trend) {
	const std::size_t n = ts.size();
	if (n < 10) fail(errc::too_short, "need at least 10 points for detection");
	if (trend.fitted_trend.size() != n) {
		fail(errc::column_mismatch, "trend fit does not cover the series");
	}

	TimeSeries work = impute_linear(ts).series;
	std::vector<double> detrended(n);
	for (std::size_t i = 0; i < n; ++i) detrended[i] = work.values[i] - trend.fitted_trend[i];

	SeasonalityDetectionResult result;
	const double sd = stddev(detrended);
	if (sd < 1e-12) return result;
	Eigen::VectorXd y(static_cast<Eigen::Index>(n));
	for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = detrended[i] / sd;

	const std::vector<Timestamp> grid = work.grid();
	const FeatureContext ctx{work.start, grid.back(), work.freq};
	const auto cand_idx = candidate_indices(n, cfg.n_candidates, cfg.end_exclusion_frac);
	result.candidate_count = static_cast<int>(cand_idx.size());
	if (cand_idx.empty()) return result;

	FeatureConfig fc;
	for (const SeasonalitySpec &p : periods) {
		SeasonalitySpec with_cps = p;
		with_cps.changepoints.clear();
		for (std::size_t idx : cand_idx) with_cps.changepoints.push_back(grid[idx]);
		fc.seasonality.push_back(with_cps);
	}
	DesignMatrix design = build_design_matrix(grid, fc, ctx, {}, {});

	// scp columns are penalized; base Fourier stays free.
	Eigen::VectorXd factors = Eigen::VectorXd::Zero(design.ncols());
	std::size_t n_penalized = 0;
	for (Eigen::Index j = 0; j < design.ncols(); ++j) {
		if (design.columns[static_cast<std::size_t>(j)].name.rfind("scp", 0) == 0) {
			factors[j] = 1.0;
			++n_penalized;
		}
	}

	LinearFit lasso = path_weighted_lasso(design.values, design.names(), y, factors,
	                                      cfg.lambda_strength);
	const double cut = refit_t_cut(n_penalized);
	const double min_days = cfg.min_distance_days.value_or(30.0);
	const std::int64_t min_sep = static_cast<std::int64_t>(min_days * 86400.0);

	for (const SeasonalitySpec &p : periods) {
		// A candidate survives the lasso when any coefficient of its block is
		// nonzero; its interim score is the largest |lasso coefficient|.
		std::vector<Timestamp> selected;
		std::vector<std::vector<Eigen::Index>> blocks;
		std::vector<double> lasso_scores;
		for (std::size_t k = 0; k < cand_idx.size(); ++k) {
			const std::string prefix = "scp" + std::to_string(k + 1) + "_";
			std::vector<Eigen::Index> block;
			double score = 0.0;
			for (Eigen::Index j = 0; j < design.ncols(); ++j) {
				const auto &col = design.columns[static_cast<std::size_t>(j)];
				if (col.season_tag == p.tag && col.name.rfind(prefix, 0) == 0) {
					block.push_back(j);
					score = std::max(score, std::abs(lasso.coefficient(col.name)));
				}
			}
			if (score > kSelectEps) {
				selected.push_back(grid[cand_idx[k]]);
				blocks.push_back(std::move(block));
				lasso_scores.push_back(score);
			}
		}
		if (selected.empty()) continue;

		// Merge adjacent survivors first, then screen the small refit.
		const auto merged = merge_changepoints(selected, lasso_scores, min_sep);
		std::vector<std::vector<Eigen::Index>> merged_blocks;
		for (const Timestamp m : merged) {
			for (std::size_t k = 0; k < selected.size(); ++k) {
				if (selected[k] == m) merged_blocks.push_back(blocks[k]);
			}
		}
		std::vector<Eigen::Index> extra;
		for (const auto &block : merged_blocks) extra.insert(extra.end(), block.begin(), block.end());
		const LinearFit refit = refit_support(design, factors, y, extra);

		std::vector<Timestamp> kept;
		std::vector<double> kept_scores;
		for (std::size_t k = 0; k < merged.size(); ++k) {
			double score = 0.0;
			double t = 0.0;
			for (Eigen::Index j : merged_blocks[k]) {
				const std::string &name = design.columns[static_cast<std::size_t>(j)].name;
				score = std::max(score, std::abs(refit.coefficient(name)));
				t = std::max(t, refit_abs_t(refit, name));
			}
			if (t >= cut) {
				kept.push_back(merged[k]);
				kept_scores.push_back(score * sd);
			}
		}
		if (kept.empty()) continue;
		result.changepoints[p.tag] = kept;
		result.scores[p.tag] = kept_scores;
	}
	return result;
}

} // namespace silverkite
