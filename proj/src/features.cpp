#include "silverkite/features.hpp"

#include "silverkite/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>

namespace silverkite {

double growth_value(GrowthFunc f, double t) {
	switch (f) {
	case GrowthFunc::linear: return t;
	case GrowthFunc::sqrt: return std::sqrt(std::max(t, 0.0));
	case GrowthFunc::quadratic: return t * t;
	}
	return t;
}

std::string growth_func_name(GrowthFunc f) {
	switch (f) {
	case GrowthFunc::linear: return "linear";
	case GrowthFunc::sqrt: return "sqrt";
	case GrowthFunc::quadratic: return "quadratic";
	}
	return "linear";
}

SeasonalitySpec daily_seasonality(int order) { return {"daily", order, 0.0, {}}; }
SeasonalitySpec weekly_seasonality(int order) { return {"weekly", order, 0.0, {}}; }
SeasonalitySpec yearly_seasonality(int order) { return {"yearly", order, 0.0, {}}; }

int LagSpec::max_order() const {
	int m = 0;
	for (int l : lags) m = std::max(m, l);
	for (const auto &set : agg_lags) {
		for (int l : set) m = std::max(m, l);
	}
	return m;
}

int LagSpec::min_order() const {
	int m = 0;
	bool any = false;
	for (int l : lags) {
		m = any ? std::min(m, l) : l;
		any = true;
	}
	for (const auto &set : agg_lags) {
		for (int l : set) {
			m = any ? std::min(m, l) : l;
			any = true;
		}
	}
	return any ? m : 0;
}

std::string sanitize_name(std::string_view raw) {
	std::string out;
	out.reserve(raw.size());
	for (char c : raw) {
		if (std::isalnum(static_cast<unsigned char>(c))) {
			out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
		} else {
			out += '_';
		}
	}
	return out;
}

std::vector<std::string> DesignMatrix::names() const {
	std::vector<std::string> out(columns.size());
	for (std::size_t i = 0; i < columns.size(); ++i) out[i] = columns[i].name;
	return out;
}

Eigen::Index DesignMatrix::index_of(const std::string &name) const {
	for (std::size_t i = 0; i < columns.size(); ++i) {
		if (columns[i].name == name) return static_cast<Eigen::Index>(i);
	}
	return -1;
}

void DesignMatrix::refresh_interactions(Eigen::Index row) {
	for (std::size_t k = 0; k < interaction_refs.size(); ++k) {
		const auto [a, b] = interaction_refs[k];
		values(row, interaction_start + static_cast<Eigen::Index>(k)) = values(row, a) * values(row, b);
	}
}

// --- time features ----------------------------------------------------------

const std::vector<std::string> &indicator_feature_names() {
	static const std::vector<std::string> names = {
	    "is_weekend", "month_start", "month_end", "quarter_start", "quarter_end",
	};
	return names;
}

NamedColumns time_features(std::span<const Timestamp> grid) {
	NamedColumns out;
	const std::vector<std::string> names = {
	    "tod", "dow", "is_weekend", "dom", "doy_frac",
	    "month_start", "month_end", "quarter_start", "quarter_end",
	};
	for (const auto &n : names) out.columns.push_back({n, ColumnGroup::events, ""});
	out.values.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(names.size()));

	for (std::size_t i = 0; i < grid.size(); ++i) {
		const Timestamp t = grid[i];
		const CivilDateTime c = civil_from_timestamp(t);
		const double tod = time_of_day_fraction(t);
		const int dow = day_of_week(t);
		const int year_len = is_leap_year(c.year) ? 366 : 365;
		const bool month_end = c.day == days_in_month(c.year, c.month);
		const bool quarter_start = c.day == 1 && (c.month == 1 || c.month == 4 || c.month == 7 || c.month == 10);
		const bool quarter_end = month_end && (c.month == 3 || c.month == 6 || c.month == 9 || c.month == 12);
		const Eigen::Index r = static_cast<Eigen::Index>(i);
		out.values(r, 0) = tod;
		out.values(r, 1) = dow;
		out.values(r, 2) = dow >= 5 ? 1.0 : 0.0;
		out.values(r, 3) = c.day;
		out.values(r, 4) = (day_of_year(t) - 1 + tod) / year_len;
		out.values(r, 5) = c.day == 1 ? 1.0 : 0.0;
		out.values(r, 6) = month_end ? 1.0 : 0.0;
		out.values(r, 7) = quarter_start ? 1.0 : 0.0;
		out.values(r, 8) = quarter_end ? 1.0 : 0.0;
	}
	return out;
}

// --- seasonality ------------------------------------------------------------

Eigen::VectorXd seasonal_fraction(std::span<const Timestamp> grid, const SeasonalitySpec &spec,
                                  const FeatureContext &ctx) {
	Eigen::VectorXd d(static_cast<Eigen::Index>(grid.size()));
	if (!spec.is_named()) {
		for (std::size_t i = 0; i < grid.size(); ++i) {
			const double u = ctx.t_units(grid[i]);
			double frac = std::fmod(u / spec.period_units, 1.0);
			if (frac < 0) frac += 1.0;
			d[static_cast<Eigen::Index>(i)] = frac;
		}
		return d;
	}
	for (std::size_t i = 0; i < grid.size(); ++i) {
		const Timestamp t = grid[i];
		double frac = 0.0;
		if (spec.tag == "daily") {
			frac = time_of_day_fraction(t);
		} else if (spec.tag == "weekly") {
			frac = (day_of_week(t) + time_of_day_fraction(t)) / 7.0;
		} else if (spec.tag == "yearly") {
			const CivilDateTime c = civil_from_timestamp(t);
			const int year_len = is_leap_year(c.year) ? 366 : 365;
			frac = (day_of_year(t) - 1 + time_of_day_fraction(t)) / year_len;
		} else {
			fail(errc::bad_config, "named seasonality '" + spec.tag + "' has no period length");
		}
		d[static_cast<Eigen::Index>(i)] = frac;
	}
	return d;
}

NamedColumns fourier_terms(const Eigen::VectorXd &d, int order, const std::string &tag) {
	NamedColumns out;
	out.values.resize(d.size(), 2 * order);
	for (int m = 1; m <= order; ++m) {
		out.columns.push_back({"sin" + std::to_string(m) + "_" + tag, ColumnGroup::seasonality, tag});
		out.columns.push_back({"cos" + std::to_string(m) + "_" + tag, ColumnGroup::seasonality, tag});
		for (Eigen::Index i = 0; i < d.size(); ++i) {
			const double angle = 2.0 * std::numbers::pi * m * d[i];
			out.values(i, 2 * (m - 1)) = std::sin(angle);
			out.values(i, 2 * (m - 1) + 1) = std::cos(angle);
		}
	}
	return out;
}

// --- growth ------------------------------------------------------------------

NamedColumns growth_basis(std::span<const Timestamp> grid, const GrowthSpec &spec,
                          const FeatureContext &ctx) {
	for (const Timestamp cp : spec.changepoints) {
		if (cp <= ctx.train_start || cp > ctx.train_end) {
			fail(errc::changepoint_out_of_range,
			     "trend changepoint " + format_iso8601(cp, true) + " outside the training range");
		}
	}
	NamedColumns out;
	const std::string fname = growth_func_name(spec.func);
	out.columns.push_back({"growth_" + fname, ColumnGroup::trend, ""});
	for (std::size_t k = 0; k < spec.changepoints.size(); ++k) {
		out.columns.push_back({"cp" + std::to_string(k + 1) + "_" + fname, ColumnGroup::trend, ""});
	}
	out.values.resize(static_cast<Eigen::Index>(grid.size()),
	                  static_cast<Eigen::Index>(1 + spec.changepoints.size()));
	std::vector<double> cp_units(spec.changepoints.size());
	for (std::size_t k = 0; k < spec.changepoints.size(); ++k) {
		cp_units[k] = ctx.t_units(spec.changepoints[k]);
	}
	for (std::size_t i = 0; i < grid.size(); ++i) {
		const double t = ctx.t_units(grid[i]);
		const Eigen::Index r = static_cast<Eigen::Index>(i);
		out.values(r, 0) = growth_value(spec.func, t);
		for (std::size_t k = 0; k < cp_units.size(); ++k) {
			out.values(r, static_cast<Eigen::Index>(k) + 1) =
			    t > cp_units[k] ? growth_value(spec.func, t) - growth_value(spec.func, cp_units[k]) : 0.0;
		}
	}
	return out;
}

NamedColumns seasonality_cp_basis(std::span<const Timestamp> grid, const SeasonalitySpec &spec,
                                  const FeatureContext &ctx) {
	for (const Timestamp cp : spec.changepoints) {
		if (cp <= ctx.train_start || cp > ctx.train_end) {
			fail(errc::changepoint_out_of_range,
			     "seasonality changepoint " + format_iso8601(cp, true) + " outside the training range");
		}
	}
	const Eigen::VectorXd d = seasonal_fraction(grid, spec, ctx);
	NamedColumns base = fourier_terms(d, spec.order, spec.tag);
	NamedColumns out = base;
	if (spec.changepoints.empty()) return out;

	const Eigen::Index n = base.values.rows();
	const Eigen::Index w = base.values.cols();
	out.values.conservativeResize(n, w * static_cast<Eigen::Index>(1 + spec.changepoints.size()));
	for (std::size_t k = 0; k < spec.changepoints.size(); ++k) {
		const double cp_u = ctx.t_units(spec.changepoints[k]);
		const Eigen::Index block = w * static_cast<Eigen::Index>(k + 1);
		for (Eigen::Index c = 0; c < w; ++c) {
			out.columns.push_back({"scp" + std::to_string(k + 1) + "_" + base.columns[c].name,
			                       ColumnGroup::seasonality, spec.tag});
		}
		for (std::size_t i = 0; i < grid.size(); ++i) {
			const double on = ctx.t_units(grid[i]) > cp_u ? 1.0 : 0.0;
			const Eigen::Index r = static_cast<Eigen::Index>(i);
			for (Eigen::Index c = 0; c < w; ++c) {
				out.values(r, block + c) = on * base.values(r, c);
			}
		}
	}
	return out;
}

// --- events -------------------------------------------------------------------

NamedColumns event_indicators(std::span<const Timestamp> grid, std::span<const EventSpec> specs) {
	NamedColumns out;
	Eigen::Index ncols = 0;
	for (const EventSpec &e : specs) ncols += 1 + e.pre_days + e.post_days;
	out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()), ncols);

	std::vector<Timestamp> days(grid.size());
	for (std::size_t i = 0; i < grid.size(); ++i) days[i] = floor_to_day(grid[i]);

	Eigen::Index col = 0;
	for (const EventSpec &e : specs) {
		const std::string name = sanitize_name(e.name);
		std::vector<int> offsets;
		std::vector<std::string> names;
		names.push_back(name);
		offsets.push_back(0);
		for (int j = 1; j <= e.pre_days; ++j) {
			names.push_back(name + "_m" + std::to_string(j));
			offsets.push_back(-j);
		}
		for (int j = 1; j <= e.post_days; ++j) {
			names.push_back(name + "_p" + std::to_string(j));
			offsets.push_back(j);
		}
		for (std::size_t v = 0; v < names.size(); ++v) {
			out.columns.push_back({names[v], ColumnGroup::events, ""});
			std::set<Timestamp> marked;
			for (const Timestamp date : e.dates) {
				marked.insert(floor_to_day(date) + static_cast<Timestamp>(offsets[v]) * 86400);
			}
			for (std::size_t i = 0; i < grid.size(); ++i) {
				if (marked.count(days[i])) {
					out.values(static_cast<Eigen::Index>(i), col) = 1.0;
				}
			}
			++col;
		}
	}
	return out;
}

// --- lags ----------------------------------------------------------------------

namespace {

std::string agg_lag_name(const std::vector<int> &lags) {
	std::string name = "y_avglag";
	for (int l : lags) name += "_" + std::to_string(l);
	return name;
}

} // namespace

NamedColumns lag_features(std::span<const double> y, const LagSpec &spec) {
	NamedColumns out;
	const Eigen::Index n = static_cast<Eigen::Index>(y.size());
	out.values.resize(n, static_cast<Eigen::Index>(spec.lags.size() + spec.agg_lags.size()));
	Eigen::Index col = 0;
	for (int r : spec.lags) {
		out.columns.push_back({"y_lag" + std::to_string(r), ColumnGroup::autoregression, ""});
		for (Eigen::Index i = 0; i < n; ++i) {
			out.values(i, col) = i >= r ? y[static_cast<std::size_t>(i - r)] : kMissing;
		}
		++col;
	}
	for (const auto &set : spec.agg_lags) {
		out.columns.push_back({agg_lag_name(set), ColumnGroup::autoregression, ""});
		for (Eigen::Index i = 0; i < n; ++i) {
			double acc = 0.0;
			bool ok = true;
			for (int r : set) {
				if (i < r || is_missing(y[static_cast<std::size_t>(i - r)])) {
					ok = false;
					break;
				}
				acc += y[static_cast<std::size_t>(i - r)];
			}
			out.values(i, col) = ok ? acc / static_cast<double>(set.size()) : kMissing;
		}
		++col;
	}
	return out;
}

Eigen::VectorXd lag_row(std::span<const double> y_extended, std::size_t idx, const LagSpec &spec) {
	Eigen::VectorXd row(static_cast<Eigen::Index>(spec.lags.size() + spec.agg_lags.size()));
	Eigen::Index col = 0;
	for (int r : spec.lags) {
		row[col++] = idx >= static_cast<std::size_t>(r) ? y_extended[idx - r] : kMissing;
	}
	for (const auto &set : spec.agg_lags) {
		double acc = 0.0;
		bool ok = true;
		for (int r : set) {
			if (idx < static_cast<std::size_t>(r) || is_missing(y_extended[idx - r])) {
				ok = false;
				break;
			}
			acc += y_extended[idx - r];
		}
		row[col++] = ok ? acc / static_cast<double>(set.size()) : kMissing;
	}
	return row;
}

// --- interactions ----------------------------------------------------------------

bool glob_match(std::string_view pattern, std::string_view text) {
	// Iterative '*' matcher with backtracking.
	std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
	while (t < text.size()) {
		if (p < pattern.size() && (pattern[p] == text[t])) {
			++p;
			++t;
		} else if (p < pattern.size() && pattern[p] == '*') {
			star = p++;
			mark = t;
		} else if (star != std::string_view::npos) {
			p = star + 1;
			t = ++mark;
		} else {
			return false;
		}
	}
	while (p < pattern.size() && pattern[p] == '*') ++p;
	return p == pattern.size();
}

std::vector<std::pair<Eigen::Index, Eigen::Index>>
resolve_interactions(std::span<const ColumnInfo> columns, std::span<const InteractionSpec> specs) {
	std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
	for (const InteractionSpec &spec : specs) {
		std::vector<Eigen::Index> left, right;
		for (std::size_t i = 0; i < columns.size(); ++i) {
			if (glob_match(spec.left, columns[i].name)) left.push_back(static_cast<Eigen::Index>(i));
			if (glob_match(spec.right, columns[i].name)) right.push_back(static_cast<Eigen::Index>(i));
		}
		if (left.empty()) fail(errc::pattern_unmatched, "interaction pattern '" + spec.left + "' matches no column");
		if (right.empty()) fail(errc::pattern_unmatched, "interaction pattern '" + spec.right + "' matches no column");
		for (Eigen::Index a : left) {
			for (Eigen::Index b : right) {
				if (a != b) pairs.emplace_back(a, b);
			}
		}
	}
	return pairs;
}

NamedColumns interaction_terms(const NamedColumns &base, std::span<const InteractionSpec> specs) {
	NamedColumns out;
	const auto pairs = resolve_interactions(base.columns, specs);
	out.values.resize(base.values.rows(), static_cast<Eigen::Index>(pairs.size()));
	for (std::size_t k = 0; k < pairs.size(); ++k) {
		const auto [a, b] = pairs[k];
		out.columns.push_back({base.columns[static_cast<std::size_t>(a)].name + ":" +
		                           base.columns[static_cast<std::size_t>(b)].name,
		                       ColumnGroup::interactions, ""});
		out.values.col(static_cast<Eigen::Index>(k)) =
		    base.values.col(a).cwiseProduct(base.values.col(b));
	}
	return out;
}

// --- assembly --------------------------------------------------------------------

int categorical_feature_value(const std::string &name, Timestamp t) {
	if (name == "dow") return day_of_week(t);
	if (name == "is_weekend") return day_of_week(t) >= 5 ? 1 : 0;
	if (name == "hour") return civil_from_timestamp(t).hour;
	if (name == "month") return civil_from_timestamp(t).month;
	if (name == "dom") return civil_from_timestamp(t).day;
	fail(errc::bad_config, "unknown categorical feature '" + name + "'");
}

DesignMatrix build_design_matrix(std::span<const Timestamp> grid, const FeatureConfig &config,
                                 const FeatureContext &ctx, std::span<const double> y_extended,
                                 const std::map<std::string, std::vector<double>> &regressor_values,
                                 std::size_t history_len) {
	const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
	NamedColumns assembled;
	assembled.columns.push_back({"intercept", ColumnGroup::intercept, ""});
	assembled.values = Eigen::MatrixXd::Ones(n, 1);

	auto append = [&](const NamedColumns &cols) {
		if (cols.values.cols() == 0) return;
		const Eigen::Index w = assembled.values.cols();
		assembled.values.conservativeResize(n, w + cols.values.cols());
		assembled.values.rightCols(cols.values.cols()) = cols.values;
		assembled.columns.insert(assembled.columns.end(), cols.columns.begin(), cols.columns.end());
	};

	if (config.growth) {
		append(growth_basis(grid, *config.growth, ctx));
	}

	// Seasonality blocks sorted by period length, shortest first.
	std::vector<const SeasonalitySpec *> season;
	for (const auto &s : config.seasonality) {
		if (s.order > 0) season.push_back(&s);
	}
	auto period_len = [&](const SeasonalitySpec &s) {
		if (!s.is_named()) return s.period_units * ctx.freq.mean_step_seconds();
		if (s.tag == "daily") return 86400.0;
		if (s.tag == "weekly") return 604800.0;
		return 31557600.0; // yearly
	};
	std::stable_sort(season.begin(), season.end(), [&](const auto *a, const auto *b) {
		return period_len(*a) < period_len(*b);
	});
	// Base Fourier for every period first, then changepoint blocks.
	std::vector<NamedColumns> season_cols;
	for (const auto *s : season) season_cols.push_back(seasonality_cp_basis(grid, *s, ctx));
	for (std::size_t i = 0; i < season_cols.size(); ++i) {
		NamedColumns base;
		const Eigen::Index w = 2 * season[i]->order;
		base.columns.assign(season_cols[i].columns.begin(), season_cols[i].columns.begin() + w);
		base.values = season_cols[i].values.leftCols(w);
		append(base);
	}
	for (std::size_t i = 0; i < season_cols.size(); ++i) {
		const Eigen::Index w = 2 * season[i]->order;
		if (season_cols[i].values.cols() == w) continue;
		NamedColumns cp;
		cp.columns.assign(season_cols[i].columns.begin() + w, season_cols[i].columns.end());
		cp.values = season_cols[i].values.rightCols(season_cols[i].values.cols() - w);
		append(cp);
	}

	if (!config.events.empty()) {
		append(event_indicators(grid, config.events));
	}

	if (!config.indicators.empty()) {
		NamedColumns tf = time_features(grid);
		NamedColumns picked;
		std::vector<Eigen::Index> idx;
		for (const std::string &want : indicator_feature_names()) {
			if (std::find(config.indicators.begin(), config.indicators.end(), want) ==
			    config.indicators.end()) {
				continue;
			}
			for (std::size_t i = 0; i < tf.columns.size(); ++i) {
				if (tf.columns[i].name == want) idx.push_back(static_cast<Eigen::Index>(i));
			}
		}
		for (const std::string &want : config.indicators) {
			if (std::find(indicator_feature_names().begin(), indicator_feature_names().end(), want) ==
			    indicator_feature_names().end()) {
				fail(errc::bad_config, "unknown indicator feature '" + want + "'");
			}
		}
		picked.values.resize(n, static_cast<Eigen::Index>(idx.size()));
		for (std::size_t k = 0; k < idx.size(); ++k) {
			picked.columns.push_back({tf.columns[static_cast<std::size_t>(idx[k])].name,
			                          ColumnGroup::events, ""});
			picked.values.col(static_cast<Eigen::Index>(k)) = tf.values.col(idx[k]);
		}
		append(picked);
	}

	if (!config.lags.empty()) {
		NamedColumns lc;
		lc.values.resize(n, static_cast<Eigen::Index>(config.lags.lags.size() +
		                                              config.lags.agg_lags.size()));
		{
			NamedColumns proto = lag_features(std::span<const double>{}, config.lags);
			lc.columns = proto.columns;
		}
		for (Eigen::Index i = 0; i < n; ++i) {
			lc.values.row(i) =
			    lag_row(y_extended, history_len + static_cast<std::size_t>(i), config.lags)
			        .transpose();
		}
		append(lc);
	}

	for (const RegressorSpec &reg : config.regressors) {
		auto it = regressor_values.find(reg.name);
		if (it == regressor_values.end()) {
			fail(errc::bad_config, "regressor '" + reg.name + "' not present in the input");
		}
		if (it->second.size() < history_len + grid.size()) {
			fail(errc::bad_data, "regressor '" + reg.name + "' length mismatch");
		}
		NamedColumns rc;
		const std::string base = sanitize_name(reg.name);
		rc.values.resize(n, 1);
		if (reg.mode == RegressorMode::lagged) {
			rc.columns.push_back({base + "_lag" + std::to_string(reg.lag), ColumnGroup::regressors, ""});
			for (Eigen::Index i = 0; i < n; ++i) {
				const std::size_t global = history_len + static_cast<std::size_t>(i);
				rc.values(i, 0) = global >= static_cast<std::size_t>(reg.lag)
				                      ? it->second[global - static_cast<std::size_t>(reg.lag)]
				                      : kMissing;
			}
		} else {
			rc.columns.push_back({base, ColumnGroup::regressors, ""});
			for (Eigen::Index i = 0; i < n; ++i) {
				rc.values(i, 0) = it->second[history_len + static_cast<std::size_t>(i)];
			}
		}
		append(rc);
	}

	DesignMatrix out;
	out.interaction_start = assembled.values.cols();
	if (!config.interactions.empty()) {
		out.interaction_refs = resolve_interactions(assembled.columns, config.interactions);
		append(interaction_terms(assembled, config.interactions));
	}

	std::set<std::string> seen;
	for (const ColumnInfo &c : assembled.columns) {
		if (!seen.insert(c.name).second) {
			fail(errc::duplicate_column_name, "duplicate design column '" + c.name + "'");
		}
	}

	out.columns = std::move(assembled.columns);
	out.values = std::move(assembled.values);
	out.grid.assign(grid.begin(), grid.end());
	out.usable.assign(grid.size(), 1);
	for (Eigen::Index i = 0; i < n; ++i) {
		for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
			if (std::isnan(out.values(i, j))) {
				out.usable[static_cast<std::size_t>(i)] = 0;
				out.values(i, j) = 0.0; // row is excluded from fitting anyway
			}
		}
	}
	return out;
}

} // namespace silverkite
