#include "silverkite/volatility.hpp"

#include "silverkite/csv.hpp"
#include "silverkite/error.hpp"
#include "silverkite/stats.hpp"

#include <algorithm>
#include <cmath>

namespace silverkite {

double empirical_quantile(std::span<const double> sorted_sample, double p) {
	const std::size_t n = sorted_sample.size();
	if (n == 0) fail(errc::empty_input, "empty sample");
	if (n == 1) return sorted_sample[0];
	const double pos = p * static_cast<double>(n - 1);
	const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
	if (lo + 1 >= n) return sorted_sample[n - 1];
	const double frac = pos - static_cast<double>(lo);
	return sorted_sample[lo] * (1.0 - frac) + sorted_sample[lo + 1] * frac;
}

const VolatilityGroupTable::Group &VolatilityGroupTable::resolve(std::span<const int> key) const {
	for (std::size_t k = std::min(key.size(), features.size()); k + 1 > 0; --k) {
		const auto &level = levels[k];
		std::vector<int> prefix(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k));
		auto it = level.find(prefix);
		if (it != level.end()) return it->second;
		if (k == 0) break;
	}
	fail(errc::empty_input, "volatility table has no pooled group");
}

double VolatilityGroupTable::quantile(std::span<const int> key, double p) const {
	if (!(p > 0.0 && p < 1.0)) fail(errc::bad_config, "quantile level must lie in (0,1)");
	const Group &g = resolve(key);
	if (method == VolatilityMethod::gaussian) {
		return g.sigma * normal_quantile(p);
	}
	return empirical_quantile(g.sample, p);
}

double VolatilityGroupTable::draw(std::span<const int> key, Rng &rng) const {
	const Group &g = resolve(key);
	if (method == VolatilityMethod::gaussian) {
		return g.sigma * rng.normal();
	}
	return g.sample[static_cast<std::size_t>(rng.uniform_below(g.sample.size()))];
}

VolatilityGroupTable fit_volatility(const Eigen::VectorXd &residuals,
                                    const std::vector<std::vector<int>> &feature_rows,
                                    const std::vector<std::string> &features, int min_group_size,
                                    VolatilityMethod method) {
	if (residuals.size() < 1) fail(errc::empty_input, "volatility model needs residuals");
	if (feature_rows.size() != static_cast<std::size_t>(residuals.size())) {
		fail(errc::column_mismatch, "feature rows must align with residuals");
	}

	VolatilityGroupTable table;
	table.features = features;
	table.method = method;
	table.min_group_size = min_group_size;
	table.total_count = static_cast<int>(residuals.size());
	table.levels.resize(features.size() + 1);

	auto finalize_group = [&](VolatilityGroupTable::Group &g) {
		std::sort(g.sample.begin(), g.sample.end());
		double ssq = 0.0;
		for (double r : g.sample) ssq += r * r;
		g.sigma = std::sqrt(ssq / static_cast<double>(g.sample.size()));
		g.n = static_cast<int>(g.sample.size());
	};

	for (std::size_t k = 0; k <= features.size(); ++k) {
		std::map<std::vector<int>, VolatilityGroupTable::Group> groups;
		for (Eigen::Index i = 0; i < residuals.size(); ++i) {
			const auto &row = feature_rows[static_cast<std::size_t>(i)];
			if (row.size() != features.size()) {
				fail(errc::column_mismatch, "feature row width mismatch");
			}
			std::vector<int> key(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
			groups[key].sample.push_back(residuals[i]);
		}
		for (auto it = groups.begin(); it != groups.end();) {
			if (k > 0 && static_cast<int>(it->second.sample.size()) <= min_group_size) {
				it = groups.erase(it); // too small; lookups fall back a level
			} else {
				finalize_group(it->second);
				++it;
			}
		}
		table.levels[k] = std::move(groups);
	}

	table.covered_count = 0;
	for (const auto &[key, g] : table.levels[features.size()]) {
		(void)key;
		table.covered_count += g.n;
	}
	if (features.empty()) table.covered_count = table.total_count;
	table.fallback_count = table.total_count - table.covered_count;
	return table;
}

IntervalBand predict_interval(const VolatilityGroupTable &table, std::span<const double> forecasts,
                              const std::vector<std::vector<int>> &feature_rows, double alpha) {
	if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::bad_config, "alpha must lie in (0,1)");
	if (feature_rows.size() != forecasts.size()) {
		fail(errc::column_mismatch, "feature rows must align with forecasts");
	}
	IntervalBand band;
	band.lower.resize(forecasts.size());
	band.upper.resize(forecasts.size());
	for (std::size_t i = 0; i < forecasts.size(); ++i) {
		const double lo_off = table.quantile(feature_rows[i], alpha / 2.0);
		const double hi_off = table.quantile(feature_rows[i], 1.0 - alpha / 2.0);
		double lo = forecasts[i] + lo_off;
		double hi = forecasts[i] + hi_off;
		if (hi - lo <= 0.0) {
			const double eps = 1e-9 * std::max(1.0, std::abs(forecasts[i]));
			lo -= eps;
			hi += eps;
		}
		band.lower[i] = lo;
		band.upper[i] = hi;
	}
	return band;
}

std::string qq_plot_csv(const VolatilityGroupTable &table) {
	std::string out = "group,theoretical_q,sample_q\n";
	for (std::size_t k = table.levels.size(); k-- > 0;) {
		for (const auto &[key, g] : table.levels[k]) {
			std::string label;
			if (key.empty()) {
				label = "pool";
			} else {
				for (std::size_t j = 0; j < key.size(); ++j) {
					if (j > 0) label += '|';
					label += table.features[j] + "=" + std::to_string(key[j]);
				}
			}
			const int n = g.n;
			for (int i = 0; i < n; ++i) {
				const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
				out += label;
				out += ',';
				out += format_double(g.sigma * normal_quantile(p));
				out += ',';
				out += format_double(g.sample[static_cast<std::size_t>(i)]);
				out += '\n';
			}
		}
		if (k == 0) break;
	}
	return out;
}

} // namespace silverkite
