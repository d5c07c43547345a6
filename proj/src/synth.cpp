#include "silverkite/synth.hpp"

#include "silverkite/error.hpp"
#include "silverkite/features.hpp"
#include "silverkite/rng.hpp"

#include <cmath>
#include <numbers>

namespace silverkite {

SynthResult synth_series(const SynthSpec &spec) {
	if (spec.length < 1) fail(errc::bad_config, "synthetic series needs length >= 1");
	if (spec.trend_slopes.size() != spec.trend_cp_fracs.size() + 1) {
		fail(errc::bad_config, "need one trend slope per segment");
	}

	SynthResult out;
	out.series.start = spec.start;
	out.series.freq = spec.freq;
	out.series.values.resize(static_cast<std::size_t>(spec.length));
	out.trend.resize(static_cast<std::size_t>(spec.length));
	out.noise.resize(static_cast<std::size_t>(spec.length));
	const std::vector<Timestamp> grid = out.series.grid();

	std::vector<double> cp_units;
	for (double f : spec.trend_cp_fracs) cp_units.push_back(f * (spec.length - 1));

	FeatureContext ctx{spec.start, grid.back(), spec.freq};
	for (const auto &s : spec.seasonal) out.seasonal[s.tag].resize(static_cast<std::size_t>(spec.length));

	Rng rng(spec.seed);
	for (int i = 0; i < spec.length; ++i) {
		const double t = static_cast<double>(i);
		// Continuous piecewise-linear trend.
		double trend = spec.base_level + spec.trend_slopes[0] * t;
		for (std::size_t k = 0; k < cp_units.size(); ++k) {
			if (t > cp_units[k]) {
				trend += (spec.trend_slopes[k + 1] - spec.trend_slopes[k]) * (t - cp_units[k]);
			}
		}
		out.trend[static_cast<std::size_t>(i)] = trend;

		double seasonal_sum = 0.0;
		for (const auto &s : spec.seasonal) {
			SeasonalitySpec sspec{s.tag, 1, 0.0, {}};
			const Timestamp ts[] = {grid[static_cast<std::size_t>(i)]};
			const double d = seasonal_fraction(ts, sspec, ctx)[0];
			const double v = s.amplitude * std::sin(2.0 * std::numbers::pi * d + s.phase);
			out.seasonal[s.tag][static_cast<std::size_t>(i)] = v;
			seasonal_sum += v;
		}

		double sigma = spec.noise_sigma;
		if (!spec.dow_sigma.empty()) {
			sigma = spec.dow_sigma[static_cast<std::size_t>(day_of_week(grid[static_cast<std::size_t>(i)])) %
			                       spec.dow_sigma.size()];
		}
		const double eps = sigma > 0.0 ? sigma * rng.normal() : 0.0;
		out.noise[static_cast<std::size_t>(i)] = eps;
		out.series.values[static_cast<std::size_t>(i)] = trend + seasonal_sum + eps;
	}
	return out;
}

} // namespace silverkite
