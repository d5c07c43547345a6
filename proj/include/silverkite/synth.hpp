#pragma once

#include "silverkite/series.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace silverkite {

// Deterministic generator with recorded ground-truth components, used as the
// oracle for component-recovery and coverage tests.
struct SynthSpec {
	Timestamp start = 0;
	Frequency freq{FreqUnit::day, 1};
	int length = 0;
	double base_level = 0.0;

	// Piecewise-linear trend: slopes per segment (grid units), separated by
	// changepoints at the given fractional positions of the series.
	std::vector<double> trend_slopes = {0.0};
	std::vector<double> trend_cp_fracs;

	struct Seasonal {
		std::string tag; // "daily", "weekly", "yearly"
		double amplitude = 0.0;
		double phase = 0.0; // radians
	};
	std::vector<Seasonal> seasonal;

	double noise_sigma = 0.0;
	// Optional day-of-week specific noise scale (overrides noise_sigma).
	std::vector<double> dow_sigma;

	std::uint64_t seed = 42;
};

struct SynthResult {
	TimeSeries series;
	std::vector<double> trend;
	std::map<std::string, std::vector<double>> seasonal;
	std::vector<double> noise;
};

SynthResult synth_series(const SynthSpec &spec);

} // namespace silverkite
