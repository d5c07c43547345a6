#pragma once

#include "silverkite/calendar.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace silverkite {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Uniformly spaced series; missing observations are stored as NaN so the grid
// itself is always complete.
struct TimeSeries {
	Timestamp start = 0;
	Frequency freq;
	std::vector<double> values;

	std::size_t size() const { return values.size(); }
	Timestamp timestamp_at(std::size_t i) const {
		return advance(start, freq, static_cast<std::int64_t>(i));
	}
	Timestamp end_timestamp() const { return timestamp_at(size() - 1); }
	std::vector<Timestamp> grid() const;
	std::size_t count_observed() const;
	// Sub-series over index range [first, last].
	TimeSeries slice(std::size_t first, std::size_t last) const;
};

struct AnomalyWindow {
	Timestamp start_ts = 0;
	Timestamp end_ts = 0; // inclusive
};

struct TimePoint {
	Timestamp ts = 0;
	double value = kMissing;
};

// Infers the frequency from the modal gap, fills absent grid points with
// missing entries, and returns the canonical series.
TimeSeries validate(std::span<const TimePoint> points);

// Inverse of validate for canonical series: one point per grid slot,
// missing values preserved.
std::vector<TimePoint> serialize(const TimeSeries &ts);

struct ImputeResult {
	TimeSeries series;
	std::vector<std::uint8_t> imputed; // 1 where the input value was missing
};

// Interior gaps are linearly interpolated; leading/trailing gaps take the
// nearest observed value.
ImputeResult impute_linear(const TimeSeries &ts);

// Returns a copy with every value inside any window set to missing.
TimeSeries mask_anomalies(const TimeSeries &ts, std::span<const AnomalyWindow> windows);

enum class AggStat { mean, sum };

// Reduces into buckets of the strictly coarser target frequency, anchored at
// ts.start. The incomplete trailing bucket is dropped; an all-missing bucket
// stays missing.
TimeSeries aggregate(const TimeSeries &ts, const Frequency &target, AggStat stat);

} // namespace silverkite
