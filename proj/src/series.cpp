#include "silverkite/series.hpp"

#include "silverkite/error.hpp"

#include <algorithm>
#include <map>

namespace silverkite {

std::vector<Timestamp> TimeSeries::grid() const {
	std::vector<Timestamp> g(size());
	for (std::size_t i = 0; i < size(); ++i) g[i] = timestamp_at(i);
	return g;
}

std::size_t TimeSeries::count_observed() const {
	std::size_t n = 0;
	for (double v : values) {
		if (!is_missing(v)) ++n;
	}
	return n;
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t last) const {
	TimeSeries out;
	out.start = timestamp_at(first);
	out.freq = freq;
	out.values.assign(values.begin() + first, values.begin() + last + 1);
	return out;
}

namespace {

// Frequencies considered during inference. Exotic multiples (13-hour grids
// and the like) are treated as irregular rather than invented.
const std::vector<Frequency> &candidate_frequencies() {
	static const std::vector<Frequency> cands = [] {
		std::vector<Frequency> v;
		for (int m : {1, 5, 10, 15, 20, 30}) v.push_back({FreqUnit::minute, m});
		for (int m : {1, 2, 3, 4, 6, 8, 12}) v.push_back({FreqUnit::hour, m});
		v.push_back({FreqUnit::day, 1});
		for (int m : {1, 2, 4}) v.push_back({FreqUnit::week, m});
		for (int m : {1, 3}) v.push_back({FreqUnit::month, m});
		return v;
	}();
	return cands;
}

struct GapFit {
	double fraction = 0.0;   // gaps with both endpoints on the grid
	double density = 0.0;    // observed points over implied grid slots
};

GapFit explained_gap_fit(std::span<const TimePoint> points, const Frequency &freq) {
	std::size_t explained = 0;
	std::vector<bool> on_grid(points.size());
	for (std::size_t i = 0; i < points.size(); ++i) {
		on_grid[i] = steps_between(points[0].ts, freq, points[i].ts) >= 0;
	}
	for (std::size_t i = 0; i + 1 < points.size(); ++i) {
		if (on_grid[i] && on_grid[i + 1]) ++explained;
	}
	GapFit fit;
	fit.fraction = static_cast<double>(explained) / static_cast<double>(points.size() - 1);
	const std::int64_t last = steps_between(points[0].ts, freq, points.back().ts);
	const double slots = last >= 0
	    ? static_cast<double>(last + 1)
	    : std::max(1.0, grid_units_between(points[0].ts, freq, points.back().ts) + 1.0);
	fit.density = static_cast<double>(points.size()) / slots;
	return fit;
}

} // namespace

TimeSeries validate(std::span<const TimePoint> points) {
	if (points.empty()) fail(errc::empty_input, "no data points");
	for (std::size_t i = 0; i + 1 < points.size(); ++i) {
		if (points[i + 1].ts <= points[i].ts) {
			fail(errc::irregular_grid, "timestamps must be strictly increasing");
		}
	}

	TimeSeries out;
	out.start = points[0].ts;

	if (points.size() == 1) {
		out.freq = {FreqUnit::day, 1};
		out.values = {points[0].value};
	} else {
		// Modal gap picks the preferred candidate; the 90% rule decides
		// whether any candidate explains the grid at all.
		std::map<std::int64_t, std::size_t> gap_counts;
		for (std::size_t i = 0; i + 1 < points.size(); ++i) {
			++gap_counts[points[i + 1].ts - points[i].ts];
		}
		std::int64_t modal_gap = 0;
		std::size_t modal_count = 0;
		for (const auto &[gap, count] : gap_counts) {
			if (count > modal_count) {
				modal_gap = gap;
				modal_count = count;
			}
		}

		// A candidate whose single step equals the modal gap wins outright.
		// Otherwise the series is only accepted as a sparse view of a coarser
		// grid when the implied grid is at least half observed; two points 13
		// hours apart are irregular, not hourly data with twelve holes.
		const Frequency *best = nullptr;
		double best_fraction = 0.0;
		bool best_matches_modal = false;
		for (const Frequency &cand : candidate_frequencies()) {
			const GapFit fit = explained_gap_fit(points, cand);
			if (fit.fraction < 0.9) continue;
			const bool matches_modal = cand.is_calendar()
			    ? (modal_gap >= 28 * 86400ll * cand.multiple && modal_gap <= 31 * 86400ll * cand.multiple)
			    : (cand.step_seconds() == modal_gap);
			if (!matches_modal && fit.density < 0.5) continue;
			bool better = false;
			if (best == nullptr) better = true;
			else if (matches_modal != best_matches_modal) better = matches_modal;
			else if (fit.fraction != best_fraction) better = fit.fraction > best_fraction;
			else better = cand.mean_step_seconds() > best->mean_step_seconds();
			if (better) {
				best = &cand;
				best_fraction = fit.fraction;
				best_matches_modal = matches_modal;
			}
		}
		if (best == nullptr) {
			fail(errc::irregular_grid, "no candidate frequency explains >= 90% of gaps");
		}
		out.freq = *best;

		const std::int64_t last_step = [&] {
			std::int64_t s = steps_between(out.start, out.freq, points.back().ts);
			if (s >= 0) return s;
			// Off-grid final point: use its continuous position, rounded.
			return static_cast<std::int64_t>(
			    std::llround(grid_units_between(out.start, out.freq, points.back().ts)));
		}();
		out.values.assign(static_cast<std::size_t>(last_step) + 1, kMissing);
		for (const TimePoint &p : points) {
			std::int64_t s = steps_between(out.start, out.freq, p.ts);
			if (s < 0) {
				// Tolerated off-grid point (within the 10% slack): snap to the
				// nearest slot without displacing an exact observation.
				std::int64_t near = static_cast<std::int64_t>(
				    std::llround(grid_units_between(out.start, out.freq, p.ts)));
				if (near >= 0 && near < static_cast<std::int64_t>(out.values.size()) &&
				    is_missing(out.values[static_cast<std::size_t>(near)])) {
					out.values[static_cast<std::size_t>(near)] = p.value;
				}
				continue;
			}
			out.values[static_cast<std::size_t>(s)] = p.value;
		}
	}

	if (out.count_observed() == 0) fail(errc::all_missing, "series has no observed values");
	return out;
}

std::vector<TimePoint> serialize(const TimeSeries &ts) {
	std::vector<TimePoint> points(ts.size());
	for (std::size_t i = 0; i < ts.size(); ++i) {
		points[i] = {ts.timestamp_at(i), ts.values[i]};
	}
	return points;
}

ImputeResult impute_linear(const TimeSeries &ts) {
	if (ts.count_observed() == 0) fail(errc::all_missing, "cannot impute an all-missing series");

	ImputeResult out;
	out.series = ts;
	out.imputed.assign(ts.size(), 0);
	auto &v = out.series.values;

	std::size_t first_obs = 0;
	while (is_missing(v[first_obs])) ++first_obs;
	std::size_t last_obs = v.size() - 1;
	while (is_missing(v[last_obs])) --last_obs;

	for (std::size_t i = 0; i < first_obs; ++i) {
		v[i] = v[first_obs];
		out.imputed[i] = 1;
	}
	for (std::size_t i = last_obs + 1; i < v.size(); ++i) {
		v[i] = v[last_obs];
		out.imputed[i] = 1;
	}

	std::size_t prev = first_obs;
	for (std::size_t i = first_obs + 1; i <= last_obs; ++i) {
		if (!is_missing(v[i])) {
			if (i > prev + 1) {
				const double lo = v[prev];
				const double hi = v[i];
				const double span = static_cast<double>(i - prev);
				for (std::size_t j = prev + 1; j < i; ++j) {
					v[j] = lo + (hi - lo) * static_cast<double>(j - prev) / span;
					out.imputed[j] = 1;
				}
			}
			prev = i;
		}
	}
	return out;
}

TimeSeries mask_anomalies(const TimeSeries &ts, std::span<const AnomalyWindow> windows) {
	TimeSeries out = ts;
	for (std::size_t i = 0; i < out.size(); ++i) {
		const Timestamp t = out.timestamp_at(i);
		for (const AnomalyWindow &w : windows) {
			if (t >= w.start_ts && t <= w.end_ts) {
				out.values[i] = kMissing;
				break;
			}
		}
	}
	return out;
}

TimeSeries aggregate(const TimeSeries &ts, const Frequency &target, AggStat stat) {
	if (!target.coarser_than(ts.freq)) {
		fail(errc::not_coarser, "target frequency " + frequency_name(target) +
		                            " is not strictly coarser than " + frequency_name(ts.freq));
	}

	TimeSeries out;
	out.start = ts.start;
	out.freq = target;

	std::size_t bucket = 0;
	Timestamp next_boundary = advance(ts.start, target, 1);
	double acc = 0.0;
	std::size_t n_obs = 0;
	std::vector<double> reduced;
	auto flush = [&] {
		if (n_obs == 0) {
			reduced.push_back(kMissing);
		} else {
			reduced.push_back(stat == AggStat::mean ? acc / static_cast<double>(n_obs) : acc);
		}
		acc = 0.0;
		n_obs = 0;
	};

	for (std::size_t i = 0; i < ts.size(); ++i) {
		const Timestamp t = ts.timestamp_at(i);
		while (t >= next_boundary) {
			flush();
			++bucket;
			next_boundary = advance(ts.start, target, static_cast<std::int64_t>(bucket) + 1);
		}
		if (!is_missing(ts.values[i])) {
			acc += ts.values[i];
			++n_obs;
		}
	}
	// The trailing bucket counts only when the series runs through its end.
	if (advance(ts.end_timestamp(), ts.freq, 1) >= next_boundary) {
		flush();
	}

	if (reduced.empty()) fail(errc::too_short, "no complete bucket at the target frequency");
	out.values = std::move(reduced);
	return out;
}

} // namespace silverkite
