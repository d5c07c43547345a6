#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace silverkite {

// Seconds since the Unix epoch, UTC. No timezone arithmetic anywhere.
using Timestamp = std::int64_t;

struct CivilDateTime {
	int year = 1970;
	int month = 1; // 1..12
	int day = 1;   // 1..31
	int hour = 0;
	int minute = 0;
	int second = 0;
};

CivilDateTime civil_from_timestamp(Timestamp t);
Timestamp timestamp_from_civil(const CivilDateTime &c);
Timestamp timestamp_from_date(int year, int month, int day);

bool is_leap_year(int year);
int days_in_month(int year, int month);

// 0 = Monday .. 6 = Sunday.
int day_of_week(Timestamp t);
// 1-based day of year.
int day_of_year(Timestamp t);
// Fraction of the day elapsed since midnight, in [0, 1).
double time_of_day_fraction(Timestamp t);
// Midnight of the calendar day containing t.
Timestamp floor_to_day(Timestamp t);

// Accepts YYYY-MM-DD, optionally followed by THH:MM[:SS] (space also accepted).
Timestamp parse_iso8601(std::string_view text);
std::string format_iso8601(Timestamp t, bool with_time);

enum class FreqUnit { minute, hour, day, week, month };

struct Frequency {
	FreqUnit unit = FreqUnit::day;
	int multiple = 1;

	bool is_calendar() const { return unit == FreqUnit::month; }
	// Step length in seconds; calendar months are not fixed-length.
	std::int64_t step_seconds() const;
	// Average step length, used only to order frequencies by coarseness.
	double mean_step_seconds() const;
	bool coarser_than(const Frequency &other) const {
		return mean_step_seconds() > other.mean_step_seconds();
	}
	bool operator==(const Frequency &other) const = default;
};

std::string frequency_name(const Frequency &f);
// Parses "day", "2:hour", "week", ... (multiple prefix optional).
Frequency parse_frequency(std::string_view text);

// Grid arithmetic anchored at `start`. For month grids the day-of-month of
// `start` is the anchor and is clamped to each month's end (Jan 31 -> Feb 28).
Timestamp advance(Timestamp start, const Frequency &freq, std::int64_t steps);

// Exact step count from start to t; -1 when t is off-grid.
std::int64_t steps_between(Timestamp start, const Frequency &freq, Timestamp t);

// Continuous position of t on the grid (fractional steps allowed).
double grid_units_between(Timestamp start, const Frequency &freq, Timestamp t);

} // namespace silverkite
