#include "silverkite/calendar.hpp"

#include "silverkite/error.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace silverkite {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Civil-from-days / days-from-civil, proleptic Gregorian calendar.
std::int64_t days_from_civil(int y, int m, int d) {
	y -= m <= 2;
	const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
	const unsigned yoe = static_cast<unsigned>(y - era * 400);
	const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
	const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
	return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int &y, int &m, int &d) {
	z += 719468;
	const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
	const unsigned doe = static_cast<unsigned>(z - era * 146097);
	const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
	const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
	const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
	const unsigned mp = (5 * doy + 2) / 153;
	d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
	m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
	y = static_cast<int>(yy + (m <= 2));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
	std::int64_t q = a / b;
	if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
	return q;
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len) {
	int value = 0;
	auto res = std::from_chars(s.data() + pos, s.data() + pos + len, value);
	if (res.ec != std::errc() || res.ptr != s.data() + pos + len) {
		fail(errc::bad_data, "invalid timestamp '" + std::string(s) + "'");
	}
	return value;
}

} // namespace

CivilDateTime civil_from_timestamp(Timestamp t) {
	const std::int64_t days = floor_div(t, kSecondsPerDay);
	std::int64_t sec = t - days * kSecondsPerDay;
	CivilDateTime c;
	civil_from_days(days, c.year, c.month, c.day);
	c.hour = static_cast<int>(sec / 3600);
	c.minute = static_cast<int>((sec % 3600) / 60);
	c.second = static_cast<int>(sec % 60);
	return c;
}

Timestamp timestamp_from_civil(const CivilDateTime &c) {
	return days_from_civil(c.year, c.month, c.day) * kSecondsPerDay +
	       c.hour * 3600 + c.minute * 60 + c.second;
}

Timestamp timestamp_from_date(int year, int month, int day) {
	return days_from_civil(year, month, day) * kSecondsPerDay;
}

bool is_leap_year(int year) {
	return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
	static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
	if (month == 2 && is_leap_year(year)) return 29;
	return lengths[month - 1];
}

int day_of_week(Timestamp t) {
	const std::int64_t days = floor_div(t, kSecondsPerDay);
	// 1970-01-01 was a Thursday (Monday-based index 3).
	return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

int day_of_year(Timestamp t) {
	CivilDateTime c = civil_from_timestamp(t);
	return static_cast<int>(days_from_civil(c.year, c.month, c.day) - days_from_civil(c.year, 1, 1)) + 1;
}

double time_of_day_fraction(Timestamp t) {
	const std::int64_t days = floor_div(t, kSecondsPerDay);
	return static_cast<double>(t - days * kSecondsPerDay) / static_cast<double>(kSecondsPerDay);
}

Timestamp floor_to_day(Timestamp t) {
	return floor_div(t, kSecondsPerDay) * kSecondsPerDay;
}

Timestamp parse_iso8601(std::string_view s) {
	if (s.size() < 10 || s[4] != '-' || s[7] != '-') {
		fail(errc::bad_data, "invalid timestamp '" + std::string(s) + "'");
	}
	CivilDateTime c;
	c.year = parse_int(s, 0, 4);
	c.month = parse_int(s, 5, 2);
	c.day = parse_int(s, 8, 2);
	if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > days_in_month(c.year, c.month)) {
		fail(errc::bad_data, "invalid calendar date '" + std::string(s) + "'");
	}
	if (s.size() > 10) {
		if ((s[10] != 'T' && s[10] != ' ') || s.size() < 16 || s[13] != ':') {
			fail(errc::bad_data, "invalid timestamp '" + std::string(s) + "'");
		}
		c.hour = parse_int(s, 11, 2);
		c.minute = parse_int(s, 14, 2);
		if (s.size() >= 19) {
			if (s[16] != ':') fail(errc::bad_data, "invalid timestamp '" + std::string(s) + "'");
			c.second = parse_int(s, 17, 2);
		}
		if (c.hour > 23 || c.minute > 59 || c.second > 59) {
			fail(errc::bad_data, "invalid time of day '" + std::string(s) + "'");
		}
	}
	return timestamp_from_civil(c);
}

std::string format_iso8601(Timestamp t, bool with_time) {
	CivilDateTime c = civil_from_timestamp(t);
	char buf[24];
	if (with_time) {
		std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d",
		              c.year, c.month, c.day, c.hour, c.minute, c.second);
	} else {
		std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
	}
	return buf;
}

std::int64_t Frequency::step_seconds() const {
	switch (unit) {
	case FreqUnit::minute: return 60ll * multiple;
	case FreqUnit::hour: return 3600ll * multiple;
	case FreqUnit::day: return 86400ll * multiple;
	case FreqUnit::week: return 604800ll * multiple;
	case FreqUnit::month: fail(errc::bad_config, "month frequency has no fixed step");
	}
	return 0;
}

double Frequency::mean_step_seconds() const {
	if (unit == FreqUnit::month) return 2629746.0 * multiple; // 365.2425/12 days
	return static_cast<double>(step_seconds());
}

std::string frequency_name(const Frequency &f) {
	std::string unit;
	switch (f.unit) {
	case FreqUnit::minute: unit = "minute"; break;
	case FreqUnit::hour: unit = "hour"; break;
	case FreqUnit::day: unit = "day"; break;
	case FreqUnit::week: unit = "week"; break;
	case FreqUnit::month: unit = "month"; break;
	}
	if (f.multiple == 1) return unit;
	return std::to_string(f.multiple) + ":" + unit;
}

Frequency parse_frequency(std::string_view text) {
	Frequency f;
	auto colon = text.find(':');
	if (colon != std::string_view::npos) {
		f.multiple = parse_int(text, 0, colon);
		text = text.substr(colon + 1);
	}
	if (text == "minute") f.unit = FreqUnit::minute;
	else if (text == "hour" || text == "hourly") f.unit = FreqUnit::hour;
	else if (text == "day" || text == "daily") f.unit = FreqUnit::day;
	else if (text == "week" || text == "weekly") f.unit = FreqUnit::week;
	else if (text == "month" || text == "monthly") f.unit = FreqUnit::month;
	else fail(errc::bad_config, "unknown frequency '" + std::string(text) + "'");
	if (f.multiple < 1) fail(errc::bad_config, "frequency multiple must be >= 1");
	return f;
}

Timestamp advance(Timestamp start, const Frequency &freq, std::int64_t steps) {
	if (freq.unit != FreqUnit::month) {
		return start + steps * freq.step_seconds();
	}
	CivilDateTime c = civil_from_timestamp(start);
	const std::int64_t months = static_cast<std::int64_t>(c.year) * 12 + (c.month - 1) +
	                            steps * freq.multiple;
	const int year = static_cast<int>(floor_div(months, 12));
	const int month = static_cast<int>(months - static_cast<std::int64_t>(year) * 12) + 1;
	CivilDateTime out = c;
	out.year = year;
	out.month = month;
	out.day = std::min(c.day, days_in_month(year, month)); // clamp anchor day
	return timestamp_from_civil(out);
}

std::int64_t steps_between(Timestamp start, const Frequency &freq, Timestamp t) {
	if (freq.unit != FreqUnit::month) {
		const std::int64_t step = freq.step_seconds();
		const std::int64_t delta = t - start;
		if (delta % step != 0) return -1;
		return delta / step;
	}
	CivilDateTime a = civil_from_timestamp(start);
	CivilDateTime b = civil_from_timestamp(t);
	const std::int64_t months = (static_cast<std::int64_t>(b.year) * 12 + b.month) -
	                            (static_cast<std::int64_t>(a.year) * 12 + a.month);
	if (months % freq.multiple != 0) return -1;
	const std::int64_t k = months / freq.multiple;
	return advance(start, freq, k) == t ? k : -1;
}

double grid_units_between(Timestamp start, const Frequency &freq, Timestamp t) {
	if (freq.unit != FreqUnit::month) {
		return static_cast<double>(t - start) / static_cast<double>(freq.step_seconds());
	}
	CivilDateTime a = civil_from_timestamp(start);
	CivilDateTime b = civil_from_timestamp(t);
	std::int64_t months = (static_cast<std::int64_t>(b.year) * 12 + b.month) -
	                      (static_cast<std::int64_t>(a.year) * 12 + a.month);
	std::int64_t k = floor_div(months, freq.multiple);
	while (advance(start, freq, k) > t) --k;
	while (advance(start, freq, k + 1) <= t) ++k;
	const Timestamp lo = advance(start, freq, k);
	const Timestamp hi = advance(start, freq, k + 1);
	return static_cast<double>(k) + static_cast<double>(t - lo) / static_cast<double>(hi - lo);
}

} // namespace silverkite
