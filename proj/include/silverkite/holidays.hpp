#pragma once

#include "silverkite/calendar.hpp"
#include "silverkite/features.hpp"

#include <string>
#include <vector>

namespace silverkite {

struct HolidayRecord {
	std::string country;
	Timestamp date = 0; // midnight of the holiday
	std::string name;
};

// US federal holidays 2008-2030 (plus Easter), compiled in so the library
// works without any data files; user CSVs merge on top.
const std::vector<HolidayRecord> &builtin_holidays();

// CSV with header `country,date,name`, ISO dates.
std::vector<HolidayRecord> load_holiday_csv(const std::string &path);

// One EventSpec per holiday name (dates pooled across years), filtered by
// country codes; names sorted for stable column order.
std::vector<EventSpec> events_from_holidays(const std::vector<HolidayRecord> &records,
                                            const std::vector<std::string> &countries,
                                            int pre_days, int post_days);

} // namespace silverkite
