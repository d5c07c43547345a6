#include "silverkite/holidays.hpp"

#include "silverkite/csv.hpp"
#include "silverkite/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace silverkite {

namespace {

constexpr const char *kBuiltinHolidayCsv =
R"csv(country,date,name
US,2008-01-01,New Years Day
US,2008-01-21,Martin Luther King Jr Day
US,2008-02-18,Presidents Day
US,2008-03-23,Easter
US,2008-05-26,Memorial Day
US,2008-07-04,Independence Day
US,2008-09-01,Labor Day
US,2008-10-13,Columbus Day
US,2008-11-11,Veterans Day
US,2008-11-27,Thanksgiving
US,2008-12-25,Christmas Day
US,2009-01-01,New Years Day
US,2009-01-19,Martin Luther King Jr Day
US,2009-02-16,Presidents Day
US,2009-04-12,Easter
US,2009-05-25,Memorial Day
US,2009-07-04,Independence Day
US,2009-09-07,Labor Day
US,2009-10-12,Columbus Day
US,2009-11-11,Veterans Day
US,2009-11-26,Thanksgiving
US,2009-12-25,Christmas Day
US,2010-01-01,New Years Day
US,2010-01-18,Martin Luther King Jr Day
US,2010-02-15,Presidents Day
US,2010-04-04,Easter
US,2010-05-31,Memorial Day
US,2010-07-04,Independence Day
US,2010-09-06,Labor Day
US,2010-10-11,Columbus Day
US,2010-11-11,Veterans Day
US,2010-11-25,Thanksgiving
US,2010-12-25,Christmas Day
US,2011-01-01,New Years Day
US,2011-01-17,Martin Luther King Jr Day
US,2011-02-21,Presidents Day
US,2011-04-24,Easter
US,2011-05-30,Memorial Day
US,2011-07-04,Independence Day
US,2011-09-05,Labor Day
US,2011-10-10,Columbus Day
US,2011-11-11,Veterans Day
US,2011-11-24,Thanksgiving
US,2011-12-25,Christmas Day
US,2012-01-01,New Years Day
US,2012-01-16,Martin Luther King Jr Day
US,2012-02-20,Presidents Day
US,2012-04-08,Easter
US,2012-05-28,Memorial Day
US,2012-07-04,Independence Day
US,2012-09-03,Labor Day
US,2012-10-08,Columbus Day
US,2012-11-11,Veterans Day
US,2012-11-22,Thanksgiving
US,2012-12-25,Christmas Day
US,2013-01-01,New Years Day
US,2013-01-21,Martin Luther King Jr Day
US,2013-02-18,Presidents Day
US,2013-03-31,Easter
US,2013-05-27,Memorial Day
US,2013-07-04,Independence Day
US,2013-09-02,Labor Day
US,2013-10-14,Columbus Day
US,2013-11-11,Veterans Day
US,2013-11-28,Thanksgiving
US,2013-12-25,Christmas Day
US,2014-01-01,New Years Day
US,2014-01-20,Martin Luther King Jr Day
US,2014-02-17,Presidents Day
US,2014-04-20,Easter
US,2014-05-26,Memorial Day
US,2014-07-04,Independence Day
US,2014-09-01,Labor Day
US,2014-10-13,Columbus Day
US,2014-11-11,Veterans Day
US,2014-11-27,Thanksgiving
US,2014-12-25,Christmas Day
US,2015-01-01,New Years Day
US,2015-01-19,Martin Luther King Jr Day
US,2015-02-16,Presidents Day
US,2015-04-05,Easter
US,2015-05-25,Memorial Day
US,2015-07-04,Independence Day
US,2015-09-07,Labor Day
US,2015-10-12,Columbus Day
US,2015-11-11,Veterans Day
US,2015-11-26,Thanksgiving
US,2015-12-25,Christmas Day
US,2016-01-01,New Years Day
US,2016-01-18,Martin Luther King Jr Day
US,2016-02-15,Presidents Day
US,2016-03-27,Easter
US,2016-05-30,Memorial Day
US,2016-07-04,Independence Day
US,2016-09-05,Labor Day
US,2016-10-10,Columbus Day
US,2016-11-11,Veterans Day
US,2016-11-24,Thanksgiving
US,2016-12-25,Christmas Day
US,2017-01-01,New Years Day
US,2017-01-16,Martin Luther King Jr Day
US,2017-02-20,Presidents Day
US,2017-04-16,Easter
US,2017-05-29,Memorial Day
US,2017-07-04,Independence Day
US,2017-09-04,Labor Day
US,2017-10-09,Columbus Day
US,2017-11-11,Veterans Day
US,2017-11-23,Thanksgiving
US,2017-12-25,Christmas Day
US,2018-01-01,New Years Day
US,2018-01-15,Martin Luther King Jr Day
US,2018-02-19,Presidents Day
US,2018-04-01,Easter
US,2018-05-28,Memorial Day
US,2018-07-04,Independence Day
US,2018-09-03,Labor Day
US,2018-10-08,Columbus Day
US,2018-11-11,Veterans Day
US,2018-11-22,Thanksgiving
US,2018-12-25,Christmas Day
US,2019-01-01,New Years Day
US,2019-01-21,Martin Luther King Jr Day
US,2019-02-18,Presidents Day
US,2019-04-21,Easter
US,2019-05-27,Memorial Day
US,2019-07-04,Independence Day
US,2019-09-02,Labor Day
US,2019-10-14,Columbus Day
US,2019-11-11,Veterans Day
US,2019-11-28,Thanksgiving
US,2019-12-25,Christmas Day
US,2020-01-01,New Years Day
US,2020-01-20,Martin Luther King Jr Day
US,2020-02-17,Presidents Day
US,2020-04-12,Easter
US,2020-05-25,Memorial Day
US,2020-07-04,Independence Day
US,2020-09-07,Labor Day
US,2020-10-12,Columbus Day
US,2020-11-11,Veterans Day
US,2020-11-26,Thanksgiving
US,2020-12-25,Christmas Day
US,2021-01-01,New Years Day
US,2021-01-18,Martin Luther King Jr Day
US,2021-02-15,Presidents Day
US,2021-04-04,Easter
US,2021-05-31,Memorial Day
US,2021-06-19,Juneteenth
US,2021-07-04,Independence Day
US,2021-09-06,Labor Day
US,2021-10-11,Columbus Day
US,2021-11-11,Veterans Day
US,2021-11-25,Thanksgiving
US,2021-12-25,Christmas Day
US,2022-01-01,New Years Day
US,2022-01-17,Martin Luther King Jr Day
US,2022-02-21,Presidents Day
US,2022-04-17,Easter
US,2022-05-30,Memorial Day
US,2022-06-19,Juneteenth
US,2022-07-04,Independence Day
US,2022-09-05,Labor Day
US,2022-10-10,Columbus Day
US,2022-11-11,Veterans Day
US,2022-11-24,Thanksgiving
US,2022-12-25,Christmas Day
US,2023-01-01,New Years Day
US,2023-01-16,Martin Luther King Jr Day
US,2023-02-20,Presidents Day
US,2023-04-09,Easter
US,2023-05-29,Memorial Day
US,2023-06-19,Juneteenth
US,2023-07-04,Independence Day
US,2023-09-04,Labor Day
US,2023-10-09,Columbus Day
US,2023-11-11,Veterans Day
US,2023-11-23,Thanksgiving
US,2023-12-25,Christmas Day
US,2024-01-01,New Years Day
US,2024-01-15,Martin Luther King Jr Day
US,2024-02-19,Presidents Day
US,2024-03-31,Easter
US,2024-05-27,Memorial Day
US,2024-06-19,Juneteenth
US,2024-07-04,Independence Day
US,2024-09-02,Labor Day
US,2024-10-14,Columbus Day
US,2024-11-11,Veterans Day
US,2024-11-28,Thanksgiving
US,2024-12-25,Christmas Day
US,2025-01-01,New Years Day
US,2025-01-20,Martin Luther King Jr Day
US,2025-02-17,Presidents Day
US,2025-04-20,Easter
US,2025-05-26,Memorial Day
US,2025-06-19,Juneteenth
US,2025-07-04,Independence Day
US,2025-09-01,Labor Day
US,2025-10-13,Columbus Day
US,2025-11-11,Veterans Day
US,2025-11-27,Thanksgiving
US,2025-12-25,Christmas Day
US,2026-01-01,New Years Day
US,2026-01-19,Martin Luther King Jr Day
US,2026-02-16,Presidents Day
US,2026-04-05,Easter
US,2026-05-25,Memorial Day
US,2026-06-19,Juneteenth
US,2026-07-04,Independence Day
US,2026-09-07,Labor Day
US,2026-10-12,Columbus Day
US,2026-11-11,Veterans Day
US,2026-11-26,Thanksgiving
US,2026-12-25,Christmas Day
US,2027-01-01,New Years Day
US,2027-01-18,Martin Luther King Jr Day
US,2027-02-15,Presidents Day
US,2027-03-28,Easter
US,2027-05-31,Memorial Day
US,2027-06-19,Juneteenth
US,2027-07-04,Independence Day
US,2027-09-06,Labor Day
US,2027-10-11,Columbus Day
US,2027-11-11,Veterans Day
US,2027-11-25,Thanksgiving
US,2027-12-25,Christmas Day
US,2028-01-01,New Years Day
US,2028-01-17,Martin Luther King Jr Day
US,2028-02-21,Presidents Day
US,2028-04-16,Easter
US,2028-05-29,Memorial Day
US,2028-06-19,Juneteenth
US,2028-07-04,Independence Day
US,2028-09-04,Labor Day
US,2028-10-09,Columbus Day
US,2028-11-11,Veterans Day
US,2028-11-23,Thanksgiving
US,2028-12-25,Christmas Day
US,2029-01-01,New Years Day
US,2029-01-15,Martin Luther King Jr Day
US,2029-02-19,Presidents Day
US,2029-04-01,Easter
US,2029-05-28,Memorial Day
US,2029-06-19,Juneteenth
US,2029-07-04,Independence Day
US,2029-09-03,Labor Day
US,2029-10-08,Columbus Day
US,2029-11-11,Veterans Day
US,2029-11-22,Thanksgiving
US,2029-12-25,Christmas Day
US,2030-01-01,New Years Day
US,2030-01-21,Martin Luther King Jr Day
US,2030-02-18,Presidents Day
US,2030-04-21,Easter
US,2030-05-27,Memorial Day
US,2030-06-19,Juneteenth
US,2030-07-04,Independence Day
US,2030-09-02,Labor Day
US,2030-10-14,Columbus Day
US,2030-11-11,Veterans Day
US,2030-11-28,Thanksgiving
US,2030-12-25,Christmas Day
)csv";

std::vector<HolidayRecord> parse_holiday_csv(std::istream &in, const std::string &origin) {
	std::string line;
	if (!std::getline(in, line)) fail(errc::empty_input, origin + ": empty holiday file");
	auto header = split_csv_line(line);
	if (header.size() != 3 || header[0] != "country" || header[1] != "date" || header[2] != "name") {
		fail(errc::bad_data, origin + ": holiday header must be 'country,date,name'");
	}
	std::vector<HolidayRecord> records;
	std::size_t line_no = 1;
	while (std::getline(in, line)) {
		++line_no;
		if (line.empty() || line == "\r") continue;
		auto fields = split_csv_line(line);
		if (fields.size() != 3) {
			fail(errc::bad_data, origin + ":" + std::to_string(line_no) + ": expected 3 fields");
		}
		records.push_back({fields[0], floor_to_day(parse_iso8601(fields[1])), fields[2]});
	}
	return records;
}

} // namespace

const std::vector<HolidayRecord> &builtin_holidays() {
	static const std::vector<HolidayRecord> records = [] {
		std::istringstream in(kBuiltinHolidayCsv);
		return parse_holiday_csv(in, "<builtin>");
	}();
	return records;
}

std::vector<HolidayRecord> load_holiday_csv(const std::string &path) {
	std::ifstream in(path);
	if (!in) fail(errc::bad_data, "cannot open holiday file '" + path + "'");
	return parse_holiday_csv(in, path);
}

std::vector<EventSpec> events_from_holidays(const std::vector<HolidayRecord> &records,
                                            const std::vector<std::string> &countries,
                                            int pre_days, int post_days) {
	std::map<std::string, EventSpec> by_name;
	for (const HolidayRecord &r : records) {
		if (!countries.empty() &&
		    std::find(countries.begin(), countries.end(), r.country) == countries.end()) {
			continue;
		}
		EventSpec &spec = by_name[sanitize_name(r.name)];
		spec.name = r.name;
		spec.pre_days = pre_days;
		spec.post_days = post_days;
		spec.dates.push_back(r.date);
	}
	std::vector<EventSpec> out;
	for (auto &[key, spec] : by_name) {
		(void)key;
		std::sort(spec.dates.begin(), spec.dates.end());
		spec.dates.erase(std::unique(spec.dates.begin(), spec.dates.end()), spec.dates.end());
		out.push_back(std::move(spec));
	}
	return out; // std::map iteration keeps names sorted
}

} // namespace silverkite
