#pragma once

#include "silverkite/calendar.hpp"

#include <string>
#include <vector>

namespace silverkite {

// Shortest decimal that round-trips the exact double; '.' separator, no
// locale. Missing values render as an empty field.
std::string format_double(double v);

// Splits one CSV record; supports double-quoted fields.
std::vector<std::string> split_csv_line(const std::string &line);

struct SeriesData {
	std::vector<Timestamp> timestamps;
	std::vector<double> y;
	std::vector<std::string> regressor_names;
	std::vector<std::vector<double>> regressors; // one vector per name
};

// Reads `ts,y[,<regressor>...]`; empty cells are missing.
SeriesData read_series_csv(const std::string &path);

void write_text_file(const std::string &path, const std::string &content);

} // namespace silverkite
