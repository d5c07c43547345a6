#include "silverkite/csv.hpp"

#include "silverkite/error.hpp"
#include "silverkite/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace silverkite {

std::string format_double(double v) {
	if (std::isnan(v)) return "";
	char buf[32];
	auto res = std::to_chars(buf, buf + sizeof(buf), v);
	return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string &line) {
	std::vector<std::string> fields;
	std::string field;
	bool quoted = false;
	for (std::size_t i = 0; i < line.size(); ++i) {
		const char c = line[i];
		if (quoted) {
			if (c == '"') {
				if (i + 1 < line.size() && line[i + 1] == '"') {
					field += '"';
					++i;
				} else {
					quoted = false;
				}
			} else {
				field += c;
			}
		} else if (c == '"') {
			quoted = true;
		} else if (c == ',') {
			fields.push_back(std::move(field));
			field.clear();
		} else if (c != '\r') {
			field += c;
		}
	}
	fields.push_back(std::move(field));
	return fields;
}

namespace {

double parse_value(const std::string &field, const std::string &path, std::size_t line_no) {
	if (field.empty()) return kMissing;
	double v = 0.0;
	auto res = std::from_chars(field.data(), field.data() + field.size(), v);
	if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
		fail(errc::bad_data, path + ":" + std::to_string(line_no) + ": invalid number '" + field + "'");
	}
	return v;
}

} // namespace

SeriesData read_series_csv(const std::string &path) {
	std::ifstream in(path);
	if (!in) fail(errc::bad_data, "cannot open input file '" + path + "'");

	std::string line;
	if (!std::getline(in, line)) fail(errc::empty_input, "empty file '" + path + "'");
	auto header = split_csv_line(line);
	if (header.size() < 2 || header[0] != "ts" || header[1] != "y") {
		fail(errc::bad_data, path + ": header must start with 'ts,y'");
	}

	SeriesData data;
	for (std::size_t c = 2; c < header.size(); ++c) {
		data.regressor_names.push_back(header[c]);
		data.regressors.emplace_back();
	}

	std::size_t line_no = 1;
	while (std::getline(in, line)) {
		++line_no;
		if (line.empty() || line == "\r") continue;
		auto fields = split_csv_line(line);
		if (fields.size() != header.size()) {
			fail(errc::bad_data, path + ":" + std::to_string(line_no) + ": expected " +
			                         std::to_string(header.size()) + " fields, got " +
			                         std::to_string(fields.size()));
		}
		data.timestamps.push_back(parse_iso8601(fields[0]));
		data.y.push_back(parse_value(fields[1], path, line_no));
		for (std::size_t c = 2; c < fields.size(); ++c) {
			data.regressors[c - 2].push_back(parse_value(fields[c], path, line_no));
		}
	}
	if (data.timestamps.empty()) fail(errc::empty_input, path + ": no data rows");
	return data;
}

void write_text_file(const std::string &path, const std::string &content) {
	std::ofstream out(path, std::ios::binary);
	if (!out) fail(errc::bad_data, "cannot write file '" + path + "'");
	out << content;
}

} // namespace silverkite
