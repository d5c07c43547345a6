#include "silverkite/calendar.hpp"
#include "silverkite/csv.hpp"
#include "silverkite/rng.hpp"
#include "silverkite/config.hpp"
#include "silverkite/error.hpp"
#include "silverkite/series.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace silverkite;

namespace {

struct RunResult {
	int exit_code = -1;
	std::string output; // stdout + stderr
};

RunResult run_cli(const std::string &args, const fs::path &scratch) {
	const fs::path log = scratch / "run.log";
	const std::string cmd =
	    std::string(SILVERKITE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
	const int status = std::system(cmd.c_str());
	RunResult result;
	result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
	std::ifstream in(log);
	std::stringstream buf;
	buf << in.rdbuf();
	result.output = buf.str();
	return result;
}

fs::path scratch_dir(const std::string &name) {
	const fs::path dir = fs::temp_directory_path() / ("silverkite_cli_" + name);
	fs::remove_all(dir);
	fs::create_directories(dir);
	return dir;
}

void write_file(const fs::path &path, const std::string &content) {
	std::ofstream out(path);
	out << content;
}

// Daily series with trend + weekly shape + mild noise.
std::string make_daily_csv(int n, bool with_breakpoint = false) {
	std::string csv = "ts,y\n";
	Rng rng(12345);
	const Timestamp start = timestamp_from_date(2019, 1, 7);
	for (int i = 0; i < n; ++i) {
		const double weekly = std::sin(2.0 * std::numbers::pi * (i % 7) / 7.0);
		double trend = 10.0 + 0.01 * i;
		if (with_breakpoint && i > n / 2) trend += 1.0 * (i - n / 2);
		const double v = trend + weekly + 0.05 * rng.normal();
		csv += format_iso8601(start + i * 86400ll, false) + "," + format_double(v) + "\n";
	}
	return csv;
}

std::string read_file(const fs::path &path) {
	std::ifstream in(path);
	std::stringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

std::size_t count_lines(const std::string &text) {
	std::size_t n = 0;
	for (char c : text) {
		if (c == '\n') ++n;
	}
	return n;
}

} // namespace

TEST_CASE("a minimal config produces the four forecast outputs") {
	const fs::path dir = scratch_dir("minimal");
	write_file(dir / "input.csv", make_daily_csv(500));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() + "\nhorizon = 14\n");
	const RunResult r =
	    run_cli("forecast --config " + (dir / "cfg.txt").string() + " --output-dir " +
	                (dir / "out").string(),
	            dir);
	CHECK(r.exit_code == 0);
	for (const char *name : {"forecast.csv", "components.csv", "summary.txt", "qq.csv"}) {
		CHECK(fs::exists(dir / "out" / name));
	}
	// daily data defaults to the short daily template: AR lags present
	const std::string summary = read_file(dir / "out" / "summary.txt");
	CHECK(summary.find("y_lag1") != std::string::npos);
	CHECK(summary.find("y_avglag_7_14_21") != std::string::npos);

	// lower/upper populated at the default coverage
	const std::string fc = read_file(dir / "out" / "forecast.csv");
	CHECK(count_lines(fc) == 15);
	std::istringstream lines(fc);
	std::string line;
	std::getline(lines, line);
	std::getline(lines, line);
	const auto fields = split_csv_line(line);
	REQUIRE(fields.size() == 4);
	CHECK(std::stod(fields[2]) < std::stod(fields[1]));
	CHECK(std::stod(fields[3]) > std::stod(fields[1]));
}

TEST_CASE("a missing input path exits with the data error code") {
	const fs::path dir = scratch_dir("missing_input");
	write_file(dir / "cfg.txt", "input = /nonexistent/nope.csv\n");
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string(), dir);
	CHECK(r.exit_code == 3);
	CHECK(r.output.find("ERROR 3:") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected by name") {
	const fs::path dir = scratch_dir("unknown_key");
	write_file(dir / "input.csv", make_daily_csv(200));
	write_file(dir / "cfg.txt",
	           "input = " + (dir / "input.csv").string() + "\nfrobnicate = 7\n");
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string(), dir);
	CHECK(r.exit_code == 2);
	CHECK(r.output.find("ERROR 2:") != std::string::npos);
	CHECK(r.output.find("frobnicate") != std::string::npos);
}

TEST_CASE("backtest writes detail and summary files") {
	const fs::path dir = scratch_dir("backtest");
	write_file(dir / "input.csv", make_daily_csv(700));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nhorizon = 1\nbacktest.k = 10\nbacktest.period = 1\n" +
	                                "seasonality.yearly.order = 0\n");
	const RunResult r =
	    run_cli("backtest --config " + (dir / "cfg.txt").string() + " --output-dir " +
	                (dir / "out").string(),
	            dir);
	CHECK(r.exit_code == 0);
	const std::string detail = read_file(dir / "out" / "backtest_detail.csv");
	CHECK(count_lines(detail) == 11); // header + one row per split at horizon 1
	const std::string summary = read_file(dir / "out" / "backtest_summary.csv");
	CHECK(summary.find("mase,1,") != std::string::npos);
	CHECK(summary.find(",10,0\n") != std::string::npos);
}

TEST_CASE("an infeasible plan is a config error naming InfeasiblePlan") {
	const fs::path dir = scratch_dir("infeasible");
	write_file(dir / "input.csv", make_daily_csv(120));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nhorizon = 1\nbacktest.k = 500\n");
	const RunResult r = run_cli("backtest --config " + (dir / "cfg.txt").string(), dir);
	CHECK(r.exit_code == 2);
	CHECK(r.output.find("InfeasiblePlan") != std::string::npos);
}

TEST_CASE("moving windows honor the configured train length") {
	const fs::path dir = scratch_dir("moving");
	write_file(dir / "input.csv", make_daily_csv(500));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nhorizon = 1\nbacktest.k = 5\n" +
	                                "seasonality.yearly.order = 0\nbacktest.min_train = 100\n");
	const RunResult ok = run_cli("backtest --config " + (dir / "cfg.txt").string() +
	                                 " --window moving --train-length 200 --output-dir " +
	                                 (dir / "out").string(),
	                             dir);
	CHECK(ok.exit_code == 0);
	// A train window longer than the available history must fail the plan.
	const RunResult bad = run_cli("backtest --config " + (dir / "cfg.txt").string() +
	                                  " --window moving --train-length 5000",
	                              dir);
	CHECK(bad.exit_code == 2);
	CHECK(bad.output.find("InfeasiblePlan") != std::string::npos);
}

TEST_CASE("detect-changepoints locates a planted break") {
	const fs::path dir = scratch_dir("detect");
	write_file(dir / "input.csv", make_daily_csv(200, true));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() + "\n");
	const RunResult r =
	    run_cli("detect-changepoints --config " + (dir / "cfg.txt").string() +
	                " --output-dir " + (dir / "out").string(),
	            dir);
	CHECK(r.exit_code == 0);
	const std::string cps = read_file(dir / "out" / "changepoints.csv");
	// exactly one trend row, dated near the midpoint (day 100 = 2019-04-17)
	std::istringstream lines(cps);
	std::string line;
	std::getline(lines, line);
	CHECK(line == "kind,period,ts,score");
	int trend_rows = 0;
	while (std::getline(lines, line)) {
		if (line.rfind("trend,", 0) == 0) {
			++trend_rows;
			const auto fields = split_csv_line(line);
			const Timestamp cp = parse_iso8601(fields[2]);
			const Timestamp truth = timestamp_from_date(2019, 1, 7) + 100 * 86400ll;
			CHECK(std::abs(cp - truth) <= 5 * 86400ll);
		}
	}
	CHECK(trend_rows == 1);
	CHECK(fs::exists(dir / "out" / "trend_fit.csv"));
}

TEST_CASE("detect-changepoints on a constant file emits only the header") {
	const fs::path dir = scratch_dir("detect_const");
	std::string csv = "ts,y\n";
	const Timestamp start = timestamp_from_date(2019, 1, 7);
	for (int i = 0; i < 150; ++i) {
		csv += format_iso8601(start + i * 86400ll, false) + ",5\n";
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() + "\n");
	const RunResult r =
	    run_cli("detect-changepoints --config " + (dir / "cfg.txt").string() +
	                " --output-dir " + (dir / "out").string(),
	            dir);
	CHECK(r.exit_code == 0);
	CHECK(read_file(dir / "out" / "changepoints.csv") == "kind,period,ts,score\n");
}

TEST_CASE("a finer aggregation target for monthly data is a config error") {
	const fs::path dir = scratch_dir("detect_monthly");
	std::string csv = "ts,y\n";
	Rng rng(4);
	for (int i = 0; i < 48; ++i) {
		const Timestamp t = advance(timestamp_from_date(2015, 1, 1), {FreqUnit::month, 1}, i);
		csv += format_iso8601(t, false) + "," + format_double(10 + 0.1 * i + rng.normal()) + "\n";
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nchangepoint.agg = weekly\n");
	const RunResult r = run_cli("detect-changepoints --config " + (dir / "cfg.txt").string(), dir);
	CHECK(r.exit_code == 2);
	CHECK(r.output.find("NotCoarser") != std::string::npos);
}

TEST_CASE("explore groups the daily pattern by day of week for hourly data") {
	const fs::path dir = scratch_dir("explore_hourly");
	std::string csv = "ts,y\n";
	const Timestamp start = timestamp_from_date(2021, 3, 1);
	for (int i = 0; i < 24 * 28; ++i) {
		const Timestamp t = start + i * 3600ll;
		const double v = std::sin(2.0 * std::numbers::pi * time_of_day_fraction(t));
		csv += format_iso8601(t, true) + "," + format_double(v) + "\n";
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt",
	           "input = " + (dir / "input.csv").string() + "\nexplore.periods = daily\n");
	const RunResult r = run_cli("explore --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	CHECK(r.exit_code == 0);
	const std::string overlay = read_file(dir / "out" / "seasonality_overlay_daily.csv");
	CHECK(count_lines(overlay) == 1 + 24 * 7);
}

TEST_CASE("explore weekly overlays repeat exactly for a pure weekly signal") {
	const fs::path dir = scratch_dir("explore_weekly");
	std::string csv = "ts,y\n";
	const Timestamp start = timestamp_from_date(2019, 1, 7); // Monday
	for (int i = 0; i < 140; ++i) {
		const double v = std::sin(2.0 * std::numbers::pi * (i % 7) / 7.0);
		csv += format_iso8601(start + i * 86400ll, false) + "," + format_double(v) + "\n";
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt",
	           "input = " + (dir / "input.csv").string() + "\nexplore.periods = weekly\n");
	const RunResult r = run_cli("explore --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	CHECK(r.exit_code == 0);
	const std::string overlay = read_file(dir / "out" / "seasonality_overlay_weekly.csv");
	// per cycle position, all week groups agree
	std::map<std::string, std::map<std::string, double>> by_cycle;
	std::istringstream lines(overlay);
	std::string line;
	std::getline(lines, line);
	while (std::getline(lines, line)) {
		const auto f = split_csv_line(line);
		by_cycle[f[0]][f[1]] = std::stod(f[2]);
	}
	CHECK(by_cycle.size() == 7);
	for (const auto &[cycle, groups] : by_cycle) {
		const double first = groups.begin()->second;
		for (const auto &[g, v] : groups) CHECK(v == doctest::Approx(first).epsilon(1e-9));
	}
}

TEST_CASE("explore yearly overlays are mean-centered per year") {
	const fs::path dir = scratch_dir("explore_yearly");
	std::string csv = "ts,y\n";
	Rng rng(5);
	const Timestamp start = timestamp_from_date(2015, 1, 1);
	for (int i = 0; i < 1095; ++i) {
		const double v = 100.0 + 0.05 * i + 3.0 * rng.normal();
		csv += format_iso8601(start + i * 86400ll, false) + "," + format_double(v) + "\n";
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt",
	           "input = " + (dir / "input.csv").string() + "\nexplore.periods = yearly\n");
	const RunResult r = run_cli("explore --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	CHECK(r.exit_code == 0);
	const std::string overlay = read_file(dir / "out" / "seasonality_overlay_yearly.csv");
	std::map<std::string, std::pair<double, int>> sums;
	std::istringstream lines(overlay);
	std::string line;
	std::getline(lines, line);
	while (std::getline(lines, line)) {
		const auto f = split_csv_line(line);
		sums[f[1]].first += std::stod(f[2]);
		sums[f[1]].second += 1;
	}
	CHECK(sums.size() == 3);
	for (const auto &[year, acc] : sums) {
		CHECK(std::abs(acc.first / acc.second) < 1e-9);
	}
}

TEST_CASE("identical runs produce byte-identical outputs, simulate included") {
	const fs::path dir = scratch_dir("determinism");
	write_file(dir / "input.csv", make_daily_csv(400));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nhorizon = 21\nar.mode = simulate\nar.paths = 25\n" +
	                                "seasonality.yearly.order = 0\n");
	const std::string args = "forecast --config " + (dir / "cfg.txt").string() + " --seed 7";
	const RunResult a = run_cli(args + " --output-dir " + (dir / "out_a").string(), dir);
	const RunResult b = run_cli(args + " --output-dir " + (dir / "out_b").string(), dir);
	REQUIRE(a.exit_code == 0);
	REQUIRE(b.exit_code == 0);
	for (const char *name : {"forecast.csv", "components.csv", "summary.txt", "qq.csv"}) {
		CHECK(read_file(dir / "out_a" / name) == read_file(dir / "out_b" / name));
	}
	// A different seed changes the simulated forecast.
	const RunResult c = run_cli("forecast --config " + (dir / "cfg.txt").string() +
	                                " --seed 8 --output-dir " + (dir / "out_c").string(),
	                            dir);
	REQUIRE(c.exit_code == 0);
	CHECK(read_file(dir / "out_a" / "forecast.csv") != read_file(dir / "out_c" / "forecast.csv"));
}

TEST_CASE("SILVERKITE_HOLIDAY_DIR prepends the holiday search path") {
	const fs::path dir = scratch_dir("holiday_env");
	write_file(dir / "input.csv", make_daily_csv(420));
	write_file(dir / "extra_holidays.csv",
	           "country,date,name\nZZ,2019-06-03,Launch Day\nZZ,2020-06-01,Launch Day\n");
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nholiday_files = extra_holidays.csv\n" +
	                                "events.countries = ZZ\nevents.pre = 1\nevents.post = 1\n" +
	                                "seasonality.yearly.order = 0\n");
	setenv("SILVERKITE_HOLIDAY_DIR", dir.string().c_str(), 1);
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	unsetenv("SILVERKITE_HOLIDAY_DIR");
	REQUIRE(r.exit_code == 0);
	const std::string summary = read_file(dir / "out" / "summary.txt");
	CHECK(summary.find("launch_day") != std::string::npos);
	CHECK(summary.find("launch_day_m1") != std::string::npos);
	CHECK(summary.find("launch_day_p1") != std::string::npos);
}

TEST_CASE("bundled fixtures have the documented spans and structure") {
	const SeriesData peyton =
	    read_series_csv(std::string(SILVERKITE_DATA_DIR) + "/peyton_manning.csv");
	const double peyton_years =
	    static_cast<double>(peyton.timestamps.back() - peyton.timestamps.front()) /
	    (365.25 * 86400.0);
	CHECK(peyton_years > 8.5);
	CHECK(peyton_years < 9.5);
	int missing = 0;
	double lo = 1e18, hi = -1e18;
	for (double v : peyton.y) {
		if (is_missing(v)) {
			++missing;
		} else {
			lo = std::min(lo, v);
			hi = std::max(hi, v);
		}
	}
	CHECK(missing > 0);       // holes exercise the imputation path
	CHECK(lo > 4.0);          // log page views live on a log scale
	CHECK(hi < 14.0);

	const SeriesData bike =
	    read_series_csv(std::string(SILVERKITE_DATA_DIR) + "/bike_sharing_daily.csv");
	const double bike_years =
	    static_cast<double>(bike.timestamps.back() - bike.timestamps.front()) /
	    (365.25 * 86400.0);
	CHECK(bike_years > 7.5);
	CHECK(bike_years < 8.5);
	for (double v : bike.y) {
		if (!is_missing(v)) {
			CHECK(v > 0.0);
			CHECK(v == std::floor(v)); // ride counts
		}
	}
}

TEST_CASE("regressor columns flow from the input CSV into the model") {
	const fs::path dir = scratch_dir("regressor");
	std::string csv = "ts,y,temp\n";
	Rng rng(77);
	const Timestamp start = timestamp_from_date(2019, 1, 7);
	double temp = 10.0;
	for (int i = 0; i < 300; ++i) {
		temp += 0.3 * rng.normal();
		const double y = 5.0 + 0.5 * temp + 0.1 * rng.normal();
		csv += format_iso8601(start + i * 86400ll, false) + "," + format_double(y) + "," +
		       format_double(temp) + "\n";
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nhorizon = 7\nregressors.temp.mode = lagged\n" +
	                                "regressors.temp.lag = 7\nseasonality.yearly.order = 0\n" +
	                                "lags = \n");
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	CHECK(r.exit_code == 0);
	const std::string summary = read_file(dir / "out" / "summary.txt");
	CHECK(summary.find("temp_lag7") != std::string::npos);

	// A lag shorter than the horizon needs future values that do not exist.
	write_file(dir / "cfg2.txt", "input = " + (dir / "input.csv").string() +
	                                 "\nhorizon = 7\nregressors.temp.mode = lagged\n" +
	                                 "regressors.temp.lag = 2\nseasonality.yearly.order = 0\n");
	const RunResult bad = run_cli("forecast --config " + (dir / "cfg2.txt").string(), dir);
	CHECK(bad.exit_code == 3);
	CHECK(bad.output.find("MissingRegressorFuture") != std::string::npos);
}

TEST_CASE("explicit config keys override template defaults") {
	const fs::path dir = scratch_dir("template_override");
	write_file(dir / "input.csv", make_daily_csv(400));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\ntemplate = daily_long\nseasonality.weekly.order = 2\n" +
	                                "seasonality.yearly.order = 0\ngrowth.changepoints = none\n");
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	REQUIRE(r.exit_code == 0);
	const std::string summary = read_file(dir / "out" / "summary.txt");
	CHECK(summary.find("sin2_weekly") != std::string::npos);
	CHECK(summary.find("sin3_weekly") == std::string::npos); // template's M=4 overridden
	CHECK(summary.find("sin1_yearly") == std::string::npos); // yearly disabled
	CHECK(summary.find("y_lag1") == std::string::npos);      // daily_long has no AR
	CHECK(summary.find("christmas") != std::string::npos);   // template holidays kept
}

TEST_CASE("anomaly windows parse from the config") {
	const fs::path dir = scratch_dir("anomaly_cfg");
	write_file(dir / "input.csv", make_daily_csv(300));
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nseasonality.yearly.order = 0\n" +
	                                "anomalies = 2019-03-01/2019-03-10; 2019-05-01/2019-05-02\n");
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	CHECK(r.exit_code == 0);
	// Malformed window -> config error.
	write_file(dir / "cfg2.txt", "input = " + (dir / "input.csv").string() +
	                                 "\nanomalies = 2019-03-10/2019-03-01\n");
	const RunResult bad = run_cli("forecast --config " + (dir / "cfg2.txt").string(), dir);
	CHECK(bad.exit_code == 2);
}

TEST_CASE("trailing regressor-only rows provide the future regressor block") {
	const fs::path dir = scratch_dir("future_reg");
	std::string csv = "ts,y,drive\n";
	Rng rng(88);
	const Timestamp start = timestamp_from_date(2019, 1, 7);
	double drive = 0.0;
	for (int i = 0; i < 310; ++i) {
		drive = 0.9 * drive + rng.normal();
		const std::string ts = format_iso8601(start + i * 86400ll, false);
		if (i < 300) {
			csv += ts + "," + format_double(2.0 + 1.5 * drive) + "," + format_double(drive) + "\n";
		} else {
			csv += ts + ",," + format_double(drive) + "\n"; // future block
		}
	}
	write_file(dir / "input.csv", csv);
	write_file(dir / "cfg.txt", "input = " + (dir / "input.csv").string() +
	                                "\nhorizon = 10\nregressors.drive.mode = future_provided\n" +
	                                "seasonality.yearly.order = 0\nlags = \nagg_lags = \n");
	const RunResult r = run_cli("forecast --config " + (dir / "cfg.txt").string() +
	                                " --output-dir " + (dir / "out").string(),
	                            dir);
	CHECK(r.exit_code == 0);
	const std::string fc = read_file(dir / "out" / "forecast.csv");
	CHECK(count_lines(fc) == 11);
	// The model leans on the regressor, so the forecast must track it: the
	// last training row and the first future row share sign with `drive`.
	const std::string summary = read_file(dir / "out" / "summary.txt");
	CHECK(summary.find("drive") != std::string::npos);

	// Without the future block the same config cannot forecast.
	std::string short_csv = "ts,y,drive\n";
	Rng rng2(88);
	double d2 = 0.0;
	for (int i = 0; i < 300; ++i) {
		d2 = 0.9 * d2 + rng2.normal();
		short_csv += format_iso8601(start + i * 86400ll, false) + "," +
		             format_double(2.0 + 1.5 * d2) + "," + format_double(d2) + "\n";
	}
	write_file(dir / "input2.csv", short_csv);
	write_file(dir / "cfg2.txt", "input = " + (dir / "input2.csv").string() +
	                                 "\nhorizon = 10\nregressors.drive.mode = future_provided\n" +
	                                 "seasonality.yearly.order = 0\nlags = \nagg_lags = \n");
	const RunResult bad = run_cli("forecast --config " + (dir / "cfg2.txt").string(), dir);
	CHECK(bad.exit_code == 3);
	CHECK(bad.output.find("MissingRegressorFuture") != std::string::npos);
}

TEST_CASE("config text parses dotted keys, comments, and blank lines") {
	const auto entries = parse_config_text(
	    "# comment\n\ninput = a.csv\nseasonality.weekly.order = 4 # trailing\n  lags = 1,7  \n");
	CHECK(entries.at("input") == "a.csv");
	CHECK(entries.at("seasonality.weekly.order") == "4");
	CHECK(entries.at("lags") == "1,7");
	CHECK(entries.size() == 3);
	CHECK_THROWS_AS(parse_config_text("no equals sign\n"), Error);
}

TEST_CASE("templates are chosen by data frequency") {
	CHECK(default_template_for({FreqUnit::hour, 1}) == "hourly_short");
	CHECK(default_template_for({FreqUnit::day, 1}) == "daily_short");
	CHECK(default_template_for({FreqUnit::month, 1}) == "monthly");
	CHECK(model_templates().count("daily_long") == 1);
}
