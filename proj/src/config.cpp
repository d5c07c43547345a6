#include "silverkite/config.hpp"

#include "silverkite/error.hpp"
#include "silverkite/holidays.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace silverkite {

namespace {

std::string trim(const std::string &s) {
	std::size_t a = s.find_first_not_of(" \t\r");
	if (a == std::string::npos) return "";
	std::size_t b = s.find_last_not_of(" \t\r");
	return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string &s, char sep) {
	std::vector<std::string> out;
	std::string cur;
	for (char c : s) {
		if (c == sep) {
			if (!trim(cur).empty()) out.push_back(trim(cur));
			cur.clear();
		} else {
			cur += c;
		}
	}
	if (!trim(cur).empty()) out.push_back(trim(cur));
	return out;
}

int parse_int_value(const std::string &key, const std::string &value) {
	int v = 0;
	auto res = std::from_chars(value.data(), value.data() + value.size(), v);
	if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
		fail(errc::bad_config, "key '" + key + "' expects an integer, got '" + value + "'");
	}
	return v;
}

double parse_double_value(const std::string &key, const std::string &value) {
	double v = 0.0;
	auto res = std::from_chars(value.data(), value.data() + value.size(), v);
	if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
		fail(errc::bad_config, "key '" + key + "' expects a number, got '" + value + "'");
	}
	return v;
}

std::vector<int> parse_int_list(const std::string &key, const std::string &value) {
	std::vector<int> out;
	for (const std::string &tok : split_list(value, ',')) {
		out.push_back(parse_int_value(key, tok));
	}
	return out;
}

const std::set<std::string> &known_keys() {
	static const std::set<std::string> keys = {
	    "input", "template", "output_dir", "horizon", "coverage", "seed",
	    "growth.func", "growth.changepoints",
	    "seasonality.daily.order", "seasonality.weekly.order", "seasonality.yearly.order",
	    "seasonality.daily.changepoints", "seasonality.weekly.changepoints",
	    "seasonality.yearly.changepoints",
	    "events.countries", "events.pre", "events.post", "events.names",
	    "indicators", "lags", "agg_lags", "interactions",
	    "fit.algorithm", "fit.lambda", "fit.quantile",
	    "volatility.features", "volatility.method", "volatility.min_group_size",
	    "ar.mode", "ar.paths", "anomalies", "holiday_files",
	    "backtest.k", "backtest.period", "backtest.window", "backtest.train_length",
	    "backtest.min_train",
	    "changepoint.n_candidates", "changepoint.end_exclusion_frac",
	    "changepoint.min_distance_days", "changepoint.lambda_strength", "changepoint.agg",
	    "changepoint.yearly_order",
	    "explore.periods",
	};
	return keys;
}

bool is_known_key(const std::string &key) {
	if (known_keys().count(key)) return true;
	// Dynamic families.
	if (key.rfind("regressors.", 0) == 0) {
		return key.size() > 11 && (key.ends_with(".mode") || key.ends_with(".lag"));
	}
	if (key.rfind("seasonality.custom.", 0) == 0) {
		return key.ends_with(".order") || key.ends_with(".period_units") ||
		       key.ends_with(".changepoints");
	}
	return false;
}

} // namespace

std::map<std::string, std::string> parse_config_text(const std::string &text) {
	std::map<std::string, std::string> entries;
	std::istringstream in(text);
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		const std::size_t hash = line.find('#');
		if (hash != std::string::npos) line = line.substr(0, hash);
		line = trim(line);
		if (line.empty()) continue;
		const std::size_t eq = line.find('=');
		if (eq == std::string::npos) {
			fail(errc::bad_config, "line " + std::to_string(line_no) + ": expected 'key = value'");
		}
		const std::string key = trim(line.substr(0, eq));
		const std::string value = trim(line.substr(eq + 1));
		if (key.empty()) {
			fail(errc::bad_config, "line " + std::to_string(line_no) + ": empty key");
		}
		entries[key] = value;
	}
	return entries;
}

std::map<std::string, std::string> parse_config_file(const std::string &path) {
	std::ifstream in(path);
	if (!in) fail(errc::bad_config, "cannot open config file '" + path + "'");
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_config_text(buf.str());
}

const std::map<std::string, std::map<std::string, std::string>> &model_templates() {
	static const std::map<std::string, std::map<std::string, std::string>> templates = {
	    {"hourly_short",
	     {
	         {"seasonality.daily.order", "12"},
	         {"seasonality.weekly.order", "4"},
	         {"lags", "1,2,24"},
	         {"agg_lags", "24,48,168"},
	         {"fit.algorithm", "ridge"},
	         {"volatility.features", "hour"},
	     }},
	    {"daily_long",
	     {
	         {"seasonality.weekly.order", "4"},
	         {"seasonality.yearly.order", "15"},
	         {"growth.changepoints", "auto"},
	         {"events.countries", "US"},
	         {"events.pre", "2"},
	         {"events.post", "2"},
	         {"fit.algorithm", "ridge"},
	         {"volatility.features", "dow"},
	     }},
	    {"daily_short",
	     {
	         {"seasonality.weekly.order", "4"},
	         {"seasonality.yearly.order", "15"},
	         {"growth.changepoints", "auto"},
	         {"events.countries", "US"},
	         {"events.pre", "2"},
	         {"events.post", "2"},
	         {"lags", "1,7"},
	         {"agg_lags", "7,14,21"},
	         {"fit.algorithm", "ridge"},
	         {"volatility.features", "dow"},
	     }},
	    {"monthly",
	     {
	         {"seasonality.yearly.order", "6"},
	         {"growth.changepoints", "auto"},
	         {"fit.algorithm", "ridge"},
	     }},
	};
	return templates;
}

std::string default_template_for(const Frequency &freq) {
	switch (freq.unit) {
	case FreqUnit::minute:
	case FreqUnit::hour: return "hourly_short";
	case FreqUnit::day: return "daily_short";
	case FreqUnit::week:
	case FreqUnit::month: return "monthly";
	}
	return "daily_short";
}

std::int64_t default_min_train_length(const ForecastConfig &config, const Frequency &freq) {
	double longest_steps = 1.0;
	for (const SeasonalitySpec &s : config.seasonality) {
		double period_seconds = 0.0;
		if (!s.is_named()) {
			period_seconds = s.period_units * freq.mean_step_seconds();
		} else if (s.tag == "daily") {
			period_seconds = 86400.0;
		} else if (s.tag == "weekly") {
			period_seconds = 604800.0;
		} else {
			period_seconds = 31557600.0;
		}
		longest_steps = std::max(longest_steps, period_seconds / freq.mean_step_seconds());
	}
	return static_cast<std::int64_t>(std::ceil(2.0 * longest_steps));
}

namespace {

void parse_changepoint_tokens(const std::string &key, const std::string &value, bool &auto_flag,
                              std::vector<Timestamp> &manual) {
	auto_flag = false;
	manual.clear();
	for (const std::string &tok : split_list(value, ',')) {
		if (tok == "auto") {
			auto_flag = true;
		} else if (tok == "none") {
			// explicit empty
		} else {
			manual.push_back(parse_iso8601(tok));
		}
	}
	std::sort(manual.begin(), manual.end());
	if (std::adjacent_find(manual.begin(), manual.end()) != manual.end()) {
		fail(errc::bad_config, "key '" + key + "' has duplicate changepoints");
	}
}

std::string holiday_path(const std::string &file) {
	const char *dir = std::getenv("SILVERKITE_HOLIDAY_DIR");
	if (dir != nullptr && *dir != '\0' && !file.empty() && file[0] != '/') {
		const std::string candidate = std::string(dir) + "/" + file;
		std::ifstream probe(candidate);
		if (probe) return candidate;
	}
	return file;
}

} // namespace

CliSetup resolve_setup(const std::map<std::string, std::string> &entries, const Frequency &freq,
                       const std::vector<std::string> &regressor_names) {
	for (const auto &[key, value] : entries) {
		(void)value;
		if (!is_known_key(key)) {
			fail(errc::bad_config, "unknown config key '" + key + "'");
		}
	}

	CliSetup setup;
	auto explicit_or = [&](const std::string &key) -> std::optional<std::string> {
		auto it = entries.find(key);
		if (it == entries.end()) return std::nullopt;
		return it->second;
	};

	setup.template_name = explicit_or("template").value_or(default_template_for(freq));
	const auto tpl_it = model_templates().find(setup.template_name);
	if (tpl_it == model_templates().end()) {
		fail(errc::bad_config, "unknown template '" + setup.template_name + "'");
	}

	// Template defaults under explicit keys.
	std::map<std::string, std::string> merged = tpl_it->second;
	for (const auto &[key, value] : entries) merged[key] = value;

	auto get = [&](const std::string &key) -> std::optional<std::string> {
		auto it = merged.find(key);
		if (it == merged.end()) return std::nullopt;
		return it->second;
	};

	if (auto v = get("input")) setup.input = *v;
	if (setup.input.empty()) fail(errc::bad_config, "key 'input' is required");
	if (auto v = get("output_dir")) setup.output_dir = *v;

	ForecastConfig &fc = setup.forecast;
	if (auto v = get("horizon")) fc.horizon = parse_int_value("horizon", *v);
	if (auto v = get("coverage")) fc.coverage = parse_double_value("coverage", *v);
	if (auto v = get("seed")) fc.seed = static_cast<std::uint64_t>(parse_int_value("seed", *v));

	fc.growth = GrowthSpec{}; // linear trend unless disabled
	if (auto v = get("growth.func")) {
		if (*v == "linear") fc.growth->func = GrowthFunc::linear;
		else if (*v == "sqrt") fc.growth->func = GrowthFunc::sqrt;
		else if (*v == "quadratic") fc.growth->func = GrowthFunc::quadratic;
		else if (*v == "none") fc.growth.reset();
		else fail(errc::bad_config, "key 'growth.func' expects linear|sqrt|quadratic|none");
	}
	if (auto v = get("growth.changepoints")) {
		std::vector<Timestamp> manual;
		parse_changepoint_tokens("growth.changepoints", *v, fc.auto_changepoints, manual);
		if (!manual.empty() && !fc.growth) {
			fail(errc::bad_config, "growth changepoints need a growth function");
		}
		if (fc.growth) fc.growth->changepoints = std::move(manual);
	}

	for (const std::string tag : {"daily", "weekly", "yearly"}) {
		const std::string okey = "seasonality." + std::string(tag) + ".order";
		const std::string ckey = "seasonality." + std::string(tag) + ".changepoints";
		SeasonalitySpec spec;
		spec.tag = tag;
		bool present = false;
		if (auto v = get(okey)) {
			spec.order = parse_int_value(okey, *v);
			present = spec.order > 0;
		}
		if (auto v = get(ckey)) {
			bool auto_flag = false;
			parse_changepoint_tokens(ckey, *v, auto_flag, spec.changepoints);
			if (auto_flag) fc.auto_seasonality_changepoints = true;
			present = present || !spec.changepoints.empty();
		}
		if (present && spec.order > 0) fc.seasonality.push_back(spec);
	}
	// Custom seasonalities: seasonality.custom.<name>.{order,period_units,changepoints}
	std::set<std::string> custom_names;
	for (const auto &[key, value] : merged) {
		(void)value;
		if (key.rfind("seasonality.custom.", 0) == 0) {
			const std::string rest = key.substr(19);
			custom_names.insert(rest.substr(0, rest.find('.')));
		}
	}
	for (const std::string &name : custom_names) {
		SeasonalitySpec spec;
		spec.tag = sanitize_name(name);
		const std::string base = "seasonality.custom." + name;
		if (auto v = get(base + ".order")) spec.order = parse_int_value(base + ".order", *v);
		if (auto v = get(base + ".period_units")) {
			spec.period_units = parse_double_value(base + ".period_units", *v);
		}
		if (spec.period_units <= 0.0) {
			fail(errc::bad_config, "key '" + base + ".period_units' must be > 0");
		}
		if (auto v = get(base + ".changepoints")) {
			bool auto_flag = false;
			parse_changepoint_tokens(base + ".changepoints", *v, auto_flag, spec.changepoints);
			if (auto_flag) fc.auto_seasonality_changepoints = true;
		}
		if (spec.order > 0) fc.seasonality.push_back(spec);
	}

	// Events from the holiday database.
	std::vector<std::string> countries;
	if (auto v = get("events.countries")) countries = split_list(*v, ',');
	int pre = 0, post = 0;
	if (auto v = get("events.pre")) pre = parse_int_value("events.pre", *v);
	if (auto v = get("events.post")) post = parse_int_value("events.post", *v);
	std::vector<HolidayRecord> records;
	if (!countries.empty()) {
		records = builtin_holidays();
	}
	if (auto v = get("holiday_files")) {
		for (const std::string &file : split_list(*v, ';')) {
			const auto extra = load_holiday_csv(holiday_path(file));
			records.insert(records.end(), extra.begin(), extra.end());
		}
	}
	if (!records.empty()) {
		std::vector<EventSpec> events = events_from_holidays(records, countries, pre, post);
		if (auto v = get("events.names")) {
			const auto wanted = split_list(*v, ',');
			std::vector<EventSpec> filtered;
			for (EventSpec &e : events) {
				if (std::find(wanted.begin(), wanted.end(), sanitize_name(e.name)) != wanted.end()) {
					filtered.push_back(std::move(e));
				}
			}
			events = std::move(filtered);
		}
		fc.events = std::move(events);
	}

	if (auto v = get("indicators")) fc.indicators = split_list(*v, ',');
	if (auto v = get("lags")) fc.lags.lags = parse_int_list("lags", *v);
	if (auto v = get("agg_lags")) {
		for (const std::string &group : split_list(*v, '|')) {
			fc.lags.agg_lags.push_back(parse_int_list("agg_lags", group));
		}
	}
	for (int l : fc.lags.lags) {
		if (l < 1) fail(errc::bad_config, "lag orders must be >= 1");
	}
	for (const auto &g : fc.lags.agg_lags) {
		for (int l : g) {
			if (l < 1) fail(errc::bad_config, "lag orders must be >= 1");
		}
	}

	for (const std::string &name : regressor_names) {
		const std::string base = "regressors." + name;
		RegressorSpec spec;
		spec.name = name;
		bool mentioned = false;
		if (auto v = get(base + ".mode")) {
			mentioned = true;
			if (*v == "future_provided") spec.mode = RegressorMode::future_provided;
			else if (*v == "lagged") spec.mode = RegressorMode::lagged;
			else fail(errc::bad_config, "key '" + base + ".mode' expects future_provided|lagged");
		}
		if (auto v = get(base + ".lag")) {
			mentioned = true;
			spec.lag = parse_int_value(base + ".lag", *v);
		}
		if (spec.mode == RegressorMode::lagged && spec.lag < 1) {
			fail(errc::bad_config, "lagged regressor '" + name + "' needs lag >= 1");
		}
		// Extra columns in the input participate only when configured.
		if (mentioned) fc.regressors.push_back(spec);
	}
	for (const auto &[key, value] : merged) {
		(void)value;
		if (key.rfind("regressors.", 0) == 0) {
			const std::string rest = key.substr(11);
			const std::string name = rest.substr(0, rest.find('.'));
			if (std::find(regressor_names.begin(), regressor_names.end(), name) ==
			    regressor_names.end()) {
				fail(errc::bad_config, "regressor '" + name + "' not present in the input");
			}
		}
	}

	if (auto v = get("interactions")) {
		for (const std::string &pair : split_list(*v, ';')) {
			const std::size_t colon = pair.find(':');
			if (colon == std::string::npos) {
				fail(errc::bad_config, "interaction '" + pair + "' must be left:right");
			}
			fc.interactions.push_back({trim(pair.substr(0, colon)), trim(pair.substr(colon + 1))});
		}
	}

	if (auto v = get("fit.algorithm")) {
		if (*v == "ols") fc.fit.algo = FitAlgorithm::ols;
		else if (*v == "ridge") fc.fit.algo = FitAlgorithm::ridge;
		else if (*v == "quantile") fc.fit.algo = FitAlgorithm::quantile;
		else fail(errc::bad_config, "key 'fit.algorithm' expects ols|ridge|quantile");
	}
	if (auto v = get("fit.lambda")) {
		if (*v != "cv") fc.fit.lambda = parse_double_value("fit.lambda", *v);
	}
	if (auto v = get("fit.quantile")) fc.fit.quantile_q = parse_double_value("fit.quantile", *v);

	if (auto v = get("volatility.features")) {
		fc.volatility_features = split_list(*v, ',');
	} else {
		// Frequency-dependent default.
		switch (freq.unit) {
		case FreqUnit::minute:
		case FreqUnit::hour: fc.volatility_features = {"hour"}; break;
		case FreqUnit::day:
		case FreqUnit::week: fc.volatility_features = {"dow"}; break;
		case FreqUnit::month: fc.volatility_features = {}; break;
		}
	}
	if (auto v = get("volatility.method")) {
		if (*v == "gaussian") fc.volatility_method = VolatilityMethod::gaussian;
		else if (*v == "empirical") fc.volatility_method = VolatilityMethod::empirical;
		else fail(errc::bad_config, "key 'volatility.method' expects gaussian|empirical");
	}
	if (auto v = get("volatility.min_group_size")) {
		fc.volatility_min_group = parse_int_value("volatility.min_group_size", *v);
	}

	if (auto v = get("ar.mode")) {
		if (*v == "plugin") fc.ar_mode = ArMode::plugin;
		else if (*v == "simulate") fc.ar_mode = ArMode::simulate;
		else fail(errc::bad_config, "key 'ar.mode' expects plugin|simulate");
	}
	if (auto v = get("ar.paths")) fc.sim_paths = parse_int_value("ar.paths", *v);

	if (auto v = get("anomalies")) {
		for (const std::string &window : split_list(*v, ';')) {
			const std::size_t slash = window.find('/');
			if (slash == std::string::npos) {
				fail(errc::bad_config, "anomaly '" + window + "' must be start/end");
			}
			AnomalyWindow w;
			w.start_ts = parse_iso8601(trim(window.substr(0, slash)));
			w.end_ts = parse_iso8601(trim(window.substr(slash + 1)));
			if (w.start_ts > w.end_ts) {
				fail(errc::bad_config, "anomaly window '" + window + "' has start after end");
			}
			// Date-only end bounds cover the whole day.
			if (window.find('T') == std::string::npos) w.end_ts += 86399;
			fc.anomalies.push_back(w);
		}
	}

	if (auto v = get("backtest.k")) setup.backtest_k = parse_int_value("backtest.k", *v);
	if (auto v = get("backtest.period")) setup.backtest_period = parse_int_value("backtest.period", *v);
	if (auto v = get("backtest.window")) {
		if (*v == "expanding") setup.backtest_window = WindowMode::expanding;
		else if (*v == "moving") setup.backtest_window = WindowMode::moving;
		else fail(errc::bad_config, "key 'backtest.window' expects expanding|moving");
	}
	if (auto v = get("backtest.train_length")) {
		setup.backtest_train_length = parse_int_value("backtest.train_length", *v);
	}
	if (auto v = get("backtest.min_train")) {
		setup.backtest_min_train = parse_int_value("backtest.min_train", *v);
	}

	DetectionConfig &det = fc.detection;
	if (auto v = get("changepoint.n_candidates")) {
		det.n_candidates = parse_int_value("changepoint.n_candidates", *v);
		if (det.n_candidates < 1) fail(errc::bad_config, "changepoint.n_candidates must be >= 1");
	}
	if (auto v = get("changepoint.end_exclusion_frac")) {
		det.end_exclusion_frac = parse_double_value("changepoint.end_exclusion_frac", *v);
	}
	if (auto v = get("changepoint.min_distance_days")) {
		det.min_distance_days = parse_double_value("changepoint.min_distance_days", *v);
	}
	if (auto v = get("changepoint.lambda_strength")) {
		det.lambda_strength = parse_double_value("changepoint.lambda_strength", *v);
	}
	if (auto v = get("changepoint.yearly_order")) {
		det.yearly_order = parse_int_value("changepoint.yearly_order", *v);
	}
	if (auto v = get("changepoint.agg")) {
		if (*v == "none") det.no_aggregation = true;
		else if (*v != "auto") det.agg_target = parse_frequency(*v);
	}

	if (auto v = get("explore.periods")) setup.explore_periods = split_list(*v, ',');

	if (!(fc.coverage > 0.0 && fc.coverage < 1.0)) {
		fail(errc::bad_config, "coverage must lie in (0,1)");
	}
	if (fc.horizon < 1) fail(errc::bad_config, "horizon must be >= 1");
	return setup;
}

} // namespace silverkite
