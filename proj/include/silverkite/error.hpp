#pragma once

#include <stdexcept>
#include <string>

namespace silverkite {

enum class errc {
	empty_input,
	irregular_grid,
	all_missing,
	not_coarser,
	changepoint_out_of_range,
	pattern_unmatched,
	duplicate_column_name,
	rank_deficient,
	too_few_rows,
	column_mismatch,
	too_short,
	infeasible_plan,
	denominator_zero,
	zero_denominator,
	missing_regressor_future,
	horizon_non_positive,
	insufficient_history,
	bad_config,
	bad_data,
};

inline const char *errc_name(errc c) {
	switch (c) {
	case errc::empty_input: return "EmptyInput";
	case errc::irregular_grid: return "IrregularGrid";
	case errc::all_missing: return "AllMissing";
	case errc::not_coarser: return "NotCoarser";
	case errc::changepoint_out_of_range: return "ChangepointOutOfRange";
	case errc::pattern_unmatched: return "PatternUnmatched";
	case errc::duplicate_column_name: return "DuplicateColumnName";
	case errc::rank_deficient: return "RankDeficient";
	case errc::too_few_rows: return "TooFewRows";
	case errc::column_mismatch: return "ColumnMismatch";
	case errc::too_short: return "TooShort";
	case errc::infeasible_plan: return "InfeasiblePlan";
	case errc::denominator_zero: return "DenominatorZero";
	case errc::zero_denominator: return "ZeroDenominator";
	case errc::missing_regressor_future: return "MissingRegressorFuture";
	case errc::horizon_non_positive: return "HorizonNonPositive";
	case errc::insufficient_history: return "InsufficientHistory";
	case errc::bad_config: return "BadConfig";
	case errc::bad_data: return "BadData";
	}
	return "Unknown";
}

class Error : public std::runtime_error {
public:
	Error(errc code, const std::string &message)
	    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

	errc code() const { return code_; }

private:
	errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string &message) {
	throw Error(code, message);
}

} // namespace silverkite
