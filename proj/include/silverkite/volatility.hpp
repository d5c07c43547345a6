#pragma once

#include "silverkite/rng.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace silverkite {

enum class VolatilityMethod { empirical, gaussian };

// Residual distributions keyed by tuples of categorical feature values, with
// coarsening fallback: a lookup that finds no sufficiently large group drops
// the trailing feature and retries, down to the pooled residuals.
struct VolatilityGroupTable {
	struct Group {
		int n = 0;
		std::vector<double> sample; // sorted (empirical method)
		double sigma = 0.0;         // zero-mean RMS (gaussian method)
	};

	std::vector<std::string> features;
	VolatilityMethod method = VolatilityMethod::gaussian;
	int min_group_size = 20;
	// levels[k] groups by the first k features; levels[0] holds the pool
	// under the empty key. Only groups with n > min_group_size are stored
	// (the pool is always stored).
	std::vector<std::map<std::vector<int>, Group>> levels;

	int total_count = 0;
	int covered_count = 0;  // residuals inside retained finest-level groups
	int fallback_count = 0; // total - covered

	const Group &resolve(std::span<const int> key) const;
	// Residual quantile for the group resolved by key.
	double quantile(std::span<const int> key, double p) const;
	// One residual draw from the resolved group's distribution.
	double draw(std::span<const int> key, Rng &rng) const;
};

VolatilityGroupTable fit_volatility(const Eigen::VectorXd &residuals,
                                    const std::vector<std::vector<int>> &feature_rows,
                                    const std::vector<std::string> &features, int min_group_size,
                                    VolatilityMethod method);

// Linear-interpolation sample quantile at position 1 + p (n - 1).
double empirical_quantile(std::span<const double> sorted_sample, double p);

struct IntervalBand {
	std::vector<double> lower;
	std::vector<double> upper;
};

// (forecast + Q(alpha/2), forecast + Q(1 - alpha/2)) per row, with an epsilon
// floor so that degenerate groups still produce a non-empty band.
IntervalBand predict_interval(const VolatilityGroupTable &table, std::span<const double> forecasts,
                              const std::vector<std::vector<int>> &feature_rows, double alpha);

// Rows of `group,theoretical_q,sample_q` for normal-quantile diagnostics.
std::string qq_plot_csv(const VolatilityGroupTable &table);

} // namespace silverkite
