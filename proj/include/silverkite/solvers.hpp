#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace silverkite {

// A column named "intercept" is recognized in every fitter: it is never
// penalized and its coefficient is reported separately.
struct LinearFit {
	std::vector<std::string> names; // non-intercept columns in design order
	Eigen::VectorXd beta;           // de-standardized, aligned with names; dropped -> 0
	bool has_intercept = false;
	double intercept = 0.0;

	Eigen::VectorXd fitted;
	Eigen::VectorXd residuals;

	Eigen::Index n = 0; // rows
	Eigen::Index p = 0; // columns used, including the intercept
	double loss = 0.0;  // in-sample value of the fitted objective
	bool converged = true;
	int sweeps = 0;
	double lambda = 0.0;
	std::vector<std::string> dropped_columns; // constant columns excluded from the solve

	// OLS inference only; empty for penalized fits.
	Eigen::VectorXd std_errors, t_values, p_values;
	double intercept_stderr = 0.0, intercept_t = 0.0, intercept_p = 0.0;
	bool has_inference = false;

	double coefficient(const std::string &name) const;
};

struct SolverOptions {
	// Center/scale non-intercept columns before penalized fits, reporting
	// de-standardized coefficients. Ignored (treated as false) when the
	// design has no intercept column.
	bool standardize = true;
	double tol = 1e-7;
	int max_sweeps = 10000;
};

LinearFit fit_ols(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                  const Eigen::VectorXd &y);

// min ||y - X b||^2 + lambda * sum b_j^2 over standardized non-intercept columns.
LinearFit fit_ridge(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                    const Eigen::VectorXd &y, double lambda, const SolverOptions &opts = {});

// min (1/2n) ||y - X b||^2 + lambda * sum w_j |b_j|, cyclic coordinate descent.
LinearFit fit_lasso(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                    const Eigen::VectorXd &y, double lambda, const SolverOptions &opts = {});

// penalty_factors aligned with `names`; 0 leaves a column unpenalized.
LinearFit fit_lasso_weighted(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                             const Eigen::VectorXd &y, double lambda,
                             const Eigen::VectorXd &penalty_factors,
                             const SolverOptions &opts = {});

// Smallest lambda that zeroes every penalized coefficient. Unpenalized
// columns (factor 0) are projected out first.
double lasso_lambda_max(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                        const Eigen::VectorXd &y,
                        const Eigen::VectorXd *penalty_factors = nullptr);

// Ridge pilot, then lasso with weights 1 / (|pilot_j|^gamma + eps).
LinearFit fit_adaptive_lasso(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                             const Eigen::VectorXd &y, double lambda, double gamma = 1.0,
                             const Eigen::VectorXd *penalty_factors = nullptr,
                             const SolverOptions &opts = {});

// min sum rho_q(y - X b) + lambda * sum b_j^2, IRLS over a smoothed pinball
// with the smoothing width driven down a fixed schedule.
LinearFit fit_quantile(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                       const Eigen::VectorXd &y, double q, double lambda = 0.0,
                       const SolverOptions &opts = {});

// Name-keyed prediction: X columns may be permuted relative to the fit.
Eigen::VectorXd predict_linear(const LinearFit &fit, const Eigen::MatrixXd &X,
                               const std::vector<std::string> &names);

// --- quantile-loss utilities (also used by tests) ---------------------------

double pinball_loss(const Eigen::VectorXd &residuals, double q);

// C1 smoothing of the pinball loss: quadratic inside |u| < tau.
double smoothed_pinball_value(double u, double q, double tau);
double smoothed_pinball_derivative(double u, double q, double tau);

// Objective/gradient of the smoothed quantile problem on the raw design,
// beta aligned with columns of X; the column named "intercept" is unpenalized.
double quantile_objective(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                          const Eigen::VectorXd &y, const Eigen::VectorXd &beta, double q,
                          double tau, double lambda);
Eigen::VectorXd quantile_gradient(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                                  const Eigen::VectorXd &y, const Eigen::VectorXd &beta, double q,
                                  double tau, double lambda);

} // namespace silverkite
