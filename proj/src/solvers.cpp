#include "silverkite/solvers.hpp"

#include "silverkite/error.hpp"
#include "silverkite/stats.hpp"

#include <algorithm>
#include <cmath>

namespace silverkite {

namespace {

constexpr double kConstantVarEps = 1e-24;

struct Workspace {
	Eigen::Index intercept_idx = -1;
	bool has_intercept = false;
	bool standardized = false;
	std::vector<Eigen::Index> kept; // original column indices, non-intercept
	std::vector<std::string> dropped;
	Eigen::MatrixXd Z;   // working columns
	Eigen::VectorXd yw;  // centered when standardized
	Eigen::VectorXd mean, scale;
	double y_mean = 0.0;
};

Workspace build_workspace(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                          const Eigen::VectorXd &y, bool standardize) {
	if (static_cast<std::size_t>(X.cols()) != names.size()) {
		fail(errc::column_mismatch, "design has " + std::to_string(X.cols()) + " columns but " +
		                                std::to_string(names.size()) + " names");
	}
	if (X.rows() != y.size()) fail(errc::column_mismatch, "row count mismatch between X and y");

	Workspace w;
	for (std::size_t j = 0; j < names.size(); ++j) {
		if (names[j] == "intercept") w.intercept_idx = static_cast<Eigen::Index>(j);
	}
	w.has_intercept = w.intercept_idx >= 0;
	w.standardized = standardize && w.has_intercept;

	const Eigen::Index n = X.rows();
	const double dn = static_cast<double>(n);
	for (Eigen::Index j = 0; j < X.cols(); ++j) {
		if (j == w.intercept_idx) continue;
		const double mean = X.col(j).mean();
		const double var = (X.col(j).array() - mean).square().sum() / dn;
		const bool all_zero = X.col(j).cwiseAbs().maxCoeff() == 0.0;
		if (var <= kConstantVarEps && (w.has_intercept || all_zero)) {
			w.dropped.push_back(names[static_cast<std::size_t>(j)]);
			continue;
		}
		w.kept.push_back(j);
	}

	const Eigen::Index k = static_cast<Eigen::Index>(w.kept.size());
	w.Z.resize(n, k);
	w.mean = Eigen::VectorXd::Zero(k);
	w.scale = Eigen::VectorXd::Ones(k);
	for (Eigen::Index c = 0; c < k; ++c) {
		w.Z.col(c) = X.col(w.kept[static_cast<std::size_t>(c)]);
		if (w.standardized) {
			w.mean[c] = w.Z.col(c).mean();
			w.scale[c] = std::sqrt((w.Z.col(c).array() - w.mean[c]).square().sum() / dn);
			w.Z.col(c) = (w.Z.col(c).array() - w.mean[c]) / w.scale[c];
		}
	}
	w.y_mean = y.mean();
	w.yw = w.standardized ? (y.array() - w.y_mean).matrix() : y;
	return w;
}

// Maps a solution over the working columns back to the full design.
LinearFit finalize(const Workspace &w, const Eigen::MatrixXd &X,
                   const std::vector<std::string> &names, const Eigen::VectorXd &y,
                   const Eigen::VectorXd &beta_kept, double explicit_intercept,
                   bool intercept_solved_explicitly) {
	LinearFit fit;
	fit.has_intercept = w.has_intercept;
	fit.n = X.rows();
	fit.dropped_columns = w.dropped;

	fit.beta = Eigen::VectorXd::Zero(X.cols() - (w.has_intercept ? 1 : 0));
	Eigen::Index out = 0;
	std::vector<Eigen::Index> beta_pos(static_cast<std::size_t>(X.cols()), -1);
	for (Eigen::Index j = 0; j < X.cols(); ++j) {
		if (j == w.intercept_idx) continue;
		fit.names.push_back(names[static_cast<std::size_t>(j)]);
		beta_pos[static_cast<std::size_t>(j)] = out++;
	}
	for (std::size_t c = 0; c < w.kept.size(); ++c) {
		const double b = w.standardized ? beta_kept[static_cast<Eigen::Index>(c)] /
		                                      w.scale[static_cast<Eigen::Index>(c)]
		                                : beta_kept[static_cast<Eigen::Index>(c)];
		fit.beta[beta_pos[static_cast<std::size_t>(w.kept[c])]] = b;
	}
	if (w.has_intercept) {
		if (intercept_solved_explicitly) {
			fit.intercept = explicit_intercept;
			if (w.standardized) {
				for (std::size_t c = 0; c < w.kept.size(); ++c) {
					fit.intercept -= beta_kept[static_cast<Eigen::Index>(c)] /
					                 w.scale[static_cast<Eigen::Index>(c)] *
					                 w.mean[static_cast<Eigen::Index>(c)];
				}
			}
		} else {
			fit.intercept = w.y_mean;
			for (std::size_t c = 0; c < w.kept.size(); ++c) {
				fit.intercept -= beta_kept[static_cast<Eigen::Index>(c)] /
				                 w.scale[static_cast<Eigen::Index>(c)] *
				                 w.mean[static_cast<Eigen::Index>(c)];
			}
		}
	}

	fit.fitted = Eigen::VectorXd::Constant(X.rows(), fit.intercept);
	Eigen::Index bi = 0;
	for (Eigen::Index j = 0; j < X.cols(); ++j) {
		if (j == w.intercept_idx) continue;
		if (fit.beta[bi] != 0.0) fit.fitted += fit.beta[bi] * X.col(j);
		++bi;
	}
	fit.residuals = y - fit.fitted;
	fit.p = static_cast<Eigen::Index>(w.kept.size()) + (w.has_intercept ? 1 : 0);
	return fit;
}

double soft_threshold(double v, double t) {
	if (v > t) return v - t;
	if (v < -t) return v + t;
	return 0.0;
}

// Cyclic coordinate descent for (1/2n)||yw - Z b||^2 + lambda sum w_j |b_j|.
Eigen::VectorXd coordinate_descent(const Eigen::MatrixXd &Z, const Eigen::VectorXd &yw,
                                   double lambda, const Eigen::VectorXd &factors,
                                   const SolverOptions &opts, bool &converged, int &sweeps) {
	const Eigen::Index n = Z.rows();
	const Eigen::Index k = Z.cols();
	const double dn = static_cast<double>(n);
	Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
	Eigen::VectorXd sq_norm_over_n(k);
	for (Eigen::Index j = 0; j < k; ++j) sq_norm_over_n[j] = Z.col(j).squaredNorm() / dn;

	Eigen::VectorXd r = yw;
	converged = false;
	sweeps = 0;
	for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
		double max_delta = 0.0;
		for (Eigen::Index j = 0; j < k; ++j) {
			if (sq_norm_over_n[j] == 0.0) continue;
			const double old = beta[j];
			const double rho = Z.col(j).dot(r) / dn + sq_norm_over_n[j] * old;
			double next;
			if (factors[j] > 0.0) {
				next = soft_threshold(rho, lambda * factors[j]) / sq_norm_over_n[j];
			} else {
				next = rho / sq_norm_over_n[j];
			}
			if (next != old) {
				r += Z.col(j) * (old - next);
				beta[j] = next;
				max_delta = std::max(max_delta, std::abs(next - old));
			}
		}
		++sweeps;
		if (max_delta < opts.tol) {
			converged = true;
			break;
		}
	}
	return beta;
}

Eigen::VectorXd kept_factors(const Workspace &w, const std::vector<std::string> &names,
                             const Eigen::VectorXd *penalty_factors) {
	Eigen::VectorXd f = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(w.kept.size()));
	if (penalty_factors == nullptr) return f;
	if (static_cast<std::size_t>(penalty_factors->size()) != names.size()) {
		fail(errc::column_mismatch, "penalty factor length must match the design width");
	}
	for (std::size_t c = 0; c < w.kept.size(); ++c) {
		f[static_cast<Eigen::Index>(c)] = (*penalty_factors)[w.kept[c]];
	}
	return f;
}

double lambda_max_impl(const Workspace &w, const Eigen::VectorXd &factors) {
	const double dn = static_cast<double>(w.Z.rows());
	Eigen::VectorXd r = w.yw;
	std::vector<Eigen::Index> free_cols;
	for (Eigen::Index j = 0; j < factors.size(); ++j) {
		if (factors[j] == 0.0) free_cols.push_back(j);
	}
	if (!free_cols.empty()) {
		Eigen::MatrixXd F(w.Z.rows(), static_cast<Eigen::Index>(free_cols.size()));
		for (std::size_t c = 0; c < free_cols.size(); ++c) {
			F.col(static_cast<Eigen::Index>(c)) = w.Z.col(free_cols[c]);
		}
		r -= F * F.colPivHouseholderQr().solve(w.yw);
	}
	double lmax = 0.0;
	for (Eigen::Index j = 0; j < factors.size(); ++j) {
		if (factors[j] <= 0.0) continue;
		lmax = std::max(lmax, std::abs(w.Z.col(j).dot(r) / dn) / factors[j]);
	}
	return lmax;
}

} // namespace

double LinearFit::coefficient(const std::string &name) const {
	if (name == "intercept") return intercept;
	for (std::size_t i = 0; i < names.size(); ++i) {
		if (names[i] == name) return beta[static_cast<Eigen::Index>(i)];
	}
	fail(errc::column_mismatch, "no coefficient named '" + name + "'");
}

LinearFit fit_ols(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                  const Eigen::VectorXd &y) {
	Workspace w = build_workspace(X, names, y, false);
	const Eigen::Index k = static_cast<Eigen::Index>(w.kept.size());
	const Eigen::Index p = k + (w.has_intercept ? 1 : 0);
	if (X.rows() < p) {
		fail(errc::too_few_rows, "OLS needs at least as many usable rows as columns");
	}
	Eigen::MatrixXd W(X.rows(), p);
	Eigen::Index c = 0;
	if (w.has_intercept) W.col(c++) = Eigen::VectorXd::Ones(X.rows());
	for (Eigen::Index j = 0; j < k; ++j) W.col(c++) = w.Z.col(j);

	Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(W);
	if (qr.rank() < p) {
		fail(errc::rank_deficient, "design is rank deficient after dropping constant columns; "
		                           "consider ridge regression");
	}
	Eigen::VectorXd sol = qr.solve(y);

	Eigen::VectorXd beta_kept = w.has_intercept ? sol.tail(k).eval() : sol;
	LinearFit fit = finalize(w, X, names, y, beta_kept, w.has_intercept ? sol[0] : 0.0, true);
	fit.loss = fit.residuals.squaredNorm();

	const double df = static_cast<double>(X.rows() - p);
	if (df > 0) {
		const double sigma2 = fit.loss / df;
		Eigen::MatrixXd xtx_inv =
		    (W.transpose() * W).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
		Eigen::VectorXd se = (sigma2 * xtx_inv.diagonal().array()).sqrt();
		fit.std_errors = Eigen::VectorXd::Zero(fit.beta.size());
		fit.t_values = Eigen::VectorXd::Zero(fit.beta.size());
		fit.p_values = Eigen::VectorXd::Constant(fit.beta.size(), 1.0);
		Eigen::Index wi = w.has_intercept ? 1 : 0;
		for (std::size_t j = 0; j < w.kept.size(); ++j) {
			Eigen::Index out = 0;
			for (Eigen::Index col = 0; col < X.cols(); ++col) {
				if (col == w.intercept_idx) continue;
				if (col == w.kept[j]) break;
				++out;
			}
			fit.std_errors[out] = se[wi];
			fit.t_values[out] = beta_kept[static_cast<Eigen::Index>(j)] / se[wi];
			fit.p_values[out] = student_t_two_sided_p(fit.t_values[out], df);
			++wi;
		}
		if (w.has_intercept) {
			fit.intercept_stderr = se[0];
			fit.intercept_t = sol[0] / se[0];
			fit.intercept_p = student_t_two_sided_p(fit.intercept_t, df);
		}
		fit.has_inference = true;
	}
	return fit;
}

LinearFit fit_ridge(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                    const Eigen::VectorXd &y, double lambda, const SolverOptions &opts) {
	if (lambda < 0) fail(errc::bad_config, "ridge lambda must be >= 0");
	if (X.rows() < 2) fail(errc::too_few_rows, "ridge needs at least 2 rows");
	Workspace w = build_workspace(X, names, y, opts.standardize);
	const Eigen::Index k = static_cast<Eigen::Index>(w.kept.size());

	Eigen::VectorXd beta_kept = Eigen::VectorXd::Zero(k);
	double explicit_intercept = 0.0;
	bool solved_intercept = false;
	if (w.standardized || !w.has_intercept) {
		if (k > 0) {
			Eigen::MatrixXd A = w.Z.transpose() * w.Z;
			A.diagonal().array() += lambda;
			beta_kept = A.ldlt().solve(w.Z.transpose() * w.yw);
		}
	} else {
		// Intercept present but standardization disabled: solve jointly with an
		// unpenalized intercept.
		Eigen::MatrixXd W(X.rows(), k + 1);
		W.col(0) = Eigen::VectorXd::Ones(X.rows());
		for (Eigen::Index j = 0; j < k; ++j) W.col(j + 1) = w.Z.col(j);
		Eigen::MatrixXd A = W.transpose() * W;
		for (Eigen::Index j = 1; j <= k; ++j) A(j, j) += lambda;
		Eigen::VectorXd sol = A.ldlt().solve(W.transpose() * y);
		explicit_intercept = sol[0];
		beta_kept = sol.tail(k);
		solved_intercept = true;
	}

	LinearFit fit = finalize(w, X, names, y, beta_kept, explicit_intercept, solved_intercept);
	fit.lambda = lambda;
	fit.loss = fit.residuals.squaredNorm() + lambda * beta_kept.squaredNorm();
	return fit;
}

LinearFit fit_lasso_weighted(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                             const Eigen::VectorXd &y, double lambda,
                             const Eigen::VectorXd &penalty_factors, const SolverOptions &opts) {
	if (lambda < 0) fail(errc::bad_config, "lasso lambda must be >= 0");
	// Coordinate descent needs centered data when an intercept is present, so
	// the standardize option is only meaningful for intercept-free designs.
	Workspace w = build_workspace(X, names, y, true);
	Eigen::VectorXd factors = kept_factors(w, names, &penalty_factors);

	bool converged = false;
	int sweeps = 0;
	Eigen::VectorXd beta_kept =
	    coordinate_descent(w.Z, w.yw, lambda, factors, opts, converged, sweeps);

	LinearFit fit = finalize(w, X, names, y, beta_kept, 0.0, false);
	fit.converged = converged;
	fit.sweeps = sweeps;
	fit.lambda = lambda;
	const double dn = static_cast<double>(X.rows());
	fit.loss = (w.yw - w.Z * beta_kept).squaredNorm() / (2.0 * dn) +
	           lambda * (factors.array() * beta_kept.array().abs()).sum();
	return fit;
}

LinearFit fit_lasso(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                    const Eigen::VectorXd &y, double lambda, const SolverOptions &opts) {
	return fit_lasso_weighted(X, names, y, lambda,
	                          Eigen::VectorXd::Ones(static_cast<Eigen::Index>(names.size())), opts);
}

double lasso_lambda_max(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                        const Eigen::VectorXd &y, const Eigen::VectorXd *penalty_factors) {
	Workspace w = build_workspace(X, names, y, true);
	Eigen::VectorXd factors = kept_factors(w, names, penalty_factors);
	return lambda_max_impl(w, factors);
}

LinearFit fit_adaptive_lasso(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                             const Eigen::VectorXd &y, double lambda, double gamma,
                             const Eigen::VectorXd *penalty_factors, const SolverOptions &opts) {
	constexpr double kWeightEps = 1e-8;
	Workspace w = build_workspace(X, names, y, true);
	Eigen::VectorXd base_factors = kept_factors(w, names, penalty_factors);

	// Stage 1: small-ridge pilot in the working space.
	const double lmax = lambda_max_impl(w, base_factors);
	const double pilot_lambda = 1e-4 * lmax * static_cast<double>(X.rows());
	Eigen::VectorXd pilot;
	{
		Eigen::MatrixXd A = w.Z.transpose() * w.Z;
		A.diagonal().array() += std::max(pilot_lambda, 1e-12);
		pilot = A.ldlt().solve(w.Z.transpose() * w.yw);
	}

	// Stage 2: lasso with inverse-pilot weights on the penalized columns.
	Eigen::VectorXd factors = base_factors;
	for (Eigen::Index j = 0; j < factors.size(); ++j) {
		if (factors[j] > 0.0) {
			factors[j] /= std::pow(std::abs(pilot[j]), gamma) + kWeightEps;
		}
	}
	bool converged = false;
	int sweeps = 0;
	Eigen::VectorXd beta_kept =
	    coordinate_descent(w.Z, w.yw, lambda, factors, opts, converged, sweeps);

	LinearFit fit = finalize(w, X, names, y, beta_kept, 0.0, false);
	fit.converged = converged;
	fit.sweeps = sweeps;
	fit.lambda = lambda;
	const double dn = static_cast<double>(X.rows());
	fit.loss = (w.yw - w.Z * beta_kept).squaredNorm() / (2.0 * dn) +
	           lambda * (factors.array() * beta_kept.array().abs()).sum();
	return fit;
}

double pinball_loss(const Eigen::VectorXd &residuals, double q) {
	double acc = 0.0;
	for (Eigen::Index i = 0; i < residuals.size(); ++i) {
		const double u = residuals[i];
		acc += u * (q - (u < 0 ? 1.0 : 0.0));
	}
	return acc;
}

double smoothed_pinball_value(double u, double q, double tau) {
	const double side = u > 0 ? q : 1.0 - q;
	const double a = std::abs(u);
	if (a < tau) return side * u * u / (2.0 * tau);
	return side * (a - 0.5 * tau);
}

double smoothed_pinball_derivative(double u, double q, double tau) {
	if (u >= tau) return q;
	if (u <= -tau) return -(1.0 - q);
	return (u > 0 ? q : 1.0 - q) * u / tau;
}

double quantile_objective(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                          const Eigen::VectorXd &y, const Eigen::VectorXd &beta, double q,
                          double tau, double lambda) {
	double obj = 0.0;
	const Eigen::VectorXd u = y - X * beta;
	for (Eigen::Index i = 0; i < u.size(); ++i) obj += smoothed_pinball_value(u[i], q, tau);
	for (std::size_t j = 0; j < names.size(); ++j) {
		if (names[j] != "intercept") obj += lambda * beta[static_cast<Eigen::Index>(j)] * beta[static_cast<Eigen::Index>(j)];
	}
	return obj;
}

Eigen::VectorXd quantile_gradient(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                                  const Eigen::VectorXd &y, const Eigen::VectorXd &beta, double q,
                                  double tau, double lambda) {
	const Eigen::VectorXd u = y - X * beta;
	Eigen::VectorXd g = Eigen::VectorXd::Zero(beta.size());
	for (Eigen::Index i = 0; i < u.size(); ++i) {
		g -= smoothed_pinball_derivative(u[i], q, tau) * X.row(i).transpose();
	}
	for (std::size_t j = 0; j < names.size(); ++j) {
		if (names[j] != "intercept") g[static_cast<Eigen::Index>(j)] += 2.0 * lambda * beta[static_cast<Eigen::Index>(j)];
	}
	return g;
}

LinearFit fit_quantile(const Eigen::MatrixXd &X, const std::vector<std::string> &names,
                       const Eigen::VectorXd &y, double q, double lambda,
                       const SolverOptions &opts) {
	if (!(q > 0.0 && q < 1.0)) fail(errc::bad_config, "quantile level must lie in (0,1)");
	if (lambda < 0) fail(errc::bad_config, "quantile lambda must be >= 0");
	Workspace w = build_workspace(X, names, y, opts.standardize);
	const Eigen::Index k = static_cast<Eigen::Index>(w.kept.size());
	const Eigen::Index p = k + (w.has_intercept ? 1 : 0);
	if (X.rows() < std::max<Eigen::Index>(p, 1)) {
		fail(errc::too_few_rows, "quantile fit needs at least as many rows as columns");
	}

	// Work on raw y with an explicit (unpenalized) intercept column; the
	// non-intercept columns are the standardized ones from the workspace.
	Eigen::MatrixXd W(X.rows(), p);
	Eigen::Index c = 0;
	if (w.has_intercept) W.col(c++) = Eigen::VectorXd::Ones(X.rows());
	for (Eigen::Index j = 0; j < k; ++j) W.col(c++) = w.Z.col(j);
	Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p, lambda);
	if (w.has_intercept) penalty[0] = 0.0;

	Eigen::VectorXd beta;
	{
		Eigen::MatrixXd A = W.transpose() * W;
		A.diagonal() += penalty;
		A.diagonal().array() += 1e-10;
		beta = A.ldlt().solve(W.transpose() * y);
	}

	bool converged = true;
	const double dnorm = std::max(1.0, y.cwiseAbs().maxCoeff());
	for (const double tau : {1e-2, 1e-4, 1e-6}) {
		converged = false;
		for (int iter = 0; iter < 500; ++iter) {
			const Eigen::VectorXd u = y - W * beta;
			Eigen::VectorXd wts(u.size());
			for (Eigen::Index i = 0; i < u.size(); ++i) {
				const double side = u[i] > 0 ? q : 1.0 - q;
				wts[i] = side / (2.0 * std::max(std::abs(u[i]), tau));
			}
			Eigen::MatrixXd A = W.transpose() * wts.asDiagonal() * W;
			A.diagonal() += penalty;
			Eigen::VectorXd next = A.ldlt().solve(W.transpose() * (wts.asDiagonal() * y));
			const double delta = (next - beta).cwiseAbs().maxCoeff();
			beta = next;
			if (delta < 1e-10 * dnorm) {
				converged = true;
				break;
			}
		}
	}

	Eigen::VectorXd beta_kept = w.has_intercept ? beta.tail(k).eval() : beta;
	LinearFit fit = finalize(w, X, names, y, beta_kept, w.has_intercept ? beta[0] : 0.0, true);
	fit.converged = converged;
	fit.lambda = lambda;
	fit.loss = pinball_loss(fit.residuals, q);
	return fit;
}

Eigen::VectorXd predict_linear(const LinearFit &fit, const Eigen::MatrixXd &X,
                               const std::vector<std::string> &names) {
	const std::size_t expected = fit.names.size() + (fit.has_intercept ? 1 : 0);
	if (names.size() != expected) {
		fail(errc::column_mismatch, "prediction design has " + std::to_string(names.size()) +
		                                " columns, fit expects " + std::to_string(expected));
	}
	Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), fit.intercept);
	for (std::size_t j = 0; j < fit.names.size(); ++j) {
		const auto it = std::find(names.begin(), names.end(), fit.names[j]);
		if (it == names.end()) {
			fail(errc::column_mismatch, "prediction design lacks column '" + fit.names[j] + "'");
		}
		const Eigen::Index col = static_cast<Eigen::Index>(it - names.begin());
		const double b = fit.beta[static_cast<Eigen::Index>(j)];
		if (b != 0.0) out += b * X.col(col);
	}
	return out;
}

} // namespace silverkite
