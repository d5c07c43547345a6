#include "silverkite/error.hpp"
#include "silverkite/rng.hpp"
#include "silverkite/solvers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace silverkite;

namespace {

// Test-side standardization mirroring the documented convention:
// population sd, centered columns, centered response.
struct Standardized {
	Eigen::MatrixXd Z;
	Eigen::VectorXd yc;
	Eigen::VectorXd mean, scale;
	double y_mean = 0;
};

Standardized standardize(const Eigen::MatrixXd &X, const Eigen::VectorXd &y) {
	Standardized s;
	const double n = static_cast<double>(X.rows());
	s.Z = X;
	s.mean.resize(X.cols());
	s.scale.resize(X.cols());
	for (Eigen::Index j = 0; j < X.cols(); ++j) {
		s.mean[j] = X.col(j).mean();
		s.scale[j] = std::sqrt((X.col(j).array() - s.mean[j]).square().sum() / n);
		s.Z.col(j) = (X.col(j).array() - s.mean[j]) / s.scale[j];
	}
	s.y_mean = y.mean();
	s.yc = y.array() - s.y_mean;
	return s;
}

// Independent ridge oracle: coordinate-wise updates on the standardized
// problem min ||yc - Z b||^2 + lambda ||b||^2, iterated to convergence.
Eigen::VectorXd coordinate_ridge_oracle(const Eigen::MatrixXd &Z, const Eigen::VectorXd &yc,
                                        double lambda) {
	Eigen::VectorXd beta = Eigen::VectorXd::Zero(Z.cols());
	Eigen::VectorXd r = yc;
	for (int sweep = 0; sweep < 100000; ++sweep) {
		double max_delta = 0.0;
		for (Eigen::Index j = 0; j < Z.cols(); ++j) {
			const double denom = Z.col(j).squaredNorm() + lambda;
			const double rho = Z.col(j).dot(r) + Z.col(j).squaredNorm() * beta[j];
			const double next = rho / denom;
			max_delta = std::max(max_delta, std::abs(next - beta[j]));
			r += Z.col(j) * (beta[j] - next);
			beta[j] = next;
		}
		if (max_delta < 1e-13) break;
	}
	return beta;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd &X) {
	Eigen::MatrixXd W(X.rows(), X.cols() + 1);
	W.col(0) = Eigen::VectorXd::Ones(X.rows());
	W.rightCols(X.cols()) = X;
	return W;
}

std::vector<std::string> names_with_intercept(int p) {
	std::vector<std::string> names = {"intercept"};
	for (int j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
	return names;
}

// Exact oracle for quantile regression with at most 2 columns: the optimum
// is attained at a vertex interpolating p data points.
double pinball_oracle_2col(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, double q) {
	double best = std::numeric_limits<double>::infinity();
	const Eigen::Index n = X.rows();
	if (X.cols() == 1) {
		for (Eigen::Index i = 0; i < n; ++i) {
			const Eigen::VectorXd r = y.array() - y[i];
			best = std::min(best, pinball_loss(r, q));
		}
		return best;
	}
	REQUIRE(X.cols() == 2); // intercept + slope
	for (Eigen::Index i = 0; i < n; ++i) {
		for (Eigen::Index j = i + 1; j < n; ++j) {
			const double xi = X(i, 1), xj = X(j, 1);
			if (xi == xj) continue;
			const double slope = (y[j] - y[i]) / (xj - xi);
			const double icept = y[i] - slope * xi;
			const Eigen::VectorXd r = y - (icept + slope * X.col(1).array()).matrix();
			best = std::min(best, pinball_loss(r, q));
		}
	}
	return best;
}

} // namespace

TEST_CASE("fit_ols on an intercept-only design returns the mean") {
	Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 1);
	Eigen::VectorXd y(2);
	y << 1, 3;
	const LinearFit fit = fit_ols(X, {"intercept"}, y);
	CHECK(fit.intercept == doctest::Approx(2.0));
	CHECK(fit.has_intercept);
}

TEST_CASE("fit_ols recovers an exact linear relation") {
	Eigen::MatrixXd X(5, 2);
	Eigen::VectorXd y(5);
	for (int i = 0; i < 5; ++i) {
		X(i, 0) = 1;
		X(i, 1) = i;
		y[i] = 2.0 * i;
	}
	const LinearFit fit = fit_ols(X, names_with_intercept(1), y);
	CHECK(fit.coefficient("x0") == doctest::Approx(2.0).epsilon(1e-12));
	CHECK(fit.residuals.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fit_ols rejects duplicated columns as rank deficient") {
	Eigen::MatrixXd X(6, 3);
	Rng rng(3);
	for (int i = 0; i < 6; ++i) {
		X(i, 0) = 1;
		X(i, 1) = rng.normal();
		X(i, 2) = X(i, 1);
	}
	Eigen::VectorXd y = X.col(1);
	CHECK_THROWS_AS(fit_ols(X, names_with_intercept(2), y), Error);
}

TEST_CASE("fit_ols needs enough rows") {
	Eigen::MatrixXd X(2, 3);
	X.setRandom();
	Eigen::VectorXd y(2);
	y.setRandom();
	CHECK_THROWS_AS(fit_ols(X, {"a", "b", "c"}, y), Error);
}

TEST_CASE("OLS residuals are orthogonal to the design") {
	Rng rng(11);
	Eigen::MatrixXd X(60, 4);
	Eigen::VectorXd y(60);
	for (int i = 0; i < 60; ++i) {
		X(i, 0) = 1;
		for (int j = 1; j < 4; ++j) X(i, j) = rng.normal();
		y[i] = 1.5 + X(i, 1) - 2.0 * X(i, 2) + 0.3 * rng.normal();
	}
	const LinearFit fit = fit_ols(X, names_with_intercept(3), y);
	for (Eigen::Index j = 0; j < 4; ++j) {
		CHECK(std::abs(X.col(j).dot(fit.residuals)) < 1e-8 * y.norm());
	}
}

TEST_CASE("fit_ridge with zero penalty matches OLS") {
	Rng rng(5);
	Eigen::MatrixXd X(40, 3);
	Eigen::VectorXd y(40);
	for (int i = 0; i < 40; ++i) {
		X(i, 0) = 1;
		X(i, 1) = rng.normal();
		X(i, 2) = rng.normal();
		y[i] = 2 + 0.5 * X(i, 1) - X(i, 2) + 0.1 * rng.normal();
	}
	const auto names = names_with_intercept(2);
	const LinearFit ols = fit_ols(X, names, y);
	const LinearFit ridge = fit_ridge(X, names, y, 0.0);
	CHECK(std::abs(ols.intercept - ridge.intercept) < 1e-8);
	CHECK((ols.beta - ridge.beta).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fit_ridge closed form on the no-intercept textbook case") {
	// (X'X + lambda)^-1 X'y with X = [1;2], y = [1;2], lambda = 1 -> 5/6.
	Eigen::MatrixXd X(2, 1);
	X << 1, 2;
	Eigen::VectorXd y(2);
	y << 1, 2;
	SolverOptions opts;
	opts.standardize = false;
	const LinearFit fit = fit_ridge(X, {"x"}, y, 1.0, opts);
	CHECK(fit.beta[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
	CHECK(!fit.has_intercept);
}

TEST_CASE("fit_ridge shrinks everything but the intercept at huge lambda") {
	Rng rng(9);
	Eigen::MatrixXd X(30, 3);
	Eigen::VectorXd y(30);
	for (int i = 0; i < 30; ++i) {
		X(i, 0) = 1;
		X(i, 1) = rng.normal();
		X(i, 2) = rng.normal();
		y[i] = 4 + X(i, 1) + rng.normal();
	}
	const LinearFit fit = fit_ridge(X, names_with_intercept(2), y, 1e12);
	CHECK(fit.beta.cwiseAbs().maxCoeff() < 1e-6);
	CHECK(fit.intercept == doctest::Approx(y.mean()).epsilon(1e-9));
}

TEST_CASE("ridge equals the coordinate-descent oracle on random problems") {
	for (std::uint64_t seed = 1; seed <= 20; ++seed) {
		Rng rng(seed);
		Eigen::MatrixXd X(50, 11);
		Eigen::VectorXd y(50);
		for (int i = 0; i < 50; ++i) {
			X(i, 0) = 1;
			for (int j = 1; j < 11; ++j) X(i, j) = rng.normal();
			y[i] = rng.normal() * 2.0 + X(i, 1) - 0.5 * X(i, 5);
		}
		const double lambda = 0.5 + 3.0 * rng.uniform();
		const LinearFit fit = fit_ridge(X, names_with_intercept(10), y, lambda);

		const Standardized s = standardize(X.rightCols(10), y);
		const Eigen::VectorXd oracle_std = coordinate_ridge_oracle(s.Z, s.yc, lambda);
		Eigen::VectorXd oracle = oracle_std.array() / s.scale.array();
		CHECK((fit.beta - oracle).cwiseAbs().maxCoeff() < 1e-8);
	}
}

TEST_CASE("1-D lasso equals the soft-thresholded OLS coefficient") {
	Rng rng(17);
	const int n = 64;
	Eigen::MatrixXd X(n, 2);
	Eigen::VectorXd y(n);
	for (int i = 0; i < n; ++i) {
		X(i, 0) = 1;
		X(i, 1) = rng.normal();
		y[i] = 0.8 * X(i, 1) + 0.3 * rng.normal();
	}
	const Standardized s = standardize(X.rightCols(1), y);
	const double beta_ols = s.Z.col(0).dot(s.yc) / static_cast<double>(n);
	for (const double lambda : {0.0, 0.1, 0.5, 1.0}) {
		const LinearFit fit = fit_lasso(X, names_with_intercept(1), y, lambda);
		const double expect =
		    (std::abs(beta_ols) <= lambda ? 0.0
		                                  : (beta_ols > 0 ? beta_ols - lambda : beta_ols + lambda));
		CHECK(fit.beta[0] * s.scale[0] == doctest::Approx(expect).epsilon(1e-6));
	}
}

TEST_CASE("lasso with zero penalty matches OLS") {
	Rng rng(23);
	Eigen::MatrixXd X(80, 4);
	Eigen::VectorXd y(80);
	for (int i = 0; i < 80; ++i) {
		X(i, 0) = 1;
		for (int j = 1; j < 4; ++j) X(i, j) = rng.normal();
		y[i] = 1 - X(i, 1) + 2 * X(i, 3) + 0.2 * rng.normal();
	}
	const auto names = names_with_intercept(3);
	const LinearFit lasso = fit_lasso(X, names, y, 0.0);
	const LinearFit ols = fit_ols(X, names, y);
	CHECK((lasso.beta - ols.beta).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("lasso zeroes every coefficient at lambda_max") {
	Rng rng(29);
	Eigen::MatrixXd X(50, 4);
	Eigen::VectorXd y(50);
	for (int i = 0; i < 50; ++i) {
		X(i, 0) = 1;
		for (int j = 1; j < 4; ++j) X(i, j) = rng.normal();
		y[i] = X(i, 1) + rng.normal();
	}
	const auto names = names_with_intercept(3);
	const double lmax = lasso_lambda_max(X, names, y);
	const LinearFit at = fit_lasso(X, names, y, lmax * (1 + 1e-12));
	CHECK(at.beta.cwiseAbs().maxCoeff() == 0.0);
	const LinearFit below = fit_lasso(X, names, y, lmax * 0.99);
	CHECK(below.beta.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("lasso satisfies the KKT conditions at convergence") {
	for (std::uint64_t seed : {101u, 202u, 303u}) {
		Rng rng(seed);
		const int n = 70, p = 8;
		Eigen::MatrixXd X(n, p + 1);
		Eigen::VectorXd y(n);
		for (int i = 0; i < n; ++i) {
			X(i, 0) = 1;
			for (int j = 1; j <= p; ++j) X(i, j) = rng.normal();
			y[i] = 2 * X(i, 1) - X(i, 2) + 0.5 * rng.normal();
		}
		const auto names = names_with_intercept(p);
		const double lambda = 0.1;
		const LinearFit fit = fit_lasso(X, names, y, lambda);
		REQUIRE(fit.converged);

		const Standardized s = standardize(X.rightCols(p), y);
		Eigen::VectorXd beta_std = fit.beta.array() * s.scale.array();
		const Eigen::VectorXd r = s.yc - s.Z * beta_std;
		for (int j = 0; j < p; ++j) {
			const double g = s.Z.col(j).dot(r) / n;
			if (beta_std[j] == 0.0) {
				CHECK(std::abs(g) <= lambda + 1e-6);
			} else {
				CHECK(g == doctest::Approx(lambda * (beta_std[j] > 0 ? 1.0 : -1.0)).epsilon(1e-6));
			}
		}
	}
}

TEST_CASE("adaptive lasso keeps strong pilots and kills weak ones") {
	// Orthonormal two-column design (Z'Z/n = I), y = 2 z1 + 0.01 z2.
	const int n = 8;
	Eigen::MatrixXd X(n, 2);
	for (int i = 0; i < n; ++i) {
		X(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
		X(i, 1) = (i % 4 < 2) ? 1.0 : -1.0;
	}
	Eigen::VectorXd y = 2.0 * X.col(0) + 0.01 * X.col(1);
	const std::vector<std::string> names = {"a", "b"};

	const double lambda = 0.002;
	const LinearFit fit = fit_adaptive_lasso(X, names, y, lambda, 1.0);
	// Weighted soft-threshold oracle with pilot ~ (2, 0.01).
	const double thr_a = lambda / (2.0 + 1e-8);
	const double thr_b = lambda / (0.01 + 1e-8);
	CHECK(fit.coefficient("a") == doctest::Approx(2.0 - thr_a).epsilon(1e-4));
	CHECK(fit.coefficient("b") == doctest::Approx(std::max(0.0, 0.01 - thr_b)).epsilon(1e-6));
	CHECK(fit.coefficient("b") == 0.0);

	// Relative shrinkage ordering: the strong pilot column barely moves.
	CHECK(2.0 - fit.coefficient("a") < 0.01);
}

TEST_CASE("adaptive lasso with gamma -> 0 reduces to plain lasso") {
	Rng rng(31);
	Eigen::MatrixXd X(60, 4);
	Eigen::VectorXd y(60);
	for (int i = 0; i < 60; ++i) {
		X(i, 0) = 1;
		for (int j = 1; j < 4; ++j) X(i, j) = rng.normal();
		y[i] = X(i, 1) - 0.4 * X(i, 2) + 0.3 * rng.normal();
	}
	const auto names = names_with_intercept(3);
	const LinearFit plain = fit_lasso(X, names, y, 0.05);
	const LinearFit adaptive = fit_adaptive_lasso(X, names, y, 0.05, 1e-9);
	CHECK((plain.beta - adaptive.beta).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("adaptive lasso drives zero-pilot columns to zero") {
	// Column c is pure noise orthogonal-ish to y; its pilot is tiny, so its
	// effective penalty explodes and the coefficient lands exactly on zero.
	Rng rng(37);
	const int n = 100;
	Eigen::MatrixXd X(n, 3);
	Eigen::VectorXd y(n);
	for (int i = 0; i < n; ++i) {
		X(i, 0) = 1;
		X(i, 1) = rng.normal();
		X(i, 2) = rng.normal();
		y[i] = 3.0 * X(i, 1);
	}
	const LinearFit fit = fit_adaptive_lasso(X, names_with_intercept(2), y, 0.01, 1.0);
	CHECK(fit.coefficient("x1") == 0.0);
	CHECK(fit.coefficient("x0") == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("intercept-only quantile fits hit the empirical quantile") {
	Eigen::MatrixXd X = Eigen::MatrixXd::Ones(5, 1);
	Eigen::VectorXd y(5);
	y << 1, 2, 3, 4, 5;
	const LinearFit fit = fit_quantile(X, {"intercept"}, y, 0.5);
	CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("quantile fit picks the boundary point when optimal") {
	Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 1);
	Eigen::VectorXd y(2);
	y << 0, 10;
	const LinearFit fit = fit_quantile(X, {"intercept"}, y, 0.2);
	CHECK(std::abs(fit.intercept) < 1e-4);
	CHECK(pinball_loss(fit.residuals, 0.2) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("quantile fit on exact linear data has zero pinball loss") {
	Eigen::MatrixXd X(10, 2);
	Eigen::VectorXd y(10);
	for (int i = 0; i < 10; ++i) {
		X(i, 0) = 1;
		X(i, 1) = i;
		y[i] = 2.0 * i;
	}
	for (const double q : {0.25, 0.5, 0.9}) {
		const LinearFit fit = fit_quantile(X, names_with_intercept(1), y, q);
		CHECK(fit.coefficient("x0") == doctest::Approx(2.0).epsilon(1e-6));
		CHECK(pinball_loss(fit.residuals, q) < 1e-6);
	}
}

TEST_CASE("quantile loss is within 0.1% of the vertex-enumeration oracle") {
	for (std::uint64_t seed : {41u, 42u, 43u}) {
		Rng rng(seed);
		const int n = 25;
		Eigen::MatrixXd X(n, 2);
		Eigen::VectorXd y(n);
		for (int i = 0; i < n; ++i) {
			X(i, 0) = 1;
			X(i, 1) = rng.normal();
			y[i] = 1.0 + 0.7 * X(i, 1) + rng.normal();
		}
		for (const double q : {0.3, 0.5, 0.8}) {
			const LinearFit fit = fit_quantile(X, names_with_intercept(1), y, q);
			const double achieved = pinball_loss(fit.residuals, q);
			const double oracle = pinball_oracle_2col(X, y, q);
			CHECK(achieved <= oracle * 1.001 + 1e-12);
		}
	}
}

TEST_CASE("quantile residual sign fractions bracket q") {
	Rng rng(53);
	const int n = 400;
	Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, 1);
	Eigen::VectorXd y(n);
	for (int i = 0; i < n; ++i) y[i] = rng.normal() * 3.0 + 1.0;
	for (const double q : {0.2, 0.5, 0.9}) {
		const LinearFit fit = fit_quantile(X, {"intercept"}, y, q);
		int negative = 0;
		for (Eigen::Index i = 0; i < n; ++i) {
			if (fit.residuals[i] < 0) ++negative;
		}
		const double frac = static_cast<double>(negative) / n;
		CHECK(frac >= q - 1.0 / n - 1e-9);
		CHECK(frac <= q + 1.0 / n + 1e-9);
	}
}

TEST_CASE("smoothed pinball gradient matches finite differences") {
	Rng rng(61);
	const int n = 30, p = 3;
	Eigen::MatrixXd X(n, p);
	Eigen::VectorXd y(n);
	for (int i = 0; i < n; ++i) {
		X(i, 0) = 1;
		for (int j = 1; j < p; ++j) X(i, j) = rng.normal();
		y[i] = rng.normal();
	}
	const std::vector<std::string> names = {"intercept", "x0", "x1"};
	const double q = 0.35, tau = 1e-2, lambda = 0.3;
	Eigen::VectorXd beta(p);
	for (int j = 0; j < p; ++j) beta[j] = rng.normal();

	const Eigen::VectorXd grad = quantile_gradient(X, names, y, beta, q, tau, lambda);
	const double h = 1e-6;
	for (int j = 0; j < p; ++j) {
		Eigen::VectorXd up = beta, dn = beta;
		up[j] += h;
		dn[j] -= h;
		const double fd = (quantile_objective(X, names, y, up, q, tau, lambda) -
		                   quantile_objective(X, names, y, dn, q, tau, lambda)) /
		                  (2 * h);
		CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-4));
	}
}

TEST_CASE("predict_linear is keyed by column name") {
	Rng rng(67);
	Eigen::MatrixXd X(20, 3);
	Eigen::VectorXd y(20);
	for (int i = 0; i < 20; ++i) {
		X(i, 0) = 1;
		X(i, 1) = rng.normal();
		X(i, 2) = rng.normal();
		y[i] = 1 + 2 * X(i, 1) - X(i, 2);
	}
	const std::vector<std::string> names = {"intercept", "a", "b"};
	const LinearFit fit = fit_ols(X, names, y);

	// Training design reproduces fitted values.
	const Eigen::VectorXd yhat = predict_linear(fit, X, names);
	CHECK((y - yhat - fit.residuals).cwiseAbs().maxCoeff() < 1e-10);

	// Permuted columns give identical predictions.
	Eigen::MatrixXd Xp(20, 3);
	Xp.col(0) = X.col(2);
	Xp.col(1) = X.col(0);
	Xp.col(2) = X.col(1);
	const Eigen::VectorXd yp = predict_linear(fit, Xp, {"b", "intercept", "a"});
	CHECK((yhat - yp).cwiseAbs().maxCoeff() == 0.0);

	// Zero features predict the constant intercept.
	Eigen::MatrixXd Xz = Eigen::MatrixXd::Zero(4, 3);
	const Eigen::VectorXd yz = predict_linear(fit, Xz, names);
	for (int i = 0; i < 4; ++i) CHECK(yz[i] == doctest::Approx(fit.intercept));

	CHECK_THROWS_AS(predict_linear(fit, X, {"intercept", "a", "zzz"}), Error);
}

TEST_CASE("constant columns are dropped with a warning entry") {
	Eigen::MatrixXd X(12, 3);
	Rng rng(71);
	for (int i = 0; i < 12; ++i) {
		X(i, 0) = 1;
		X(i, 1) = 5.0; // constant
		X(i, 2) = rng.normal();
	}
	Eigen::VectorXd y = X.col(2) * 2.0;
	const LinearFit fit = fit_ridge(X, {"intercept", "flat", "x"}, y, 0.1);
	REQUIRE(fit.dropped_columns.size() == 1);
	CHECK(fit.dropped_columns[0] == "flat");
	CHECK(fit.coefficient("flat") == 0.0);
}

TEST_CASE("OLS standard errors match the simple-regression closed form") {
	Rng rng(1);
	const int n = 40;
	Eigen::MatrixXd X(n, 2);
	Eigen::VectorXd y(n);
	for (int i = 0; i < n; ++i) {
		X(i, 0) = 1;
		X(i, 1) = 0.3 * i;
		y[i] = 2.0 + 0.5 * X(i, 1) + rng.normal();
	}
	const LinearFit fit = fit_ols(X, {"intercept", "x"}, y);
	REQUIRE(fit.has_inference);
	const double sigma2 = fit.residuals.squaredNorm() / (n - 2);
	const double xbar = X.col(1).mean();
	const double sxx = (X.col(1).array() - xbar).square().sum();
	CHECK(fit.std_errors[0] == doctest::Approx(std::sqrt(sigma2 / sxx)).epsilon(1e-12));
	CHECK(fit.intercept_stderr ==
	      doctest::Approx(std::sqrt(sigma2 * (1.0 / n + xbar * xbar / sxx))).epsilon(1e-12));
	// p-values are symmetric tail areas: a slope of zero is overwhelmingly
	// rejected here while a pure-noise column is not.
	CHECK(fit.p_values[0] < 1e-10);
}
