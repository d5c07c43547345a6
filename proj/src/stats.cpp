#include "silverkite/stats.hpp"

#include "silverkite/error.hpp"

#include <cmath>
#include <limits>

namespace silverkite {

double normal_quantile(double p) {
	if (!(p > 0.0 && p < 1.0)) fail(errc::bad_config, "normal quantile needs p in (0,1)");
	// Wichura (1988), algorithm AS 241, PPND16.
	const double q = p - 0.5;
	if (std::abs(q) <= 0.425) {
		const double r = 0.180625 - q * q;
		return q *
		       (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
		             6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
		           1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
		         1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
		       (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
		             3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
		           5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
		         4.2313330701600911252e1) * r + 1.0);
	}
	double r = q < 0.0 ? p : 1.0 - p;
	r = std::sqrt(-std::log(r));
	double value;
	if (r <= 5.0) {
		r -= 1.6;
		value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
		              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
		            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
		          4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
		        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
		              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
		            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
		          2.05319162663775882187e0) * r + 1.0);
	} else {
		r -= 5.0;
		value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
		              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
		            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
		          5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
		        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
		              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
		            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
		          5.99832206555887937690e-1) * r + 1.0);
	}
	return q < 0.0 ? -value : value;
}

double normal_cdf(double x) {
	return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

double beta_cont_fraction(double a, double b, double x) {
	// Lentz's method for the incomplete beta continued fraction.
	constexpr int max_iter = 300;
	constexpr double eps = 3e-16;
	constexpr double fpmin = 1e-300;
	const double qab = a + b;
	const double qap = a + 1.0;
	const double qam = a - 1.0;
	double c = 1.0;
	double d = 1.0 - qab * x / qap;
	if (std::abs(d) < fpmin) d = fpmin;
	d = 1.0 / d;
	double h = d;
	for (int m = 1; m <= max_iter; ++m) {
		const int m2 = 2 * m;
		double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
		d = 1.0 + aa * d;
		if (std::abs(d) < fpmin) d = fpmin;
		c = 1.0 + aa / c;
		if (std::abs(c) < fpmin) c = fpmin;
		d = 1.0 / d;
		h *= d * c;
		aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
		d = 1.0 + aa * d;
		if (std::abs(d) < fpmin) d = fpmin;
		c = 1.0 + aa / c;
		if (std::abs(c) < fpmin) c = fpmin;
		d = 1.0 / d;
		const double del = d * c;
		h *= del;
		if (std::abs(del - 1.0) < eps) break;
	}
	return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
	if (x <= 0.0) return 0.0;
	if (x >= 1.0) return 1.0;
	const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
	                        a * std::log(x) + b * std::log1p(-x);
	const double front = std::exp(ln_front);
	if (x < (a + 1.0) / (a + b + 2.0)) {
		return front * beta_cont_fraction(a, b, x) / a;
	}
	return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
	if (df <= 0.0) return std::numeric_limits<double>::quiet_NaN();
	const double x = df / (df + t * t);
	return incomplete_beta(0.5 * df, 0.5, x);
}

} // namespace silverkite
