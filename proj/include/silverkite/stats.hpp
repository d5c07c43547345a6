#pragma once

namespace silverkite {

// Inverse standard normal CDF (Wichura's PPND16), |error| < 1e-15 over (0,1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

} // namespace silverkite
