#pragma once

// Special functions shared by the samplers, the bound diagnostics and the
// statistical tests.

namespace rooneysim::special {

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
// Continued fraction (modified Lentz) with the usual symmetry switch.
double incomplete_beta(double x, double a, double b);

// Inverse of I_x(a, b) in x: the p-quantile of Beta(a, b).
double incomplete_beta_inverse(double p, double a, double b);

// Beta(a, b) median.
double beta_median(double a, double b);

double normal_pdf(double z);
double normal_cdf(double z);
// Upper tail 1 - normal_cdf(z), accurate for large z.
double normal_sf(double z);
double normal_quantile(double p);

// Student t with df degrees of freedom (df > 0, real-valued).
double student_t_cdf(double t, double df);
// Two-sided p-value Pr[|T| >= |t|].
double student_t_two_sided_p(double t, double df);

}  // namespace rooneysim::special
