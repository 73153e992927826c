#pragma once

namespace dqlab {

// Standard normal density, distribution function and quantile.
// normal_cdf uses erfc so both tails keep full relative accuracy;
// normal_quantile is a rational approximation polished by one Halley step,
// giving roughly machine precision on (0,1).
double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
// Continued-fraction evaluation (modified Lentz), accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

// Student-t with dof degrees of freedom, location 0, scale 1.
// The cdf and survival go through the incomplete beta, which keeps full
// relative accuracy in the far tail; the quantile inverts the survival by
// bracketed bisection to 1e-12 relative accuracy in x.
double student_t_pdf(double dof, double x);
double student_t_cdf(double dof, double x);
double student_t_survival(double dof, double x);
// Upper quantile at tail probability alpha: x with P(T > x) = alpha.
// Works for alpha all the way down to the underflow threshold.
double student_t_upper_quantile(double dof, double alpha);
double student_t_quantile(double dof, double p);

} // namespace dqlab
