#pragma once

namespace choicestat {

/// Standard normal CDF, evaluated through erfc so that both tails keep full
/// relative precision.
double normal_cdf(double x);

double normal_pdf(double x);

/// Inverse of normal_cdf by safeguarded Newton/bisection on the forward CDF.
/// Requires 0 < p < 1.
double normal_quantile(double p);

/// Regularised lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularised upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double regularized_gamma_q(double a, double x);

/// Chi-square CDF with `df` degrees of freedom. Throws InputError for x < 0
/// or df < 1.
double chisq_cdf(double x, int df);
/// Upper tail 1 - chisq_cdf(x, df) without cancellation.
double chisq_sf(double x, int df);

}  // namespace choicestat
