#pragma once

namespace bayestab {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile, p in (0,1).
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// Chi-squared CDF and quantile with k degrees of freedom.
double chi_squared_cdf(double x, double k);
double chi_squared_quantile(double p, double k);

}  // namespace bayestab
