#pragma once

#include <functional>
#include <vector>

namespace treepack {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gammq(double a, double x);

/// Upper tail of the chi-square distribution with df degrees of freedom.
double chi2_pvalue(double stat, int df);

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic); input order is free.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/// One-sample Kolmogorov-Smirnov p-value against a reference CDF.
double ks_one_sample_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf);

/// Pearson chi-square of observed counts against expected counts; cells with
/// zero expectation must have zero observation.
double chi2_statistic(const std::vector<double>& observed, const std::vector<double>& expected);

/// Two-sample homogeneity chi-square over shared categories. Returns the
/// p-value; df = (#categories with any mass) - 1.
double chi2_homogeneity_pvalue(const std::vector<long>& counts_a, const std::vector<long>& counts_b);

struct SampleMoments {
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample sd / sqrt(n)
  long n = 0;
};

SampleMoments sample_moments(const std::vector<double>& xs);

}  // namespace treepack
