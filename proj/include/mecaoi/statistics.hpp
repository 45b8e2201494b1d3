// Small statistics toolkit: batch-means confidence intervals and the
// one-sample Kolmogorov-Smirnov test.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mecaoi::stats {

struct Interval {
    double mean = 0.0;
    double halfwidth = 0.0;
};

/// Two-sided Student-t quantile t_{(1+level)/2, dof}.
double student_t_quantile(double level, int dof);

/// Confidence interval for the mean of approximately independent batch means.
Interval batch_means_interval(std::span<const double> batch_means, double level = 0.99);

struct KsResult {
    double statistic = 0.0;  ///< sup |F_n - F|
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Limiting Kolmogorov distribution P(K > t) = 2 sum (-1)^{k-1} e^{-2 k^2 t^2}.
double kolmogorov_survival(double t);

/// One-sample KS test against a CDF that may have atoms. `cdf_left(x)` must
/// return P(X < x); when omitted the CDF is taken as continuous. The p-value
/// uses the limiting distribution with Stephens' small-sample correction,
/// which is conservative when the reference law has atoms.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                 const std::function<double(double)>& cdf_left = {});

/// Every `stride`-th element starting at `offset`.
std::vector<double> thin(std::span<const double> samples, std::size_t stride, std::size_t offset = 0);

}  // namespace mecaoi::stats
