#ifndef OTCAP_STATUTIL_HPP
#define OTCAP_STATUTIL_HPP

#include <vector>

namespace otcap {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// P(ChiSquare(df) > x).
double chi_square_tail(double x, int df);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion (default z: two-sided 95%).
WilsonInterval wilson_interval(int successes, int trials, double z = 1.959963984540054);

/// Pearson homogeneity test between two samples of a scalar statistic.
/// Bins are pooled quantiles (at most max_bins, duplicates merged); returns
/// the p-value, or 1.0 when there is nothing to compare.
double chi_square_homogeneity_p(const std::vector<double>& a, const std::vector<double>& b,
                                int max_bins = 8);

}  // namespace otcap

#endif
