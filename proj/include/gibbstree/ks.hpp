#ifndef GIBBSTREE_KS_HPP_
#define GIBBSTREE_KS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace gibbstree {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// One-sample test of `samples` against a continuous CDF; p-value from the
/// asymptotic law of sqrt(n) D_n.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)> &cdf);

/// Two-sample test; p-value uses the effective size n1 n2 / (n1 + n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// CDF of the Gamma(2, 1) law with density t e^{-t}: 1 - e^{-t}(1 + t).
double gamma2_cdf(double t);

}  // namespace gibbstree

#endif  // GIBBSTREE_KS_HPP_
