#include "gibbstree/ks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gibbstree/errors.hpp"

namespace gibbstree {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form of the CDF converges fast for small lambda.
    const double pi = std::numbers::pi;
    const double q = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double term = std::exp((2.0 * j - 1) * (2.0 * j - 1) * q);
      cdf += term;
      if (term < 1e-300) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)> &cdf) {
  if (samples.empty()) throw DomainError("KS test needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {.statistic = d, .p_value = kolmogorov_survival(std::sqrt(n) * d), .n = samples.size()};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Advance past every copy of the smaller value so ties move together.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double n_eff = na * nb / (na + nb);
  return {.statistic = d, .p_value = kolmogorov_survival(std::sqrt(n_eff) * d),
          .n = a.size() + b.size()};
}

double gamma2_cdf(double t) {
  if (t <= 0.0) return 0.0;
  return -std::expm1(-t) - t * std::exp(-t);
}

}  // namespace gibbstree
