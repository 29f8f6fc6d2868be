#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace sfv {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square deviation in log space
};

/// Least-squares line through (log scale, log error). Needs at least two
/// pairs with positive entries.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 * sample std / sqrt(M)
};

/// Sample mean and 95% normal half-width, summed in a fixed order that does
/// not depend on the order of `samples`.
MeanCi mc_mean_ci(std::vector<double> samples);

}  // namespace sfv
