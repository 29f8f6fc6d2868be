#include "sfv/rates.hpp"

#include <algorithm>
#include <cmath>

namespace sfv {

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw DomainError("fit_rate needs at least two (scale, error) pairs");
  const double n = static_cast<double>(pairs.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [scale, error] : pairs) {
    if (!(scale > 0.0) || !(error > 0.0)) throw DomainError("fit_rate needs positive scales and errors");
    sx += std::log(scale);
    sy += std::log(error);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [scale, error] : pairs) {
    const double dx = std::log(scale) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(error) - my);
  }
  if (sxx == 0.0) throw DomainError("fit_rate needs at least two distinct scales");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [scale, error] : pairs) {
    const double d = std::log(error) - (fit.intercept + fit.slope * std::log(scale));
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

MeanCi mc_mean_ci(std::vector<double> samples) {
  if (samples.size() < 2) throw DomainError("mc_mean_ci needs at least two samples");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / m;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double std_dev = std::sqrt(ss / (m - 1.0));
  return {mean, 1.96 * std_dev / std::sqrt(m)};
}

}  // namespace sfv
