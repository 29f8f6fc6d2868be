#include "sfv/problem.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace sfv {

ScalarLaw ScalarLaw::zero() { return {[](double) { return 0.0; }, [](double) { return 0.0; }, true}; }

ScalarLaw ScalarLaw::constant(double c) { return {[c](double) { return c; }, [](double) { return 0.0; }, true}; }

ScalarLaw ScalarLaw::linear(double slope) {
  return {[slope](double u) { return slope * u; }, [slope](double) { return slope; }, true};
}

std::vector<std::string> check_assumptions(const ProblemSpec& problem) {
  std::vector<std::string> issues;
  if (std::abs(problem.flux(0.0)) > 1e-14) issues.push_back("flux f(0) != 0");
  if (std::abs(problem.reaction(0.0)) > 1e-14) issues.push_back("reaction beta(0) != 0");
  double previous = problem.flux(-10.0);
  for (int i = 1; i <= 400; ++i) {
    const double f = problem.flux(-10.0 + 0.05 * i);
    if (f < previous - 1e-14) {
      issues.push_back("flux f is decreasing somewhere on [-10, 10]");
      break;
    }
    previous = f;
  }
  if (problem.has_velocity() && !problem.divergence_free) issues.push_back("velocity is not flagged divergence-free");
  if (problem.has_velocity() && !problem.tangential) issues.push_back("velocity is not flagged tangential on the boundary");
  if (!problem.initial) issues.push_back("missing initial datum");
  return issues;
}

double cosine_product(const Point& x, int dimension) {
  double u = 1.0;
  for (int a = 0; a < dimension; ++a) u *= std::cos(std::numbers::pi * x[a]);
  return u;
}

Vector stream_velocity(double /*t*/, const Point& x) {
  const double pi = std::numbers::pi;
  return {std::sin(pi * x[0]) * std::cos(pi * x[1]), -std::cos(pi * x[0]) * std::sin(pi * x[1]), 0.0};
}

std::vector<std::string> preset_names() { return {"heat", "convection", "stochastic", "additive"}; }

ProblemSpec make_preset(const std::string& name, const PresetParams& params) {
  const int dim = params.dimension;
  if (dim != 2 && dim != 3) throw std::invalid_argument("preset dimension must be 2 or 3");
  ProblemSpec p;
  p.name = name;
  p.domain = Box::unit(dim);
  p.horizon = params.horizon;
  p.initial = [dim](const Point& x) { return cosine_product(x, dim); };

  auto with_convection = [&] {
    p.flux = ScalarLaw::linear(1.0);
    p.flux_lipschitz = 1.0;
    p.velocity = stream_velocity;
    p.steady_velocity = true;
  };

  if (name == "heat") {
    return p;
  }
  if (name == "convection") {
    with_convection();
    return p;
  }
  if (name == "stochastic") {
    with_convection();
    p.reaction = ScalarLaw::linear(params.reaction_rate);
    p.reaction_lipschitz = std::abs(params.reaction_rate);
    p.noise = ScalarLaw::linear(params.noise_amplitude);
    p.noise_lipschitz = std::abs(params.noise_amplitude);
    return p;
  }
  if (name == "additive") {
    with_convection();
    p.noise = ScalarLaw::constant(params.noise_amplitude);
    return p;
  }
  throw std::invalid_argument(fmt::format("unknown preset '{}'", name));
}

}  // namespace sfv
