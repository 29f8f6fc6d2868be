#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sfv/discrete_ops.hpp"
#include "sfv/mesh.hpp"

namespace sfv {

/// Scalar nonlinearity with its derivative (the Newton Jacobian needs both).
struct ScalarLaw {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  bool affine = false;

  double operator()(double u) const { return value(u); }

  static ScalarLaw zero();
  static ScalarLaw constant(double c);
  static ScalarLaw linear(double slope);
};

/// Data of du - Lap(u) dt + div(v f(u)) dt = g(u) dW + beta(u) dt with
/// homogeneous Neumann conditions.
struct ProblemSpec {
  std::string name;
  Box domain = Box::unit(2);
  ScalarField initial;
  ScalarLaw flux = ScalarLaw::zero();
  ScalarLaw reaction = ScalarLaw::zero();
  ScalarLaw noise = ScalarLaw::zero();
  VelocityField velocity;  // empty means v = 0
  bool steady_velocity = true;
  double horizon = 1.0;

  // Bounds on |f'|, |beta'|, |g'|; diagnostics only.
  double flux_lipschitz = 0.0;
  double reaction_lipschitz = 0.0;
  double noise_lipschitz = 0.0;
  bool divergence_free = true;
  bool tangential = true;

  bool has_velocity() const { return static_cast<bool>(velocity); }
};

/// Numerical checks of f(0) = 0, beta(0) = 0, f non-decreasing on a sample
/// grid, and the velocity flags. Returns one message per violated condition.
std::vector<std::string> check_assumptions(const ProblemSpec& problem);

struct PresetParams {
  int dimension = 2;
  double horizon = 0.1;
  double noise_amplitude = 0.5;  // sigma in g(u) = sigma u, or c in g = c
  double reaction_rate = 0.2;    // b in beta(u) = b u
};

/// prod_i cos(pi x_i) on the unit square/cube.
double cosine_product(const Point& x, int dimension);

/// v = curl psi, psi = sin(pi x1) sin(pi x2) / pi; divergence-free and
/// tangential on the boundary of the unit square (third component zero).
Vector stream_velocity(double t, const Point& x);

/// Registered presets:
///   heat        v = 0, f = beta = g = 0 (closed-form solution available)
///   convection  f = id, stream velocity, beta = g = 0
///   stochastic  f = id, stream velocity, beta = b u, g = sigma u
///   additive    f = id, stream velocity, beta = 0, g = c
/// All start from prod_i cos(pi x_i).
ProblemSpec make_preset(const std::string& name, const PresetParams& params);

std::vector<std::string> preset_names();

}  // namespace sfv
