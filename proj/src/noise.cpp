#include "sfv/noise.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace sfv {

namespace {

// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t path, std::uint64_t counter) {
  return mix(mix(mix(seed) ^ path) ^ counter);
}

// Uniform on (0, 1], 53 bits.
double to_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53; }

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t index) {
  // Box-Muller on the pair (index / 2); even indices take the cosine branch.
  const std::uint64_t pair = index >> 1;
  const double u1 = to_unit(key(seed, path, 2 * pair));
  const double u2 = to_unit(key(seed, path, 2 * pair + 1));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (index & 1) == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

NoisePath::NoisePath(double horizon, std::uint64_t seed, std::uint64_t path_index, std::vector<double> brownian_nodes)
    : horizon_(horizon), seed_(seed), path_index_(path_index), nodes_(std::move(brownian_nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("a noise path needs at least one step");
}

std::vector<double> NoisePath::increments() const {
  std::vector<double> out(steps());
  for (std::size_t n = 1; n <= steps(); ++n) out[n - 1] = increment(n);
  return out;
}

NoisePath sample_path(std::uint64_t seed, std::uint64_t path_index, std::size_t finest_steps, double horizon) {
  if (finest_steps < 1) throw std::invalid_argument("finest_steps must be >= 1");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double scale = std::sqrt(horizon / static_cast<double>(finest_steps));
  std::vector<double> nodes(finest_steps + 1, 0.0);
  for (std::size_t n = 1; n <= finest_steps; ++n) {
    nodes[n] = nodes[n - 1] + scale * counter_normal(seed, path_index, n - 1);
  }
  return NoisePath(horizon, seed, path_index, std::move(nodes));
}

NoisePath coarsened(const NoisePath& path, std::size_t steps) {
  if (steps == 0 || path.steps() % steps != 0) {
    throw CouplingError(fmt::format("{} steps cannot be coupled to a path with {} steps", steps, path.steps()));
  }
  const std::size_t ratio = path.steps() / steps;
  std::vector<double> nodes(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) nodes[n] = path.brownian(n * ratio);
  return NoisePath(path.horizon(), path.seed(), path.path_index(), std::move(nodes));
}

std::vector<double> coarsen(const NoisePath& path, std::size_t steps) { return coarsened(path, steps).increments(); }

}  // namespace sfv
