#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sfv {

class CouplingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Equidistant grid 0 = t_0 < ... < t_N = T.
struct TimeGrid {
  std::size_t steps = 1;
  double horizon = 1.0;

  double step() const { return horizon / static_cast<double>(steps); }
  double node(std::size_t n) const { return n == steps ? horizon : static_cast<double>(n) * step(); }
};

/// Standard normal draw for the counter (seed, path, index). Pure function:
/// the result does not depend on evaluation order or thread.
double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t index);

/// One Brownian path sampled on the finest grid. Coarser grids are obtained
/// by sub-sampling the node values, so every level sees the same W.
class NoisePath {
 public:
  NoisePath(double horizon, std::uint64_t seed, std::uint64_t path_index, std::vector<double> brownian_nodes);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return nodes_.size() - 1; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t path_index() const { return path_index_; }

  /// W(t_n) on this path's grid, W(t_0) = 0.
  double brownian(std::size_t n) const { return nodes_[n]; }
  const std::vector<double>& brownian_nodes() const { return nodes_; }

  /// W(t_n) - W(t_{n-1}), n = 1..steps.
  double increment(std::size_t n) const { return nodes_[n] - nodes_[n - 1]; }
  std::vector<double> increments() const;

  TimeGrid grid() const { return {steps(), horizon_}; }

 private:
  double horizon_;
  std::uint64_t seed_;
  std::uint64_t path_index_;
  std::vector<double> nodes_;
};

/// i.i.d. N(0, T/N_max) increments keyed by (seed, path_index, step).
NoisePath sample_path(std::uint64_t seed, std::uint64_t path_index, std::size_t finest_steps, double horizon);

/// The same path seen on a grid with `steps` intervals. Throws CouplingError
/// unless `steps` divides the path's step count.
NoisePath coarsened(const NoisePath& path, std::size_t steps);

/// Increments of `coarsened(path, steps)`.
std::vector<double> coarsen(const NoisePath& path, std::size_t steps);

}  // namespace sfv
