#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfv/field.hpp"

namespace sfv {

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Axis-aligned box domain in d = 2 or 3.
struct Box {
  int dimension = 2;
  Point lower{0.0, 0.0, 0.0};
  Point upper{1.0, 1.0, 0.0};

  static Box unit(int dimension);
  double measure() const;
  double side(int axis) const { return upper[axis] - lower[axis]; }
};

struct QuadratureNode {
  Point point;
  double weight;
};

struct Cell {
  Point center;
  double measure = 0.0;
  double diameter = 0.0;
  // Bounding box of the control volume; exact for the box cells built here.
  Point lower{};
  Point upper{};
  std::vector<std::size_t> interior_edges;
  std::vector<std::size_t> boundary_edges;
};

/// Interface sigma = K|L. Normal points from `inner` (K) to `outer` (L).
struct InteriorEdge {
  std::size_t inner = 0;
  std::size_t outer = 0;
  double measure = 0.0;
  double distance = 0.0;
  Vector normal{};
  Point centroid{};
  std::vector<QuadratureNode> quadrature;  // weights sum to `measure`
  std::vector<std::size_t> vertices;

  double transmissibility() const { return measure / distance; }
  std::size_t neighbor(std::size_t cell) const { return cell == inner ? outer : inner; }
};

struct BoundaryEdge {
  std::size_t cell = 0;
  double measure = 0.0;
  Vector normal{};  // outward
  Point centroid{};
  std::vector<std::size_t> vertices;
};

/// Per-axis node coordinates of a tensor-product mesh.
struct TensorLayout {
  std::array<std::vector<double>, 3> nodes;

  std::size_t count(int axis) const { return nodes[axis].empty() ? 1 : nodes[axis].size() - 1; }
};

/// Admissible finite-volume mesh. Immutable after construction and shared
/// read-only between concurrent computations.
class AdmissibleMesh {
 public:
  AdmissibleMesh(Box domain, std::vector<Cell> cells, std::vector<InteriorEdge> interior,
                 std::vector<BoundaryEdge> boundary, std::vector<Point> vertices,
                 std::optional<TensorLayout> layout = std::nullopt);

  int dimension() const { return domain_.dimension; }
  const Box& domain() const { return domain_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<InteriorEdge>& interior_edges() const { return interior_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::optional<TensorLayout>& layout() const { return layout_; }

  std::size_t cell_count() const { return cells_.size(); }
  double size_h() const { return size_h_; }
  double regularity() const { return regularity_; }

  /// Index of the cell containing `x` (tensor meshes only). Points on an
  /// interface belong to the cell with the larger index along that axis.
  std::size_t locate(const Point& x) const;

 private:
  Box domain_;
  std::vector<Cell> cells_;
  std::vector<InteriorEdge> interior_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<Point> vertices_;
  std::optional<TensorLayout> layout_;
  double size_h_ = 0.0;
  double regularity_ = 0.0;
};

/// Tensor-product mesh of `domain`. `spacings[a]`, when given, lists the cell
/// widths along axis a and must sum to the side length.
MeshPtr build_tensor_mesh(const Box& domain, const std::vector<std::size_t>& cell_counts,
                          const std::vector<std::vector<double>>& spacings = {});

/// Uniform n^d mesh of the unit square/cube.
MeshPtr unit_mesh(int dimension, std::size_t n);

/// Tensor mesh whose widths along each axis are 1 + amplitude * U(-1, 1),
/// rescaled to the side length. Deterministic in `seed`.
MeshPtr jittered_tensor_mesh(const Box& domain, const std::vector<std::size_t>& cell_counts, double amplitude,
                             std::uint64_t seed);

/// max(N, max_{K, sigma in E_K} diam(K) / d(x_K, sigma)), where N is the
/// largest number of edges (faces in 3D) incident to a single vertex.
double mesh_regularity(const AdmissibleMesh& mesh);

struct Violation {
  enum class Kind {
    nonpositive_measure,
    measure_mismatch,
    degenerate_edge,
    zero_distance,
    distance_mismatch,
    orthogonality,
    center_outside,
    closure
  };
  Kind kind;
  std::size_t index;
  std::string detail;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
};

ValidationReport validate_admissibility(const AdmissibleMesh& mesh);

/// Gauss-Legendre nodes/weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_rule(int points);

/// Points per axis used for cell averages and edge quadrature.
inline constexpr int kQuadraturePoints = 3;

using ScalarField = std::function<double(const Point&)>;

/// Tensor Gauss quadrature of `fn` over the box cell with `points` per axis.
double integrate_cell(const ScalarField& fn, const Cell& cell, int dimension,
                      int points = kQuadraturePoints);

struct RefinedMesh {
  MeshPtr mesh;
  std::vector<std::size_t> parent;  // fine cell -> coarse cell
};

/// Halves every spacing of a tensor mesh.
RefinedMesh refine(const AdmissibleMesh& mesh);

/// Maps each cell of `fine` to the cell of `coarse` containing it. Throws
/// GeometryError when `fine` is not nested in `coarse`.
std::vector<std::size_t> nesting_map(const AdmissibleMesh& coarse, const AdmissibleMesh& fine);

/// Per-cell mean of `fn` by tensor Gauss quadrature (kQuadraturePoints per axis).
CellField cell_average(const ScalarField& fn, const MeshPtr& mesh);

/// Lifts a piecewise-constant field to a nested finer mesh.
CellField inject(const CellField& coarse, const MeshPtr& fine, const std::vector<std::size_t>& parent);

}  // namespace sfv
