#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sfv {

/// Points and vectors always carry three components; the third is zero in 2D.
using Point = std::array<double, 3>;
using Vector = std::array<double, 3>;

class AdmissibleMesh;
using MeshPtr = std::shared_ptr<const AdmissibleMesh>;

/// Piecewise-constant function over the control volumes of a mesh.
class CellField {
 public:
  CellField() = default;
  explicit CellField(MeshPtr mesh, double value = 0.0);
  CellField(MeshPtr mesh, std::vector<double> values);

  const MeshPtr& mesh() const { return mesh_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const;

  CellField& operator+=(const CellField& other);
  CellField& operator-=(const CellField& other);
  CellField& operator*=(double factor);

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

CellField operator+(CellField a, const CellField& b);
CellField operator-(CellField a, const CellField& b);
CellField operator*(double factor, CellField a);

/// Throws std::invalid_argument unless both fields live on the same mesh.
void require_same_mesh(const CellField& a, const CellField& b);

}  // namespace sfv
