#include "sfv/field.hpp"

#include <cmath>
#include <stdexcept>

#include "sfv/mesh.hpp"

namespace sfv {

CellField::CellField(MeshPtr mesh, double value) : mesh_(std::move(mesh)) {
  if (!mesh_) throw std::invalid_argument("CellField needs a mesh");
  values_.assign(mesh_->cell_count(), value);
}

CellField::CellField(MeshPtr mesh, std::vector<double> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw std::invalid_argument("CellField needs a mesh");
  if (values_.size() != mesh_->cell_count()) {
    throw std::invalid_argument("CellField length differs from the cell count");
  }
}

bool CellField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

CellField& CellField::operator+=(const CellField& other) {
  require_same_mesh(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

CellField& CellField::operator-=(const CellField& other) {
  require_same_mesh(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

CellField& CellField::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

CellField operator+(CellField a, const CellField& b) { return a += b; }
CellField operator-(CellField a, const CellField& b) { return a -= b; }
CellField operator*(double factor, CellField a) { return a *= factor; }

void require_same_mesh(const CellField& a, const CellField& b) {
  if (a.mesh() != b.mesh()) throw std::invalid_argument("fields live on different meshes");
}

}  // namespace sfv
