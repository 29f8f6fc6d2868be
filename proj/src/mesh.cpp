#include "sfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include <fmt/format.h>

namespace sfv {

namespace {

double dot(const Vector& a, const Vector& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

Vector sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

std::vector<double> uniform_spacing(double length, std::size_t n) {
  return std::vector<double>(n, length / static_cast<double>(n));
}

// Vertex lattice index for a tensor mesh with `counts` cells per axis.
struct Lattice {
  int dim;
  std::array<std::size_t, 3> counts;

  std::size_t vertex(const std::array<std::size_t, 3>& q) const {
    std::size_t idx = 0;
    for (int a = dim - 1; a >= 0; --a) idx = idx * (counts[a] + 1) + q[a];
    return idx;
  }
  std::size_t cell(const std::array<std::size_t, 3>& q) const {
    std::size_t idx = 0;
    for (int a = dim - 1; a >= 0; --a) idx = idx * counts[a] + q[a];
    return idx;
  }
};

}  // namespace

Box Box::unit(int dimension) {
  Box box;
  box.dimension = dimension;
  box.upper = {1.0, 1.0, dimension == 3 ? 1.0 : 0.0};
  return box;
}

double Box::measure() const {
  double m = 1.0;
  for (int a = 0; a < dimension; ++a) m *= side(a);
  return m;
}

GaussRule gauss_rule(int points) {
  // Symmetric Gauss-Legendre rules on [-1, 1], mapped to [0, 1] below.
  std::vector<double> x;
  std::vector<double> w;
  switch (points) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      break;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      x = {-b, -a, 0.0, a, b};
      w = {wb, wa, 128.0 / 225.0, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument(fmt::format("no Gauss rule with {} points", points));
  }
  GaussRule rule;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(0.5 * (x[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

double integrate_cell(const ScalarField& fn, const Cell& cell, int dimension, int points) {
  const GaussRule rule = gauss_rule(points);
  const std::size_t n = rule.nodes.size();
  const std::size_t nz = dimension == 3 ? n : 1;
  Vector width = sub(cell.upper, cell.lower);
  double sum = 0.0;
  Point x = cell.lower;
  for (std::size_t k = 0; k < nz; ++k) {
    const double wz = dimension == 3 ? rule.weights[k] : 1.0;
    if (dimension == 3) x[2] = cell.lower[2] + rule.nodes[k] * width[2];
    for (std::size_t j = 0; j < n; ++j) {
      x[1] = cell.lower[1] + rule.nodes[j] * width[1];
      for (std::size_t i = 0; i < n; ++i) {
        x[0] = cell.lower[0] + rule.nodes[i] * width[0];
        sum += wz * rule.weights[j] * rule.weights[i] * fn(x);
      }
    }
  }
  return sum * cell.measure;
}

AdmissibleMesh::AdmissibleMesh(Box domain, std::vector<Cell> cells, std::vector<InteriorEdge> interior,
                               std::vector<BoundaryEdge> boundary, std::vector<Point> vertices,
                               std::optional<TensorLayout> layout)
    : domain_(domain),
      cells_(std::move(cells)),
      interior_(std::move(interior)),
      boundary_(std::move(boundary)),
      vertices_(std::move(vertices)),
      layout_(std::move(layout)) {
  if (domain_.dimension != 2 && domain_.dimension != 3) {
    throw GeometryError(fmt::format("dimension must be 2 or 3, got {}", domain_.dimension));
  }
  for (const Cell& c : cells_) size_h_ = std::max(size_h_, c.diameter);
  regularity_ = mesh_regularity(*this);
}

std::size_t AdmissibleMesh::locate(const Point& x) const {
  if (!layout_) throw GeometryError("locate() requires a tensor-product mesh");
  std::array<std::size_t, 3> q{0, 0, 0};
  std::array<std::size_t, 3> counts{1, 1, 1};
  for (int a = 0; a < dimension(); ++a) {
    const auto& nodes = layout_->nodes[a];
    counts[a] = nodes.size() - 1;
    if (x[a] < nodes.front() || x[a] > nodes.back()) {
      throw GeometryError(fmt::format("point outside the domain along axis {}", a));
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x[a]);
    std::size_t i = static_cast<std::size_t>(std::distance(nodes.begin(), it));
    q[a] = std::min(i == 0 ? 0 : i - 1, counts[a] - 1);
  }
  return Lattice{dimension(), counts}.cell(q);
}

MeshPtr build_tensor_mesh(const Box& domain, const std::vector<std::size_t>& cell_counts,
                          const std::vector<std::vector<double>>& spacings) {
  const int dim = domain.dimension;
  if (dim != 2 && dim != 3) throw GeometryError("dimension must be 2 or 3");
  if (cell_counts.size() != static_cast<std::size_t>(dim)) {
    throw GeometryError(fmt::format("expected {} cell counts, got {}", dim, cell_counts.size()));
  }
  if (!spacings.empty() && spacings.size() != static_cast<std::size_t>(dim)) {
    throw GeometryError("spacing list must be given for every axis");
  }

  TensorLayout layout;
  std::array<std::vector<double>, 3> widths;
  std::array<std::size_t, 3> counts{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    if (cell_counts[a] < 1) throw GeometryError(fmt::format("axis {} needs at least one cell", a));
    if (domain.side(a) <= 0.0) throw GeometryError(fmt::format("axis {} has non-positive length", a));
    widths[a] = spacings.empty() || spacings[a].empty() ? uniform_spacing(domain.side(a), cell_counts[a])
                                                        : spacings[a];
    if (widths[a].size() != cell_counts[a]) {
      throw GeometryError(fmt::format("axis {}: {} spacings for {} cells", a, widths[a].size(), cell_counts[a]));
    }
    double total = 0.0;
    for (double w : widths[a]) {
      if (!(w > 0.0)) throw GeometryError(fmt::format("axis {} has a non-positive spacing", a));
      total += w;
    }
    if (std::abs(total - domain.side(a)) > 1e-12 * domain.side(a)) {
      throw GeometryError(fmt::format("axis {} spacings sum to {} instead of {}", a, total, domain.side(a)));
    }
    counts[a] = cell_counts[a];
    auto& nodes = layout.nodes[a];
    nodes.resize(counts[a] + 1);
    nodes[0] = domain.lower[a];
    for (std::size_t i = 0; i < counts[a]; ++i) nodes[i + 1] = nodes[i] + widths[a][i];
    nodes.back() = domain.upper[a];
  }
  const Lattice lattice{dim, counts};

  std::vector<Point> vertices;
  {
    std::array<std::size_t, 3> q{0, 0, 0};
    const std::size_t nzv = dim == 3 ? counts[2] + 1 : 1;
    for (q[2] = 0; q[2] < nzv; ++q[2])
      for (q[1] = 0; q[1] <= counts[1]; ++q[1])
        for (q[0] = 0; q[0] <= counts[0]; ++q[0]) {
          Point p{0.0, 0.0, 0.0};
          for (int a = 0; a < dim; ++a) p[a] = layout.nodes[a][q[a]];
          vertices.push_back(p);
        }
  }

  std::vector<Cell> cells(counts[0] * counts[1] * counts[2]);
  {
    std::array<std::size_t, 3> q{0, 0, 0};
    for (q[2] = 0; q[2] < counts[2]; ++q[2])
      for (q[1] = 0; q[1] < counts[1]; ++q[1])
        for (q[0] = 0; q[0] < counts[0]; ++q[0]) {
          Cell& c = cells[lattice.cell(q)];
          c.measure = 1.0;
          double diam2 = 0.0;
          for (int a = 0; a < dim; ++a) {
            c.lower[a] = layout.nodes[a][q[a]];
            c.upper[a] = layout.nodes[a][q[a] + 1];
            const double w = widths[a][q[a]];
            c.center[a] = 0.5 * (c.lower[a] + c.upper[a]);
            c.measure *= w;
            diam2 += w * w;
          }
          c.diameter = std::sqrt(diam2);
        }
  }

  const GaussRule rule = gauss_rule(kQuadraturePoints);
  std::vector<InteriorEdge> interior;
  std::vector<BoundaryEdge> boundary;

  // Faces perpendicular to `axis` at node index p, enumerated over the
  // remaining cell indices.
  for (int axis = 0; axis < dim; ++axis) {
    std::array<int, 2> tangential{-1, -1};
    {
      int t = 0;
      for (int b = 0; b < dim; ++b)
        if (b != axis) tangential[t++] = b;
    }
    std::array<std::size_t, 3> range = counts;
    range[axis] = 1;
    std::array<std::size_t, 3> q{0, 0, 0};
    for (std::size_t p = 0; p <= counts[axis]; ++p) {
      for (q[2] = 0; q[2] < range[2]; ++q[2])
        for (q[1] = 0; q[1] < range[1]; ++q[1])
          for (q[0] = 0; q[0] < range[0]; ++q[0]) {
            double measure = 1.0;
            Point centroid{0.0, 0.0, 0.0};
            centroid[axis] = layout.nodes[axis][p];
            for (int b : tangential) {
              if (b < 0) continue;
              measure *= widths[b][q[b]];
              centroid[b] = 0.5 * (layout.nodes[b][q[b]] + layout.nodes[b][q[b] + 1]);
            }
            std::vector<std::size_t> corner_ids;
            {
              const int nt = dim - 1;
              for (int mask = 0; mask < (1 << nt); ++mask) {
                std::array<std::size_t, 3> v = q;
                v[axis] = p;
                for (int t = 0; t < nt; ++t) v[tangential[t]] += (mask >> t) & 1;
                corner_ids.push_back(lattice.vertex(v));
              }
            }
            Vector normal{0.0, 0.0, 0.0};
            normal[axis] = 1.0;

            if (p == 0 || p == counts[axis]) {
              std::array<std::size_t, 3> qc = q;
              qc[axis] = p == 0 ? 0 : p - 1;
              BoundaryEdge e;
              e.cell = lattice.cell(qc);
              e.measure = measure;
              e.normal = normal;
              if (p == 0) e.normal[axis] = -1.0;
              e.centroid = centroid;
              e.vertices = std::move(corner_ids);
              cells[e.cell].boundary_edges.push_back(boundary.size());
              boundary.push_back(std::move(e));
              continue;
            }

            std::array<std::size_t, 3> qk = q;
            std::array<std::size_t, 3> ql = q;
            qk[axis] = p - 1;
            ql[axis] = p;
            InteriorEdge e;
            e.inner = lattice.cell(qk);
            e.outer = lattice.cell(ql);
            e.measure = measure;
            e.distance = norm(sub(cells[e.outer].center, cells[e.inner].center));
            e.normal = normal;
            e.centroid = centroid;
            e.vertices = std::move(corner_ids);

            const int b0 = tangential[0];
            const int b1 = tangential[1];
            const std::size_t n1 = b1 >= 0 ? rule.nodes.size() : 1;
            for (std::size_t j = 0; j < n1; ++j)
              for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                QuadratureNode node{centroid, rule.weights[i] * measure};
                node.point[b0] = layout.nodes[b0][q[b0]] + rule.nodes[i] * widths[b0][q[b0]];
                if (b1 >= 0) {
                  node.point[b1] = layout.nodes[b1][q[b1]] + rule.nodes[j] * widths[b1][q[b1]];
                  node.weight *= rule.weights[j];
                }
                e.quadrature.push_back(node);
              }

            cells[e.inner].interior_edges.push_back(interior.size());
            cells[e.outer].interior_edges.push_back(interior.size());
            interior.push_back(std::move(e));
          }
    }
  }

  return std::make_shared<const AdmissibleMesh>(domain, std::move(cells), std::move(interior),
                                                std::move(boundary), std::move(vertices), std::move(layout));
}

MeshPtr unit_mesh(int dimension, std::size_t n) {
  return build_tensor_mesh(Box::unit(dimension), std::vector<std::size_t>(dimension, n));
}

MeshPtr jittered_tensor_mesh(const Box& domain, const std::vector<std::size_t>& cell_counts, double amplitude,
                             std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) throw GeometryError("jitter amplitude must lie in [0, 1)");
  std::vector<std::vector<double>> spacings(cell_counts.size());
  for (std::size_t a = 0; a < cell_counts.size(); ++a) {
    auto& s = spacings[a];
    double total = 0.0;
    for (std::size_t i = 0; i < cell_counts[a]; ++i) {
      std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (1 + a * 65537 + i);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      z ^= z >> 31;
      const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
      s.push_back(1.0 + amplitude * (2.0 * u - 1.0));
      total += s.back();
    }
    const double side = domain.side(static_cast<int>(a));
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      s[i] *= side / total;
      partial += s[i];
    }
    s.back() = side - partial;
  }
  return build_tensor_mesh(domain, cell_counts, spacings);
}

double mesh_regularity(const AdmissibleMesh& mesh) {
  std::vector<std::size_t> incidence(mesh.vertices().size(), 0);
  for (const auto& e : mesh.interior_edges())
    for (std::size_t v : e.vertices) ++incidence[v];
  for (const auto& e : mesh.boundary_edges())
    for (std::size_t v : e.vertices) ++incidence[v];
  double reg = 0.0;
  for (std::size_t n : incidence) reg = std::max(reg, static_cast<double>(n));

  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& c = mesh.cells()[k];
    auto ratio = [&](const Point& centroid, const Vector& normal) {
      return c.diameter / std::abs(dot(sub(c.center, centroid), normal));
    };
    for (std::size_t id : c.interior_edges) {
      const auto& e = mesh.interior_edges()[id];
      reg = std::max(reg, ratio(e.centroid, e.normal));
    }
    for (std::size_t id : c.boundary_edges) {
      const auto& e = mesh.boundary_edges()[id];
      reg = std::max(reg, ratio(e.centroid, e.normal));
    }
  }
  return reg;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::nonpositive_measure: return "nonpositive_measure";
    case Violation::Kind::measure_mismatch: return "measure_mismatch";
    case Violation::Kind::degenerate_edge: return "degenerate_edge";
    case Violation::Kind::zero_distance: return "zero_distance";
    case Violation::Kind::distance_mismatch: return "distance_mismatch";
    case Violation::Kind::orthogonality: return "orthogonality";
    case Violation::Kind::center_outside: return "center_outside";
    case Violation::Kind::closure: return "closure";
  }
  return "unknown";
}

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_admissibility(const AdmissibleMesh& mesh) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::size_t index, std::string detail) {
    report.violations.push_back({kind, index, std::move(detail)});
  };
  const int dim = mesh.dimension();

  double total = 0.0;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& c = mesh.cells()[k];
    total += c.measure;
    if (!(c.measure > 0.0)) add(Violation::Kind::nonpositive_measure, k, fmt::format("m_K = {}", c.measure));
    for (int a = 0; a < dim; ++a) {
      if (c.center[a] < c.lower[a] || c.center[a] > c.upper[a]) {
        add(Violation::Kind::center_outside, k, fmt::format("axis {}", a));
        break;
      }
    }
  }
  const double domain = mesh.domain().measure();
  if (std::abs(total - domain) > 1e-12 * domain) {
    add(Violation::Kind::measure_mismatch, 0, fmt::format("sum m_K = {:.17g}, |domain| = {:.17g}", total, domain));
  }

  for (std::size_t i = 0; i < mesh.interior_edges().size(); ++i) {
    const auto& e = mesh.interior_edges()[i];
    if (e.inner == e.outer || !(e.measure > 0.0)) {
      add(Violation::Kind::degenerate_edge, i, "edge must separate two distinct cells with m_sigma > 0");
      continue;
    }
    const Vector gap = sub(mesh.cells()[e.outer].center, mesh.cells()[e.inner].center);
    const double length = norm(gap);
    if (!(length > 0.0) || !(e.distance > 0.0)) {
      add(Violation::Kind::zero_distance, i, "coincident centers");
      continue;
    }
    if (std::abs(length - e.distance) > 1e-12 * length) {
      add(Violation::Kind::distance_mismatch, i, fmt::format("d_K|L = {} but |x_K - x_L| = {}", e.distance, length));
    }
    const double along = dot(gap, e.normal);
    Vector tangential{gap[0] - along * e.normal[0], gap[1] - along * e.normal[1], gap[2] - along * e.normal[2]};
    if (along <= 0.0 || norm(tangential) > 1e-10 * length) {
      add(Violation::Kind::orthogonality, i,
          fmt::format("x_L - x_K deviates from the edge normal by {:.3e}", norm(tangential) / length));
    }
  }

  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& c = mesh.cells()[k];
    Vector sum{0.0, 0.0, 0.0};
    double scale = 0.0;
    for (std::size_t id : c.interior_edges) {
      const auto& e = mesh.interior_edges()[id];
      const double sign = e.inner == k ? 1.0 : -1.0;
      for (int a = 0; a < 3; ++a) sum[a] += sign * e.measure * e.normal[a];
      scale += e.measure;
    }
    for (std::size_t id : c.boundary_edges) {
      const auto& e = mesh.boundary_edges()[id];
      for (int a = 0; a < 3; ++a) sum[a] += e.measure * e.normal[a];
      scale += e.measure;
    }
    if (norm(sum) > 1e-12 * std::max(scale, 1.0)) {
      add(Violation::Kind::closure, k, fmt::format("|sum m_sigma n_K,sigma| = {:.3e}", norm(sum)));
    }
  }
  return report;
}

RefinedMesh refine(const AdmissibleMesh& mesh) {
  if (!mesh.layout()) throw GeometryError("refine() requires a tensor-product mesh");
  const int dim = mesh.dimension();
  std::vector<std::size_t> counts;
  std::vector<std::vector<double>> spacings;
  for (int a = 0; a < dim; ++a) {
    const auto& nodes = mesh.layout()->nodes[a];
    std::vector<double> halves;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double w = 0.5 * (nodes[i + 1] - nodes[i]);
      halves.push_back(w);
      halves.push_back(w);
    }
    counts.push_back(halves.size());
    spacings.push_back(std::move(halves));
  }
  RefinedMesh out;
  out.mesh = build_tensor_mesh(mesh.domain(), counts, spacings);
  out.parent = nesting_map(mesh, *out.mesh);
  return out;
}

std::vector<std::size_t> nesting_map(const AdmissibleMesh& coarse, const AdmissibleMesh& fine) {
  if (coarse.dimension() != fine.dimension()) throw GeometryError("meshes differ in dimension");
  std::vector<std::size_t> parent(fine.cell_count());
  const int dim = fine.dimension();
  for (std::size_t k = 0; k < fine.cell_count(); ++k) {
    const Cell& child = fine.cells()[k];
    const std::size_t p = coarse.locate(child.center);
    const Cell& c = coarse.cells()[p];
    for (int a = 0; a < dim; ++a) {
      const double tol = 1e-12 * (c.upper[a] - c.lower[a]);
      if (child.lower[a] < c.lower[a] - tol || child.upper[a] > c.upper[a] + tol) {
        throw GeometryError(fmt::format("fine cell {} straddles coarse cell {}", k, p));
      }
    }
    parent[k] = p;
  }
  return parent;
}

CellField cell_average(const ScalarField& fn, const MeshPtr& mesh) {
  CellField out(mesh);
  for (std::size_t k = 0; k < mesh->cell_count(); ++k) {
    const Cell& c = mesh->cells()[k];
    out[k] = integrate_cell(fn, c, mesh->dimension()) / c.measure;
  }
  return out;
}

CellField inject(const CellField& coarse, const MeshPtr& fine, const std::vector<std::size_t>& parent) {
  if (parent.size() != fine->cell_count()) throw std::invalid_argument("parent map does not match the fine mesh");
  CellField out(fine);
  for (std::size_t k = 0; k < parent.size(); ++k) out[k] = coarse[parent[k]];
  return out;
}

}  // namespace sfv
