#include "sfv/discrete_ops.hpp"

#include <cmath>
#include <queue>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

namespace sfv {

double discrete_l2_norm(const CellField& w) { return std::sqrt(weighted_inner(w, w)); }

double discrete_h1_seminorm(const CellField& w) {
  double sum = 0.0;
  for (const auto& e : w.mesh()->interior_edges()) {
    const double jump = w[e.inner] - w[e.outer];
    sum += e.transmissibility() * jump * jump;
  }
  return std::sqrt(sum);
}

double mass(const CellField& w) {
  double sum = 0.0;
  const auto& cells = w.mesh()->cells();
  for (std::size_t k = 0; k < w.size(); ++k) sum += cells[k].measure * w[k];
  return sum;
}

double weighted_inner(const CellField& a, const CellField& b) {
  require_same_mesh(a, b);
  double sum = 0.0;
  const auto& cells = a.mesh()->cells();
  for (std::size_t k = 0; k < a.size(); ++k) sum += cells[k].measure * a[k] * b[k];
  return sum;
}

Eigen::SparseMatrix<double> assemble_tpfa_stiffness(const AdmissibleMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.cell_count());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(4 * mesh.interior_edges().size() + mesh.cell_count());
  for (const auto& e : mesh.interior_edges()) {
    const double t = e.transmissibility();
    const auto k = static_cast<Eigen::Index>(e.inner);
    const auto l = static_cast<Eigen::Index>(e.outer);
    entries.emplace_back(k, k, t);
    entries.emplace_back(l, l, t);
    entries.emplace_back(k, l, -t);
    entries.emplace_back(l, k, -t);
  }
  for (Eigen::Index k = 0; k < n; ++k) entries.emplace_back(k, k, 0.0);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

CellField apply_tpfa_laplacian(const CellField& w) {
  const auto& mesh = *w.mesh();
  CellField out(w.mesh());
  for (const auto& e : mesh.interior_edges()) {
    const double flux = e.transmissibility() * (w[e.outer] - w[e.inner]);
    out[e.inner] += flux;
    out[e.outer] -= flux;
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] /= mesh.cells()[k].measure;
  return out;
}

bool is_connected(const AdmissibleMesh& mesh) {
  const std::size_t n = mesh.cell_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t k = frontier.front();
    frontier.pop();
    for (std::size_t id : mesh.cells()[k].interior_edges) {
      const std::size_t l = mesh.interior_edges()[id].neighbor(k);
      if (!seen[l]) {
        seen[l] = 1;
        ++reached;
        frontier.push(l);
      }
    }
  }
  return reached == n;
}

struct NeumannSolver::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
  Eigen::Index grounded = 0;
};

NeumannSolver::NeumannSolver(MeshPtr mesh) : mesh_(std::move(mesh)) {
  if (mesh_->cell_count() < 2) throw ConvergenceError("Neumann problem needs at least two cells");
  if (!is_connected(*mesh_)) throw ConvergenceError("TPFA operator is singular beyond constants: mesh is disconnected");
  auto impl = std::make_shared<Impl>();
  const Eigen::SparseMatrix<double> a = assemble_tpfa_stiffness(*mesh_);
  impl->grounded = a.rows() - 1;
  // Drop the last row/column; the remaining block is SPD on a connected mesh.
  const Eigen::SparseMatrix<double> reduced = a.topLeftCorner(impl->grounded, impl->grounded);
  impl->factor.compute(reduced);
  if (impl->factor.info() != Eigen::Success) throw ConvergenceError("grounded TPFA factorization failed");
  impl_ = std::move(impl);
}

CellField NeumannSolver::solve(const std::vector<double>& rhs) const {
  const Eigen::Index n = impl_->grounded;
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) b[k] = rhs[static_cast<std::size_t>(k)];
  const Eigen::VectorXd x = impl_->factor.solve(b);
  CellField out(mesh_);
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = x[k];
  const double shift = mass(out) / mesh_->domain().measure();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= shift;
  return out;
}

namespace {

void remove_mean(std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> multiply(const Eigen::SparseMatrix<double>& a, const std::vector<double>& x) {
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd y = a * xv;
  return {y.data(), y.data() + y.size()};
}

}  // namespace

CgResult solve_zero_mean_cg(const Eigen::SparseMatrix<double>& stiffness, const std::vector<double>& rhs,
                            double tolerance, int max_iterations) {
  const std::size_t n = rhs.size();
  CgResult result;
  result.solution.assign(n, 0.0);
  const double bnorm = std::sqrt(dot(rhs, rhs));
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  std::vector<double> diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = stiffness.coeff(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    diag[k] = d > 0.0 ? 1.0 / d : 1.0;
  }

  std::vector<double> r = rhs;
  remove_mean(r);
  std::vector<double> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = diag[k] * r[k];
  remove_mean(z);
  std::vector<double> p = z;
  double rz = dot(r, z);
  auto& x = result.solution;

  for (int it = 1; it <= max_iterations; ++it) {
    const std::vector<double> ap = multiply(stiffness, p);
    const double alpha = rz / dot(p, ap);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    result.iterations = it;
    if (std::sqrt(dot(r, r)) <= tolerance * bnorm) break;
    for (std::size_t k = 0; k < n; ++k) z[k] = diag[k] * r[k];
    remove_mean(z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  remove_mean(x);

  // Recompute the true residual; the recursive one drifts.
  std::vector<double> b = rhs;
  remove_mean(b);
  const std::vector<double> ax = multiply(stiffness, x);
  double rr = 0.0;
  for (std::size_t k = 0; k < n; ++k) rr += (b[k] - ax[k]) * (b[k] - ax[k]);
  result.relative_residual = std::sqrt(rr) / bnorm;
  result.converged = result.relative_residual <= tolerance * 10.0;
  return result;
}

EdgeVelocity edge_velocity(const VelocityField& velocity, const MeshPtr& mesh, double t_begin, double t_end) {
  if (!(t_end > t_begin)) throw std::invalid_argument("edge_velocity needs a nonempty time interval");
  const GaussRule time_rule = gauss_rule(2);
  EdgeVelocity out{mesh, t_begin, t_end, std::vector<double>(mesh->interior_edges().size(), 0.0)};
  const double dt = t_end - t_begin;
  for (std::size_t i = 0; i < mesh->interior_edges().size(); ++i) {
    const auto& e = mesh->interior_edges()[i];
    double integral = 0.0;
    for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
      const double t = t_begin + time_rule.nodes[q] * dt;
      for (const auto& node : e.quadrature) {
        const Vector v = velocity(t, node.point);
        integral += time_rule.weights[q] * node.weight * (v[0] * e.normal[0] + v[1] * e.normal[1] + v[2] * e.normal[2]);
      }
    }
    out.normal_velocity[i] = integral / e.measure;
  }
  return out;
}

EdgeVelocity zero_edge_velocity(const MeshPtr& mesh, double t_begin, double t_end) {
  return {mesh, t_begin, t_end, std::vector<double>(mesh->interior_edges().size(), 0.0)};
}

std::vector<double> upwind_trace(const CellField& u, const EdgeVelocity& v, UpwindRule rule) {
  if (u.mesh() != v.mesh) throw std::invalid_argument("field and edge velocity live on different meshes");
  const auto& edges = u.mesh()->interior_edges();
  std::vector<double> trace(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const bool from_inner = v.normal_velocity[i] >= 0.0;
    const bool take_inner = rule == UpwindRule::upstream ? from_inner : !from_inner;
    trace[i] = take_inner ? u[edges[i].inner] : u[edges[i].outer];
  }
  return trace;
}

double dibp_gap(const CellField& w, const CellField& v, double asymmetry) {
  require_same_mesh(w, v);
  const auto& mesh = *w.mesh();
  // Left side: sum over cells K, over sigma in E_K^int, of tau (w_K - w_L) v_K.
  double cellwise = 0.0;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    double local = 0.0;
    for (std::size_t id : mesh.cells()[k].interior_edges) {
      const auto& e = mesh.interior_edges()[id];
      const std::size_t l = e.neighbor(k);
      const double t = e.transmissibility() * (e.inner == k ? 1.0 + asymmetry : 1.0);
      local += t * (w[k] - w[l]);
    }
    cellwise += local * v[k];
  }
  double edgewise = 0.0;
  for (const auto& e : mesh.interior_edges()) {
    edgewise += e.transmissibility() * (w[e.inner] - w[e.outer]) * (v[e.inner] - v[e.outer]);
  }
  return std::abs(cellwise - edgewise);
}

double poincare_constant_estimate(const MeshPtr& mesh, double tolerance, int max_iterations) {
  const NeumannSolver solver(mesh);
  const std::size_t n = mesh->cell_count();
  const double volume = mesh->domain().measure();

  // Deterministic, non-symmetric start so every eigen-direction is excited.
  CellField x(mesh);
  for (std::size_t k = 0; k < n; ++k) {
    const Point& c = mesh->cells()[k].center;
    x[k] = std::cos(1.3 * c[0] + 0.7) + 0.5 * std::cos(2.1 * c[1] + 0.3) + 0.25 * std::cos(1.7 * c[2] + 1.1) +
           1e-3 * std::sin(static_cast<double>(k) * 0.61803398875);
  }
  const double shift = mass(x) / volume;
  for (std::size_t k = 0; k < n; ++k) x[k] -= shift;

  double previous = 0.0;
  std::vector<double> rhs(n);
  for (int it = 0; it < max_iterations; ++it) {
    for (std::size_t k = 0; k < n; ++k) rhs[k] = mesh->cells()[k].measure * x[k];
    CellField y = solver.solve(rhs);
    const double l2 = discrete_l2_norm(y);
    const double h1 = discrete_h1_seminorm(y);
    if (!(h1 > 0.0)) throw ConvergenceError("power iteration collapsed onto constants");
    const double quotient = (l2 * l2) / (h1 * h1);
    y *= 1.0 / l2;
    x = std::move(y);
    if (it > 0 && std::abs(quotient - previous) <= tolerance * quotient) return quotient;
    previous = quotient;
  }
  throw ConvergenceError(fmt::format("Poincare power iteration did not settle in {} iterations", max_iterations));
}

}  // namespace sfv
