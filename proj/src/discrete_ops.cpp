#include "nsf/discrete_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace nsf {

Upwind upwind(const ScalarField& r, const VectorField& u, const Face& sigma) {
  if (!sigma.interior()) throw std::logic_error("upwind: exterior face");
  const double un = avg(u, sigma).dot(sigma.normal);
  if (un >= 0.0) return {r[sigma.in_cell], true};
  return {r[sigma.out_cell], false};
}

double flux_diffusive_upwind(const ScalarField& r, const VectorField& u, const Face& sigma,
                             double h, double alpha) {
  if (!(alpha > -1.0)) throw ConfigError("flux: alpha must exceed -1");
  const Upwind up = upwind(r, u, sigma);
  const double un = avg(u, sigma).dot(sigma.normal);
  return up.value * un - std::pow(h, alpha) * jump(r, sigma);
}

std::vector<Vec2> grad_h(const ScalarField& r) {
  const Mesh& mesh = *r.mesh;
  const double scale = 1.0 / mesh.cell_measure();
  std::vector<Vec2> out(static_cast<std::size_t>(mesh.num_cells()), Vec2::Zero());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    Vec2 g = Vec2::Zero();
    for (const CellFace& cf : mesh.cell_faces(k)) {
      const Face& sigma = mesh.face(cf.face);
      g += sigma.area * scale * avg(r, sigma) * (cf.sign * sigma.normal);
    }
    out[static_cast<std::size_t>(k)] = g;
  }
  return out;
}

std::vector<Mat2> grad_h(const VectorField& u) {
  const Mesh& mesh = *u.mesh;
  const double scale = 1.0 / mesh.cell_measure();
  std::vector<Mat2> out(static_cast<std::size_t>(mesh.num_cells()), Mat2::Zero());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    Mat2 g = Mat2::Zero();
    for (const CellFace& cf : mesh.cell_faces(k)) {
      const Face& sigma = mesh.face(cf.face);
      const Vec2 n = cf.sign * sigma.normal;
      g += sigma.area * scale * avg(u, sigma) * n.transpose();
    }
    out[static_cast<std::size_t>(k)] = g;
  }
  return out;
}

std::vector<double> div_h(const VectorField& v) {
  const Mesh& mesh = *v.mesh;
  const double scale = 1.0 / mesh.cell_measure();
  std::vector<double> out(static_cast<std::size_t>(mesh.num_cells()), 0.0);
  for (int k = 0; k < mesh.num_cells(); ++k) {
    double d = 0.0;
    for (const CellFace& cf : mesh.cell_faces(k)) {
      const Face& sigma = mesh.face(cf.face);
      d += sigma.area * scale * avg(v, sigma).dot(cf.sign * sigma.normal);
    }
    out[static_cast<std::size_t>(k)] = d;
  }
  return out;
}

FaceField<Vec2> grad_dual(const ScalarField& r) {
  const Mesh& mesh = *r.mesh;
  FaceField<Vec2> out{&mesh, std::vector<Vec2>(static_cast<std::size_t>(mesh.num_faces()))};
  for (const Face& sigma : mesh.faces()) {
    out.values[static_cast<std::size_t>(sigma.id)] = (jump(r, sigma) / mesh.h()) * sigma.normal;
  }
  return out;
}

StrainStress strain_and_stress(const VectorField& u, double mu, double lambda) {
  const std::vector<Mat2> g = grad_h(u);
  StrainStress out;
  out.strain.resize(g.size());
  out.stress.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat2 d = 0.5 * (g[k] + g[k].transpose());
    out.strain[k] = d;
    out.stress[k] = 2.0 * mu * d + lambda * g[k].trace() * Mat2::Identity();
  }
  return out;
}

GaussRule gauss_rule(int points) {
  switch (points) {
    case 1:
      return {{0.0}, {2.0}};
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      return {{-a, a}, {1.0, 1.0}};
    }
    case 3: {
      const double a = std::sqrt(3.0 / 5.0);
      return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
      const double s = 2.0 * std::sqrt(6.0 / 5.0);
      const double a = std::sqrt((3.0 - s) / 7.0);
      const double b = std::sqrt((3.0 + s) / 7.0);
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      return {{-b, -a, a, b}, {wb, wa, wa, wb}};
    }
    default:
      throw ConfigError("gauss_rule: supported orders are 1..4");
  }
}

namespace {

template <class T, class F>
std::vector<T> project_cell_impl(const F& f, const Mesh& mesh, int points) {
  const GaussRule rule = gauss_rule(points);
  const double half = 0.5 * mesh.h();
  std::vector<T> out(static_cast<std::size_t>(mesh.num_cells()));
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const Vec2 xc = mesh.barycenter(k);
    T acc = zero_value<T>();
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
      for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
        const Vec2 x(xc.x() + half * rule.nodes[a], xc.y() + half * rule.nodes[b]);
        acc += 0.25 * rule.weights[a] * rule.weights[b] * f(x);
      }
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

double face_average(const ScalarFunction& f, const Face& sigma, const GaussRule& rule) {
  const double half = 0.5 * sigma.area;
  // Faces orthogonal to e1 extend along e2 and vice versa.
  const Vec2 tangent = sigma.axis == 1 ? Vec2(0.0, 1.0) : Vec2(1.0, 0.0);
  double acc = 0.0;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    acc += 0.5 * rule.weights[a] * f(sigma.center + half * rule.nodes[a] * tangent);
  }
  return acc;
}

}  // namespace

std::vector<double> project_cell(const ScalarFunction& f, const Mesh& mesh, int points) {
  return project_cell_impl<double>(f, mesh, points);
}

std::vector<Vec2> project_cell(const VectorFunction& f, const Mesh& mesh, int points) {
  return project_cell_impl<Vec2>(f, mesh, points);
}

std::vector<double> project_face(const ScalarFunction& f, const Mesh& mesh, int points) {
  const GaussRule rule = gauss_rule(points);
  std::vector<double> out(static_cast<std::size_t>(mesh.num_faces()));
  for (const Face& sigma : mesh.faces()) {
    out[static_cast<std::size_t>(sigma.id)] = face_average(f, sigma, rule);
  }
  return out;
}

std::vector<double> project_exterior(const ScalarFunction& f, const Mesh& mesh, int points) {
  const GaussRule rule = gauss_rule(points);
  std::vector<double> out;
  out.reserve(mesh.exterior_faces().size());
  for (int fid : mesh.exterior_faces()) out.push_back(face_average(f, mesh.face(fid), rule));
  return out;
}

}  // namespace nsf
