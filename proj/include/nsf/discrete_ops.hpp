#pragma once

#include <functional>
#include <vector>

#include "nsf/errors.hpp"
#include "nsf/mesh.hpp"

namespace nsf {

/// How a cell field is continued across exterior faces.
///
///  - dirichlet:     {{r}} = g_sigma, ghost = 2 g_sigma - r_in
///  - antisymmetric: {{r}} = 0,       ghost = -r_in
///  - copy:          {{r}} = r_in,    ghost = r_in
enum class BoundaryKind { dirichlet, antisymmetric, copy };

template <class T>
struct BoundaryPolicy {
  BoundaryKind kind = BoundaryKind::copy;
  std::vector<T> values;  // one per exterior face (mesh.exterior_faces() order), dirichlet only

  static BoundaryPolicy copy() { return {BoundaryKind::copy, {}}; }
  static BoundaryPolicy antisymmetric() { return {BoundaryKind::antisymmetric, {}}; }
  static BoundaryPolicy dirichlet(std::vector<T> g) { return {BoundaryKind::dirichlet, std::move(g)}; }
};

/// Piecewise-constant field with its boundary continuation.
template <class T>
struct CellField {
  const Mesh* mesh = nullptr;
  std::vector<T> values;
  BoundaryPolicy<T> bc;

  const T& operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

using ScalarField = CellField<double>;
using VectorField = CellField<Vec2>;

/// One value per face.
template <class T>
struct FaceField {
  const Mesh* mesh = nullptr;
  std::vector<T> values;

  const T& operator[](int f) const { return values[static_cast<std::size_t>(f)]; }
};

template <class T>
inline T zero_value() {
  if constexpr (std::is_same_v<T, double>) {
    return 0.0;
  } else {
    return T::Zero();
  }
}

/// Value on the "out" side of a face: the neighbour cell or the ghost value.
template <class T>
T outer_value(const CellField<T>& r, const Face& sigma) {
  if (sigma.interior()) return r[sigma.out_cell];
  const T& in = r[sigma.in_cell];
  switch (r.bc.kind) {
    case BoundaryKind::dirichlet: {
      const int slot = r.mesh->exterior_index(sigma.id);
      return T(2.0 * r.bc.values[static_cast<std::size_t>(slot)] - in);
    }
    case BoundaryKind::antisymmetric:
      return T(-in);
    case BoundaryKind::copy:
      break;
  }
  return in;
}

template <class T>
T avg(const CellField<T>& r, const Face& sigma) {
  return T(0.5 * (r[sigma.in_cell] + outer_value(r, sigma)));
}

template <class T>
T jump(const CellField<T>& r, const Face& sigma) {
  return T(outer_value(r, sigma) - r[sigma.in_cell]);
}

/// Result of the upwind selection on an interior face.
struct Upwind {
  double value = 0.0;
  bool from_in = true;
};

/// r_up with respect to {{u}}.n; ties go to the "in" side.
Upwind upwind(const ScalarField& r, const VectorField& u, const Face& sigma);

/// F^alpha(r, u) = r_up {{u}}.n - h^alpha [[r]] on an interior face.
/// Throws ConfigError for alpha <= -1 and std::logic_error on exterior faces.
double flux_diffusive_upwind(const ScalarField& r, const VectorField& u, const Face& sigma,
                             double h, double alpha);

/// (grad_h r)_K = sum_{sigma in dK} |sigma|/|K| {{r}} n.
std::vector<Vec2> grad_h(const ScalarField& r);

/// Cell gradient of a vector field: G(i, j) = d_j u_i.
std::vector<Mat2> grad_h(const VectorField& u);

std::vector<double> div_h(const VectorField& v);

/// Dual gradient ([[r]]/h) n on every face. On the walls the ghost rule gives
/// ((g - r_in)/(h/2)) n for Dirichlet data.
FaceField<Vec2> grad_dual(const ScalarField& r);

/// Symmetric gradient and stress S = 2 mu D + lambda div I, per cell.
struct StrainStress {
  std::vector<Mat2> strain;
  std::vector<Mat2> stress;
};
StrainStress strain_and_stress(const VectorField& u, double mu, double lambda);

/// Tensor Gauss-Legendre rule on [-1, 1]; supported orders 1..4.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_rule(int points);

using ScalarFunction = std::function<double(const Vec2&)>;
using VectorFunction = std::function<Vec2(const Vec2&)>;

/// Cell averages (Pi_T) by tensor Gauss quadrature.
std::vector<double> project_cell(const ScalarFunction& f, const Mesh& mesh, int points = 3);
std::vector<Vec2> project_cell(const VectorFunction& f, const Mesh& mesh, int points = 3);

/// Face averages (Pi_W) by Gauss quadrature along each face.
std::vector<double> project_face(const ScalarFunction& f, const Mesh& mesh, int points = 3);

/// Pi_W restricted to the exterior faces, in mesh.exterior_faces() order.
std::vector<double> project_exterior(const ScalarFunction& f, const Mesh& mesh, int points = 3);

}  // namespace nsf
