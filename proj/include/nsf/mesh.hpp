#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace nsf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class FaceKind { interior, exterior };

/// One edge of the structured mesh.
///
/// Interior faces are oriented along +e_axis: the normal points from `in_cell`
/// to `out_cell`. At the periodic seam `in_cell` is the last column and
/// `out_cell` the first. Exterior faces lie on x2 = -1 or x2 = 1, carry the
/// outward normal of the domain and have `out_cell == -1`.
struct Face {
  int id = -1;
  FaceKind kind = FaceKind::interior;
  int axis = 1;  // 1: orthogonal to e1, 2: orthogonal to e2
  int in_cell = -1;
  int out_cell = -1;
  Vec2 normal = Vec2::Zero();
  Vec2 center = Vec2::Zero();
  double area = 0.0;  // |sigma|

  bool interior() const noexcept { return kind == FaceKind::interior; }
};

/// A face seen from one of its cells. `sign` is +1 when the cell is the
/// face's "in" side, so the outward normal of the cell is `sign * normal`.
struct CellFace {
  int face = -1;
  int sign = 1;
};

/// Neighbour entry returned by `neighbors`: the other cell or -1 for the wall.
struct Neighbor {
  int face = -1;
  int cell = -1;
  bool exterior = false;
  Vec2 outward_normal = Vec2::Zero();
};

/// Uniform square-cell mesh of the strip T x [-1, 1], periodic in x1.
///
/// Cells are indexed row-major, `i1 + nx * i2`. Faces are indexed axis-major:
/// the nx*ny axis-1 faces first (face `i1 + nx*i2` sits on the right of cell
/// (i1, i2)), then the nx*(ny+1) axis-2 faces row by row from x2 = -1 upwards.
class Mesh {
 public:
  static constexpr int dim = 2;

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double h() const noexcept { return h_; }
  double x1_extent() const noexcept { return extent_; }
  double x1_min() const noexcept { return -0.5 * extent_; }
  double cell_measure() const noexcept { return h_ * h_; }
  double domain_measure() const noexcept { return extent_ * 2.0; }

  int num_cells() const noexcept { return nx_ * ny_; }
  int num_faces() const noexcept { return static_cast<int>(faces_.size()); }
  int cell_index(int i1, int i2) const noexcept { return i1 + nx_ * i2; }
  int column(int cell) const noexcept { return cell % nx_; }
  int row(int cell) const noexcept { return cell / nx_; }

  Vec2 barycenter(int cell) const noexcept {
    return {x1_min() + (column(cell) + 0.5) * h_, -1.0 + (row(cell) + 0.5) * h_};
  }

  const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const std::vector<int>& interior_faces() const noexcept { return interior_; }
  const std::vector<int>& exterior_faces() const noexcept { return exterior_; }

  /// Position of an exterior face inside `exterior_faces()`, or -1.
  int exterior_index(int f) const { return exterior_slot_[static_cast<std::size_t>(f)]; }

  /// Left, right, bottom, top faces of a cell.
  const std::array<CellFace, 4>& cell_faces(int cell) const {
    return cell_faces_[static_cast<std::size_t>(cell)];
  }

  /// |D_sigma|: h*|sigma| for interior faces, h*|sigma|/2 on the walls.
  double dual_measure(int f) const;

 private:
  friend Mesh build_mesh(int nx, int ny, double x1_extent);

  int nx_ = 0;
  int ny_ = 0;
  double h_ = 0.0;
  double extent_ = 0.0;
  std::vector<Face> faces_;
  std::vector<int> interior_;
  std::vector<int> exterior_;
  std::vector<int> exterior_slot_;
  std::vector<std::array<CellFace, 4>> cell_faces_;
};

/// Builds the mesh; requires square cells (x1_extent == nx * 2/ny) and ny >= 2.
/// Throws ConfigError otherwise.
Mesh build_mesh(int nx, int ny, double x1_extent);

/// The four faces of `cell` with the cell (or wall) across each of them.
std::array<Neighbor, 4> neighbors(const Mesh& mesh, int cell);

}  // namespace nsf
