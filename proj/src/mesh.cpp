#include "nsf/mesh.hpp"

#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

double Mesh::dual_measure(int f) const {
  const Face& sigma = face(f);
  return sigma.interior() ? sigma.area * h_ : 0.5 * sigma.area * h_;
}

Mesh build_mesh(int nx, int ny, double x1_extent) {
  if (nx < 1) throw ConfigError("mesh: nx must be positive");
  if (ny < 2) throw ConfigError("mesh: ny must be at least 2");
  if (!(x1_extent > 0.0)) throw ConfigError("mesh: x1 extent must be positive");
  const double h = 2.0 / ny;
  if (std::abs(nx * h - x1_extent) > 1e-12 * x1_extent) {
    std::ostringstream msg;
    msg << "mesh: cells are not square (nx*2/ny = " << nx * h << ", extent = " << x1_extent << ")";
    throw ConfigError(msg.str());
  }

  Mesh mesh;
  mesh.nx_ = nx;
  mesh.ny_ = ny;
  mesh.h_ = h;
  mesh.extent_ = x1_extent;

  const int n_axis1 = nx * ny;
  const int n_axis2 = nx * (ny + 1);
  mesh.faces_.resize(static_cast<std::size_t>(n_axis1 + n_axis2));
  mesh.exterior_slot_.assign(mesh.faces_.size(), -1);
  mesh.cell_faces_.resize(static_cast<std::size_t>(nx * ny));

  const double x0 = mesh.x1_min();

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int f = i + nx * j;
      Face& sigma = mesh.faces_[static_cast<std::size_t>(f)];
      sigma.id = f;
      sigma.kind = FaceKind::interior;
      sigma.axis = 1;
      sigma.in_cell = mesh.cell_index(i, j);
      sigma.out_cell = mesh.cell_index((i + 1) % nx, j);
      sigma.normal = Vec2(1.0, 0.0);
      const double xf = (i + 1 == nx) ? x0 : x0 + (i + 1) * h;
      sigma.center = Vec2(xf, -1.0 + (j + 0.5) * h);
      sigma.area = h;
    }
  }

  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int f = n_axis1 + i + nx * j;
      Face& sigma = mesh.faces_[static_cast<std::size_t>(f)];
      sigma.id = f;
      sigma.axis = 2;
      sigma.area = h;
      sigma.center = Vec2(x0 + (i + 0.5) * h, -1.0 + j * h);
      if (j == 0) {
        sigma.kind = FaceKind::exterior;
        sigma.in_cell = mesh.cell_index(i, 0);
        sigma.out_cell = -1;
        sigma.normal = Vec2(0.0, -1.0);
      } else if (j == ny) {
        sigma.kind = FaceKind::exterior;
        sigma.in_cell = mesh.cell_index(i, ny - 1);
        sigma.out_cell = -1;
        sigma.normal = Vec2(0.0, 1.0);
      } else {
        sigma.kind = FaceKind::interior;
        sigma.in_cell = mesh.cell_index(i, j - 1);
        sigma.out_cell = mesh.cell_index(i, j);
        sigma.normal = Vec2(0.0, 1.0);
      }
    }
  }

  for (const Face& sigma : mesh.faces_) {
    if (sigma.interior()) {
      mesh.interior_.push_back(sigma.id);
    } else {
      mesh.exterior_slot_[static_cast<std::size_t>(sigma.id)] =
          static_cast<int>(mesh.exterior_.size());
      mesh.exterior_.push_back(sigma.id);
    }
  }

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = mesh.cell_index(i, j);
      const int left = ((i + nx - 1) % nx) + nx * j;
      const int right = i + nx * j;
      const int bottom = n_axis1 + i + nx * j;
      const int top = n_axis1 + i + nx * (j + 1);
      // The bottom wall face has the cell as its "in" side with an outward
      // normal (0,-1), so its sign is +1 like the top face.
      const int bottom_sign = (j == 0) ? 1 : -1;
      mesh.cell_faces_[static_cast<std::size_t>(k)] = {
          CellFace{left, -1}, CellFace{right, 1}, CellFace{bottom, bottom_sign}, CellFace{top, 1}};
    }
  }
  return mesh;
}

std::array<Neighbor, 4> neighbors(const Mesh& mesh, int cell) {
  std::array<Neighbor, 4> out;
  const auto& cf = mesh.cell_faces(cell);
  for (std::size_t q = 0; q < 4; ++q) {
    const Face& sigma = mesh.face(cf[q].face);
    Neighbor& nb = out[q];
    nb.face = sigma.id;
    nb.exterior = !sigma.interior();
    nb.outward_normal = cf[q].sign * sigma.normal;
    if (nb.exterior) {
      nb.cell = -1;
    } else {
      nb.cell = cf[q].sign > 0 ? sigma.out_cell : sigma.in_cell;
    }
  }
  return out;
}

}  // namespace nsf
