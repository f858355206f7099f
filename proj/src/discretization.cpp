#include "nsf/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "nsf/errors.hpp"

namespace nsf {

void SchemeParams::validate() const {
  if (!(alpha > -1.0 && alpha < 1.0)) throw ConfigError("scheme: alpha must lie in (-1, 1)");
  if (!(c_dt > 0.0)) throw ConfigError("scheme: c_dt must be positive");
  if (!(newton_tol > 0.0)) throw ConfigError("scheme: newton_tol must be positive");
  if (newton_max_iter < 1) throw ConfigError("scheme: newton_max_iter must be at least 1");
  if (!(linear_tol > 0.0)) throw ConfigError("scheme: linear_tol must be positive");
  if (max_halvings < 0) throw ConfigError("scheme: max_halvings must be nonnegative");
}

Discretization::Discretization(std::shared_ptr<const Mesh> mesh, FluidParams fluid,
                               BoundaryData boundary, SchemeParams params)
    : mesh_(std::move(mesh)),
      fluid_(fluid),
      boundary_(std::move(boundary)),
      params_(params),
      flux_diffusion_(0.0) {
  if (!mesh_) throw ConfigError("discretization: mesh missing");
  fluid_.validate();
  params_.validate();
  if (boundary_.theta.size() != mesh_->exterior_faces().size()) {
    throw ConfigError("discretization: boundary data size does not match exterior faces");
  }
  const Mesh& m = *mesh_;
  flux_diffusion_ = std::pow(m.h(), params_.alpha);
  const int n = m.num_cells();

  // Cell-gradient stencil with {{u}} = 0 on the walls.
  grad_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  const double scale = 1.0 / m.cell_measure();
  for (int k = 0; k < n; ++k) {
    std::vector<GradientEntry> local{{k, Vec2::Zero()}};
    auto add = [&local](int cell, const Vec2& w) {
      for (auto& e : local) {
        if (e.cell == cell) {
          e.weight += w;
          return;
        }
      }
      local.push_back({cell, w});
    };
    for (const CellFace& cf : m.cell_faces(k)) {
      const Face& sigma = m.face(cf.face);
      if (!sigma.interior()) continue;
      const Vec2 w = 0.5 * sigma.area * scale * (cf.sign * sigma.normal);
      add(k, w);
      add(cf.sign > 0 ? sigma.out_cell : sigma.in_cell, w);
    }
    std::sort(local.begin(), local.end(),
              [](const GradientEntry& a, const GradientEntry& b) { return a.cell < b.cell; });
    grad_entries_.insert(grad_entries_.end(), local.begin(), local.end());
    grad_offsets_[static_cast<std::size_t>(k) + 1] = static_cast<int>(grad_entries_.size());
  }

  // Residual rows of K touch every cell within two face hops.
  coupling_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 0; k < n; ++k) {
    std::vector<int> ball{k};
    for (const Neighbor& nb : neighbors(m, k)) {
      if (nb.exterior) continue;
      ball.push_back(nb.cell);
      for (const Neighbor& nb2 : neighbors(m, nb.cell)) {
        if (!nb2.exterior) ball.push_back(nb2.cell);
      }
    }
    std::sort(ball.begin(), ball.end());
    ball.erase(std::unique(ball.begin(), ball.end()), ball.end());
    coupling_cells_.insert(coupling_cells_.end(), ball.begin(), ball.end());
    coupling_offsets_[static_cast<std::size_t>(k) + 1] = static_cast<int>(coupling_cells_.size());
  }
}

std::span<const Discretization::GradientEntry> Discretization::gradient_stencil(int cell) const {
  const auto b = static_cast<std::size_t>(grad_offsets_[static_cast<std::size_t>(cell)]);
  const auto e = static_cast<std::size_t>(grad_offsets_[static_cast<std::size_t>(cell) + 1]);
  return {grad_entries_.data() + b, e - b};
}

std::span<const int> Discretization::coupled_cells(int cell) const {
  const auto b = static_cast<std::size_t>(coupling_offsets_[static_cast<std::size_t>(cell)]);
  const auto e = static_cast<std::size_t>(coupling_offsets_[static_cast<std::size_t>(cell) + 1]);
  return {coupling_cells_.data() + b, e - b};
}

JacobianPattern::JacobianPattern(const Discretization& disc) {
  const int n = disc.mesh().num_cells();
  const int dofs = disc.num_unknowns();
  std::vector<Eigen::Triplet<double, int>> triplets;
  for (int k = 0; k < n; ++k) {
    for (int c : disc.coupled_cells(k)) {
      for (int rv = 0; rv < kVarsPerCell; ++rv) {
        for (int cv = 0; cv < kVarsPerCell; ++cv) {
          triplets.emplace_back(kVarsPerCell * k + rv, kVarsPerCell * c + cv, 0.0);
        }
      }
    }
  }
  matrix_.resize(dofs, dofs);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();

  const int* outer = matrix_.outerIndexPtr();
  row_slot_begin_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 0; k < n; ++k) {
    for (int c : disc.coupled_cells(k)) {
      const auto col_list = disc.coupled_cells(c);
      const auto it = std::lower_bound(col_list.begin(), col_list.end(), k);
      if (it == col_list.end() || *it != k) {
        throw std::logic_error("jacobian pattern: coupling is not symmetric");
      }
      const int idx = static_cast<int>(it - col_list.begin());
      slot_offsets_.push_back(outer[kVarsPerCell * c] + kVarsPerCell * idx);
      col_stride_.push_back(kVarsPerCell * static_cast<int>(col_list.size()));
    }
    row_slot_begin_[static_cast<std::size_t>(k) + 1] = static_cast<int>(slot_offsets_.size());
  }
}

int JacobianPattern::position(int row_cell, int slot, int row_var, int col_var) const {
  const auto i = static_cast<std::size_t>(row_slot_begin_[static_cast<std::size_t>(row_cell)] + slot);
  return slot_offsets_[i] + col_var * col_stride_[i] + row_var;
}

void JacobianPattern::set_zero() {
  std::fill(matrix_.valuePtr(), matrix_.valuePtr() + matrix_.nonZeros(), 0.0);
}

}  // namespace nsf
