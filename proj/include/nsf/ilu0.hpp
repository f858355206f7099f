#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Sparse>

namespace nsf {

/// Zero-fill incomplete LU factorisation on the sparsity pattern of the input.
/// Usable as the preconditioner of Eigen's iterative solvers.
class Ilu0 : public Eigen::SparseSolverBase<Ilu0> {
  using Base = Eigen::SparseSolverBase<Ilu0>;
  using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

 public:
  using Scalar = double;
  using StorageIndex = int;
  using Base::_solve_impl;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  Ilu0() = default;

  template <class MatrixType>
  explicit Ilu0(const MatrixType& a) {
    compute(a);
  }

  Eigen::Index rows() const noexcept { return lu_.rows(); }
  Eigen::Index cols() const noexcept { return lu_.cols(); }
  Eigen::ComputationInfo info() const noexcept { return info_; }

  template <class MatrixType>
  Ilu0& analyzePattern(const MatrixType&) {
    return *this;
  }

  template <class MatrixType>
  Ilu0& factorize(const MatrixType& a) {
    lu_ = a;
    lu_.makeCompressed();
    factorize_in_place();
    m_isInitialized = true;
    return *this;
  }

  template <class MatrixType>
  Ilu0& compute(const MatrixType& a) {
    return factorize(a);
  }

  template <class Rhs, class Dest>
  void _solve_impl(const Rhs& b, Dest& x) const {
    const int n = static_cast<int>(lu_.rows());
    const int* outer = lu_.outerIndexPtr();
    const int* inner = lu_.innerIndexPtr();
    const double* val = lu_.valuePtr();
    x = b;
    for (int i = 0; i < n; ++i) {
      double s = x[i];
      for (int p = outer[i]; p < diag_[static_cast<std::size_t>(i)]; ++p) s -= val[p] * x[inner[p]];
      x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      const int d = diag_[static_cast<std::size_t>(i)];
      double s = x[i];
      for (int p = d + 1; p < outer[i + 1]; ++p) s -= val[p] * x[inner[p]];
      x[i] = s / val[d];
    }
  }

 private:
  void factorize_in_place() {
    const int n = static_cast<int>(lu_.rows());
    const int* outer = lu_.outerIndexPtr();
    const int* inner = lu_.innerIndexPtr();
    double* val = lu_.valuePtr();
    diag_.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      for (int p = outer[i]; p < outer[i + 1]; ++p) {
        if (inner[p] == i) diag_[static_cast<std::size_t>(i)] = p;
      }
      if (diag_[static_cast<std::size_t>(i)] < 0) {
        info_ = Eigen::NumericalIssue;
        return;
      }
    }
    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      for (int p = outer[i]; p < outer[i + 1]; ++p) pos[static_cast<std::size_t>(inner[p])] = p;
      for (int p = outer[i]; p < diag_[static_cast<std::size_t>(i)]; ++p) {
        const int k = inner[p];
        const double pivot = val[diag_[static_cast<std::size_t>(k)]];
        val[p] /= pivot;
        const double lik = val[p];
        for (int q = diag_[static_cast<std::size_t>(k)] + 1; q < outer[k + 1]; ++q) {
          const int at = pos[static_cast<std::size_t>(inner[q])];
          if (at >= 0) val[at] -= lik * val[q];
        }
      }
      for (int p = outer[i]; p < outer[i + 1]; ++p) pos[static_cast<std::size_t>(inner[p])] = -1;
      const double d = val[diag_[static_cast<std::size_t>(i)]];
      if (!(std::abs(d) > 0.0) || !std::isfinite(d)) {
        info_ = Eigen::NumericalIssue;
        return;
      }
    }
    info_ = Eigen::Success;
  }

  RowMatrix lu_;
  std::vector<int> diag_;
  Eigen::ComputationInfo info_ = Eigen::InvalidInput;
};

}  // namespace nsf
