#pragma once

#include <Eigen/Core>

#include "halfline/types.hpp"

namespace halfline {

/// LU factorization of a tridiagonal matrix without pivoting (Thomas
/// algorithm), reusable across right-hand sides. Suitable for the diagonally
/// dominant Crank-Nicolson systems.
template <class Scalar>
class TridiagonalLU {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TridiagonalLU() = default;
  /// sub[i] = A(i+1, i), diag[i] = A(i, i), sup[i] = A(i, i+1).
  TridiagonalLU(const Vector& sub, const Vector& diag, const Vector& sup) { factor(sub, diag, sup); }

  void factor(const Vector& sub, const Vector& diag, const Vector& sup) {
    const Eigen::Index n = diag.size();
    if (sub.size() != n - 1 || sup.size() != n - 1)
      throw DomainError("TridiagonalLU: inconsistent band sizes");
    sub_ = sub;
    sup_ = sup;
    pivot_.resize(n);
    pivot_[0] = diag[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      if (pivot_[i - 1] == Scalar(0)) throw NonConvergenceError("TridiagonalLU: zero pivot");
      pivot_[i] = diag[i] - sub_[i - 1] / pivot_[i - 1] * sup_[i - 1];
    }
    if (pivot_[n - 1] == Scalar(0)) throw NonConvergenceError("TridiagonalLU: zero pivot");
  }

  Eigen::Index size() const { return pivot_.size(); }

  /// Overwrites rhs with the solution.
  template <class Derived>
  void solve_in_place(Eigen::MatrixBase<Derived>& rhs) const {
    const Eigen::Index n = pivot_.size();
    for (Eigen::Index i = 1; i < n; ++i) rhs[i] -= sub_[i - 1] / pivot_[i - 1] * rhs[i - 1];
    rhs[n - 1] /= pivot_[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - sup_[i] * rhs[i + 1]) / pivot_[i];
  }

  Vector solve(Vector rhs) const {
    solve_in_place(rhs);
    return rhs;
  }

 private:
  Vector sub_, sup_, pivot_;
};

}  // namespace halfline
