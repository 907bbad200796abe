#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "fitbvp/errors.hpp"

namespace fitbvp {

/// Square tridiagonal matrix of order n stored by diagonals.
/// Row i reads sub[i-1], diag[i], sup[i].
template <typename Scalar>
struct TridiagonalMatrix {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector sub;   // n - 1
  Vector diag;  // n
  Vector sup;   // n - 1

  TridiagonalMatrix() = default;
  explicit TridiagonalMatrix(Eigen::Index n)
      : sub(Vector::Zero(n > 0 ? n - 1 : 0)), diag(Vector::Zero(n)), sup(Vector::Zero(n > 0 ? n - 1 : 0)) {}

  Eigen::Index rows() const { return diag.size(); }

  Scalar lower(Eigen::Index i) const { return i > 0 ? sub[i - 1] : Scalar(0); }
  Scalar upper(Eigen::Index i) const { return i + 1 < rows() ? sup[i] : Scalar(0); }

  void check_shape() const {
    if (sub.size() != rows() - 1 || sup.size() != rows() - 1) {
      throw DimensionError("tridiagonal: off-diagonals must have length n - 1");
    }
  }

  Vector operator*(const Vector& x) const {
    check_shape();
    if (x.size() != rows()) throw DimensionError("tridiagonal: vector length mismatch");
    Vector out = diag.cwiseProduct(x);
    const Eigen::Index n = rows();
    if (n > 1) {
      out.head(n - 1) += sup.cwiseProduct(x.tail(n - 1));
      out.tail(n - 1) += sub.cwiseProduct(x.head(n - 1));
    }
    return out;
  }

  Scalar norm_inf() const {
    using std::abs;
    Scalar best(0);
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const Scalar row = abs(lower(i)) + abs(diag[i]) + abs(upper(i));
      if (row > best) best = row;
    }
    return best;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows(), rows());
    for (Eigen::Index i = 0; i < rows(); ++i) {
      dense(i, i) = diag[i];
      if (i > 0) dense(i, i - 1) = sub[i - 1];
      if (i + 1 < rows()) dense(i, i + 1) = sup[i];
    }
    return dense;
  }
};

/// Thomas elimination without pivoting; meant for diagonally dominant systems.
/// Throws SingularMatrixError when a pivot falls below 1e-30 in magnitude.
template <typename Scalar>
typename TridiagonalMatrix<Scalar>::Vector thomas_solve(
    const TridiagonalMatrix<Scalar>& T, const typename TridiagonalMatrix<Scalar>::Vector& rhs) {
  using std::abs;
  using Vector = typename TridiagonalMatrix<Scalar>::Vector;
  T.check_shape();
  const Eigen::Index n = T.rows();
  if (rhs.size() != n) throw DimensionError("thomas_solve: rhs length mismatch");
  if (n == 0) return Vector();

  const Scalar tiny(1e-30);
  Vector upper(n);  // modified super-diagonal
  Vector x(n);

  Scalar pivot = T.diag[0];
  if (abs(pivot) < tiny) throw SingularMatrixError("thomas_solve: zero pivot in row 0");
  upper[0] = n > 1 ? T.sup[0] / pivot : Scalar(0);
  x[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = T.diag[i] - T.sub[i - 1] * upper[i - 1];
    if (abs(pivot) < tiny) {
      throw SingularMatrixError("thomas_solve: zero pivot in row " + std::to_string(i));
    }
    upper[i] = i + 1 < n ? T.sup[i] / pivot : Scalar(0);
    x[i] = (rhs[i] - T.sub[i - 1] * x[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= upper[i] * x[i + 1];
  return x;
}

}  // namespace fitbvp
