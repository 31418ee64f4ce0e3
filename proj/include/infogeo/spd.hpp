// Copyright 2026 The infogeo-sensor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense small-matrix kernel: symmetric and SPD matrices, Cholesky,
// symmetric eigendecomposition and the matrix exponential.  Storage is
// Eigen with a compile-time maximum of 16x16 so nothing here allocates.

#ifndef INFOGEO_SPD_HPP
#define INFOGEO_SPD_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infogeo/errors.hpp"

namespace infogeo {

inline constexpr int kMaxDim = 16;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor,
                             kMaxDim, 1>;

/// Smallest admissible Cholesky pivot, relative to the largest diagonal entry.
inline constexpr double kPivotTolerance = 1e-12;

namespace detail {

inline void check_dim(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw DomainError("matrix is not square");
  if (rows < 1 || rows > kMaxDim)
    throw DomainError("matrix dimension " + std::to_string(rows) +
                      " outside 1.." + std::to_string(kMaxDim));
}

}  // namespace detail

/// Dense symmetric matrix.  The constructor symmetrizes its input, so
/// entry (i,j) and (j,i) are always bit-identical.
class SymMatrix {
 public:
  explicit SymMatrix(int dim)
      : m_((detail::check_dim(dim, dim), Matrix::Zero(dim, dim))) {}

  explicit SymMatrix(const Matrix& m) : m_(m) {
    detail::check_dim(m.rows(), m.cols());
    symmetrize();
  }

  template <typename Derived>
  explicit SymMatrix(const Eigen::MatrixBase<Derived>& m)
      : m_((detail::check_dim(m.rows(), m.cols()), m)) {
    symmetrize();
  }

  SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    detail::check_dim(n, n);
    m_.resize(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n)
        throw DomainError("ragged matrix initializer");
      Eigen::Index j = 0;
      for (double v : row) m_(i, j++) = v;
      ++i;
    }
    symmetrize();
  }

  static SymMatrix identity(int dim) {
    return SymMatrix(Matrix::Identity(dim, dim));
  }

  static SymMatrix diagonal(std::initializer_list<double> values) {
    const auto n = static_cast<int>(values.size());
    SymMatrix out(n);
    int i = 0;
    for (double v : values) {
      out.m_(i, i) = v;
      ++i;
    }
    return out;
  }

  static SymMatrix diagonal(const Vector& values) {
    return SymMatrix(Matrix(values.asDiagonal()));
  }

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  double trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }
  double max_abs_diagonal() const { return m_.diagonal().cwiseAbs().maxCoeff(); }

  SymMatrix& operator+=(const SymMatrix& o) {
    m_ += o.m_;
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    m_ -= o.m_;
    return *this;
  }
  SymMatrix& operator*=(double s) {
    m_ *= s;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

 private:
  void symmetrize() {
    const Eigen::Index n = m_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = 0.5 * (m_(i, j) + m_(j, i));
        m_(i, j) = v;
        m_(j, i) = v;
      }
  }

  Matrix m_;
};

/// Lower-triangular Cholesky factor L with L Lᵀ = A.  Throws
/// PositiveDefinitenessError when a pivot drops below
/// kPivotTolerance times the largest diagonal entry.
inline Matrix cholesky(const SymMatrix& a) {
  const int n = a.dim();
  const Matrix& m = a.matrix();
  const double scale = m.diagonal().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw PositiveDefinitenessError("matrix has no positive diagonal entry");
  const double floor = kPivotTolerance * scale;
  Matrix l = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot >= floor) || !std::isfinite(pivot))
      throw PositiveDefinitenessError("Cholesky pivot " + std::to_string(j) +
                                      " is " + std::to_string(pivot) +
                                      ", below tolerance");
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }
  return l;
}

/// Symmetric matrix certified positive-definite by its Cholesky factor.
class SpdMatrix {
 public:
  explicit SpdMatrix(SymMatrix a) : a_(std::move(a)), l_(cholesky(a_)) {}

  int dim() const noexcept { return a_.dim(); }
  const SymMatrix& sym() const noexcept { return a_; }
  const Matrix& matrix() const noexcept { return a_.matrix(); }
  const Matrix& cholesky_factor() const noexcept { return l_; }

  /// A⁻¹ B by forward and back substitution.
  Matrix solve(const Matrix& b) const {
    if (b.rows() != dim()) throw DomainError("solve: dimension mismatch");
    Matrix x = l_.triangularView<Eigen::Lower>().solve(b);
    l_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
  }

  Vector solve(const Vector& b) const {
    if (b.size() != dim()) throw DomainError("solve: dimension mismatch");
    Vector x = l_.triangularView<Eigen::Lower>().solve(b);
    l_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
  }

  SymMatrix inverse() const {
    return SymMatrix(solve(Matrix(Matrix::Identity(dim(), dim()))));
  }

  /// log det A as twice the sum of log Cholesky diagonals.
  double log_det() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += std::log(l_(i, i));
    return 2.0 * s;
  }

 private:
  SymMatrix a_;
  Matrix l_;
};

inline Matrix solve(const SpdMatrix& a, const Matrix& b) { return a.solve(b); }

/// Tr(A B) without forming the product.
inline double trace_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // column k pairs with values[k]
};

/// Eigenvalues in descending order with orthonormal eigenvectors.  Equal
/// eigenvalues keep the solver's ascending-index order, and every
/// eigenvector is signed so its largest-magnitude entry is positive.
inline SymEigen sym_eigen(const SymMatrix& a) {
  const int n = a.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  const Vector& w = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return w(x) > w(y); });
  SymEigen out{Vector(n), Matrix(n, n)};
  for (int k = 0; k < n; ++k) {
    out.values(k) = w(order[k]);
    Vector col = v.col(order[k]);
    Eigen::Index big = 0;
    col.cwiseAbs().maxCoeff(&big);
    if (col(big) < 0.0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

/// Matrix exponential by scaling and squaring with the degree-13 Padé
/// approximant (Higham 2005).  Throws OverflowError on non-finite output.
inline Matrix mat_exp(const Matrix& a) {
  detail::check_dim(a.rows(), a.cols());
  if (!a.allFinite()) throw OverflowError("mat_exp: non-finite input");
  static constexpr double b[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Matrix::Identity(n, n);
  int squarings = 0;
  if (norm1 > theta13)
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Matrix x = a * std::ldexp(1.0, -squarings);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix u = x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) +
                        b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 +
                   b[4] * x4 + b[2] * x2 + b[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.allFinite()) throw OverflowError("mat_exp: result overflowed");
  return r;
}

}  // namespace infogeo

#endif  // INFOGEO_SPD_HPP
