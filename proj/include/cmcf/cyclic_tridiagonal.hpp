// Periodic (cyclic) tridiagonal systems
//
//   lower(i) x(i-1) + diag(i) x(i) + upper(i) x(i+1) = rhs(i),  indices mod M,
//
// so lower(0) and upper(M-1) are the corner entries A(0, M-1) and A(M-1, 0).
// Solved by a Thomas sweep on the tridiagonal part plus a Sherman-Morrison
// rank-one correction for the corners.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace cmcf {

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
class CyclicTridiagonal {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Factorizes once; solve() may then be called for any number of right-hand
  /// sides. Requires strict row diagonal dominance.
  CyclicTridiagonal(Vec lower, Vec diag, Vec upper)
      : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
    const Eigen::Index m = diag_.size();
    if (m < 3 || lower_.size() != m || upper_.size() != m) {
      throw std::invalid_argument("cyclic tridiagonal system needs matching bands of size >= 3");
    }
    using std::abs;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(abs(diag_(i)) > abs(lower_(i)) + abs(upper_(i)))) {
        throw SolverFailure("row " + std::to_string(i) + " is not strictly diagonally dominant");
      }
    }

    // A = T + u v^T with u = (gamma, 0, ..., 0, corner_low)^T and
    // v = (1, 0, ..., 0, corner_up / gamma)^T.
    gamma_ = -diag_(0);
    modified_ = diag_;
    modified_(0) -= gamma_;
    modified_(m - 1) -= upper_(m - 1) * lower_(0) / gamma_;

    // Thomas forward elimination coefficients for T.
    c_prime_.resize(m);
    denom_.resize(m);
    denom_(0) = modified_(0);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i > 0) denom_(i) = modified_(i) - lower_(i) * c_prime_(i - 1);
      if (!std::isfinite(double(denom_(i))) || denom_(i) == Scalar(0)) {
        throw SolverFailure("zero pivot in cyclic tridiagonal factorization");
      }
      c_prime_(i) = i + 1 < m ? upper_(i) / denom_(i) : Scalar(0);
    }

    Vec u = Vec::Zero(m);
    u(0) = gamma_;
    u(m - 1) = upper_(m - 1);
    z_ = thomas(u);
    const Scalar vz = z_(0) + lower_(0) / gamma_ * z_(m - 1);
    correction_denominator_ = 1 + vz;
    if (!std::isfinite(double(correction_denominator_)) || correction_denominator_ == Scalar(0)) {
      throw SolverFailure("singular rank-one correction in cyclic tridiagonal solve");
    }
  }

  Eigen::Index size() const { return diag_.size(); }

  Vec solve(const Vec& rhs) const {
    const Eigen::Index m = size();
    if (rhs.size() != m) throw std::invalid_argument("right-hand side size mismatch");
    Vec y = thomas(rhs);
    const Scalar vy = y(0) + lower_(0) / gamma_ * y(m - 1);
    y -= (vy / correction_denominator_) * z_;
    if (!y.allFinite()) throw SolverFailure("non-finite cyclic tridiagonal solution");
    return y;
  }

  /// Dense copy of the matrix, for diagnostics and tests.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    const Eigen::Index m = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, i) = diag_(i);
      a(i, i == 0 ? m - 1 : i - 1) += lower_(i);
      a(i, i + 1 == m ? 0 : i + 1) += upper_(i);
    }
    return a;
  }

 private:
  Vec thomas(const Vec& r) const {
    const Eigen::Index m = size();
    Vec x(m);
    x(0) = r(0) / denom_(0);
    for (Eigen::Index i = 1; i < m; ++i) x(i) = (r(i) - lower_(i) * x(i - 1)) / denom_(i);
    for (Eigen::Index i = m - 2; i >= 0; --i) x(i) -= c_prime_(i) * x(i + 1);
    return x;
  }

  Vec lower_, diag_, upper_;
  Vec modified_, c_prime_, denom_, z_;
  Scalar gamma_{};
  Scalar correction_denominator_{};
};

/// One-shot solve. sub(i) = A(i, i-1) for i >= 1, super(i) = A(i, i+1) for
/// i <= M-2, corners = {A(0, M-1), A(M-1, 0)}; sub(0) and super(M-1) are ignored.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_cyclic_tridiagonal(
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sub, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> super, std::pair<Scalar, Scalar> corners,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs) {
  const Eigen::Index m = diag.size();
  if (sub.size() != m || super.size() != m) {
    throw std::invalid_argument("band sizes must match the diagonal");
  }
  sub(0) = corners.first;
  super(m - 1) = corners.second;
  return CyclicTridiagonal<Scalar>(std::move(sub), diag, std::move(super)).solve(rhs);
}

}  // namespace cmcf
