#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace dualorlicz::detail {

enum class LpStatus { Optimal, Unbounded, IterationLimit };

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::Optimal;
  Scalar objective{};
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
};

/// Dense tableau simplex for  max c'x  s.t.  A x <= b, x >= 0  with b >= 0,
/// so the slack basis is feasible from the start. Bland's rule avoids cycling.
template <typename Scalar>
LpResult<Scalar> simplex_max(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                             int max_pivots = 10000) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index rows = A.rows();
  const Eigen::Index cols = A.cols();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon() * 1e3;

  // Tableau: [A | I | b] with objective row [-c | 0 | 0].
  Mat T = Mat::Zero(rows + 1, cols + rows + 1);
  T.topLeftCorner(rows, cols) = A;
  T.block(0, cols, rows, rows).setIdentity();
  T.topRightCorner(rows, 1) = b;
  T.block(rows, 0, 1, cols) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) basis[static_cast<size_t>(r)] = cols + r;

  LpResult<Scalar> res;
  for (int it = 0; it < max_pivots; ++it) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols + rows; ++j) {
      if (T(rows, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (T(r, enter) > eps) {
        const Scalar ratio = T(r, cols + rows) / T(r, enter);
        if (ratio < best - eps ||
            (std::abs(ratio - best) <= eps && leave >= 0 &&
             basis[static_cast<size_t>(r)] < basis[static_cast<size_t>(leave)])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) {
      res.status = LpStatus::Unbounded;
      return res;
    }
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index r = 0; r <= rows; ++r) {
      if (r != leave && T(r, enter) != Scalar(0)) T.row(r) -= T(r, enter) * T.row(leave);
    }
    basis[static_cast<size_t>(leave)] = enter;
    if (it + 1 == max_pivots) res.status = LpStatus::IterationLimit;
  }
  res.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index var = basis[static_cast<size_t>(r)];
    if (var < cols) res.x[var] = T(r, cols + rows);
  }
  res.objective = T(rows, cols + rows);
  return res;
}

}  // namespace dualorlicz::detail
