#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dualorlicz {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Column-major list of unit directions, one per column (n x m).
using Directions = Eigen::MatrixXd;

enum class ErrorCode {
  UnboundedPolytope,
  DegenerateInput,
  OriginNotInterior,
  DomainError,
  DivergentPhi,
  QuadratureFailure,
  NonIntegrableAtOrigin,
  InadmissibleDensity,
  ZeroVector,
  NotConverged,
  OriginOnBoundary,
  HypothesisViolation,
  DegenerateTotal,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// A direction on S^{n-1}. Construction renormalizes; the zero vector is rejected.
class UnitVector {
 public:
  UnitVector() = default;
  explicit UnitVector(const Vector& v);
  UnitVector(std::initializer_list<double> coords);

  const Vector& coords() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_[i]; }
  operator const Vector&() const { return v_; }

  UnitVector operator-() const {
    UnitVector r;
    r.v_ = -v_;
    return r;
  }

 private:
  Vector v_;
};

/// Geometric tolerance used for deduplication and facet activity.
inline constexpr double kGeomTol = 1e-9;

/// (n-1)-dimensional Hausdorff measure of S^{n-1}; n in {2, 3}.
double sphere_area(int dim);

}  // namespace dualorlicz
