#include "dualorlicz/types.hpp"

#include <cmath>
#include <numbers>

namespace dualorlicz {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DivergentPhi: return "DivergentPhi";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NonIntegrableAtOrigin: return "NonIntegrableAtOrigin";
    case ErrorCode::InadmissibleDensity: return "InadmissibleDensity";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::OriginOnBoundary: return "OriginOnBoundary";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::DegenerateTotal: return "DegenerateTotal";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

UnitVector::UnitVector(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::DegenerateInput, "cannot normalize a zero or non-finite direction");
  }
  v_ = v / norm;
}

UnitVector::UnitVector(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  *this = UnitVector(v);
}

double sphere_area(int dim) {
  switch (dim) {
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: break;
  }
  throw Error(ErrorCode::DegenerateInput, "only n in {2,3} is supported");
}

}  // namespace dualorlicz
