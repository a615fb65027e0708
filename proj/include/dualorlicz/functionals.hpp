#pragma once

#include "dualorlicz/geometry.hpp"
#include "dualorlicz/integrands.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace dualorlicz {

struct QuadratureOptions {
  double rel_tol = 1e-11;  // per-edge relative tolerance of the outer integral
  int max_depth = 12;
};

/// Integrand F(rho, u) over the radial projection of a facet, with an optional closed form
/// P(h, R) = h * int_h^R F(r) r^{-2} dr for integrands that do not depend on u (n = 3 only).
struct SphereIntegrand {
  std::function<double(double, const Vector&)> value;
  std::function<std::optional<double>(double, double)> polar_primitive;
};

struct FacetIntegral {
  double value = 0.0;
  double error = 0.0;
};

/// int over the radial projection of facet i of F(rho_P(u), u) du, for h_i > 0.
/// Uses polar coordinates about the foot point h_i u_i: rho = h_i sec(phi), du = sin(phi) dphi dtheta.
FacetIntegral facet_sphere_integral(const PolytopeMesh& mesh, int i, const SphereIntegrand& F,
                                    const QuadratureOptions& opts = {});

/// Solid angle (n=3) or arc length (n=2) of the radial projection of each active facet.
Vector facet_solid_angles(const PolytopeMesh& mesh, const QuadratureOptions& opts = {});

/// (1/n) h_i |F_i| per facet.
Vector cone_volumes(const PolytopeMesh& mesh);

/// V_G(P) = int_S G(rho_P(u), u) du, adding the G(0,.) remainder when o lies on the boundary.
double dual_volume(const PolytopeMesh& mesh, const GSpec& G, const QuadratureOptions& opts = {});

/// V_G of the centered ball of radius r: g(r) int_S w.
double dual_volume_ball(const GSpec& G, int dim, double radius);

struct CurvatureVector {
  Vector c;        // C_{G,psi}(P, {u_i})
  double total = 0.0;
  Vector error;    // quadrature error estimate (or Monte Carlo standard error)
  Eigen::VectorXi counts;  // Monte Carlo hits per facet (empty for quadrature)
  std::int64_t samples = 0;
};

/// c_i = (1 / (n psi(h_i))) int over the projection of F_i of rho G_t(rho, u) du; zero for inactive
/// facets and facets through the origin.
CurvatureVector curvature_vector(const PolytopeMesh& mesh, const GSpec& G, const PsiSpec& psi,
                                 const QuadratureOptions& opts = {});
CurvatureVector curvature_vector(const PolytopeMesh& mesh, const GSpec& G, const QuadratureOptions& opts = {});

/// Uniform sphere sampling estimate of the curvature vector with per-facet standard errors.
CurvatureVector mc_oracle_curvature(const PolytopeMesh& mesh, const GSpec& G, const PsiSpec& psi,
                                    std::int64_t samples, std::uint64_t seed);

struct GradientCheck {
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

/// analytic = n c_i(psi = 1) / h_i; numeric = central difference of V_G with step 1e-5 z_i.
GradientCheck check_gradient(const Directions& normals, const Vector& z, const GSpec& G, int i,
                             const QuadratureOptions& opts = {});

}  // namespace dualorlicz
