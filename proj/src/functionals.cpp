#include "dualorlicz/functionals.hpp"

#include "dualorlicz/detail/counter_rng.hpp"
#include "dualorlicz/detail/quadrature.hpp"

#include <cmath>
#include <string>

namespace dualorlicz {

namespace {

detail::QuadResult<double> checked(detail::QuadResult<double> r, int facet) {
  if (!r.ok) {
    throw Error(ErrorCode::QuadratureFailure, "error estimate not met at maximum depth on facet " + std::to_string(facet));
  }
  return r;
}

SphereIntegrand integrand_for_g(const GSpec& G, int dim) {
  SphereIntegrand F;
  F.value = [&G](double rho, const Vector& u) { return g_eval(G, rho, u); };
  if (dim == 3 && G.weight().is_constant() && G.family() != GFamily::Custom) {
    const double c = G.weight().constant_value();
    F.polar_primitive = [&G, c](double h, double R) -> std::optional<double> {
      const auto p = G.polar_primitive(h, R);
      if (!p) return std::nullopt;
      return c * *p;
    };
  }
  return F;
}

SphereIntegrand integrand_for_rho_gt(const GSpec& G, int dim) {
  SphereIntegrand F;
  F.value = [&G](double rho, const Vector& u) { return rho * g_t_eval(G, rho, u); };
  if (dim == 3 && G.weight().is_constant() && G.family() != GFamily::Custom) {
    const double c = G.weight().constant_value();
    F.polar_primitive = [&G, c](double h, double R) -> std::optional<double> {
      const auto p = G.polar_primitive_dt(h, R);
      if (!p) return std::nullopt;
      return c * *p;
    };
  }
  return F;
}

SphereIntegrand integrand_for_weight(const DirectionWeight& w, int dim) {
  SphereIntegrand F;
  F.value = [&w](double, const Vector& u) { return w(u); };
  if (dim == 3 && w.is_constant()) {
    const double c = w.constant_value();
    F.polar_primitive = [c](double h, double R) -> std::optional<double> { return c * (1.0 - h / R); };
  }
  return F;
}

bool origin_on_boundary(const PolytopeMesh& mesh) {
  for (const auto& f : mesh.facets) {
    if (f.active && f.h <= mesh.tol) return true;
  }
  return mesh.z.minCoeff() <= mesh.tol;
}

}  // namespace

FacetIntegral facet_sphere_integral(const PolytopeMesh& mesh, int i, const SphereIntegrand& F,
                                    const QuadratureOptions& opts) {
  const Facet& f = mesh.facets.at(static_cast<size_t>(i));
  FacetIntegral out;
  if (!f.active) return out;
  const double h = f.h;
  if (!(h > 0.0)) throw Error(ErrorCode::DomainError, "facet integral needs h_i > 0");
  const FacetRegion region = facet_region(mesh, i);
  const Vector u = mesh.normals.col(i);
  const Matrix& B = region.basis;

  // Angles are parameterized by v with tan(angle) = sinh(v): a point at distance d from the foot of
  // a line sits at d cosh(v) and d(angle) = dv / cosh(v), which keeps near-tangent features O(1) wide.
  if (mesh.dim == 2) {
    const Vector t = B.col(0);
    const double va = std::asinh(region.points(0, 0) / h);
    const double vb = std::asinh(region.points(0, region.points.cols() - 1) / h);
    auto fn = [&](double v) {
      const double ch = std::cosh(v);
      const Vector dir = (u + std::sinh(v) * t) / ch;
      return F.value(h * ch, dir) / ch;
    };
    const auto r = checked(detail::integrate<double>(fn, va, vb, opts.rel_tol, 0.0, opts.max_depth), i);
    out.value = r.value;
    out.error = r.error;
    return out;
  }

  const Vector e1 = B.col(0), e2 = B.col(1);
  const Eigen::Index k = region.points.cols();
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Vector2d a = region.points.col(j);
    const Eigen::Vector2d b = region.points.col((j + 1) % k);
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const Eigen::Vector2d et = (b - a) / len;
    const double cr = a.x() * b.y() - a.y() * b.x();
    const double d = std::abs(cr) / len;  // distance from the foot point to the edge line
    if (d <= 1e-15 * std::max(a.norm(), b.norm())) continue;  // foot point on the edge line
    const Eigen::Vector2d p0 = a - a.dot(et) * et;
    auto outer = [&](double v) {
      const double ch = std::cosh(v);
      const double r = d * ch;
      if (F.polar_primitive) {
        if (const auto p = F.polar_primitive(h, std::hypot(h, r))) return *p / ch;
      }
      const Eigen::Vector2d q = (p0 + d * std::sinh(v) * et) / r;
      const Vector w = q.x() * e1 + q.y() * e2;
      // Radial leg rho in [h, sqrt(h^2 + r^2)] with rho = h e^s: sin(phi) dphi = h rho^-2 drho = e^-s ds.
      auto inner = [&](double s) {
        const double rho = h * std::exp(s);
        const double along = std::sqrt(std::max(0.0, rho * rho - h * h));
        return F.value(rho, (h * u + along * w) / rho) * std::exp(-s);
      };
      const double smax = 0.5 * std::log1p((r / h) * (r / h));
      return checked(detail::integrate<double>(inner, 0.0, smax, opts.rel_tol, 0.0, opts.max_depth), i).value / ch;
    };
    const double va = std::asinh(a.dot(et) / d), vb = std::asinh(b.dot(et) / d);
    const auto res = checked(detail::integrate<double>(outer, va, vb, opts.rel_tol, 0.0, opts.max_depth), i);
    const double sign = cr > 0 ? 1.0 : -1.0;
    out.value += sign * res.value;
    out.error += res.error;
  }
  return out;
}

Vector facet_solid_angles(const PolytopeMesh& mesh, const QuadratureOptions& opts) {
  Vector out = Vector::Zero(mesh.size());
  const DirectionWeight one;
  const SphereIntegrand F = integrand_for_weight(one, mesh.dim);
  for (int i = 0; i < mesh.size(); ++i) {
    const auto& f = mesh.facets[static_cast<size_t>(i)];
    if (f.active && f.h > mesh.tol) out[i] = facet_sphere_integral(mesh, i, F, opts).value;
  }
  return out;
}

Vector cone_volumes(const PolytopeMesh& mesh) {
  Vector out = Vector::Zero(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    const auto& f = mesh.facets[static_cast<size_t>(i)];
    if (f.active) out[i] = f.h * f.area / mesh.dim;
  }
  return out;
}

double dual_volume(const PolytopeMesh& mesh, const GSpec& G, const QuadratureOptions& opts) {
  const int n = mesh.dim;
  if (!mesh.full_dimensional) {
    const auto g0 = G.radial_at_zero();
    if (!g0) throw Error(ErrorCode::DomainError, "lower-dimensional body needs G(0,u), which is undefined");
    return *g0 == 0.0 ? 0.0 : *g0 * G.weight().sphere_integral(n);
  }
  const SphereIntegrand FG = integrand_for_g(G, n);
  double total = 0.0;
  for (int i = 0; i < mesh.size(); ++i) {
    const auto& f = mesh.facets[static_cast<size_t>(i)];
    if (f.active && f.h > mesh.tol) total += facet_sphere_integral(mesh, i, FG, opts).value;
  }
  if (origin_on_boundary(mesh)) {
    const auto g0 = G.radial_at_zero();
    if (!g0) throw Error(ErrorCode::DomainError, "origin on the boundary needs G(0,u), which is undefined");
    if (*g0 != 0.0) {
      const SphereIntegrand Fw = integrand_for_weight(G.weight(), n);
      double covered = 0.0;
      for (int i = 0; i < mesh.size(); ++i) {
        const auto& f = mesh.facets[static_cast<size_t>(i)];
        if (f.active && f.h > mesh.tol) covered += facet_sphere_integral(mesh, i, Fw, opts).value;
      }
      total += *g0 * (G.weight().sphere_integral(n) - covered);
    }
  }
  return total;
}

double dual_volume_ball(const GSpec& G, int dim, double radius) {
  return G.radial(radius) * G.weight().sphere_integral(dim);
}

CurvatureVector curvature_vector(const PolytopeMesh& mesh, const GSpec& G, const PsiSpec& psi,
                                 const QuadratureOptions& opts) {
  const int n = mesh.dim;
  const int m = mesh.size();
  CurvatureVector cv;
  cv.c = Vector::Zero(m);
  cv.error = Vector::Zero(m);
  if (!mesh.full_dimensional) return cv;

  int through_origin = 0;
  for (Eigen::Index i = 0; i < mesh.z.size(); ++i) through_origin += mesh.z[i] <= mesh.tol ? 1 : 0;
  const SphereIntegrand F = integrand_for_rho_gt(G, n);
  for (int i = 0; i < m; ++i) {
    const auto& f = mesh.facets[static_cast<size_t>(i)];
    if (!f.active) continue;
    if (f.h <= mesh.tol) {
      // o in the relative interior of this facet: t^{1-n} G_t must stay bounded at 0.
      if (through_origin == 1 && G.lower_exponent() < n) {
        throw Error(ErrorCode::NonIntegrableAtOrigin,
                    "origin in the relative interior of facet " + std::to_string(i) + " and t^(1-n) G_t is unbounded at 0");
      }
      continue;
    }
    const FacetIntegral r = facet_sphere_integral(mesh, i, F, opts);
    const double denom = n * psi(f.h);
    cv.c[i] = r.value / denom;
    cv.error[i] = r.error / std::abs(denom);
  }
  cv.total = cv.c.sum();
  return cv;
}

CurvatureVector curvature_vector(const PolytopeMesh& mesh, const GSpec& G, const QuadratureOptions& opts) {
  return curvature_vector(mesh, G, PsiSpec::one(), opts);
}

CurvatureVector mc_oracle_curvature(const PolytopeMesh& mesh, const GSpec& G, const PsiSpec& psi,
                                    std::int64_t samples, std::uint64_t seed) {
  if (!mesh.origin_interior()) throw Error(ErrorCode::OriginNotInterior, "Monte Carlo oracle needs o in int P");
  if (samples <= 0) throw Error(ErrorCode::DegenerateInput, "sample count must be positive");
  const int n = mesh.dim;
  const int m = mesh.size();
  const detail::CounterRng rng(seed);
  const double scale = sphere_area(n) / n;
  Vector h = mesh.support_numbers();
  Vector psi_h(m);
  for (int i = 0; i < m; ++i) psi_h[i] = h[i] > 0.0 ? psi(h[i]) : 1.0;
  Vector sum = Vector::Zero(m), sum2 = Vector::Zero(m);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(m);
  Vector u(n);
  double g[3];
  for (std::int64_t k = 0; k < samples; ++k) {
    double nrm = 0.0;
    do {
      rng.normals(static_cast<std::uint64_t>(k), g, n);
      nrm = 0.0;
      for (int d = 0; d < n; ++d) nrm += g[d] * g[d];
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    for (int d = 0; d < n; ++d) u[d] = g[d] / nrm;
    const RadialHit hit = alpha(mesh.normals, mesh.z, u);
    const double y = scale * hit.rho * g_t_eval(G, hit.rho, u) / psi_h[hit.index];
    sum[hit.index] += y;
    sum2[hit.index] += y * y;
    counts[hit.index] += 1;
  }
  CurvatureVector cv;
  const double N = static_cast<double>(samples);
  cv.c = sum / N;
  cv.error.resize(m);
  for (int i = 0; i < m; ++i) {
    const double mean = sum[i] / N;
    const double var = std::max(0.0, sum2[i] / N - mean * mean);
    cv.error[i] = std::sqrt(var / N);
  }
  cv.total = cv.c.sum();
  cv.counts = counts;
  cv.samples = samples;
  return cv;
}

GradientCheck check_gradient(const Directions& normals, const Vector& z, const GSpec& G, int i,
                             const QuadratureOptions& opts) {
  const PolytopeMesh mesh = build_polytope(normals, z);
  if (!mesh.origin_interior()) throw Error(ErrorCode::OriginNotInterior, "gradient check needs o in int P(z)");
  GradientCheck gc;
  const auto& f = mesh.facets.at(static_cast<size_t>(i));
  if (f.active) {
    const CurvatureVector cv = curvature_vector(mesh, G, opts);
    gc.analytic = mesh.dim * cv.c[i] / f.h;
  }
  const double step = 1e-5 * z[i];
  Vector zp = z, zm = z;
  zp[i] += step;
  zm[i] -= step;
  const double vp = dual_volume(build_polytope(normals, zp), G, opts);
  const double vm = dual_volume(build_polytope(normals, zm), G, opts);
  gc.numeric = (vp - vm) / (2.0 * step);
  const double denom = std::max(std::abs(gc.analytic), std::abs(gc.numeric));
  gc.rel_err = denom == 0.0 ? 0.0 : std::abs(gc.analytic - gc.numeric) / denom;
  return gc;
}

}  // namespace dualorlicz
