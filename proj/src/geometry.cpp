#include "dualorlicz/geometry.hpp"

#include "dualorlicz/detail/icosphere.hpp"
#include "dualorlicz/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

namespace dualorlicz {

namespace {

Matrix hyperplane_basis(const Vector& u) {
  const auto n = u.size();
  Matrix B(n, n - 1);
  if (n == 2) {
    B(0, 0) = -u[1];
    B(1, 0) = u[0];
    return B;
  }
  Eigen::Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  a[k] = 1.0;
  const Eigen::Vector3d uu(u[0], u[1], u[2]);
  const Eigen::Vector3d e1 = (a - a.dot(uu) * uu).normalized();
  const Eigen::Vector3d e2 = uu.cross(e1);
  B.col(0) = e1;
  B.col(1) = e2;
  return B;
}

void check_dims(const Directions& normals, const Vector& z) {
  const auto n = normals.rows();
  if (n != 2 && n != 3) throw Error(ErrorCode::DegenerateInput, "meshing supports n in {2,3}");
  if (z.size() != normals.cols()) throw Error(ErrorCode::DegenerateInput, "z and normals differ in length");
  if (normals.cols() <= n) throw Error(ErrorCode::DegenerateInput, "need m > n normals");
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i]) || z[i] < 0.0) throw Error(ErrorCode::DegenerateInput, "z must be finite and >= 0");
  }
}

Directions normalized_columns(const Directions& normals) {
  Directions U = normals;
  for (Eigen::Index i = 0; i < U.cols(); ++i) {
    const double nrm = U.col(i).norm();
    if (!(nrm > 0.0)) throw Error(ErrorCode::DegenerateInput, "zero normal");
    U.col(i) /= nrm;
  }
  for (Eigen::Index i = 0; i < U.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < U.cols(); ++j) {
      if ((U.col(i) - U.col(j)).norm() <= kGeomTol) {
        throw Error(ErrorCode::DegenerateInput, "duplicate normals " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
  return U;
}

int find_vertex(const std::vector<Vector>& verts, const Vector& x, double tol) {
  for (size_t k = 0; k < verts.size(); ++k) {
    if ((verts[k] - x).norm() <= tol) return static_cast<int>(k);
  }
  return -1;
}

// Feasible n-subset intersections of the normalized problem (max z = 1).
std::vector<Vector> enumerate_vertices(const Directions& U, const Vector& zn) {
  const int n = static_cast<int>(U.rows());
  const int m = static_cast<int>(U.cols());
  std::vector<Vector> verts;
  auto consider = [&](const Matrix& A, const Vector& b) {
    if (std::abs(A.determinant()) < 1e-12) return;
    const Vector x = A.partialPivLu().solve(b);
    for (int k = 0; k < m; ++k) {
      if (U.col(k).dot(x) > zn[k] + kGeomTol) return;
    }
    if (find_vertex(verts, x, kGeomTol) < 0) verts.push_back(x);
  };
  Matrix A(n, n);
  Vector b(n);
  if (n == 2) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        A.row(0) = U.col(i).transpose();
        A.row(1) = U.col(j).transpose();
        b << zn[i], zn[j];
        consider(A, b);
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
          A.row(0) = U.col(i).transpose();
          A.row(1) = U.col(j).transpose();
          A.row(2) = U.col(k).transpose();
          b << zn[i], zn[j], zn[k];
          consider(A, b);
        }
      }
    }
  }
  return verts;
}

// Orders incident vertices, fills loop, area and activity of facet i (normalized units).
void assemble_facet(const PolytopeMesh& mesh, const std::vector<Vector>& verts, const Vector& zn, int i,
                    Facet& f) {
  const int n = mesh.dim;
  const Vector u = mesh.normals.col(i);
  std::vector<int> incident;
  double hmax = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < verts.size(); ++k) {
    const double d = verts[k].dot(u);
    hmax = std::max(hmax, d);
    if (std::abs(d - zn[i]) <= kGeomTol) incident.push_back(static_cast<int>(k));
  }
  f.index = i;
  f.h = std::min(hmax, zn[i]);
  f.area = 0.0;
  f.active = false;
  f.loop.clear();
  if (static_cast<int>(incident.size()) < n) return;
  const Matrix B = hyperplane_basis(u);
  if (n == 2) {
    auto param = [&](int k) { return verts[static_cast<size_t>(k)].dot(B.col(0)); };
    const auto [lo, hi] = std::minmax_element(incident.begin(), incident.end(),
                                              [&](int a, int b) { return param(a) < param(b); });
    const double len = param(*hi) - param(*lo);
    if (len > kGeomTol) {
      f.loop = {*lo, *hi};
      f.area = len;
      f.active = true;
    }
  } else {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    std::vector<Eigen::Vector2d> q;
    for (int k : incident) {
      q.emplace_back(verts[static_cast<size_t>(k)].dot(B.col(0)), verts[static_cast<size_t>(k)].dot(B.col(1)));
      c += q.back();
    }
    c /= static_cast<double>(q.size());
    std::vector<size_t> order(q.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ang(q.size());
    for (size_t k = 0; k < q.size(); ++k) ang[k] = std::atan2(q[k].y() - c.y(), q[k].x() - c.x());
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return ang[a] < ang[b]; });
    double area2 = 0.0;
    for (size_t k = 0; k < order.size(); ++k) {
      const auto& a = q[order[k]];
      const auto& b = q[order[(k + 1) % order.size()]];
      area2 += a.x() * b.y() - a.y() * b.x();
    }
    const double area = 0.5 * area2;
    if (area > kGeomTol) {
      for (size_t k : order) f.loop.push_back(incident[k]);
      f.area = area;
      f.active = true;
    }
  }
  if (f.active) f.h = zn[i];
}

void finish_volume(PolytopeMesh& mesh) {
  const int n = mesh.dim;
  Vector c = Vector::Zero(n);
  for (const auto& v : mesh.vertices) c += v;
  if (!mesh.vertices.empty()) c /= static_cast<double>(mesh.vertices.size());
  double vol = 0.0;
  for (const auto& f : mesh.facets) {
    if (f.active) vol += (f.h - c.dot(mesh.normals.col(f.index))) * f.area / n;
  }
  const double scale = mesh.z.size() ? mesh.z.maxCoeff() : 0.0;
  mesh.full_dimensional = vol > 1e-12 * std::pow(scale, n) && scale > 0.0;
  mesh.volume = mesh.full_dimensional ? vol : 0.0;
}

}  // namespace

Vector PolytopeMesh::support_numbers() const {
  Vector h(size());
  for (int i = 0; i < size(); ++i) h[i] = facets[static_cast<size_t>(i)].h;
  return h;
}

bool PolytopeMesh::origin_interior() const { return full_dimensional && z.size() > 0 && z.minCoeff() > tol; }

Matrix PolytopeMesh::facet_frame(int i) const { return hyperplane_basis(normals.col(i)); }

double FacetRegion::triangle_area(size_t t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d a = points.col(tri[0]), b = points.col(tri[1]), c = points.col(tri[2]);
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

double FacetRegion::area() const {
  if (basis.cols() == 1) return points.cols() >= 2 ? points(0, points.cols() - 1) - points(0, 0) : 0.0;
  double s = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t) s += triangle_area(t);
  return s;
}

Directions make_directions(const std::vector<Vector>& dirs) {
  if (dirs.empty()) throw Error(ErrorCode::DegenerateInput, "no directions");
  Directions U(dirs.front().size(), static_cast<Eigen::Index>(dirs.size()));
  for (size_t i = 0; i < dirs.size(); ++i) {
    if (dirs[i].size() != U.rows()) throw Error(ErrorCode::DegenerateInput, "mixed dimensions");
    U.col(static_cast<Eigen::Index>(i)) = dirs[i];
  }
  return normalized_columns(U);
}

Directions make_directions(const std::vector<UnitVector>& dirs) {
  std::vector<Vector> v;
  for (const auto& d : dirs) v.push_back(d.coords());
  return make_directions(v);
}

std::vector<int> antipodes(const Directions& normals, double tol) {
  std::vector<int> out(static_cast<size_t>(normals.cols()), -1);
  for (Eigen::Index i = 0; i < normals.cols(); ++i) {
    for (Eigen::Index j = 0; j < normals.cols(); ++j) {
      if (i != j && (normals.col(i) + normals.col(j)).norm() <= tol) {
        out[static_cast<size_t>(i)] = static_cast<int>(j);
        break;
      }
    }
  }
  return out;
}

PolytopeMesh build_polytope(const Directions& normals, const Vector& z) {
  check_dims(normals, z);
  PolytopeMesh mesh;
  mesh.dim = static_cast<int>(normals.rows());
  mesh.normals = normalized_columns(normals);
  mesh.z = z;
  Vector witness;
  if (concentrated_on_hemisphere(mesh.normals, &witness)) {
    throw Error(ErrorCode::UnboundedPolytope, "normals lie in a closed hemisphere");
  }
  const int m = static_cast<int>(z.size());
  const double scale = z.maxCoeff();
  mesh.tol = kGeomTol * std::max(scale, std::numeric_limits<double>::min());
  mesh.facets.resize(static_cast<size_t>(m));
  if (scale <= 0.0) {
    mesh.vertices = {Vector::Zero(mesh.dim)};
    for (int i = 0; i < m; ++i) mesh.facets[static_cast<size_t>(i)].index = i;
    return mesh;
  }
  // Power-of-two normalization is exact, so perturbing an inactive z_i leaves every vertex bit-identical.
  int expo = 0;
  std::frexp(scale, &expo);
  const double unit = std::ldexp(1.0, expo);
  const Vector zn = z / unit;
  const std::vector<Vector> verts = enumerate_vertices(mesh.normals, zn);
  for (int i = 0; i < m; ++i) assemble_facet(mesh, verts, zn, i, mesh.facets[static_cast<size_t>(i)]);
  const double area_scale = mesh.dim == 2 ? unit : unit * unit;
  for (auto& f : mesh.facets) {
    f.h *= unit;
    f.area *= area_scale;
    if (f.active) f.h = z[f.index];
  }
  mesh.vertices.reserve(verts.size());
  for (const auto& v : verts) mesh.vertices.push_back(v * unit);
  finish_volume(mesh);
  return mesh;
}

PolytopeMesh build_symmetric_polytope(const Directions& normals, const Vector& z) {
  const Directions U = normalized_columns(normals);
  const std::vector<int> anti = antipodes(U);
  for (size_t i = 0; i < anti.size(); ++i) {
    if (anti[i] < 0) throw Error(ErrorCode::DegenerateInput, "normal without antipode in symmetric build");
    if (z[static_cast<Eigen::Index>(i)] != z[anti[i]]) {
      throw Error(ErrorCode::DegenerateInput, "symmetric build needs z_i equal on antipodal pairs");
    }
  }
  Directions Us = U;
  for (size_t i = 0; i < anti.size(); ++i) {
    if (static_cast<int>(i) < anti[i]) Us.col(anti[i]) = -Us.col(static_cast<Eigen::Index>(i));
  }
  PolytopeMesh mesh = build_polytope(Us, z);

  // Canonical vertex list closed under exact negation.
  std::vector<Vector> canon;
  std::vector<int> remap(mesh.vertices.size(), -1);
  for (size_t k = 0; k < mesh.vertices.size(); ++k) {
    if (remap[k] >= 0) continue;
    const Vector v = mesh.vertices[k];
    canon.push_back(v);
    remap[k] = static_cast<int>(canon.size()) - 1;
    const int partner = find_vertex(mesh.vertices, -v, mesh.tol);
    if (partner >= 0 && static_cast<size_t>(partner) != k) {
      canon.push_back(-v);
      remap[static_cast<size_t>(partner)] = static_cast<int>(canon.size()) - 1;
    }
  }
  auto negate_index = [&](int idx) {
    const Vector target = -canon[static_cast<size_t>(idx)];
    for (size_t k = 0; k < canon.size(); ++k) {
      if (canon[k] == target) return static_cast<int>(k);
    }
    canon.push_back(target);
    return static_cast<int>(canon.size()) - 1;
  };
  for (auto& f : mesh.facets) {
    for (int& idx : f.loop) idx = remap[static_cast<size_t>(idx)];
  }
  for (size_t i = 0; i < anti.size(); ++i) {
    const int j = anti[i];
    if (static_cast<int>(i) > j) continue;
    const Facet& src = mesh.facets[i];
    Facet& dst = mesh.facets[static_cast<size_t>(j)];
    dst.h = src.h;
    dst.area = src.area;
    dst.active = src.active;
    dst.loop.clear();
    for (int idx : src.loop) dst.loop.push_back(negate_index(idx));
    if (mesh.dim == 3) std::reverse(dst.loop.begin(), dst.loop.end());
  }
  mesh.vertices = std::move(canon);
  finish_volume(mesh);
  return mesh;
}

FacetRegion facet_region(const PolytopeMesh& mesh, int i) {
  const Facet& f = mesh.facets.at(static_cast<size_t>(i));
  FacetRegion r;
  r.index = i;
  r.foot = f.h * mesh.normals.col(i);
  r.basis = mesh.facet_frame(i);
  r.points.resize(mesh.dim - 1, static_cast<Eigen::Index>(f.loop.size()));
  for (size_t k = 0; k < f.loop.size(); ++k) {
    r.points.col(static_cast<Eigen::Index>(k)) =
        r.basis.transpose() * (mesh.vertices[static_cast<size_t>(f.loop[k])] - r.foot);
  }
  if (mesh.dim == 3) {
    for (size_t k = 1; k + 1 < f.loop.size(); ++k) r.triangles.push_back({0, static_cast<int>(k), static_cast<int>(k + 1)});
  }
  return r;
}

double radial_function(const Directions& normals, const Vector& z, const Vector& u) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < normals.cols(); ++i) {
    const double d = normals.col(i).dot(u);
    if (d > 0.0) best = std::min(best, z[i] / d);
  }
  return best;
}

RadialHit alpha(const Directions& normals, const Vector& z, const Vector& u) {
  if (z.size() == 0 || z.minCoeff() <= 0.0) throw Error(ErrorCode::OriginNotInterior, "alpha needs z > 0");
  RadialHit hit;
  hit.rho = radial_function(normals, z, u);
  if (!std::isfinite(hit.rho)) throw Error(ErrorCode::UnboundedPolytope, "ray does not meet any halfspace boundary");
  for (Eigen::Index i = 0; i < normals.cols(); ++i) {
    const double d = normals.col(i).dot(u);
    if (d <= 0.0) continue;
    if (z[i] / d - hit.rho <= 1e-12 * hit.rho) {
      if (hit.index < 0) {
        hit.index = static_cast<int>(i);
      } else {
        hit.tie = true;
      }
    }
  }
  return hit;
}

double support_function(const PolytopeMesh& mesh, const Vector& u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : mesh.vertices) best = std::max(best, v.dot(u));
  return best;
}

std::vector<Vector> sphere_sample(int dim, int level) {
  std::vector<Vector> out;
  if (dim == 2) {
    const int count = 1 << (level + 6);
    out.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
    return out;
  }
  if (dim == 3) {
    const auto ico = detail::make_icosphere(level);
    for (const auto& v : ico.vertices) out.emplace_back(v);
    return out;
  }
  throw Error(ErrorCode::DegenerateInput, "sphere_sample supports n in {2,3}");
}

HausdorffEstimate hausdorff_distance(const PolytopeMesh& P, const PolytopeMesh& Q, int level) {
  if (P.dim != Q.dim) throw Error(ErrorCode::DegenerateInput, "dimension mismatch");
  HausdorffEstimate est;
  const auto dirs = sphere_sample(P.dim, level);
  for (const auto& u : dirs) {
    est.value = std::max(est.value, std::abs(support_function(P, u) - support_function(Q, u)));
  }
  est.samples = static_cast<int>(dirs.size());
  est.note = "lower bound: sup over " + std::to_string(est.samples) + " sampled directions";
  return est;
}

void write_off(std::ostream& os, const PolytopeMesh& mesh) {
  int faces = 0;
  if (mesh.dim == 3) {
    for (const auto& f : mesh.facets) faces += f.active ? 1 : 0;
  } else {
    faces = 1;
  }
  os << "OFF\n" << mesh.vertices.size() << ' ' << faces << " 0\n";
  os.precision(17);
  for (const auto& v : mesh.vertices) {
    os << v[0] << ' ' << v[1] << ' ' << (mesh.dim == 3 ? v[2] : 0.0) << '\n';
  }
  if (mesh.dim == 3) {
    for (const auto& f : mesh.facets) {
      if (!f.active) continue;
      os << f.loop.size();
      for (int idx : f.loop) os << ' ' << idx;
      os << '\n';
    }
  } else {
    // Walk the boundary by angle around the vertex centroid.
    Vector c = Vector::Zero(2);
    for (const auto& v : mesh.vertices) c += v;
    if (!mesh.vertices.empty()) c /= static_cast<double>(mesh.vertices.size());
    std::vector<int> order(mesh.vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Vector da = mesh.vertices[static_cast<size_t>(a)] - c, db = mesh.vertices[static_cast<size_t>(b)] - c;
      return std::atan2(da[1], da[0]) < std::atan2(db[1], db[0]);
    });
    os << order.size();
    for (int idx : order) os << ' ' << idx;
    os << '\n';
  }
}

}  // namespace dualorlicz
