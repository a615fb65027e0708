#include "dualorlicz/measures.hpp"

#include "dualorlicz/detail/icosphere.hpp"
#include "dualorlicz/detail/simplex.hpp"
#include "dualorlicz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dualorlicz {

namespace {

constexpr double kPi = std::numbers::pi;

double positive_part_sum(const DiscreteMeasure& mu, const Vector& v) {
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) s += mu.weights[i] * std::max(0.0, mu.atoms.col(i).dot(v));
  return s;
}

Vector rot90(const Vector& u) {
  Vector r(2);
  r << -u[1], u[0];
  return r;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::make(const std::vector<Vector>& atoms, const std::vector<double>& weights,
                                      bool even) {
  if (atoms.size() != weights.size()) throw Error(ErrorCode::DegenerateInput, "atoms and weights differ in length");
  DiscreteMeasure mu;
  mu.atoms = make_directions(atoms);
  mu.dim = static_cast<int>(mu.atoms.rows());
  mu.weights = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  mu.even = even;
  mu.validate();
  return mu;
}

void DiscreteMeasure::validate() const {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::DegenerateInput, "measure dimension must be 2 or 3");
  if (atoms.rows() != dim || atoms.cols() != weights.size() || weights.size() == 0) {
    throw Error(ErrorCode::DegenerateInput, "malformed measure");
  }
  for (int i = 0; i < size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw Error(ErrorCode::DegenerateInput, "weights must be positive");
    if (std::abs(atoms.col(i).norm() - 1.0) > kGeomTol) throw Error(ErrorCode::DegenerateInput, "atoms must be unit vectors");
    for (int j = i + 1; j < size(); ++j) {
      if ((atoms.col(i) - atoms.col(j)).norm() <= kGeomTol) throw Error(ErrorCode::DegenerateInput, "repeated atom");
    }
  }
  if (even) {
    const auto anti = antipodes(atoms);
    for (int i = 0; i < size(); ++i) {
      const int j = anti[static_cast<size_t>(i)];
      if (j < 0) throw Error(ErrorCode::DegenerateInput, "even measure has an unpaired atom");
      if (std::abs(weights[i] - weights[j]) > 1e-12 * std::max(weights[i], weights[j])) {
        throw Error(ErrorCode::DegenerateInput, "even measure has unequal weights on an antipodal pair");
      }
    }
  }
}

double DensityMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& c : caps) s += c.mass;
  return s;
}

double DensityMeasure::density(const Vector& u) const {
  double d = 0.0;
  for (const auto& c : caps) {
    const double a = c.angle_deg * kPi / 180.0;
    const double ang = std::acos(std::clamp(u.dot(c.center.normalized()), -1.0, 1.0));
    if (ang <= a) {
      const double area = dim == 2 ? 2.0 * a : 2.0 * kPi * (1.0 - std::cos(a));
      d += c.mass / area;
    }
  }
  return d;
}

void DensityMeasure::validate() const {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InadmissibleDensity, "density dimension must be 2 or 3");
  if (caps.empty()) throw Error(ErrorCode::InadmissibleDensity, "density has no caps");
  for (const auto& c : caps) {
    if (c.center.size() != dim || !(c.center.norm() > 0.0)) throw Error(ErrorCode::InadmissibleDensity, "bad cap center");
    if (!(c.angle_deg > 0.0 && c.angle_deg <= 180.0)) throw Error(ErrorCode::InadmissibleDensity, "cap angle must be in (0,180]");
    if (!(c.mass > 0.0) || !std::isfinite(c.mass)) throw Error(ErrorCode::InadmissibleDensity, "cap mass must be positive");
  }
}

DensityMeasure DensityMeasure::uniform(int dim, double mass) {
  DensityMeasure nu;
  nu.dim = dim;
  SphericalCap cap;
  cap.center = Vector::Unit(dim, 0);
  cap.angle_deg = 180.0;
  cap.mass = mass;
  nu.caps.push_back(cap);
  nu.even = true;
  return nu;
}

bool concentrated_on_hemisphere(const Directions& atoms, Vector* witness) {
  const int n = static_cast<int>(atoms.rows());
  const int m = static_cast<int>(atoms.cols());
  if (m > 64) {
    // Extreme atoms along a fixed direction set span a sub-hull; if it already contains the
    // origin in its interior, so does the full hull.
    std::vector<Eigen::Index> pick;
    for (const Vector& v : sphere_sample(n, n == 2 ? 3 : 1)) {
      Eigen::Index k = 0;
      (v.transpose() * atoms).maxCoeff(&k);
      if (std::find(pick.begin(), pick.end(), k) == pick.end()) pick.push_back(k);
    }
    Directions sub(n, static_cast<Eigen::Index>(pick.size()));
    for (size_t i = 0; i < pick.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = atoms.col(pick[i]);
    if (static_cast<int>(pick.size()) < m && !concentrated_on_hemisphere(sub)) return false;
  }
  // Variables: p_k = v_k + 1 in [0,2] for k != j, and s = margin + 2 in [0,3].
  // Row i: sum_{k!=j} u_ik p_k + s <= 2 + sum_{k!=j} u_ik - sigma u_ij  (right side >= 2 - sqrt(n) >= 0).
  for (int j = 0; j < n; ++j) {
    for (double sigma : {1.0, -1.0}) {
      const int nv = n;  // n-1 free coordinates plus s
      Matrix A = Matrix::Zero(m + nv, nv);
      Vector b(m + nv);
      for (int i = 0; i < m; ++i) {
        int col = 0;
        double rhs = 2.0 - sigma * atoms(j, i);
        for (int k = 0; k < n; ++k) {
          if (k == j) continue;
          A(i, col++) = atoms(k, i);
          rhs += atoms(k, i);
        }
        A(i, nv - 1) = 1.0;
        b[i] = std::max(rhs, 0.0);
      }
      for (int k = 0; k < nv; ++k) {
        A(m + k, k) = 1.0;
        b[m + k] = k == nv - 1 ? 3.0 : 2.0;
      }
      Vector c = Vector::Zero(nv);
      c[nv - 1] = 1.0;
      const auto lp = detail::simplex_max<double>(A, b, c);
      if (lp.status != detail::LpStatus::Optimal) continue;
      const double margin = lp.x[nv - 1] - 2.0;
      if (margin >= -1e-12) {
        if (witness) {
          Vector v(n);
          int col = 0;
          for (int k = 0; k < n; ++k) v[k] = k == j ? sigma : lp.x[col++] - 1.0;
          *witness = v.normalized();
        }
        return true;
      }
    }
  }
  return false;
}

double hemisphere_delta(const DiscreteMeasure& mu, Vector* argmin) {
  const int n = mu.dim;
  const double total = mu.total();
  double best = std::numeric_limits<double>::infinity();
  Vector best_v = Vector::Unit(n, 0);
  auto consider = [&](const Vector& v) {
    const double f = positive_part_sum(mu, v);
    if (f < best) {
      best = f;
      best_v = v;
    }
  };
  // On each cell of the great-sphere arrangement {<u_i, v> = 0} the objective is <w, v> >= 0,
  // concave along geodesics, so the minimum sits at an arrangement vertex.
  if (n == 2) {
    for (int i = 0; i < mu.size(); ++i) {
      const Vector r = rot90(mu.atoms.col(i));
      consider(r);
      consider(-r);
    }
  } else if (mu.size() <= 400) {
    for (int i = 0; i < mu.size(); ++i) {
      const Eigen::Vector3d a = mu.atoms.col(i);
      for (int j = i + 1; j < mu.size(); ++j) {
        const Eigen::Vector3d cr = a.cross(Eigen::Vector3d(mu.atoms.col(j)));
        if (cr.norm() < 1e-12) continue;
        const Vector v = cr.normalized();
        consider(v);
        consider(-v);
      }
    }
  }
  for (const auto& v : sphere_sample(n, n == 2 ? 4 : 4)) consider(v);
  if (argmin) *argmin = best_v;
  return best / total;
}

HemisphereReport hemisphere_check(const DiscreteMeasure& mu) {
  HemisphereReport r;
  Vector w;
  if (concentrated_on_hemisphere(mu.atoms, &w)) {
    r.admissible = false;
    r.witness = w;
    r.delta = 0.0;
    r.delta_direction = w;
    return r;
  }
  r.admissible = true;
  r.delta = hemisphere_delta(mu, &r.delta_direction);
  return r;
}

DiscreteMeasure symmetrize(const DiscreteMeasure& mu) {
  std::vector<Vector> atoms;
  std::vector<double> weights;
  std::vector<bool> used(static_cast<size_t>(mu.size()), false);
  for (int i = 0; i < mu.size(); ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    used[static_cast<size_t>(i)] = true;
    const Vector u = mu.atoms.col(i);
    int partner = -1;
    for (int j = 0; j < mu.size(); ++j) {
      if (!used[static_cast<size_t>(j)] && (mu.atoms.col(j) + u).norm() <= kGeomTol) {
        partner = j;
        break;
      }
    }
    if (partner >= 0) {
      used[static_cast<size_t>(partner)] = true;
      const Vector d = (u - Vector(mu.atoms.col(partner))) / 2.0;
      const Vector a = d / d.norm();
      const double w = (mu.weights[i] + mu.weights[partner]) / 2.0;
      atoms.push_back(a);
      weights.push_back(w);
      atoms.push_back(-a);
      weights.push_back(w);
    } else {
      atoms.push_back(u);
      weights.push_back(mu.weights[i] / 2.0);
      atoms.push_back(-u);
      weights.push_back(mu.weights[i] / 2.0);
    }
  }
  DiscreteMeasure out;
  out.dim = mu.dim;
  out.atoms.resize(mu.dim, static_cast<Eigen::Index>(atoms.size()));
  out.weights.resize(static_cast<Eigen::Index>(weights.size()));
  for (size_t k = 0; k < atoms.size(); ++k) {
    out.atoms.col(static_cast<Eigen::Index>(k)) = atoms[k];
    out.weights[static_cast<Eigen::Index>(k)] = weights[k];
  }
  out.even = true;
  return out;
}

namespace {

DiscreteMeasure discretize_circle(const DensityMeasure& nu, int level) {
  const int N = 1 << (level + 1);
  const double width = 2.0 * kPi / N;
  std::vector<Vector> atoms;
  std::vector<double> weights;
  for (int k = 0; k < N; ++k) {
    const double a = (k - 0.5) * width;
    const double b = (k + 0.5) * width;
    double mass = 0.0;
    Eigen::Vector2d moment = Eigen::Vector2d::Zero();
    for (const auto& cap : nu.caps) {
      const double half = cap.angle_deg * kPi / 180.0;
      const double theta = std::atan2(cap.center[1], cap.center[0]);
      const double dens = cap.mass / (2.0 * half);
      for (double shift : {-2.0 * kPi, 0.0, 2.0 * kPi}) {
        const double lo = std::max(a, theta - half + shift);
        const double hi = std::min(b, theta + half + shift);
        if (hi <= lo) continue;
        mass += dens * (hi - lo);
        moment += dens * Eigen::Vector2d(std::sin(hi) - std::sin(lo), std::cos(lo) - std::cos(hi));
      }
    }
    if (mass <= 0.0) continue;
    atoms.push_back(moment.normalized());
    weights.push_back(mass);
  }
  DiscreteMeasure mu;
  mu.dim = 2;
  mu.atoms.resize(2, static_cast<Eigen::Index>(atoms.size()));
  mu.weights.resize(static_cast<Eigen::Index>(atoms.size()));
  for (size_t i = 0; i < atoms.size(); ++i) {
    mu.atoms.col(static_cast<Eigen::Index>(i)) = atoms[i];
    mu.weights[static_cast<Eigen::Index>(i)] = weights[i];
  }
  return mu;
}

DiscreteMeasure discretize_sphere(const DensityMeasure& nu, int level) {
  constexpr int kSub = 8;  // 64 sub-triangles per cell
  const auto ico = detail::make_icosphere(level);
  struct Sub {
    int cell;
    double area;
    Eigen::Vector3d centroid;
  };
  std::vector<Sub> subs;
  subs.reserve(ico.faces.size() * kSub * kSub);
  for (size_t f = 0; f < ico.faces.size(); ++f) {
    const Eigen::Vector3d A = ico.vertices[static_cast<size_t>(ico.faces[f][0])];
    const Eigen::Vector3d B = ico.vertices[static_cast<size_t>(ico.faces[f][1])];
    const Eigen::Vector3d C = ico.vertices[static_cast<size_t>(ico.faces[f][2])];
    auto P = [&](int i, int j) {
      return ((i * A + j * B + (kSub - i - j) * C) / static_cast<double>(kSub)).normalized().eval();
    };
    for (int i = 0; i < kSub; ++i) {
      for (int j = 0; j + i < kSub; ++j) {
        const Eigen::Vector3d p0 = P(i, j), p1 = P(i + 1, j), p2 = P(i, j + 1);
        subs.push_back({static_cast<int>(f), detail::spherical_triangle_area(p0, p1, p2), (p0 + p1 + p2).normalized()});
        if (i + j + 1 < kSub) {
          const Eigen::Vector3d p3 = P(i + 1, j + 1);
          subs.push_back({static_cast<int>(f), detail::spherical_triangle_area(p1, p3, p2), (p1 + p3 + p2).normalized()});
        }
      }
    }
  }
  const size_t cells = ico.faces.size();
  std::vector<double> mass(cells, 0.0);
  std::vector<Eigen::Vector3d> moment(cells, Eigen::Vector3d::Zero());
  for (const auto& cap : nu.caps) {
    const Eigen::Vector3d c = Eigen::Vector3d(cap.center[0], cap.center[1], cap.center[2]).normalized();
    const double cos_a = std::cos(cap.angle_deg * kPi / 180.0);
    const bool whole = cap.angle_deg >= 180.0;
    double captured = 0.0;
    for (const auto& s : subs) {
      if (whole || s.centroid.dot(c) >= cos_a) captured += s.area;
    }
    if (captured <= 0.0) {
      // Cap narrower than a sub-cell: all of its mass goes to the sub-cell nearest its center.
      size_t best = 0;
      for (size_t k = 1; k < subs.size(); ++k) {
        if (subs[k].centroid.dot(c) > subs[best].centroid.dot(c)) best = k;
      }
      mass[static_cast<size_t>(subs[best].cell)] += cap.mass;
      moment[static_cast<size_t>(subs[best].cell)] += cap.mass * c;
      continue;
    }
    const double dens = cap.mass / captured;
    for (const auto& s : subs) {
      if (whole || s.centroid.dot(c) >= cos_a) {
        mass[static_cast<size_t>(s.cell)] += dens * s.area;
        moment[static_cast<size_t>(s.cell)] += dens * s.area * s.centroid;
      }
    }
  }
  std::vector<Vector> atoms;
  std::vector<double> weights;
  for (size_t f = 0; f < cells; ++f) {
    if (mass[f] <= 0.0) continue;
    atoms.emplace_back(moment[f].normalized());
    weights.push_back(mass[f]);
  }
  DiscreteMeasure mu;
  mu.dim = 3;
  mu.atoms.resize(3, static_cast<Eigen::Index>(atoms.size()));
  mu.weights.resize(static_cast<Eigen::Index>(atoms.size()));
  for (size_t i = 0; i < atoms.size(); ++i) {
    mu.atoms.col(static_cast<Eigen::Index>(i)) = atoms[i];
    mu.weights[static_cast<Eigen::Index>(i)] = weights[i];
  }
  return mu;
}

}  // namespace

DiscreteMeasure discretize(const DensityMeasure& nu, int level) {
  nu.validate();
  if (level < 0 || level > 8) throw Error(ErrorCode::DegenerateInput, "discretization level must be in [0,8]");
  DiscreteMeasure mu = nu.dim == 2 ? discretize_circle(nu, level) : discretize_sphere(nu, level);
  if (nu.even) mu = symmetrize(mu);
  if (mu.size() <= mu.dim || concentrated_on_hemisphere(mu.atoms)) {
    throw Error(ErrorCode::InadmissibleDensity, "density is concentrated on a closed hemisphere");
  }
  return mu;
}

namespace {

std::vector<TestFunction> build_dictionary(int dim) {
  std::vector<TestFunction> dict;
  auto cap_fn = [](const Vector& c, double r, double w) {
    const double a = w / (1.0 + w);
    return [c, r, w, a](const Vector& u) {
      const double d = std::acos(std::clamp(u.dot(c), -1.0, 1.0));
      return a * std::clamp((r + w - d) / w, 0.0, 1.0);
    };
  };
  if (dim == 2) {
    for (int k = 1; k <= 10; ++k) {
      const double s = 1.0 / (k + 1.0);
      dict.push_back({[k, s](const Vector& u) { return s * std::cos(k * std::atan2(u[1], u[0])); },
                      "cos" + std::to_string(k)});
      dict.push_back({[k, s](const Vector& u) { return s * std::sin(k * std::atan2(u[1], u[0])); },
                      "sin" + std::to_string(k)});
    }
    const double rw[6][2] = {{0.2, 0.25}, {0.5, 0.25}, {1.0, 0.25}, {0.2, 1.0}, {0.5, 1.0}, {1.0, 1.0}};
    for (int c = 0; c < 30; ++c) {
      const double a = 2.0 * kPi * c / 30.0;
      Vector center(2);
      center << std::cos(a), std::sin(a);
      for (const auto& p : rw) dict.push_back({cap_fn(center, p[0], p[1]), "cap" + std::to_string(c)});
    }
  } else {
    for (int k = 0; k < 3; ++k) dict.push_back({[k](const Vector& u) { return 0.5 * u[k]; }, "lin" + std::to_string(k)});
    const double s = 1.0 / 3.0;
    dict.push_back({[s](const Vector& u) { return s * u[0] * u[1]; }, "xy"});
    dict.push_back({[s](const Vector& u) { return s * u[1] * u[2]; }, "yz"});
    dict.push_back({[s](const Vector& u) { return s * u[2] * u[0]; }, "zx"});
    dict.push_back({[s](const Vector& u) { return s * (u[0] * u[0] - u[1] * u[1]); }, "x2-y2"});
    dict.push_back({[s](const Vector& u) { return s * (3.0 * u[2] * u[2] - 1.0) / 2.0; }, "3z2-1"});
    const auto centers = detail::fibonacci_sphere(48);
    const double rw[4][2] = {{0.3, 0.25}, {0.8, 0.25}, {0.3, 1.0}, {0.8, 1.0}};
    for (size_t c = 0; c < centers.size(); ++c) {
      const Vector center = centers[c];
      for (const auto& p : rw) dict.push_back({cap_fn(center, p[0], p[1]), "cap" + std::to_string(c)});
    }
  }
  return dict;
}

}  // namespace

const std::vector<TestFunction>& weak_dictionary(int dim) {
  static const std::vector<TestFunction> d2 = build_dictionary(2);
  static const std::vector<TestFunction> d3 = build_dictionary(3);
  if (dim == 2) return d2;
  if (dim == 3) return d3;
  throw Error(ErrorCode::DegenerateInput, "dictionary exists for n in {2,3}");
}

double integrate(const DiscreteMeasure& mu, const std::function<double(const Vector&)>& f) {
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) s += mu.weights[i] * f(mu.atoms.col(i));
  return s;
}

double weak_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim != nu.dim) throw Error(ErrorCode::DegenerateInput, "dimension mismatch");
  double best = 0.0;
  for (const auto& tf : weak_dictionary(mu.dim)) {
    best = std::max(best, std::abs(integrate(mu, tf.f) - integrate(nu, tf.f)));
  }
  return best;
}

}  // namespace dualorlicz
