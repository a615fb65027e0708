#include "../support/clip_oracle.hpp"
#include "../support/generators.hpp"

#include <doctest.h>

#include <sstream>

using namespace dualorlicz;

namespace {

Directions cube_normals() { return gen::as_directions(gen::coordinate_atoms(3)); }

bool inside(const Directions& U, const Vector& z, const Vector& x, double tol = 1e-12) {
  return ((U.transpose() * x - z).array() <= tol).all();
}

// Largest t with t u in P by bisection on membership.
double radial_oracle(const Directions& U, const Vector& z, const Vector& u) {
  double lo = 0, hi = 1;
  while (inside(U, z, hi * u)) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (inside(U, z, mid * u, 0.0) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("cube from six halfspaces") {
  const PolytopeMesh P = build_polytope(cube_normals(), Vector::Ones(6));
  CHECK(P.vertices.size() == 8);
  CHECK(P.volume == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(P.origin_interior());
  for (const Facet& f : P.facets) {
    CHECK(f.active);
    CHECK(f.loop.size() == 4);
    CHECK(f.area == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(f.h == 1.0);
  }
}

TEST_CASE("facet loops are counter-clockwise seen from outside") {
  gen::Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    const int m = gen::integer(rng, 6, 16);
    const PolytopeMesh P = build_polytope(gen::as_directions(gen::normals(rng, 3, m)), gen::support_numbers(rng, m));
    for (const Facet& f : P.facets) {
      if (!f.active) continue;
      const Eigen::Vector3d a = P.vertices[f.loop[0]], b = P.vertices[f.loop[1]], c = P.vertices[f.loop[2]];
      CHECK((b - a).cross(c - a).dot(Eigen::Vector3d(P.normals.col(f.index))) > 0);
    }
  }
}

TEST_CASE("vertex enumeration agrees with the clipping oracle") {
  gen::Rng rng(12);
  for (int k = 0; k < 40; ++k) {
    const int n = k % 2 ? 3 : 2;
    const int m = gen::integer(rng, n + 3, 20);
    const Directions U = gen::as_directions(gen::normals(rng, n, m));
    const Vector z = gen::support_numbers(rng, m);
    const PolytopeMesh P = build_polytope(U, z);
    const oracle::Clipped C = n == 3 ? oracle::clip_3d(U, z) : oracle::clip_2d(U, z);
    CHECK(P.volume == doctest::Approx(C.volume).epsilon(1e-10));
    REQUIRE(P.vertices.size() == C.vertices.size());
    for (const Vector& v : P.vertices) {
      double best = 1e300;
      for (const Vector& w : C.vertices) best = std::min(best, (v - w).norm());
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("inactive facets and support numbers") {
  // The halfspace x + y + z <= 10 does not touch the unit cube.
  std::vector<Vector> u = gen::coordinate_atoms(3);
  u.push_back(Vector::Ones(3));
  const Vector z = (Vector(7) << 1, 1, 1, 1, 1, 1, 10).finished();
  const PolytopeMesh P = build_polytope(gen::as_directions(u), z);
  CHECK_FALSE(P.facets[6].active);
  CHECK(P.facets[6].area == 0.0);
  CHECK(P.facets[6].h == doctest::Approx(std::sqrt(3.0)));
  CHECK(P.support_numbers()[6] == doctest::Approx(std::sqrt(3.0)));
  CHECK(P.volume == doctest::Approx(8.0));
}

TEST_CASE("unbounded and degenerate inputs are rejected") {
  std::vector<Vector> half = {Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2), -Vector::Unit(3, 0)};
  try {
    build_polytope(gen::as_directions(half), Vector::Ones(4));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedPolytope);
  }
  std::vector<Vector> dup = gen::coordinate_atoms(2);
  dup.push_back(Vector::Unit(2, 0));
  try {
    make_directions(dup);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInput);
  }
  CHECK_THROWS_AS(UnitVector(Vector::Zero(3)), Error);
}

TEST_CASE("radial function matches a membership bisection") {
  gen::Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    const int n = k % 2 ? 3 : 2;
    const int m = gen::integer(rng, n + 3, 14);
    const Directions U = gen::as_directions(gen::normals(rng, n, m));
    const Vector z = gen::support_numbers(rng, m);
    for (int s = 0; s < 20; ++s) {
      const Vector u = gen::direction(rng, n);
      const double rho = radial_function(U, z, u);
      CHECK(rho == doctest::Approx(radial_oracle(U, z, u)).epsilon(1e-12));
      const RadialHit hit = alpha(U, z, u);
      CHECK(hit.rho == doctest::Approx(rho).epsilon(1e-15));
      CHECK(z[hit.index] / u.dot(U.col(hit.index)) == doctest::Approx(rho).epsilon(1e-12));
    }
  }
}

TEST_CASE("radial Gauss map resolves ties to the smallest index") {
  const Directions U = cube_normals();
  const Vector z = Vector::Ones(6);
  Vector diag(3);
  diag << 1, 1, 1;
  const RadialHit hit = alpha(U, z, diag.normalized());
  CHECK(hit.index == 0);
  CHECK(hit.tie);
  CHECK(hit.rho == doctest::Approx(std::sqrt(3.0)));
  CHECK_FALSE(alpha(U, z, Vector::Unit(3, 2)).tie);
  Vector zb = z;
  zb[1] = 0.0;
  CHECK_THROWS_AS(alpha(U, zb, Vector::Unit(3, 0)), Error);
}

TEST_CASE("support function of the cube") {
  const PolytopeMesh P = build_polytope(cube_normals(), Vector::Ones(6));
  Vector u(3);
  u << 1, 2, 2;
  u /= 3.0;
  CHECK(support_function(P, u) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("symmetric construction is exactly origin-symmetric") {
  gen::Rng rng(14);
  for (int k = 0; k < 5; ++k) {
    const DiscreteMeasure mu = gen::even_measure(rng, 3, 2);
    const std::vector<int> anti = antipodes(mu.atoms);
    Vector z(mu.size());
    for (int i = 0; i < mu.size(); ++i)
      if (anti[i] > i) z[i] = z[anti[i]] = gen::uniform(rng, 0.5, 2.0);
    const PolytopeMesh P = build_symmetric_polytope(mu.atoms, z);
    for (int i = 0; i < mu.size(); ++i) {
      CHECK(P.facets[i].h == P.facets[anti[i]].h);
      CHECK(P.facets[i].area == P.facets[anti[i]].area);
    }
    for (const Vector& v : P.vertices) {
      bool found = false;
      for (const Vector& w : P.vertices) found = found || (v + w).cwiseAbs().maxCoeff() == 0.0;
      CHECK(found);
    }
    const PolytopeMesh Q = build_polytope(mu.atoms, z);
    CHECK(P.volume == doctest::Approx(Q.volume).epsilon(1e-12));
  }
  std::vector<Vector> u = gen::coordinate_atoms(2);
  CHECK_THROWS_AS(build_symmetric_polytope(gen::as_directions(u), (Vector(4) << 1, 2, 1, 1).finished()), Error);
}

TEST_CASE("Hausdorff distance of nested squares") {
  const Directions U = gen::as_directions(gen::coordinate_atoms(2));
  const PolytopeMesh A = build_polytope(U, Vector::Ones(4));
  const PolytopeMesh B = build_polytope(U, 1.5 * Vector::Ones(4));
  // The sup of |h_A - h_B| is attained at the diagonals: 0.5 sqrt(2).
  const HausdorffEstimate d = hausdorff_distance(A, B);
  CHECK(d.value == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(hausdorff_distance(A, A).value == 0.0);
}

TEST_CASE("lower-dimensional and boundary cases") {
  const Directions U = cube_normals();
  Vector z = Vector::Ones(6);
  z[0] = 0.0;
  const PolytopeMesh P = build_polytope(U, z);
  CHECK(P.full_dimensional);
  CHECK_FALSE(P.origin_interior());
  CHECK(P.volume == doctest::Approx(4.0));
  z[1] = 0.0;
  const PolytopeMesh flat = build_polytope(U, z);
  CHECK_FALSE(flat.full_dimensional);
  const PolytopeMesh point = build_polytope(U, Vector::Zero(6));
  CHECK(point.vertices.size() == 1);
  CHECK(point.volume == 0.0);
}

TEST_CASE("facet frame and region") {
  const PolytopeMesh P = build_polytope(cube_normals(), Vector::Ones(6));
  for (int i = 0; i < 6; ++i) {
    const Matrix B = P.facet_frame(i);
    const Eigen::Vector3d e1 = B.col(0), e2 = B.col(1);
    CHECK((e1.cross(e2) - Eigen::Vector3d(P.normals.col(i))).norm() < 1e-15);
    const FacetRegion R = facet_region(P, i);
    CHECK(R.area() == doctest::Approx(4.0));
    CHECK((R.foot - P.normals.col(i)).norm() < 1e-15);
  }
}

TEST_CASE("OFF export") {
  std::ostringstream os;
  write_off(os, build_polytope(cube_normals(), Vector::Ones(6)));
  std::istringstream is(os.str());
  std::string head;
  int nv = 0, nf = 0, ne = 0;
  is >> head >> nv >> nf >> ne;
  CHECK(head == "OFF");
  CHECK(nv == 8);
  CHECK(nf == 6);
  std::ostringstream os2;
  write_off(os2, build_polytope(gen::as_directions(gen::coordinate_atoms(2)), Vector::Ones(4)));
  std::istringstream is2(os2.str());
  is2 >> head >> nv >> nf >> ne;
  CHECK(nv == 4);
  CHECK(nf == 1);
}

TEST_CASE("sphere samples are unit and symmetric") {
  for (int n : {2, 3}) {
    const auto s = sphere_sample(n, 2);
    for (const Vector& u : s) CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-15));
    for (const Vector& u : s) {
      bool found = false;
      for (const Vector& w : s) found = found || (u + w).norm() < 1e-12;
      CHECK(found);
    }
  }
  CHECK(sphere_area(2) == doctest::Approx(2 * M_PI));
  CHECK(sphere_area(3) == doctest::Approx(4 * M_PI));
}
