#include "../support/generators.hpp"
#include "dualorlicz/functionals.hpp"

#include <doctest.h>

using namespace dualorlicz;

namespace {

const Directions& cube() {
  static const Directions U = gen::as_directions(gen::coordinate_atoms(3));
  return U;
}
const Directions& square() {
  static const Directions U = gen::as_directions(gen::coordinate_atoms(2));
  return U;
}

struct McEstimate {
  double mean, stderr_;
};

// Plain sphere-sampling Monte Carlo for int_S G(rho_P(u), u) du, using std::mt19937_64.
McEstimate mc_dual_volume(const Directions& U, const Vector& z, const GSpec& G, int n, int samples, unsigned seed) {
  gen::Rng rng(seed);
  double s = 0, s2 = 0;
  for (int k = 0; k < samples; ++k) {
    const Vector u = gen::direction(rng, n);
    const double y = sphere_area(n) * g_eval(G, radial_function(U, z, u), u);
    s += y;
    s2 += y * y;
  }
  const double mean = s / samples;
  return {mean, std::sqrt((s2 / samples - mean * mean) / samples)};
}

PolytopeMesh random_polytope(gen::Rng& rng, int n) {
  const int m = gen::integer(rng, 6, 16);
  return build_polytope(gen::as_directions(gen::normals(rng, n, m)), gen::support_numbers(rng, m));
}

}  // namespace

TEST_CASE("dual volume examples") {
  const PolytopeMesh C = build_polytope(cube(), Vector::Ones(6));
  CHECK(dual_volume(C, GSpec::power(3, 1.0 / 3)) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(dual_volume_ball(GSpec::power(3, 1.0 / 3), 3, 1.0) == doctest::Approx(4.18879020478639).epsilon(1e-14));
  const PolytopeMesh S = build_polytope(square(), Vector::Ones(4));
  const double v = dual_volume(S, GSpec::power(2));
  CHECK(v == doctest::Approx(8.0).epsilon(1e-12));
  const McEstimate mc = mc_dual_volume(square(), Vector::Ones(4), GSpec::power(2), 2, 1000000, 7);
  CHECK(std::abs(v - mc.mean) <= 3 * mc.stderr_);
}

TEST_CASE("property: volume specialization on random polytopes") {
  gen::Rng rng(41);
  for (int k = 0; k < 20; ++k) {
    const int n = k % 2 ? 3 : 2;
    const PolytopeMesh P = random_polytope(rng, n);
    const GSpec G = GSpec::power(n, 1.0 / n);
    CHECK(dual_volume(P, G) == doctest::Approx(P.volume).epsilon(1e-10));
    const Vector c = curvature_vector(P, G).c;
    const Vector cone = cone_volumes(P);
    for (int i = 0; i < P.size(); ++i) CHECK(c[i] == doctest::Approx(cone[i]).epsilon(1e-9));
    CHECK(facet_solid_angles(P).sum() == doctest::Approx(sphere_area(n)).epsilon(1e-10));
  }
}

TEST_CASE("curvature vector examples") {
  const PolytopeMesh C = build_polytope(cube(), Vector::Ones(6));
  const CurvatureVector cv = curvature_vector(C, GSpec::power(3, 1.0 / 3));
  for (int i = 0; i < 6; ++i) CHECK(cv.c[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(cv.total == doctest::Approx(8.0));
  const PolytopeMesh S = build_polytope(square(), Vector::Ones(4));
  const CurvatureVector cs = curvature_vector(S, GSpec::power(2, 0.5), PsiSpec::power(2));
  for (int i = 0; i < 4; ++i) CHECK(cs.c[i] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cs.total == doctest::Approx(4.0));
}

TEST_CASE("curvature signs follow the G_t class and inactive facets vanish") {
  std::vector<Vector> u = gen::coordinate_atoms(3);
  u.push_back(Vector::Ones(3));
  const Vector z = (Vector(7) << 1, 1, 1, 1, 1, 1, 5).finished();
  const PolytopeMesh P = build_polytope(gen::as_directions(u), z);
  const CurvatureVector pos = curvature_vector(P, GSpec::power(2), PsiSpec::power(2));
  const CurvatureVector neg = curvature_vector(P, GSpec::power(-1), PsiSpec::power(2));
  CHECK(pos.c[6] == 0.0);
  CHECK(neg.c[6] == 0.0);
  for (int i = 0; i < 6; ++i) {
    CHECK(pos.c[i] > 0);
    CHECK(neg.c[i] < 0);
  }
  CHECK(pos.total == doctest::Approx(pos.c.sum()));
}

TEST_CASE("Monte Carlo oracle on the cube") {
  const PolytopeMesh C = build_polytope(cube(), Vector::Ones(6));
  const CurvatureVector mc = mc_oracle_curvature(C, GSpec::power(3, 1.0 / 3), PsiSpec::one(), 1000000, 3);
  CHECK(mc.samples == 1000000);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(mc.c[i] - 4.0 / 3.0) <= 3 * mc.error[i]);
    // Hit frequencies estimate the solid angle of each facet projection (4 pi / 6).
    const double p = mc.counts[i] / 1e6;
    CHECK(std::abs(p - 1.0 / 6.0) <= 3 * std::sqrt(p * (1 - p) / 1e6));
  }
  const CurvatureVector again = mc_oracle_curvature(C, GSpec::power(3, 1.0 / 3), PsiSpec::one(), 1000000, 3);
  CHECK(again.c == mc.c);
  const PolytopeMesh S = build_polytope(square(), Vector::Ones(4));
  const CurvatureVector ms = mc_oracle_curvature(S, GSpec::power(2, 0.5), PsiSpec::power(2), 1000000, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ms.c[i] - 1.0) <= 3 * ms.error[i]);
  Vector z = Vector::Ones(6);
  z[0] = 0;
  CHECK_THROWS_AS(mc_oracle_curvature(build_polytope(cube(), z), GSpec::power(2), PsiSpec::one(), 10, 1), Error);
}

TEST_CASE("property: quadrature agrees with Monte Carlo") {
  gen::Rng rng(42);
  int facets = 0, agree = 0;
  for (int k = 0; k < 4; ++k) {
    const PolytopeMesh P = random_polytope(rng, k % 2 ? 3 : 2);
    const CurvatureVector q = curvature_vector(P, GSpec::power(1.5), PsiSpec::power(2));
    const CurvatureVector mc = mc_oracle_curvature(P, GSpec::power(1.5), PsiSpec::power(2), 400000, 100 + k);
    for (int i = 0; i < P.size(); ++i) {
      if (!P.facets[i].active) continue;
      ++facets;
      agree += std::abs(q.c[i] - mc.c[i]) <= 3 * mc.error[i];
    }
  }
  CHECK(agree >= 0.9 * facets);
}

TEST_CASE("gradient identity") {
  const GradientCheck g = check_gradient(cube(), Vector::Ones(6), GSpec::power(3, 1.0 / 3), 2);
  CHECK(g.analytic == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(g.numeric == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(check_gradient(square(), Vector::Ones(4), GSpec::power(2), 1).rel_err < 1e-5);
  gen::Rng rng(43);
  for (int k = 0; k < 5; ++k) {
    const int m = gen::integer(rng, 6, 14);
    const Directions U = gen::as_directions(gen::normals(rng, 3, m));
    const Vector z = gen::support_numbers(rng, m);
    for (int i = 0; i < m; ++i) CHECK(check_gradient(U, z, GSpec::power(1.5), i).rel_err < 1e-4);
  }
}

TEST_CASE("property: homogeneity and monotonicity") {
  gen::Rng rng(44);
  for (int k = 0; k < 10; ++k) {
    const int n = k % 2 ? 3 : 2;
    const int m = gen::integer(rng, 6, 14);
    const Directions U = gen::as_directions(gen::normals(rng, n, m));
    const Vector z = gen::support_numbers(rng, m);
    const double q = gen::uniform(rng, -2.0, 3.0);
    const GSpec G = GSpec::power(std::abs(q) < 0.1 ? 1.0 : q);
    const double v = dual_volume(build_polytope(U, z), G);
    for (double s : {0.5, 2.0})
      CHECK(dual_volume(build_polytope(U, s * z), G) == doctest::Approx(std::pow(s, G.q()) * v).epsilon(1e-10));
    const Vector bigger = z + gen::support_numbers(rng, m, 0.0, 0.3);
    const GSpec up = GSpec::power(2);
    CHECK(dual_volume(build_polytope(U, z), up) <= dual_volume(build_polytope(U, bigger), up));
  }
}

TEST_CASE("property: continuity in the support numbers") {
  gen::Rng rng(45);
  const int m = 10;
  const Directions U = gen::as_directions(gen::normals(rng, 3, m));
  const Vector z = gen::support_numbers(rng, m);
  const GSpec G = GSpec::power(2);
  const double v0 = dual_volume(build_polytope(U, z), G);
  std::vector<double> diffs;
  for (double d : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    Vector zp = z;
    zp[0] += d;
    diffs.push_back(std::abs(dual_volume(build_polytope(U, zp), G) - v0));
  }
  for (size_t i = 1; i < diffs.size(); ++i) CHECK(diffs[i - 1] / diffs[i] == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("blow-up toward the boundary for negative exponents") {
  double prev = 0;
  for (double z1 : {1e-1, 1e-2, 1e-3, 1e-4}) {
    Vector z = Vector::Ones(6);
    z[0] = z1;
    const double v = dual_volume(build_polytope(cube(), z), GSpec::power(-1));
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e4);
}

TEST_CASE("origin on the boundary") {
  Vector z = Vector::Ones(6);
  z[0] = 0;
  const PolytopeMesh P = build_polytope(cube(), z);
  CHECK(dual_volume(P, GSpec::power(3, 1.0 / 3)) == doctest::Approx(4.0).epsilon(1e-12));
  const CurvatureVector c = curvature_vector(P, GSpec::power(3, 1.0 / 3));
  CHECK(c.c[0] == 0.0);
  CHECK(c.c[1] == doctest::Approx(4.0 / 3.0));
  for (int i = 2; i < 6; ++i) CHECK(c.c[i] == doctest::Approx(2.0 / 3.0));
  // G(0, u) = 1 contributes the uncovered hemisphere.
  const GSpec shifted = GSpec::custom({0.0, 1.0, 2.0, 4.0}, {1.0, 2.0, 3.0, 5.0});
  const double full = dual_volume(P, shifted);
  CHECK(full > 2 * M_PI);
  try {
    curvature_vector(P, GSpec::power(-1));
    FAIL("expected NonIntegrableAtOrigin");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegrableAtOrigin);
  }
  try {
    dual_volume(P, GSpec::power(-1));
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}

TEST_CASE("lower-dimensional polytopes") {
  Vector z = Vector::Ones(6);
  z[0] = z[1] = 0;
  const PolytopeMesh flat = build_polytope(cube(), z);
  CHECK(dual_volume(flat, GSpec::power(2)) == 0.0);
  const GSpec shifted = GSpec::custom({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
  CHECK(dual_volume(flat, shifted) == doctest::Approx(4 * M_PI));
  CHECK(curvature_vector(flat, GSpec::power(2)).total == 0.0);
  CHECK_THROWS_AS(dual_volume(flat, GSpec::power(-1)), Error);
}

TEST_CASE("tabulated weights and log offset go through the inner quadrature") {
  const PolytopeMesh C = build_polytope(cube(), Vector::Ones(6));
  const DirectionWeight w = DirectionWeight::tabulated(cube(), (Vector(6) << 1, 1, 1, 1, 1, 1).finished(), 5.0, true);
  CHECK(dual_volume(C, GSpec::power(3, 1.0 / 3, w)) == doctest::Approx(8.0).epsilon(1e-10));
  const McEstimate mc = mc_dual_volume(cube(), Vector::Ones(6), GSpec::log_offset(), 3, 400000, 9);
  CHECK(std::abs(dual_volume(C, GSpec::log_offset()) - mc.mean) <= 3 * mc.stderr_);
}
