#include "../support/generators.hpp"

#include <doctest.h>

using namespace dualorlicz;

namespace {

// Brute-force hemisphere delta on a fine direction grid (an upper bound on the true minimum).
double delta_grid(const DiscreteMeasure& mu, int level) {
  double best = 1e300;
  for (const Vector& v : sphere_sample(mu.dim, level)) {
    double s = 0;
    for (int i = 0; i < mu.size(); ++i) s += mu.weights[i] * std::max(0.0, mu.atoms.col(i).dot(v));
    best = std::min(best, s / mu.total());
  }
  return best;
}

}  // namespace

TEST_CASE("measure construction validates input") {
  const DiscreteMeasure mu = DiscreteMeasure::make(gen::coordinate_atoms(2), {1, 2, 3, 4});
  CHECK(mu.total() == 10.0);
  CHECK(mu.size() == 4);
  CHECK_THROWS_AS(DiscreteMeasure::make(gen::coordinate_atoms(2), {1, 0, 3, 4}), Error);
  CHECK_THROWS_AS(DiscreteMeasure::make(gen::coordinate_atoms(2), {1, 2, 3}), Error);
  CHECK_THROWS_AS(DiscreteMeasure::make(gen::coordinate_atoms(2), {1, 2, 3, 4}, true), Error);
  std::vector<Vector> u = {(Vector(2) << 3, 4).finished(), (Vector(2) << -1, 0).finished(), (Vector(2) << 0, -2).finished()};
  const DiscreteMeasure nrm = DiscreteMeasure::make(u, {1, 1, 1});
  CHECK(nrm.atoms.col(0)[0] == doctest::Approx(0.6));
}

TEST_CASE("hemisphere check examples") {
  const DiscreteMeasure cross = DiscreteMeasure::make(gen::coordinate_atoms(3), {1, 1, 1, 1, 1, 1});
  const HemisphereReport ok = hemisphere_check(cross);
  CHECK(ok.admissible);
  // Minimum of sum <u_i,v>_+ / 6 over v is attained at a coordinate axis: 1/6.
  CHECK(ok.delta == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  std::vector<Vector> half = {Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2), -Vector::Unit(3, 0)};
  const DiscreteMeasure bad = DiscreteMeasure::make(half, {1, 1, 1, 1});
  const HemisphereReport r = hemisphere_check(bad);
  CHECK_FALSE(r.admissible);
  REQUIRE(r.witness.size() == 3);
  for (int i = 0; i < bad.size(); ++i) CHECK(bad.atoms.col(i).dot(r.witness) <= 1e-12);

  // Atoms on a great circle are concentrated on a closed hemisphere as well.
  std::vector<Vector> ring;
  for (int k = 0; k < 6; ++k) ring.push_back((Vector(3) << std::cos(k), std::sin(k), 0).finished());
  CHECK(concentrated_on_hemisphere(gen::as_directions(ring)));
}

TEST_CASE("property: exact delta never exceeds the grid estimate") {
  gen::Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const int n = k % 2 ? 3 : 2;
    const DiscreteMeasure mu = gen::measure(rng, n, gen::integer(rng, n + 2, 12));
    Vector v;
    const double d = hemisphere_delta(mu, &v);
    CHECK(d > 0);
    CHECK(d <= delta_grid(mu, n == 3 ? 5 : 8) + 1e-14);
    CHECK(d >= delta_grid(mu, n == 3 ? 5 : 8) - 0.02);
    double s = 0;
    for (int i = 0; i < mu.size(); ++i) s += mu.weights[i] * std::max(0.0, mu.atoms.col(i).dot(v));
    CHECK(s / mu.total() == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("symmetrize pairs antipodes exactly") {
  gen::Rng rng(32);
  const DiscreteMeasure mu = gen::measure(rng, 3, 7);
  const DiscreteMeasure s = symmetrize(mu);
  CHECK(s.even);
  CHECK(s.total() == doctest::Approx(mu.total()));
  const std::vector<int> anti = antipodes(s.atoms);
  for (int i = 0; i < s.size(); ++i) {
    REQUIRE(anti[i] >= 0);
    CHECK((s.atoms.col(i) + s.atoms.col(anti[i])).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.weights[i] == s.weights[anti[i]]);
  }
  const DiscreteMeasure again = symmetrize(s);
  CHECK(again.size() == s.size());
}

TEST_CASE("uniform density discretizes to equal atoms") {
  const DensityMeasure nu = DensityMeasure::uniform(2, 2 * M_PI);
  for (int level : {1, 2, 3}) {
    const DiscreteMeasure mu = discretize(nu, level);
    CHECK(mu.size() == (1 << (level + 1)));
    CHECK(mu.total() == doctest::Approx(2 * M_PI).epsilon(1e-12));
    for (int i = 0; i < mu.size(); ++i) CHECK(mu.weights[i] == doctest::Approx(2 * M_PI / mu.size()).epsilon(1e-12));
    CHECK(mu.even);
  }
  const DiscreteMeasure m3 = discretize(DensityMeasure::uniform(3, 1.0), 1);
  CHECK(m3.size() == 80);
  CHECK(m3.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cap densities keep their mass and converge weakly") {
  DensityMeasure nu;
  nu.dim = 3;
  nu.caps = {{Vector::Unit(3, 2), 180.0, 1.0}, {Vector::Unit(3, 0), 40.0, 2.0}};
  CHECK(nu.total_mass() == doctest::Approx(3.0));
  CHECK(nu.density(Vector::Unit(3, 0)) > nu.density(-Vector::Unit(3, 0)));
  double prev = 1e300;
  DiscreteMeasure fine = discretize(nu, 4);
  for (int level : {1, 2, 3}) {
    const DiscreteMeasure mu = discretize(nu, level);
    CHECK(mu.total() == doctest::Approx(3.0).epsilon(1e-10));
    const double d = weak_distance(mu, fine);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("a single small cap is inadmissible") {
  DensityMeasure nu;
  nu.dim = 3;
  nu.caps = {{Vector::Unit(3, 2), 30.0, 1.0}};
  try {
    discretize(nu, 2);
    FAIL("expected InadmissibleDensity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InadmissibleDensity);
  }
  nu.caps[0].mass = -1;
  CHECK_THROWS_AS(nu.validate(), Error);
}

TEST_CASE("weak dictionary is bounded-Lipschitz") {
  for (int n : {2, 3}) {
    const auto& dict = weak_dictionary(n);
    CHECK(dict.size() == 200);
    gen::Rng rng(33);
    for (const TestFunction& f : dict) {
      for (int k = 0; k < 5; ++k) {
        const Vector a = gen::direction(rng, n), b = gen::direction(rng, n);
        const double geo = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
        CHECK(std::abs(f.f(a)) <= 1.0 + 1e-12);
        CHECK(std::abs(f.f(a) - f.f(b)) <= geo + 1e-12);
      }
    }
  }
  const DiscreteMeasure mu = DiscreteMeasure::make(gen::coordinate_atoms(2), {1, 1, 1, 1});
  CHECK(weak_distance(mu, mu) == 0.0);
  CHECK(integrate(mu, [](const Vector&) { return 1.0; }) == 4.0);
}
