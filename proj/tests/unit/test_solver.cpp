#include "../support/generators.hpp"
#include "dualorlicz/solver.hpp"

#include <doctest.h>

using namespace dualorlicz;

namespace {

DiscreteMeasure coordinate_measure(int n, std::vector<double> w) {
  return DiscreteMeasure::make(gen::coordinate_atoms(n), std::move(w));
}

ProblemSpec square_problem(double scale = 1.0) {
  return {coordinate_measure(2, {scale, scale, scale, scale}), GSpec::power(2, 0.5), PsiSpec::power(2), false};
}

}  // namespace

TEST_CASE("projection onto the constraint set") {
  const ConstraintSet C = ConstraintSet::make(Vector::Ones(2), PsiSpec::power(2));
  const Vector p = project_to_M((Vector(2) << 2, 2).finished(), C);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(C.contains(p));
  CHECK_FALSE(C.contains((Vector(2) << 2, 2).finished()));
  try {
    project_to_M(Vector::Zero(2), C);
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
  CHECK_THROWS_AS(project_to_M((Vector(2) << -1, 2).finished(), C), Error);

  gen::Rng rng(51);
  for (int k = 0; k < 20; ++k) {
    const int m = gen::integer(rng, 3, 10);
    Vector lambda(m);
    for (int i = 0; i < m; ++i) lambda[i] = gen::uniform(rng, 0.5, 2.0);
    const ConstraintSet Ck = ConstraintSet::make(lambda, PsiSpec::power(gen::uniform(rng, 0.5, 3.0)));
    const Vector z = gen::support_numbers(rng, m, 0.1, 5.0);
    const Vector q = project_to_M(z, Ck);
    CHECK(Ck.contains(q, 1e-12));
    // Radial: q is a positive multiple of z.
    CHECK((q / (q[0] / z[0]) - z).norm() <= 1e-12 * z.norm());
  }
}

TEST_CASE("objective gradient on the cube") {
  ProblemSpec spec{coordinate_measure(3, {1, 1, 1, 1, 1, 1}), GSpec::power(3, 1.0 / 3), PsiSpec::one(), false};
  spec.prepare();
  const Evaluation e = objective_and_gradient(Vector::Ones(6), spec);
  CHECK(e.value == doctest::Approx(8.0).epsilon(1e-12));
  for (int i = 0; i < 6; ++i) CHECK(e.gradient[i] == doctest::Approx(4.0).epsilon(1e-12));

  std::vector<Vector> u = gen::coordinate_atoms(3);
  u.push_back(Vector::Ones(3));
  ProblemSpec extra{DiscreteMeasure::make(u, {1, 1, 1, 1, 1, 1, 1}), GSpec::power(2), PsiSpec::power(2), false};
  extra.prepare();
  const Evaluation f = objective_and_gradient((Vector(7) << 1, 1, 1, 1, 1, 1, 4).finished(), extra);
  CHECK(f.gradient[6] == 0.0);
}

TEST_CASE("square with G = t^2/2 and psi = t^2") {
  const SolveReport r = solve_discrete(square_problem());
  CHECK(r.converged);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.mode == "maximize");
  CHECK(r.tau == doctest::Approx(1.0).epsilon(1e-6));
  for (int i = 0; i < 4; ++i) CHECK(r.z[i] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.constraint_residual <= 1e-10);
  CHECK(r.norm_residual <= 1e-8);
  for (size_t k = 1; k < r.objective_trace.size(); ++k) CHECK(r.objective_trace[k] >= r.objective_trace[k - 1] - 1e-12);
}

TEST_CASE("scaling lambda scales tau") {
  const SolveReport a = solve_discrete(square_problem());
  const SolveReport b = solve_discrete(square_problem(2.0));
  CHECK(b.tau == doctest::Approx(2 * a.tau).epsilon(1e-6));
  CHECK((a.z - b.z).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("cube volume problem and minimize mode") {
  const SolveReport v = solve_discrete({coordinate_measure(3, {1, 1, 1, 1, 1, 1}), GSpec::power(3, 1.0 / 3),
                                        PsiSpec::power(2), false});
  CHECK(v.converged);
  CHECK(v.z.maxCoeff() - v.z.minCoeff() < 1e-6);
  // psi = 1 has no increasing Orlicz function to normalize against.
  try {
    solve_discrete({coordinate_measure(3, {1, 1, 1, 1, 1, 1}), GSpec::power(3, 1.0 / 3), PsiSpec::one(), false});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::DivergentPhi || e.code() == ErrorCode::HypothesisViolation));
  }

  const SolveReport m = solve_discrete({coordinate_measure(3, {1, 2, 1, 1, 3, 1}), GSpec::power(-1),
                                        PsiSpec::power(2), false});
  CHECK(m.converged);
  CHECK(m.mode == "minimize");
  CHECK(m.tau < 0);
  CHECK(m.max_rel_residual <= 1e-3);
  for (size_t k = 1; k < m.objective_trace.size(); ++k) CHECK(m.objective_trace[k] <= m.objective_trace[k - 1] + 1e-12);
}

TEST_CASE("property: random solves satisfy the equation and both tau forms agree") {
  gen::Rng rng(52);
  for (int k = 0; k < 6; ++k) {
    const int n = k % 2 ? 3 : 2;
    const DiscreteMeasure mu = gen::measure(rng, n, gen::integer(rng, n + 3, 10));
    const bool neg = k % 3 == 0;
    const SolveReport r = solve_discrete({mu, neg ? GSpec::power(-1) : GSpec::power(2), PsiSpec::power(2.5), false});
    CHECK(r.converged);
    CHECK(r.max_rel_residual <= 1e-3);
    CHECK(std::abs(r.tau - r.tau_dual) <= 1e-3 * std::abs(r.tau));
    CHECK(r.kkt.cwiseAbs().maxCoeff() <= 1e-2 * (mu.weights.maxCoeff() * 2.5 + 1));
  }
}

TEST_CASE("perturbed solutions are flagged") {
  const ProblemSpec spec = square_problem();
  const SolveReport at = assess_solution(spec, Vector::Ones(4));
  CHECK(at.converged);
  CHECK(at.kkt.cwiseAbs().maxCoeff() < 1e-10);
  const SolveReport off = assess_solution(spec, (Vector(4) << 1.2, 1, 1, 1).finished());
  CHECK_FALSE(off.converged);
  CHECK(off.max_rel_residual > 1e-3);
  CHECK(off.kkt.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("Luxemburg norm is homogeneous") {
  const PhiSpec phi = PhiSpec::increasing(PsiSpec::power(2));
  const Vector w = (Vector(3) << 1, 2, 3).finished();
  CHECK(luxemburg_norm(2 * Vector::Ones(3), w, phi) == doctest::Approx(2.0).epsilon(1e-12));
  const Vector h = (Vector(3) << 0.5, 1.0, 3.0).finished();
  CHECK(luxemburg_norm(3 * h, w, phi) == doctest::Approx(3 * luxemburg_norm(h, w, phi)).epsilon(1e-12));
}

TEST_CASE("condna grid probe for powers") {
  CHECK(condna_check(GSpec::power(1), PsiSpec::power(2)).verdict == Verdict::Pass);
  CHECK(condna_check(GSpec::power(2), PsiSpec::power(2)).verdict == Verdict::Indeterminate);
  const CondnaResult bad = condna_check(GSpec::power(3), PsiSpec::power(1), 2);
  CHECK(bad.verdict == Verdict::Fail);
  CHECK(bad.violation);
  CHECK(bad.lambda < 1.0);
}

TEST_CASE("multistart on the square finds one polytope") {
  const MultistartSpread s = uniqueness_probe(square_problem(), 5, 99);
  CHECK(s.starts == 5);
  CHECK(s.hausdorff < 1e-6);
  CHECK(s.tau < 1e-6);
  for (bool c : s.converged) CHECK(c);
}

TEST_CASE("determinism") {
  const ProblemSpec spec{coordinate_measure(3, {1, 2, 1, 1, 3, 1}), GSpec::power(2), PsiSpec::power(3), false};
  SolverConfig cfg;
  cfg.seed = 17;
  const SolveReport a = solve_discrete(spec, cfg);
  const SolveReport b = solve_discrete(spec, cfg);
  CHECK(a.z == b.z);
  CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("hypothesis gate") {
  try {
    solve_discrete({coordinate_measure(2, {1, 1, 1, 1}), GSpec::power(2), PsiSpec::power(0.5), false});
    FAIL("expected HypothesisViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolation);
  }
  SolverConfig cfg;
  cfg.force = true;
  CHECK_NOTHROW(solve_discrete({coordinate_measure(2, {1, 1, 1, 1}), GSpec::power(2), PsiSpec::power(0.5), false}, cfg));
  std::vector<Vector> half = {Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2), -Vector::Unit(3, 0)};
  try {
    solve_discrete({DiscreteMeasure::make(half, {1, 1, 1, 1}), GSpec::power(2), PsiSpec::power(2), false});
    FAIL("expected UnboundedPolytope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedPolytope);
  }
}

TEST_CASE("even solver for decreasing phibar") {
  ProblemSpec ev{coordinate_measure(3, {1, 1, 1, 1, 1, 1}), GSpec::power(-1), PsiSpec::power(-1), true};
  ev.mu.even = true;
  const SolveReport r = solve_even_decreasing_psi(ev);
  CHECK(r.experimental);
  CHECK(r.max_rel_residual < 1e-2);
  CHECK(r.constraint_residual <= 1e-10);
  bool heuristic = true;
  CHECK(limit_a0(GSpec::power(-1), 3, &heuristic) == 0.0);
  CHECK_FALSE(heuristic);
  CHECK_THROWS_AS(limit_a0(GSpec::power(2), 3), Error);
}

TEST_CASE("even problems keep the symmetry") {
  gen::Rng rng(53);
  const DiscreteMeasure mu = gen::even_measure(rng, 3, 2);
  const SolveReport r = solve_discrete({mu, GSpec::power(2), PsiSpec::power(2), true});
  CHECK(r.converged);
  const std::vector<int> anti = antipodes(mu.atoms);
  for (int i = 0; i < mu.size(); ++i) CHECK(r.z[i] == r.z[anti[i]]);
}

TEST_CASE("approximation of a uniform density") {
  const ApproxResult a = solve_general(DensityMeasure::uniform(2, 2 * M_PI), GSpec::power(2, 0.5), PsiSpec::power(2), {2, 3, 4});
  REQUIRE(a.levels.size() == 3);
  CHECK(a.all_converged);
  CHECK(a.all_within_bound);
  CHECK(a.hausdorff_decreasing);
  for (const ApproxLevel& l : a.levels) {
    CHECK(l.max_radius <= l.bound);
    const Vector& z = l.report.z;
    CHECK(z.maxCoeff() - z.minCoeff() < 1e-6);
  }
}
