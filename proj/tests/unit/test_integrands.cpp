#include "../support/generators.hpp"
#include "dualorlicz/detail/quadrature.hpp"
#include "dualorlicz/integrands.hpp"

#include <doctest.h>

using namespace dualorlicz;

namespace {

// Composite Simpson on a log grid; independent of the adaptive Gauss-Kronrod code.
template <typename F>
double simpson_log(F f, double a, double b, int n = 20000) {
  const double la = std::log(a), lb = std::log(b), hstep = (lb - la) / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = std::exp(la + i * hstep);
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * f(x) * x;
  }
  return s * hstep / 3;
}

}  // namespace

TEST_CASE("power family values and derivatives") {
  const GSpec G = GSpec::power(1.5, 2.0);
  const Vector u = Vector::Unit(3, 0);
  CHECK(g_eval(G, 4.0, u) == doctest::Approx(16.0));
  CHECK(g_t_eval(G, 4.0, u) == doctest::Approx(6.0));
  CHECK(G.sign_class() == 1);
  CHECK(G.radial_at_zero().value() == 0.0);
  const GSpec H = GSpec::power(-1);
  CHECK(H.sign_class() == -1);
  CHECK_FALSE(H.radial_at_zero().has_value());
  CHECK_THROWS_AS(H.radial(0.0), Error);
  CHECK_THROWS_AS(GSpec::power(0.0), Error);
  const double t = 0.7, hstep = 1e-6;
  CHECK(G.radial_dt(t) == doctest::Approx((G.radial(t + hstep) - G.radial(t - hstep)) / (2 * hstep)).epsilon(1e-8));
}

TEST_CASE("log offset family") {
  const GSpec G = GSpec::log_offset();
  CHECK(G.radial(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(G.radial_dt(1.0) == doctest::Approx(0.5));
  CHECK(G.radial_at_zero().value() == 0.0);
  CHECK(G.sign_class() == 1);
}

TEST_CASE("polar primitives match direct integration") {
  const double h = 0.6, R = 3.5;
  for (const GSpec& G : {GSpec::power(3, 1.0 / 3), GSpec::power(1.5), GSpec::power(-1), GSpec::power(1.0),
                         GSpec::power(0.999999), GSpec::log_offset()}) {
    const double ref = h * simpson_log([&](double r) { return G.radial(r) / (r * r); }, h, R);
    const double ref_dt = h * simpson_log([&](double r) { return G.radial_dt(r) / r; }, h, R);
    CHECK(G.polar_primitive(h, R).value() == doctest::Approx(ref).epsilon(1e-10));
    CHECK(G.polar_primitive_dt(h, R).value() == doctest::Approx(ref_dt).epsilon(1e-10));
  }
  const GSpec C = GSpec::custom({0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
  CHECK_FALSE(C.polar_primitive(h, R).has_value());
}

TEST_CASE("custom G interpolates monotonically through its knots") {
  const std::vector<double> t = {0.0, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> g = {0.0, 0.1, 0.5, 2.0, 3.0};
  const GSpec G = GSpec::custom(t, g);
  for (size_t k = 0; k < t.size(); ++k) CHECK(G.radial(t[k]) == doctest::Approx(g[k]));
  double prev = -1;
  for (double x = 0.01; x < 10; x *= 1.1) {
    const double v = G.radial(x);
    CHECK(v > prev);
    CHECK(G.radial_dt(x) > 0);
    prev = v;
  }
  CHECK(G.sign_class() == 1);
  CHECK(G.radial_at_zero().value() == 0.0);
  CHECK_THROWS_AS(GSpec::custom({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0}), Error);
  const GSpec D = GSpec::custom({0.1, 1.0, 10.0}, {10.0, 1.0, 0.1});
  CHECK(D.sign_class() == -1);
  CHECK(D.radial(1e-3) == doctest::Approx(1000.0).epsilon(1e-8));  // t^-1 tail fitted to the end segment
}

TEST_CASE("direction weights") {
  const DirectionWeight c = DirectionWeight::constant(2.5);
  CHECK(c.sphere_integral(3) == doctest::Approx(10 * M_PI));
  CHECK_THROWS_AS(DirectionWeight::constant(0.0), Error);
  const Directions grid = gen::as_directions(gen::coordinate_atoms(3));
  const Vector vals = (Vector(6) << 1, 1, 2, 2, 3, 3).finished();
  const DirectionWeight w = DirectionWeight::tabulated(grid, vals, 8.0, true);
  gen::Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vector u = gen::direction(rng, 3);
    CHECK(w(u) == w(-u));
    CHECK(w(u) >= 1.0);
    CHECK(w(u) <= 3.0);
  }
  CHECK(w.is_even());
  const Vector odd = (Vector(6) << 1, 2, 2, 2, 3, 3).finished();
  CHECK_THROWS_AS(DirectionWeight::tabulated(grid, odd, 8.0, true), Error);
  const GSpec G = GSpec::power(2, 1.0, w);
  CHECK(g_eval(G, 2.0, Vector::Unit(3, 2)) == doctest::Approx(4.0 * w(Vector::Unit(3, 2))));
}

TEST_CASE("phi from power psi has closed form") {
  const PhiSpec phi = PhiSpec::increasing(PsiSpec::power(2));
  CHECK(phi(3.0) == doctest::Approx(4.5));
  CHECK(phi.derivative(3.0) == doctest::Approx(3.0));
  CHECK(phi.inverse(4.5) == doctest::Approx(3.0));
  const PhiSpec bar = PhiSpec::decreasing(PsiSpec::power(-1));
  CHECK(bar(2.0) == doctest::Approx(0.5));
  CHECK(bar.derivative(2.0) == doctest::Approx(-0.25));
  CHECK(bar.inverse(0.5) == doctest::Approx(2.0));
}

TEST_CASE("divergent phi is rejected") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code([] { PhiSpec::increasing(PsiSpec::one()); }) == ErrorCode::DivergentPhi);
  CHECK(code([] { PhiSpec::increasing(PsiSpec::power(-0.5)); }) == ErrorCode::DivergentPhi);
  CHECK(code([] { PhiSpec::decreasing(PsiSpec::power(0.5)); }) == ErrorCode::DivergentPhi);
}

TEST_CASE("custom psi: phi matches direct integration and inverts") {
  const PsiSpec psi = PsiSpec::custom({0.1, 0.5, 1.0, 2.0, 5.0}, {0.01, 0.3, 1.0, 3.0, 20.0});
  for (const double t : {0.05, 0.3, 1.0, 3.0, 8.0}) CHECK(psi(t) > 0);
  CHECK(psi(1.0) == doctest::Approx(1.0));
  const PhiSpec phi = PhiSpec::increasing(psi);
  for (double t : {0.2, 0.9, 1.7, 4.0}) {
    const double ref = simpson_log([&](double s) { return psi(s) / s; }, 1e-9, t, 200000) +
                       psi(1e-9) / psi.lower_exponent();
    CHECK(phi(t) == doctest::Approx(ref).epsilon(1e-6));
    CHECK(phi.inverse(phi(t)) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("property: phi is strictly increasing and inverse round-trips") {
  gen::Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const double p = gen::uniform(rng, 0.2, 4.0);
    const PhiSpec phi = PhiSpec::increasing(PsiSpec::power(p));
    double prev = 0;
    for (double t = 0.01; t < 100; t *= 1.7) {
      const double v = phi(t);
      CHECK(v > prev);
      CHECK(phi.inverse(v) == doctest::Approx(t).epsilon(1e-12));
      prev = v;
    }
  }
}

TEST_CASE("hypotheses: Minkowski regime examples") {
  const HypothesisReport ok = validate_hypotheses(GSpec::power(2), PsiSpec::power(2), Theorem::T4_3);
  CHECK(ok.passed());
  const HypothesisReport bad = validate_hypotheses(GSpec::power(2), PsiSpec::power(0.5), Theorem::T4_3);
  REQUIRE(bad.first_failure() != nullptr);
  CHECK(bad.first_failure()->name == cond::kPsiOverT);
  const HypothesisReport linear = validate_hypotheses(GSpec::power(2), PsiSpec::power(1.0), Theorem::T4_3);
  CHECK(linear.find(cond::kPsiOverT)->verdict == Verdict::Fail);
  const HypothesisReport sign = validate_hypotheses(GSpec::power(-1), PsiSpec::power(2), Theorem::T4_3);
  CHECK(sign.find(cond::kGtPositive)->verdict == Verdict::Fail);
  CHECK(sign.find(cond::kGContinuousAtZero)->verdict == Verdict::Fail);
}

TEST_CASE("hypotheses: negative regime and phi finiteness") {
  const HypothesisReport ok = validate_hypotheses(GSpec::power(-1), PsiSpec::power(2), Theorem::T4_4);
  CHECK(ok.passed());
  const HypothesisReport one = validate_hypotheses(GSpec::power(-1), PsiSpec::one(), Theorem::T4_4);
  const Condition* c = one.find(cond::kPhiFinite);
  REQUIRE(c != nullptr);
  CHECK(c->verdict == Verdict::Fail);
  CHECK(c->error == ErrorCode::DivergentPhi);
  CHECK(validate_hypotheses(GSpec::power(-1), PsiSpec::power(2), Theorem::T6_4).passed());
  CHECK(validate_hypotheses(GSpec::log_offset(), PsiSpec::power(2), Theorem::T4_4).any_failed());
}

TEST_CASE("hypotheses: general and even theorems") {
  CHECK(validate_hypotheses(GSpec::power(2), PsiSpec::power(2), Theorem::T6_2).passed());
  CHECK(validate_hypotheses(GSpec::power(2), PsiSpec::power(2), Theorem::T7_1).passed());
  CHECK(validate_hypotheses(GSpec::power(-1), PsiSpec::power(2), Theorem::T7_3).passed());
  CHECK(validate_hypotheses(GSpec::power(-1), PsiSpec::power(-1), Theorem::T7_5).passed());
  // T7.1 does not ask for psi(t)/t -> 0.
  CHECK(validate_hypotheses(GSpec::power(2), PsiSpec::power(0.5), Theorem::T7_1).passed());
  const Directions grid = gen::as_directions(gen::coordinate_atoms(3));
  const DirectionWeight odd = DirectionWeight::tabulated(grid, (Vector(6) << 1, 2, 2, 2, 3, 3).finished(), 8.0, false);
  const HypothesisReport h = validate_hypotheses(GSpec::power(2, 1.0, odd), PsiSpec::power(2), Theorem::T7_1);
  CHECK(h.find(cond::kGtEven)->verdict == Verdict::Fail);
}

TEST_CASE("hypotheses: tabulated G blow-up check is heuristic") {
  const GSpec blow = GSpec::custom({1e-3, 1e-2, 1e-1, 1.0, 10.0}, {1e3, 1e2, 10.0, 1.0, 0.1});
  const Condition* c = validate_hypotheses(blow, PsiSpec::power(2), Theorem::T4_4).find(cond::kCondE2);
  REQUIRE(c != nullptr);
  CHECK(c->heuristic);
  CHECK(c->verdict == Verdict::Pass);
  const GSpec flat = GSpec::custom({0.0, 1.0, 10.0}, {5.0, 4.0, 1.0});
  CHECK(validate_hypotheses(flat, PsiSpec::power(2), Theorem::T4_4).find(cond::kCondE2)->verdict == Verdict::Fail);
}

TEST_CASE("theorem names round-trip") {
  for (Theorem t : {Theorem::T4_3, Theorem::T4_4, Theorem::T6_2, Theorem::T6_4, Theorem::T7_1, Theorem::T7_3,
                    Theorem::T7_5})
    CHECK(parse_theorem(to_string(t)) == t);
  CHECK(parse_theorem("T6.4") == Theorem::T6_4);
  CHECK(parse_theorem("T6.4I") == Theorem::T6_4);
  CHECK_THROWS_AS(parse_theorem("T9.9"), Error);
}

TEST_CASE("adaptive Gauss-Kronrod") {
  const auto r = detail::integrate<double>([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  CHECK(r.ok);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-14));
  const auto s = detail::integrate<double>([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10, 0.0, 30);
  CHECK(s.ok);
  CHECK(s.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  const auto f = detail::integrate<double>([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, 1e-12, 0.0, 3);
  CHECK_FALSE(f.ok);
}
