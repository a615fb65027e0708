#include "dualorlicz/solver.hpp"

#include "dualorlicz/detail/counter_rng.hpp"
#include "dualorlicz/detail/icosphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dualorlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kBoundaryNote =
    "iterate reached a support number near zero; a true maximizer has the origin in its interior, "
    "so this indicates a numerical failure rather than a boundary solution";

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Throws unless the hypotheses of `theorem` hold (or cfg.force is set).
void gate(const GSpec& G, const PsiSpec& psi, Theorem theorem, int dim, const SolverConfig& cfg) {
  const HypothesisReport rep = validate_hypotheses(G, psi, theorem, dim, cfg.eps0);
  if (!rep.any_failed() || cfg.force) return;
  const Condition* c = rep.first_failure();
  std::string msg = to_string(theorem) + " requires \"" + c->name + "\"";
  if (c->error) msg += std::string(" (") + to_string(*c->error) + ")";
  if (!c->evidence.empty()) msg += ": " + c->evidence;
  throw Error(ErrorCode::HypothesisViolation, msg);
}

void require_admissible(const DiscreteMeasure& mu) {
  Vector w;
  if (concentrated_on_hemisphere(mu.atoms, &w)) {
    std::ostringstream os;
    os << "measure is concentrated on the closed hemisphere <u, v> <= 0 for v = (" << w.transpose() << ")";
    throw Error(ErrorCode::UnboundedPolytope, os.str());
  }
}

// Tangent component of g with respect to the normal nv.
Vector tangent(const Vector& g, const Vector& nv) {
  const double nn = nv.squaredNorm();
  if (nn == 0.0) return g;
  return g - (g.dot(nv) / nn) * nv;
}

SolveReport solve_impl(ProblemSpec spec, const SolverConfig& cfg, const std::optional<Vector>& start,
                       Theorem theorem) {
  spec.prepare();
  require_admissible(spec.mu);
  gate(spec.G, spec.psi, theorem, spec.mu.dim, cfg);

  const ConstraintSet C = ConstraintSet::make(spec.reduced_weights(), spec.psi);
  const int k = spec.variables();
  const double sigma = spec.mode() == SolveMode::Maximize ? 1.0 : -1.0;
  const bool minimize = sigma < 0;

  Vector x = start ? *start : Vector::Ones(k);
  if (x.size() != k) throw Error(ErrorCode::DegenerateInput, "start vector has the wrong length");
  x = project_to_M(x, C);

  Evaluation ev = objective_and_gradient(x, spec, cfg.quad);
  std::vector<double> trace{ev.value};
  std::string stop = "iteration limit reached";
  bool boundary = false;
  double alpha = -1.0;
  Vector x_prev, d_prev;
  double rel_grad = kInf;
  int it = 0;

  for (; it < cfg.max_iters; ++it) {
    const Vector nv = C.lambda.cwiseProduct(x.unaryExpr([&](double t) { return C.phi.derivative(t); }));
    const Vector d = tangent(sigma * ev.gradient, nv);
    const double gnorm = ev.gradient.norm();
    rel_grad = gnorm > 0 ? d.norm() / gnorm : 0.0;
    if (rel_grad < cfg.gtol) {
      stop = "projected gradient below tolerance";
      break;
    }

    if (alpha < 0) {
      alpha = 0.1 * max_abs(x) / max_abs(d);
    } else {
      const Vector s = x - x_prev;
      const Vector y = d_prev - d;  // change of the descent gradient of -sigma f
      const double sy = s.dot(y);
      alpha = std::abs(sy) > 0 ? std::abs(s.squaredNorm() / sy) : 2.0 * alpha;
    }
    for (int j = 0; j < k; ++j)
      if (d[j] < 0) alpha = std::min(alpha, 0.5 * x[j] / -d[j]);

    const double slope = d.squaredNorm();
    bool accepted = false;
    Vector x_new;
    Evaluation ev_new;
    for (int bt = 0; bt < 60; ++bt, alpha *= cfg.shrink) {
      Vector trial = x + alpha * d;
      if (minimize) trial = trial.cwiseMax(cfg.eps_z);
      trial = project_to_M(trial, C);
      if (!minimize && trial.minCoeff() < cfg.interior_margin) continue;
      if (minimize) trial = trial.cwiseMax(cfg.eps_z);
      Evaluation e = objective_and_gradient(trial, spec, cfg.quad);
      if (sigma * (e.value - ev.value) >= cfg.armijo * alpha * slope) {
        x_new = std::move(trial);
        ev_new = std::move(e);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stop = "line search stalled";
      break;
    }
    x_prev = x;
    d_prev = d;
    const double moved = max_abs(x_new - x);
    x = std::move(x_new);
    ev = std::move(ev_new);
    trace.push_back(ev.value);
    if (!minimize && x.minCoeff() < 10.0 * cfg.interior_margin) {
      boundary = true;
      stop = kBoundaryNote;
      ++it;
      break;
    }
    if (moved <= 1e-15 * max_abs(x)) {
      stop = "step below resolution";
      ++it;
      break;
    }
  }

  SolveReport r = assess_solution(spec, x, cfg);
  r.objective_trace = std::move(trace);
  r.iterations = it;
  r.projected_gradient = rel_grad;
  r.theorem = to_string(theorem);
  if (boundary) {
    r.status = SolveStatus::OriginOnBoundary;
    r.converged = false;
  }
  r.message = stop + (r.message.empty() ? "" : "; " + r.message);
  return r;
}

}  // namespace

Theorem ProblemSpec::theorem() const {
  const bool mx = mode() == SolveMode::Maximize;
  if (even) return mx ? Theorem::T7_1 : Theorem::T7_3;
  return mx ? Theorem::T4_3 : Theorem::T4_4;
}

void ProblemSpec::prepare() {
  mu.validate();
  const int m = mu.size();
  rep_.clear();
  partner_.clear();
  if (!even) {
    for (int i = 0; i < m; ++i) {
      rep_.push_back(i);
      partner_.push_back(-1);
    }
    return;
  }
  const std::vector<int> anti = antipodes(mu.atoms);
  for (int i = 0; i < m; ++i) {
    if (anti[i] < 0)
      throw Error(ErrorCode::DegenerateInput, "even mode needs every atom paired with its antipode");
    if (std::abs(mu.weights[i] - mu.weights[anti[i]]) > 1e-12 * mu.weights[i])
      throw Error(ErrorCode::DegenerateInput, "even mode needs equal weights on antipodal atoms");
    if (anti[i] > i) {
      rep_.push_back(i);
      partner_.push_back(anti[i]);
    }
  }
}

int ProblemSpec::variables() const { return static_cast<int>(rep_.size()); }

const std::vector<int>& ProblemSpec::representatives() const { return rep_; }
const std::vector<int>& ProblemSpec::partners() const { return partner_; }

Vector ProblemSpec::expand(const Vector& x) const {
  Vector z(mu.size());
  for (size_t k = 0; k < rep_.size(); ++k) {
    z[rep_[k]] = x[k];
    if (partner_[k] >= 0) z[partner_[k]] = x[k];
  }
  return z;
}

Vector ProblemSpec::reduced_weights() const {
  Vector w(variables());
  for (size_t k = 0; k < rep_.size(); ++k)
    w[k] = mu.weights[rep_[k]] + (partner_[k] >= 0 ? mu.weights[partner_[k]] : 0.0);
  return w;
}

ConstraintSet ConstraintSet::make(const Vector& lambda, const PsiSpec& psi) {
  ConstraintSet c{lambda, PhiSpec::increasing(psi), 0.0};
  c.target = c.phi(1.0) * lambda.sum();
  return c;
}

double ConstraintSet::value(const Vector& z) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) s += lambda[i] * phi(z[i]);
  return s;
}

bool ConstraintSet::contains(const Vector& z, double rel) const {
  return (z.array() > 0).all() && std::abs(value(z) - target) <= rel * target;
}

Vector project_to_M(const Vector& z, const ConstraintSet& C) {
  if (z.size() != C.lambda.size()) throw Error(ErrorCode::DegenerateInput, "dimension mismatch");
  if ((z.array() < 0).any() || !z.allFinite())
    throw Error(ErrorCode::DomainError, "support numbers must be finite and nonnegative");
  if (z.maxCoeff() <= 0) throw Error(ErrorCode::ZeroVector, "cannot rescale the zero vector onto M");
  const double v1 = C.value(z);
  if (std::abs(v1 - C.target) <= 1e-15 * C.target) return z;

  double lo = 1.0, hi = 1.0;
  if (v1 < C.target) {
    while (C.value(hi * z) < C.target) {
      lo = hi;
      hi *= 2.0;
    }
  } else {
    while (C.value(lo * z) > C.target) {
      hi = lo;
      lo *= 0.5;
    }
  }
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (C.value(mid * z) < C.target ? lo : hi) = mid;
  }
  const double flo = std::abs(C.value(lo * z) - C.target), fhi = std::abs(C.value(hi * z) - C.target);
  return (flo <= fhi ? lo : hi) * z;
}

PolytopeMesh polytope_for(const Vector& x, const ProblemSpec& spec) {
  const Vector z = spec.expand(x);
  return spec.even ? build_symmetric_polytope(spec.mu.atoms, z) : build_polytope(spec.mu.atoms, z);
}

Evaluation objective_and_gradient(const Vector& x, const ProblemSpec& spec, const QuadratureOptions& quad) {
  Evaluation e;
  e.mesh = polytope_for(x, spec);
  e.value = dual_volume(e.mesh, spec.G, quad);
  e.curvature = curvature_vector(e.mesh, spec.G, quad);
  const int n = spec.mu.dim;
  auto component = [&](int i) {
    const Facet& f = e.mesh.facets[i];
    return (f.active && f.h > e.mesh.tol) ? n * e.curvature.c[i] / f.h : 0.0;
  };
  e.gradient.resize(spec.variables());
  for (int k = 0; k < spec.variables(); ++k) {
    e.gradient[k] = component(spec.representatives()[k]);
    if (spec.partners()[k] >= 0) e.gradient[k] += component(spec.partners()[k]);
  }
  return e;
}

double luxemburg_norm(const Vector& h, const Vector& weights, const PhiSpec& phi) {
  const double total = weights.sum();
  const double p1 = phi(1.0);
  auto excess = [&](double lam) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) s += weights[i] * phi(h[i] / lam);
    return s / (p1 * total) - 1.0;
  };
  // excess is decreasing in lambda for increasing phi, increasing for phibar.
  const double dir = phi.kind() == PhiKind::Increasing ? 1.0 : -1.0;
  double lo = 1.0, hi = 1.0;
  while (dir * excess(hi) > 0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::DomainError, "Luxemburg norm bracket failed");
  }
  while (dir * excess(lo) < 0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw Error(ErrorCode::DomainError, "Luxemburg norm bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (dir * excess(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double recover_tau(const PolytopeMesh& mesh, const ProblemSpec& spec, const QuadratureOptions& quad) {
  const CurvatureVector c = curvature_vector(mesh, spec.G, spec.psi, quad);
  if (c.total == 0.0 || !std::isfinite(c.total))
    throw Error(ErrorCode::DegenerateTotal, "total curvature is zero or not finite");
  return spec.mu.total() / c.total;
}

double recover_tau_dual(const PolytopeMesh& mesh, const ProblemSpec& spec, const QuadratureOptions& quad) {
  const CurvatureVector c = curvature_vector(mesh, spec.G, quad);
  if (c.total == 0.0 || !std::isfinite(c.total))
    throw Error(ErrorCode::DegenerateTotal, "total curvature is zero or not finite");
  double num = 0.0;
  for (int i = 0; i < spec.mu.size(); ++i) num += spec.mu.weights[i] * spec.psi(mesh.facets[i].h);
  return num / c.total;
}

Vector kkt_residual(const PolytopeMesh& mesh, double tau, const ProblemSpec& spec, const QuadratureOptions& quad) {
  const CurvatureVector c = curvature_vector(mesh, spec.G, quad);
  Vector r(spec.mu.size());
  for (int i = 0; i < spec.mu.size(); ++i) {
    const double h = mesh.facets[i].h, z = mesh.z[i];
    const double lhs = h > 0 ? tau * c.c[i] / h : 0.0;
    r[i] = std::abs(lhs - spec.mu.weights[i] * spec.psi(z) / z);
  }
  return r;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::NotConverged: return "NotConverged";
    case SolveStatus::OriginOnBoundary: return "OriginOnBoundary";
  }
  return "?";
}

SolveReport assess_solution(const ProblemSpec& spec_in, const Vector& x, const SolverConfig& cfg) {
  ProblemSpec spec = spec_in;
  if (spec.variables() == 0) spec.prepare();
  SolveReport r;
  r.mode = spec.mode() == SolveMode::Maximize ? "maximize" : "minimize";
  r.theorem = to_string(spec.theorem());
  r.mesh = polytope_for(x, spec);
  r.z = r.mesh.z;
  const int m = spec.mu.size();
  const Vector& lam = spec.mu.weights;

  if (!r.mesh.origin_interior()) {
    r.status = SolveStatus::OriginOnBoundary;
    r.message = kBoundaryNote;
    return r;
  }
  r.objective = dual_volume(r.mesh, spec.G, cfg.quad);
  const CurvatureVector cp = curvature_vector(r.mesh, spec.G, spec.psi, cfg.quad);
  const CurvatureVector cg = curvature_vector(r.mesh, spec.G, cfg.quad);
  r.curvature = cp.c;
  r.curvature_g = cg.c;
  if (cp.total == 0.0 || cg.total == 0.0) throw Error(ErrorCode::DegenerateTotal, "total curvature is zero");
  r.tau = lam.sum() / cp.total;
  double num = 0.0;
  for (int i = 0; i < m; ++i) num += lam[i] * spec.psi(r.mesh.facets[i].h);
  r.tau_dual = num / cg.total;

  r.residuals = lam - r.tau * cp.c;
  r.max_rel_residual = r.residuals.cwiseQuotient(lam).cwiseAbs().maxCoeff();
  r.kkt.resize(m);
  for (int i = 0; i < m; ++i) {
    const double h = r.mesh.facets[i].h, z = r.z[i];
    r.kkt[i] = std::abs((h > 0 ? r.tau * cg.c[i] / h : 0.0) - lam[i] * spec.psi(z) / z);
  }

  Vector h(m);
  for (int i = 0; i < m; ++i) h[i] = r.mesh.facets[i].h;
  try {
    const PhiSpec phi = PhiSpec::increasing(spec.psi);
    r.norm_residual = std::abs(luxemburg_norm(h, lam, phi) - 1.0);
    const ConstraintSet C = ConstraintSet::make(lam, spec.psi);
    r.constraint_residual = std::abs(C.value(r.z) - C.target) / C.target;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DivergentPhi) throw;
    r.norm_residual = kInf;
    r.constraint_residual = kInf;
  }

  std::vector<std::string> why;
  const double expected_sign = spec.mode() == SolveMode::Maximize ? 1.0 : -1.0;
  if (!(r.tau * expected_sign > 0)) why.push_back("tau has the wrong sign");
  if (!(r.max_rel_residual <= cfg.rtol)) why.push_back("residual above rtol");
  if (!(r.norm_residual <= 1e-8)) why.push_back("norm constraint violated");
  if (spec.mode() == SolveMode::Minimize && !(r.z.minCoeff() > 10.0 * cfg.eps_z))
    why.push_back("support number at the interior safeguard");
  for (int i = 0; i < m; ++i)
    if (!r.mesh.facets[i].active) {
      why.push_back("inactive facet for a positive weight");
      break;
    }
  r.converged = why.empty();
  r.status = r.converged ? SolveStatus::Converged : SolveStatus::NotConverged;
  for (size_t i = 0; i < why.size(); ++i) r.message += (i ? ", " : "") + why[i];
  return r;
}

SolveReport solve_discrete(ProblemSpec spec, const SolverConfig& cfg, const std::optional<Vector>& start) {
  const Theorem t = spec.theorem();
  return solve_impl(std::move(spec), cfg, start, t);
}

MultistartSpread uniqueness_probe(ProblemSpec spec, int starts, std::uint64_t seed, const SolverConfig& cfg) {
  spec.prepare();
  const int k = spec.variables();
  const detail::CounterRng rng(seed);
  MultistartSpread out;
  out.starts = starts;
  std::vector<PolytopeMesh> meshes;
  for (int s = 0; s < starts; ++s) {
    Vector x0(k);
    for (int j = 0; j < k; ++j) x0[j] = 0.5 + rng.uniform(static_cast<std::uint64_t>(s) * k + j);
    const SolveReport r = solve_discrete(spec, cfg, x0);
    out.converged.push_back(r.converged);
    out.taus.push_back(r.tau);
    meshes.push_back(r.mesh);
  }
  for (int a = 0; a < starts; ++a)
    for (int b = a + 1; b < starts; ++b)
      out.hausdorff = std::max(out.hausdorff, hausdorff_distance(meshes[a], meshes[b]).value);
  if (!out.taus.empty()) {
    const auto [lo, hi] = std::minmax_element(out.taus.begin(), out.taus.end());
    out.tau = *hi - *lo;
  }
  return out;
}

ApproxResult solve_general(const DensityMeasure& nu, const GSpec& G, const PsiSpec& psi,
                           const std::vector<int>& levels, const SolverConfig& cfg) {
  nu.validate();
  const bool mx = G.sign_class() > 0;
  const Theorem theorem = nu.even ? (mx ? Theorem::T7_1 : Theorem::T7_3) : (mx ? Theorem::T6_2 : Theorem::T6_4);
  gate(G, psi, theorem, nu.dim, cfg);
  SolverConfig inner = cfg;
  inner.force = true;  // gated above against the general-measure theorem

  const PhiSpec phi = PhiSpec::increasing(psi);
  ApproxResult out;
  DiscreteMeasure prev_mu;
  for (int level : levels) {
    ApproxLevel L;
    L.level = level;
    const DiscreteMeasure mu = discretize(nu, level);
    L.atoms = mu.size();
    L.delta = hemisphere_delta(mu);
    L.bound = (2.0 / L.delta) * phi.inverse(2.0 * phi(1.0) / L.delta);
    ProblemSpec spec{mu, G, psi, nu.even};
    L.report = solve_impl(spec, inner, std::nullopt, theorem);
    for (const Vector& v : L.report.mesh.vertices) L.max_radius = std::max(L.max_radius, v.norm());
    L.within_bound = L.max_radius <= L.bound * (1.0 + 1e-12);
    if (!out.levels.empty()) {
      L.hausdorff_to_previous = hausdorff_distance(L.report.mesh, out.levels.back().report.mesh).value;
      L.weak_to_previous = weak_distance(mu, prev_mu);
    }
    prev_mu = mu;
    out.levels.push_back(std::move(L));
  }
  out.all_within_bound = std::all_of(out.levels.begin(), out.levels.end(), [](const ApproxLevel& l) { return l.within_bound; });
  out.all_converged = std::all_of(out.levels.begin(), out.levels.end(), [](const ApproxLevel& l) { return l.report.converged; });
  out.hausdorff_decreasing = out.levels.size() >= 3;
  for (size_t j = 2; j < out.levels.size(); ++j)
    if (!(out.levels[j].hausdorff_to_previous < out.levels[j - 1].hausdorff_to_previous)) out.hausdorff_decreasing = false;
  return out;
}

CondnaResult condna_check(const GSpec& G, const PsiSpec& psi, int dim) {
  std::vector<Vector> dirs;
  if (dim == 3) {
    const detail::Icosphere ico = detail::make_icosphere(0);
    for (const auto& v : ico.vertices) dirs.push_back(v);
  } else {
    for (int k = 0; k < 8; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 8.0;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
  }
  std::vector<double> grid;
  for (int k = 0; k < 9; ++k) grid.push_back(std::pow(10.0, -2.0 + 0.5 * k));

  CondnaResult res;
  bool equality = false;
  for (int li = 1; li <= 19; ++li) {
    const double lam = 0.05 * li;
    for (double s : grid)
      for (double t : grid)
        for (const Vector& u : dirs) {
          ++res.checked;
          // Compare magnitudes: for G_t < 0 the inequality reverses.
          const double lhs = std::abs(g_t_eval(G, t, u) / psi(s));
          const double rhs = std::abs(lam * g_t_eval(G, lam * t, u) / psi(lam * s));
          if (std::abs(lhs - rhs) <= 1e-12 * std::max(lhs, rhs)) {
            equality = true;
          } else if (lhs > rhs && !res.violation) {
            res.violation = true;
            res.lambda = lam;
            res.s = s;
            res.t = t;
            res.u = u;
          }
        }
  }
  if (res.violation) {
    res.verdict = Verdict::Fail;
    std::ostringstream os;
    os << "inequality holds with lambda = " << res.lambda << " < 1 at s = " << res.s << ", t = " << res.t;
    res.note = os.str();
  } else if (equality) {
    res.verdict = Verdict::Indeterminate;
    res.note = "equality attained on the grid";
  } else {
    res.verdict = Verdict::Pass;
    res.note = "no lambda < 1 satisfies the inequality on the grid";
  }
  return res;
}

double limit_a0(const GSpec& G, int dim, bool* heuristic) {
  if (heuristic) *heuristic = false;
  if (G.sign_class() > 0) throw Error(ErrorCode::DomainError, "int G(t,u) du diverges as t grows for G_t > 0");
  if (G.family() == GFamily::Power) return 0.0;  // q < 0
  if (heuristic) *heuristic = true;
  const double W = G.weight().sphere_integral(dim);
  const double a = G.upper_exponent();
  const double t1 = 1e8, t2 = 1e9;
  const double g1 = G.radial(t1), g2 = G.radial(t2);
  if (a < 0) return 0.0;
  // Geometric-tail extrapolation from two far samples.
  const double r = g2 - g1;
  return W * (std::abs(r) < 1e-15 * std::abs(g2) ? g2 : g2 + r / 9.0);
}

SolveReport solve_even_decreasing_psi(ProblemSpec spec, const SolverConfig& cfg) {
  spec.even = true;
  spec.prepare();
  require_admissible(spec.mu);
  {
    Eigen::JacobiSVD<Matrix> svd(spec.mu.atoms);
    if (svd.rank() < spec.mu.dim)
      throw Error(ErrorCode::InadmissibleDensity, "atoms lie on a great subsphere");
  }
  if (spec.G.sign_class() > 0) throw Error(ErrorCode::HypothesisViolation, "T7.5 requires \"" + cond::kGtNegative + "\"");
  gate(spec.G, spec.psi, Theorem::T7_5, spec.mu.dim, cfg);

  const PhiSpec phibar = PhiSpec::decreasing(spec.psi);
  bool heuristic = false;
  const double a0 = limit_a0(spec.G, spec.mu.dim, &heuristic);
  const double total = spec.mu.total();
  const double level = total + a0;
  const Vector lam = spec.reduced_weights();
  const int k = spec.variables();
  const int n = spec.mu.dim;

  auto volume = [&](const Vector& x) { return dual_volume(polytope_for(x, spec), spec.G, cfg.quad); };
  auto retract = [&](const Vector& x) -> Vector {
    const double v = volume(x);
    if (spec.G.family() == GFamily::Power) {
      Vector y = std::pow(level / v, 1.0 / spec.G.q()) * x;
      return y;
    }
    // V_G(P_e(s x)) is decreasing in s for G_t < 0.
    double lo = 1.0, hi = 1.0;
    if (v > level) {
      while (volume(hi * x) > level) hi *= 2.0;
    } else {
      while (volume(lo * x) < level) lo *= 0.5;
    }
    while (hi - lo > 1e-13 * hi) {
      const double mid = 0.5 * (lo + hi);
      (volume(mid * x) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) * x;
  };
  auto objective = [&](const Vector& x) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += lam[j] * phibar(x[j]);
    return s / level;
  };
  auto grad_f = [&](const Vector& x) {
    Vector g(k);
    for (int j = 0; j < k; ++j) g[j] = lam[j] * phibar.derivative(x[j]) / level;
    return g;
  };
  auto normal = [&](const Vector& x) {
    const PolytopeMesh mesh = polytope_for(x, spec);
    const CurvatureVector c = curvature_vector(mesh, spec.G, cfg.quad);
    Vector g(k);
    for (int j = 0; j < k; ++j) {
      const int a = spec.representatives()[j], b = spec.partners()[j];
      g[j] = n * (c.c[a] / mesh.facets[a].h + c.c[b] / mesh.facets[b].h);
    }
    return g;
  };

  Vector x = retract(Vector::Ones(k));
  double f = objective(x);
  std::vector<double> trace{f};
  std::string stop = "iteration limit reached";
  double alpha = -1.0, rel_grad = kInf;
  Vector x_prev, d_prev;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const Vector g = grad_f(x);
    const Vector d = tangent(g, normal(x));
    rel_grad = d.norm() / g.norm();
    if (rel_grad < cfg.gtol) {
      stop = "projected gradient below tolerance";
      break;
    }
    if (alpha < 0) {
      alpha = 0.1 * max_abs(x) / max_abs(d);
    } else {
      const Vector s = x - x_prev, y = d_prev - d;
      const double sy = s.dot(y);
      alpha = std::abs(sy) > 0 ? std::abs(s.squaredNorm() / sy) : 2.0 * alpha;
    }
    for (int j = 0; j < k; ++j)
      if (d[j] < 0) alpha = std::min(alpha, 0.5 * x[j] / -d[j]);
    bool accepted = false;
    Vector x_new;
    double f_new = 0.0;
    for (int bt = 0; bt < 60; ++bt, alpha *= cfg.shrink) {
      const Vector trial = retract((x + alpha * d).cwiseMax(cfg.eps_z));
      const double ft = objective(trial);
      if (ft - f >= cfg.armijo * alpha * d.squaredNorm()) {
        x_new = trial;
        f_new = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stop = "line search stalled";
      break;
    }
    const double moved = max_abs(x_new - x);
    x_prev = x;
    d_prev = d;
    x = x_new;
    f = f_new;
    trace.push_back(f);
    if (moved <= 1e-15 * max_abs(x)) {
      stop = "step below resolution";
      ++it;
      break;
    }
  }

  SolveReport r;
  r.experimental = true;
  r.mode = "maximize";
  r.theorem = to_string(Theorem::T7_5);
  r.mesh = polytope_for(x, spec);
  r.z = r.mesh.z;
  r.objective = f;
  r.objective_trace = std::move(trace);
  r.iterations = it;
  r.projected_gradient = rel_grad;
  const CurvatureVector cp = curvature_vector(r.mesh, spec.G, spec.psi, cfg.quad);
  const CurvatureVector cg = curvature_vector(r.mesh, spec.G, cfg.quad);
  r.curvature = cp.c;
  r.curvature_g = cg.c;
  r.tau = total / cp.total;
  double num = 0.0;
  for (int i = 0; i < spec.mu.size(); ++i) num += spec.mu.weights[i] * spec.psi(r.mesh.facets[i].h);
  r.tau_dual = num / cg.total;
  // Residual of mu / mu(S) = C / C(S), relative to the target atom.
  r.residuals.resize(spec.mu.size());
  r.max_rel_residual = 0.0;
  for (int i = 0; i < spec.mu.size(); ++i) {
    const double target = spec.mu.weights[i] / total;
    r.residuals[i] = target - cp.c[i] / cp.total;
    r.max_rel_residual = std::max(r.max_rel_residual, std::abs(r.residuals[i]) / target);
  }
  r.constraint_residual = std::abs(dual_volume(r.mesh, spec.G, cfg.quad) - level) / level;
  r.converged = r.max_rel_residual <= cfg.rtol && r.constraint_residual <= 1e-10;
  r.status = r.converged ? SolveStatus::Converged : SolveStatus::NotConverged;
  r.message = stop + (heuristic ? "; a0 extrapolated (heuristic)" : "");
  return r;
}

}  // namespace dualorlicz
