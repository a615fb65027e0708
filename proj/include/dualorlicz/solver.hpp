#pragma once

#include "dualorlicz/functionals.hpp"
#include "dualorlicz/measures.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dualorlicz {

struct SolverConfig {
  double gtol = 1e-8;             // relative projected-gradient norm ||g_T|| / ||g||
  double rtol = 1e-3;             // max |lambda_i - tau c_i| / lambda_i accepted as converged
  int max_iters = 5000;
  double interior_margin = 1e-7;  // maximize mode keeps min z_i above this
  std::uint64_t seed = 0;
  double eps_z = 1e-6;            // minimize mode clamp
  double eps0 = 0.5;              // cap half-width used by the blow-up hypothesis check
  double armijo = 1e-4;
  double shrink = 0.5;
  bool force = false;             // run even if a hypothesis check fails
  QuadratureOptions quad;
};

enum class SolveMode { Maximize, Minimize };

struct ProblemSpec {
  DiscreteMeasure mu;
  GSpec G = GSpec::power(1.0);
  PsiSpec psi = PsiSpec::one();
  bool even = false;

  SolveMode mode() const { return G.sign_class() > 0 ? SolveMode::Maximize : SolveMode::Minimize; }
  /// Theorem whose hypotheses gate solve_discrete for this (mode, even) combination.
  Theorem theorem() const;

  /// Solver variables: one per atom, or one per antipodal pair in even mode.
  int variables() const;
  Vector expand(const Vector& x) const;
  /// Reduced constraint weights (pair weights are summed in even mode).
  Vector reduced_weights() const;
  /// Representative atom of each reduced variable and its antipode (-1 outside even mode).
  const std::vector<int>& representatives() const;
  const std::vector<int>& partners() const;

  void prepare();  // computes the pairing; called by the solver entry points

  // Filled by prepare().
  std::vector<int> rep_ = {}, partner_ = {};
};

/// M = {z : sum lambda_i phi(z_i) = phi(1) sum lambda_i}.
struct ConstraintSet {
  Vector lambda;
  PhiSpec phi;
  double target = 0.0;

  static ConstraintSet make(const Vector& lambda, const PsiSpec& psi);
  double value(const Vector& z) const;
  bool contains(const Vector& z, double rel = 1e-12) const;
};

/// s z with sum lambda_i phi(s z_i) = target, s found by bisection to 1e-13 relative.
Vector project_to_M(const Vector& z, const ConstraintSet& C);

struct Evaluation {
  double value = 0.0;
  Vector gradient;            // in solver variables
  PolytopeMesh mesh;
  CurvatureVector curvature;  // psi = 1, full atom indexing
};

/// V_G(P(z)) and its gradient n c_i / h_i (2n c_i / h_i per pair in even mode).
Evaluation objective_and_gradient(const Vector& x, const ProblemSpec& spec, const QuadratureOptions& quad = {});

/// The polytope of the solver variables x (symmetric construction in even mode).
PolytopeMesh polytope_for(const Vector& x, const ProblemSpec& spec);

/// ||h||_{phi,mu}: the lambda > 0 with (1/(phi(1) mu(S))) sum mu_i phi(h_i / lambda) = 1, by bisection.
double luxemburg_norm(const Vector& h, const Vector& weights, const PhiSpec& phi);

/// tau = mu(S) / C_{G,psi}(P, S).
double recover_tau(const PolytopeMesh& mesh, const ProblemSpec& spec, const QuadratureOptions& quad = {});
/// tau = (sum lambda_i psi(h_i)) / C_G(P, S); agrees with recover_tau at a solution.
double recover_tau_dual(const PolytopeMesh& mesh, const ProblemSpec& spec, const QuadratureOptions& quad = {});

/// |tau c_i(psi = 1) / h_i - lambda_i psi(z_i) / z_i| per atom.
Vector kkt_residual(const PolytopeMesh& mesh, double tau, const ProblemSpec& spec, const QuadratureOptions& quad = {});

enum class SolveStatus { Converged, NotConverged, OriginOnBoundary };
std::string to_string(SolveStatus s);

struct MultistartSpread {
  int starts = 0;
  double hausdorff = 0.0;  // max pairwise
  double tau = 0.0;        // max - min
  std::vector<bool> converged;
  std::vector<double> taus;
};

struct SolveReport {
  Vector z;                // full support numbers
  PolytopeMesh mesh;
  double tau = 0.0;
  double tau_dual = 0.0;
  Vector curvature;        // C_{G,psi}(P, {u_i})
  Vector curvature_g;      // C_G(P, {u_i}) (psi = 1)
  Vector residuals;        // lambda_i - tau c_i
  double max_rel_residual = 0.0;
  double norm_residual = 0.0;
  double constraint_residual = 0.0;
  Vector kkt;
  std::vector<double> objective_trace;
  double objective = 0.0;
  double projected_gradient = 0.0;  // final ||g_T|| / ||g||
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::NotConverged;
  std::string mode;
  std::string theorem;
  std::string message;
  bool experimental = false;
  std::optional<MultistartSpread> spread;
};

/// Projected gradient ascent (maximize) or descent (minimize) on M with radial retraction.
SolveReport solve_discrete(ProblemSpec spec, const SolverConfig& cfg = {},
                           const std::optional<Vector>& start = std::nullopt);

/// Fills tau, residuals, norm and KKT diagnostics for a given polytope; no optimization.
SolveReport assess_solution(const ProblemSpec& spec, const Vector& x, const SolverConfig& cfg = {});

MultistartSpread uniqueness_probe(ProblemSpec spec, int starts, std::uint64_t seed, const SolverConfig& cfg = {});

struct ApproxLevel {
  int level = 0;
  int atoms = 0;
  double delta = 0.0;
  double bound = 0.0;       // R from the a-priori estimate
  double max_radius = 0.0;  // max vertex norm of the solution
  bool within_bound = false;
  double hausdorff_to_previous = -1.0;
  double weak_to_previous = -1.0;
  SolveReport report;
};

struct ApproxResult {
  std::vector<ApproxLevel> levels;
  bool hausdorff_decreasing = false;
  bool all_within_bound = false;
  bool all_converged = false;
};

ApproxResult solve_general(const DensityMeasure& nu, const GSpec& G, const PsiSpec& psi,
                           const std::vector<int>& levels, const SolverConfig& cfg = {});

struct CondnaResult {
  Verdict verdict = Verdict::Indeterminate;  // Pass: consistent on the grid
  bool violation = false;
  double lambda = 0.0, s = 0.0, t = 0.0;
  Vector u;
  int checked = 0;
  std::string note;
};

/// Grid probe for pairs (lambda < 1, s, t, u) satisfying the sign-appropriate inequality
/// G_t(t,u)/psi(s) >= lambda G_t(lambda t,u)/psi(lambda s) (reversed for G_t < 0).
CondnaResult condna_check(const GSpec& G, const PsiSpec& psi, int dim = 3);

/// Experimental even solver for decreasing phibar: maximizes sum lambda_i phibar(z_i) / (mu(S) + a0)
/// on the level set V_G(P_e(z)) = mu(S) + a0.
SolveReport solve_even_decreasing_psi(ProblemSpec spec, const SolverConfig& cfg = {});

/// a0 = lim_{t -> inf} int_S G(t,u) du (closed form for powers, extrapolated otherwise).
double limit_a0(const GSpec& G, int dim, bool* heuristic = nullptr);

}  // namespace dualorlicz
