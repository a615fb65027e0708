#include "dualorlicz/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dualorlicz;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kIo = 1, kFailed = 2, kHypothesis = 3 };

struct Options {
  std::string measure, polytope, config, out, mesh_out, levels = "1,2,3,4", theorem;
  double rtol = -1.0;
  std::uint64_t seed = 0;
  bool force = false, phibar = false;
  int starts = 0, dim = 3, index = -1;
};

RunConfig load_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : parse_config(read_file(o.config));
  cfg.solver.seed = o.seed ? o.seed : cfg.solver.seed;
  if (o.rtol > 0) cfg.solver.rtol = o.rtol;
  if (o.force) cfg.solver.force = true;
  return cfg;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  f << j.dump(2) << "\n";
}

void write_mesh(const PolytopeMesh& mesh, const std::string& path) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  write_off(f, mesh);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_solve(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = load_config(o);
  const DiscreteMeasure mu = parse_measure(read_file(o.measure));
  ProblemSpec spec{mu, cfg.G, cfg.psi, mu.even};

  RunReport rep;
  rep.command = "solve";
  rep.measure_digest = measure_digest(mu);
  rep.g_config = cfg.G.describe();
  rep.psi_config = cfg.psi.describe();
  const Theorem th = o.phibar ? Theorem::T7_5 : spec.theorem();
  rep.hypotheses = validate_hypotheses(cfg.G, cfg.psi, th, mu.dim, cfg.solver.eps0);
  if (rep.hypotheses->any_failed()) {
    const Condition* c = rep.hypotheses->first_failure();
    std::cerr << "hypothesis check failed for " << to_string(th) << ": " << c->name;
    if (c->error) std::cerr << " (" << to_string(*c->error) << ")";
    std::cerr << (cfg.solver.force ? "; continuing because of --force\n" : "\n");
    if (!cfg.solver.force) {
      rep.wall_time_s = seconds_since(t0);
      if (!o.out.empty()) emit(to_json(rep), o.out);
      return kHypothesis;
    }
  }

  SolveReport r = o.phibar ? solve_even_decreasing_psi(spec, cfg.solver) : solve_discrete(spec, cfg.solver);
  if (o.starts > 1 && !o.phibar) r.spread = uniqueness_probe(spec, o.starts, cfg.solver.seed, cfg.solver);
  rep.solve = r;
  rep.wall_time_s = seconds_since(t0);
  if (!o.out.empty()) emit(to_json(rep), o.out);
  write_mesh(r.mesh, o.mesh_out);

  std::cout << "status " << to_string(r.status) << "  theorem " << r.theorem << "  iterations " << r.iterations
            << "\ntau " << json(r.tau).dump() << "  max_rel_residual " << json(r.max_rel_residual).dump()
            << "  norm_residual " << json(r.norm_residual).dump() << "\n";
  if (!r.converged) std::cerr << "not converged: " << r.message << "\n";
  return r.converged ? kOk : kFailed;
}

int cmd_evaluate(const Options& o) {
  const RunConfig cfg = load_config(o);
  const PolytopeInput p = parse_polytope(read_file(o.polytope));
  const PolytopeMesh mesh = build_polytope(p.normals, p.z);
  const CurvatureVector c = curvature_vector(mesh, cfg.G, cfg.psi, cfg.solver.quad);
  json j{{"G", cfg.G.describe()},
         {"psi", cfg.psi.describe()},
         {"dual_volume", dual_volume(mesh, cfg.G, cfg.solver.quad)},
         {"volume", mesh.volume},
         {"curvature", std::vector<double>(c.c.data(), c.c.data() + c.c.size())},
         {"curvature_total", c.total},
         {"quadrature_error", std::vector<double>(c.error.data(), c.error.data() + c.error.size())}};
  emit(j, o.out);
  write_mesh(mesh, o.mesh_out);
  return kOk;
}

int cmd_verify(const Options& o) {
  const RunConfig cfg = load_config(o);
  const DiscreteMeasure mu = parse_measure(read_file(o.measure));
  const PolytopeInput p = parse_polytope(read_file(o.polytope));
  if (p.normals.cols() != mu.size() || !p.normals.isApprox(mu.atoms, 1e-12))
    throw Error(ErrorCode::ParseError, "polytope normals must equal the measure atoms, in order");
  const PolytopeMesh mesh = build_polytope(p.normals, p.z);
  ProblemSpec spec{mu, cfg.G, cfg.psi, false};
  const double tau = recover_tau(mesh, spec, cfg.solver.quad);
  const CurvatureVector c = curvature_vector(mesh, cfg.G, cfg.psi, cfg.solver.quad);
  double worst = 0.0;
  std::cout << "tau " << json(tau).dump() << "\n  i  lambda  tau*c  rel_residual\n";
  for (int i = 0; i < mu.size(); ++i) {
    const double rel = std::abs(mu.weights[i] - tau * c.c[i]) / mu.weights[i];
    worst = std::max(worst, rel);
    std::printf("%3d  %.10g  %.10g  %.3e\n", i, mu.weights[i], tau * c.c[i], rel);
  }
  const double rtol = o.rtol > 0 ? o.rtol : cfg.solver.rtol;
  std::cout << "max_rel_residual " << json(worst).dump() << (worst <= rtol ? "  PASS" : "  FAIL") << "\n";
  return worst <= rtol ? kOk : kFailed;
}

int cmd_gradcheck(const Options& o) {
  const RunConfig cfg = load_config(o);
  const PolytopeInput p = parse_polytope(read_file(o.polytope));
  const double rtol = o.rtol > 0 ? o.rtol : 1e-4;
  json rows = json::array();
  bool ok = true;
  for (int i = 0; i < p.z.size(); ++i) {
    if (o.index >= 0 && i != o.index) continue;
    const GradientCheck g = check_gradient(p.normals, p.z, cfg.G, i, cfg.solver.quad);
    ok = ok && g.rel_err < rtol;
    rows.push_back({{"index", i}, {"analytic", g.analytic}, {"numeric", g.numeric}, {"rel_err", g.rel_err}});
  }
  emit(json{{"G", cfg.G.describe()}, {"gradient", rows}, {"pass", ok}}, o.out);
  return ok ? kOk : kFailed;
}

int cmd_hypotheses(const Options& o) {
  const RunConfig cfg = load_config(o);
  json all = json::array();
  bool ok = true;
  std::vector<Theorem> ths;
  if (!o.theorem.empty()) {
    ths.push_back(parse_theorem(o.theorem));
  } else {
    // Only the results for the sign class of G_t apply.
    if (cfg.G.sign_class() > 0)
      ths = {Theorem::T4_3, Theorem::T6_2, Theorem::T7_1};
    else
      ths = {Theorem::T4_4, Theorem::T6_4, Theorem::T7_3, Theorem::T7_5};
  }
  for (Theorem t : ths) {
    const HypothesisReport h = validate_hypotheses(cfg.G, cfg.psi, t, o.dim, cfg.solver.eps0);
    ok = ok && !h.any_failed();
    all.push_back(to_json(h));
  }
  const CondnaResult cn = condna_check(cfg.G, cfg.psi, o.dim);
  json j{{"G", cfg.G.describe()}, {"psi", cfg.psi.describe()}, {"reports", all},
         {"uniqueness_condition_probe", {{"verdict", to_string(cn.verdict)}, {"note", cn.note}, {"checked", cn.checked}}}};
  emit(j, o.out);
  return ok ? kOk : kHypothesis;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      for (int l = a; l <= b; ++l) out.push_back(l);
    } else {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "--levels expects \"a..b\" or a comma list");
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "--levels is empty");
  return out;
}

int cmd_approx(const Options& o) {
  const RunConfig cfg = load_config(o);
  const DensityMeasure nu = parse_density(read_file(o.measure));
  const ApproxResult a = solve_general(nu, cfg.G, cfg.psi, parse_levels(o.levels), cfg.solver);
  json rows = json::array();
  for (const ApproxLevel& l : a.levels) {
    rows.push_back({{"level", l.level}, {"atoms", l.atoms}, {"delta", l.delta}, {"bound_R", l.bound},
                    {"max_radius", l.max_radius}, {"within_bound", l.within_bound},
                    {"hausdorff_to_previous", l.hausdorff_to_previous}, {"weak_to_previous", l.weak_to_previous},
                    {"converged", l.report.converged}, {"tau", l.report.tau},
                    {"max_rel_residual", l.report.max_rel_residual}, {"iterations", l.report.iterations}});
  }
  emit(json{{"G", cfg.G.describe()}, {"psi", cfg.psi.describe()}, {"levels", rows},
            {"hausdorff_decreasing", a.hausdorff_decreasing}, {"all_within_bound", a.all_within_bound},
            {"all_converged", a.all_converged}},
       o.out);
  if (!a.levels.empty()) write_mesh(a.levels.back().report.mesh, o.mesh_out);
  return a.all_converged && a.all_within_bound ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete dual Orlicz Minkowski problems on polytopes"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "TOML file with [G], [psi] and [solver] tables")->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "output JSON path (stdout if omitted)");
    s->add_option("--seed", o.seed, "seed for randomized steps");
  };

  auto* solve = app.add_subcommand("solve", "solve the discrete problem for a measure");
  common(solve);
  solve->add_option("--measure", o.measure, "measure JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--mesh-out", o.mesh_out, "write the solution polytope as OFF");
  solve->add_option("--rtol", o.rtol, "residual tolerance");
  solve->add_flag("--force", o.force, "solve even if a hypothesis check fails");
  solve->add_option("--starts", o.starts, "multistart count for the uniqueness probe");
  solve->add_flag("--phibar", o.phibar, "experimental even solver for decreasing phibar");

  auto* evaluate = app.add_subcommand("evaluate", "dual volume and curvature vector of a polytope");
  common(evaluate);
  evaluate->add_option("--polytope", o.polytope, "polytope JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--mesh-out", o.mesh_out, "write the polytope as OFF");

  auto* verify = app.add_subcommand("verify", "check mu = tau C(P, .) for a given polytope");
  common(verify);
  verify->add_option("--measure", o.measure, "measure JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--polytope", o.polytope, "polytope JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--rtol", o.rtol, "max relative residual");

  auto* grad = app.add_subcommand("gradcheck", "analytic versus finite-difference gradient of the dual volume");
  common(grad);
  grad->add_option("--polytope", o.polytope, "polytope JSON")->required()->check(CLI::ExistingFile);
  grad->add_option("--index", o.index, "single facet index");
  grad->add_option("--rtol", o.rtol, "pass threshold on the relative error");

  auto* hyp = app.add_subcommand("hypotheses", "check theorem hypotheses for (G, psi)");
  common(hyp);
  hyp->add_option("--theorem", o.theorem, "T4.3, T4.4, T6.2, T6.4, T7.1, T7.3 or T7.5");
  hyp->add_option("--dim", o.dim, "dimension")->check(CLI::IsMember({2, 3}));

  auto* approx = app.add_subcommand("approx", "discretize a density at several levels and solve each");
  common(approx);
  approx->add_option("--measure", o.measure, "density JSON")->required()->check(CLI::ExistingFile);
  approx->add_option("--levels", o.levels, "levels as \"a..b\" or a comma list");
  approx->add_option("--mesh-out", o.mesh_out, "write the finest solution as OFF");
  approx->add_flag("--force", o.force, "solve even if a hypothesis check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kIo;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*verify) return cmd_verify(o);
    if (*grad) return cmd_gradcheck(o);
    if (*hyp) return cmd_hypotheses(o);
    if (*approx) return cmd_approx(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::HypothesisViolation) return kHypothesis;
    if (e.code() == ErrorCode::NotConverged) return kFailed;
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kIo;
}
