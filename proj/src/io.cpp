#include "dualorlicz/io.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace dualorlicz {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(std::string("expected a number for ") + what);
}

int dimension(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_integer()) fail("\"dim\" must be an integer");
  const int n = d.get<int>();
  if (n != 2 && n != 3) fail("\"dim\" must be 2 or 3");
  return n;
}

Vector vec(const json& j, int n, const char* what) {
  if (!j.is_array() || (n > 0 && static_cast<int>(j.size()) != n))
    fail(std::string(what) + " must be an array" + (n > 0 ? " of length " + std::to_string(n) : ""));
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], what);
  return v;
}

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json arr(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

Vector from_arr(const json& j) { return vec(j, -1, "array"); }

std::vector<double> toml_doubles(const toml::node_view<const toml::node>& n, const char* what) {
  const toml::array* a = n.as_array();
  if (!a) fail(std::string("config: ") + what + " must be an array");
  std::vector<double> out;
  for (const auto& el : *a) {
    const auto v = el.value<double>();
    if (!v) fail(std::string("config: ") + what + " must contain numbers");
    out.push_back(*v);
  }
  return out;
}

DirectionWeight parse_weight(const toml::node_view<const toml::node>& n) {
  if (!n) return DirectionWeight::constant(1.0);
  if (const auto c = n.value<double>()) return DirectionWeight::constant(*c);
  if (!n.is_table()) fail("config: G.weight must be a number or a table");
  const toml::array* g = n["grid"].as_array();
  if (!g || g->empty()) fail("config: G.weight.grid must be a non-empty array of directions");
  const std::vector<double> values = toml_doubles(n["values"], "G.weight.values");
  Directions grid;
  for (size_t k = 0; k < g->size(); ++k) {
    const toml::array* row = (*g)[k].as_array();
    if (!row) fail("config: G.weight.grid rows must be arrays");
    if (k == 0) grid.resize(static_cast<Eigen::Index>(row->size()), static_cast<Eigen::Index>(g->size()));
    if (static_cast<Eigen::Index>(row->size()) != grid.rows()) fail("config: G.weight.grid rows differ in length");
    for (size_t r = 0; r < row->size(); ++r) {
      const auto v = (*row)[r].value<double>();
      if (!v) fail("config: G.weight.grid must contain numbers");
      grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = *v;
    }
  }
  if (values.size() != g->size()) fail("config: G.weight.values must match the grid");
  return DirectionWeight::tabulated(grid, Eigen::Map<const Vector>(values.data(), values.size()),
                                    n["kappa"].value_or(20.0), n["even"].value_or(true));
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DiscreteMeasure parse_measure(const std::string& text) {
  const json j = parse_json(text);
  const int n = dimension(j);
  const json& atoms = field(j, "atoms");
  if (!atoms.is_array() || atoms.empty()) fail("\"atoms\" must be a non-empty array");
  std::vector<Vector> u;
  std::vector<double> w;
  for (const json& a : atoms) {
    u.push_back(vec(field(a, "u"), n, "atom direction"));
    w.push_back(number(field(a, "w"), "atom weight"));
  }
  const bool even = j.value("even", false);
  return DiscreteMeasure::make(u, w, even);
}

DensityMeasure parse_density(const std::string& text) {
  const json j = parse_json(text);
  DensityMeasure nu;
  nu.dim = dimension(j);
  nu.even = j.value("even", false);
  const json& caps = field(j, "caps");
  if (!caps.is_array() || caps.empty()) fail("\"caps\" must be a non-empty array");
  for (const json& c : caps) {
    SphericalCap cap;
    cap.center = vec(field(c, "center"), nu.dim, "cap center");
    cap.angle_deg = number(field(c, "angle"), "cap angle");
    cap.mass = number(field(c, "mass"), "cap mass");
    nu.caps.push_back(cap);
  }
  nu.validate();
  return nu;
}

PolytopeInput parse_polytope(const std::string& text) {
  const json j = parse_json(text);
  const int n = dimension(j);
  const json& normals = field(j, "normals");
  if (!normals.is_array() || normals.empty()) fail("\"normals\" must be a non-empty array");
  std::vector<Vector> dirs;
  for (const json& u : normals) dirs.push_back(vec(u, n, "normal"));
  PolytopeInput p;
  p.normals = make_directions(dirs);
  p.z = vec(field(j, "z"), static_cast<int>(dirs.size()), "\"z\"");
  return p;
}

std::string measure_to_json(const DiscreteMeasure& mu) {
  json j{{"dim", mu.dim}, {"even", mu.even}, {"atoms", json::array()}};
  for (int i = 0; i < mu.size(); ++i)
    j["atoms"].push_back({{"u", arr(mu.atoms.col(i))}, {"w", mu.weights[i]}});
  return j.dump(2);
}

std::string polytope_to_json(const PolytopeInput& p) {
  json j{{"dim", p.normals.rows()}, {"normals", json::array()}, {"z", arr(p.z)}};
  for (Eigen::Index i = 0; i < p.normals.cols(); ++i) j["normals"].push_back(arr(p.normals.col(i)));
  return j.dump(2);
}

RunConfig parse_config(const std::string& toml_text) {
  toml::table tbl;
  try {
    tbl = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    fail(std::string("malformed TOML: ") + std::string(e.description()));
  }
  RunConfig cfg;
  const toml::node_view<const toml::node> root{static_cast<const toml::node&>(tbl)};

  if (const auto g = root["G"]) {
    const std::string family = g["family"].value_or(std::string("power"));
    const DirectionWeight w = parse_weight(g["weight"]);
    if (family == "power") {
      const auto q = g["q"].value<double>();
      if (!q) fail("config: G.q is required for the power family");
      cfg.G = GSpec::power(*q, g["scale"].value_or(1.0), w);
    } else if (family == "log_offset") {
      cfg.G = GSpec::log_offset(w);
    } else if (family == "custom") {
      cfg.G = GSpec::custom(toml_doubles(g["t"], "G.t"), toml_doubles(g["g"], "G.g"), w);
    } else {
      fail("config: unknown G.family \"" + family + "\"");
    }
  }

  if (const auto p = root["psi"]) {
    const std::string family = p["family"].value_or(std::string("power"));
    if (family == "power") {
      const auto e = p["p"].value<double>();
      if (!e) fail("config: psi.p is required for the power family");
      cfg.psi = PsiSpec::power(*e);
    } else if (family == "one") {
      cfg.psi = PsiSpec::one();
    } else if (family == "custom") {
      cfg.psi = PsiSpec::custom(toml_doubles(p["t"], "psi.t"), toml_doubles(p["psi"], "psi.psi"));
    } else {
      fail("config: unknown psi.family \"" + family + "\"");
    }
  }

  if (const auto s = root["solver"]) {
    SolverConfig& c = cfg.solver;
    c.gtol = s["gtol"].value_or(c.gtol);
    c.rtol = s["rtol"].value_or(c.rtol);
    c.max_iters = s["max_iters"].value_or(c.max_iters);
    c.interior_margin = s["interior_margin"].value_or(c.interior_margin);
    c.seed = static_cast<std::uint64_t>(s["seed"].value_or(static_cast<std::int64_t>(c.seed)));
    c.eps_z = s["eps_z"].value_or(c.eps_z);
    c.eps0 = s["eps0"].value_or(c.eps0);
    c.armijo = s["armijo"].value_or(c.armijo);
    c.shrink = s["shrink"].value_or(c.shrink);
    c.force = s["force"].value_or(c.force);
    c.quad.rel_tol = s["quad_rel_tol"].value_or(c.quad.rel_tol);
    c.quad.max_depth = s["quad_max_depth"].value_or(c.quad.max_depth);
    if (!(c.gtol > 0 && c.rtol > 0 && c.max_iters > 0 && c.interior_margin > 0 && c.eps_z > 0 &&
          c.eps0 > 0 && c.eps0 < 1 && c.shrink > 0 && c.shrink < 1 && c.armijo > 0 && c.quad.rel_tol > 0))
      fail("config: solver tolerances must be positive (eps0 and shrink in (0,1))");
  }
  return cfg;
}

std::string measure_digest(const DiscreteMeasure& mu) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const void* p, size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int32_t dim = mu.dim;
  const unsigned char even = mu.even ? 1 : 0;
  feed(&dim, sizeof dim);
  feed(&even, 1);
  for (int i = 0; i < mu.size(); ++i) {
    for (int r = 0; r < mu.dim; ++r) {
      const double x = mu.atoms(r, i);
      feed(&x, sizeof x);
    }
    const double w = mu.weights[i];
    feed(&w, sizeof w);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json to_json(const HypothesisReport& h) {
  json conds = json::array();
  for (const Condition& c : h.conditions) {
    json jc{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"evidence", c.evidence}, {"heuristic", c.heuristic}};
    jc["error"] = c.error ? json(to_string(*c.error)) : json(nullptr);
    conds.push_back(jc);
  }
  return {{"theorem", to_string(h.theorem)}, {"passed", h.passed()}, {"conditions", conds}};
}

json to_json(const SolveReport& r) {
  json j;
  j["z"] = arr(r.z);
  j["tau"] = num(r.tau);
  j["tau_dual"] = num(r.tau_dual);
  j["curvature"] = arr(r.curvature);
  j["curvature_g"] = arr(r.curvature_g);
  j["residuals"] = arr(r.residuals);
  j["max_rel_residual"] = num(r.max_rel_residual);
  j["norm_residual"] = num(r.norm_residual);
  j["constraint_residual"] = num(r.constraint_residual);
  j["kkt_residuals"] = arr(r.kkt);
  j["objective"] = num(r.objective);
  j["objective_trace"] = json::array();
  for (double v : r.objective_trace) j["objective_trace"].push_back(num(v));
  j["projected_gradient"] = num(r.projected_gradient);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = to_string(r.status);
  j["mode"] = r.mode;
  j["theorem"] = r.theorem;
  j["message"] = r.message;
  j["experimental"] = r.experimental;

  json mesh{{"dim", r.mesh.dim}, {"volume", num(r.mesh.volume)}, {"vertices", json::array()}, {"facets", json::array()}};
  for (const Vector& v : r.mesh.vertices) mesh["vertices"].push_back(arr(v));
  for (const Facet& f : r.mesh.facets)
    mesh["facets"].push_back({{"index", f.index}, {"loop", f.loop}, {"h", num(f.h)}, {"area", num(f.area)}, {"active", f.active}});
  mesh["normals"] = json::array();
  for (Eigen::Index i = 0; i < r.mesh.normals.cols(); ++i) mesh["normals"].push_back(arr(r.mesh.normals.col(i)));
  j["mesh"] = mesh;

  if (r.spread) {
    const MultistartSpread& s = *r.spread;
    j["multistart_spread"] = {{"starts", s.starts}, {"hausdorff", num(s.hausdorff)}, {"tau", num(s.tau)},
                              {"converged", s.converged}, {"taus", s.taus}};
  } else {
    j["multistart_spread"] = nullptr;
  }
  return j;
}

json to_json(const RunReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["tool_version"] = r.tool_version;
  j["command"] = r.command;
  j["problem"] = {{"measure_digest", r.measure_digest}, {"G", r.g_config}, {"psi", r.psi_config}};
  j["solve"] = r.solve ? to_json(*r.solve) : json(nullptr);
  j["hypotheses"] = r.hypotheses ? to_json(*r.hypotheses) : json(nullptr);
  j["wall_time_s"] = num(r.wall_time_s);
  return j;
}

namespace {

Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "indeterminate") return Verdict::Indeterminate;
  fail("unknown verdict " + s);
}

std::optional<ErrorCode> parse_error_code(const json& j) {
  if (j.is_null()) return std::nullopt;
  const std::string s = j.get<std::string>();
  for (int c = 0; c <= static_cast<int>(ErrorCode::ParseError); ++c)
    if (s == to_string(static_cast<ErrorCode>(c))) return static_cast<ErrorCode>(c);
  fail("unknown error code " + s);
}

SolveStatus parse_status(const std::string& s) {
  if (s == "Converged") return SolveStatus::Converged;
  if (s == "NotConverged") return SolveStatus::NotConverged;
  if (s == "OriginOnBoundary") return SolveStatus::OriginOnBoundary;
  fail("unknown status " + s);
}

SolveReport solve_from_json(const json& j) {
  SolveReport r;
  r.z = from_arr(j.at("z"));
  r.tau = number(j.at("tau"), "tau");
  r.tau_dual = number(j.at("tau_dual"), "tau_dual");
  r.curvature = from_arr(j.at("curvature"));
  r.curvature_g = from_arr(j.at("curvature_g"));
  r.residuals = from_arr(j.at("residuals"));
  r.max_rel_residual = number(j.at("max_rel_residual"), "max_rel_residual");
  r.norm_residual = number(j.at("norm_residual"), "norm_residual");
  r.constraint_residual = number(j.at("constraint_residual"), "constraint_residual");
  r.kkt = from_arr(j.at("kkt_residuals"));
  r.objective = number(j.at("objective"), "objective");
  for (const json& v : j.at("objective_trace")) r.objective_trace.push_back(number(v, "objective_trace"));
  r.projected_gradient = number(j.at("projected_gradient"), "projected_gradient");
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.status = parse_status(j.at("status").get<std::string>());
  r.mode = j.at("mode").get<std::string>();
  r.theorem = j.at("theorem").get<std::string>();
  r.message = j.at("message").get<std::string>();
  r.experimental = j.at("experimental").get<bool>();

  const json& m = j.at("mesh");
  r.mesh.dim = m.at("dim").get<int>();
  r.mesh.volume = number(m.at("volume"), "volume");
  for (const json& v : m.at("vertices")) r.mesh.vertices.push_back(from_arr(v));
  const json& normals = m.at("normals");
  r.mesh.normals.resize(r.mesh.dim, static_cast<Eigen::Index>(normals.size()));
  for (size_t i = 0; i < normals.size(); ++i) r.mesh.normals.col(static_cast<Eigen::Index>(i)) = from_arr(normals[i]);
  for (const json& f : m.at("facets")) {
    Facet F;
    F.index = f.at("index").get<int>();
    F.loop = f.at("loop").get<std::vector<int>>();
    F.h = number(f.at("h"), "h");
    F.area = number(f.at("area"), "area");
    F.active = f.at("active").get<bool>();
    r.mesh.facets.push_back(F);
  }
  r.mesh.z = r.z;
  r.mesh.full_dimensional = r.mesh.volume > 0;

  const json& s = j.at("multistart_spread");
  if (!s.is_null()) {
    MultistartSpread sp;
    sp.starts = s.at("starts").get<int>();
    sp.hausdorff = number(s.at("hausdorff"), "hausdorff");
    sp.tau = number(s.at("tau"), "tau spread");
    sp.converged = s.at("converged").get<std::vector<bool>>();
    for (const json& t : s.at("taus")) sp.taus.push_back(number(t, "taus"));
    r.spread = sp;
  }
  return r;
}

}  // namespace

RunReport run_report_from_json(const json& j) {
  const std::vector<std::string> errs = validate_run_report(j);
  if (!errs.empty()) fail("invalid run report: " + errs.front());
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.command = j.at("command").get<std::string>();
  const json& p = j.at("problem");
  r.measure_digest = p.at("measure_digest").get<std::string>();
  r.g_config = p.at("G").get<std::string>();
  r.psi_config = p.at("psi").get<std::string>();
  if (!j.at("solve").is_null()) r.solve = solve_from_json(j.at("solve"));
  if (!j.at("hypotheses").is_null()) {
    const json& h = j.at("hypotheses");
    HypothesisReport hr;
    hr.theorem = parse_theorem(h.at("theorem").get<std::string>());
    for (const json& c : h.at("conditions")) {
      Condition cd;
      cd.name = c.at("name").get<std::string>();
      cd.verdict = parse_verdict(c.at("verdict").get<std::string>());
      cd.evidence = c.at("evidence").get<std::string>();
      cd.heuristic = c.at("heuristic").get<bool>();
      cd.error = parse_error_code(c.at("error"));
      hr.conditions.push_back(cd);
    }
    r.hypotheses = hr;
  }
  r.wall_time_s = number(j.at("wall_time_s"), "wall_time_s");
  return r;
}

std::vector<std::string> validate_run_report(const json& j) {
  std::vector<std::string> e;
  auto need = [&](const json& o, const char* key, auto pred, const char* type, const std::string& where) {
    if (!o.is_object() || !o.contains(key)) {
      e.push_back(where + key + ": missing");
      return false;
    }
    if (!pred(o.at(key))) {
      e.push_back(where + key + ": expected " + type);
      return false;
    }
    return true;
  };
  auto is_num = [](const json& x) {
    return x.is_number() || (x.is_string() && (x == "inf" || x == "-inf" || x == "nan"));
  };
  auto is_num_array = [&](const json& x) {
    return x.is_array() && std::all_of(x.begin(), x.end(), [&](const json& v) { return is_num(v); });
  };
  auto is_str = [](const json& x) { return x.is_string(); };
  auto is_bool = [](const json& x) { return x.is_boolean(); };
  auto is_int = [](const json& x) { return x.is_number_integer(); };
  auto is_obj_or_null = [](const json& x) { return x.is_object() || x.is_null(); };

  if (!j.is_object()) return {"report must be a JSON object"};
  if (need(j, "schema_version", is_int, "integer", "") && j.at("schema_version") != kReportSchemaVersion)
    e.push_back("schema_version: unsupported version");
  need(j, "tool_version", is_str, "string", "");
  need(j, "command", is_str, "string", "");
  need(j, "wall_time_s", is_num, "number", "");
  if (need(j, "problem", [](const json& x) { return x.is_object(); }, "object", "")) {
    const json& p = j.at("problem");
    need(p, "measure_digest", is_str, "string", "problem.");
    need(p, "G", is_str, "string", "problem.");
    need(p, "psi", is_str, "string", "problem.");
  }
  if (need(j, "hypotheses", is_obj_or_null, "object or null", "") && j.at("hypotheses").is_object()) {
    const json& h = j.at("hypotheses");
    need(h, "theorem", is_str, "string", "hypotheses.");
    need(h, "passed", is_bool, "boolean", "hypotheses.");
    if (need(h, "conditions", [](const json& x) { return x.is_array(); }, "array", "hypotheses.")) {
      for (const json& c : h.at("conditions")) {
        need(c, "name", is_str, "string", "hypotheses.conditions[].");
        if (need(c, "verdict", is_str, "string", "hypotheses.conditions[].")) {
          const std::string v = c.at("verdict").get<std::string>();
          if (v != "pass" && v != "fail" && v != "indeterminate") e.push_back("hypotheses.conditions[].verdict: bad value");
        }
        need(c, "evidence", is_str, "string", "hypotheses.conditions[].");
        need(c, "heuristic", is_bool, "boolean", "hypotheses.conditions[].");
        need(c, "error", [](const json& x) { return x.is_string() || x.is_null(); }, "string or null",
             "hypotheses.conditions[].");
      }
    }
  }
  if (need(j, "solve", is_obj_or_null, "object or null", "") && j.at("solve").is_object()) {
    const json& s = j.at("solve");
    const std::string w = "solve.";
    for (const char* k : {"z", "curvature", "curvature_g", "residuals", "kkt_residuals", "objective_trace"})
      need(s, k, is_num_array, "number array", w);
    for (const char* k : {"tau", "tau_dual", "max_rel_residual", "norm_residual", "constraint_residual", "objective",
                          "projected_gradient"})
      need(s, k, is_num, "number", w);
    need(s, "iterations", is_int, "integer", w);
    need(s, "converged", is_bool, "boolean", w);
    if (need(s, "status", is_str, "string", w)) {
      const std::string st = s.at("status").get<std::string>();
      if (st != "Converged" && st != "NotConverged" && st != "OriginOnBoundary") e.push_back("solve.status: bad value");
    }
    for (const char* k : {"mode", "theorem", "message"}) need(s, k, is_str, "string", w);
    need(s, "experimental", is_bool, "boolean", w);
    need(s, "multistart_spread", is_obj_or_null, "object or null", w);
    if (need(s, "mesh", [](const json& x) { return x.is_object(); }, "object", w)) {
      const json& m = s.at("mesh");
      need(m, "dim", is_int, "integer", "solve.mesh.");
      need(m, "volume", is_num, "number", "solve.mesh.");
      for (const char* k : {"vertices", "facets", "normals"})
        need(m, k, [](const json& x) { return x.is_array(); }, "array", "solve.mesh.");
    }
  }
  return e;
}

}  // namespace dualorlicz
