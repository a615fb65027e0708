#pragma once

#include "dualorlicz/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dualorlicz {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// {"dim": n, "even": bool, "atoms": [{"u": [..], "w": ..}]}
DiscreteMeasure parse_measure(const std::string& text);
/// {"dim": n, "even": bool (optional), "caps": [{"center": [..], "angle": deg, "mass": ..}]}
DensityMeasure parse_density(const std::string& text);

struct PolytopeInput {
  Directions normals;
  Vector z;
};
/// {"dim": n, "normals": [[..], ..], "z": [..]}
PolytopeInput parse_polytope(const std::string& text);

std::string measure_to_json(const DiscreteMeasure& mu);
std::string polytope_to_json(const PolytopeInput& p);

/// [G], [psi] and [solver] tables of a TOML document.
struct RunConfig {
  GSpec G = GSpec::power(2.0);
  PsiSpec psi = PsiSpec::power(2.0);
  SolverConfig solver;
};
RunConfig parse_config(const std::string& toml_text);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);

/// FNV-1a over dim, even flag and the binary64 atoms and weights, as 16 hex digits.
std::string measure_digest(const DiscreteMeasure& mu);

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string command;
  std::string measure_digest;
  std::string g_config;
  std::string psi_config;
  std::optional<SolveReport> solve;
  std::optional<HypothesisReport> hypotheses;
  double wall_time_s = 0.0;
};

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const HypothesisReport& h);
nlohmann::json to_json(const RunReport& r);
/// Inverse of to_json; the mesh is restored as stored (vertices, facets, volume), not rebuilt.
RunReport run_report_from_json(const nlohmann::json& j);

/// Schema violations as human-readable messages; empty means valid.
std::vector<std::string> validate_run_report(const nlohmann::json& j);

}  // namespace dualorlicz
