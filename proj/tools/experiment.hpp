#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fvs/timeloop.hpp"
#include "json.hpp"

namespace fvs::cli {

using nlohmann::json;

/// Raised for schema violations; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshSpec {
  std::string kind;  ///< "ti-triangular", "1d" or "file"
  // ti-triangular: e1 = (h, 0), e2 = h·e2_scaled, counts (1/h, 1/(h·e2_scaled.y)).
  Rational h{1, 20};
  Vec2<Rational> e2_scaled{Rational(1, 2), Rational(1)};
  // 1d: explicit steps, or `random_steps` seeded steps.
  std::vector<Rational> steps;
  int random_steps = 0;
  std::string path;
  double perturb = 0.0;
  std::uint64_t seed = 1;
  int replicate = 1;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string study = "semidiscrete";  ///< or "fully-discrete-upwind"
  MeshSpec mesh;
  std::vector<std::string> schemes;
  SchemeOptions options;
  CaseSpec case_spec;
  std::optional<json> family;  ///< validated; built with build_family once overrides are applied
  int p_max = 4;
  bool constants = true;
  std::vector<double> stability_times;
};

/// Validates against the single experiment schema; unknown keys are errors.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

PeriodicMesh build_mesh(const MeshSpec& spec);
/// Mesh family of a convergence study; replicate families use the config mesh as pattern.
MeshFamily build_family(const json& j, const MeshSpec& mesh);

std::string mesh_summary(const PeriodicMesh& mesh);
json mesh_summary_json(const PeriodicMesh& mesh);
json layout_json(const ControlVolumeLayout<double>& L);

/// Writes every file to a temporary name first, then renames them into place.
void write_outputs(const std::string& dir, const std::map<std::string, std::string>& files);

std::string read_file(const std::string& path);

}  // namespace fvs::cli
