#include "experiment.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fvs::cli {

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

Rational json_rational(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return nice_rational(v.get<double>());
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected a number or a rational string");
}

double json_double(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  return json_rational(v, where).get_d();
}

int json_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

std::vector<int> json_ints(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array of integers");
  std::vector<int> out;
  for (const auto& x : v) out.push_back(json_int(x, where));
  return out;
}

Vec2<double> json_vec2(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || v.size() > 2) throw ConfigError(where + ": expected one or two numbers");
  Vec2<double> out{json_double(v[0], where), 0.0};
  if (v.size() == 2) out[1] = json_double(v[1], where);
  return out;
}

MeshSpec parse_mesh(const json& j) {
  check_keys(j, "mesh", {"kind", "h", "e2_scaled", "steps", "random_steps", "path", "perturb", "seed", "replicate"});
  MeshSpec m;
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("mesh.kind: required string");
  m.kind = j["kind"];
  if (j.contains("perturb")) m.perturb = json_double(j["perturb"], "mesh.perturb");
  if (j.contains("seed")) m.seed = static_cast<std::uint64_t>(json_int(j["seed"], "mesh.seed"));
  if (j.contains("replicate")) m.replicate = json_int(j["replicate"], "mesh.replicate");
  if (m.replicate < 1) throw ConfigError("mesh.replicate: must be at least 1");
  if (m.perturb < 0.0) throw ConfigError("mesh.perturb: must be non-negative");

  if (m.kind == "ti-triangular") {
    for (const char* key : {"steps", "random_steps", "path"})
      if (j.contains(key)) throw ConfigError(std::string("mesh.") + key + ": not valid for ti-triangular");
    if (j.contains("h")) m.h = json_rational(j["h"], "mesh.h");
    if (j.contains("e2_scaled")) {
      const auto& e = j["e2_scaled"];
      if (!e.is_array() || e.size() != 2) throw ConfigError("mesh.e2_scaled: expected two numbers");
      m.e2_scaled = {json_rational(e[0], "mesh.e2_scaled"), json_rational(e[1], "mesh.e2_scaled")};
    }
    if (sgn(m.h) <= 0) throw ConfigError("mesh.h: must be positive");
  } else if (m.kind == "1d") {
    for (const char* key : {"h", "e2_scaled", "path"})
      if (j.contains(key)) throw ConfigError(std::string("mesh.") + key + ": not valid for 1d");
    if (j.contains("steps") == j.contains("random_steps"))
      throw ConfigError("mesh: a 1d mesh needs exactly one of 'steps' and 'random_steps'");
    if (j.contains("steps")) {
      if (!j["steps"].is_array() || j["steps"].empty()) throw ConfigError("mesh.steps: expected a non-empty array");
      for (const auto& s : j["steps"]) m.steps.push_back(json_rational(s, "mesh.steps"));
    } else {
      m.random_steps = json_int(j["random_steps"], "mesh.random_steps");
      if (m.random_steps < 1) throw ConfigError("mesh.random_steps: must be at least 1");
    }
  } else if (m.kind == "file") {
    for (const char* key : {"h", "e2_scaled", "steps", "random_steps"})
      if (j.contains(key)) throw ConfigError(std::string("mesh.") + key + ": not valid for file");
    if (!j.contains("path") || !j["path"].is_string()) throw ConfigError("mesh.path: required string");
    m.path = j["path"];
  } else {
    throw ConfigError("mesh.kind: expected 'ti-triangular', '1d' or 'file', got '" + m.kind + "'");
  }
  return m;
}

CaseSpec parse_case(const json& j, CaseSpec c) {
  check_keys(j, "case", {"initial", "final_time", "cfl", "sigma", "dt"});
  if (j.contains("initial")) {
    c.initial = j["initial"].get<std::string>();
    if (c.initial != "sine" && c.initial != "vortex" && c.initial != "constant")
      throw ConfigError("case.initial: expected 'sine', 'vortex' or 'constant'");
  }
  if (j.contains("final_time")) c.final_time = json_double(j["final_time"], "case.final_time");
  if (j.contains("cfl")) c.cfl = json_double(j["cfl"], "case.cfl");
  if (j.contains("sigma")) c.sigma = json_double(j["sigma"], "case.sigma");
  if (j.contains("dt")) c.dt = json_double(j["dt"], "case.dt");
  if (c.final_time <= 0.0 || c.cfl <= 0.0 || c.sigma <= 0.0 || c.dt < 0.0)
    throw ConfigError("case: final_time, cfl and sigma must be positive and dt non-negative");
  return c;
}

}  // namespace

MeshFamily build_family(const json& j, const MeshSpec& mesh) {
  check_keys(j, "family", {"kind", "steps_per_unit", "copies"});
  const std::string kind = j.value("kind", "");
  if (kind == "ti-triangular") {
    if (j.contains("copies")) throw ConfigError("family.copies: not valid for ti-triangular");
    if (!j.contains("steps_per_unit")) throw ConfigError("family.steps_per_unit: required");
    auto steps = json_ints(j["steps_per_unit"], "family.steps_per_unit");
    for (int m : steps)
      if (m <= 0 || m % 5 != 0) throw ConfigError("family.steps_per_unit: entries must be positive multiples of 5");
    return ti_family(steps);
  }
  if (kind == "replicate") {
    if (j.contains("steps_per_unit")) throw ConfigError("family.steps_per_unit: not valid for replicate");
    if (!j.contains("copies")) throw ConfigError("family.copies: required");
    auto copies = json_ints(j["copies"], "family.copies");
    for (int c : copies)
      if (c < 1) throw ConfigError("family.copies: entries must be positive");
    return replicate_family(build_mesh(mesh), copies);
  }
  throw ConfigError("family.kind: expected 'ti-triangular' or 'replicate'");
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "config", {"name", "study", "mesh", "scheme", "schemes", "system", "options", "case", "family",
                           "analysis"});
  ExperimentConfig c;
  if (j.contains("name")) c.name = j["name"].get<std::string>();
  if (c.name.empty() || c.name.find('/') != std::string::npos) throw ConfigError("name: must be a plain file stem");
  if (j.contains("study")) c.study = j["study"].get<std::string>();
  if (c.study != "semidiscrete" && c.study != "fully-discrete-upwind")
    throw ConfigError("study: expected 'semidiscrete' or 'fully-discrete-upwind'");

  if (!j.contains("mesh")) throw ConfigError("mesh: required");
  c.mesh = parse_mesh(j["mesh"]);

  if (j.contains("scheme") && j.contains("schemes")) throw ConfigError("give either 'scheme' or 'schemes'");
  if (j.contains("scheme")) c.schemes.push_back(j["scheme"].get<std::string>());
  if (j.contains("schemes"))
    for (const auto& s : j["schemes"]) c.schemes.push_back(s.get<std::string>());
  for (const auto& s : c.schemes) {
    try {
      scheme_info(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scheme: ") + e.what());
    }
  }
  if (c.study == "semidiscrete" && c.schemes.empty()) throw ConfigError("scheme: required");

  const int dim = c.mesh.kind == "file" ? build_mesh(c.mesh).dim : c.mesh.kind == "1d" ? 1 : 2;
  c.case_spec.velocity = dim == 1 ? Vec2<double>{1.0, 0.0} : Vec2<double>{1.0, 0.5};
  if (j.contains("system")) {
    const auto& s = j["system"];
    check_keys(s, "system", {"kind", "velocity", "mean_flow"});
    c.case_spec.system = s.value("kind", "transport");
    if (c.case_spec.system == "transport") {
      if (s.contains("mean_flow")) throw ConfigError("system.mean_flow: only valid for lee");
      if (s.contains("velocity")) c.case_spec.velocity = json_vec2(s["velocity"], "system.velocity");
    } else if (c.case_spec.system == "lee") {
      if (s.contains("velocity")) throw ConfigError("system.velocity: only valid for transport");
      c.case_spec.velocity = {0.0, 0.0};
      if (s.contains("mean_flow")) c.case_spec.velocity = json_vec2(s["mean_flow"], "system.mean_flow");
      if (dim == 1) throw ConfigError("system.kind: lee needs a 2D mesh");
    } else {
      throw ConfigError("system.kind: expected 'transport' or 'lee'");
    }
  }
  if (c.study == "fully-discrete-upwind" && (c.case_spec.system != "transport" || dim != 1))
    throw ConfigError("study: fully-discrete-upwind runs 1D transport only");

  if (j.contains("options")) {
    const auto& o = j["options"];
    check_keys(o, "options", {"weights", "fc_rings"});
    try {
      if (o.contains("weights")) c.options.weights = parse_weight_policy(o["weights"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("options.weights: ") + e.what());
    }
    if (o.contains("fc_rings")) c.options.fc_rings = json_int(o["fc_rings"], "options.fc_rings");
  }
  if (j.contains("case")) c.case_spec = parse_case(j["case"], c.case_spec);
  if (j.contains("family")) {
    build_family(j["family"], c.mesh);
    c.family = j["family"];
  }

  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    check_keys(a, "analysis", {"p_max", "constants", "stability_times"});
    if (a.contains("p_max")) c.p_max = json_int(a["p_max"], "analysis.p_max");
    if (a.contains("constants")) c.constants = a["constants"].get<bool>();
    if (a.contains("stability_times"))
      for (const auto& t : a["stability_times"]) c.stability_times.push_back(json_double(t, "analysis.stability_times"));
    if (c.p_max < 0 || c.p_max > 6) throw ConfigError("analysis.p_max: expected 0..6");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::type_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

PeriodicMesh build_mesh(const MeshSpec& spec) {
  PeriodicMesh mesh;
  if (spec.kind == "ti-triangular") {
    const Vec2<Rational> e1{spec.h, Rational(0)};
    const Vec2<Rational> e2{spec.h * spec.e2_scaled[0], spec.h * spec.e2_scaled[1]};
    const Rational nx = 1 / e1[0], ny = 1 / e2[1];
    if (nx.get_den() != 1 || ny.get_den() != 1)
      throw ConfigError("mesh: 1/h and 1/(h·e2_scaled[1]) must be integers to tile the unit square");
    mesh = build_ti_triangular_exact(e1, e2, {static_cast<int>(nx.get_num().get_si()), static_cast<int>(ny.get_num().get_si())});
  } else if (spec.kind == "1d") {
    mesh = build_1d_pattern_exact(spec.random_steps > 0 ? random_1d_steps(spec.seed, spec.random_steps) : spec.steps);
  } else {
    mesh = mesh_from_json(read_file(spec.path));
  }
  if (spec.perturb > 0.0) mesh = perturb_nodes(mesh, spec.perturb, spec.seed);
  if (spec.replicate > 1) mesh = replicate_scale(mesh, spec.replicate);
  validate_mesh(mesh);
  return mesh;
}

json mesh_summary_json(const PeriodicMesh& mesh) {
  return {{"dim", mesh.dim},
          {"nodes", mesh.node_count()},
          {"elements", mesh.element_count()},
          {"copies", mesh.copies},
          {"period", {rational_string(mesh.period_exact[0]), rational_string(mesh.period_exact[1])}},
          {"longest_edge", mesh.longest_edge()},
          {"shortest_edge", mesh.shortest_edge()}};
}

std::string mesh_summary(const PeriodicMesh& mesh) {
  std::ostringstream os;
  os << "dim " << mesh.dim << ", " << mesh.node_count() << " nodes, " << mesh.element_count() << " elements, "
     << mesh.copies << " copies per axis, period " << rational_string(mesh.period_exact[0]);
  if (mesh.dim == 2) os << " x " << rational_string(mesh.period_exact[1]);
  os << ", edges " << mesh.shortest_edge() << " .. " << mesh.longest_edge();
  return os.str();
}

json layout_json(const ControlVolumeLayout<double>& L) {
  json cells = json::array();
  for (int j = 0; j < L.size(); ++j) {
    json faces = json::array();
    for (const auto& f : L.faces[j])
      faces.push_back({{"k", f.k}, {"shift", f.shift}, {"normal", f.normal}, {"measure", f.measure}});
    cells.push_back({{"volume", L.volume[j]}, {"point", L.point[j]}, {"faces", faces}});
  }
  return {{"kind", layout_name(L.kind)}, {"dim", L.dim}, {"period", L.period}, {"h_max", L.h_max},
          {"h_min", L.h_min}, {"cells", cells}};
}

void write_outputs(const std::string& dir, const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  for (const auto& [name, content] : files) {
    const fs::path target = fs::path(dir) / name;
    const fs::path temp = fs::path(dir) / ("." + name + ".tmp" + std::to_string(::getpid()));
    std::ofstream out(temp, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + temp.string());
    staged.emplace_back(temp, target);
  }
  for (const auto& [temp, target] : staged) fs::rename(temp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fvs::cli
