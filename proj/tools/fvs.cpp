#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "fvs/analysis.hpp"

using namespace fvs;
using namespace fvs::cli;

namespace {

struct Globals {
  std::string config, out = "out";
  bool exact = false;
  std::optional<std::uint64_t> seed;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig load_with_overrides(const Globals& g) {
  ExperimentConfig c = load_config(g.config);
  if (g.seed) c.mesh.seed = *g.seed;
  return c;
}

// ---- mesh -----------------------------------------------------------------

struct MeshGenArgs {
  bool ti = false, one_d = false;
  std::string h = "1/20", e2 = "1/2,1", steps;
  int random_steps = 0, replicate = 1;
  double perturb = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

int mesh_gen(const MeshGenArgs& a) {
  if (a.ti == a.one_d) throw ConfigError("mesh gen: choose exactly one of --ti-tri and --1d");
  MeshSpec spec;
  spec.perturb = a.perturb;
  spec.seed = a.seed;
  spec.replicate = a.replicate;
  if (a.ti) {
    spec.kind = "ti-triangular";
    spec.h = parse_rational(a.h);
    const auto e2 = split_list(a.e2);
    if (e2.size() != 2) throw ConfigError("--e2: expected two comma-separated values");
    spec.e2_scaled = {parse_rational(e2[0]), parse_rational(e2[1])};
  } else {
    spec.kind = "1d";
    if (a.steps.empty() == (a.random_steps == 0)) throw ConfigError("mesh gen --1d: give --steps or --random-steps");
    for (const auto& s : split_list(a.steps)) spec.steps.push_back(parse_rational(s));
    spec.random_steps = a.random_steps;
  }
  const PeriodicMesh mesh = build_mesh(spec);
  std::cerr << mesh_summary(mesh) << "\n";
  const std::string text = mesh_to_json(mesh);
  if (a.out.empty()) std::cout << text;
  else write_outputs(a.out, {{"mesh.json", text}});
  return 0;
}

int mesh_inspect(const std::string& file) {
  const std::string text = read_file(file);
  PeriodicMesh mesh;
  try {
    mesh = mesh_from_json(text);
    validate_mesh(mesh);
  } catch (const std::exception& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return 1;
  }
  std::cout << mesh_summary(mesh) << "\n";
  const std::string once = mesh_to_json(mesh);
  const bool identical = mesh_to_json(mesh_from_json(once)) == once;
  std::cout << "round trip: " << (identical ? "bit-identical" : "MISMATCH") << "\n";
  std::cout << "file is canonical: " << (once == text ? "yes" : "no") << "\n";
  return identical ? 0 : 1;
}

struct ExportArgs {
  std::string file, out, layout, scheme, velocity;
};

std::string export_operator(const ExportArgs& a, const PeriodicMesh& mesh) {
  std::vector<double> v;
  for (const auto& s : split_list(a.velocity)) v.push_back(std::stod(s));
  if (v.empty()) v = mesh.dim == 1 ? std::vector<double>{1.0} : std::vector<double>{1.0, 0.5};
  if (static_cast<int>(v.size()) != mesh.dim) throw ConfigError("--velocity: needs one value per dimension");
  return export_coordinate(assemble_on_mesh<double>(a.scheme, mesh, transport(v)));
}

int mesh_export(const ExportArgs& a) {
  const PeriodicMesh mesh = mesh_from_json(read_file(a.file));
  validate_mesh(mesh);
  std::map<std::string, std::string> files;
  LayoutKind kind = LayoutKind::cell;
  if (!a.scheme.empty()) kind = scheme_info(a.scheme).layout;
  if (a.layout == "median-dual") kind = LayoutKind::median_dual;
  else if (a.layout == "cell") kind = LayoutKind::cell;
  else if (!a.layout.empty()) throw ConfigError("--layout: expected 'cell' or 'median-dual'");
  if (!a.scheme.empty() && kind != scheme_info(a.scheme).layout)
    throw ConfigError("--layout: " + a.scheme + " uses the " + layout_name(scheme_info(a.scheme).layout) + " layout");
  const auto L = kind == LayoutKind::cell ? cell_layout<double>(mesh) : median_dual_layout<double>(mesh);
  files["layout.json"] = layout_json(L).dump(1) + "\n";
  if (!a.scheme.empty())
    files["operator.txt"] = export_operator(a, mesh);
  write_outputs(a.out, files);
  for (const auto& [name, content] : files) std::cout << a.out << "/" << name << "\n";
  return 0;
}

// ---- analyze ----------------------------------------------------------------

struct Verdict {
  bool passed = true;
  std::string markdown;
};

template <class T>
json analyze_scheme(const ExperimentConfig& cfg, const PeriodicMesh& mesh, const HyperbolicSystem& sys,
                    const std::string& scheme, std::uint64_t seed, Verdict& verdict) {
  const auto pair = assemble_on_mesh<T>(scheme, mesh, sys, cfg.options);
  const int design = pair.design_order;
  const auto ex = exactness_order(pair, sys, std::max(cfg.p_max, design + 1));
  const auto zm = zero_mean_check(pair, sys, design);
  const auto spectrum = restricted_spectrum(pair);
  const auto ca = compute_CA(spectrum);
  const auto ker = kernel_check(spectrum, pair.n);

  json r;
  r["scheme"] = scheme;
  r["layout"] = layout_name(pair.layout->kind);
  r["projection"] = projection_name(pair.projection);
  r["design_order"] = design;
  r["exactness"] = {{"p", ex.order}, {"worst_by_degree", ex.worst}, {"first_failure", ex.first_failure}};
  json means = json::array();
  for (const auto& [name, mean] : zm.means) means.push_back({{"monomial", name}, {"mean", mean}});
  r["zero_mean"] = {{"degree", design + 1}, {"holds", zm.zero_mean}, {"worst", zm.worst},
                    {"worst_monomial", zm.worst_monomial}, {"means", means}};
  r["restricted_operator"] = {{"rank", spectrum.rank},
                              {"C_A", ca.degenerate ? json(nullptr) : json(ca.value)},
                              {"degenerate", ca.degenerate},
                              {"sigma_min_positive", ca.sigma_min_positive},
                              {"sigma_max", ca.sigma_max}};
  r["kernel"] = {{"dimension", ker.dimension}, {"componentwise_constant", ker.constant}, {"holds", ker.holds},
                 {"worst_variation", ker.worst_variation}};

  // ε of degree-(p+1) data is pattern periodic only when the scheme is p-exact.
  bool members = true;
  json membership = json::array();
  if (ex.order >= design) {
    for (const auto& b : monomial_basis(mesh.dim, pair.n, design + 1)) {
      const auto rep = truncation_error(pair, sys, basis_polynomial<T>(b, pair.n));
      // A vanishing ε is trivially in the image; its relative residual would only measure roundoff.
      const bool vanishing = std::all_of(rep.eps.begin(), rep.eps.end(),
                                         [&](const T& e) { return negligible(e, rep.scale); });
      const auto m = vanishing ? MembershipResult{} : image_membership(pair, spectrum, rep.eps);
      membership.push_back(
          {{"monomial", b.name()}, {"residual", m.residual}, {"member", m.member}, {"vanishing", vanishing}});
      members = members && m.member;
    }
  }
  r["membership"] = membership;
  r["notes"] = pair.notes;
  r["fallback_faces"] = pair.fallback_count;
  r["mass_row_defect"] = pair.mass_defect;

  const OperatorPair<double> dpair = [&] {
    if constexpr (std::is_same_v<T, double>) return pair;
    else return assemble_on_mesh<double>(scheme, mesh, sys, cfg.options);
  }();
  if (cfg.constants) {
    const auto k = scheme_constants(dpair, sys, std::max(ex.order, 0));
    r["constants"] = {{"p", k.p},       {"h", k.h},         {"C_W", k.C_W},
                      {"C_m", k.C_m},   {"C_a", k.C_a},     {"C_v", k.C_v},
                      {"C_a_tilde", k.C_a_tilde},           {"C_eps", k.C_eps},
                      {"C_A", k.C_A_degenerate ? json(nullptr) : json(k.C_A)},
                      {"norm_A", k.norm_A}, {"c_p", k.c_p}, {"C_Pi", k.C_Pi},
                      {"norm_M_inv", k.norm_M_inv},         {"C_E", k.C_E},
                      {"max_stencil", k.max_stencil},       {"max_column", k.max_column}};
  }
  if (!cfg.stability_times.empty()) {
    const auto s = stability_estimate(dpair, sys, cfg.stability_times, seed);
    r["stability"] = {{"method", s.method}, {"times", s.times}, {"K", s.K}};
  }

  const bool exact_ok = ex.order >= design;
  const bool ok = exact_ok && zm.zero_mean && ker.holds && members;
  r["properties"] = {{"exactness", exact_ok}, {"zero_mean", zm.zero_mean}, {"kernel", ker.holds},
                     {"membership", exact_ok ? json(members) : json(nullptr)}};
  r["passed"] = ok;
  verdict.passed = verdict.passed && ok;

  auto yes = [](bool b) { return b ? "yes" : "NO"; };
  std::ostringstream md;
  md << "### " << scheme << "\n\n| property | value | holds |\n|---|---|---|\n";
  md << "| exactness p (design " << design << ") | " << ex.order << " | " << yes(exact_ok) << " |\n";
  md << "| zero mean, degree " << design + 1 << " | worst " << fmt("%.3e", zm.worst)
     << (zm.worst_monomial.empty() ? "" : " (" + zm.worst_monomial + ")") << " | " << yes(zm.zero_mean) << " |\n";
  md << "| kernel of Ă | dimension " << ker.dimension << " | " << yes(ker.holds) << " |\n";
  if (exact_ok) {
    double worst = 0.0;
    for (const auto& m : membership) worst = std::max(worst, m["residual"].get<double>());
    md << "| ε in image of Ă | worst residual " << fmt("%.3e", worst) << " | " << yes(members) << " |\n";
  }
  md << "| C_A | " << (ca.degenerate ? std::string("degenerate") : fmt("%.4g", ca.value)) << " | |\n";
  if (r.contains("stability")) {
    const auto& K = r["stability"]["K"];
    md << "| sup K(t), " << r["stability"]["method"].get<std::string>() << " | "
       << fmt("%.6g", K.empty() ? 0.0 : K.back().get<double>()) << " | |\n";
  }
  md << "\n";
  verdict.markdown += md.str();
  return r;
}

int analyze(const Globals& g) {
  const ExperimentConfig cfg = load_with_overrides(g);
  const PeriodicMesh mesh = build_mesh(cfg.mesh);
  const HyperbolicSystem sys = make_system(cfg.case_spec, mesh.dim);
  if (g.exact && !sys.exact_upwind_available())
    throw ConfigError("--exact needs a system with diagonal direction matrices (transport)");
  Verdict verdict;
  verdict.markdown = "## " + cfg.name + "\n\n" + mesh_summary(mesh) + ", " +
                     (g.exact ? "exact rational arithmetic" : "double arithmetic") + "\n\n";
  json report;
  report["name"] = cfg.name;
  report["arithmetic"] = g.exact ? "rational" : "double";
  report["mesh"] = mesh_summary_json(mesh);
  report["system"] = sys.name();
  report["schemes"] = json::array();
  for (const auto& scheme : cfg.schemes) {
    report["schemes"].push_back(g.exact ? analyze_scheme<Rational>(cfg, mesh, sys, scheme, cfg.mesh.seed, verdict)
                                        : analyze_scheme<double>(cfg, mesh, sys, scheme, cfg.mesh.seed, verdict));
  }
  report["passed"] = verdict.passed;
  write_outputs(g.out, {{cfg.name + ".json", report.dump(1) + "\n"}, {cfg.name + ".md", verdict.markdown}});
  std::cout << verdict.markdown;
  std::cout << (verdict.passed ? "advertised properties hold\n" : "advertised properties FAIL\n");
  return verdict.passed ? 0 : 1;
}

// ---- converge ---------------------------------------------------------------

json study_json(const ConvergenceStudy& s) {
  json levels = json::array();
  for (const auto& l : s.levels)
    levels.push_back({{"h", l.h}, {"dofs", l.dofs}, {"error", l.error}, {"order", l.order}, {"dt", l.dt},
                      {"steps", l.steps}, {"seconds", l.seconds}});
  return {{"scheme", s.scheme}, {"levels", levels}, {"failure", s.failure}};
}

int converge_semidiscrete(const Globals& g, const ExperimentConfig& cfg, const MeshFamily& family) {
  json report;
  report["name"] = cfg.name;
  report["case"] = {{"system", cfg.case_spec.system}, {"initial", cfg.case_spec.initial},
                    {"velocity", cfg.case_spec.velocity}, {"final_time", cfg.case_spec.final_time},
                    {"cfl", cfg.case_spec.cfl}};
  report["studies"] = json::array();
  std::string combined = "## " + cfg.name + "\n\n";
  bool ok = true;
  for (const auto& scheme : cfg.schemes) {
    const std::string stem = cfg.name + "_" + scheme;
    auto persist = [&](const ConvergenceStudy& s) {
      json partial = report;
      partial["studies"].push_back(study_json(s));
      write_outputs(g.out, {{stem + ".csv", study_csv(s)},
                            {stem + ".md", study_markdown(s, scheme)},
                            {cfg.name + ".json", partial.dump(1) + "\n"}});
      const auto& l = s.levels;
      if (s.failure.empty() && !l.empty())
        std::cerr << scheme << ": h " << l.back().h << " error " << l.back().error << " order " << l.back().order
                  << " (" << l.back().seconds << " s)\n";
    };
    const ConvergenceStudy s = convergence_study(cfg.case_spec, scheme, family, cfg.options, persist);
    report["studies"].push_back(study_json(s));
    combined += study_markdown(s, scheme) + "\n";
    if (!s.failure.empty()) {
      std::cerr << scheme << " aborted: " << s.failure << "\n";
      ok = false;
    }
  }
  write_outputs(g.out, {{cfg.name + ".json", report.dump(1) + "\n"}, {cfg.name + ".md", combined}});
  std::cout << combined;
  return ok ? 0 : 1;
}

int converge_fully_discrete(const Globals& g, const ExperimentConfig& cfg, const MeshFamily& family) {
  if (family.kind != "replicate") throw ConfigError("fully-discrete-upwind: needs a replicate family");
  if (cfg.case_spec.cfl > 1.0) throw ConfigError("fully-discrete-upwind: case.cfl is τ/ħ_min and must not exceed 1");
  std::string csv = "h,tau,steps,max_error,order,worst_bound_ratio,bound_holds\n";
  std::string md = "## " + cfg.name + "\n\n| h | τ | max error | order | worst error/bound |\n|---|---|---|---|---|\n";
  json levels = json::array();
  bool ok = true;
  double prev_h = 0.0, prev_e = 0.0;
  for (std::size_t i = 0; i < family.levels(); ++i) {
    const PeriodicMesh mesh = family.level(i);
    const auto L = median_dual_layout<double>(mesh);
    const double hbar_min = *std::min_element(L.volume.begin(), L.volume.end());
    const auto r = fully_discrete_upwind(mesh, cfg.case_spec.final_time, cfg.case_spec.cfl * hbar_min);
    const double order = i == 0 ? 0.0 : std::log(prev_e / r.max_error) / std::log(prev_h / r.h_max);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%.6e,%s,%.6f,%d\n", r.h_max, r.tau, r.steps, r.max_error,
                  i == 0 ? "" : fmt("%.4f", order).c_str(), r.worst_bound_ratio, r.bound_holds ? 1 : 0);
    csv += buf;
    std::snprintf(buf, sizeof buf, "| %.6g | %.4g | %.3e | %s | %.4f |\n", r.h_max, r.tau, r.max_error,
                  i == 0 ? "" : fmt("%.2f", order).c_str(), r.worst_bound_ratio);
    md += buf;
    levels.push_back({{"h", r.h_max}, {"tau", r.tau}, {"steps", r.steps}, {"max_error", r.max_error},
                      {"order", order}, {"worst_bound_ratio", r.worst_bound_ratio}, {"bound_holds", r.bound_holds}});
    ok = ok && r.bound_holds;
    prev_h = r.h_max;
    prev_e = r.max_error;
  }
  md += std::string("\nError bound ") + (ok ? "holds" : "VIOLATED") + " at every level.\n";
  const json report = {{"name", cfg.name}, {"study", "fully-discrete-upwind"}, {"levels", levels}, {"bound_holds", ok}};
  write_outputs(g.out, {{cfg.name + ".csv", csv}, {cfg.name + ".md", md}, {cfg.name + ".json", report.dump(1) + "\n"}});
  std::cout << md;
  return ok ? 0 : 1;
}

int converge(const Globals& g) {
  const ExperimentConfig cfg = load_with_overrides(g);
  if (!cfg.family) throw ConfigError("converge: the config needs a 'family'");
  const MeshFamily family = build_family(*cfg.family, cfg.mesh);
  if (cfg.study == "fully-discrete-upwind") return converge_fully_discrete(g, cfg, family);
  if (family.levels() < 3) throw ConfigError("family: at least 3 levels are required");
  return converge_semidiscrete(g, cfg, family);
}

// ---- constants --------------------------------------------------------------

int constants(const Globals& g) {
  ExperimentConfig cfg = load_with_overrides(g);
  cfg.constants = true;
  const PeriodicMesh mesh = build_mesh(cfg.mesh);
  const HyperbolicSystem sys = make_system(cfg.case_spec, mesh.dim);
  json report = {{"name", cfg.name}, {"mesh", mesh_summary_json(mesh)}, {"schemes", json::array()}};
  for (const auto& scheme : cfg.schemes) {
    const auto pair = assemble_on_mesh<double>(scheme, mesh, sys, cfg.options);
    const int p = std::max(exactness_order(pair, sys, cfg.p_max).order, 0);
    const auto k = scheme_constants(pair, sys, p);
    json s = {{"scheme", scheme}, {"p", k.p},     {"h", k.h},         {"C_W", k.C_W},
              {"C_m", k.C_m},     {"C_a", k.C_a}, {"C_v", k.C_v},     {"C_a_tilde", k.C_a_tilde},
              {"C_eps", k.C_eps}, {"C_A", k.C_A_degenerate ? json(nullptr) : json(k.C_A)},
              {"norm_A", k.norm_A}, {"c_p", k.c_p}, {"C_Pi", k.C_Pi}, {"norm_M_inv", k.norm_M_inv},
              {"C_E", k.C_E}, {"max_stencil", k.max_stencil}, {"max_column", k.max_column}};
    if (!cfg.stability_times.empty()) {
      const auto st = stability_estimate(pair, sys, cfg.stability_times, cfg.mesh.seed);
      s["stability"] = {{"method", st.method}, {"times", st.times}, {"K", st.K}};
    }
    report["schemes"].push_back(s);
  }
  const std::string text = report.dump(1) + "\n";
  write_outputs(g.out, {{cfg.name + "_constants.json", text}});
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume supraconvergence toolkit"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", g.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    if (needs_config) opt->required();
    cmd->add_option("--out", g.out, "output directory");
    cmd->add_flag("--exact", g.exact, "exact rational arithmetic");
    cmd->add_option("--seed", seed, "override the mesh seed");
  };

  auto* mesh = app.add_subcommand("mesh", "generate, inspect or export meshes");
  mesh->require_subcommand(1);
  MeshGenArgs gen;
  auto* gen_cmd = mesh->add_subcommand("gen", "generate a periodic mesh");
  gen_cmd->set_help_flag("--help", "print this help message and exit");
  gen_cmd->add_flag("--ti-tri", gen.ti, "translation-invariant triangulation of the unit square");
  gen_cmd->add_flag("--1d", gen.one_d, "1D periodic mesh on [0, 1)");
  gen_cmd->add_option("--h", gen.h, "TI step, e.g. 0.05 or 1/20");
  gen_cmd->add_option("--e2", gen.e2, "second lattice vector in units of h");
  gen_cmd->add_option("--steps", gen.steps, "1D steps, comma separated; the period is their sum");
  gen_cmd->add_option("--random-steps", gen.random_steps, "number of seeded random 1D steps");
  gen_cmd->add_option("--perturb", gen.perturb, "node jitter as a fraction of the shortest edge");
  gen_cmd->add_option("--seed", gen.seed, "seed for random steps and perturbation");
  gen_cmd->add_option("--replicate", gen.replicate, "copies per axis");
  gen_cmd->add_option("--out", gen.out, "output directory (mesh.json); stdout when omitted");

  std::string inspect_file;
  auto* inspect_cmd = mesh->add_subcommand("inspect", "validate a mesh file and check the JSON round trip");
  inspect_cmd->add_option("file", inspect_file)->required()->check(CLI::ExistingFile);

  ExportArgs ex;
  auto* export_cmd = mesh->add_subcommand("export", "write the control-volume layout and an operator pair");
  export_cmd->add_option("file", ex.file)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", ex.out, "output directory")->required();
  export_cmd->add_option("--layout", ex.layout, "cell or median-dual");
  export_cmd->add_option("--scheme", ex.scheme, "also export A and M of this scheme (transport)");
  export_cmd->add_option("--velocity", ex.velocity, "transport velocity, comma separated");

  auto* analyze_cmd = app.add_subcommand("analyze", "truncation error, kernel, image and constants of a scheme");
  add_common(analyze_cmd, true);
  auto* converge_cmd = app.add_subcommand("converge", "convergence study over a mesh family");
  add_common(converge_cmd, true);
  auto* constants_cmd = app.add_subcommand("constants", "constants of the error estimate");
  add_common(constants_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  for (auto* cmd : {analyze_cmd, converge_cmd, constants_cmd})
    if (cmd->parsed() && cmd->count("--seed")) g.seed = seed;

  try {
    if (gen_cmd->parsed()) return mesh_gen(gen);
    if (inspect_cmd->parsed()) return mesh_inspect(inspect_file);
    if (export_cmd->parsed()) return mesh_export(ex);
    if (analyze_cmd->parsed()) return analyze(g);
    if (converge_cmd->parsed()) return converge(g);
    if (constants_cmd->parsed()) return constants(g);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
