// Acceptance checks; one PASS/FAIL line per criterion. Usage: acceptance [criterion...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fvs/analysis.hpp"
#include "fvs/quadrature.hpp"
#include "fvs/timeloop.hpp"
#include "support.hpp"

using namespace fvs;
using fvs::testing::perturbed_pattern;
using fvs::testing::random_1d_mesh;
using fvs::testing::random_steps;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> info;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      info.push_back("failed: " + what);
    }
  }
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

const std::vector<std::string> kZeroMeanSchemes = {"fv-p1",     "fv-p2",  "bbr3", "eb-central", "eb-upwind",
                                                   "fc-steady", "fc-div", "fc-xg"};

MultiPolynomial<Rational> scalar_poly(const Polynomial<Rational>& p) {
  MultiPolynomial<Rational> f(1);
  f.comp[0] = p;
  return f;
}

Polynomial<Rational> random_polynomial(Rng& rng, int degree) {
  Polynomial<Rational> f;
  for (int q = 0; q <= degree; ++q)
    for (const auto& [i, j] : monomials_of_degree(2, q)) {
      Rational c(rng.integer(-20, 20), rng.integer(1, 9));
      c.canonicalize();
      f.add_term(i, j, c);
    }
  return f;
}

// (e·∇)² g at r.
Rational second_directional(const Polynomial<Rational>& g, const Vec2<Rational>& e, const Vec2<Rational>& r) {
  return e[0] * e[0] * g.derivative(0).derivative(0).eval(r) + 2 * e[0] * e[1] * g.derivative(0).derivative(1).eval(r) +
         e[1] * e[1] * g.derivative(1).derivative(1).eval(r);
}

double relative_gap(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// h₊ and h₋ of every node of a 1D vertex layout.
std::vector<std::pair<Rational, Rational>> node_steps(const ControlVolumeLayout<Rational>& L) {
  std::vector<std::pair<Rational, Rational>> out(L.size());
  for (int j = 0; j < L.size(); ++j)
    for (const auto& f : L.faces[j]) {
      const Rational e = L.offset(j, {f.k, f.shift})[0];
      (e > 0 ? out[j].first : out[j].second) = abs(e);
    }
  return out;
}

Outcome zero_mean_suite() {
  Outcome o;
  const auto sys = transport({0.8, 0.6});
  for (const auto& name : kZeroMeanSchemes) {
    const int p = scheme_info(name).design_order;
    double worst = 0.0;
    int failures = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto pair = assemble_on_mesh<double>(name, perturbed_pattern(seed), sys);
      const auto zm = zero_mean_check(pair, sys, p);
      worst = std::max(worst, zm.worst);
      if (!zm.zero_mean) ++failures;
    }
    o.info.push_back(name + ": worst |mean error|/scale over degree " + std::to_string(p + 1) + " = " + fmt(worst) +
                     " (" + std::to_string(failures) + "/20 meshes fail)");
    o.require(failures == 0, name + " zero mean at 1e-11·scale");
  }
  o.summary = "zero mean error on 20 perturbed meshes";
  return o;
}

Outcome fc_1d_contrast() {
  Outcome o;
  CaseSpec c;
  c.velocity = {1.0, 0.0};
  c.initial = "sine";
  const auto pattern = build_1d_pattern_exact(random_steps(2024, 8));
  const auto family = replicate_family(pattern, {4, 8, 16, 32, 64});
  for (const auto& [name, lo, hi] : {std::tuple{"fc-xg", 2.8, 3.3}, std::tuple{"fc-xg-mod", 1.8, 2.3}}) {
    const auto study = convergence_study(c, name, family);
    std::string orders;
    for (const auto& l : study.levels) orders += " " + fmt(l.order);
    o.info.push_back(std::string(name) + " orders:" + orders);
    const bool ok = study.failure.empty() && study.levels.size() == 5 && study.levels.back().order >= lo &&
                    study.levels.back().order <= hi;
    o.require(ok, std::string(name) + " finest order in [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  o.summary = "1D flux correction: fc-xg third order, fc-xg-mod second order";
  return o;
}

Outcome closed_form_mean() {
  Outcome o;
  const auto sys = transport({1.0});
  double worst_literal = 0.0, worst_corrected = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto mesh = random_1d_mesh(seed, 6);
    const auto xg = assemble_on_mesh<Rational>("fc-xg", mesh, sys);
    const auto mod = assemble_on_mesh<Rational>("fc-xg-mod", mesh, sys);
    const auto f = scalar_poly(Polynomial<Rational>::monomial(3, 0, Rational(4)));
    const Rational diff = truncation_error(mod, sys, f).mean[0] - truncation_error(xg, sys, f).mean[0];
    Rational literal = 0, corrected = 0;
    const auto steps = node_steps(*xg.layout);
    for (int j = 0; j < xg.dofs(); ++j) {
      const auto& [hp, hm] = steps[j];
      const Rational hbar = xg.layout->volume[j];
      literal -= hbar * (hp * hp - hm * hm) * (hp * hp - hm * hm);
      corrected -= hbar * (hp - hm) * (hp - hm);
    }
    worst_literal = std::max(worst_literal, relative_gap(diff.get_d(), literal.get_d()));
    worst_corrected = std::max(worst_corrected, relative_gap(diff.get_d(), corrected.get_d()));
    if (seed == 1)
      o.info.push_back("mesh 1: measured " + fmt(diff.get_d(), 10) + ", literal expression " + fmt(literal.get_d(), 10) +
                       ", -sum hbar (h+ - h-)^2 = " + fmt(corrected.get_d(), 10));
  }
  o.info.push_back("worst relative gap to the literal expression: " + fmt(worst_literal));
  o.info.push_back("worst relative gap to -sum hbar (h+ - h-)^2: " + fmt(worst_corrected));
  o.require(worst_literal <= 1e-12, "mean error difference equals -sum hbar (h+^2 - h-^2)^2");
  o.summary = "mean error difference of fc-xg-mod and fc-xg on 4x^3";
  return o;
}

Outcome bbr3_ti() {
  Outcome o;
  const Rational h(1, 5);
  const Vec2<Rational> e1{h, Rational(0)}, e2{h / 2, 5 * h / 6};
  const auto mesh = build_ti_triangular_exact(e1, e2, {5, 6});
  const Vec2<double> w{0.7, -0.3};
  const auto sys = transport({w[0], w[1]});
  const auto pair = assemble_on_mesh<Rational>("bbr3", mesh, sys);
  const auto& L = *pair.layout;

  bool p2 = true;
  for (int q = 0; q <= 2; ++q)
    for (const auto& [a, b] : monomials_of_degree(2, q))
      for (const auto& e : truncation_error(pair, sys, scalar_poly(Polynomial<Rational>::monomial(a, b))).eps)
        p2 = p2 && e == 0;
  o.require(p2, "zero truncation error on P2");

  // Cubics with A·∇f = 0 are polynomials in s = −ω_y x + ω_x y.
  const Rational wx = sys.exact_matrices()[0](0, 0), wy = sys.exact_matrices()[1](0, 0);
  Polynomial<Rational> s;
  s.add_term(1, 0, -wy);
  s.add_term(0, 1, wx);
  bool steady_mean = true;
  Polynomial<Rational> power = s;
  for (int q = 1; q <= 3; ++q, power = power * s)
    steady_mean = steady_mean && truncation_error(pair, sys, scalar_poly(power)).mean[0] == 0;
  o.require(steady_mean, "zero mean on cubics with A·grad f = 0");

  const Rational V = cross(e1, e2);
  const Vec2<Rational> e21 = e2 - e1;
  Rng rng(41);
  double worst = 0.0;
  int pairs = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_polynomial(rng, 3);
    const auto g = sys.apply_to_gradient(scalar_poly(f)).comp[0];
    const auto eps = truncation_error(pair, sys, scalar_poly(f)).eps;
    for (int a = 0; a < L.size(); ++a)
      for (const auto& face : L.faces[a]) {
        const Vec2<Rational> edge = face.p1 - face.p0;
        if (cross(edge, e21) != 0) continue;
        const Vec2<Rational> r0{(face.p0[0] + face.p1[0]) / 2, (face.p0[1] + face.p1[1]) / 2};
        const Rational lhs = L.volume[a] * eps[a] + L.volume[face.k] * eps[face.k];
        const Rational rhs = -V / 72 * (second_directional(g, e1, r0) + second_directional(g, e2, r0) +
                                        second_directional(g, e21, r0));
        worst = std::max(worst, std::fabs(Rational(lhs - rhs).get_d()) / std::max(std::fabs(rhs.get_d()), 1e-300));
        ++pairs;
      }
  }
  o.info.push_back("pair residual vs closed form on " + std::to_string(pairs) + " pairs: worst relative gap " + fmt(worst));
  o.require(pairs > 0 && worst <= 1e-12, "pair residual closed form");
  o.summary = "BBR3 on a TI mesh: 2-exact, zero steady mean, pair residual formula";
  return o;
}

Outcome vortex_orders() {
  Outcome o;
  const auto family = ti_family({10, 20, 40, 80, 160});
  CaseSpec c;
  c.system = "lee";
  c.initial = "vortex";
  c.final_time = 1.0;

  c.velocity = {0.0, 0.0};
  const auto steady = convergence_study(c, "bbr3", family);
  c.velocity = {0.4, 0.0};
  const auto advected = convergence_study(c, "bbr3", family);
  for (const auto* s : {&steady, &advected}) {
    std::string row;
    for (const auto& l : s->levels) row += " h=1/" + std::to_string(static_cast<int>(std::lround(1 / l.h))) + " e=" +
                                           fmt(l.error) + (l.order > 0 ? " p=" + fmt(l.order) : "");
    o.info.push_back((s == &steady ? "steady:" : "advected:") + row);
  }
  o.require(steady.failure.empty() && advected.failure.empty() && steady.levels.size() == 5 && advected.levels.size() == 5,
            "all levels ran");
  if (!o.pass) return o;
  for (std::size_t i = 2; i < 5; ++i)
    o.require(steady.levels[i].order >= 2.8 && steady.levels[i].order <= 3.2, "steady order in [2.8, 3.2]");
  const double finest = advected.levels[4].order, previous = advected.levels[3].order;
  o.require(finest >= 1.9 && finest <= 2.4, "advected finest order in [1.9, 2.4]");
  o.require(finest <= previous, "advected orders decrease toward 2");
  o.summary = "BBR3 vortex orders on regular triangular meshes";
  return o;
}

Outcome fc_ti_3exact() {
  Outcome o;
  const Rational h(1, 5);
  const auto mesh = build_ti_triangular_exact({h, Rational(0)}, {h / 2, 5 * h / 6}, {5, 6});
  const auto sys = transport({0.7, -0.3});
  const auto pair = assemble_on_mesh<Rational>("fc-xg", mesh, sys);
  int nonzero = 0;
  for (int q = 0; q <= 3; ++q)
    for (const auto& [a, b] : monomials_of_degree(2, q))
      for (const auto& e : truncation_error(pair, sys, scalar_poly(Polynomial<Rational>::monomial(a, b))).eps)
        nonzero += e != 0;
  o.info.push_back("nonzero entries of the exact truncation error over the P3 basis: " + std::to_string(nonzero));
  o.require(nonzero == 0, "fc-xg zero truncation error on P3");
  o.summary = "extended-Galerkin FC is 3-exact on a TI mesh";
  return o;
}

Outcome geometry_oracles() {
  Outcome o;
  Rng rng(2718);
  auto random_triangle = [&rng]() {
    for (;;) {
      std::vector<Vec2<double>> v;
      for (int i = 0; i < 3; ++i) v.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      if (cross(v[1] - v[0], v[2] - v[0]) > 1e-3) return v;
    }
  };
  auto exact = [](const std::vector<Vec2<double>>& v) {
    std::vector<Vec2<Rational>> r;
    for (const auto& p : v) r.push_back({exact_rational(p[0]), exact_rational(p[1])});
    return r;
  };
  double quad = 0.0, moments = 0.0, normals = 0.0, identity = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto v = random_triangle();
    const auto vr = exact(v);
    for (int q = 0; q <= 2; ++q)
      for (const auto& [a, b] : monomials_of_degree(2, q)) {
        const auto f = Polynomial<double>::monomial(a, b);
        const double ref = simplex_integral(vr, 2, Polynomial<Rational>::monomial(a, b)).get_d();
        quad = std::max(quad, std::fabs(simplex_quadrature_2exact(v, 2, f) - ref));
      }
    const Vec2<double> dir{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Vec2<Rational> dir_r{exact_rational(dir[0]), exact_rational(dir[1])};
    const double ref = second_moment_exact(vr, 2, dir_r).get_d();
    moments = std::max({moments, std::fabs(second_moment_vertex_form(v, 2, dir) - ref),
                        std::fabs(second_moment_pairwise_form(v, 2, dir) - ref)});

    const auto mesh = perturbed_pattern(1000 + t, 2);
    for (int e = 0; e < mesh.element_count(); ++e)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          if (a == b) continue;
          const auto formula = to_double(element_face_normal<Rational>(mesh, e, a, b));
          const auto geo = element_face_normal_geometric(mesh, e, a, b);
          normals = std::max(normals, norm(formula - geo));
        }
    const auto L = median_dual_layout<double>(mesh);
    for (int j = 0; j < L.size(); ++j) {
      double m[2][2] = {{0, 0}, {0, 0}};
      for (const auto& f : L.faces[j]) {
        const auto rk = L.position(f.k, f.shift);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) m[a][b] += f.normal[a] * (rk[b] + L.point[j][b]) / 2;
      }
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) identity = std::max(identity, std::fabs(m[a][b] / L.volume[j] - (a == b ? 1.0 : 0.0)));
    }
  }
  o.info.push_back("2-exact quadrature: " + fmt(quad) + "; second moments: " + fmt(moments) + "; n_jk formula: " +
                   fmt(normals) + "; 1-exactness identity: " + fmt(identity));
  o.require(quad <= 1e-13, "quadrature 2-exactness");
  o.require(moments <= 1e-13, "second moment closed forms");
  o.require(normals <= 1e-13, "barycentric n_jk formula");
  o.require(identity <= 1e-13, "median dual 1-exactness identity");
  o.summary = "geometry oracles on 100 random instances";
  return o;
}

Outcome criterion_wiring() {
  Outcome o;
  CaseSpec c;
  c.velocity = {1.0, 0.0};
  c.initial = "sine";

  const auto checker = build_1d_pattern_exact({Rational(1, 4), Rational(3, 4)});
  const auto sys1 = transport({1.0});
  const auto galerkin = assemble_on_mesh<double>("eb-central", checker, sys1);
  const auto spectrum = restricted_spectrum(galerkin);
  const auto kernel = kernel_check(spectrum, 1);
  const auto eps = truncation_error(galerkin, sys1, MultiPolynomial<double>::unit_monomial(1, 0, 2, 0)).eps;
  const auto member = image_membership(galerkin, spectrum, eps);
  // The alternating O(h) error mode travels against the data; at T = 1 its forcing
  // integrates over whole periods of the sine and cancels, so a generic T is used.
  CaseSpec generic = c;
  generic.final_time = 0.75;
  const auto study = convergence_study(generic, "eb-central", replicate_family(checker, {8, 16, 32, 64}));
  const double order = study.levels.empty() ? 0.0 : study.levels.back().order;
  o.info.push_back("checkerboard Galerkin: kernel dimension " + std::to_string(kernel.dimension) +
                   (kernel.holds ? " (holds)" : " (fails)") + ", membership residual of eps(x^2) " + fmt(member.residual) +
                   ", order " + fmt(order) + " at T = 0.75");
  o.require(!kernel.holds, "checkerboard kernel_check fails");
  o.require(member.residual > 1e-3, "checkerboard eps(x^2) outside the image");
  o.require(study.failure.empty() && order <= 1.5, "checkerboard order <= 1.5");

  c.velocity = {1.0, 0.5};
  const auto sys2 = transport({1.0, 0.5});
  const auto pattern = perturb_nodes(fvs::testing::ti_pattern(4), 0.03, 11);
  const auto family = replicate_family(pattern, {2, 4, 8, 16});
  for (const auto& name : kZeroMeanSchemes) {
    const int p = scheme_info(name).design_order;
    const auto k = kernel_check(assemble_on_mesh<double>(name, pattern, sys2));
    if (!k.holds) {
      o.info.push_back(name + ": kernel dimension " + std::to_string(k.dimension) + ", criterion does not apply");
      continue;
    }
    const auto s = convergence_study(c, name, family);
    std::string orders;
    for (const auto& l : s.levels) orders += " " + fmt(l.order);
    if (!s.failure.empty()) orders += " [aborted: " + s.failure + "]";
    o.info.push_back(name + " (p=" + std::to_string(p) + ") orders:" + orders);
    const bool ok = s.failure.empty() && s.levels.size() == 4 && s.levels.back().order >= p + 0.7;
    o.require(ok, name + " order >= p + 0.7");
  }
  o.summary = "supra-convergence criterion wiring";
  return o;
}

Outcome scaling_invariance() {
  Outcome o;
  const auto sys = transport({0.7, -0.3});
  const auto pattern = perturbed_pattern(29, 2);
  double worst = 0.0;
  for (const std::string name : {"fv-p1", "eb-upwind", "fc-xg"}) {
    std::vector<SchemeConstants> c;
    for (int copies : {1, 2, 4}) {
      const auto pair = assemble_on_mesh<double>(name, replicate_scale(pattern, copies), sys);
      c.push_back(scheme_constants(pair, sys, pair.design_order));
    }
    double scheme_worst = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i)
      for (auto [x, y] : {std::pair{c[0].C_A, c[i].C_A}, {c[0].C_W, c[i].C_W}, {c[0].C_m, c[i].C_m},
                          {c[0].C_a, c[i].C_a}, {c[0].C_v, c[i].C_v}, {c[0].C_a_tilde, c[i].C_a_tilde},
                          {c[0].C_eps, c[i].C_eps}})
        scheme_worst = std::max(scheme_worst, relative_gap(y, x));
    o.info.push_back(name + ": C_A=" + fmt(c[0].C_A) + " C_W=" + fmt(c[0].C_W) + " C_eps=" + fmt(c[0].C_eps) +
                     ", worst relative change " + fmt(scheme_worst));
    worst = std::max(worst, scheme_worst);
  }
  o.require(worst <= 1e-10, "constants invariant to 1e-10");
  o.summary = "scheme constants invariant under replicate_scale N = 1, 2, 4";
  return o;
}

Outcome fully_discrete_bound() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pattern = random_1d_mesh(100 + seed, 6);
    std::vector<FullyDiscreteResult> runs;
    for (int copies : {16, 32}) {
      const auto mesh = replicate_scale(pattern, copies);
      const auto L = median_dual_layout<double>(mesh);
      double hbar_min = 1.0;
      for (double v : L.volume) hbar_min = std::min(hbar_min, v);
      runs.push_back(fully_discrete_upwind(mesh, 1.0, hbar_min));
    }
    const double order = std::log(runs[0].max_error / runs[1].max_error) / std::log(runs[0].h_max / runs[1].h_max);
    o.info.push_back("mesh " + std::to_string(seed) + ": errors " + fmt(runs[0].max_error) + ", " +
                     fmt(runs[1].max_error) + ", worst error/bound " +
                     fmt(std::max(runs[0].worst_bound_ratio, runs[1].worst_bound_ratio)) + ", order " + fmt(order) + " at T = 0.75");
    o.require(runs[0].bound_holds && runs[1].bound_holds, "bound holds at every step");
    o.require(order >= 0.8 && order <= 1.2, "order in [0.8, 1.2]");
  }
  o.summary = "fully discrete upwind error bound and first order";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {zero_mean_suite,  fc_1d_contrast,   closed_form_mean,
                                                           bbr3_ti,          vortex_orders,    fc_ti_3exact,
                                                           geometry_oracles, criterion_wiring, scaling_invariance,
                                                           fully_discrete_bound};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion '" << argv[i] << "' (expected 1.." << criteria.size() << ")\n";
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = "aborted";
      o.info.push_back(e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& line : o.info) std::cout << "  [" << k << "] " << line << "\n";
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << o.summary << " (" << fmt(seconds, 3)
              << " s)\n"
              << std::flush;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
