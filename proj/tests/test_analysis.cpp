#include <cmath>

#include "doctest.h"
#include "fvs/analysis.hpp"
#include "fvs/schemes.hpp"
#include "support.hpp"

using namespace fvs;
using fvs::testing::perturbed_pattern;
using fvs::testing::random_1d_mesh;
using fvs::testing::ti_pattern;

namespace {

MultiPolynomial<Rational> scalar_monomial(int px, int py, const Rational& c = Rational(1)) {
  return MultiPolynomial<Rational>::unit_monomial(1, 0, px, py, c);
}

PeriodicMesh checkerboard() { return build_1d_pattern_exact({Rational(1, 4), Rational(3, 4)}); }

}  // namespace

TEST_CASE("truncation error vanishes on constants") {
  const auto mesh = perturbed_pattern(3);
  for (const auto& sys : {transport({0.7, -0.3}), linearized_euler({0.4, 0.0})}) {
    for (const auto& info : scheme_registry()) {
      if (info.name == "fc-xg-mod") continue;
      CAPTURE(info.name);
      const auto pair = assemble_on_mesh<double>(info.name, mesh, sys);
      for (int a = 0; a < sys.n(); ++a) {
        MultiPolynomial<double> f(sys.n());
        f.comp[a] = Polynomial<double>::constant(2.5);
        const auto rep = truncation_error(pair, sys, f);
        CHECK(rep.max_abs <= 1e-13);
      }
    }
  }
}

TEST_CASE("basic FV truncation error of x^2/2 on a uniform 1D mesh is -h/2") {
  const Rational h(1, 10);
  const auto mesh = build_1d_pattern_exact(std::vector<Rational>(10, h));
  const auto sys = transport({1.0});
  const auto pair = assemble_on_mesh<Rational>("basic", mesh, sys);
  const auto rep = truncation_error(pair, sys, scalar_monomial(2, 0, Rational(1, 2)));
  for (const auto& e : rep.eps) CHECK(e == -h / 2);
  CHECK(rep.mean[0] == -h / 2);
}

TEST_CASE("BBR3 truncation error vanishes on quadratics of a TI mesh") {
  const auto sys = transport({0.7, -0.3});
  const auto pair = assemble_on_mesh<Rational>("bbr3", ti_pattern(4), sys);
  for (const auto& [px, py] : monomials_of_degree(2, 2)) {
    const auto rep = truncation_error(pair, sys, scalar_monomial(px, py));
    for (const auto& e : rep.eps) CHECK(e == 0);
  }
}

TEST_CASE("exactness orders of the scheme families") {
  const auto sys = transport({0.7, -0.3});
  const auto mesh = perturbed_pattern(5);
  CHECK(exactness_order(assemble_on_mesh<Rational>("basic", mesh, sys), sys, 3).order == 0);
  CHECK(exactness_order(assemble_on_mesh<double>("fv-p2", mesh, sys), sys, 4).order == 2);
  CHECK(exactness_order(assemble_on_mesh<double>("eb-central", mesh, sys), sys, 4).order == 1);
  for (const std::string name : {"fc-steady", "fc-div", "fc-xg"}) {
    CAPTURE(name);
    CHECK(exactness_order(assemble_on_mesh<double>(name, mesh, sys), sys, 4).order == 2);
  }
  const auto ti = assemble_on_mesh<Rational>("fc-xg", ti_pattern(4), sys);
  const auto result = exactness_order(ti, sys, 4);
  CHECK(result.order == 3);
  CHECK(!result.first_failure.empty());
}

TEST_CASE("zero mean error of reconstruction and edge-based schemes") {
  const auto sys = transport({0.7, -0.3});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto mesh = perturbed_pattern(seed);
    for (const std::string name : {"fv-p1", "fv-p2", "eb-central", "eb-upwind", "fc-xg"}) {
      CAPTURE(name);
      const auto pair = assemble_on_mesh<double>(name, mesh, sys);
      const auto zm = zero_mean_check(pair, sys, pair.design_order);
      CHECK(zm.zero_mean);
      CHECK(zm.worst <= 1e-11);
    }
  }
  const auto exact = assemble_on_mesh<Rational>("eb-upwind", perturbed_pattern(4), sys);
  CHECK(zero_mean_check(exact, sys, 1).zero_mean);
}

TEST_CASE("rational and floating paths agree on verdicts") {
  const auto sys = transport({0.7, -0.3});
  const auto mesh = perturbed_pattern(8);
  for (const std::string name : {"fv-p1", "bbr3", "fc-steady", "fc-xg"}) {
    CAPTURE(name);
    const auto d = assemble_on_mesh<double>(name, mesh, sys);
    const auto r = assemble_on_mesh<Rational>(name, mesh, sys);
    const int pd = exactness_order(d, sys, 3).order;
    CHECK(pd == exactness_order(r, sys, 3).order);
    CHECK(zero_mean_check(d, sys, pd).zero_mean == zero_mean_check(r, sys, pd).zero_mean);
  }
}

TEST_CASE("C_A is invariant under replicate_scale") {
  const auto sys = transport({0.7, -0.3});
  const auto pattern = perturbed_pattern(6, 2);
  for (const std::string name : {"fv-p1", "eb-upwind", "fc-xg"}) {
    CAPTURE(name);
    const auto base = compute_CA(assemble_on_mesh<double>(name, pattern, sys));
    REQUIRE_FALSE(base.degenerate);
    for (int copies : {2, 4}) {
      const auto scaled = compute_CA(assemble_on_mesh<double>(name, replicate_scale(pattern, copies), sys));
      CHECK(std::fabs(scaled.value - base.value) <= 1e-10 * base.value);
    }
  }
}

TEST_CASE("C_A and kernel are unchanged by translating the mesh") {
  const auto sys = transport({0.7, -0.3});
  const auto mesh = perturbed_pattern(6, 2);
  const auto moved = translate_mesh(mesh, {Rational(1, 3), Rational(1, 5)});
  const auto a = assemble_on_mesh<double>("bbr3", mesh, sys);
  const auto b = assemble_on_mesh<double>("bbr3", moved, sys);
  CHECK(compute_CA(a).value == doctest::Approx(compute_CA(b).value).epsilon(1e-10));
  CHECK(kernel_check(a).dimension == kernel_check(b).dimension);
}

TEST_CASE("degenerate restricted operators") {
  const auto sys = transport({1.0});
  // One node per period: Ă is the zero 1×1 matrix.
  const auto single = assemble_on_mesh<double>("basic", build_1d_pattern({1.0}), sys);
  CHECK(compute_CA(single).degenerate);

  const auto galerkin = assemble_on_mesh<double>("eb-central", checkerboard(), sys);
  const auto spectrum = restricted_spectrum(galerkin);
  CHECK(spectrum.rank == 0);
  CHECK(compute_CA(spectrum).degenerate);
  const auto kernel = kernel_check(spectrum, 1);
  CHECK(kernel.dimension == 2);
  CHECK_FALSE(kernel.holds);
}

TEST_CASE("kernel of upwind schemes holds the constants") {
  const auto mesh = perturbed_pattern(7, 2);
  const auto sys = transport({0.7, -0.3});
  for (const std::string name : {"basic", "fv-p1", "bbr3", "eb-upwind", "fc-xg"}) {
    CAPTURE(name);
    const auto k = kernel_check(assemble_on_mesh<double>(name, mesh, sys));
    CHECK(k.dimension == 1);
    CHECK(k.holds);
  }
  const auto lee = linearized_euler({0.4, 0.0});
  const auto k = kernel_check(assemble_on_mesh<double>("fc-xg", ti_pattern(4), lee));
  CHECK(k.dimension == 4);
  CHECK(k.constant);
  CHECK(k.holds);
}

TEST_CASE("image membership of the truncation error") {
  const auto sys = transport({1.0});
  const auto mesh = random_1d_mesh(12, 7);

  // Below degree 3 the error is exactly zero; the rational path sees that.
  const auto exact = assemble_on_mesh<Rational>("fc-xg", mesh, sys);
  const auto s_exact = restricted_spectrum(exact);
  for (int q = 0; q <= 2; ++q) {
    const auto rep = truncation_error(exact, sys, scalar_monomial(q, 0));
    CHECK(image_membership(exact, s_exact, rep.eps).member);
  }
  const auto fc = assemble_on_mesh<double>("fc-xg", mesh, sys);
  const auto cubic = truncation_error(fc, sys, MultiPolynomial<double>::unit_monomial(1, 0, 3, 0));
  CHECK(cubic.norm > 1e-6);
  CHECK(image_membership(fc, restricted_spectrum(fc), cubic.eps).member);

  const auto mod = assemble_on_mesh<double>("fc-xg-mod", mesh, sys);
  const auto rep = truncation_error(mod, sys, MultiPolynomial<double>::unit_monomial(1, 0, 3, 0));
  const auto m = image_membership(mod, restricted_spectrum(mod), rep.eps);
  CHECK_FALSE(m.member);
  CHECK(m.residual > 1e-3);

  const auto galerkin = assemble_on_mesh<double>("eb-central", checkerboard(), sys);
  const auto eps = truncation_error(galerkin, sys, MultiPolynomial<double>::unit_monomial(1, 0, 2, 0)).eps;
  CHECK(image_membership(galerkin, restricted_spectrum(galerkin), eps).residual > 1e-3);

  const MeshField<double> zero(galerkin.size(), 0.0);
  CHECK(image_membership(galerkin, restricted_spectrum(galerkin), zero).member);
}

TEST_CASE("a nonzero mean excludes the truncation error from the image") {
  const auto sys = transport({1.0});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto mod = assemble_on_mesh<double>("fc-xg-mod", random_1d_mesh(seed), sys);
    const auto s = restricted_spectrum(mod);
    const auto zm = zero_mean_check(mod, sys, 2);
    for (const auto& [name, mean] : zm.means) {
      if (std::fabs(mean) <= 1e-11) continue;
      const auto eps = truncation_error(mod, sys, MultiPolynomial<double>::unit_monomial(1, 0, 3, 0)).eps;
      CHECK_FALSE(image_membership(mod, s, eps).member);
    }
  }
}

TEST_CASE("scheme constants") {
  CHECK(monomial_count(1, 2) == 3.0);
  CHECK(monomial_count(2, 2) == 4.0);
  CHECK(monomial_count(2, 1) == 1.0);

  const auto sys = transport({1.0});
  const auto uniform = build_1d_pattern(std::vector<double>(5, 0.2));
  const auto c = scheme_constants(assemble_on_mesh<double>("fv-p1", uniform, sys), sys, 1);
  CHECK(c.C_v == doctest::Approx(1.0));
  CHECK(c.c_p == 1.0);
  CHECK(c.C_W > 0.0);
  CHECK(c.C_Pi == doctest::Approx(c.c_p * c.C_A * c.C_eps));

  const auto pattern = perturbed_pattern(13, 2);
  const auto sys2 = transport({0.7, -0.3});
  const auto a = scheme_constants(assemble_on_mesh<double>("eb-upwind", pattern, sys2), sys2, 1);
  const auto b = scheme_constants(assemble_on_mesh<double>("eb-upwind", replicate_scale(pattern, 2), sys2), sys2, 1);
  for (auto [x, y] : {std::pair{a.C_A, b.C_A}, {a.C_W, b.C_W}, {a.C_m, b.C_m}, {a.C_a, b.C_a}, {a.C_v, b.C_v},
                      {a.C_a_tilde, b.C_a_tilde}, {a.C_eps, b.C_eps}})
    CHECK(std::fabs(x - y) <= 1e-10 * std::fabs(x));
  CHECK(a.c_p == 3.0);
}

TEST_CASE("stability function") {
  const auto sys = transport({1.0});
  const auto basic = assemble_on_mesh<double>("basic", build_1d_pattern(std::vector<double>(16, 1.0 / 16)), sys);
  const auto rep = stability_estimate(basic, sys, {0.0, 0.1, 0.5, 1.0, 2.0});
  CHECK(rep.method == "dense-expm");
  CHECK(rep.K.front() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < rep.K.size(); ++i) {
    CHECK(rep.K[i] >= rep.K[i - 1]);
    CHECK(rep.K[i] <= 1.0 + 1e-10);
  }

  const auto fc = assemble_on_mesh<double>("fc-xg", random_1d_mesh(4, 12), sys);
  const auto sampled = stability_estimate(fc, sys, {0.0, 0.25, 0.5}, 3, 1);
  CHECK(sampled.method == "sampled-rk4");
  CHECK(sampled.K.front() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < sampled.K.size(); ++i) CHECK(sampled.K[i] >= sampled.K[i - 1]);
}
