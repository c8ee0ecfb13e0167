#include <cmath>

#include "doctest.h"
#include "fvs/layout.hpp"
#include "fvs/projection.hpp"
#include "fvs/quadrature.hpp"
#include "fvs/system.hpp"
#include "support.hpp"

using namespace fvs;

namespace {

std::vector<Vec2<Rational>> random_triangle(Rng& rng) {
  for (;;) {
    std::vector<Vec2<Rational>> v;
    for (int i = 0; i < 3; ++i) {
      Rational x(rng.integer(-100, 100), 37), y(rng.integer(-100, 100), 41);
      x.canonicalize();
      y.canonicalize();
      v.push_back({x, y});
    }
    if (cross(v[1] - v[0], v[2] - v[0]) > 0) return v;
  }
}

std::vector<Vec2<double>> as_double(const std::vector<Vec2<Rational>>& v) {
  std::vector<Vec2<double>> out;
  for (const auto& p : v) out.push_back(to_double(p));
  return out;
}

}  // namespace

TEST_CASE("transport decomposition is the scalar speed") {
  const auto sys = transport({0.7, -0.2});
  const auto dec = flux_jacobian_decomposition(sys, {0.6, 0.8});
  CHECK(dec.lambda.size() == 1);
  CHECK(dec.lambda(0) == doctest::Approx(0.7 * 0.6 - 0.2 * 0.8));
  CHECK(dec.abs_matrix()(0, 0) == doctest::Approx(std::fabs(0.42 - 0.16)));
}

TEST_CASE("linearized Euler matrices and acoustic eigenvalues") {
  const auto sys = linearized_euler({0.4, -0.3});
  const Eigen::MatrixXd& Ax = sys.matrix(0);
  const Eigen::MatrixXd& Ay = sys.matrix(1);
  CHECK(Ax(0, 0) == doctest::Approx(0.4));
  CHECK(Ax(0, 1) == doctest::Approx(1.0));
  CHECK(Ax(0, 2) == 0.0);
  CHECK(Ax(0, 3) == 0.0);
  CHECK(Ay(3, 0) == 0.0);
  CHECK(Ay(3, 1) == 0.0);
  CHECK(Ay(3, 2) == doctest::Approx(1.0));
  CHECK(Ay(3, 3) == doctest::Approx(-0.3));

  const auto rest = linearized_euler({0.0, 0.0});
  auto lambda = flux_jacobian_decomposition(rest, {1.0, 0.0}).lambda;
  std::sort(lambda.data(), lambda.data() + lambda.size());
  CHECK(lambda(0) == doctest::Approx(-1.0));
  CHECK(std::fabs(lambda(1)) < 1e-12);
  CHECK(std::fabs(lambda(2)) < 1e-12);
  CHECK(lambda(3) == doctest::Approx(1.0));
}

TEST_CASE("decompositions reconstruct A·n and agree with the closed forms") {
  Rng rng(11);
  const auto sys = linearized_euler({0.4, 0.1});
  for (int i = 0; i < 20; ++i) {
    const double th = rng.uniform(0.0, 2.0 * M_PI), r = rng.uniform(0.1, 3.0);
    const Vec2<double> nvec{r * std::cos(th), r * std::sin(th)};
    const auto dec = flux_jacobian_decomposition(sys, nvec);
    const Eigen::MatrixXd An = sys.directional(nvec);
    const Eigen::MatrixXd back = dec.S * dec.lambda.asDiagonal() * dec.S_inv;
    CHECK((back - An).norm() <= 1e-12 * An.norm());
    const auto exact = analytic_decomposition(sys, nvec);
    CHECK((exact.abs_matrix() - dec.abs_matrix()).norm() <= 1e-12 * An.norm());
  }
}

TEST_CASE("absolute value of a diagonal spectrum") {
  Eigen::MatrixXd a(2, 2);
  a << -2, 0, 0, 3;
  const HyperbolicSystem sys(1, {a});
  const auto dec = flux_jacobian_decomposition(sys, {1.0, 0.0});
  const Eigen::MatrixXd abs = dec.abs_matrix();
  CHECK(abs(0, 0) == doctest::Approx(2.0));
  CHECK(abs(1, 1) == doctest::Approx(3.0));
  CHECK(std::fabs(abs(0, 1)) < 1e-14);
}

TEST_CASE("complex spectra are rejected") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, -1, 0;
  CHECK_THROWS(HyperbolicSystem(1, {a}));
}

TEST_CASE("upwind flux: pure upwind, consistency and antisymmetry") {
  const auto scalar = transport({2.0});
  Eigen::VectorXd uL(1), uR(1);
  uL << 3.0;
  uR << -5.0;
  CHECK(upwind_face_flux(scalar, {1.0, 0.0}, uL, uR)(0) == doctest::Approx(6.0));
  CHECK(upwind_face_flux(scalar, {-1.0, 0.0}, uL, uR)(0) == doctest::Approx(10.0));

  const auto sys = linearized_euler({0.4, 0.2});
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd a(4), b(4);
    for (int c = 0; c < 4; ++c) {
      a(c) = rng.uniform(-1, 1);
      b(c) = rng.uniform(-1, 1);
    }
    const Vec2<double> nvec{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Eigen::VectorXd same = upwind_face_flux(sys, nvec, a, a);
    CHECK((same - sys.directional(nvec) * a).norm() <= 1e-12);
    const Eigen::VectorXd fwd = upwind_face_flux(sys, nvec, a, b);
    const Eigen::VectorXd bwd = upwind_face_flux(sys, {-nvec[0], -nvec[1]}, b, a);
    CHECK((fwd + bwd).norm() <= 1e-12);
  }
}

TEST_CASE("polynomial derivative matches central differences") {
  Polynomial<double> f = Polynomial<double>::monomial(3, 1, 2.0) + Polynomial<double>::monomial(0, 2, -1.5) +
                         Polynomial<double>::monomial(1, 0, 0.3);
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Vec2<double> r{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (int axis = 0; axis < 2; ++axis) {
      const double step = 1e-4;
      Vec2<double> p = r, m = r;
      p[axis] += step;
      m[axis] -= step;
      const double fd = (f.eval(p) - f.eval(m)) / (2 * step);
      CHECK(f.derivative(axis).eval(r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("projection of constants and linear functions") {
  const auto mesh = build_ti_triangular_exact({Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {1, 1});
  const auto L = cell_layout<Rational>(mesh);
  MultiPolynomial<Rational> c(1);
  c.comp[0] = Polynomial<Rational>::constant(Rational(7, 3));
  for (auto kind : {ProjectionKind::pointwise, ProjectionKind::cell_average})
    for (const auto& v : project(L, kind, c)) CHECK(v == Rational(7, 3));

  const auto x = MultiPolynomial<Rational>::unit_monomial(1, 0, 1, 0);
  auto avg = project(L, ProjectionKind::cell_average, x);
  std::sort(avg.begin(), avg.end());
  CHECK(avg == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});
}

TEST_CASE("exact integration of x² on the unit right triangle") {
  const std::vector<Vec2<Rational>> tri{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  const auto x2 = Polynomial<Rational>::monomial(2, 0);
  CHECK(simplex_integral(tri, 2, x2) / simplex_measure(tri, 2) == Rational(1, 6));
  CHECK(integrate_polygon(x2, tri) == Rational(1, 12));
}

TEST_CASE("2-exact simplex rule") {
  const auto w1 = simplex_rule_weights<Rational>(1);
  CHECK(w1.vertex == Rational(1, 6));
  CHECK(w1.midpoint == Rational(2, 3));
  const auto w2 = simplex_rule_weights<Rational>(2);
  CHECK(w2.vertex * 3 + w2.midpoint * 3 == 1);

  const std::vector<Vec2<Rational>> tri{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  CHECK(simplex_quadrature_2exact(tri, 2, Polynomial<Rational>::constant(Rational(1))) == Rational(1, 2));
  CHECK(simplex_quadrature_2exact(tri, 2, Polynomial<Rational>::monomial(1, 1)) == Rational(1, 24));

  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_triangle(rng);
    for (int q = 0; q <= 2; ++q)
      for (auto [a, b] : monomials_of_degree(2, q)) {
        const auto f = Polynomial<Rational>::monomial(a, b);
        CHECK(simplex_quadrature_2exact(v, 2, f) == simplex_integral(v, 2, f));
      }
    // The rule is not 3-exact in general.
    if (t == 0) CHECK(simplex_quadrature_2exact(v, 2, Polynomial<Rational>::monomial(3, 0)) !=
                      simplex_integral(v, 2, Polynomial<Rational>::monomial(3, 0)));
  }
  const std::vector<Vec2<Rational>> seg{{Rational(1, 3), Rational(0)}, {Rational(2), Rational(0)}};
  for (int q = 0; q <= 3; ++q) {
    const auto f = Polynomial<Rational>::monomial(q, 0);
    CHECK(simplex_quadrature_2exact(seg, 1, f) == simplex_integral(seg, 1, f));
  }
}

TEST_CASE("second moments: closed forms against exact integrals") {
  const std::vector<Vec2<Rational>> unit{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}};
  CHECK(second_moment_vertex_form(unit, 1, {Rational(1), Rational(0)}) == Rational(1, 12));
  CHECK(second_moment_exact(unit, 1, {Rational(1), Rational(0)}) == Rational(1, 12));

  // A direction orthogonal to every edge only exists in 1D: a segment with dir (0, 1).
  CHECK(second_moment_vertex_form(unit, 1, {Rational(0), Rational(1)}) == 0);

  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_triangle(rng);
    Rational dx(rng.integer(-9, 9), 7), dy(rng.integer(-9, 9), 5);
    dx.canonicalize();
    dy.canonicalize();
    const Vec2<Rational> dir{dx, dy};
    const Rational exact = second_moment_exact(v, 2, dir);
    CHECK(second_moment_vertex_form(v, 2, dir) == exact);
    CHECK(second_moment_pairwise_form(v, 2, dir) == exact);
    const auto vd = as_double(v);
    const double fd = second_moment_pairwise_form(vd, 2, to_double(dir));
    CHECK(std::fabs(fd - exact.get_d()) <= 1e-13 * std::max(1.0, std::fabs(exact.get_d())));
  }
}

TEST_CASE("edge-sum identity on median dual layouts") {
  // Σ_j Σ_k (e·(r_k − r_j))³ n_jk = +12(d+1) e Σ_elements M_{v,e}; a single 1D
  // segment of length h gives 2h³ on the left and 24·h³/12 on the right.
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto mesh = fvs::testing::perturbed_pattern(seed);
    const auto L = median_dual_layout<Rational>(mesh);
    Rng rng(seed);
    const Vec2<Rational> e{Rational(rng.integer(1, 9)), Rational(rng.integer(-9, 9))};
    Vec2<Rational> lhs{Rational(0), Rational(0)};
    for (int j = 0; j < L.size(); ++j)
      for (const auto& f : L.faces[j]) {
        const Rational s = dot(e, L.offset(j, {f.k, f.shift}));
        lhs = lhs + scaled(f.normal, Rational(s * s * s));
      }
    Rational moments = 0;
    for (int el = 0; el < mesh.element_count(); ++el) {
      std::vector<Vec2<Rational>> v;
      for (int i = 0; i < 3; ++i) v.push_back(mesh.position<Rational>(mesh.elements[el].v[i].node, mesh.elements[el].v[i].shift));
      moments += second_moment_exact(v, 2, e);
    }
    CHECK(lhs[0] == 36 * e[0] * moments);
    CHECK(lhs[1] == 36 * e[1] * moments);
  }

  const auto line = fvs::testing::random_1d_mesh(3);
  const auto L1 = median_dual_layout<Rational>(line);
  Rational lhs = 0, moments = 0;
  for (int j = 0; j < L1.size(); ++j)
    for (const auto& f : L1.faces[j]) {
      const Rational s = L1.offset(j, {f.k, f.shift})[0];
      lhs += s * s * s * f.normal[0];
    }
  for (int el = 0; el < line.element_count(); ++el) {
    const Rational len = line.measure<Rational>(el);
    moments += len * len * len / 12;
  }
  CHECK(lhs == 24 * moments);
}
