#include <cmath>

#include "doctest.h"
#include "fvs/layout.hpp"
#include "fvs/mesh.hpp"
#include "support.hpp"

using namespace fvs;
using fvs::testing::perturbed_pattern;
using fvs::testing::ti_pattern;

namespace {

double vec_norm(const Vec2<double>& v) { return std::hypot(v[0], v[1]); }

template <class T> void check_layout_invariants(const ControlVolumeLayout<T>& L, double period_volume) {
  T total(0);
  for (int j = 0; j < L.size(); ++j) {
    total += L.volume[j];
    Vec2<T> sum{T(0), T(0)};
    double scale = 0.0;
    for (const auto& f : L.faces[j]) {
      sum = sum + f.normal;
      scale += vec_norm(to_double(f.normal));
      const auto& back = L.faces[f.k][L.reverse_face(j, f)];
      CHECK(std::fabs(to_double(back.normal[0] + f.normal[0]) - (0.0)) <= 1e-15);
      CHECK(std::fabs(to_double(back.normal[1] + f.normal[1]) - (0.0)) <= 1e-15);
    }
    CHECK(vec_norm(to_double(sum)) <= 1e-13 * scale);
  }
  CHECK(to_double(total) == doctest::Approx(period_volume).epsilon(1e-13));
}

}  // namespace

TEST_CASE("1D patterns: uniform and non-uniform dual volumes") {
  const auto uniform = build_1d_pattern({0.25, 0.25, 0.25, 0.25});
  const auto Lu = median_dual_layout<double>(uniform);
  for (double v : Lu.volume) CHECK(v == doctest::Approx(0.25));

  const auto mesh = build_1d_pattern_exact({Rational(1, 10), Rational(3, 10), Rational(3, 5)});
  CHECK(mesh.nodes_exact[1][0] == Rational(1, 10));
  CHECK(mesh.nodes_exact[2][0] == Rational(2, 5));
  const auto L = median_dual_layout<Rational>(mesh);
  CHECK(L.volume[1] == Rational(1, 5));
  check_layout_invariants(L, 1.0);
  check_layout_invariants(cell_layout<Rational>(mesh), 1.0);

  CHECK_THROWS_AS(build_1d_pattern({0.5, 0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(build_1d_pattern({}), std::invalid_argument);
}

TEST_CASE("checkerboard pattern has alternating dual volumes") {
  const auto mesh = build_1d_pattern({0.25, 0.75});
  const auto L = median_dual_layout<double>(mesh);
  CHECK(L.volume[0] == doctest::Approx(0.5));
  CHECK(L.volume[1] == doctest::Approx(0.5));
  CHECK(mesh.nodes[1][0] == doctest::Approx(0.25));
}

TEST_CASE("regular triangular mesh of the vortex experiment") {
  const Rational h(1, 20);
  const auto mesh = build_ti_triangular_exact({h, Rational(0)}, {Rational(h / 2), Rational(5 * h / 6)}, {20, 24});
  validate_mesh(mesh);
  CHECK(mesh.element_count() == 2 * 20 * 24);
  for (int e = 0; e < mesh.element_count(); ++e) CHECK(mesh.measure<Rational>(e) == Rational(5, 12) * h * h);

  const auto L = median_dual_layout<Rational>(mesh);
  check_layout_invariants(L, 1.0);
  // Six incident triangles: |K_j| = (1/3) · 6 · |e|.
  for (const auto& v : L.volume) CHECK(v == 2 * Rational(5, 12) * h * h);

  CHECK_THROWS_AS(build_ti_triangular({0.05, 0.0}, {0.025, 1.0 / 24}, {20, 23}), std::invalid_argument);
}

TEST_CASE("unit square split into two triangles") {
  const auto mesh = build_ti_triangular_exact({Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {1, 1});
  CHECK(mesh.element_count() == 2);
  const auto L = cell_layout<double>(mesh);
  check_layout_invariants(L, 1.0);
  bool diagonal_found = false;
  for (const auto& f : L.faces[0])
    if (std::fabs(vec_norm(f.normal) - std::sqrt(2.0)) < 1e-14) diagonal_found = true;
  CHECK(diagonal_found);
}

TEST_CASE("sheared lattice triangles have area |e1 x e2| / 2") {
  const Rational h(1, 6);
  const auto mesh = build_ti_triangular_exact({h, Rational(0)}, {Rational(h / 3), h}, {6, 6});
  validate_mesh(mesh);
  for (int e = 0; e < mesh.element_count(); ++e) CHECK(mesh.measure<Rational>(e) == h * h / 2);
}

TEST_CASE("perturbation is deterministic and keeps elements valid") {
  const auto base = ti_pattern(4);
  const auto same = perturb_nodes(base, 0.0, 9);
  CHECK(mesh_to_json(same) == mesh_to_json(base));

  const auto a = perturb_nodes(base, 0.2, 42);
  const auto b = perturb_nodes(base, 0.2, 42);
  CHECK(mesh_to_json(a) == mesh_to_json(b));
  CHECK(mesh_to_json(a) != mesh_to_json(base));
  CHECK_NOTHROW(validate_mesh(a));
  for (int e = 0; e < a.element_count(); ++e) CHECK(a.measure<Rational>(e) > 0);

  CHECK_THROWS_AS(perturb_nodes(base, 0.31, 1), std::invalid_argument);
}

TEST_CASE("replicate_scale tiles scaled copies") {
  const auto pattern = build_1d_pattern_exact({Rational(2, 5), Rational(3, 5)});
  CHECK(mesh_to_json(replicate_scale(pattern, 1)) == mesh_to_json(pattern));
  const auto twice = replicate_scale(pattern, 2);
  const auto L = cell_layout<Rational>(twice);
  REQUIRE(L.size() == 4);
  std::vector<Rational> lengths;
  for (int e = 0; e < twice.element_count(); ++e) lengths.push_back(twice.measure<Rational>(e));
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths == std::vector<Rational>{Rational(1, 5), Rational(1, 5), Rational(3, 10), Rational(3, 10)});
  CHECK(twice.copies == 2);
  CHECK(twice.pattern_node_count() == 2);

  const auto six = build_ti_triangular_exact({Rational(1, 3), Rational(0)}, {Rational(0), Rational(1)}, {3, 1});
  REQUIRE(six.element_count() == 6);
  const auto big = replicate_scale(six, 4);
  CHECK(big.element_count() == 96);
  CHECK_NOTHROW(validate_mesh(big));
  CHECK(big.pattern_element_count() == 6);
}

TEST_CASE("layout invariants on perturbed periodic meshes") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto mesh = perturbed_pattern(seed);
    check_layout_invariants(median_dual_layout<double>(mesh), 1.0);
    check_layout_invariants(cell_layout<double>(mesh), 1.0);
    check_layout_invariants(median_dual_layout<Rational>(mesh), 1.0);
  }
}

TEST_CASE("median dual volume is a third of the incident triangle areas") {
  const auto mesh = perturbed_pattern(17);
  const auto L = median_dual_layout<Rational>(mesh);
  std::vector<Rational> expected(mesh.node_count(), Rational(0));
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int i = 0; i < 3; ++i) expected[mesh.elements[e].v[i].node] += mesh.measure<Rational>(e) / 3;
  for (int j = 0; j < L.size(); ++j) CHECK(L.volume[j] == expected[j]);
}

TEST_CASE("median dual 1-exactness identity") {
  // (1/|K_j|) Σ_k n_jk ⊗ (r_k + r_j)/2 = I in the chart of j.
  for (std::uint64_t seed = 3; seed <= 6; ++seed) {
    const auto L = median_dual_layout<Rational>(perturbed_pattern(seed));
    for (int j = 0; j < L.size(); ++j) {
      Rational m[2][2] = {{0, 0}, {0, 0}};
      for (const auto& f : L.faces[j]) {
        const Vec2<Rational> rk = L.position(f.k, f.shift);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) m[a][b] += f.normal[a] * (rk[b] + L.point[j][b]) / 2;
      }
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(m[a][b] / L.volume[j] == Rational(a == b ? 1 : 0));
    }
  }
}

TEST_CASE("barycentric face normals match geometric integration") {
  const auto mesh = perturbed_pattern(23);
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const auto formula = to_double(element_face_normal<Rational>(mesh, e, a, b));
        const auto geometric = element_face_normal_geometric(mesh, e, a, b);
        CHECK(std::fabs(formula[0] - (geometric[0])) <= 1e-13);
        CHECK(std::fabs(formula[1] - (geometric[1])) <= 1e-13);
      }
  const auto L = median_dual_layout<double>(mesh);
  const auto geo = median_dual_normals_geometric(L);
  for (int j = 0; j < L.size(); ++j)
    for (std::size_t i = 0; i < L.faces[j].size(); ++i) {
      CHECK(vec_norm(L.faces[j][i].normal - geo[j][i]) <= 1e-13);
    }
}

TEST_CASE("translation keeps the mesh and its layout") {
  const auto mesh = perturbed_pattern(5);
  const auto moved = translate_mesh(mesh, {Rational(3, 7), Rational(-2, 9)});
  CHECK_NOTHROW(validate_mesh(moved));
  const auto a = median_dual_layout<Rational>(mesh);
  const auto b = median_dual_layout<Rational>(moved);
  for (int j = 0; j < a.size(); ++j) CHECK(a.volume[j] == b.volume[j]);
}

TEST_CASE("mesh JSON round trip is exact") {
  const auto mesh = perturbed_pattern(8);
  const std::string text = mesh_to_json(mesh);
  const auto back = mesh_from_json(text);
  CHECK(mesh_to_json(back) == text);
  CHECK(back.nodes_exact == mesh.nodes_exact);
  CHECK_THROWS(mesh_from_json("{\"dimension\": 3}"));
}

TEST_CASE("rational parsing and recovery of short fractions") {
  CHECK(parse_rational("5/6") == Rational(5, 6));
  CHECK(parse_rational("-3/9") == Rational(-1, 3));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational("-.25") == Rational(-1, 4));
  CHECK(parse_rational("1.5e-2") == Rational(3, 200));
  CHECK(parse_rational("2E3") == Rational(2000));
  CHECK_THROWS_AS(parse_rational("1/0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("."), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(nice_rational(0.05) == Rational(1, 20));
  CHECK(nice_rational(5.0 / 6.0) == Rational(5, 6));
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    CHECK(to_double(nice_rational(x)) == x);
  }
}

TEST_CASE("rational to double conversion rounds to nearest") {
  CHECK(to_double(Rational(1, 20)) == 0.05);
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(-2, 3)) == -2.0 / 3.0);
  CHECK(to_double(Rational(0.1) + Rational(0.2)) == 0.1 + 0.2);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Rational a(rng.integer(-1000, 1000), rng.integer(1, 997));
    a.canonicalize();
    const double d = to_double(a);
    const Rational gap = abs(Rational(Rational(d) - a));
    CHECK(gap <= abs(Rational(Rational(std::nextafter(d, 2000.0)) - a)));
    CHECK(gap <= abs(Rational(Rational(std::nextafter(d, -2000.0)) - a)));
  }
}
