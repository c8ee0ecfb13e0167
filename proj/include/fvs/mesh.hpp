#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fvs/rational.hpp"

namespace fvs {

/// Element vertex: node index plus the integer lattice shift that places the
/// node next to the other vertices of the element.
struct VertexRef {
  int node = 0;
  Shift shift{0, 0};
  bool operator==(const VertexRef& o) const { return node == o.node && shift == o.shift; }
};

/// Segment (d=1, two vertices) or triangle (d=2, three vertices, counterclockwise).
struct Element {
  std::array<VertexRef, 3> v{};
};

/// Simplicial mesh of the d-torus. Node coordinates are kept exactly as
/// rationals; the double copies are their roundings.
struct PeriodicMesh {
  int dim = 1;
  Vec2<Rational> period_exact{Rational(1), Rational(1)};
  Vec2<double> period{1.0, 1.0};
  std::vector<Vec2<Rational>> nodes_exact;
  std::vector<Vec2<double>> nodes;
  std::vector<Element> elements;

  // Provenance of replicate_scale: the mesh consists of copies^d translated
  // copies of a pattern; classes map nodes/elements to their pattern index.
  int copies = 1;
  std::vector<int> node_class;
  std::vector<int> element_class;

  int vertices_per_element() const { return dim + 1; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  int pattern_node_count() const;
  int pattern_element_count() const;

  template <class T> Vec2<T> position(int node, const Shift& s) const;
  template <class T> Vec2<T> period_as() const;

  /// Signed measure (length or area) of an element.
  template <class T> T measure(int element) const;

  double period_volume() const { return dim == 1 ? period[0] : period[0] * period[1]; }
  double longest_edge() const;
  double shortest_edge() const;
};

template <> Vec2<double> PeriodicMesh::position<double>(int, const Shift&) const;
template <> Vec2<Rational> PeriodicMesh::position<Rational>(int, const Shift&) const;
template <> Vec2<double> PeriodicMesh::period_as<double>() const;
template <> Vec2<Rational> PeriodicMesh::period_as<Rational>() const;
extern template double PeriodicMesh::measure<double>(int) const;
extern template Rational PeriodicMesh::measure<Rational>(int) const;

PeriodicMesh build_1d_pattern(const std::vector<double>& steps);
/// `count` seeded random steps drawn from {0.50, 0.51, …, 1.50} and scaled to sum to 1.
std::vector<Rational> random_1d_steps(std::uint64_t seed, int count);
PeriodicMesh build_1d_pattern_exact(const std::vector<Rational>& steps);

/// Translation-invariant triangulation generated by e1 = (a, 0) and e2. The
/// period is (counts[0]·a, |counts[1]·e2.y|); counts[1]·e2.x must be a multiple
/// of a so that the lattice closes on the rectangle.
PeriodicMesh build_ti_triangular(const Vec2<double>& e1, const Vec2<double>& e2, std::array<int, 2> counts);
PeriodicMesh build_ti_triangular_exact(const Vec2<Rational>& e1, const Vec2<Rational>& e2, std::array<int, 2> counts);

/// Uniform random jitter of every node by at most amplitude·(shortest edge) per
/// axis. Displacements are dyadic rationals so the exact coordinates stay exact.
PeriodicMesh perturb_nodes(const PeriodicMesh& mesh, double amplitude, std::uint64_t seed);

PeriodicMesh replicate_scale(const PeriodicMesh& mesh, int copies);

/// Rigid translation of all nodes (coordinates re-wrapped into the fundamental cell).
PeriodicMesh translate_mesh(const PeriodicMesh& mesh, const Vec2<Rational>& offset);

/// Throws std::runtime_error describing the first violated invariant.
void validate_mesh(const PeriodicMesh& mesh);

std::string mesh_to_json(const PeriodicMesh& mesh);
PeriodicMesh mesh_from_json(const std::string& text);

/// mt19937_64 with distribution code kept here so streams are identical on
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fvs
