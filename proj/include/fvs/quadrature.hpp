#pragma once

#include <vector>

#include "fvs/polynomial.hpp"

namespace fvs {

/// Vertex and edge-midpoint weights of the 2-exact simplex rule, per unit volume.
template <class T> struct SimplexRuleWeights {
  T vertex, midpoint;
};

template <class T> SimplexRuleWeights<T> simplex_rule_weights(int d);

/// Simplex given by d+1 vertices (d ∈ {1,2}); 1D vertices use only x.
template <class T> T simplex_measure(const std::vector<Vec2<T>>& v, int d);
template <class T> Vec2<T> simplex_centroid(const std::vector<Vec2<T>>& v, int d);

/// Exact integral of a polynomial over the simplex.
template <class T> T simplex_integral(const std::vector<Vec2<T>>& v, int d, const Polynomial<T>& f);

/// |e| (α Σ f(vertices) + β Σ f(edge midpoints)).
template <class T> T simplex_quadrature_2exact(const std::vector<Vec2<T>>& v, int d, const Polynomial<T>& f);

/// ∫_v (dir·(r − r_v))² dV by the vertex form, the pairwise form, and exact integration.
template <class T> T second_moment_vertex_form(const std::vector<Vec2<T>>& v, int d, const Vec2<T>& dir);
template <class T> T second_moment_pairwise_form(const std::vector<Vec2<T>>& v, int d, const Vec2<T>& dir);
template <class T> T second_moment_exact(const std::vector<Vec2<T>>& v, int d, const Vec2<T>& dir);

/// Gauss–Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> x, w;
};
GaussRule gauss_legendre_unit(int points);

}  // namespace fvs
