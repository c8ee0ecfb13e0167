#include "fvs/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fvs {

namespace {

void check_simplex(const std::vector<Vec2<double>>::size_type count, int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("simplex: dimension must be 1 or 2");
  if (count != static_cast<std::size_t>(d + 1)) throw std::invalid_argument("simplex: need d+1 vertices");
}

template <class T> Vec2<T> midpoint(const Vec2<T>& a, const Vec2<T>& b) { return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2}; }

}  // namespace

template <class T> SimplexRuleWeights<T> simplex_rule_weights(int d) {
  return {T(2 - d) / T((d + 1) * (d + 2)), T(4) / T((d + 1) * (d + 2))};
}

template <class T> T simplex_measure(const std::vector<Vec2<T>>& v, int d) {
  check_simplex(v.size(), d);
  if (d == 1) return abs_value(T(v[1][0] - v[0][0]));
  return abs_value(T(cross(v[1] - v[0], v[2] - v[0]))) / 2;
}

template <class T> Vec2<T> simplex_centroid(const std::vector<Vec2<T>>& v, int d) {
  check_simplex(v.size(), d);
  Vec2<T> c{T(0), T(0)};
  for (const auto& p : v) c = c + p;
  return {c[0] / (d + 1), c[1] / (d + 1)};
}

template <class T> T simplex_integral(const std::vector<Vec2<T>>& v, int d, const Polynomial<T>& f) {
  check_simplex(v.size(), d);
  if (d == 1) {
    const T a = v[0][0] < v[1][0] ? v[0][0] : v[1][0];
    const T b = v[0][0] < v[1][0] ? v[1][0] : v[0][0];
    return integrate_interval(f, a, b);
  }
  std::vector<Vec2<T>> poly = v;
  if (sign_of(T(cross(v[1] - v[0], v[2] - v[0]))) < 0) std::swap(poly[1], poly[2]);
  return integrate_polygon(f, poly);
}

template <class T> T simplex_quadrature_2exact(const std::vector<Vec2<T>>& v, int d, const Polynomial<T>& f) {
  check_simplex(v.size(), d);
  const SimplexRuleWeights<T> w = simplex_rule_weights<T>(d);
  T vertex_sum(0), mid_sum(0);
  for (int i = 0; i <= d; ++i) {
    vertex_sum += f.eval(v[i]);
    for (int k = i + 1; k <= d; ++k) mid_sum += f.eval(midpoint(v[i], v[k]));
  }
  return simplex_measure(v, d) * (w.vertex * vertex_sum + w.midpoint * mid_sum);
}

template <class T> T second_moment_vertex_form(const std::vector<Vec2<T>>& v, int d, const Vec2<T>& dir) {
  const Vec2<T> c = simplex_centroid(v, d);
  T s(0);
  for (const auto& p : v) {
    const T x = dot(dir, p - c);
    s += x * x;
  }
  return simplex_measure(v, d) * s / T((d + 1) * (d + 2));
}

template <class T> T second_moment_pairwise_form(const std::vector<Vec2<T>>& v, int d, const Vec2<T>& dir) {
  check_simplex(v.size(), d);
  T s(0);
  for (int i = 0; i <= d; ++i)
    for (int k = i + 1; k <= d; ++k) {
      const T x = dot(dir, v[i] - v[k]);
      s += x * x;
    }
  return simplex_measure(v, d) * s / T((d + 1) * (d + 1) * (d + 2));
}

template <class T> T second_moment_exact(const std::vector<Vec2<T>>& v, int d, const Vec2<T>& dir) {
  const Vec2<T> c = simplex_centroid(v, d);
  // (dir·(r − c))² as a polynomial in (x, y).
  Polynomial<T> lin = Polynomial<T>::monomial(1, 0, dir[0]) + Polynomial<T>::constant(T(-dir[0] * c[0]));
  if (d == 2) lin = lin + Polynomial<T>::monomial(0, 1, dir[1]) + Polynomial<T>::constant(T(-dir[1] * c[1]));
  return simplex_integral(v, d, lin * lin);
}

GaussRule gauss_legendre_unit(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre_unit: need at least one point");
  GaussRule g;
  g.x.resize(points);
  g.w.resize(points);
  for (int i = 0; i < points; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= points; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = points * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    g.x[i] = 0.5 * (1.0 - z);
    g.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

#define FVS_INSTANTIATE(T)                                                                         \
  template SimplexRuleWeights<T> simplex_rule_weights<T>(int);                                     \
  template T simplex_measure<T>(const std::vector<Vec2<T>>&, int);                                 \
  template Vec2<T> simplex_centroid<T>(const std::vector<Vec2<T>>&, int);                          \
  template T simplex_integral<T>(const std::vector<Vec2<T>>&, int, const Polynomial<T>&);          \
  template T simplex_quadrature_2exact<T>(const std::vector<Vec2<T>>&, int, const Polynomial<T>&); \
  template T second_moment_vertex_form<T>(const std::vector<Vec2<T>>&, int, const Vec2<T>&);       \
  template T second_moment_pairwise_form<T>(const std::vector<Vec2<T>>&, int, const Vec2<T>&);     \
  template T second_moment_exact<T>(const std::vector<Vec2<T>>&, int, const Vec2<T>&);

FVS_INSTANTIATE(double)
FVS_INSTANTIATE(Rational)

}  // namespace fvs
