#include "fvs/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "fvs/quadrature.hpp"

namespace fvs {

std::string projection_name(ProjectionKind k) { return k == ProjectionKind::pointwise ? "pointwise" : "cell-average"; }

ProjectionKind parse_projection(const std::string& s) {
  if (s == "pointwise") return ProjectionKind::pointwise;
  if (s == "cell-average") return ProjectionKind::cell_average;
  throw std::invalid_argument("unknown projection '" + s + "' (expected pointwise or cell-average)");
}

template <class T> T cell_average(const ControlVolumeLayout<T>& layout, int j, const Shift& shift, const Polynomial<T>& f) {
  const Vec2<T> offset{T(shift[0] * layout.period[0]), T(shift[1] * layout.period[1])};
  const Polynomial<T> g = (shift[0] == 0 && shift[1] == 0) ? f : f.translated(offset);
  T total(0);
  for (const auto& piece : layout.cell_pieces(j)) {
    if (layout.dim == 1) total += integrate_interval(g, piece[0][0], piece[1][0]);
    else total += integrate_polygon(g, piece);
  }
  return total / layout.volume[j];
}

template <class T>
PolynomialProjector<T>::PolynomialProjector(const ControlVolumeLayout<T>& layout, ProjectionKind kind,
                                            const MultiPolynomial<T>& f)
    : layout_(layout), kind_(kind), f_(f) {}

template <class T> const std::vector<T>& PolynomialProjector<T>::at(const SiteRef& site) {
  auto it = cache_.find(site);
  if (it != cache_.end()) return it->second;
  std::vector<T> v;
  v.reserve(f_.size());
  if (kind_ == ProjectionKind::pointwise) {
    v = f_.eval(layout_.position(site.dof, site.shift));
  } else {
    for (const auto& comp : f_.comp) v.push_back(cell_average(layout_, site.dof, site.shift, comp));
  }
  return cache_.emplace(site, std::move(v)).first->second;
}

template <class T> MeshField<T> PolynomialProjector<T>::field() {
  const int n = f_.size();
  MeshField<T> out(static_cast<std::size_t>(layout_.size()) * n);
  for (int j = 0; j < layout_.size(); ++j) {
    const auto& v = at({j, {0, 0}});
    for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(j) * n + a] = v[a];
  }
  return out;
}

template <class T>
MeshField<T> project(const ControlVolumeLayout<T>& layout, ProjectionKind kind, const MultiPolynomial<T>& f) {
  return PolynomialProjector<T>(layout, kind, f).field();
}

MeshField<double> project_function(const ControlVolumeLayout<double>& layout, ProjectionKind kind, const VectorFunction& f,
                                   int n, int points) {
  MeshField<double> out(static_cast<std::size_t>(layout.size()) * n, 0.0);
  auto store = [&](int j, const std::vector<double>& v, double weight) {
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("project_function: wrong component count");
    for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(j) * n + a] += weight * v[a];
  };
  if (kind == ProjectionKind::pointwise) {
    for (int j = 0; j < layout.size(); ++j) store(j, f(layout.point[j]), 1.0);
    return out;
  }
  const GaussRule g = gauss_legendre_unit(points);
  for (int j = 0; j < layout.size(); ++j) {
    const double inv = 1.0 / layout.volume[j];
    for (const auto& piece : layout.cell_pieces(j)) {
      if (layout.dim == 1) {
        const double a = piece[0][0], b = piece[1][0];
        for (int q = 0; q < points; ++q) store(j, f({a + (b - a) * g.x[q], 0.0}), g.w[q] * (b - a) * inv);
        continue;
      }
      // Fan triangulation of the piece, collapsed tensor Gauss rule on each triangle.
      for (std::size_t t = 1; t + 1 < piece.size(); ++t) {
        const Vec2<double> p0 = piece[0], e1 = piece[t] - p0, e2 = piece[t + 1] - p0;
        const double twice_area = std::fabs(cross(e1, e2));
        for (int a = 0; a < points; ++a)
          for (int b = 0; b < points; ++b) {
            const double l1 = g.x[a], l2 = g.x[b] * (1.0 - g.x[a]);
            const Vec2<double> r = p0 + scaled(e1, l1) + scaled(e2, l2);
            store(j, f(r), g.w[a] * g.w[b] * (1.0 - g.x[a]) * twice_area * inv);
          }
      }
    }
  }
  return out;
}

double weighted_norm(const ControlVolumeLayout<double>& layout, const MeshField<double>& g, int n) {
  double s = 0.0;
  for (int j = 0; j < layout.size(); ++j)
    for (int a = 0; a < n; ++a) {
      const double v = g[static_cast<std::size_t>(j) * n + a];
      s += layout.volume[j] * v * v;
    }
  return std::sqrt(s);
}

template <class T> std::vector<T> weighted_sum(const ControlVolumeLayout<T>& layout, const MeshField<T>& g, int n) {
  std::vector<T> s(n, T(0));
  for (int j = 0; j < layout.size(); ++j)
    for (int a = 0; a < n; ++a) s[a] += layout.volume[j] * g[static_cast<std::size_t>(j) * n + a];
  return s;
}

template class PolynomialProjector<double>;
template class PolynomialProjector<Rational>;
template MeshField<double> project<double>(const ControlVolumeLayout<double>&, ProjectionKind, const MultiPolynomial<double>&);
template MeshField<Rational> project<Rational>(const ControlVolumeLayout<Rational>&, ProjectionKind,
                                               const MultiPolynomial<Rational>&);
template double cell_average<double>(const ControlVolumeLayout<double>&, int, const Shift&, const Polynomial<double>&);
template Rational cell_average<Rational>(const ControlVolumeLayout<Rational>&, int, const Shift&,
                                         const Polynomial<Rational>&);
template std::vector<double> weighted_sum<double>(const ControlVolumeLayout<double>&, const MeshField<double>&, int);
template std::vector<Rational> weighted_sum<Rational>(const ControlVolumeLayout<Rational>&, const MeshField<Rational>&,
                                                      int);

}  // namespace fvs
