#include "fvs/layout.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

namespace fvs {

std::string layout_name(LayoutKind k) { return k == LayoutKind::cell ? "cell" : "median-dual"; }

namespace {

Shift sub(const Shift& a, const Shift& b) { return {a[0] - b[0], a[1] - b[1]}; }
Shift add(const Shift& a, const Shift& b) { return {a[0] + b[0], a[1] + b[1]}; }

template <class T> Vec2<T> vertex_position(const PeriodicMesh& m, const Element& e, int i) {
  return m.position<T>(e.v[i].node, e.v[i].shift);
}

template <class T> Vec2<T> half(const Vec2<T>& a) { return {a[0] / 2, a[1] / 2}; }

template <class T> void fill_common(ControlVolumeLayout<T>& L, const PeriodicMesh& m) {
  L.dim = m.dim;
  L.period = m.period_as<T>();
  L.copies = m.copies;
  L.h_max = m.longest_edge();
  L.h_min = m.shortest_edge();
  L.mesh = std::make_shared<const PeriodicMesh>(m);
}

}  // namespace

template <class T> int ControlVolumeLayout<T>::pattern_size() const {
  int c = 1;
  for (int a = 0; a < dim; ++a) c *= copies;
  return size() / c;
}

template <class T> int ControlVolumeLayout<T>::reverse_face(int j, const LayoutFace<T>& f) const {
  const Shift back{-f.shift[0], -f.shift[1]};
  const auto& list = faces[f.k];
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].k == j && list[i].shift == back) return static_cast<int>(i);
  throw std::logic_error("layout: face without its reverse");
}

template <class T> std::vector<SiteRef> ControlVolumeLayout<T>::ring_sites(int j, int rings) const {
  std::vector<SiteRef> out{{j, {0, 0}}};
  std::set<SiteRef> seen{out[0]};
  std::size_t begin = 0;
  for (int r = 0; r < rings; ++r) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      const SiteRef cur = out[i];
      for (const auto& f : faces[cur.dof]) {
        SiteRef nb{f.k, add(cur.shift, f.shift)};
        if (seen.insert(nb).second) out.push_back(nb);
      }
    }
    begin = end;
  }
  return out;
}

template <class T> std::vector<std::vector<Vec2<T>>> ControlVolumeLayout<T>::cell_pieces(int j) const {
  const PeriodicMesh& m = *mesh;
  std::vector<std::vector<Vec2<T>>> out;
  if (kind == LayoutKind::cell) {
    const Element& e = m.elements[j];
    std::vector<Vec2<T>> poly;
    for (int i = 0; i < m.vertices_per_element(); ++i) poly.push_back(vertex_position<T>(m, e, i));
    out.push_back(poly);
    return out;
  }
  if (dim == 1) {
    T lo = point[j][0], hi = point[j][0];
    for (const auto& [el, local] : incident[j]) {
      const Element& e = m.elements[el];
      const Vec2<T> a = vertex_position<T>(m, e, 0), b = vertex_position<T>(m, e, 1);
      const T len = b[0] - a[0];
      if (local == 0) hi = point[j][0] + len / 2;
      else lo = point[j][0] - len / 2;
    }
    out.push_back({{lo, T(0)}, {hi, T(0)}});
    return out;
  }
  for (const auto& [el, local] : incident[j]) {
    const Element& e = m.elements[el];
    Vec2<T> P[3];
    const Vec2<T> back = {T(-e.v[local].shift[0] * period[0]), T(-e.v[local].shift[1] * period[1])};
    for (int i = 0; i < 3; ++i) P[i] = vertex_position<T>(m, e, i) + back;
    const Vec2<T>& a = P[local];
    const Vec2<T>& b = P[(local + 1) % 3];
    const Vec2<T>& c = P[(local + 2) % 3];
    const Vec2<T> centroid = {(a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3};
    out.push_back({a, half(a + b), centroid, half(a + c)});
  }
  return out;
}

template <class T> Vec2<T> element_face_normal(const PeriodicMesh& m, int element, int a, int b) {
  const Element& e = m.elements[element];
  const int d = m.dim;
  auto opposite_normal = [&](int i) -> Vec2<T> {
    if (d == 1) return {T(i == 0 ? 1 : -1), T(0)};
    const Vec2<T> p = vertex_position<T>(m, e, (i + 1) % 3);
    const Vec2<T> q = vertex_position<T>(m, e, (i + 2) % 3);
    return {q[1] - p[1], p[0] - q[0]};
  };
  const Vec2<T> na = opposite_normal(a), nb = opposite_normal(b);
  const T c = T(1) / T(d * (d + 1));
  return {(na[0] - nb[0]) * c, (na[1] - nb[1]) * c};
}

Vec2<double> element_face_normal_geometric(const PeriodicMesh& m, int element, int a, int b) {
  const Element& e = m.elements[element];
  const Vec2<double> pa = vertex_position<double>(m, e, a), pb = vertex_position<double>(m, e, b);
  if (m.dim == 1) return {pb[0] > pa[0] ? 1.0 : -1.0, 0.0};
  Vec2<double> c{0.0, 0.0};
  for (int i = 0; i < 3; ++i) c = c + scaled(vertex_position<double>(m, e, i), 1.0 / 3.0);
  const Vec2<double> mid = scaled(pa + pb, 0.5);
  const Vec2<double> seg = c - mid;
  Vec2<double> n{seg[1], -seg[0]};
  if (dot(n, pb - pa) < 0) n = {-n[0], -n[1]};
  return n;
}

template <class T> ControlVolumeLayout<T> cell_layout(const PeriodicMesh& m) {
  ControlVolumeLayout<T> L;
  L.kind = LayoutKind::cell;
  fill_common(L, m);
  const int ne = m.element_count();
  const int nv = m.vertices_per_element();
  L.volume.resize(ne);
  L.point.resize(ne);
  L.faces.assign(ne, {});
  L.dof_class = m.element_class;
  for (int e = 0; e < ne; ++e) {
    L.volume[e] = m.measure<T>(e);
    Vec2<T> c{T(0), T(0)};
    for (int i = 0; i < nv; ++i) c = c + vertex_position<T>(m, m.elements[e], i);
    L.point[e] = {c[0] / nv, c[1] / nv};
  }
  if (m.dim == 1) {
    // Left end of element e is node n: the neighbor on that side has n as its right end.
    std::vector<int> right_of(m.node_count(), -1);
    std::vector<int> left_of(m.node_count(), -1);
    for (int e = 0; e < ne; ++e) {
      right_of[m.elements[e].v[1].node] = e;
      left_of[m.elements[e].v[0].node] = e;
    }
    for (int e = 0; e < ne; ++e) {
      const Element& el = m.elements[e];
      for (int side = 0; side < 2; ++side) {
        const VertexRef& v = el.v[side];
        const int nb = side == 0 ? right_of[v.node] : left_of[v.node];
        const VertexRef& w = m.elements[nb].v[side == 0 ? 1 : 0];
        LayoutFace<T> f;
        f.k = nb;
        f.shift = sub(v.shift, w.shift);
        f.normal = {T(side == 0 ? -1 : 1), T(0)};
        f.p0 = f.p1 = vertex_position<T>(m, el, side);
        f.centroid = to_double(f.p0);
        f.measure = 1.0;
        L.faces[e].push_back(f);
      }
    }
    return L;
  }
  struct Incidence {
    int element, local;
    Shift base;
  };
  std::map<std::tuple<int, int, int, int>, std::vector<Incidence>> edges;
  for (int e = 0; e < ne; ++e)
    for (int i = 0; i < 3; ++i) {
      VertexRef a = m.elements[e].v[i], b = m.elements[e].v[(i + 1) % 3];
      Shift dlt = sub(b.shift, a.shift);
      if (a.node > b.node || (a.node == b.node && (dlt[0] < 0 || (dlt[0] == 0 && dlt[1] < 0)))) {
        std::swap(a, b);
        dlt = {-dlt[0], -dlt[1]};
      }
      edges[{a.node, b.node, dlt[0], dlt[1]}].push_back({e, i, a.shift});
    }
  std::vector<std::vector<std::pair<int, LayoutFace<T>>>> by_local(ne);
  for (const auto& [key, inc] : edges) {
    if (inc.size() != 2) throw std::runtime_error("cell_layout: non-conformal edge");
    for (int s = 0; s < 2; ++s) {
      const Incidence& me = inc[s];
      const Incidence& other = inc[1 - s];
      const Element& el = m.elements[me.element];
      LayoutFace<T> f;
      f.k = other.element;
      f.shift = sub(me.base, other.base);
      f.p0 = vertex_position<T>(m, el, me.local);
      f.p1 = vertex_position<T>(m, el, (me.local + 1) % 3);
      f.normal = {f.p1[1] - f.p0[1], f.p0[0] - f.p1[0]};
      f.centroid = to_double(Vec2<T>{(f.p0[0] + f.p1[0]) / 2, (f.p0[1] + f.p1[1]) / 2});
      f.measure = norm(to_double(f.p1) - to_double(f.p0));
      by_local[me.element].emplace_back(me.local, f);
    }
  }
  for (int e = 0; e < ne; ++e) {
    auto& v = by_local[e];
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [local, f] : v) L.faces[e].push_back(f);
  }
  return L;
}

template <class T> ControlVolumeLayout<T> median_dual_layout(const PeriodicMesh& m) {
  ControlVolumeLayout<T> L;
  L.kind = LayoutKind::median_dual;
  fill_common(L, m);
  const int nn = m.node_count();
  const int nv = m.vertices_per_element();
  const int d = m.dim;
  L.volume.assign(nn, T(0));
  L.point.resize(nn);
  L.dof_class = m.node_class;
  L.incident.assign(nn, {});
  for (int n = 0; n < nn; ++n) L.point[n] = m.position<T>(n, {0, 0});
  std::vector<std::map<SiteRef, LayoutFace<T>>> acc(nn);
  std::vector<std::map<SiteRef, Vec2<double>>> centroid_acc(nn);
  for (int e = 0; e < m.element_count(); ++e) {
    const Element& el = m.elements[e];
    const T share = m.measure<T>(e) / T(d + 1);
    for (int a = 0; a < nv; ++a) {
      const int j = el.v[a].node;
      L.volume[j] += share;
      L.incident[j].emplace_back(e, a);
      const Vec2<double> back{-el.v[a].shift[0] * m.period[0], -el.v[a].shift[1] * m.period[1]};
      for (int b = 0; b < nv; ++b) {
        if (b == a) continue;
        SiteRef site{el.v[b].node, sub(el.v[b].shift, el.v[a].shift)};
        auto& f = acc[j][site];
        f.k = site.dof;
        f.shift = site.shift;
        const Vec2<T> n = element_face_normal<T>(m, e, a, b);
        f.normal = f.normal + n;
        // Explicit median geometry for centroid and measure reporting.
        const Vec2<double> pa = vertex_position<double>(m, el, a), pb = vertex_position<double>(m, el, b);
        const Vec2<double> mid = scaled(pa + pb, 0.5);
        if (d == 1) {
          f.measure = 1.0;
          centroid_acc[j][site] = mid + back;
        } else {
          Vec2<double> c{0.0, 0.0};
          for (int i = 0; i < 3; ++i) c = c + scaled(vertex_position<double>(m, el, i), 1.0 / 3.0);
          const double len = norm(c - mid);
          f.measure += len;
          centroid_acc[j][site] = centroid_acc[j][site] + scaled(scaled(mid + c, 0.5) + back, len);
        }
        f.p0 = f.p1 = L.point[j];
      }
    }
  }
  L.faces.assign(nn, {});
  for (int j = 0; j < nn; ++j)
    for (auto& [site, f] : acc[j]) {
      const Vec2<double> c = centroid_acc[j][site];
      f.centroid = d == 1 ? c : scaled(c, 1.0 / f.measure);
      L.faces[j].push_back(f);
    }
  return L;
}

std::vector<std::vector<Vec2<double>>> median_dual_normals_geometric(const ControlVolumeLayout<double>& L) {
  if (L.kind != LayoutKind::median_dual) throw std::invalid_argument("median_dual_normals_geometric: wrong layout kind");
  const PeriodicMesh& m = *L.mesh;
  std::vector<std::map<SiteRef, Vec2<double>>> acc(L.size());
  for (int e = 0; e < m.element_count(); ++e) {
    const Element& el = m.elements[e];
    for (int a = 0; a < m.vertices_per_element(); ++a)
      for (int b = 0; b < m.vertices_per_element(); ++b) {
        if (a == b) continue;
        SiteRef site{el.v[b].node, sub(el.v[b].shift, el.v[a].shift)};
        auto it = acc[el.v[a].node].find(site);
        const Vec2<double> n = element_face_normal_geometric(m, e, a, b);
        if (it == acc[el.v[a].node].end()) acc[el.v[a].node][site] = n;
        else it->second = it->second + n;
      }
  }
  std::vector<std::vector<Vec2<double>>> out(L.size());
  for (int j = 0; j < L.size(); ++j)
    for (const auto& f : L.faces[j]) out[j].push_back(acc[j].at(SiteRef{f.k, f.shift}));
  return out;
}

template struct ControlVolumeLayout<double>;
template struct ControlVolumeLayout<Rational>;
template ControlVolumeLayout<double> cell_layout<double>(const PeriodicMesh&);
template ControlVolumeLayout<Rational> cell_layout<Rational>(const PeriodicMesh&);
template ControlVolumeLayout<double> median_dual_layout<double>(const PeriodicMesh&);
template ControlVolumeLayout<Rational> median_dual_layout<Rational>(const PeriodicMesh&);
template Vec2<double> element_face_normal<double>(const PeriodicMesh&, int, int, int);
template Vec2<Rational> element_face_normal<Rational>(const PeriodicMesh&, int, int, int);

}  // namespace fvs
