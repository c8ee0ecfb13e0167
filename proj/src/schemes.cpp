#include "fvs/schemes.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fvs {

const std::vector<SchemeInfo>& scheme_registry() {
  static const std::vector<SchemeInfo> reg = {
      {"basic", LayoutKind::cell, ProjectionKind::cell_average, 0, "basic finite volume, R_jk = u_j"},
      {"fv-p1", LayoutKind::cell, ProjectionKind::cell_average, 1, "linear reconstruction (least squares)"},
      {"fv-p2", LayoutKind::cell, ProjectionKind::cell_average, 2, "quadratic reconstruction (least squares)"},
      {"bbr3", LayoutKind::cell, ProjectionKind::pointwise, 1, "multislope BBR3"},
      {"eb-central", LayoutKind::median_dual, ProjectionKind::pointwise, 1, "mass-lumped Galerkin (central)"},
      {"eb-upwind", LayoutKind::median_dual, ProjectionKind::pointwise, 1, "edge-based, 1-exact gradient, upwind"},
      {"fc-steady", LayoutKind::median_dual, ProjectionKind::pointwise, 2, "flux correction, M = I"},
      {"fc-div", LayoutKind::median_dual, ProjectionKind::pointwise, 2, "flux correction, divergence mass"},
      {"fc-xg", LayoutKind::median_dual, ProjectionKind::pointwise, 2, "flux correction, extended Galerkin mass"},
      {"fc-xg-mod", LayoutKind::median_dual, ProjectionKind::pointwise, 2, "1D flux correction, modified mass"},
  };
  return reg;
}

const SchemeInfo& scheme_info(const std::string& name) {
  for (const auto& s : scheme_registry())
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : scheme_registry()) known += (known.empty() ? "" : ", ") + s.name;
  throw std::invalid_argument("unknown scheme '" + name + "' (known: " + known + ")");
}

template <class T> std::shared_ptr<const ControlVolumeLayout<T>> make_layout(LayoutKind kind, const PeriodicMesh& mesh) {
  if (kind == LayoutKind::cell) return std::make_shared<const ControlVolumeLayout<T>>(cell_layout<T>(mesh));
  return std::make_shared<const ControlVolumeLayout<T>>(median_dual_layout<T>(mesh));
}

namespace {

template <class T> bool owns(int j, const LayoutFace<T>& f) {
  if (j != f.k) return j < f.k;
  return Shift{0, 0} < f.shift;
}

template <class T>
OperatorPair<T> new_pair(const std::string& name, std::shared_ptr<const ControlVolumeLayout<T>> layout,
                         const HyperbolicSystem& sys) {
  const SchemeInfo& info = scheme_info(name);
  if (layout->kind != info.layout)
    throw std::invalid_argument("scheme " + name + " needs a " + layout_name(info.layout) + " layout");
  if (layout->dim != sys.dim()) throw std::invalid_argument("scheme " + name + ": system and mesh dimensions differ");
  OperatorPair<T> pair;
  pair.scheme = name;
  pair.design_order = info.design_order;
  pair.projection = info.projection;
  pair.n = sys.n();
  pair.layout = std::move(layout);
  return pair;
}

/// Upwind fluxes from one-sided face values: recon[j][f] is R_jk in the chart of j.
template <class T>
void add_upwind_faces(OperatorPair<T>& pair, const HyperbolicSystem& sys, const std::vector<std::vector<Stencil<T>>>& recon) {
  const auto& L = *pair.layout;
  for (int j = 0; j < L.size(); ++j)
    for (int fi = 0; fi < static_cast<int>(L.faces[j].size()); ++fi) {
      const LayoutFace<T>& lf = L.faces[j][fi];
      if (!owns(j, lf)) continue;
      FluxFace<T> f;
      f.j = j;
      f.face = fi;
      f.k = lf.k;
      f.reverse = L.reverse_face(j, lf);
      f.shift = lf.shift;
      f.normal = lf.normal;
      f.left = recon[j][fi];
      f.right = recon[lf.k][f.reverse].shifted(lf.shift);
      std::tie(f.plus, f.minus) = sys.upwind_split<T>(lf.normal);
      pair.faces.push_back(std::move(f));
    }
  index_faces(pair);
}

template <class T> void finish_mass(OperatorPair<T>& pair) {
  if (pair.identity_mass) return;
  double worst = 0.0;
  for (auto& row : pair.mass) {
    row.prune();
    worst = std::max(worst, std::fabs(to_double(T(row.sum() - T(1)))));
  }
  pair.mass_defect = worst;
}

template <class T> std::vector<DerivativeStencils<T>> quadratic_fits(const ControlVolumeLayout<T>& L, int rings,
                                                                     WeightPolicy w) {
  std::vector<DerivativeStencils<T>> out;
  out.reserve(L.size());
  for (int j = 0; j < L.size(); ++j) out.push_back(quadratic_fit(L, j, rings, w));
  return out;
}

template <class T> Stencil<T> gradient_recon(const SiteRef& self, const Vec2<T>& delta, const DerivativeStencils<T>& der,
                                             int dim) {
  Stencil<T> s = Stencil<T>::unit(self);
  s.add_scaled(der.dx, T(delta[0] / 2));
  if (dim == 2) s.add_scaled(der.dy, T(delta[1] / 2));
  s.prune();
  return s;
}

using Incidence = std::vector<std::vector<std::pair<int, int>>>;

Incidence node_incidence(const PeriodicMesh& mesh) {
  Incidence inc(mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int i = 0; i < mesh.vertices_per_element(); ++i) inc[mesh.elements[e].v[i].node].push_back({e, i});
  return inc;
}

std::vector<SiteRef> vertex_neighbors_with(const PeriodicMesh& mesh, const Incidence& inc, int j) {
  std::vector<SiteRef> out{{j, {0, 0}}};
  std::set<SiteRef> seen{out[0]};
  for (int i = 0; i < mesh.vertices_per_element(); ++i) {
    const VertexRef& v = mesh.elements[j].v[i];
    for (auto [e, li] : inc[v.node]) {
      const Shift& s2 = mesh.elements[e].v[li].shift;
      const SiteRef site{e, {v.shift[0] - s2[0], v.shift[1] - s2[1]}};
      if (seen.insert(site).second) out.push_back(site);
    }
  }
  return out;
}

template <class T> T length_scale(const Vec2<T>& v) {
  if constexpr (std::is_same_v<T, double>) return std::hypot(v[0], v[1]);
  else return T(1);  // the exact path uses zero tolerances
}

template <class T> struct RayHit {
  T t, s;
  SiteRef a, b;
};

/// Intersections of the line r_jk + t d with the segment [pa, pb] (collinear
/// overlaps contribute their end points and the crossing of t = 0).
template <class T>
void intersect_segment(const Vec2<T>& origin, const Vec2<T>& d, const Vec2<T>& pa, const Vec2<T>& pb, const SiteRef& a,
                       const SiteRef& b, const T& tol, std::vector<RayHit<T>>& out) {
  const Vec2<T> e = pb - pa;
  const Vec2<T> w = pa - origin;
  const T dlen = length_scale(d), elen = length_scale(e);
  const T denom = cross(d, e);
  if (abs_value(denom) <= T(tol * dlen * elen / (dlen + elen))) {
    if (abs_value(cross(w, d)) > T(tol * dlen)) return;
    const T dd = dot(d, d);
    const T ta = dot(w, d) / dd, tb = dot(pb - origin, d) / dd;
    out.push_back({ta, T(0), a, b});
    out.push_back({tb, T(1), a, b});
    if ((sign_of(ta) <= 0 && sign_of(tb) >= 0) || (sign_of(ta) >= 0 && sign_of(tb) <= 0))
      if (!is_zero(T(ta - tb))) out.push_back({T(0), T(ta / (ta - tb)), a, b});
    return;
  }
  const T t = cross(w, e) / denom;
  T s = cross(w, d) / denom;
  const T stol = tol / elen;
  if (s < T(-stol) || s > T(1 + stol)) return;
  if (s < T(0)) s = T(0);
  if (s > T(1)) s = T(1);
  out.push_back({t, s, a, b});
}

/// Furthest admissible hit from r_j (t = 1); ties go to the larger parameter along the ray.
template <class T>
const RayHit<T>* furthest(const std::vector<RayHit<T>>& hits, bool forward, const T& ttol) {
  const RayHit<T>* best = nullptr;
  for (const auto& h : hits) {
    if (forward ? h.t < T(-ttol) : h.t > ttol) continue;
    if (!best) {
      best = &h;
      continue;
    }
    const T dist = abs_value(T(h.t - 1)), bdist = abs_value(T(best->t - 1));
    if (dist > bdist + ttol) best = &h;
    else if (abs_value(T(dist - bdist)) <= ttol && (forward ? h.t > best->t : h.t < best->t)) best = &h;
  }
  return best;
}

template <class T>
Bbr3Face<T> bbr3_face_with(const ControlVolumeLayout<T>& L, int j, int face, const std::vector<SiteRef>& around) {
  const LayoutFace<T>& lf = L.faces[j][face];
  const Vec2<T> rjk{T((lf.p0[0] + lf.p1[0]) / 2), T((lf.p0[1] + lf.p1[1]) / 2)};
  const Vec2<T> d = L.point[j] - rjk;
  T tol(0);
  if constexpr (std::is_same_v<T, double>) tol = 1e-12 * L.h_max;
  const T ttol = tol / length_scale(d);

  std::vector<RayHit<T>> minus_hits, plus_hits;
  for (std::size_t a = 0; a < around.size(); ++a)
    for (std::size_t b = a + 1; b < around.size(); ++b)
      intersect_segment(rjk, d, L.position(around[a].dof, around[a].shift), L.position(around[b].dof, around[b].shift),
                        around[a], around[b], tol, minus_hits);
  const SiteRef k{lf.k, lf.shift};
  const Vec2<T> rk = L.position(k.dof, k.shift);
  for (const auto& m : around)
    if (!(m == k)) intersect_segment(rjk, d, rk, L.position(m.dof, m.shift), k, m, tol, plus_hits);

  Bbr3Face<T> out;
  const SiteRef self{j, {0, 0}};
  const RayHit<T>* hm = furthest(minus_hits, true, ttol);
  const RayHit<T>* hp = furthest(plus_hits, false, ttol);
  if (!hm || !hp || abs_value(T(hm->t - 1)) <= ttol) {
    out.value = Stencil<T>::unit(self);
    out.fallback = true;
    return out;
  }
  out.t_plus = hp->t;
  out.t_minus = hm->t;
  const T wp = T(2) / (3 * (1 - hp->t));
  const T wm = T(1) / (3 * (hm->t - 1));
  // R = u_j + wp (u⁺ − u_j) + wm (u_j − u⁻)
  out.value = Stencil<T>::unit(self).scaled(T(1 - wp + wm));
  out.value.add(hp->a, T(wp * (1 - hp->s)));
  out.value.add(hp->b, T(wp * hp->s));
  out.value.add(hm->a, T(-wm * (1 - hm->s)));
  out.value.add(hm->b, T(-wm * hm->s));
  out.value.prune();
  return out;
}

}  // namespace

std::vector<SiteRef> vertex_neighbors(const PeriodicMesh& mesh, int j) {
  return vertex_neighbors_with(mesh, node_incidence(mesh), j);
}

template <class T> Bbr3Face<T> bbr3_face_value(const ControlVolumeLayout<T>& layout, int j, int face) {
  return bbr3_face_with(layout, j, face, vertex_neighbors(*layout.mesh, j));
}

template <class T>
Stencil<T> fc_s_operator(const ControlVolumeLayout<T>& layout, int j, const Vec2<T>& edge, const DerivativeStencils<T>& der) {
  const int d = layout.dim;
  const T c = T(d) / T(4 * (d + 2));
  Stencil<T> s = Stencil<T>::unit({j, {0, 0}});
  s.add_scaled(der.dxx, T(-c * edge[0] * edge[0]));
  if (d == 2) {
    s.add_scaled(der.dxy, T(-c * 2 * edge[0] * edge[1]));
    s.add_scaled(der.dyy, T(-c * edge[1] * edge[1]));
  }
  return s;
}

template <class T>
OperatorPair<T> assemble_basic_fv(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys) {
  OperatorPair<T> pair = new_pair<T>("basic", layout, sys);
  std::vector<std::vector<Stencil<T>>> recon(layout->size());
  for (int j = 0; j < layout->size(); ++j) recon[j].assign(layout->faces[j].size(), Stencil<T>::unit({j, {0, 0}}));
  add_upwind_faces(pair, sys, recon);
  return pair;
}

template <class T>
OperatorPair<T> assemble_poly_recon(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys,
                                    int degree, WeightPolicy weights) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("polynomial reconstruction: degree must be 1 or 2");
  OperatorPair<T> pair = new_pair<T>(degree == 1 ? "fv-p1" : "fv-p2", layout, sys);
  const auto& L = *layout;
  std::vector<std::vector<Stencil<T>>> recon(L.size());
  int widest = 0;
  for (int j = 0; j < L.size(); ++j) {
    const CellReconstruction<T> rec = cell_average_reconstruction(L, j, degree, weights);
    widest = std::max(widest, rec.rings);
    for (int f = 0; f < static_cast<int>(L.faces[j].size()); ++f) recon[j].push_back(reconstruction_face_value(L, j, rec, f));
  }
  add_upwind_faces(pair, sys, recon);
  pair.notes.push_back("reconstruction stencils use up to " + std::to_string(widest) + " rings; weights " +
                       weight_policy_name(weights));
  return pair;
}

template <class T>
OperatorPair<T> assemble_bbr3(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys) {
  if (layout->dim != 2) throw std::invalid_argument("bbr3 is defined on 2D meshes");
  OperatorPair<T> pair = new_pair<T>("bbr3", layout, sys);
  const auto& L = *layout;
  const PeriodicMesh& mesh = *L.mesh;
  const Incidence inc = node_incidence(mesh);
  std::vector<std::vector<Stencil<T>>> recon(L.size());
  for (int j = 0; j < L.size(); ++j) {
    const std::vector<SiteRef> around = vertex_neighbors_with(mesh, inc, j);
    for (int f = 0; f < static_cast<int>(L.faces[j].size()); ++f) {
      Bbr3Face<T> bf = bbr3_face_with(L, j, f, around);
      if (bf.fallback) ++pair.fallback_count;
      recon[j].push_back(std::move(bf.value));
    }
  }
  add_upwind_faces(pair, sys, recon);
  if (pair.fallback_count > 0)
    pair.notes.push_back(std::to_string(pair.fallback_count) + " face values fell back to R_jk = u_j");
  return pair;
}

template <class T>
OperatorPair<T> assemble_edge_based(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys,
                                    EdgeVariant variant, WeightPolicy weights) {
  const auto& L = *layout;
  if (variant == EdgeVariant::gradient_upwind) {
    OperatorPair<T> pair = new_pair<T>("eb-upwind", layout, sys);
    std::vector<std::vector<Stencil<T>>> recon(L.size());
    for (int j = 0; j < L.size(); ++j) {
      const DerivativeStencils<T> g = linear_gradient_fit(L, j, weights);
      for (const auto& f : L.faces[j]) recon[j].push_back(gradient_recon({j, {0, 0}}, L.offset(j, {f.k, f.shift}), g, L.dim));
    }
    add_upwind_faces(pair, sys, recon);
    return pair;
  }
  OperatorPair<T> pair = new_pair<T>("eb-central", layout, sys);
  for (int j = 0; j < L.size(); ++j)
    for (int fi = 0; fi < static_cast<int>(L.faces[j].size()); ++fi) {
      const LayoutFace<T>& lf = L.faces[j][fi];
      if (!owns(j, lf)) continue;
      FluxFace<T> f;
      f.j = j;
      f.face = fi;
      f.k = lf.k;
      f.reverse = L.reverse_face(j, lf);
      f.shift = lf.shift;
      f.normal = lf.normal;
      f.left = Stencil<T>::unit({j, {0, 0}}).scaled(T(1) / 2);
      f.left.add({lf.k, lf.shift}, T(1) / 2);
      f.plus = sys.directional_block<T>(lf.normal);
      f.minus = Block<T>(sys.n());
      pair.faces.push_back(std::move(f));
    }
  index_faces(pair);
  return pair;
}

template <class T>
OperatorPair<T> assemble_fc(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys,
                            FcVariant variant, const SchemeOptions& opt) {
  const char* name = variant == FcVariant::steady ? "fc-steady" : variant == FcVariant::divergence ? "fc-div" : "fc-xg";
  OperatorPair<T> pair = new_pair<T>(name, layout, sys);
  const auto& L = *layout;
  const int d = L.dim;
  const int rings = opt.fc_rings > 0 ? opt.fc_rings : (d == 1 ? 1 : 2);
  const std::vector<DerivativeStencils<T>> der = quadratic_fits(L, rings, opt.weights);

  std::vector<std::vector<Stencil<T>>> recon(L.size());
  for (int j = 0; j < L.size(); ++j)
    for (const auto& f : L.faces[j]) recon[j].push_back(gradient_recon({j, {0, 0}}, L.offset(j, {f.k, f.shift}), der[j], d));
  add_upwind_faces(pair, sys, recon);

  if (variant == FcVariant::steady) return pair;
  pair.identity_mass = false;
  pair.mass.resize(L.size());

  if (variant == FcVariant::extended_galerkin) {
    for (int j = 0; j < L.size(); ++j) {
      Stencil<T> row;
      for (const auto& f : L.faces[j]) {
        const Vec2<T> edge = L.offset(j, {f.k, f.shift});
        const T v = dot(edge, f.normal) / T(2 * d);
        row.add_scaled(fc_s_operator(L, j, edge, der[j]), v);
      }
      pair.mass[j] = row.scaled(T(1) / L.volume[j]);
    }
    finish_mass(pair);
    return pair;
  }

  // Divergence formulation: m_jk from (DIV v_j[f])_j, with v_j written per component c as
  // V_c(l) = Δ/d f_l − Δ²/(2d) (D_c f)_l + Δ³/(6d) (D_cc f)_l, Δ = (r_l − r_j)_c.
  for (int j = 0; j < L.size(); ++j) {
    std::map<std::pair<int, SiteRef>, Stencil<T>> memo;
    auto V = [&](int c, const SiteRef& site) -> const Stencil<T>& {
      auto key = std::make_pair(c, site);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      const T delta = L.offset(j, site)[c];
      Stencil<T> s;
      if (!is_zero(delta)) {
        const DerivativeStencils<T>& ds = der[site.dof];
        s.add(site, T(delta / d));
        s.add_scaled((c == 0 ? ds.dx : ds.dy).shifted(site.shift), T(-delta * delta / (2 * d)));
        s.add_scaled((c == 0 ? ds.dxx : ds.dyy).shifted(site.shift), T(delta * delta * delta / (6 * d)));
      }
      return memo.emplace(key, std::move(s)).first->second;
    };
    // (G_a V_c) at a site whose gradient stencil is `grad`.
    auto grad_of_V = [&](int c, const Stencil<T>& grad) {
      Stencil<T> out;
      for (const auto& t : grad.terms) out.add_scaled(V(c, t.site), t.coef);
      return out;
    };
    Stencil<T> row;
    for (const auto& f : L.faces[j]) {
      const SiteRef k{f.k, f.shift};
      const Vec2<T> edge = L.offset(j, k);
      for (int c = 0; c < d; ++c) {
        if (is_zero(f.normal[c])) continue;
        Stencil<T> sum;  // R_jk[v]_c + R_kj[v]_c
        sum.add_scaled(V(c, k), T(1));
        for (int a = 0; a < d; ++a) {
          if (is_zero(edge[a])) continue;
          const Stencil<T>& gj = a == 0 ? der[j].dx : der[j].dy;
          const Stencil<T> gk = (a == 0 ? der[f.k].dx : der[f.k].dy).shifted(f.shift);
          sum.add_scaled(grad_of_V(c, gj), T(edge[a] / 2));
          sum.add_scaled(grad_of_V(c, gk), T(-edge[a] / 2));
        }
        row.add_scaled(sum, T(f.normal[c] / 2));
      }
    }
    pair.mass[j] = row.scaled(T(1) / L.volume[j]);
  }
  finish_mass(pair);
  if (pair.mass_defect > 0.0)
    pair.notes.push_back("divergence mass rows sum to 1 up to " + std::to_string(pair.mass_defect));
  return pair;
}

template <class T>
OperatorPair<T> assemble_fc_1d_modified(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys) {
  if (layout->dim != 1) throw std::invalid_argument("fc-xg-mod is the one-dimensional modified scheme");
  OperatorPair<T> pair = assemble_fc<T>(layout, sys, FcVariant::steady, {WeightPolicy::inverse_distance, 1});
  pair.scheme = "fc-xg-mod";
  const auto& L = *layout;
  pair.identity_mass = false;
  pair.mass.resize(L.size());
  for (int j = 0; j < L.size(); ++j) {
    const DerivativeStencils<T> der = quadratic_fit(L, j, 1, WeightPolicy::inverse_distance);
    T h2(0);
    for (const auto& f : L.faces[j]) {
      const T h = L.offset(j, {f.k, f.shift})[0];
      h2 += h * h;
    }
    Stencil<T> row = Stencil<T>::unit({j, {0, 0}});
    row.add_scaled(der.dxx, T(-h2 / 24));
    pair.mass[j] = row;
  }
  finish_mass(pair);
  return pair;
}

template <class T>
OperatorPair<T> assemble(const std::string& scheme, std::shared_ptr<const ControlVolumeLayout<T>> layout,
                         const HyperbolicSystem& sys, const SchemeOptions& opt) {
  if (scheme == "basic") return assemble_basic_fv(layout, sys);
  if (scheme == "fv-p1") return assemble_poly_recon(layout, sys, 1, opt.weights);
  if (scheme == "fv-p2") return assemble_poly_recon(layout, sys, 2, opt.weights);
  if (scheme == "bbr3") return assemble_bbr3(layout, sys);
  if (scheme == "eb-central") return assemble_edge_based(layout, sys, EdgeVariant::galerkin_central, opt.weights);
  if (scheme == "eb-upwind") return assemble_edge_based(layout, sys, EdgeVariant::gradient_upwind, opt.weights);
  if (scheme == "fc-steady") return assemble_fc(layout, sys, FcVariant::steady, opt);
  if (scheme == "fc-div") return assemble_fc(layout, sys, FcVariant::divergence, opt);
  if (scheme == "fc-xg") return assemble_fc(layout, sys, FcVariant::extended_galerkin, opt);
  if (scheme == "fc-xg-mod") return assemble_fc_1d_modified(layout, sys);
  (void)scheme_info(scheme);  // throws with the list of names
  throw std::logic_error("unreachable");
}

template <class T>
OperatorPair<T> assemble_on_mesh(const std::string& scheme, const PeriodicMesh& mesh, const HyperbolicSystem& sys,
                                 const SchemeOptions& opt) {
  return assemble<T>(scheme, make_layout<T>(scheme_info(scheme).layout, mesh), sys, opt);
}

#define FVS_INSTANTIATE(T)                                                                                            \
  template std::shared_ptr<const ControlVolumeLayout<T>> make_layout<T>(LayoutKind, const PeriodicMesh&);             \
  template OperatorPair<T> assemble<T>(const std::string&, std::shared_ptr<const ControlVolumeLayout<T>>,             \
                                       const HyperbolicSystem&, const SchemeOptions&);                                \
  template OperatorPair<T> assemble_on_mesh<T>(const std::string&, const PeriodicMesh&, const HyperbolicSystem&,      \
                                               const SchemeOptions&);                                                 \
  template OperatorPair<T> assemble_basic_fv<T>(std::shared_ptr<const ControlVolumeLayout<T>>, const HyperbolicSystem&); \
  template OperatorPair<T> assemble_poly_recon<T>(std::shared_ptr<const ControlVolumeLayout<T>>, const HyperbolicSystem&, \
                                                  int, WeightPolicy);                                                 \
  template OperatorPair<T> assemble_bbr3<T>(std::shared_ptr<const ControlVolumeLayout<T>>, const HyperbolicSystem&);  \
  template OperatorPair<T> assemble_edge_based<T>(std::shared_ptr<const ControlVolumeLayout<T>>, const HyperbolicSystem&, \
                                                  EdgeVariant, WeightPolicy);                                         \
  template OperatorPair<T> assemble_fc<T>(std::shared_ptr<const ControlVolumeLayout<T>>, const HyperbolicSystem&,     \
                                          FcVariant, const SchemeOptions&);                                           \
  template OperatorPair<T> assemble_fc_1d_modified<T>(std::shared_ptr<const ControlVolumeLayout<T>>,                  \
                                                      const HyperbolicSystem&);                                       \
  template Bbr3Face<T> bbr3_face_value<T>(const ControlVolumeLayout<T>&, int, int);                                   \
  template Stencil<T> fc_s_operator<T>(const ControlVolumeLayout<T>&, int, const Vec2<T>&, const DerivativeStencils<T>&);

FVS_INSTANTIATE(double)
FVS_INSTANTIATE(Rational)

}  // namespace fvs
