#include "fvs/fit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "fvs/projection.hpp"

namespace fvs {

std::string weight_policy_name(WeightPolicy w) { return w == WeightPolicy::uniform ? "uniform" : "inverse-distance"; }

WeightPolicy parse_weight_policy(const std::string& s) {
  if (s == "uniform") return WeightPolicy::uniform;
  if (s == "inverse-distance") return WeightPolicy::inverse_distance;
  throw std::invalid_argument("unknown weight policy '" + s + "' (expected inverse-distance or uniform)");
}

namespace {

constexpr int kMaxRings = 6;

std::optional<std::vector<std::vector<double>>> solve_lsq(const std::vector<std::vector<double>>& rows,
                                                          const std::vector<double>& w) {
  const int m = static_cast<int>(rows.size());
  if (m == 0) return std::nullopt;
  const int c = static_cast<int>(rows[0].size());
  if (m < c) return std::nullopt;
  Eigen::MatrixXd B(m, c);
  Eigen::VectorXd sw(m);
  for (int i = 0; i < m; ++i) {
    sw(i) = std::sqrt(w[i]);
    for (int k = 0; k < c; ++k) B(i, k) = sw(i) * rows[i][k];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  qr.setThreshold(1e-10);
  if (qr.rank() < c) return std::nullopt;
  const Eigen::MatrixXd X = qr.solve(Eigen::MatrixXd::Identity(m, m));
  std::vector<std::vector<double>> G(c, std::vector<double>(m));
  for (int k = 0; k < c; ++k)
    for (int i = 0; i < m; ++i) G[k][i] = X(k, i) * sw(i);
  return G;
}

std::optional<std::vector<std::vector<Rational>>> solve_lsq(const std::vector<std::vector<Rational>>& rows,
                                                            const std::vector<Rational>& w) {
  const int m = static_cast<int>(rows.size());
  if (m == 0) return std::nullopt;
  const int c = static_cast<int>(rows[0].size());
  if (m < c) return std::nullopt;
  // Normal equations [BᵀWB | BᵀW] reduced exactly.
  std::vector<std::vector<Rational>> aug(c, std::vector<Rational>(c + m, Rational(0)));
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < c; ++a) {
      const Rational wb = w[i] * rows[i][a];
      for (int b = 0; b < c; ++b) aug[a][b] += wb * rows[i][b];
      aug[a][c + i] = wb;
    }
  for (int col = 0; col < c; ++col) {
    int piv = -1;
    for (int r = col; r < c; ++r)
      if (sgn(aug[r][col]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(aug[col], aug[piv]);
    const Rational inv = 1 / aug[col][col];
    for (auto& x : aug[col]) x *= inv;
    for (int r = 0; r < c; ++r) {
      if (r == col || sgn(aug[r][col]) == 0) continue;
      const Rational f = aug[r][col];
      for (int k = col; k < c + m; ++k) aug[r][k] -= f * aug[col][k];
    }
  }
  std::vector<std::vector<Rational>> G(c, std::vector<Rational>(m));
  for (int a = 0; a < c; ++a)
    for (int i = 0; i < m; ++i) G[a][i] = aug[a][c + i];
  return G;
}

template <class T> T int_pow(const T& x, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

template <class T> T max_abs_offset(const ControlVolumeLayout<T>& L, int j, const std::vector<SiteRef>& sites) {
  T s(0);
  for (const auto& site : sites) {
    const Vec2<T> o = L.offset(j, site);
    for (int a = 0; a < L.dim; ++a)
      if (abs_value(o[a]) > s) s = abs_value(o[a]);
  }
  return s;
}

template <class T> T weight_of(WeightPolicy policy, const Vec2<T>& o) {
  if (policy == WeightPolicy::uniform) return T(1);
  return T(1) / dot(o, o);
}

template <class T>
std::optional<DerivativeStencils<T>> point_fit(const ControlVolumeLayout<T>& L, int j, int rings, int degree,
                                               WeightPolicy policy) {
  std::vector<SiteRef> sites = L.ring_sites(j, rings);
  sites.erase(sites.begin());
  std::vector<std::pair<int, int>> mons;
  for (int q = 1; q <= degree; ++q)
    for (auto m : monomials_of_degree(L.dim, q)) mons.push_back(m);
  if (sites.size() < mons.size()) return std::nullopt;
  const T s = max_abs_offset(L, j, sites);
  std::vector<std::vector<T>> rows;
  std::vector<T> w;
  for (const auto& site : sites) {
    const Vec2<T> o = L.offset(j, site);
    const Vec2<T> xi{o[0] / s, o[1] / s};
    std::vector<T> row;
    for (auto [a, b] : mons) row.push_back(int_pow(xi[0], a) * int_pow(xi[1], b));
    rows.push_back(row);
    w.push_back(weight_of(policy, o));
  }
  auto G = solve_lsq(rows, w);
  if (!G) return std::nullopt;
  DerivativeStencils<T> out;
  out.rings = rings;
  for (std::size_t m = 0; m < mons.size(); ++m) {
    Stencil<T> c;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      c.add(sites[i], (*G)[m][i]);
      c.add({j, {0, 0}}, -(*G)[m][i]);
    }
    const auto [a, b] = mons[m];
    if (a == 1 && b == 0) out.dx = c.scaled(T(1) / s);
    if (a == 0 && b == 1) out.dy = c.scaled(T(1) / s);
    if (a == 2 && b == 0) out.dxx = c.scaled(T(2) / (s * s));
    if (a == 1 && b == 1) out.dxy = c.scaled(T(1) / (s * s));
    if (a == 0 && b == 2) out.dyy = c.scaled(T(2) / (s * s));
  }
  return out;
}

template <class T> Polynomial<T> scaled_monomial(const Vec2<T>& center, const T& s, int a, int b) {
  const Polynomial<T> lx = Polynomial<T>::monomial(1, 0, T(1) / s) + Polynomial<T>::constant(T(-center[0] / s));
  const Polynomial<T> ly = Polynomial<T>::monomial(0, 1, T(1) / s) + Polynomial<T>::constant(T(-center[1] / s));
  Polynomial<T> p = Polynomial<T>::constant(T(1));
  for (int i = 0; i < a; ++i) p = p * lx;
  for (int i = 0; i < b; ++i) p = p * ly;
  return p;
}

}  // namespace

template <class T>
std::optional<std::vector<std::vector<T>>> weighted_least_squares(const std::vector<std::vector<T>>& rows,
                                                                  const std::vector<T>& weights) {
  return solve_lsq(rows, weights);
}

template <class T>
DerivativeStencils<T> quadratic_fit(const ControlVolumeLayout<T>& layout, int j, int rings, WeightPolicy weights) {
  for (int r = rings; r <= kMaxRings; ++r)
    if (auto fit = point_fit(layout, j, r, 2, weights)) return *fit;
  throw std::runtime_error("quadratic fit: rank-deficient stencil at DOF " + std::to_string(j) + " up to " +
                           std::to_string(kMaxRings) + " rings");
}

template <class T>
DerivativeStencils<T> linear_gradient_fit(const ControlVolumeLayout<T>& layout, int j, WeightPolicy weights) {
  for (int r = 1; r <= kMaxRings; ++r)
    if (auto fit = point_fit(layout, j, r, 1, weights)) return *fit;
  throw std::runtime_error("gradient fit: rank-deficient stencil at DOF " + std::to_string(j));
}

template <class T>
CellReconstruction<T> cell_average_reconstruction(const ControlVolumeLayout<T>& L, int j, int degree,
                                                  WeightPolicy policy) {
  std::vector<std::pair<int, int>> mons;
  for (int q = 1; q <= degree; ++q)
    for (auto m : monomials_of_degree(L.dim, q)) mons.push_back(m);
  const std::size_t dim_p = mons.size() + 1;
  const std::size_t needed = (3 * dim_p + 1) / 2;  // ⌈1.5 dim P_p⌉
  for (int r = 1; r <= kMaxRings; ++r) {
    std::vector<SiteRef> sites = L.ring_sites(j, r);
    if (sites.size() < needed) continue;
    sites.erase(sites.begin());
    CellReconstruction<T> rec;
    rec.rings = r;
    rec.monomials = mons;
    rec.stencil_size = sites.size() + 1;
    rec.scale = max_abs_offset(L, j, sites);
    std::vector<Polynomial<T>> basis;
    for (auto [a, b] : mons) {
      basis.push_back(scaled_monomial(L.point[j], rec.scale, a, b));
      rec.mean_on_cell.push_back(cell_average(L, j, {0, 0}, basis.back()));
    }
    std::vector<std::vector<T>> rows;
    std::vector<T> w;
    for (const auto& site : sites) {
      std::vector<T> row;
      for (std::size_t m = 0; m < mons.size(); ++m)
        row.push_back(cell_average(L, site.dof, site.shift, basis[m]) - rec.mean_on_cell[m]);
      rows.push_back(row);
      w.push_back(weight_of(policy, L.offset(j, site)));
    }
    auto G = solve_lsq(rows, w);
    if (!G) continue;
    for (std::size_t m = 0; m < mons.size(); ++m) {
      Stencil<T> c;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        c.add(sites[i], (*G)[m][i]);
        c.add({j, {0, 0}}, -(*G)[m][i]);
      }
      rec.coefficient.push_back(c);
    }
    return rec;
  }
  throw std::runtime_error("polynomial reconstruction: rank-deficient stencil at cell " + std::to_string(j));
}

template <class T>
Stencil<T> reconstruction_face_value(const ControlVolumeLayout<T>& L, int j, const CellReconstruction<T>& rec, int face) {
  const LayoutFace<T>& f = L.faces[j][face];
  Stencil<T> out = Stencil<T>::unit({j, {0, 0}});
  for (std::size_t m = 0; m < rec.monomials.size(); ++m) {
    const auto [a, b] = rec.monomials[m];
    const Polynomial<T> p = scaled_monomial(L.point[j], rec.scale, a, b);
    const T face_mean = L.dim == 1 ? p.eval(f.p0) : segment_average(p, f.p0, f.p1);
    out.add_scaled(rec.coefficient[m], T(face_mean - rec.mean_on_cell[m]));
  }
  out.prune();
  return out;
}

#define FVS_INSTANTIATE(T)                                                                                      \
  template std::optional<std::vector<std::vector<T>>> weighted_least_squares<T>(const std::vector<std::vector<T>>&, \
                                                                                const std::vector<T>&);          \
  template DerivativeStencils<T> quadratic_fit<T>(const ControlVolumeLayout<T>&, int, int, WeightPolicy);       \
  template DerivativeStencils<T> linear_gradient_fit<T>(const ControlVolumeLayout<T>&, int, WeightPolicy);      \
  template CellReconstruction<T> cell_average_reconstruction<T>(const ControlVolumeLayout<T>&, int, int,        \
                                                                WeightPolicy);                                  \
  template Stencil<T> reconstruction_face_value<T>(const ControlVolumeLayout<T>&, int, const CellReconstruction<T>&, int);

FVS_INSTANTIATE(double)
FVS_INSTANTIATE(Rational)

}  // namespace fvs
