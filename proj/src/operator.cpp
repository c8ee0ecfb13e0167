#include "fvs/operator.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace fvs {

namespace {

template <class T> void add_to(std::vector<T>& out, std::size_t base, const std::vector<T>& v, const T& s) {
  for (std::size_t a = 0; a < v.size(); ++a) out[base + a] += v[a] * s;
}

template <class T> std::vector<T> stencil_value(const Stencil<T>& st, const SiteValues<T>& u, int n) {
  std::vector<T> r(n, T(0));
  for (const auto& t : st.terms) {
    const std::vector<T> v = u(t.site);
    for (int a = 0; a < n; ++a) r[a] += t.coef * v[a];
  }
  return r;
}

template <class T> SiteValues<T> periodic_values(const MeshField<T>& u, int n) {
  return [&u, n](const SiteRef& s) {
    return std::vector<T>(u.begin() + static_cast<std::ptrdiff_t>(s.dof) * n,
                          u.begin() + static_cast<std::ptrdiff_t>(s.dof + 1) * n);
  };
}

std::vector<int> class_representatives(const std::vector<int>& dof_class, int classes) {
  std::vector<int> rep(classes, -1);
  for (int j = 0; j < static_cast<int>(dof_class.size()); ++j)
    if (rep[dof_class[j]] < 0) rep[dof_class[j]] = j;
  for (int c : rep)
    if (c < 0) throw std::logic_error("restricted operator: empty DOF class");
  return rep;
}

}  // namespace

template <class T> std::vector<T> face_flux(const FluxFace<T>& f, const SiteValues<T>& u) {
  const int n = f.plus.n;
  std::vector<T> r = f.plus.apply(stencil_value(f.left, u, n));
  if (!f.right.terms.empty()) {
    const std::vector<T> m = f.minus.apply(stencil_value(f.right, u, n));
    for (int a = 0; a < n; ++a) r[a] += m[a];
  }
  return r;
}

template <class T> MeshField<T> apply_A(const OperatorPair<T>& pair, const SiteValues<T>& u) {
  const auto& L = *pair.layout;
  MeshField<T> out(static_cast<std::size_t>(pair.size()), T(0));
  for (const auto& f : pair.faces) {
    const std::vector<T> F = face_flux(f, u);
    add_to(out, static_cast<std::size_t>(f.j) * pair.n, F, T(T(1) / L.volume[f.j]));
    // Row k sees the same stencils moved into its own chart.
    std::vector<T> Fk;
    if (f.shift == Shift{0, 0}) {
      Fk = F;
    } else {
      const Shift back{-f.shift[0], -f.shift[1]};
      Fk = face_flux<T>(f, [&](const SiteRef& s) { return u({s.dof, {s.shift[0] + back[0], s.shift[1] + back[1]}}); });
    }
    add_to(out, static_cast<std::size_t>(f.k) * pair.n, Fk, T(T(-1) / L.volume[f.k]));
  }
  return out;
}

template <class T> MeshField<T> apply_M(const OperatorPair<T>& pair, const SiteValues<T>& u) {
  MeshField<T> out(static_cast<std::size_t>(pair.size()), T(0));
  for (int j = 0; j < pair.dofs(); ++j) {
    const std::vector<T> v = pair.identity_mass ? u({j, {0, 0}}) : stencil_value(pair.mass[j], u, pair.n);
    for (int a = 0; a < pair.n; ++a) out[static_cast<std::size_t>(j) * pair.n + a] = v[a];
  }
  return out;
}

template <class T> MeshField<T> apply_A(const OperatorPair<T>& pair, const MeshField<T>& u) {
  const auto& L = *pair.layout;
  const SiteValues<T> values = periodic_values(u, pair.n);
  MeshField<T> out(static_cast<std::size_t>(pair.size()), T(0));
  for (const auto& f : pair.faces) {
    const std::vector<T> F = face_flux(f, values);
    add_to(out, static_cast<std::size_t>(f.j) * pair.n, F, T(T(1) / L.volume[f.j]));
    add_to(out, static_cast<std::size_t>(f.k) * pair.n, F, T(T(-1) / L.volume[f.k]));
  }
  return out;
}

template <class T> MeshField<T> apply_M(const OperatorPair<T>& pair, const MeshField<T>& u) {
  return apply_M(pair, periodic_values(u, pair.n));
}

template <class T> std::vector<std::pair<SiteRef, Block<T>>> row_blocks(const OperatorPair<T>& pair, int j) {
  const auto& L = *pair.layout;
  std::map<SiteRef, Block<T>> acc;
  auto put = [&](const SiteRef& s, const Block<T>& b) {
    auto it = acc.find(s);
    if (it == acc.end()) acc.emplace(s, b);
    else it->second = it->second + b;
  };
  for (int idx : pair.faces_of[j]) {
    const FluxFace<T>& f = pair.faces[idx];
    if (f.j == j) {
      const T inv = T(1) / L.volume[j];
      for (const auto& t : f.left.terms) put(t.site, f.plus.scaled(T(t.coef * inv)));
      for (const auto& t : f.right.terms) put(t.site, f.minus.scaled(T(t.coef * inv)));
    }
    if (f.k == j) {
      const T inv = T(-1) / L.volume[j];
      const Shift back{-f.shift[0], -f.shift[1]};
      for (const auto& t : f.left.terms)
        put({t.site.dof, {t.site.shift[0] + back[0], t.site.shift[1] + back[1]}}, f.plus.scaled(T(t.coef * inv)));
      for (const auto& t : f.right.terms)
        put({t.site.dof, {t.site.shift[0] + back[0], t.site.shift[1] + back[1]}}, f.minus.scaled(T(t.coef * inv)));
    }
  }
  std::vector<std::pair<SiteRef, Block<T>>> out(acc.begin(), acc.end());
  return out;
}

template <class T> Eigen::SparseMatrix<double> sparse_A(const OperatorPair<T>& pair) {
  const auto& L = *pair.layout;
  const int n = pair.n;
  std::vector<Eigen::Triplet<double>> trip;
  auto emit = [&](int row, int col, const Block<T>& b, double s) {
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        const double v = to_double(b(a, c)) * s;
        if (v != 0.0) trip.emplace_back(row * n + a, col * n + c, v);
      }
  };
  for (const auto& f : pair.faces) {
    const double sj = 1.0 / to_double(L.volume[f.j]), sk = -1.0 / to_double(L.volume[f.k]);
    for (const auto& t : f.left.terms) {
      emit(f.j, t.site.dof, f.plus, to_double(t.coef) * sj);
      emit(f.k, t.site.dof, f.plus, to_double(t.coef) * sk);
    }
    for (const auto& t : f.right.terms) {
      emit(f.j, t.site.dof, f.minus, to_double(t.coef) * sj);
      emit(f.k, t.site.dof, f.minus, to_double(t.coef) * sk);
    }
  }
  Eigen::SparseMatrix<double> A(pair.size(), pair.size());
  A.setFromTriplets(trip.begin(), trip.end());
  A.prune(0.0);
  return A;
}

template <class T> Eigen::SparseMatrix<double> sparse_mass(const OperatorPair<T>& pair) {
  const int N = pair.dofs();
  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < N; ++j) {
    if (pair.identity_mass) {
      trip.emplace_back(j, j, 1.0);
      continue;
    }
    for (const auto& t : pair.mass[j].terms) trip.emplace_back(j, t.site.dof, to_double(t.coef));
  }
  Eigen::SparseMatrix<double> M(N, N);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

template <class T> std::vector<std::vector<T>> restricted_A_exact(const OperatorPair<T>& pair) {
  const auto& L = *pair.layout;
  const int classes = L.pattern_size(), n = pair.n;
  const std::vector<int> rep = class_representatives(L.dof_class, classes);
  std::vector<std::vector<T>> R(static_cast<std::size_t>(classes) * n, std::vector<T>(static_cast<std::size_t>(classes) * n, T(0)));
  for (int c0 = 0; c0 < classes; ++c0)
    for (const auto& [site, b] : row_blocks(pair, rep[c0])) {
      const int c = L.dof_class[site.dof];
      for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e) R[c0 * n + a][c * n + e] += b(a, e);
    }
  return R;
}

template <class T> Eigen::MatrixXd restricted_A(const OperatorPair<T>& pair) {
  const auto R = restricted_A_exact(pair);
  Eigen::MatrixXd m(R.size(), R.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j) m(i, j) = to_double(R[i][j]);
  return m;
}

double flux_antisymmetry_defect(const OperatorPair<double>& pair, const HyperbolicSystem& sys, int samples,
                                std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    MeshField<double> u(static_cast<std::size_t>(pair.size()));
    for (double& x : u) x = rng.uniform(-1.0, 1.0);
    const SiteValues<double> values = periodic_values(u, pair.n);
    for (const auto& f : pair.faces) {
      const std::vector<double> F = face_flux(f, values);
      // F_kj upwinds the k-side value (right) against the j-side value (left).
      FluxFace<double> rev = f;
      const auto [plus, minus] = sys.upwind_split<double>({-f.normal[0], -f.normal[1]});
      rev.plus = plus;
      rev.minus = minus;
      std::swap(rev.left, rev.right);
      if (rev.left.terms.empty()) {
        // Central fluxes keep both sides in one stencil.
        rev.left = f.left;
        rev.plus = sys.directional_block<double>({-f.normal[0], -f.normal[1]});
        rev.right = {};
      }
      const std::vector<double> G = face_flux(rev, values);
      for (int a = 0; a < pair.n; ++a) worst = std::max(worst, std::fabs(F[a] + G[a]));
    }
  }
  return worst;
}

template <class T> std::vector<T> conservation_sum(const OperatorPair<T>& pair, const MeshField<T>& u) {
  return weighted_sum(*pair.layout, apply_A(pair, u), pair.n);
}

template <class T> std::string export_coordinate(const OperatorPair<T>& pair) {
  std::ostringstream os;
  os.precision(17);
  os << "% scheme " << pair.scheme << " dofs " << pair.dofs() << " components " << pair.n << "\n";
  const Eigen::SparseMatrix<double> A = sparse_A(pair);
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      os << "A " << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
  const Eigen::SparseMatrix<double> M = sparse_mass(pair);
  for (int c = 0; c < M.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      os << "M " << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
  return os.str();
}

template <class T> void index_faces(OperatorPair<T>& pair) {
  pair.faces_of.assign(pair.dofs(), {});
  for (int i = 0; i < static_cast<int>(pair.faces.size()); ++i) {
    pair.faces_of[pair.faces[i].j].push_back(i);
    if (pair.faces[i].k != pair.faces[i].j) pair.faces_of[pair.faces[i].k].push_back(i);
  }
}

#define FVS_INSTANTIATE(T)                                                                              \
  template std::vector<T> face_flux<T>(const FluxFace<T>&, const SiteValues<T>&);                       \
  template MeshField<T> apply_A<T>(const OperatorPair<T>&, const SiteValues<T>&);                       \
  template MeshField<T> apply_M<T>(const OperatorPair<T>&, const SiteValues<T>&);                       \
  template MeshField<T> apply_A<T>(const OperatorPair<T>&, const MeshField<T>&);                        \
  template MeshField<T> apply_M<T>(const OperatorPair<T>&, const MeshField<T>&);                        \
  template std::vector<std::pair<SiteRef, Block<T>>> row_blocks<T>(const OperatorPair<T>&, int);        \
  template Eigen::SparseMatrix<double> sparse_A<T>(const OperatorPair<T>&);                             \
  template Eigen::SparseMatrix<double> sparse_mass<T>(const OperatorPair<T>&);                          \
  template std::vector<std::vector<T>> restricted_A_exact<T>(const OperatorPair<T>&);                   \
  template Eigen::MatrixXd restricted_A<T>(const OperatorPair<T>&);                                     \
  template std::vector<T> conservation_sum<T>(const OperatorPair<T>&, const MeshField<T>&);             \
  template std::string export_coordinate<T>(const OperatorPair<T>&);                                    \
  template void index_faces<T>(OperatorPair<T>&);

FVS_INSTANTIATE(double)
FVS_INSTANTIATE(Rational)

}  // namespace fvs
