#include "fvs/analysis.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "fvs/timeloop.hpp"

namespace fvs {

namespace {

template <class T> T period_volume(const ControlVolumeLayout<T>& L) {
  return L.dim == 1 ? L.period[0] : T(L.period[0] * L.period[1]);
}

template <class T> double derivative_scale(const ControlVolumeLayout<T>& L, const MultiPolynomial<T>& f) {
  double m = 0.0;
  for (int axis = 0; axis < L.dim; ++axis) {
    const MultiPolynomial<T> df = f.derivative(axis);
    for (int j = 0; j < L.size(); ++j)
      for (const T& v : df.eval(L.point[j])) m = std::max(m, std::fabs(to_double(v)));
  }
  return std::max(m, 1.0);
}

double block_norm(const Block<double>& b) {
  if (b.n == 1) return std::fabs(b(0, 0));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(b));
  return svd.singularValues()(0);
}

template <class T> Block<double> block_as_double(const Block<T>& b) {
  Block<double> r(b.n);
  for (std::size_t i = 0; i < b.a.size(); ++i) r.a[i] = to_double(b.a[i]);
  return r;
}

std::vector<int> representatives(const std::vector<int>& dof_class, int classes) {
  std::vector<int> rep(classes, -1);
  for (int j = 0; j < static_cast<int>(dof_class.size()); ++j)
    if (rep[dof_class[j]] < 0) rep[dof_class[j]] = j;
  return rep;
}

double weighted_inverse_norm(const Eigen::SparseMatrix<double>& M, const std::vector<double>& volume, int iterations) {
  const int N = static_cast<int>(M.rows());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(M), lut;
  if (lu.info() != Eigen::Success) throw std::runtime_error("mass matrix is singular (LU factorization failed)");
  const Eigen::SparseMatrix<double> Mt = M.transpose();
  lut.compute(Mt);
  Eigen::VectorXd sw(N);
  for (int j = 0; j < N; ++j) sw(j) = std::sqrt(volume[j]);
  Rng rng(12345);
  Eigen::VectorXd x(N);
  for (int j = 0; j < N; ++j) x(j) = rng.uniform(0.5, 1.5);
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd y = lu.solve(Eigen::VectorXd(x.cwiseQuotient(sw)));
    y = y.cwiseProduct(sw).cwiseProduct(sw);
    y = lut.solve(y).cwiseQuotient(sw);
    const double next = y.norm();
    x = y / next;
    if (std::fabs(next - lambda) <= 1e-12 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace

std::string BasisMonomial::name() const {
  std::string m = monomial_name(px, py, 2);
  return "e" + std::to_string(component) + "*" + m;
}

std::vector<BasisMonomial> monomial_basis(int dim, int n, int degree) {
  std::vector<BasisMonomial> out;
  for (auto [a, b] : monomials_of_degree(dim, degree))
    for (int c = 0; c < n; ++c) out.push_back({c, a, b});
  return out;
}

template <class T> MultiPolynomial<T> basis_polynomial(const BasisMonomial& b, int n, bool factorial) {
  T coef(1);
  if (factorial) {
    for (int i = 2; i <= b.px; ++i) coef /= i;
    for (int i = 2; i <= b.py; ++i) coef /= i;
  }
  return MultiPolynomial<T>::unit_monomial(n, b.component, b.px, b.py, coef);
}

template <> bool negligible<double>(const double& x, double scale) { return std::fabs(x) <= 1e-11 * scale; }
template <> bool negligible<Rational>(const Rational& x, double) { return sgn(x) == 0; }

template <class T>
TruncationReport<T> truncation_error(const OperatorPair<T>& pair, const HyperbolicSystem& sys, const MultiPolynomial<T>& f) {
  const auto& L = *pair.layout;
  if (f.size() != pair.n) throw std::invalid_argument("truncation_error: polynomial has the wrong number of components");
  PolynomialProjector<T> pf(L, pair.projection, f);
  PolynomialProjector<T> pg(L, pair.projection, sys.apply_to_gradient(f));
  const MeshField<T> af = apply_A<T>(pair, [&](const SiteRef& s) { return pf.at(s); });
  const MeshField<T> mg = apply_M<T>(pair, [&](const SiteRef& s) { return pg.at(s); });
  TruncationReport<T> r;
  r.eps.resize(af.size());
  for (std::size_t i = 0; i < af.size(); ++i) r.eps[i] = af[i] - mg[i];
  r.mean = weighted_sum(L, r.eps, pair.n);
  const T vol = period_volume(L);
  for (T& m : r.mean) m /= vol;
  double s = 0.0;
  for (int j = 0; j < L.size(); ++j)
    for (int a = 0; a < pair.n; ++a) {
      const double v = to_double(r.eps[static_cast<std::size_t>(j) * pair.n + a]);
      s += to_double(L.volume[j]) * v * v;
      r.max_abs = std::max(r.max_abs, std::fabs(v));
    }
  r.norm = std::sqrt(s);
  r.scale = sys.norm_estimate() * derivative_scale(L, f);
  return r;
}

template <class T> ExactnessResult exactness_order(const OperatorPair<T>& pair, const HyperbolicSystem& sys, int p_max) {
  ExactnessResult out;
  for (int q = 0; q <= p_max; ++q) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& b : monomial_basis(pair.layout->dim, pair.n, q)) {
      const TruncationReport<T> r = truncation_error(pair, sys, basis_polynomial<T>(b, pair.n));
      worst = std::max(worst, r.max_abs / r.scale);
      for (const T& e : r.eps)
        if (!negligible(e, r.scale)) {
          if (ok) out.first_failure = b.name();
          ok = false;
          break;
        }
    }
    out.worst.push_back(worst);
    if (!ok) break;
    out.order = q;
  }
  return out;
}

template <class T> ZeroMeanResult zero_mean_check(const OperatorPair<T>& pair, const HyperbolicSystem& sys, int p) {
  ZeroMeanResult out;
  for (const auto& b : monomial_basis(pair.layout->dim, pair.n, p + 1)) {
    const TruncationReport<T> r = truncation_error(pair, sys, basis_polynomial<T>(b, pair.n));
    for (int c = 0; c < pair.n; ++c) {
      const double rel = std::fabs(to_double(r.mean[c])) / r.scale;
      out.means.emplace_back(b.name() + "[" + std::to_string(c) + "]", to_double(r.mean[c]));
      if (out.worst_monomial.empty() || rel > out.worst) {
        out.worst = rel;
        out.worst_monomial = b.name();
      }
      if (!negligible(r.mean[c], r.scale)) out.zero_mean = false;
    }
  }
  return out;
}

template <class T> RestrictedSpectrum restricted_spectrum(const OperatorPair<T>& pair) {
  const auto& L = *pair.layout;
  const int classes = L.pattern_size(), n = pair.n;
  const std::vector<int> rep = representatives(L.dof_class, classes);
  RestrictedSpectrum s;
  s.h = L.mesh->longest_edge();
  const Eigen::MatrixXd Ar = restricted_A(pair);
  s.sqrt_volume.resize(classes * n);
  for (int c = 0; c < classes; ++c)
    for (int a = 0; a < n; ++a) s.sqrt_volume(c * n + a) = std::sqrt(to_double(L.volume[rep[c]]));
  const Eigen::MatrixXd S = s.sqrt_volume.asDiagonal() * (s.h * Ar) * s.sqrt_volume.cwiseInverse().asDiagonal();
  for (int c = 0; c < classes; ++c) {
    std::vector<double> rows(n, 0.0);
    for (const auto& [site, b] : row_blocks(pair, rep[c]))
      for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e) rows[a] += std::fabs(to_double(b(a, e)));
    for (double v : rows) s.reference = std::max(s.reference, s.h * v);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.sigma = svd.singularValues();
  s.U = svd.matrixU();
  s.V = svd.matrixV();
  const double smax = s.sigma.size() ? s.sigma(0) : 0.0;
  s.threshold = 1e-10 * std::max(smax, s.reference);
  for (int i = 0; i < s.sigma.size(); ++i)
    if (s.sigma(i) > s.threshold) ++s.rank;
  return s;
}

CaResult compute_CA(const RestrictedSpectrum& s) {
  CaResult r;
  r.sigma_max = s.sigma.size() ? s.sigma(0) : 0.0;
  if (s.rank == 0) {
    r.degenerate = true;
    return r;
  }
  r.sigma_min_positive = s.sigma(s.rank - 1);
  r.value = 1.0 / r.sigma_min_positive;
  return r;
}

KernelResult kernel_check(const RestrictedSpectrum& s, int n) {
  KernelResult r;
  const int size = static_cast<int>(s.sigma.size());
  r.dimension = size - s.rank;
  const int classes = size / n;
  for (int col = s.rank; col < size; ++col) {
    Eigen::VectorXd x = s.V.col(col).cwiseQuotient(s.sqrt_volume);
    x /= x.cwiseAbs().maxCoeff();
    for (int a = 0; a < n; ++a) {
      double lo = x(a), hi = x(a);
      for (int c = 1; c < classes; ++c) {
        lo = std::min(lo, x(c * n + a));
        hi = std::max(hi, x(c * n + a));
      }
      r.worst_variation = std::max(r.worst_variation, hi - lo);
    }
  }
  r.constant = r.worst_variation <= 1e-9;
  r.holds = r.constant && r.dimension == n;
  return r;
}

template <class T>
MembershipResult image_membership(const OperatorPair<T>& pair, const RestrictedSpectrum& s, const MeshField<T>& eps) {
  const auto& L = *pair.layout;
  const int classes = L.pattern_size(), n = pair.n;
  const std::vector<int> rep = representatives(L.dof_class, classes);
  Eigen::VectorXd b(classes * n);
  for (int c = 0; c < classes; ++c)
    for (int a = 0; a < n; ++a) b(c * n + a) = to_double(eps[static_cast<std::size_t>(rep[c]) * n + a]);
  b = b.cwiseProduct(s.sqrt_volume);
  MembershipResult r;
  const double bn = b.norm();
  if (bn == 0.0) return r;
  const Eigen::MatrixXd Ur = s.U.leftCols(s.rank);
  const Eigen::VectorXd res = b - Ur * (Ur.transpose() * b);
  r.residual = res.norm() / bn;
  r.member = r.residual <= 1e-8;
  return r;
}

double monomial_count(int p, int d) {
  double num = 1.0;
  for (int i = p + 2; i <= p + d; ++i) num *= i;
  for (int i = 2; i <= d - 1; ++i) num /= i;
  return num;
}

double mass_inverse_norm(const OperatorPair<double>& pair, int iterations) {
  if (pair.identity_mass) return 1.0;
  return weighted_inverse_norm(sparse_mass(pair), pair.layout->volume, iterations);
}

template <class T> SchemeConstants scheme_constants(const OperatorPair<T>& pair, const HyperbolicSystem& sys, int p) {
  const auto& L = *pair.layout;
  SchemeConstants c;
  c.p = p;
  c.h = L.mesh->longest_edge();
  double max_block = 0.0, vmin = 1e300, vmax = 0.0;
  std::map<int, int> column;
  for (int j = 0; j < L.size(); ++j) {
    std::set<SiteRef> stencil{{j, {0, 0}}};
    double row_a = 0.0, row_m = 0.0;
    for (const auto& [site, b] : row_blocks(pair, j)) {
      const double nb = block_norm(block_as_double(b));
      if (nb == 0.0) continue;
      stencil.insert(site);
      row_a += nb;
      max_block = std::max(max_block, nb);
    }
    if (pair.identity_mass) {
      row_m = 1.0;
    } else {
      for (const auto& t : pair.mass[j].terms) {
        stencil.insert(t.site);
        row_m += std::fabs(to_double(t.coef));
      }
    }
    for (const auto& s : stencil) {
      const Vec2<double> o = to_double(L.offset(j, s));
      c.C_W = std::max(c.C_W, std::hypot(o[0], o[1]));
      ++column[s.dof];
    }
    c.C_a = std::max(c.C_a, row_a);
    c.C_m = std::max(c.C_m, row_m);
    c.max_stencil = std::max(c.max_stencil, static_cast<int>(stencil.size()));
    const double v = to_double(L.volume[j]);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  for (const auto& [dof, count] : column) c.max_column = std::max(c.max_column, count);
  c.C_W /= c.h;
  c.C_a *= c.h;
  c.C_v = vmax / vmin;
  c.C_a_tilde = c.h * max_block * std::sqrt(static_cast<double>(c.max_stencil)) *
                std::sqrt(static_cast<double>(c.max_column)) * std::sqrt(c.C_v);
  for (const auto& b : monomial_basis(L.dim, pair.n, p + 1)) {
    const TruncationReport<T> r = truncation_error(pair, sys, basis_polynomial<T>(b, pair.n, true));
    c.C_eps = std::max(c.C_eps, r.norm);
  }
  c.C_eps /= std::pow(c.h, p);
  const CaResult ca = compute_CA(pair);
  c.C_A = ca.value;
  c.C_A_degenerate = ca.degenerate;
  c.norm_A = sys.norm_estimate();
  c.c_p = monomial_count(p, L.dim);
  c.C_Pi = pair.n * c.c_p * c.C_A * c.C_eps;
  if (pair.identity_mass) {
    c.norm_M_inv = 1.0;
  } else {
    std::vector<double> vol(L.size());
    for (int j = 0; j < L.size(); ++j) vol[j] = to_double(L.volume[j]);
    c.norm_M_inv = weighted_inverse_norm(sparse_mass(pair), vol, 300);
  }
  c.C_E = c.norm_M_inv * (std::sqrt(static_cast<double>(L.dim)) * c.norm_A * c.C_m * std::pow(c.C_W, p + 1) +
                          c.C_a * std::pow(c.C_W, p + 2) + pair.n * c.c_p * c.C_a_tilde * c.C_W * c.C_A * c.C_eps);
  return c;
}

StabilityReport stability_estimate(const OperatorPair<double>& pair, const HyperbolicSystem& sys, std::vector<double> times,
                                   std::uint64_t seed, int dense_limit) {
  std::sort(times.begin(), times.end());
  const auto& L = *pair.layout;
  const int size = pair.size(), n = pair.n;
  Eigen::VectorXd sw(size);
  for (int j = 0; j < L.size(); ++j)
    for (int a = 0; a < n; ++a) sw(j * n + a) = std::sqrt(L.volume[j]);
  StabilityReport rep;
  rep.times = times;
  double running = 1.0;
  if (size <= dense_limit) {
    rep.method = "dense-expm";
    const Eigen::MatrixXd A = Eigen::MatrixXd(sparse_A(pair));
    Eigen::MatrixXd Mfull = Eigen::MatrixXd::Zero(size, size);
    const Eigen::SparseMatrix<double> Ms = sparse_mass(pair);
    for (int c = 0; c < Ms.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(Ms, c); it; ++it)
        for (int a = 0; a < n; ++a) Mfull(it.row() * n + a, it.col() * n + a) = it.value();
    const Eigen::MatrixXd B = -Mfull.partialPivLu().solve(A);
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(size, size);
    double prev = 0.0;
    for (double t : times) {
      if (t > prev) E = Eigen::MatrixXd((B * (t - prev)).exp()) * E;
      prev = t;
      const Eigen::MatrixXd S = sw.asDiagonal() * E * sw.cwiseInverse().asDiagonal();
      Eigen::BDCSVD<Eigen::MatrixXd> svd(S);
      running = std::max(running, svd.singularValues()(0));
      rep.K.push_back(running);
    }
    return rep;
  }
  rep.method = "sampled-rk4";
  const SemidiscreteSystem semi(pair);
  const double dt = stable_time_step(pair, sys, 0.3);
  Rng rng(seed);
  std::vector<double> best(times.size(), 1.0);
  for (int sample = 0; sample < 64; ++sample) {
    Eigen::VectorXd u(size);
    for (int i = 0; i < size; ++i) u(i) = rng.uniform(-1.0, 1.0);
    u /= u.cwiseProduct(sw).norm();
    double t = 0.0, peak = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      while (t < times[i] - 1e-14) {
        const double step = std::min(dt, times[i] - t);
        u = semi.rk4_step(u, step);
        t += step;
        peak = std::max(peak, u.cwiseProduct(sw).norm());
      }
      best[i] = std::max(best[i], peak);
    }
  }
  for (double b : best) {
    running = std::max(running, b);
    rep.K.push_back(running);
  }
  return rep;
}

#define FVS_INSTANTIATE(T)                                                                                       \
  template MultiPolynomial<T> basis_polynomial<T>(const BasisMonomial&, int, bool);                              \
  template TruncationReport<T> truncation_error<T>(const OperatorPair<T>&, const HyperbolicSystem&,              \
                                                   const MultiPolynomial<T>&);                                   \
  template ExactnessResult exactness_order<T>(const OperatorPair<T>&, const HyperbolicSystem&, int);             \
  template ZeroMeanResult zero_mean_check<T>(const OperatorPair<T>&, const HyperbolicSystem&, int);              \
  template RestrictedSpectrum restricted_spectrum<T>(const OperatorPair<T>&);                                    \
  template MembershipResult image_membership<T>(const OperatorPair<T>&, const RestrictedSpectrum&, const MeshField<T>&); \
  template SchemeConstants scheme_constants<T>(const OperatorPair<T>&, const HyperbolicSystem&, int);

FVS_INSTANTIATE(double)
FVS_INSTANTIATE(Rational)

}  // namespace fvs
