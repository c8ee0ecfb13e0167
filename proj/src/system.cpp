#include "fvs/system.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fvs {

template <class T> Block<T> Block<T>::identity(int size) {
  Block b(size);
  for (int i = 0; i < size; ++i) b(i, i) = T(1);
  return b;
}

template <class T> bool Block<T>::is_zero() const {
  for (const T& x : a)
    if (!fvs::is_zero(x)) return false;
  return true;
}

template <class T> Block<T> Block<T>::scaled(const T& s) const {
  Block r = *this;
  for (T& x : r.a) x *= s;
  return r;
}

template <class T> Block<T> Block<T>::operator+(const Block& o) const {
  Block r = *this;
  for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
  return r;
}

template <class T> Block<T> Block<T>::operator-(const Block& o) const {
  Block r = *this;
  for (std::size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
  return r;
}

template <class T> std::vector<T> Block<T>::apply(const std::vector<T>& v) const {
  std::vector<T> r(n, T(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

template struct Block<double>;
template struct Block<Rational>;

Eigen::MatrixXd to_eigen(const Block<double>& b) {
  Eigen::MatrixXd m(b.n, b.n);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) m(i, j) = b(i, j);
  return m;
}

Block<double> from_eigen(const Eigen::MatrixXd& m) {
  Block<double> b(static_cast<int>(m.rows()));
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) b(i, j) = m(i, j);
  return b;
}

HyperbolicSystem::HyperbolicSystem(int dim, std::vector<Eigen::MatrixXd> matrices, SystemKind kind, std::string name)
    : dim_(dim), n_(0), A_(std::move(matrices)), kind_(kind), name_(std::move(name)) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("HyperbolicSystem: dimension must be 1 or 2");
  if (static_cast<int>(A_.size()) != dim_) throw std::invalid_argument("HyperbolicSystem: need one matrix per axis");
  n_ = static_cast<int>(A_[0].rows());
  for (const auto& a : A_)
    if (a.rows() != n_ || a.cols() != n_) throw std::invalid_argument("HyperbolicSystem: matrices must be n×n");
  for (const auto& a : A_) {
    Block<Rational> b(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) b(i, j) = nice_rational(a(i, j));
    exact_.push_back(b);
  }
  // Hyperbolicity on a direction sample.
  for (int k = 0; k < (dim_ == 1 ? 1 : 16); ++k) {
    const double th = M_PI * k / 16.0;
    (void)flux_jacobian_decomposition(*this, {std::cos(th), dim_ == 2 ? std::sin(th) : 0.0});
  }
}

Eigen::MatrixXd HyperbolicSystem::directional(const Vec2<double>& dir) const {
  Eigen::MatrixXd m = A_[0] * dir[0];
  if (dim_ == 2) m += A_[1] * dir[1];
  return m;
}

bool HyperbolicSystem::exact_upwind_available() const {
  for (const auto& a : A_)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j && a(i, j) != 0.0) return false;
  return true;
}

namespace {

template <class F> double direction_sup(int dim, F&& f) {
  if (dim == 1) return f(0.0);
  const int samples = 180;
  double best = -1.0, best_th = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = M_PI * k / samples;
    const double v = f(th);
    if (v > best) {
      best = v;
      best_th = th;
    }
  }
  // Golden-section refinement around the best sample.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_th - M_PI / samples, b = best_th + M_PI / samples;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({best, fc, fd});
}

}  // namespace

double HyperbolicSystem::norm_estimate() const {
  return direction_sup(dim_, [&](double th) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(directional({std::cos(th), std::sin(th)}));
    return svd.singularValues()(0);
  });
}

double HyperbolicSystem::max_wave_speed() const {
  return direction_sup(dim_, [&](double th) {
    const Eigendecomposition e = flux_jacobian_decomposition(*this, {std::cos(th), dim_ == 2 ? std::sin(th) : 0.0});
    return e.lambda.cwiseAbs().maxCoeff();
  });
}

template <class T> MultiPolynomial<T> HyperbolicSystem::apply_to_gradient(const MultiPolynomial<T>& f) const {
  if (f.size() != n_) throw std::invalid_argument("apply_to_gradient: component count mismatch");
  MultiPolynomial<T> g(n_);
  for (int axis = 0; axis < dim_; ++axis) {
    const MultiPolynomial<T> df = f.derivative(axis);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        T a;
        if constexpr (std::is_same_v<T, double>) a = A_[axis](i, j);
        else a = exact_[axis](i, j);
        if (!is_zero(a)) g.comp[i] = g.comp[i] + df.comp[j].scaled(a);
      }
  }
  return g;
}

template <class T> Block<T> HyperbolicSystem::directional_block(const Vec2<T>& normal) const {
  Block<T> b(n_);
  for (int axis = 0; axis < dim_; ++axis)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if constexpr (std::is_same_v<T, double>) b(i, j) += A_[axis](i, j) * normal[axis];
        else b(i, j) += exact_[axis](i, j) * normal[axis];
      }
  return b;
}

template <class T> std::pair<Block<T>, Block<T>> HyperbolicSystem::upwind_split(const Vec2<T>& normal) const {
  const Block<T> an = directional_block(normal);
  if constexpr (std::is_same_v<T, Rational>) {
    if (!exact_upwind_available())
      throw std::runtime_error("exact arithmetic needs diagonal flux matrices (|A·n| is irrational otherwise)");
    Block<T> plus(n_), minus(n_);
    for (int i = 0; i < n_; ++i) {
      if (sgn(an(i, i)) > 0) plus(i, i) = an(i, i);
      else minus(i, i) = an(i, i);
    }
    return {plus, minus};
  } else {
    Eigen::MatrixXd absm;
    if (kind_ == SystemKind::linearized_euler || kind_ == SystemKind::transport)
      absm = analytic_decomposition(*this, normal).abs_matrix();
    else
      absm = flux_jacobian_decomposition(*this, normal).abs_matrix();
    const Eigen::MatrixXd a = to_eigen(an);
    return {from_eigen(0.5 * (a + absm)), from_eigen(0.5 * (a - absm))};
  }
}

template MultiPolynomial<double> HyperbolicSystem::apply_to_gradient<double>(const MultiPolynomial<double>&) const;
template MultiPolynomial<Rational> HyperbolicSystem::apply_to_gradient<Rational>(const MultiPolynomial<Rational>&) const;
template Block<double> HyperbolicSystem::directional_block<double>(const Vec2<double>&) const;
template Block<Rational> HyperbolicSystem::directional_block<Rational>(const Vec2<Rational>&) const;
template std::pair<Block<double>, Block<double>> HyperbolicSystem::upwind_split<double>(const Vec2<double>&) const;
template std::pair<Block<Rational>, Block<Rational>> HyperbolicSystem::upwind_split<Rational>(const Vec2<Rational>&) const;

HyperbolicSystem transport(const std::vector<double>& velocity) {
  const int d = static_cast<int>(velocity.size());
  std::vector<Eigen::MatrixXd> mats;
  for (double w : velocity) mats.push_back(Eigen::MatrixXd::Constant(1, 1, w));
  HyperbolicSystem s(d, mats, SystemKind::transport, "transport");
  s.velocity_ = {velocity[0], d == 2 ? velocity[1] : 0.0};
  return s;
}

HyperbolicSystem linearized_euler(const Vec2<double>& ubar, double gamma) {
  (void)gamma;  // p̄ = 1/γ makes γp̄ = 1 independently of γ.
  Eigen::MatrixXd ax(4, 4), ay(4, 4);
  ax << ubar[0], 1, 0, 0,
        0, ubar[0], 0, 1,
        0, 0, ubar[0], 0,
        0, 1, 0, ubar[0];
  ay << ubar[1], 0, 1, 0,
        0, ubar[1], 0, 0,
        0, 0, ubar[1], 1,
        0, 0, 1, ubar[1];
  HyperbolicSystem s(2, {ax, ay}, SystemKind::linearized_euler, "lee");
  s.velocity_ = ubar;
  return s;
}

Eigen::MatrixXd Eigendecomposition::abs_matrix() const {
  return S * lambda.cwiseAbs().asDiagonal() * S_inv;
}

Eigendecomposition flux_jacobian_decomposition(const HyperbolicSystem& sys, const Vec2<double>& normal) {
  const Eigen::MatrixXd a = sys.directional(normal);
  const double scale = std::max(a.norm(), 1e-300);
  Eigendecomposition out;
  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << "flux Jacobian along (" << normal[0] << ", " << normal[1] << ") is not real-diagonalizable: " << why;
    throw std::runtime_error(msg.str());
  };
  if ((a - a.transpose()).norm() <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    out.S = es.eigenvectors();
    out.lambda = es.eigenvalues();
    out.S_inv = out.S.transpose();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) fail("eigen solver did not converge");
    if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-10 * scale) fail("complex eigenvalues");
    out.S = es.eigenvectors().real();
    out.lambda = es.eigenvalues().real();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.S);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-8 * sv(0)) {
      if (sys.kind() != SystemKind::generic) return analytic_decomposition(sys, normal);
      fail("defective eigenvector basis");
    }
    out.S_inv = out.S.inverse();
  }
  if ((out.S * out.lambda.asDiagonal() * out.S_inv - a).norm() > 1e-12 * scale) {
    if (sys.kind() != SystemKind::generic) return analytic_decomposition(sys, normal);
    fail("reconstruction residual too large");
  }
  return out;
}

Eigendecomposition analytic_decomposition(const HyperbolicSystem& sys, const Vec2<double>& normal) {
  Eigendecomposition out;
  if (sys.kind() == SystemKind::transport) {
    const double w = sys.velocity()[0] * normal[0] + (sys.dim() == 2 ? sys.velocity()[1] * normal[1] : 0.0);
    out.S = Eigen::MatrixXd::Identity(1, 1);
    out.S_inv = out.S;
    out.lambda = Eigen::VectorXd::Constant(1, w);
    return out;
  }
  if (sys.kind() != SystemKind::linearized_euler)
    throw std::invalid_argument("analytic_decomposition: only transport and linearized Euler have closed forms");
  const double c = sys.velocity()[0] * normal[0] + sys.velocity()[1] * normal[1];
  const double len = std::hypot(normal[0], normal[1]);
  // Unit direction; any unit vector works when the normal vanishes.
  const double nx = len > 0 ? normal[0] / len : 1.0, ny = len > 0 ? normal[1] / len : 0.0;
  out.S.resize(4, 4);
  out.S << 1, 1, 1, 0,
           nx, -nx, 0, -ny,
           ny, -ny, 0, nx,
           1, 1, 0, 0;
  out.S_inv.resize(4, 4);
  out.S_inv << 0, 0.5 * nx, 0.5 * ny, 0.5,
               0, -0.5 * nx, -0.5 * ny, 0.5,
               1, 0, 0, -1,
               0, -ny, nx, 0;
  out.lambda.resize(4);
  out.lambda << c + len, c - len, c, c;
  return out;
}

Eigen::VectorXd upwind_face_flux(const HyperbolicSystem& sys, const Vec2<double>& normal, const Eigen::VectorXd& left,
                                 const Eigen::VectorXd& right) {
  const auto [plus, minus] = sys.upwind_split<double>(normal);
  return to_eigen(plus) * left + to_eigen(minus) * right;
}

}  // namespace fvs
