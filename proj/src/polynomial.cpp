#include "fvs/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fvs {

namespace {

template <class T> UniPoly<T> uni_mul(const UniPoly<T>& a, const UniPoly<T>& b) {
  UniPoly<T> r(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

template <class T> UniPoly<T> uni_pow(const UniPoly<T>& a, int k) {
  UniPoly<T> r{T(1)};
  for (int i = 0; i < k; ++i) r = uni_mul(r, a);
  return r;
}

template <class T> T int_pow(const T& x, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

template <class T> void Polynomial<T>::reserve_degree(int deg) {
  if (deg <= deg_) return;
  std::vector<T> c((deg + 1) * (deg + 2) / 2, T(0));
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) c[index(s - j, j)] = c_[index(s - j, j)];
  c_ = std::move(c);
  deg_ = deg;
}

template <class T> Polynomial<T> Polynomial<T>::constant(const T& c) {
  Polynomial p;
  p.c_[0] = c;
  return p;
}

template <class T> Polynomial<T> Polynomial<T>::monomial(int i, int j, const T& coef) {
  Polynomial p;
  p.add_term(i, j, coef);
  return p;
}

template <class T> int Polynomial<T>::degree() const {
  for (int s = deg_; s > 0; --s)
    for (int j = 0; j <= s; ++j)
      if (!is_zero(c_[index(s - j, j)])) return s;
  return 0;
}

template <class T> T Polynomial<T>::coef(int i, int j) const {
  if (i < 0 || j < 0 || i + j > deg_) return T(0);
  return c_[index(i, j)];
}

template <class T> void Polynomial<T>::add_term(int i, int j, const T& c) {
  if (i < 0 || j < 0) throw std::invalid_argument("Polynomial: negative exponent");
  reserve_degree(i + j);
  c_[index(i, j)] += c;
}

template <class T> T Polynomial<T>::eval(const Vec2<T>& r) const {
  std::vector<T> xp(deg_ + 1, T(1)), yp(deg_ + 1, T(1));
  for (int k = 1; k <= deg_; ++k) {
    xp[k] = xp[k - 1] * r[0];
    yp[k] = yp[k - 1] * r[1];
  }
  T sum(0);
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const T& c = c_[index(s - j, j)];
      if (!is_zero(c)) sum += c * xp[s - j] * yp[j];
    }
  return sum;
}

template <class T> Polynomial<T> Polynomial<T>::derivative(int axis) const {
  Polynomial r;
  for (int s = 1; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const int i = s - j;
      const T& c = c_[index(i, j)];
      if (is_zero(c)) continue;
      if (axis == 0 && i > 0) r.add_term(i - 1, j, c * T(i));
      if (axis == 1 && j > 0) r.add_term(i, j - 1, c * T(j));
    }
  return r;
}

template <class T> Polynomial<T> Polynomial<T>::antiderivative_x() const {
  Polynomial r;
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const int i = s - j;
      const T& c = c_[index(i, j)];
      if (!is_zero(c)) r.add_term(i + 1, j, c / T(i + 1));
    }
  return r;
}

template <class T> Polynomial<T> Polynomial<T>::translated(const Vec2<T>& offset) const {
  // (x + a)^i (y + b)^j expanded with binomial coefficients.
  Polynomial r;
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const int i = s - j;
      const T& c = c_[index(i, j)];
      if (is_zero(c)) continue;
      long bi = 1;
      for (int p = 0; p <= i; ++p) {
        long bj = 1;
        for (int q = 0; q <= j; ++q) {
          r.add_term(p, q, c * T(bi) * T(bj) * int_pow(offset[0], i - p) * int_pow(offset[1], j - q));
          bj = bj * (j - q) / (q + 1);
        }
        bi = bi * (i - p) / (p + 1);
      }
    }
  return r;
}

template <class T> UniPoly<T> Polynomial<T>::along_segment(const Vec2<T>& p, const Vec2<T>& q) const {
  const UniPoly<T> x{p[0], T(q[0] - p[0])};
  const UniPoly<T> y{p[1], T(q[1] - p[1])};
  UniPoly<T> r(deg_ + 1, T(0));
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const T& c = c_[index(s - j, j)];
      if (is_zero(c)) continue;
      const UniPoly<T> term = uni_mul(uni_pow(x, s - j), uni_pow(y, j));
      for (std::size_t k = 0; k < term.size(); ++k) r[k] += c * term[k];
    }
  return r;
}

template <class T> Polynomial<T> Polynomial<T>::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (int s = 0; s <= o.deg_; ++s)
    for (int j = 0; j <= s; ++j) r.add_term(s - j, j, o.c_[index(s - j, j)]);
  return r;
}

template <class T> Polynomial<T> Polynomial<T>::operator-(const Polynomial& o) const { return *this + o.scaled(T(-1)); }

template <class T> Polynomial<T> Polynomial<T>::operator*(const Polynomial& o) const {
  Polynomial r;
  r.reserve_degree(deg_ + o.deg_);
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const T& a = c_[index(s - j, j)];
      if (is_zero(a)) continue;
      for (int t = 0; t <= o.deg_; ++t)
        for (int l = 0; l <= t; ++l) {
          const T& b = o.c_[index(t - l, l)];
          if (!is_zero(b)) r.add_term(s - j + t - l, j + l, a * b);
        }
    }
  return r;
}

template <class T> Polynomial<T> Polynomial<T>::scaled(const T& s) const {
  Polynomial r = *this;
  for (T& c : r.c_) c *= s;
  return r;
}

template <class T> template <class U> Polynomial<U> Polynomial<T>::cast() const {
  Polynomial<U> r;
  for (int s = 0; s <= deg_; ++s)
    for (int j = 0; j <= s; ++j) {
      const T& c = c_[index(s - j, j)];
      if (is_zero(c)) continue;
      if constexpr (std::is_same_v<U, double>)
        r.add_term(s - j, j, to_double(c));
      else if constexpr (std::is_same_v<T, double>)
        r.add_term(s - j, j, nice_rational(c));
      else
        r.add_term(s - j, j, U(c));
    }
  return r;
}

template <class T> std::string Polynomial<T>::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int s = deg_; s >= 0; --s)
    for (int j = 0; j <= s; ++j) {
      const T& c = c_[index(s - j, j)];
      if (is_zero(c)) continue;
      if (!first) os << " + ";
      first = false;
      os << c;
      if (s - j > 0) os << "*x^" << (s - j);
      if (j > 0) os << "*y^" << j;
    }
  if (first) os << "0";
  return os.str();
}

template <class T> int MultiPolynomial<T>::degree() const {
  int d = 0;
  for (const auto& p : comp) d = std::max(d, p.degree());
  return d;
}

template <class T> std::vector<T> MultiPolynomial<T>::eval(const Vec2<T>& r) const {
  std::vector<T> v;
  v.reserve(comp.size());
  for (const auto& p : comp) v.push_back(p.eval(r));
  return v;
}

template <class T> MultiPolynomial<T> MultiPolynomial<T>::derivative(int axis) const {
  MultiPolynomial r(size());
  for (int a = 0; a < size(); ++a) r.comp[a] = comp[a].derivative(axis);
  return r;
}

template <class T> MultiPolynomial<T> MultiPolynomial<T>::translated(const Vec2<T>& offset) const {
  MultiPolynomial r(size());
  for (int a = 0; a < size(); ++a) r.comp[a] = comp[a].translated(offset);
  return r;
}

template <class T> template <class U> MultiPolynomial<U> MultiPolynomial<T>::cast() const {
  MultiPolynomial<U> r(size());
  for (int a = 0; a < size(); ++a) r.comp[a] = comp[a].template cast<U>();
  return r;
}

template <class T>
MultiPolynomial<T> MultiPolynomial<T>::unit_monomial(int n, int alpha, int i, int j, const T& coef) {
  MultiPolynomial r(n);
  r.comp[alpha] = Polynomial<T>::monomial(i, j, coef);
  return r;
}

template <class T> T integrate_unit_interval(const UniPoly<T>& p) {
  T s(0);
  for (std::size_t k = 0; k < p.size(); ++k) s += p[k] / T(static_cast<long>(k) + 1);
  return s;
}

template <class T> T integrate_polygon(const Polynomial<T>& f, const std::vector<Vec2<T>>& polygon) {
  const Polynomial<T> F = f.antiderivative_x();
  T total(0);
  const std::size_t m = polygon.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2<T>& p = polygon[i];
    const Vec2<T>& q = polygon[(i + 1) % m];
    const T dy = q[1] - p[1];
    if (is_zero(dy)) continue;
    total += integrate_unit_interval(F.along_segment(p, q)) * dy;
  }
  return total;
}

template <class T> T integrate_interval(const Polynomial<T>& f, const T& a, const T& b) {
  const Polynomial<T> F = f.antiderivative_x();
  return F.eval({b, T(0)}) - F.eval({a, T(0)});
}

template <class T> T segment_average(const Polynomial<T>& f, const Vec2<T>& p, const Vec2<T>& q) {
  return integrate_unit_interval(f.along_segment(p, q));
}

std::vector<std::pair<int, int>> monomials_of_degree(int d, int q) {
  std::vector<std::pair<int, int>> out;
  if (d == 1) {
    out.emplace_back(q, 0);
  } else {
    for (int j = 0; j <= q; ++j) out.emplace_back(q - j, j);
  }
  return out;
}

std::string monomial_name(int i, int j, int d) {
  std::ostringstream os;
  if (i == 0 && j == 0) return "1";
  if (i > 0) os << "x" << (i > 1 ? "^" + std::to_string(i) : "");
  if (d > 1 && j > 0) os << (i > 0 ? "*" : "") << "y" << (j > 1 ? "^" + std::to_string(j) : "");
  return os.str();
}

#define FVS_INSTANTIATE(T)                                                                        \
  template class Polynomial<T>;                                                                   \
  template struct MultiPolynomial<T>;                                                             \
  template T integrate_unit_interval<T>(const UniPoly<T>&);                                       \
  template T integrate_polygon<T>(const Polynomial<T>&, const std::vector<Vec2<T>>&);             \
  template T integrate_interval<T>(const Polynomial<T>&, const T&, const T&);                     \
  template T segment_average<T>(const Polynomial<T>&, const Vec2<T>&, const Vec2<T>&);

FVS_INSTANTIATE(double)
FVS_INSTANTIATE(Rational)

template Polynomial<double> Polynomial<Rational>::cast<double>() const;
template Polynomial<Rational> Polynomial<double>::cast<Rational>() const;
template Polynomial<double> Polynomial<double>::cast<double>() const;
template Polynomial<Rational> Polynomial<Rational>::cast<Rational>() const;
template MultiPolynomial<double> MultiPolynomial<Rational>::cast<double>() const;
template MultiPolynomial<Rational> MultiPolynomial<double>::cast<Rational>() const;
template MultiPolynomial<double> MultiPolynomial<double>::cast<double>() const;
template MultiPolynomial<Rational> MultiPolynomial<Rational>::cast<Rational>() const;

}  // namespace fvs
