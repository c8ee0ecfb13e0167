#pragma once

#include <string>
#include <vector>

#include "fvs/rational.hpp"

namespace fvs {

/// Univariate polynomial in t, coefficient i multiplies t^i.
template <class T> using UniPoly = std::vector<T>;

/// Polynomial in (x, y); one-dimensional problems simply never use y.
template <class T> class Polynomial {
 public:
  Polynomial() : deg_(0), c_(1, T(0)) {}

  static Polynomial constant(const T& c);
  static Polynomial monomial(int i, int j, const T& coef = T(1));

  int degree() const;  ///< actual degree (highest nonzero term), 0 for the zero polynomial
  T coef(int i, int j) const;
  void add_term(int i, int j, const T& c);

  T eval(const Vec2<T>& r) const;
  Polynomial derivative(int axis) const;
  /// F with ∂F/∂x = this and F(0, y) = 0.
  Polynomial antiderivative_x() const;
  /// g(r) = f(r + offset).
  Polynomial translated(const Vec2<T>& offset) const;
  /// Coefficients of t ↦ f(p + t (q − p)).
  UniPoly<T> along_segment(const Vec2<T>& p, const Vec2<T>& q) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const T& s) const;

  template <class U> Polynomial<U> cast() const;
  std::string to_string() const;

 private:
  static int index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }
  void reserve_degree(int deg);

  int deg_;  // storage degree
  std::vector<T> c_;

  template <class U> friend class Polynomial;
};

/// Vector-valued polynomial with n components.
template <class T> struct MultiPolynomial {
  std::vector<Polynomial<T>> comp;

  MultiPolynomial() = default;
  explicit MultiPolynomial(int n) : comp(n) {}

  int size() const { return static_cast<int>(comp.size()); }
  int degree() const;
  std::vector<T> eval(const Vec2<T>& r) const;
  MultiPolynomial derivative(int axis) const;
  MultiPolynomial translated(const Vec2<T>& offset) const;
  template <class U> MultiPolynomial<U> cast() const;

  /// e_alpha · x^i y^j
  static MultiPolynomial unit_monomial(int n, int alpha, int i, int j, const T& coef = T(1));
};

template <class T> T integrate_unit_interval(const UniPoly<T>& p);

/// Exact integral over a counterclockwise polygon by Green's theorem.
template <class T> T integrate_polygon(const Polynomial<T>& f, const std::vector<Vec2<T>>& polygon);
/// Exact integral over [a, b] of a polynomial in x.
template <class T> T integrate_interval(const Polynomial<T>& f, const T& a, const T& b);
/// Exact average over a segment in the plane (a face), parametrized uniformly.
template <class T> T segment_average(const Polynomial<T>& f, const Vec2<T>& p, const Vec2<T>& q);

/// Monomial exponents of total degree q in d variables, ordered by decreasing power of x.
std::vector<std::pair<int, int>> monomials_of_degree(int d, int q);
std::string monomial_name(int i, int j, int d);

}  // namespace fvs
