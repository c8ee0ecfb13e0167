#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <string>

namespace fvs {

using Rational = mpq_class;

template <class T> using Vec2 = std::array<T, 2>;
using Shift = std::array<int, 2>;

/// Correctly rounded (ties to even); mpq_class::get_d truncates.
double nearest_double(const Rational& x);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return nearest_double(x); }

template <class T> T from_rational(const Rational& x);
template <> inline double from_rational<double>(const Rational& x) { return nearest_double(x); }
template <> inline Rational from_rational<Rational>(const Rational& x) { return x; }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return abs(x); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline int sign_of(double x) { return (x > 0) - (x < 0); }
inline int sign_of(const Rational& x) { return sgn(x); }

/// Exact binary value of a double.
inline Rational exact_rational(double x) { return Rational(x); }

/// Simplest rational (smallest denominator convergent) that rounds back to x.
/// Recovers 1/20, 5/6, 0.3 = 3/10 from their double images; falls back to the
/// exact binary value when no short convergent reproduces x.
Rational nice_rational(double x);

Rational parse_rational(const std::string& s);
std::string rational_string(const Rational& x);

template <class T> Vec2<T> operator+(const Vec2<T>& a, const Vec2<T>& b) { return {a[0] + b[0], a[1] + b[1]}; }
template <class T> Vec2<T> operator-(const Vec2<T>& a, const Vec2<T>& b) { return {a[0] - b[0], a[1] - b[1]}; }
template <class T> Vec2<T> scaled(const Vec2<T>& a, const T& s) { return {a[0] * s, a[1] * s}; }
template <class T> T dot(const Vec2<T>& a, const Vec2<T>& b) { return a[0] * b[0] + a[1] * b[1]; }
template <class T> T cross(const Vec2<T>& a, const Vec2<T>& b) { return a[0] * b[1] - a[1] * b[0]; }

template <class T> Vec2<double> to_double(const Vec2<T>& a) { return {to_double(a[0]), to_double(a[1])}; }

inline double norm(const Vec2<double>& a) { return std::hypot(a[0], a[1]); }

}  // namespace fvs
