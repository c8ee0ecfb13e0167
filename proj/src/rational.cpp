#include "fvs/rational.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <regex>
#include <stdexcept>

namespace fvs {

double nearest_double(const Rational& x) {
  // mpq_get_d truncates toward zero; the nearest double is it or its outer neighbour.
  const double t = x.get_d();
  if (!std::isfinite(t) || Rational(t) == x) return t;
  const double u = std::nextafter(t, sgn(x) > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(u)) return t;
  const Rational dt = abs(Rational(x - Rational(t))), du = abs(Rational(Rational(u) - x));
  if (dt != du) return dt < du ? t : u;
  return (std::bit_cast<std::uint64_t>(t) & 1u) == 0 ? t : u;
}

Rational nice_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("nice_rational: non-finite value");
  const Rational exact(x);
  // Continued-fraction convergents of the exact binary value.
  mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  Rational rem = exact;
  for (int iter = 0; iter < 64; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    Rational conv(h, k);
    conv.canonicalize();
    if (nearest_double(conv) == x) return conv;
    Rational frac = rem - Rational(a);
    if (sgn(frac) == 0) break;
    rem = 1 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return exact;
}

Rational parse_rational(const std::string& s) {
  const auto fail = [&] { return std::invalid_argument("cannot parse rational '" + s + "'"); };
  Rational r;
  if (s.find_first_of(".eE") == std::string::npos) {
    if (r.set_str(s, 10) != 0) throw fail();
    r.canonicalize();
    return r;
  }
  // Decimal notation, read exactly: 0.05 is 1/20.
  std::smatch m;
  static const std::regex decimal(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  if (!std::regex_match(s, m, decimal) || (m[2].length() == 0 && m[3].length() == 0)) throw fail();
  const std::string digits = m[2].str() + m[3].str();
  mpz_class num(digits.empty() ? "0" : digits, 10);
  long exponent = m[4].matched ? std::stol(m[4].str()) : 0;
  exponent -= static_cast<long>(m[3].length());
  if (std::labs(exponent) > 4000) throw fail();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  r = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return m[1] == "-" ? Rational(-r) : r;
}

std::string rational_string(const Rational& x) { return x.get_str(10); }

}  // namespace fvs
