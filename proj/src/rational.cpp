#include "detwork/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "detwork/errors.hpp"

namespace detwork {

namespace {

BigInt pow10(long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidArgument("malformed number: '" + std::string(whole) + "'");
  BigInt v(std::string(s), 10);
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = trim(text);
  std::string_view s = whole;
  if (s.empty()) throw InvalidArgument("empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(s.substr(0, slash)), whole);
    std::string_view den_text = trim(s.substr(slash + 1));
    if (!all_digits(den_text)) throw InvalidArgument("malformed number: '" + std::string(whole) + "'");
    BigInt den(std::string(den_text), 10);
    if (den == 0) throw InvalidArgument("zero denominator: '" + std::string(whole) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  bool neg = false;
  if (s.front() == '+' || s.front() == '-') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    BigInt ev = parse_integer(s.substr(e + 1), whole);
    if (abs(ev) > 100000) throw InvalidArgument("exponent out of range: '" + std::string(whole) + "'");
    exponent = ev.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw InvalidArgument("malformed number: '" + std::string(whole) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw InvalidArgument("malformed number: '" + std::string(whole) + "'");
    digits = std::string(s);
  }
  Rational r{BigInt(digits, 10)};
  if (exponent > 0) r *= pow10(exponent);
  if (exponent < 0) r /= pow10(-exponent);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int significant) {
  if (significant < 1) significant = 1;
  if (value == 0) return "0";
  Rational a = abs(value);

  // decimal exponent e with 10^e <= a < 10^(e+1)
  long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
  auto ten_to = [](long k) { return k >= 0 ? Rational(pow10(k)) : Rational(1, 1) / Rational(pow10(-k)); };
  while (a >= ten_to(e + 1)) ++e;
  while (a < ten_to(e)) --e;

  auto rounded = [&](long ex) {
    Rational q = a * ten_to(significant - 1 - ex) + Rational(1, 2);
    return floor_of(q);
  };
  BigInt mant = rounded(e);
  if (mant >= pow10(significant)) {
    ++e;
    mant = rounded(e);
  }
  std::string digits = mant.get_str();
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  std::string out = value < 0 ? "-" : "";
  const long nd = static_cast<long>(digits.size());
  if (e >= -7 && e < 21) {
    if (e < 0) {
      out += "0." + std::string(static_cast<size_t>(-e - 1), '0') + digits;
    } else if (nd <= e + 1) {
      out += digits + std::string(static_cast<size_t>(e + 1 - nd), '0');
    } else {
      out += digits.substr(0, static_cast<size_t>(e + 1)) + "." + digits.substr(static_cast<size_t>(e + 1));
    }
  } else {
    out += digits.substr(0, 1);
    if (nd > 1) out += "." + digits.substr(1);
    out += (e < 0 ? "e-" : "e+") + std::to_string(e < 0 ? -e : e);
  }
  return out;
}

std::string to_decimal(double value, int significant) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return to_decimal(from_double(value), significant);
}

double to_double(const Rational& value) { return value.get_d(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite value");
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  r.canonicalize();
  return r;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  // gcd(p1/q1, p2/q2) = gcd(p1 q2, p2 q1) / (q1 q2)
  BigInt g;
  BigInt x = abs(a.get_num()) * b.get_den();
  BigInt y = abs(b.get_num()) * a.get_den();
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  Rational r(g, a.get_den() * b.get_den());
  r.canonicalize();
  return r;
}

BigInt floor_of(const Rational& value) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::int64_t to_int64(const BigInt& value, std::string_view what) {
  if (!value.fits_slong_p()) throw ResourceLimitExceeded(std::string(what) + " exceeds the 64-bit range");
  return static_cast<std::int64_t>(value.get_si());
}

}  // namespace detwork
