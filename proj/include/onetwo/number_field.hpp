#pragma once

// Exact constants in Q(sqrt3)[pi, 1/pi] with certified decimal enclosures,
// and the trigonometric moment integrals whose values live in that ring.

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onetwo/rational.hpp"
#include "onetwo/variety.hpp"

namespace onetwo {

/// a + b*sqrt3 with rational a, b.
struct QSqrt3 {
  Rational a = 0;
  Rational b = 0;

  QSqrt3() = default;
  QSqrt3(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
  QSqrt3(long a_) : a(a_) {}

  static QSqrt3 sqrt3() { return {0, 1}; }

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  bool is_rational() const { return sgn(b) == 0; }

  QSqrt3 conjugate() const { return {a, -b}; }

  /// a^2 - 3b^2; zero only for 0 since sqrt3 is irrational.
  Rational norm() const { return a * a - 3 * b * b; }

  QSqrt3 inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(sqrt3)");
    Rational n = norm();
    return {a / n, -b / n};
  }

  friend QSqrt3 operator+(const QSqrt3& x, const QSqrt3& y) { return {x.a + y.a, x.b + y.b}; }
  friend QSqrt3 operator-(const QSqrt3& x, const QSqrt3& y) { return {x.a - y.a, x.b - y.b}; }
  friend QSqrt3 operator-(const QSqrt3& x) { return {-x.a, -x.b}; }
  friend QSqrt3 operator*(const QSqrt3& x, const QSqrt3& y) {
    return {x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend QSqrt3 operator/(const QSqrt3& x, const QSqrt3& y) { return x * y.inverse(); }
  friend bool operator==(const QSqrt3& x, const QSqrt3& y) { return x.a == y.a && x.b == y.b; }
};

inline QSqrt3 pow(const QSqrt3& x, unsigned n) {
  QSqrt3 r(1);
  for (unsigned i = 0; i < n; ++i) r = r * x;
  return r;
}

// ---------------------------------------------------------------------------
// Rational interval arithmetic. Endpoints are exact; only the enclosures of
// pi and sqrt3 introduce width.

struct RationalInterval {
  Rational lo = 0;
  Rational hi = 0;

  static RationalInterval point(const Rational& q) { return {q, q}; }

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool contains(const RationalInterval& o) const { return lo <= o.lo && o.hi <= hi; }

  friend RationalInterval operator+(const RationalInterval& x, const RationalInterval& y) {
    return {x.lo + y.lo, x.hi + y.hi};
  }
  friend RationalInterval operator-(const RationalInterval& x, const RationalInterval& y) {
    return {x.lo - y.hi, x.hi - y.lo};
  }
  friend RationalInterval operator*(const RationalInterval& x, const RationalInterval& y) {
    Rational c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  friend RationalInterval operator*(const Rational& s, const RationalInterval& x) {
    if (sgn(s) >= 0) return {s * x.lo, s * x.hi};
    return {s * x.hi, s * x.lo};
  }
};

/// Reciprocal of an interval that excludes zero.
inline RationalInterval reciprocal(const RationalInterval& x) {
  if (sgn(x.lo) <= 0 && sgn(x.hi) >= 0)
    throw std::domain_error("reciprocal of an interval containing zero");
  return {1 / x.hi, 1 / x.lo};
}

/// x^n for an interval x with 0 < lo.
inline RationalInterval positive_pow(const RationalInterval& x, unsigned n) {
  RationalInterval r = RationalInterval::point(1);
  for (unsigned i = 0; i < n; ++i) r = {r.lo * x.lo, r.hi * x.hi};
  return r;
}

namespace detail {

struct MpfrValue {
  mpfr_t v;
  explicit MpfrValue(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~MpfrValue() { mpfr_clear(v); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;

  Rational to_rational() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v);
    return q;
  }
};

}  // namespace detail

/// Enclosure of pi from correctly rounded MPFR values at `bits` precision.
inline RationalInterval pi_enclosure(unsigned long bits) {
  detail::MpfrValue down(static_cast<mpfr_prec_t>(bits));
  detail::MpfrValue up(static_cast<mpfr_prec_t>(bits));
  mpfr_const_pi(down.v, MPFR_RNDD);
  mpfr_const_pi(up.v, MPFR_RNDU);
  return {down.to_rational(), up.to_rational()};
}

/// Enclosure of sqrt(q) for q >= 0 with width at most 2^-bits.
inline RationalInterval sqrt_enclosure(const Rational& q, unsigned long bits) {
  if (sgn(q) < 0) throw std::domain_error("square root of a negative number");
  // floor(sqrt(q) * 2^bits) = isqrt(floor(q * 4^bits))
  Integer scale = pow_integer(2, bits);
  Integer scaled = floor_rational(q * scale * scale);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational lo(root, scale);
  lo.canonicalize();
  Rational hi = lo;
  if (lo * lo != q) {
    hi = Rational(root + 1, scale);
    hi.canonicalize();
  }
  return {lo, hi};
}

inline RationalInterval enclose(const QSqrt3& c, const RationalInterval& sqrt3) {
  return RationalInterval::point(c.a) + c.b * sqrt3;
}

// ---------------------------------------------------------------------------

/// Guaranteed decimal bounds lo <= value <= hi with hi - lo <= 10^-digits.
struct Enclosure {
  Rational lo = 0;
  Rational hi = 0;
  int digits = 0;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  RationalInterval interval() const { return {lo, hi}; }
};

/// Sum_j (a_j + b_j sqrt3) pi^j, j ranging over (possibly negative) integers.
/// Zero coefficients are never stored, so equality is structural.
class ExactConst {
 public:
  using Terms = std::map<int, QSqrt3>;

  ExactConst() = default;
  ExactConst(const Rational& q) { add_term(0, q); }
  ExactConst(long q) : ExactConst(Rational(q)) {}
  ExactConst(const QSqrt3& c) { add_term(0, c); }

  static ExactConst monomial(const QSqrt3& c, int pi_exponent) {
    ExactConst x;
    x.add_term(pi_exponent, c);
    return x;
  }
  static ExactConst pi() { return monomial(1, 1); }
  static ExactConst sqrt3() { return monomial(QSqrt3::sqrt3(), 0); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }

  bool is_sqrt3_free() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_rational(); });
  }

  int min_pi_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_pi_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  /// Coefficient of pi^j (zero when absent).
  QSqrt3 coefficient(int j) const {
    auto it = terms_.find(j);
    return it == terms_.end() ? QSqrt3{} : it->second;
  }

  friend ExactConst operator+(ExactConst x, const ExactConst& y) {
    for (const auto& [j, c] : y.terms_) x.add_term(j, c);
    return x;
  }
  friend ExactConst operator-(const ExactConst& x) {
    ExactConst r;
    for (const auto& [j, c] : x.terms_) r.terms_.emplace(j, -c);
    return r;
  }
  friend ExactConst operator-(const ExactConst& x, const ExactConst& y) { return x + (-y); }
  friend ExactConst operator*(const ExactConst& x, const ExactConst& y) {
    ExactConst r;
    for (const auto& [i, c] : x.terms_)
      for (const auto& [j, d] : y.terms_) r.add_term(i + j, c * d);
    return r;
  }
  ExactConst& operator+=(const ExactConst& y) { return *this = *this + y; }
  ExactConst& operator-=(const ExactConst& y) { return *this = *this - y; }
  ExactConst& operator*=(const ExactConst& y) { return *this = *this * y; }

  /// Division is only defined for monomial divisors c*pi^j.
  friend ExactConst operator/(const ExactConst& x, const ExactConst& y) {
    if (y.is_zero()) throw std::domain_error("division by zero constant");
    if (!y.is_monomial())
      throw std::domain_error("division by a non-monomial constant is unsupported");
    const auto& [j, c] = *y.terms_.begin();
    return x * monomial(c.inverse(), -j);
  }

  friend bool operator==(const ExactConst& x, const ExactConst& y) { return x.terms_ == y.terms_; }

  ExactConst pow(unsigned n) const {
    ExactConst r(1);
    for (unsigned i = 0; i < n; ++i) r *= *this;
    return r;
  }

  RationalInterval enclose(const RationalInterval& pi, const RationalInterval& sqrt3) const {
    RationalInterval sum = RationalInterval::point(0);
    RationalInterval inv_pi = reciprocal(pi);
    for (const auto& [j, c] : terms_) {
      RationalInterval power =
          j >= 0 ? positive_pow(pi, static_cast<unsigned>(j)) : positive_pow(inv_pi, static_cast<unsigned>(-j));
      sum = sum + onetwo::enclose(c, sqrt3) * power;
    }
    return sum;
  }

  /// Canonical text form, e.g. "1 - 2*pi^-1", "(5/6)*sqrt3*pi^-1".
  /// Nonnegative pi powers come first in increasing order, then -1, -2, ...
  std::string to_string() const;
  static ExactConst parse(std::string_view text);

 private:
  void add_term(int j, const QSqrt3& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(j, c);
    if (!inserted) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Terms terms_;
};

inline ExactConst ec_add(const ExactConst& x, const ExactConst& y) { return x + y; }
inline ExactConst ec_mul(const ExactConst& x, const ExactConst& y) { return x * y; }
inline ExactConst ec_negate(const ExactConst& x) { return -x; }
inline ExactConst ec_scalar_div(const ExactConst& x, const Rational& d) {
  if (sgn(d) == 0) throw std::domain_error("division by zero");
  return x * ExactConst(Rational(1 / d));
}

namespace detail {

inline std::string coefficient_text(const Rational& q) {
  return is_integer(q) ? q.get_str() : "(" + q.get_str() + ")";
}

inline std::string pi_text(int j) {
  if (j == 0) return "";
  if (j == 1) return "pi";
  return "pi^" + std::to_string(j);
}

inline std::string join_factors(std::string a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "*" + b;
}

// Returns (negative, body) for one canonical term.
inline std::pair<bool, std::string> term_text(int j, const QSqrt3& c) {
  const std::string pis = pi_text(j);
  if (c.is_rational() || sgn(c.a) == 0) {
    const bool on_sqrt3 = !c.is_rational();
    const Rational mag = abs(on_sqrt3 ? c.b : c.a);
    const bool negative = sgn(on_sqrt3 ? c.b : c.a) < 0;
    std::string body = mag == 1 ? "" : coefficient_text(mag);
    if (on_sqrt3) body = join_factors(body, "sqrt3");
    body = join_factors(body, pis);
    if (body.empty()) body = "1";
    return {negative, body};
  }
  std::string inner = "(" + c.a.get_str() + (sgn(c.b) > 0 ? " + " : " - ");
  const Rational mb = abs(c.b);
  inner += (mb == 1 ? std::string("sqrt3") : mb.get_str() + "*sqrt3") + ")";
  return {false, join_factors(inner, pis)};
}

}  // namespace detail

inline std::string ExactConst::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<int> order;
  for (const auto& t : terms_)
    if (t.first >= 0) order.push_back(t.first);
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    if (it->first < 0) order.push_back(it->first);
  std::string out;
  for (std::size_t n = 0; n < order.size(); ++n) {
    auto [negative, body] = detail::term_text(order[n], terms_.at(order[n]));
    if (n == 0)
      out += negative ? "-" + body : body;
    else
      out += (negative ? " - " : " + ") + body;
  }
  return out;
}

namespace detail {

class ConstParser {
 public:
  explicit ConstParser(std::string_view s) : s_(s) {}

  ExactConst parse() {
    ExactConst total;
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    total += signed_term(negative);
    while (pos_ < s_.size()) {
      expect(' ');
      char op = s_.at(pos_++);
      if (op != '+' && op != '-') fail("expected + or -");
      expect(' ');
      total += signed_term(op == '-');
    }
    return total;
  }

 private:
  ExactConst signed_term(bool negative) {
    ExactConst t = term();
    return negative ? -t : t;
  }

  // factor ('*' factor)*
  ExactConst term() {
    ExactConst t = factor();
    while (peek() == '*') {
      ++pos_;
      t *= factor();
    }
    return t;
  }

  ExactConst factor() {
    if (peek() == '(') {
      ++pos_;
      ExactConst inner = inner_sum();
      expect(')');
      return inner;
    }
    if (s_.substr(pos_, 5) == "sqrt3") {
      pos_ += 5;
      return ExactConst::sqrt3();
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      int e = 1;
      if (peek() == '^') {
        ++pos_;
        e = static_cast<int>(integer_token());
      }
      return ExactConst::monomial(1, e);
    }
    return ExactConst(rational_token());
  }

  // Parenthesised rational "p/q" or mixed "a + b*sqrt3".
  ExactConst inner_sum() {
    ExactConst first(rational_token());
    if (peek() == ')') return first;
    expect(' ');
    char op = s_.at(pos_++);
    expect(' ');
    ExactConst rest = term();
    return op == '-' ? first - rest : first + rest;
  }

  Rational rational_token() {
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
      ++pos_;
    if (pos_ == start) fail("expected a number");
    Rational q;
    if (q.set_str(std::string(s_.substr(start, pos_ - start)), 10) != 0 || sgn(q.get_den()) == 0)
      fail("malformed number");
    q.canonicalize();
    return q;
  }

  long integer_token() {
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an exponent");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("cannot parse constant \"" + std::string(s_) + "\" at " +
                                std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExactConst ExactConst::parse(std::string_view text) {
  if (text == "0") return {};
  return detail::ConstParser(text).parse();
}

inline std::ostream& operator<<(std::ostream& out, const ExactConst& x) { return out << x.to_string(); }

// ---------------------------------------------------------------------------

/// Enclosure of x with width <= 10^-digits. Working precision starts at
/// digits + 10 guard digits and doubles until the width is met.
inline Enclosure ec_eval(const ExactConst& x, int digits) {
  if (digits < 1) throw std::invalid_argument("digits must be positive");
  const Rational target(1, pow_integer(10, static_cast<unsigned long>(digits)));
  unsigned long bits = static_cast<unsigned long>(std::ceil((digits + 10) * 3.3219280948873623)) + 8;
  for (;;) {
    RationalInterval iv = x.enclose(pi_enclosure(bits), sqrt_enclosure(3, bits));
    if (iv.width() <= target) return {iv.lo, iv.hi, digits};
    bits *= 2;
  }
}

/// Exact value of a plain decimal string such as "-0.125".
inline Rational parse_fixed(std::string_view text) {
  std::string digits(text);
  Integer den = 1;
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    den = pow_integer(10, static_cast<unsigned long>(digits.size() - dot - 1));
    digits.erase(dot, 1);
  }
  Rational q(Integer(digits, 10), den);
  q.canonicalize();
  return q;
}

/// Round-to-nearest decimal that is warranted by an enclosure of x, or the
/// nearest decimal with an explicit "± bound" when it is not.
inline std::string format_enclosure(const Enclosure& e, int places) {
  const Rational half_ulp(1, 2 * pow_integer(10, static_cast<unsigned long>(places)));
  const std::string s = to_fixed((e.lo + e.hi) / 2, places);
  const Rational printed = parse_fixed(s);
  if (printed - half_ulp <= e.lo && e.hi <= printed + half_ulp) return s;
  Rational bound = std::max(e.hi - printed, printed - e.lo);
  return s + " ± " + to_fixed(bound, places + 3);
}

inline std::string format_decimal(const ExactConst& x, int places) {
  // A few escalations settle values that sit close to a rounding boundary.
  for (int extra : {3, 20, 60}) {
    std::string s = format_enclosure(ec_eval(x, places + extra), places);
    if (s.find("±") == std::string::npos) return s;
  }
  return format_enclosure(ec_eval(x, places + 60), places);
}

// ---------------------------------------------------------------------------
// Moment integrals int_0^L t^m {sin(w t), cos(w t), 1} dt where w*L is a point
// with exactly known sine and cosine.

/// Integration domain and frequency for one variety.
struct TrigEndpoint {
  ExactConst length;  // L, also the dominant singularity z0
  QSqrt3 omega;       // w
  QSqrt3 sin_end;     // sin(w L)
  QSqrt3 cos_end;     // cos(w L)
};

/// NonPlane: L = pi/2, w = 1. Plane: L = 2 sqrt3 pi / 9, w = sqrt3, so that
/// w L = 2 pi / 3.
inline TrigEndpoint trig_endpoint(TreeVariety v) {
  if (v == TreeVariety::NonPlane) return {ExactConst::monomial(make_rational(1, 2), 1), 1, 1, 0};
  return {ExactConst::monomial(QSqrt3(0, make_rational(2, 9)), 1), QSqrt3::sqrt3(),
          QSqrt3(0, make_rational(1, 2)), QSqrt3(make_rational(-1, 2))};
}

enum class MomentKind { Sin, Cos, Const };

/// All three moment families for m = 0..max_m, by integration by parts:
///   S_m = -L^m cos(wL)/w + [m=0]/w + (m/w) C_{m-1}
///   C_m =  L^m sin(wL)/w - (m/w) S_{m-1}
///   P_m =  L^{m+1}/(m+1)
class MomentTable {
 public:
  MomentTable(const TrigEndpoint& ep, std::size_t max_m)
      : sin_(max_m + 1), cos_(max_m + 1), const_(max_m + 1) {
    const ExactConst inv_omega(ep.omega.inverse());
    ExactConst length_pow(1);  // L^m
    for (std::size_t m = 0; m <= max_m; ++m) {
      const Rational mm(static_cast<long>(m));
      if (m == 0) {
        sin_[0] = (ExactConst(1) - ExactConst(ep.cos_end)) * inv_omega;
        cos_[0] = ExactConst(ep.sin_end) * inv_omega;
      } else {
        sin_[m] = -(length_pow * ExactConst(ep.cos_end) * inv_omega) +
                  ExactConst(mm) * inv_omega * cos_[m - 1];
        cos_[m] = length_pow * ExactConst(ep.sin_end) * inv_omega -
                  ExactConst(mm) * inv_omega * sin_[m - 1];
      }
      length_pow *= ep.length;
      const_[m] = length_pow * ExactConst(Rational(1, static_cast<long>(m + 1)));
    }
  }

  const ExactConst& get(std::size_t m, MomentKind kind) const {
    switch (kind) {
      case MomentKind::Sin: return sin_.at(m);
      case MomentKind::Cos: return cos_.at(m);
      case MomentKind::Const: break;
    }
    return const_.at(m);
  }

  std::size_t max_m() const { return const_.size() - 1; }

 private:
  std::vector<ExactConst> sin_, cos_, const_;
};

/// int_0^{pi/2} t^m (1 - sin t) dt
inline ExactConst halfpi_moment(std::size_t m) {
  MomentTable table(trig_endpoint(TreeVariety::NonPlane), m);
  return table.get(m, MomentKind::Const) - table.get(m, MomentKind::Sin);
}

/// int_0^{2 sqrt3 pi/9} t^m {sin(sqrt3 t) | cos(sqrt3 t) | 1} dt
inline ExactConst plane_moment(std::size_t m, MomentKind kind) {
  return MomentTable(trig_endpoint(TreeVariety::Plane), m).get(m, kind);
}

}  // namespace onetwo
