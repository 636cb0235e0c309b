#pragma once

// Exact scalars shared by every module: GMP integers and rationals plus the
// handful of combinatorial helpers (factorials, Pascal rows, decimal output).

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace onetwo {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Integer pow_integer(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Integer floor_rational(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_rational(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// "3", "-1/24"
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Decimal rendering of q rounded half-up (away from zero on ties) to
/// `places` digits after the point.
inline std::string to_fixed(const Rational& q, int places) {
  if (places < 0) throw std::invalid_argument("negative decimal places");
  const Integer scale = pow_integer(10, static_cast<unsigned long>(places));
  Rational scaled = abs(q) * scale;
  Integer rounded = floor_rational(scaled + Rational(1, 2));
  std::string digits = rounded.get_str();
  if (digits.size() <= static_cast<std::size_t>(places))
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  std::string out;
  if (sgn(q) < 0 && rounded != 0) out += '-';
  out += digits.substr(0, digits.size() - places);
  if (places > 0) {
    out += '.';
    out += digits.substr(digits.size() - places);
  }
  return out;
}

/// Rows 0..max_n of Pascal's triangle.
class BinomialTable {
 public:
  explicit BinomialTable(std::size_t max_n) : rows_(max_n + 1) {
    for (std::size_t n = 0; n <= max_n; ++n) {
      rows_[n].assign(n + 1, Integer(1));
      for (std::size_t k = 1; k < n; ++k)
        rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
    }
  }

  const Integer& operator()(std::size_t n, std::size_t k) const {
    return rows_.at(n).at(k);
  }

  std::size_t max_n() const { return rows_.size() - 1; }

 private:
  std::vector<std::vector<Integer>> rows_;
};

}  // namespace onetwo
