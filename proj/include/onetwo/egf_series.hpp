#pragma once

// Truncated power series with exact rational coefficients, and the
// term-by-term solvers for the first-order ODEs that count marked vertices.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "onetwo/rational.hpp"
#include "onetwo/variety.hpp"

namespace onetwo {

/// Thrown when two series of different truncation order meet in a binary
/// operation. Use EgfSeries::truncate to reconcile them explicitly.
class OrderMismatch : public std::invalid_argument {
 public:
  OrderMismatch(std::size_t a, std::size_t b)
      : std::invalid_argument("series truncation orders differ: " +
                              std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// Sum_{n<=order} c_n z^n. For a counting series c_n = (count of size n)/n!.
class EgfSeries {
 public:
  explicit EgfSeries(std::size_t order = 0) : coeffs_(order + 1) {}

  explicit EgfSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("series needs at least one coefficient");
  }

  EgfSeries(std::initializer_list<Rational> coeffs)
      : EgfSeries(std::vector<Rational>(coeffs)) {}

  /// Series whose n!-scaled coefficients are `counts`.
  static EgfSeries from_counts(const std::vector<Integer>& counts) {
    std::vector<Rational> c(counts.size());
    Integer f = 1;
    for (std::size_t n = 0; n < counts.size(); ++n) {
      if (n > 0) f *= static_cast<unsigned long>(n);
      c[n] = Rational(counts[n], f);
      c[n].canonicalize();
    }
    return EgfSeries(std::move(c));
  }

  static EgfSeries constant(const Rational& c, std::size_t order) {
    EgfSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }

  /// c * z^power / power!, zero when power > order.
  static EgfSeries monomial(const Rational& c, std::size_t power, std::size_t order) {
    EgfSeries s(order);
    if (power <= order) s.coeffs_[power] = c / Rational(factorial(power));
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& operator[](std::size_t n) const { return coeffs_.at(n); }
  Rational& operator[](std::size_t n) { return coeffs_.at(n); }

  EgfSeries truncate(std::size_t order) const {
    if (order > this->order())
      throw std::invalid_argument("truncate cannot raise the order of a series");
    return EgfSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

  EgfSeries derivative() const {
    if (order() == 0) return EgfSeries(0);
    EgfSeries d(order() - 1);
    for (std::size_t n = 1; n <= order(); ++n)
      d.coeffs_[n - 1] = coeffs_[n] * static_cast<unsigned long>(n);
    return d;
  }

  /// Antiderivative with zero constant term; raises the order by one.
  EgfSeries integrate() const {
    EgfSeries s(order() + 1);
    for (std::size_t n = 0; n <= order(); ++n)
      s.coeffs_[n + 1] = coeffs_[n] / static_cast<unsigned long>(n + 1);
    return s;
  }

  /// n! * c_n for every n; throws if any of them is not an integer.
  std::vector<Integer> counts() const {
    std::vector<Integer> out(coeffs_.size());
    Integer f = 1;
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
      if (n > 0) f *= static_cast<unsigned long>(n);
      Rational scaled = coeffs_[n] * f;
      if (!is_integer(scaled))
        throw std::domain_error("coefficient " + std::to_string(n) +
                                " is not an integer multiple of 1/n!");
      out[n] = scaled.get_num();
    }
    return out;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Rational& c) { return sgn(c) == 0; });
  }

  friend bool operator==(const EgfSeries& a, const EgfSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

  friend EgfSeries operator+(const EgfSeries& a, const EgfSeries& b) {
    require_same_order(a, b);
    EgfSeries s(a.order());
    for (std::size_t n = 0; n <= a.order(); ++n) s.coeffs_[n] = a.coeffs_[n] + b.coeffs_[n];
    return s;
  }

  friend EgfSeries operator-(const EgfSeries& a, const EgfSeries& b) {
    require_same_order(a, b);
    EgfSeries s(a.order());
    for (std::size_t n = 0; n <= a.order(); ++n) s.coeffs_[n] = a.coeffs_[n] - b.coeffs_[n];
    return s;
  }

  friend EgfSeries operator*(const Rational& c, const EgfSeries& a) {
    EgfSeries s(a.order());
    for (std::size_t n = 0; n <= a.order(); ++n) s.coeffs_[n] = c * a.coeffs_[n];
    return s;
  }

  /// Cauchy product truncated at the common order.
  friend EgfSeries operator*(const EgfSeries& a, const EgfSeries& b) {
    require_same_order(a, b);
    EgfSeries s(a.order());
    for (std::size_t n = 0; n <= a.order(); ++n) {
      Rational acc = 0;
      for (std::size_t j = 0; j <= n; ++j) acc += a.coeffs_[j] * b.coeffs_[n - j];
      s.coeffs_[n] = acc;
    }
    return s;
  }

 private:
  static void require_same_order(const EgfSeries& a, const EgfSeries& b) {
    if (a.order() != b.order()) throw OrderMismatch(a.order(), b.order());
  }

  std::vector<Rational> coeffs_;
};

inline EgfSeries series_add(const EgfSeries& a, const EgfSeries& b) { return a + b; }
inline EgfSeries series_mul(const EgfSeries& a, const EgfSeries& b) { return a * b; }
inline EgfSeries series_derivative(const EgfSeries& a) { return a.derivative(); }
inline EgfSeries series_integrate(const EgfSeries& a) { return a.integrate(); }

/// E(z) = sec z + tan z (NonPlane) from E' = (1 + E^2)/2, or the plane tree
/// series B(z) from B' = 1 - B + B^2. Both start at 1.
inline EgfSeries base_series(TreeVariety variety, std::size_t order) {
  EgfSeries s(order);
  s[0] = 1;
  for (std::size_t n = 0; n < order; ++n) {
    Rational square = 0;
    for (std::size_t j = 0; j <= n; ++j) square += s[j] * s[n - j];
    Rational rhs = variety == TreeVariety::NonPlane ? Rational(square / 2) : Rational(square - s[n]);
    if (n == 0) rhs += variety == TreeVariety::NonPlane ? Rational(1, 2) : Rational(1);
    s[n + 1] = rhs / static_cast<unsigned long>(n + 1);
  }
  return s;
}

/// Unique y with y(0) = y0 and y' = m*y + p through z^order, via
/// (n+1) y_{n+1} = [z^n](m*y + p). m and p need order >= order - 1.
inline EgfSeries solve_linear_ode(const EgfSeries& m, const EgfSeries& p, const Rational& y0,
                                  std::size_t order) {
  if (order > 0 && (m.order() + 1 < order || p.order() + 1 < order))
    throw std::invalid_argument("ODE coefficients are truncated below order - 1");
  EgfSeries y(order);
  y[0] = y0;
  for (std::size_t n = 0; n < order; ++n) {
    Rational acc = p[n];
    for (std::size_t j = 0; j <= n; ++j) acc += m[j] * y[n - j];
    y[n + 1] = acc / static_cast<unsigned long>(n + 1);
  }
  return y;
}

/// Multiplier of the marked-tree term when the root is removed:
/// E (NonPlane), 2B - 1 (Plane).
inline EgfSeries marked_multiplier(TreeVariety variety, std::size_t order) {
  EgfSeries base = base_series(variety, order);
  if (variety == TreeVariety::NonPlane) return base;
  return Rational(2) * base - EgfSeries::constant(1, order);
}

/// Solution of f' = 2f(B - 1) + f + p, f(0) = y0.
inline EgfSeries solve_plane_linear_ode(const EgfSeries& p, const Rational& y0,
                                        std::size_t order) {
  return solve_linear_ode(marked_multiplier(TreeVariety::Plane, order), p, y0, order);
}

}  // namespace onetwo
