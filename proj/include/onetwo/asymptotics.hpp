#pragma once

// Limits of vertex-type probabilities from double poles of meromorphic
// generating functions, and the certified bracket for rank fractions that
// have no closed form.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "onetwo/egf_series.hpp"
#include "onetwo/number_field.hpp"
#include "onetwo/rank_counts.hpp"
#include "onetwo/rational.hpp"
#include "onetwo/variety.hpp"

namespace onetwo {

// ---------------------------------------------------------------------------
// Trigonometric polynomials sum c * z^m * {1, sin(w z), cos(w z)} with a
// single frequency w, enough to express every closed form involved here.

enum class TrigFactor { One, Sin, Cos };

class TrigPoly {
 public:
  struct Term {
    QSqrt3 coeff;
    unsigned power;
    TrigFactor factor;
  };

  explicit TrigPoly(QSqrt3 omega = 1) : omega_(std::move(omega)) {}

  TrigPoly& add(QSqrt3 coeff, unsigned power, TrigFactor factor) {
    if (!coeff.is_zero()) terms_.push_back({std::move(coeff), power, factor});
    return *this;
  }

  const QSqrt3& omega() const { return omega_; }
  const std::vector<Term>& terms() const { return terms_; }

  TrigPoly derivative() const {
    TrigPoly d(omega_);
    for (const auto& t : terms_) {
      if (t.power > 0) d.add(t.coeff * QSqrt3(static_cast<long>(t.power)), t.power - 1, t.factor);
      if (t.factor == TrigFactor::Sin) d.add(t.coeff * omega_, t.power, TrigFactor::Cos);
      if (t.factor == TrigFactor::Cos) d.add(-(t.coeff * omega_), t.power, TrigFactor::Sin);
    }
    return d;
  }

  /// Value at the endpoint z = L where sin(wL), cos(wL) are known exactly.
  ExactConst evaluate(const TrigEndpoint& at) const {
    if (!(at.omega == omega_)) throw std::invalid_argument("endpoint frequency mismatch");
    ExactConst sum;
    for (const auto& t : terms_) {
      ExactConst term = ExactConst(t.coeff) * at.length.pow(t.power);
      if (t.factor == TrigFactor::Sin) term *= ExactConst(at.sin_end);
      if (t.factor == TrigFactor::Cos) term *= ExactConst(at.cos_end);
      sum += term;
    }
    return sum;
  }

  /// Taylor series through z^order. Every coefficient must be rational.
  EgfSeries to_series(std::size_t order) const {
    std::vector<QSqrt3> c(order + 1);
    // trig[n] = [z^n] sin(w z) or cos(w z)
    std::vector<QSqrt3> sin_c(order + 1), cos_c(order + 1);
    QSqrt3 wpow(1);
    for (std::size_t n = 0; n <= order; ++n) {
      QSqrt3 v = wpow * QSqrt3(Rational(1, factorial(n)));
      const int sign = (n / 2) % 2 == 0 ? 1 : -1;
      if (n % 2 == 1) sin_c[n] = sign > 0 ? v : -v;
      else cos_c[n] = sign > 0 ? v : -v;
      wpow = wpow * omega_;
    }
    for (const auto& t : terms_) {
      for (std::size_t n = t.power; n <= order; ++n) {
        const std::size_t j = n - t.power;
        switch (t.factor) {
          case TrigFactor::One: if (j == 0) c[n] = c[n] + t.coeff; break;
          case TrigFactor::Sin: c[n] = c[n] + t.coeff * sin_c[j]; break;
          case TrigFactor::Cos: c[n] = c[n] + t.coeff * cos_c[j]; break;
        }
      }
    }
    std::vector<Rational> out(order + 1);
    for (std::size_t n = 0; n <= order; ++n) {
      if (!c[n].is_rational()) throw std::domain_error("trigonometric polynomial has irrational Taylor coefficient");
      out[n] = c[n].a;
    }
    return EgfSeries(std::move(out));
  }

 private:
  QSqrt3 omega_;
  std::vector<Term> terms_;
};

/// numerator / denominator with a double zero of the denominator at z0.
struct ClosedForm {
  TrigPoly numerator;
  TrigPoly denominator;
};

/// Integrating factor of y' = m*y + P: 1 - sin z (NonPlane) and
/// Q(z) = 1/2 + cos(sqrt3 z)/4 - sqrt3 sin(sqrt3 z)/4 (Plane).
inline TrigPoly integrating_factor(TreeVariety v) {
  if (v == TreeVariety::NonPlane)
    return TrigPoly(1).add(1, 0, TrigFactor::One).add(-1, 0, TrigFactor::Sin);
  return TrigPoly(QSqrt3::sqrt3())
      .add(make_rational(1, 2), 0, TrigFactor::One)
      .add(make_rational(1, 4), 0, TrigFactor::Cos)
      .add(QSqrt3(0, make_rational(-1, 4)), 0, TrigFactor::Sin);
}

/// Generating functions of leaves (k = 0) and rank-1 vertices (k = 1).
inline ClosedForm rank_closed_form(TreeVariety v, int k) {
  const QSqrt3 s3 = QSqrt3::sqrt3();
  if (v == TreeVariety::NonPlane && k == 0) {
    // (z - 1 + cos z) / (1 - sin z)
    return {TrigPoly(1).add(1, 1, TrigFactor::One).add(-1, 0, TrigFactor::One).add(1, 0, TrigFactor::Cos),
            integrating_factor(v)};
  }
  if (v == TreeVariety::NonPlane && k == 1) {
    // (12 z sin z + 12 cos z - 12 - 3 z^2 cos z - z^3) / (6 (1 - sin z))
    return {TrigPoly(1)
                .add(12, 1, TrigFactor::Sin)
                .add(12, 0, TrigFactor::Cos)
                .add(-12, 0, TrigFactor::One)
                .add(-3, 2, TrigFactor::Cos)
                .add(-1, 3, TrigFactor::One),
            TrigPoly(1).add(6, 0, TrigFactor::One).add(-6, 0, TrigFactor::Sin)};
  }
  if (v == TreeVariety::Plane && k == 0) {
    // (6z + sqrt3 sin(sqrt3 z) + 3 cos(sqrt3 z) - 3) /
    // (-3 sqrt3 sin(sqrt3 z) + 3 cos(sqrt3 z) + 6)
    return {TrigPoly(s3)
                .add(6, 1, TrigFactor::One)
                .add(s3, 0, TrigFactor::Sin)
                .add(3, 0, TrigFactor::Cos)
                .add(-3, 0, TrigFactor::One),
            TrigPoly(s3)
                .add(QSqrt3(0, -3), 0, TrigFactor::Sin)
                .add(3, 0, TrigFactor::Cos)
                .add(6, 0, TrigFactor::One)};
  }
  if (v == TreeVariety::Plane && k == 1) {
    // (6z^3 + sqrt3 (3z^2 - 15z - 5) sin(sqrt3 z) + 3 (3z^2 + 5z - 5) cos(sqrt3 z) + 15) /
    // (9 (sqrt3 sin(sqrt3 z) - cos(sqrt3 z) - 2))
    return {TrigPoly(s3)
                .add(6, 3, TrigFactor::One)
                .add(QSqrt3(0, 3), 2, TrigFactor::Sin)
                .add(QSqrt3(0, -15), 1, TrigFactor::Sin)
                .add(QSqrt3(0, -5), 0, TrigFactor::Sin)
                .add(9, 2, TrigFactor::Cos)
                .add(15, 1, TrigFactor::Cos)
                .add(-15, 0, TrigFactor::Cos)
                .add(15, 0, TrigFactor::One),
            TrigPoly(s3)
                .add(QSqrt3(0, 9), 0, TrigFactor::Sin)
                .add(-9, 0, TrigFactor::Cos)
                .add(-18, 0, TrigFactor::One)};
  }
  throw std::domain_error("no closed form for rank " + std::to_string(k) + "; use bound_interval");
}

// ---------------------------------------------------------------------------

/// Dominant singularity: residue (order 1) or leading Laurent coefficient
/// D of D/(z - z0)^2 (order 2).
struct PoleData {
  ExactConst location;
  int order = 2;
  ExactConst coefficient;
};

/// f(z0)/g'(z0) for a simple zero of g.
inline ExactConst simple_pole_residue(const ExactConst& f_at_z0, const ExactConst& gprime_at_z0) {
  return f_at_z0 / gprime_at_z0;
}

/// 2 f(z0) / g''(z0) for a double zero of g.
inline ExactConst double_pole_coefficient(const ExactConst& f_at_z0, const ExactConst& gpp_at_z0) {
  return ExactConst(2) * f_at_z0 / gpp_at_z0;
}

/// Validates that the denominator has a double zero at the variety's
/// singularity and returns the leading coefficient.
inline PoleData double_pole(const ClosedForm& f, TreeVariety v) {
  const TrigEndpoint at = trig_endpoint(v);
  const TrigPoly d1 = f.denominator.derivative();
  if (!f.denominator.evaluate(at).is_zero() || !d1.evaluate(at).is_zero())
    throw std::domain_error("denominator has no double zero at the singularity");
  const ExactConst gpp = d1.derivative().evaluate(at);
  if (gpp.is_zero()) throw std::domain_error("denominator vanishes to order three");
  return {at.length, 2, double_pole_coefficient(f.numerator.evaluate(at), gpp)};
}

struct GrowthNormalization {
  ExactConst z0;
  ExactConst leading;  // tree_count_n / n! ~ leading * z0^-n
};

/// From the simple pole of the base series: residue R at z0 gives
/// R/(z - z0) = (-R/z0) sum (z/z0)^n.
inline GrowthNormalization growth_normalization(TreeVariety v) {
  const TrigEndpoint at = trig_endpoint(v);
  ExactConst residue;
  if (v == TreeVariety::NonPlane) {
    // E = (1 + sin z)/cos z; f(pi/2) = 2, g'(pi/2) = -sin(pi/2) = -1.
    residue = simple_pole_residue(2, -1);
  } else {
    // B = 1/2 + (sqrt3/2) sin(x)/cos(x), x = sqrt3 z/2 + pi/6 = pi/2 at z0;
    // f = (sqrt3/2) sin x = sqrt3/2, g' = -(sqrt3/2) sin x = -sqrt3/2.
    const ExactConst half_s3 = ExactConst::monomial(QSqrt3(0, make_rational(1, 2)), 0);
    residue = simple_pole_residue(half_s3, -half_s3);
  }
  return {at.length, -residue / at.length};
}

/// Turns the leading coefficient D of the marked-vertex series into the
/// limit of count_n / (n * tree_count_n): D (n+1) z0^{-n-2} over
/// n * leading * z0^{-n}.
inline ExactConst probability_limit(TreeVariety v, const ExactConst& leading_coefficient) {
  const GrowthNormalization g = growth_normalization(v);
  return leading_coefficient / (g.z0 * g.z0 * g.leading);
}

/// Exact a_0 or a_1 from the closed-form generating functions.
inline ExactConst limit_rank_fraction(TreeVariety v, int k) {
  if (k != 0 && k != 1)
    throw std::domain_error("rank " + std::to_string(k) + " has no closed form; use bound_interval");
  return probability_limit(v, double_pole(rank_closed_form(v, k), v).coefficient);
}

// ---------------------------------------------------------------------------

/// Limits v_r and w_{k,i} for one variety. A polynomial correction
/// c z^{i-1}/(i-1)! solves to y = K/mu with K(z0) = c/(i-1)! int_0^z0
/// t^{i-1} mu(t) dt, so each limit is c/(i-1)! * moment(i-1) * scale.
class LimitEngine {
 public:
  LimitEngine(TreeVariety v, std::size_t max_size)
      : variety_(v),
        endpoint_(trig_endpoint(v)),
        moments_(endpoint_, max_size == 0 ? 0 : max_size - 1),
        table_(root_rank_counts(v, std::max<std::size_t>(max_size, 1))),
        tree_counts_(base_series(v, max_size).counts()) {
    const ExactConst mu_pp = integrating_factor(v).derivative().derivative().evaluate(endpoint_);
    scale_ = probability_limit(v, double_pole_coefficient(1, mu_pp));
  }

  LimitEngine(RootRankTable table, std::size_t max_size)
      : LimitEngine(table.variety, max_size) {
    table_ = std::move(table);
  }

  TreeVariety variety() const { return variety_; }
  std::size_t max_size() const { return moments_.max_m() + 1; }
  const RootRankTable& table() const { return table_; }

  /// int_0^{z0} t^m mu(t) dt
  ExactConst weight_moment(std::size_t m) const {
    if (variety_ == TreeVariety::NonPlane)
      return moments_.get(m, MomentKind::Const) - moments_.get(m, MomentKind::Sin);
    return ExactConst(make_rational(1, 2)) * moments_.get(m, MomentKind::Const) +
           ExactConst(make_rational(1, 4)) * moments_.get(m, MomentKind::Cos) -
           ExactConst::monomial(QSqrt3(0, make_rational(1, 4)), 0) * moments_.get(m, MomentKind::Sin);
  }

  /// Limit for the correction c z^{size-1}/(size-1)!.
  ExactConst correction_limit(const Integer& c, std::size_t size) const {
    if (size < 1 || size > max_size()) throw std::out_of_range("subtree size outside engine range");
    if (c == 0) return {};
    Rational coef(c, factorial(size - 1));
    coef.canonicalize();
    return ExactConst(coef) * weight_moment(size - 1) * scale_;
  }

  ExactConst subtree_prob(std::size_t r) const { return correction_limit(tree_counts_.at(r), r); }
  ExactConst joint_prob(std::size_t k, std::size_t i) const { return correction_limit(table_.at(k, i), i); }

 private:
  TreeVariety variety_;
  TrigEndpoint endpoint_;
  MomentTable moments_;
  RootRankTable table_;
  std::vector<Integer> tree_counts_;
  ExactConst scale_;
};

inline ExactConst limit_subtree_prob(TreeVariety v, std::size_t r) {
  if (r < 1) throw std::invalid_argument("subtree size must be at least 1");
  return LimitEngine(v, r).subtree_prob(r);
}

inline ExactConst limit_joint_prob(TreeVariety v, std::size_t k, std::size_t i) {
  if (i < 1) throw std::invalid_argument("subtree size must be at least 1");
  return LimitEngine(v, i).joint_prob(k, i);
}

// ---------------------------------------------------------------------------

struct BoundTerm {
  std::size_t i = 0;
  Integer t_ki;
  ExactConst w;
  ExactConst v;
};

/// sum_{i<=r} w_{k,i} <= a_k <= sum_{i<=r} w_{k,i} + (1 - sum_{i<=r} v_i)
struct BoundReport {
  TreeVariety variety = TreeVariety::NonPlane;
  std::size_t k = 0;
  std::size_t r = 0;
  ExactConst lower, upper;
  Enclosure lower_enc, upper_enc;
  ExactConst partial_v_sum, partial_w_sum;
  std::vector<BoundTerm> terms;
};

inline BoundReport bound_interval(const LimitEngine& engine, std::size_t k, std::size_t r,
                                  int digits = 12) {
  if (r < 1) throw std::invalid_argument("truncation r must be at least 1");
  BoundReport rep;
  rep.variety = engine.variety();
  rep.k = k;
  rep.r = r;
  for (std::size_t i = 1; i <= r; ++i) {
    BoundTerm term{i, engine.table().at(k, i), engine.joint_prob(k, i), engine.subtree_prob(i)};
    rep.partial_w_sum += term.w;
    rep.partial_v_sum += term.v;
    rep.terms.push_back(std::move(term));
  }
  rep.lower = rep.partial_w_sum;
  rep.upper = rep.lower + (ExactConst(1) - rep.partial_v_sum);
  rep.lower_enc = ec_eval(rep.lower, digits);
  rep.upper_enc = ec_eval(rep.upper, digits);
  return rep;
}

inline BoundReport bound_interval(TreeVariety v, std::size_t k, std::size_t r, int digits = 12) {
  if (r < 1) throw std::invalid_argument("truncation r must be at least 1");
  return bound_interval(LimitEngine(v, r), k, r, digits);
}

/// {variety, k, r, lower, upper, v_partial_sum, per_i_terms}; exact values
/// in canonical text, decimals rounded to `digits` places.
inline nlohmann::json to_json(const BoundReport& rep, int digits = 12) {
  auto value = [&](const ExactConst& x) {
    return nlohmann::json{{"exact", x.to_string()}, {"decimal", format_decimal(x, digits)}};
  };
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : rep.terms)
    terms.push_back({{"i", t.i},
                     {"t_ki", t.t_ki.get_str()},
                     {"w_exact", t.w.to_string()},
                     {"w_decimal", format_decimal(t.w, digits)},
                     {"v_exact", t.v.to_string()},
                     {"v_decimal", format_decimal(t.v, digits)}});
  return {{"variety", std::string(variety_name(rep.variety))},
          {"k", rep.k},
          {"r", rep.r},
          {"lower", value(rep.lower)},
          {"upper", value(rep.upper)},
          {"v_partial_sum", value(rep.partial_v_sum)},
          {"per_i_terms", std::move(terms)}};
}

}  // namespace onetwo
