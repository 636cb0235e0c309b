#include <gtest/gtest.h>

#include "onetwo/asymptotics.hpp"

using namespace onetwo;

namespace {

ExactConst parse(const char* s) { return ExactConst::parse(s); }

}  // namespace

TEST(Poles, SimpleResidues) {
  EXPECT_EQ(simple_pole_residue(2, -1), ExactConst(-2));
  EXPECT_EQ(simple_pole_residue(0, 1), ExactConst());
  EXPECT_EQ(simple_pole_residue(parse("(3/7)*pi"), 1), parse("(3/7)*pi"));
}

TEST(Poles, DoublePoleCoefficients) {
  EXPECT_EQ(double_pole_coefficient(parse("(1/2)*pi - 1"), 1), parse("pi - 2"));
  EXPECT_EQ(double_pole_coefficient(parse("6*pi - (1/8)*pi^3 - 12"), 6), parse("2*pi - (1/24)*pi^3 - 4"));
  EXPECT_EQ(double_pole_coefficient(0, 5), ExactConst());
  EXPECT_THROW(double_pole_coefficient(1, 0), std::domain_error);
}

TEST(Poles, ClosedFormPolesAreDouble) {
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane})
    for (int k : {0, 1}) {
      const PoleData p = double_pole(rank_closed_form(v, k), v);
      EXPECT_EQ(p.order, 2);
      EXPECT_EQ(p.location, trig_endpoint(v).length);
    }
  EXPECT_EQ(double_pole(rank_closed_form(TreeVariety::NonPlane, 0), TreeVariety::NonPlane).coefficient,
            parse("pi - 2"));
  const ClosedForm bad{TrigPoly(1).add(1, 0, TrigFactor::One), TrigPoly(1).add(1, 0, TrigFactor::One)};
  EXPECT_THROW(double_pole(bad, TreeVariety::NonPlane), std::domain_error);
  EXPECT_THROW(rank_closed_form(TreeVariety::NonPlane, 2), std::domain_error);
}

TEST(Growth, Normalisations) {
  const GrowthNormalization np = growth_normalization(TreeVariety::NonPlane);
  EXPECT_EQ(np.z0, parse("(1/2)*pi"));
  EXPECT_EQ(np.leading, parse("4*pi^-1"));
  const GrowthNormalization pl = growth_normalization(TreeVariety::Plane);
  EXPECT_EQ(pl.z0, parse("(2/9)*sqrt3*pi"));
  EXPECT_EQ(pl.leading, parse("(3/2)*sqrt3*pi^-1"));
}

TEST(Growth, LeadingTermPredictsCounts) {
  // tree_count_n / n! * z0^n -> leading; the next pole is far enough for 1e-6 at n = 60.
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const GrowthNormalization g = growth_normalization(v);
    const Rational c60 = base_series(v, 60)[60];
    const Enclosure z0 = ec_eval(g.z0.pow(60), 30);
    const Enclosure lead = ec_eval(g.leading, 30);
    const Rational approx = c60 * z0.interval().mid();
    EXPECT_LT(abs(approx - lead.interval().mid()), Rational(1, 1000000));
  }
}

TEST(ClosedForms, SeriesSolveTheOdes) {
  const std::size_t order = 30;
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const CountingContext ctx(v, order);
    for (int k : {0, 1}) {
      const ClosedForm f = rank_closed_form(v, k);
      const EgfSeries y = EgfSeries::from_counts(ctx.rank(k).counts);
      EXPECT_EQ(f.numerator.to_series(order), f.denominator.to_series(order) * y)
          << variety_name(v) << " k=" << k;
    }
  }
}

TEST(ClosedForms, IntegratingFactorSolvesHomogeneousOde) {
  // mu' = -m mu: the integrating factor kills the multiplier of the linear ODE.
  const std::size_t order = 30;
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const TrigPoly mu = integrating_factor(v);
    const EgfSeries lhs = mu.derivative().to_series(order - 1);
    const EgfSeries rhs = Rational(-1) * marked_multiplier(v, order - 1) * mu.to_series(order - 1);
    EXPECT_EQ(lhs, rhs) << variety_name(v);
  }
}

TEST(Limits, RankFractions) {
  EXPECT_EQ(limit_rank_fraction(TreeVariety::NonPlane, 0), parse("1 - 2*pi^-1"));
  EXPECT_EQ(limit_rank_fraction(TreeVariety::NonPlane, 1), parse("2 - (1/24)*pi^2 - 4*pi^-1"));
  EXPECT_EQ(limit_rank_fraction(TreeVariety::Plane, 0), parse("(2/3) - (1/2)*sqrt3*pi^-1"));
  EXPECT_EQ(limit_rank_fraction(TreeVariety::Plane, 1), parse("(10/9) - (8/243)*pi^2 - (5/6)*sqrt3*pi^-1"));
  EXPECT_EQ(format_decimal(limit_rank_fraction(TreeVariety::Plane, 0), 3), "0.391");
  EXPECT_EQ(format_decimal(limit_rank_fraction(TreeVariety::Plane, 1), 4), "0.3267");
  EXPECT_THROW(limit_rank_fraction(TreeVariety::NonPlane, 2), std::domain_error);
}

TEST(Limits, SubtreeAndJoint) {
  EXPECT_EQ(limit_subtree_prob(TreeVariety::NonPlane, 1), limit_rank_fraction(TreeVariety::NonPlane, 0));
  EXPECT_EQ(limit_subtree_prob(TreeVariety::Plane, 1), parse("(2/3) - (1/2)*sqrt3*pi^-1"));
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    EXPECT_EQ(limit_joint_prob(v, 0, 1), limit_subtree_prob(v, 1));
    EXPECT_EQ(limit_joint_prob(v, 0, 2), ExactConst());
    const LimitEngine engine(v, 12);
    for (std::size_t i = 1; i <= 12; ++i) {
      ExactConst sum;
      for (std::size_t k = 0; k < i; ++k) sum += engine.joint_prob(k, i);
      EXPECT_EQ(sum, engine.subtree_prob(i)) << i;
    }
  }
}

TEST(Limits, AgreeWithFiniteSizeProbabilities) {
  // counts / ((n+1) tree_count) at n = 80 is within 1e-3 of each limit.
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const CountingContext ctx(v, 80);
    const LimitEngine engine(v, 12);
    for (long r = 1; r <= 12; ++r) {
      const Enclosure e = ec_eval(engine.subtree_prob(static_cast<std::size_t>(r)), 20);
      EXPECT_LT(abs(e.interval().mid() - ctx.size(r).prob_shifted(80)), Rational(1, 1000)) << r;
    }
    for (int k : {0, 1}) {
      const Enclosure e = ec_eval(limit_rank_fraction(v, k), 20);
      EXPECT_LT(abs(e.interval().mid() - ctx.rank(k).prob_shifted(80)), Rational(1, 1000)) << k;
    }
  }
}

TEST(Limits, TailMassDecreases) {
  const LimitEngine engine(TreeVariety::NonPlane, 20);
  ExactConst partial;
  std::vector<Enclosure> tails;
  for (std::size_t r = 1; r <= 20; ++r) {
    partial += engine.subtree_prob(r);
    tails.push_back(ec_eval(ExactConst(1) - partial, 30));
  }
  for (std::size_t r = 1; r < tails.size(); ++r) EXPECT_LT(tails[r].hi, tails[r - 1].lo) << r;
  EXPECT_LT(tails.back().hi * 2, tails.front().lo);
}

TEST(Bounds, ContainKnownLimits) {
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const LimitEngine engine(v, 12);
    for (std::size_t r = 1; r <= 12; ++r)
      for (int k : {0, 1}) {
        const BoundReport b = bound_interval(engine, static_cast<std::size_t>(k), r);
        const Enclosure a = ec_eval(limit_rank_fraction(v, k), 20);
        EXPECT_LE(b.lower_enc.lo, a.hi);
        EXPECT_GE(b.upper_enc.hi, a.lo);
      }
  }
}

TEST(Bounds, GapIsTailMass) {
  const BoundReport b = bound_interval(TreeVariety::NonPlane, 0, 1);
  EXPECT_EQ(b.upper - b.lower, ExactConst(1) - limit_subtree_prob(TreeVariety::NonPlane, 1));
  EXPECT_THROW(bound_interval(TreeVariety::NonPlane, 0, 0), std::invalid_argument);
}

TEST(Bounds, NestedAsTruncationGrows) {
  const LimitEngine engine(TreeVariety::NonPlane, 12);
  for (std::size_t k = 2; k <= 4; ++k) {
    BoundReport prev = bound_interval(engine, k, 4, 20);
    for (std::size_t r : {8, 12}) {
      const BoundReport cur = bound_interval(engine, k, r, 20);
      EXPECT_GE(ec_eval(cur.lower - prev.lower, 20).lo, 0);
      EXPECT_GE(ec_eval(prev.upper - cur.upper, 20).lo, 0);
      prev = cur;
    }
  }
}

TEST(Bounds, ReferenceEstimatesInsideBrackets) {
  const LimitEngine engine(TreeVariety::NonPlane, 12);
  const char* estimates[] = {"0.20278137", "0.0893474", "0.0243854"};
  for (std::size_t k = 2; k <= 4; ++k) {
    const BoundReport b = bound_interval(engine, k, 12);
    const Rational x = parse_fixed(estimates[k - 2]);
    EXPECT_LE(b.lower_enc.hi, x);
    EXPECT_GE(b.upper_enc.lo, x);
  }
}

TEST(Bounds, JsonRoundTrip) {
  const BoundReport b = bound_interval(TreeVariety::Plane, 2, 6);
  const std::string text = to_json(b).dump(2);
  const nlohmann::json parsed = nlohmann::json::parse(text);
  EXPECT_EQ(parsed.dump(2), text);
  EXPECT_EQ(ExactConst::parse(parsed["lower"]["exact"].get<std::string>()), b.lower);
  EXPECT_EQ(ExactConst::parse(parsed["upper"]["exact"].get<std::string>()), b.upper);
  ASSERT_EQ(parsed["per_i_terms"].size(), 6u);
  EXPECT_EQ(parsed["per_i_terms"][3]["t_ki"], b.terms[3].t_ki.get_str());
  EXPECT_EQ(parsed["lower"]["decimal"], format_decimal(b.lower, 12));
}
