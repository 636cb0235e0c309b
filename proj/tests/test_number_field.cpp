#include <gtest/gtest.h>

#include <random>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "onetwo/number_field.hpp"

using namespace onetwo;

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

Float50 to_float(const Rational& q) {
  return Float50(q.get_num().get_str()) / Float50(q.get_den().get_str());
}

Float50 midpoint(const ExactConst& x) { return to_float(ec_eval(x, 40).interval().mid()); }

ExactConst random_const(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5), exp(-3, 3), count(0, 4);
  ExactConst x;
  for (long t = count(rng); t > 0; --t)
    x += ExactConst::monomial(QSqrt3(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng))),
                              static_cast<int>(exp(rng)));
  return x;
}

}  // namespace

TEST(QSqrt3, FieldArithmetic) {
  const QSqrt3 s = QSqrt3::sqrt3();
  EXPECT_EQ(s * s, QSqrt3(3));
  const QSqrt3 x(make_rational(2, 3), make_rational(-5, 7));
  EXPECT_EQ(x * x.inverse(), QSqrt3(1));
  EXPECT_EQ(x * x.conjugate(), QSqrt3(x.norm()));
  EXPECT_THROW(QSqrt3(0).inverse(), std::domain_error);
}

TEST(ExactConst, SpecArithmetic) {
  EXPECT_EQ(ExactConst::sqrt3() * ExactConst::sqrt3(), ExactConst(3));
  const ExactConst pi = ExactConst::pi();
  const ExactConst lhs = ec_mul(pi - ExactConst(2), ExactConst(4) / (pi * pi));
  EXPECT_EQ(lhs, ExactConst::parse("4*pi^-1 - 8*pi^-2"));
  EXPECT_EQ(ec_add(ExactConst::parse("1 - 2*pi^-1"), ExactConst::parse("2*pi^-1")), ExactConst(1));
  EXPECT_EQ(ec_negate(ExactConst(1)), ExactConst(-1));
  EXPECT_EQ(ec_scalar_div(ExactConst::pi(), 4), ExactConst::parse("(1/4)*pi"));
}

TEST(ExactConst, CanonicalText) {
  EXPECT_EQ(ExactConst().to_string(), "0");
  EXPECT_EQ(ExactConst::parse("1 - 2*pi^-1").to_string(), "1 - 2*pi^-1");
  EXPECT_EQ((ExactConst(2) - ExactConst::pi().pow(2) * ExactConst(make_rational(1, 24)) -
             ExactConst(4) / ExactConst::pi())
                .to_string(),
            "2 - (1/24)*pi^2 - 4*pi^-1");
  EXPECT_EQ(ExactConst::parse("(5/6)*sqrt3*pi^-1").to_string(), "(5/6)*sqrt3*pi^-1");
  EXPECT_EQ(ExactConst(QSqrt3(1, 2)).to_string(), "(1 + 2*sqrt3)");
  EXPECT_EQ(ExactConst::parse("-pi").to_string(), "-pi");
}

TEST(ExactConst, ParseRejectsGarbage) {
  EXPECT_THROW(ExactConst::parse("1 + "), std::invalid_argument);
  EXPECT_THROW(ExactConst::parse("pi^"), std::invalid_argument);
  EXPECT_THROW(ExactConst::parse("e"), std::invalid_argument);
}

TEST(ExactConst, RoundTripProperty) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactConst x = random_const(rng);
    EXPECT_EQ(ExactConst::parse(x.to_string()), x) << x.to_string();
    EXPECT_EQ(ExactConst::parse(x.to_string()).to_string(), x.to_string());
  }
}

TEST(ExactConst, RingLawsProperty) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const ExactConst a = random_const(rng), b = random_const(rng), c = random_const(rng);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a - a, ExactConst());
  }
}

TEST(ExactConst, DivisionOnlyByMonomials) {
  EXPECT_THROW(ExactConst(1) / ExactConst(), std::domain_error);
  EXPECT_THROW(ExactConst(1) / (ExactConst::pi() + ExactConst(1)), std::domain_error);
  EXPECT_EQ(ExactConst::pi() / ExactConst::pi(), ExactConst(1));
}

TEST(Enclosure, KnownConstants) {
  const Enclosure a0 = ec_eval(ExactConst::parse("1 - 2*pi^-1"), 10);
  EXPECT_LE(a0.width(), Rational(1, 10000000000L));
  EXPECT_EQ(format_enclosure(a0, 10), "0.3633802276");
  const Enclosure a1 = ec_eval(ExactConst::parse("2 - (1/24)*pi^2 - 4*pi^-1"), 10);
  EXPECT_EQ(format_enclosure(a1, 10), "0.3155269386");
  const Enclosure r = ec_eval(ExactConst(make_rational(7, 8)), 30);
  EXPECT_EQ(r.lo, make_rational(7, 8));
  EXPECT_EQ(r.hi, make_rational(7, 8));
}

TEST(Enclosure, PiIsSoundAndTightens) {
  // 50 correct digits of pi; every enclosure of at least 160 bits must hold it strictly inside.
  const Rational pi50 = parse_fixed("3.14159265358979323846264338327950288419716939937510");
  const Rational ulp(1, pow_integer(10, 50));
  RationalInterval prev = pi_enclosure(32);
  for (unsigned long bits = 64; bits <= 4096; bits *= 2) {
    const RationalInterval cur = pi_enclosure(bits);
    EXPECT_TRUE(cur.lo <= prev.hi && prev.lo <= cur.hi);
    EXPECT_LT(cur.width(), prev.width());
    if (bits >= 256) {
      EXPECT_LE(cur.lo, pi50 + ulp);
      EXPECT_GE(cur.hi, pi50 - ulp);
    }
    prev = cur;
  }
}

TEST(Enclosure, SqrtIsSound) {
  for (long q : {2, 3, 5, 10, 99}) {
    const RationalInterval s = sqrt_enclosure(q, 200);
    EXPECT_LE(s.lo * s.lo, Rational(q));
    EXPECT_GE(s.hi * s.hi, Rational(q));
  }
  const RationalInterval exact = sqrt_enclosure(make_rational(9, 4), 64);
  EXPECT_TRUE(exact.contains(make_rational(3, 2)));
}

TEST(Enclosure, WidthMeetsRequestedDigits) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const ExactConst x = random_const(rng);
    for (int digits : {5, 20, 60}) {
      const Enclosure e = ec_eval(x, digits);
      EXPECT_LE(e.width(), Rational(1, pow_integer(10, static_cast<unsigned long>(digits))));
      // A tighter enclosure must overlap the looser one.
      const Enclosure tight = ec_eval(x, digits + 15);
      EXPECT_LE(e.lo, tight.hi);
      EXPECT_GE(e.hi, tight.lo);
    }
  }
}

TEST(Enclosure, DecimalFormatting) {
  EXPECT_EQ(format_decimal(ExactConst(make_rational(1, 3)), 5), "0.33333");
  EXPECT_EQ(format_decimal(ExactConst(make_rational(-2, 3)), 4), "-0.6667");
  EXPECT_EQ(format_decimal(ExactConst::pi(), 12), "3.141592653590");
  // An enclosure wider than half a unit cannot justify its last digit.
  const Enclosure loose{make_rational(1, 10), make_rational(2, 10), 1};
  EXPECT_NE(format_enclosure(loose, 4).find("±"), std::string::npos);
}

TEST(Moments, HalfPiClosedForms) {
  EXPECT_EQ(halfpi_moment(0), ExactConst::parse("(1/2)*pi - 1"));
  EXPECT_EQ(halfpi_moment(1), ExactConst::parse("(1/8)*pi^2 - 1"));
}

TEST(Moments, PlaneClosedForms) {
  EXPECT_EQ(plane_moment(0, MomentKind::Const), ExactConst::parse("(2/9)*sqrt3*pi"));
  EXPECT_EQ(plane_moment(0, MomentKind::Sin), ExactConst::parse("(1/2)*sqrt3"));
  EXPECT_EQ(plane_moment(0, MomentKind::Cos), ExactConst(make_rational(1, 2)));
}

TEST(Moments, SineMomentMatchesTextbookAntiderivative) {
  // int z^m sin z = cos z sum_i (-1)^{i+1} z^{m-2i} m!/(m-2i)! + sin z sum_i (-1)^i z^{m-2i-1} m!/(m-2i-1)!
  const MomentTable table(trig_endpoint(TreeVariety::NonPlane), 20);
  const ExactConst half_pi = ExactConst::monomial(make_rational(1, 2), 1);
  for (unsigned m = 0; m <= 20; ++m) {
    ExactConst at_end, at_zero;
    for (unsigned i = 0; 2 * i + 1 <= m; ++i)
      at_end += ExactConst(Rational(i % 2 == 0 ? 1 : -1) * Rational(factorial(m)) / Rational(factorial(m - 2 * i - 1))) *
                half_pi.pow(m - 2 * i - 1);
    if (m % 2 == 0) at_zero = ExactConst(Rational((m / 2) % 2 == 0 ? -1 : 1) * Rational(factorial(m)));
    EXPECT_EQ(table.get(m, MomentKind::Sin), at_end - at_zero) << "m=" << m;
  }
}

TEST(Moments, AgreeWithNumericalQuadrature) {
  using boost::math::constants::pi;
  boost::math::quadrature::tanh_sinh<Float50> integrator;
  const Float50 tol("1e-25");
  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const TrigEndpoint ep = trig_endpoint(v);
    const MomentTable table(ep, 20);
    const Float50 omega = v == TreeVariety::NonPlane ? Float50(1) : boost::multiprecision::sqrt(Float50(3));
    const Float50 length = v == TreeVariety::NonPlane ? pi<Float50>() / 2
                                                      : 2 * boost::multiprecision::sqrt(Float50(3)) * pi<Float50>() / 9;
    for (unsigned m = 0; m <= 20; ++m) {
      auto sin_f = [&](Float50 t) { return boost::multiprecision::pow(t, m) * boost::multiprecision::sin(omega * t); };
      auto cos_f = [&](Float50 t) { return boost::multiprecision::pow(t, m) * boost::multiprecision::cos(omega * t); };
      const Float50 qs = integrator.integrate(sin_f, Float50(0), length);
      const Float50 qc = integrator.integrate(cos_f, Float50(0), length);
      const Float50 qp = boost::multiprecision::pow(length, m + 1) / (m + 1);
      const Float50 scale = boost::multiprecision::pow(length, m + 1);
      EXPECT_LT(boost::multiprecision::abs(midpoint(table.get(m, MomentKind::Sin)) - qs) / scale, tol) << m;
      EXPECT_LT(boost::multiprecision::abs(midpoint(table.get(m, MomentKind::Cos)) - qc) / scale, tol) << m;
      EXPECT_LT(boost::multiprecision::abs(midpoint(table.get(m, MomentKind::Const)) - qp) / scale, tol) << m;
    }
  }
}
