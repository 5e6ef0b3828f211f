#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "ivfo/numerics.hpp"

namespace ivfo {
namespace {

const Rational kSqrt2 = parse_rational("1.41421356237309");

LengthSet unit() { return LengthSet().add_exact("u", 1); }
LengthSet one_and_half() { return LengthSet().add_exact("u", 1).add_exact("h", Rational(3, 2)); }
LengthSet one_and_sqrt2() { return LengthSet().add_exact("u", 1).add_approx("q", kSqrt2); }

// Brute force over coefficient vectors, deduplicated numerically. Only valid
// for length sets whose distinct values are far apart at double precision.
std::vector<double> brute_force_values(const std::vector<double>& lengths, int k) {
  std::vector<double> out;
  std::vector<int> c(lengths.size(), 0);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos == c.size()) {
      double v = 0;
      for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * lengths[i];
      out.push_back(v);
      return;
    }
    for (int x = -left; x <= left; ++x) {
      c[pos] = x;
      self(self, pos + 1, left - std::abs(x));
    }
  };
  rec(rec, 0, k);
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double v : out)
    if (uniq.empty() || v - uniq.back() > 1e-9) uniq.push_back(v);
  return uniq;
}

std::vector<double> values(const std::vector<LkElement>& es, const LengthSet& l) {
  std::vector<double> v;
  for (const auto& e : es) v.push_back(to_double(approx_value(e.value, l)));
  return v;
}

TEST(Rational, ParsesAllForms) {
  EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("1.000000000000000001"), Rational(BigInt("1000000000000000001"), BigInt("1000000000000000000")));
  EXPECT_THROW(parse_rational("1.0000000000000000001"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(CoordArithmetic, CanonicalFormDropsZeroCoefficients) {
  Coord a = Coord(1) + Coord::symbol(1, 2);
  Coord b = a - Coord::symbol(1, 2);
  EXPECT_TRUE(b.is_constant());
  EXPECT_EQ(b, Coord(1));
  EXPECT_EQ((a * Rational(1, 2)).coeff(1), Rational(1));
}

TEST(CoordCompare, Examples) {
  LengthSet l = LengthSet().add_approx("q", kSqrt2);
  Coord q = Coord::symbol(0);
  EXPECT_EQ(coord_compare(q, q, l), std::strong_ordering::equal);
  EXPECT_EQ(coord_compare(Coord(Rational(3, 2)), Coord(1) + Coord::symbol(0, 0), l), std::strong_ordering::greater);
  EXPECT_EQ(coord_compare(Coord(1) + q, Coord(Rational(5, 2)), l), std::strong_ordering::less);
}

TEST(CoordCompare, ExactSymbolsAreSubstituted) {
  LengthSet l = LengthSet().add_exact("u", 1).add_exact("v", 2);
  EXPECT_EQ(coord_compare(Coord::symbol(0, 2), Coord::symbol(1), l), std::strong_ordering::equal);
}

TEST(CoordCompare, PrecisionErrorWithinTolerance) {
  LengthSet l = LengthSet().add_approx("q", kSqrt2);
  Coord x = Coord::symbol(0);
  Coord y = Coord(kSqrt2 + Rational(1, 100000000000LL));
  EXPECT_THROW(coord_compare(x, y, l), PrecisionError);
  EXPECT_EQ(coord_compare(x, y, l, Rational(1, 1000000000000000LL)), std::strong_ordering::less);
}

TEST(CoordText, RoundTrips) {
  LengthSet l = one_and_sqrt2();
  Coord c = parse_coord("1/2+1*q", l);
  EXPECT_EQ(c, Coord(Rational(1, 2)) + Coord::symbol(1));
  EXPECT_EQ(parse_coord(to_string(c, l), l), c);
  Coord d = parse_coord("3+-1*q", l);
  EXPECT_EQ(d.coeff(1), Rational(-1));
  EXPECT_EQ(parse_coord("q", l), Coord::symbol(1));
  EXPECT_THROW(parse_coord("1+2*z", l), ParseError);
}

TEST(EnumerateLk, Examples) {
  EXPECT_EQ(values(enumerate_Lk(unit(), 0), unit()), std::vector<double>{0.0});
  EXPECT_EQ(values(enumerate_Lk(unit(), 2), unit()), (std::vector<double>{-2, -1, 0, 1, 2}));
  std::vector<double> expected{-3, -2.5, -2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2, 2.5, 3};
  EXPECT_EQ(values(enumerate_Lk(one_and_half(), 2), one_and_half()), expected);
}

TEST(EnumerateLk, MinimumWeightIsKept) {
  LengthSet l = LengthSet().add_exact("u", 1).add_exact("v", 2);
  LkTable t(l, 4);
  EXPECT_EQ(t.weight_of(Coord(2)), 1);
  EXPECT_EQ(t.weight_of(Coord(4)), 2);
  EXPECT_EQ(t.weight_of(Coord(8)), 4);
}

TEST(EnumerateLk, AgreesWithBruteForceGrid) {
  std::vector<std::pair<LengthSet, std::vector<double>>> grid = {
      {unit(), {1.0}},
      {one_and_half(), {1.0, 1.5}},
      {one_and_sqrt2(), {1.0, to_double(kSqrt2)}},
      {LengthSet().add_exact("a", Rational(1, 2)).add_exact("b", Rational(3, 4)).add_exact("c", 1), {0.5, 0.75, 1.0}},
  };
  for (const auto& [l, ds] : grid) {
    for (int k = 0; k <= 8; ++k) {
      auto got = values(enumerate_Lk(l, k), l);
      auto want = brute_force_values(ds, k);
      ASSERT_EQ(got.size(), want.size()) << "k=" << k;
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9);
    }
  }
}

TEST(EnumerateLk, MonotoneInK) {
  LengthSet l = one_and_sqrt2();
  for (int k = 0; k < 6; ++k) {
    LkTable big(l, k + 1);
    for (const auto& e : enumerate_Lk(l, k)) {
      auto w = big.weight_of(e.value);
      ASSERT_TRUE(w.has_value());
      EXPECT_LE(*w, e.weight);
    }
  }
}

TEST(EnumerateLk, BudgetIsEnforced) { EXPECT_THROW(enumerate_Lk(one_and_sqrt2(), 50, default_tolerance(), 100), BudgetError); }

TEST(LDistance, Examples) {
  EXPECT_EQ(l_distance(Coord(0), Coord(0), unit(), 3), 0);
  EXPECT_EQ(l_distance(Coord(0), Coord(Rational(5, 2)), one_and_half(), 4), 2);
  EXPECT_EQ(l_distance(Coord(0), Coord(Rational(1, 3)), unit(), 8), std::nullopt);
}

TEST(LDistance, SymmetricAndBoundedByWeight) {
  LengthSet l = one_and_sqrt2();
  for (const auto& e : enumerate_Lk(l, 4)) {
    auto fwd = l_distance(Coord(0), e.value, l, 4);
    auto back = l_distance(e.value, Coord(0), l, 4);
    ASSERT_TRUE(fwd.has_value());
    EXPECT_EQ(fwd, back);
    EXPECT_LE(*fwd, 4);
  }
}

TEST(MinPositiveEpsilon, Examples) {
  EXPECT_EQ(min_positive_epsilon(unit(), 3), Coord(0) + Coord::symbol(0));
  EXPECT_EQ(approx_value(min_positive_epsilon(one_and_half(), 0), one_and_half()), Rational(1, 2));
  LengthSet l12 = LengthSet().add_exact("u", 1).add_exact("v", 2);
  EXPECT_EQ(approx_value(min_positive_epsilon(l12, 1), l12), Rational(1));
}

TEST(MinPositiveEpsilon, IrrationalShrinksWithDepth) {
  LengthSet l = one_and_sqrt2();
  Rational e0 = approx_value(min_positive_epsilon(l, 0), l);
  Rational e2 = approx_value(min_positive_epsilon(l, 2), l);
  EXPECT_GT(e0, e2);
  EXPECT_GT(e2, 0);
  // Weight-2 candidates are q - 1 and 2 - q.
  EXPECT_EQ(e0, kSqrt2 - 1);
}

}  // namespace
}  // namespace ivfo
