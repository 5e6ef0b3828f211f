#include <random>

#include <gtest/gtest.h>

#include "ivfo/interval.hpp"
#include "ivfo/io.hpp"

namespace ivfo {
namespace {

IntervalRep unit_rep(const std::vector<Rational>& lefts) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1);
  for (std::size_t i = 0; i < lefts.size(); ++i) rep.add("v" + std::to_string(i + 1), Coord(lefts[i]), 0);
  return rep;
}

// Pairwise oracle, independent of the sweep in build_graph.
std::set<std::pair<std::string, std::string>> pairwise_edges(const IntervalRep& rep) {
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (std::size_t j = i + 1; j < rep.size(); ++j) {
      Rational li = approx_value(rep.vertices[i].left, rep.lengths), ri = approx_value(rep.right(i), rep.lengths);
      Rational lj = approx_value(rep.vertices[j].left, rep.lengths), rj = approx_value(rep.right(j), rep.lengths);
      if (li < rj && lj < ri) out.insert(std::minmax(rep.vertices[i].id, rep.vertices[j].id));
    }
  return out;
}

IntervalRep random_rep(std::mt19937& rng, int n) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1).add_exact("h", Rational(3, 2));
  std::uniform_int_distribution<int> pos(0, 24), len(0, 1);
  for (int i = 0; i < n; ++i) rep.add("v" + std::to_string(i), Coord(Rational(pos(rng), 4)), static_cast<std::uint32_t>(len(rng)));
  return rep;
}

TEST(BuildGraph, Examples) {
  EXPECT_EQ(build_graph(unit_rep({0, 2})).edge_count(), 0U);
  EXPECT_EQ(build_graph(unit_rep({0, 1})).edge_count(), 0U);
  Graph p3 = build_graph(unit_rep({0, Rational(1, 2), 1}));
  EXPECT_TRUE(same_graph(p3, graphs::path(3)));
}

TEST(BuildGraph, MatchesPairwiseOracle) {
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto rep = random_rep(rng, 12);
    EXPECT_EQ(build_graph(rep).edge_set(), pairwise_edges(rep));
  }
}

TEST(BuildGraph, TranslationInvariant) {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto rep = random_rep(rng, 10);
    auto moved = rep;
    for (auto& v : moved.vertices) v.left += Coord(Rational(7, 3));
    EXPECT_TRUE(same_graph(build_graph(rep), build_graph(moved)));
  }
}

TEST(PerturbDistinct, StackedCopies) {
  auto rep = unit_rep({0, 0, 0, 2});
  auto out = perturb_distinct(rep);
  EXPECT_EQ(out.vertices[0].left, Coord(Rational(1, 8)));
  EXPECT_EQ(out.vertices[1].left, Coord(Rational(2, 8)));
  EXPECT_EQ(out.vertices[2].left, Coord(Rational(3, 8)));
  EXPECT_TRUE(same_graph(build_graph(rep), build_graph(out)));
  EXPECT_EQ(build_graph(out).edge_count(), 3U);
}

TEST(PerturbDistinct, SingleVertexAndAlreadyDistinct) {
  auto one = unit_rep({5});
  EXPECT_TRUE(same_graph(build_graph(one), build_graph(perturb_distinct(one))));
  auto rep = unit_rep({0, Rational(1, 2), 3});
  EXPECT_TRUE(same_graph(build_graph(rep), build_graph(perturb_distinct(rep))));
}

TEST(PerturbDistinct, PreservesGraphAndSeparatesEndpoints) {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    auto rep = random_rep(rng, 15);
    auto out = perturb_distinct(rep);
    EXPECT_TRUE(same_graph(build_graph(rep), build_graph(out)));
    std::set<Rational> pts;
    for (std::size_t i = 0; i < out.size(); ++i) {
      pts.insert(approx_value(out.vertices[i].left, out.lengths));
      pts.insert(approx_value(out.right(i), out.lengths));
    }
    EXPECT_EQ(pts.size(), 2 * out.size());
  }
}

TEST(PerturbDistinct, IrrationalGapUsesDyadicBound) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1).add_approx("q", parse_rational("1.41421356237309"));
  rep.add("a", Coord(0), 1).add("b", Coord(Rational(3, 2)), 0).add("c", Coord(0), 0);
  auto out = perturb_distinct(rep);
  EXPECT_TRUE(same_graph(build_graph(rep), build_graph(out)));
  for (const auto& v : out.vertices) EXPECT_TRUE(v.left.is_constant());
}

TEST(DensityProfile, Examples) {
  auto a = density_profile(unit_rep({0, 10, 20}), Coord(1));
  EXPECT_EQ(a.max_count, 1U);
  EXPECT_EQ(a.witness, Coord(0));
  auto b = density_profile(unit_rep({0, Rational(1, 4), Rational(1, 2), 2}), Coord(1));
  EXPECT_EQ(b.max_count, 3U);
  EXPECT_EQ(b.witness, Coord(0));
  auto c = density_profile(unit_rep({}), Coord(1));
  EXPECT_EQ(c.max_count, 0U);
  EXPECT_THROW(density_profile(unit_rep({0}), Coord(0)), ValidationError);
}

TEST(Validate, SpanAndIds) {
  auto rep = unit_rep({0, 1});
  rep.span = Coord(2);
  EXPECT_NO_THROW(validate(rep));
  rep.span = Coord(Rational(3, 2));
  EXPECT_THROW(validate(rep), SpanViolation);
  auto dup = unit_rep({0, 1});
  dup.vertices[1].id = "v1";
  EXPECT_THROW(validate(dup), ValidationError);
}

TEST(RepFormat, ParsesAndRoundTrips) {
  const char* text = R"(# example
lengths u=1 q=1.41421356237309
span 4.5
vertex v1 len=u left=0
vertex v2 len=q left=1/2+1*q   # trailing comment
)";
  auto rep = parse_rep(std::string_view(text));
  ASSERT_EQ(rep.size(), 2U);
  EXPECT_TRUE(rep.lengths[0].exact);
  EXPECT_FALSE(rep.lengths[1].exact);
  EXPECT_EQ(rep.vertices[1].left, Coord(Rational(1, 2)) + Coord::symbol(1));
  auto again = parse_rep(format_rep(rep));
  EXPECT_EQ(again, rep);
  EXPECT_EQ(format_rep(again), format_rep(rep));
}

TEST(RepFormat, Diagnostics) {
  try {
    parse_rep(std::string_view("lengths u=1\nvertex a len=z left=0\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_rep(std::string_view("vertex a len=u left=0\n")), ParseError);
  EXPECT_THROW(parse_rep(std::string_view("lengths u=1\nspan 1\nvertex a len=u left=1/2\n")), ParseError);
}

TEST(GraphFormat, RoundTrips) {
  Graph g = parse_graph(std::string_view("vertices a b c\nedge a b\nedge c b\n"));
  EXPECT_EQ(g.edge_count(), 2U);
  EXPECT_TRUE(same_graph(parse_graph(format_graph(g)), g));
  EXPECT_THROW(parse_graph(std::string_view("vertices a\nedge a a\n")), ParseError);
}

}  // namespace
}  // namespace ivfo
