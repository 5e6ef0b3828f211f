#include <random>

#include <gtest/gtest.h>

#include "ivfo/cliquewidth.hpp"

namespace ivfo::cw {
namespace {

// Brute force on the closed rational values: [l, r) meets [l', r') iff
// l < r' and l' < r.
std::set<std::pair<std::string, std::string>> oracle_edges(const IntervalRep& rep) {
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (std::size_t j = i + 1; j < rep.size(); ++j) {
      Rational li = exact_value(rep.vertices[i].left, rep.lengths), lj = exact_value(rep.vertices[j].left, rep.lengths);
      Rational ri = li + rep.lengths[rep.vertices[i].length].value, rj = lj + rep.lengths[rep.vertices[j].length].value;
      if (li < rj && lj < ri) out.insert(std::minmax(rep.vertices[i].id, rep.vertices[j].id));
    }
  return out;
}

IntervalRep random_rational_rep(std::mt19937& rng, int n) {
  const std::vector<Rational> pool = {Rational(1, 2), Rational(3, 4), Rational(1), Rational(3, 2)};
  IntervalRep rep;
  std::vector<Rational> chosen;
  for (const auto& v : pool)
    if (rng() % 2) chosen.push_back(v);
  if (chosen.empty()) chosen.push_back(pool[rng() % pool.size()]);
  for (std::size_t i = 0; i < chosen.size(); ++i) rep.lengths.add_exact("l" + std::to_string(i), chosen[i]);
  Rational d(2 + static_cast<int>(rng() % 5));  // 2..6
  rep.span = Coord(d);
  for (int i = 0; i < n; ++i) {
    std::uint32_t li = static_cast<std::uint32_t>(rng() % chosen.size());
    Rational room = d - chosen[li];
    Rational left = room * Rational(static_cast<int>(rng() % 25), 24);
    rep.add("v" + std::to_string(i), Coord(left), li);
  }
  return rep;
}

TEST(CwExpression, Examples) {
  CwExpression one;
  one.create(1, "a");
  auto g = eval_cw_expression(one);
  EXPECT_EQ(g.graph.size(), 1U);
  EXPECT_EQ(g.graph.edge_count(), 0U);

  CwExpression e;
  int u = e.unite(e.create(1, "a"), e.relabel(1, 2, e.create(1, "b")));
  e.join(1, 2, u);
  auto h = eval_cw_expression(e);
  EXPECT_EQ(h.graph.edge_set(), (std::set<std::pair<std::string, std::string>>{{"a", "b"}}));
  EXPECT_EQ(h.labels.at("a"), 1);
  EXPECT_EQ(h.labels.at("b"), 2);
}

TEST(CwExpression, SameLabelJoinMakesClique) {
  CwExpression e;
  int u = e.unite(e.unite(e.create(1, "a"), e.create(1, "b")), e.create(1, "c"));
  e.join(1, 1, u);
  EXPECT_EQ(eval_cw_expression(e).graph.edge_count(), 3U);
}

TEST(CwExpression, Malformed) {
  CwExpression dup;
  dup.unite(dup.create(1, "a"), dup.create(1, "a"));
  EXPECT_THROW(eval_cw_expression(dup), MalformedExpression);
  CwExpression range;
  range.width = 2;
  range.create(3, "a");
  EXPECT_THROW(eval_cw_expression(range), MalformedExpression);
  CwExpression shared;
  int a = shared.create(1, "a");
  shared.unite(a, a);
  EXPECT_THROW(eval_cw_expression(shared), MalformedExpression);
}

TEST(CwExpression, TextRoundTrip) {
  const std::string text = "(union (relabel 2 1 (join 1 2 (union (vtx 1 a) (vtx 2 b)))) (vtx 1 c))";
  auto e = parse_cw_expression(text);
  EXPECT_EQ(to_string(e), text);
  EXPECT_EQ(eval_cw_expression(e).graph.edge_count(), 1U);
  EXPECT_THROW(parse_cw_expression("(vtx 1 a"), ParseError);
  EXPECT_THROW(parse_cw_expression("(frob 1 a)"), ParseError);
  EXPECT_THROW(parse_cw_expression("(union (vtx 1 a))"), ParseError);
  EXPECT_THROW(parse_cw_expression("(vtx 1 a) (vtx 1 b)"), ParseError);
}

TEST(Lemma1, Bounds) {
  IntervalRep unit;
  unit.lengths.add_exact("u", 1);
  unit.span = Coord(Rational(5, 2));
  EXPECT_EQ(lemma1_bound(unit).bound, 4);
  IntervalRep mixed;
  mixed.lengths.add_exact("h", Rational(1, 2)).add_exact("t", Rational(3, 4));
  mixed.span = Coord(Rational(21, 10));
  auto b = lemma1_bound(mixed);
  EXPECT_EQ(b.a, Rational(1, 4));
  EXPECT_EQ(b.bound, 10);
  IntervalRep whole;
  whole.lengths.add_exact("u", 1);
  whole.span = Coord(3);
  EXPECT_EQ(lemma1_bound(whole).d, Rational(7, 2));
  IntervalRep irr;
  irr.lengths.add_exact("u", 1).add_approx("q", parse_rational("1.41421356237309"));
  irr.span = Coord(5);
  EXPECT_THROW(lemma1_bound(irr), IrrationalLength);
}

TEST(Lemma1, SingleVertex) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1);
  rep.span = Coord(Rational(5, 2));
  rep.add("v", Coord(Rational(3, 2)), 0);
  auto e = build_cw_expression(rep, Lemma1Labels::LeftEnd);
  ASSERT_EQ(e.nodes.size(), 1U);
  EXPECT_EQ(e.nodes[0].kind, CwKind::Create);
  EXPECT_EQ(e.nodes[0].a, 2);
}

TEST(Lemma1, FiveVertexUnitRep) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1);
  rep.span = Coord(Rational(5, 2));
  for (auto [id, l] : std::vector<std::pair<std::string, Rational>>{
           {"a", 0}, {"b", Rational(1, 2)}, {"c", 1}, {"d", Rational(6, 5)}, {"e", Rational(3, 2)}})
    rep.add(id, Coord(l), 0);
  for (auto mode : {Lemma1Labels::Classes, Lemma1Labels::LeftEnd}) {
    auto e = build_cw_expression(rep, mode);
    EXPECT_EQ(eval_cw_expression(e).graph.edge_set(), build_graph(rep).edge_set());
    EXPECT_LE(e.labels_used(), lemma1_bound(rep).bound);
  }
}

// The printed rule joins a new vertex only to labels ceil(l/a)..ceil(r/a), so
// a longer interval starting in an earlier bucket is missed.
TEST(Lemma1, LeftEndLabelsMissLongIntervals) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1).add_exact("w", 2);
  rep.span = Coord(Rational(7, 2));
  rep.add("v1", Coord(Rational(1, 10)), 1).add("v2", Coord(Rational(6, 5)), 0);
  auto left_end = eval_cw_expression(build_cw_expression(rep, Lemma1Labels::LeftEnd)).graph;
  EXPECT_EQ(left_end.edge_count(), 0U);
  EXPECT_EQ(build_graph(rep).edge_count(), 1U);
  EXPECT_EQ(eval_cw_expression(build_cw_expression(rep)).graph.edge_set(), build_graph(rep).edge_set());
}

TEST(Lemma1, RandomRoundTrip) {
  std::mt19937 rng(21);
  for (int t = 0; t < 60; ++t) {
    auto rep = random_rational_rep(rng, 1 + static_cast<int>(rng() % 40));
    auto e = build_cw_expression(rep);
    auto g = eval_cw_expression(e);
    EXPECT_EQ(g.graph.edge_set(), oracle_edges(rep));
    EXPECT_EQ(g.graph.size(), rep.size());
    EXPECT_EQ(to_string(parse_cw_expression(to_string(e))), to_string(e));
    EXPECT_LE(e.labels_used(), lemma1_bound(rep).bound);
  }
}

TEST(LinearExpression, AnyOrderRoundTrip) {
  std::mt19937 rng(8);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + static_cast<int>(rng() % 12);
    Graph g = graphs::from_mask(n, (std::uint64_t{rng()} << 32) | rng());
    std::vector<Graph::Vertex> order(g.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Graph::Vertex>(i);
    std::shuffle(order.begin(), order.end(), rng);
    auto e = detail::linear_expression(g, order);
    EXPECT_EQ(eval_cw_expression(e).graph.edge_set(), g.edge_set());
    int w = detail::linear_width(g, order);
    EXPECT_LE(e.labels_used(), w);
    std::vector<std::uint64_t> rows(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (auto u : g.neighbors(static_cast<Graph::Vertex>(i))) rows[i] |= std::uint64_t{1} << u;
    EXPECT_EQ(detail::linear_width_small(rows, std::vector<int>(order.begin(), order.end())), w);
  }
}

// A path entered in order keeps two classes live; entering from both ends keeps more.
TEST(LinearExpression, WidthDependsOnOrder) {
  Graph p = graphs::path(6);
  EXPECT_EQ(detail::linear_width(p, {0, 1, 2, 3, 4, 5}), 3);
  EXPECT_GT(detail::linear_width(p, {0, 5, 1, 4, 2, 3}), 3);
}

TEST(Lemma1, UnitLengthsStayWithinBound) {
  std::mt19937 rng(4);
  for (int t = 0; t < 40; ++t) {
    IntervalRep rep;
    rep.lengths.add_exact("u", 1);
    rep.span = Coord(Rational(9, 2));
    for (int i = 0; i < 30; ++i) rep.add("v" + std::to_string(i), Coord(Rational(static_cast<int>(rng() % 29), 8)), 0);
    auto e = build_cw_expression(rep);
    EXPECT_EQ(eval_cw_expression(e).graph.edge_set(), oracle_edges(rep));
    EXPECT_LE(e.labels_used(), lemma1_bound(rep).bound);
  }
}

TEST(HardFamily, FirstTerms) {
  auto h = hard_family(parse_rational("1.41421356237309"), 7);
  const auto& t = h.sequence.terms;
  ASSERT_EQ(t.size(), 7U);
  Coord q = Coord::symbol(1);
  std::vector<Coord> want = {Coord(0), Coord(1), Coord(2), Coord(3), Coord(3) - q, Coord(2) - q, Coord(3) - q};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_TRUE(t[i].value == want[i]) << i;
  EXPECT_TRUE(t[4].is_q_element);
  EXPECT_FALSE(t[5].is_q_element);
  EXPECT_EQ(h.rep.size(), 49U);
}

TEST(HardFamily, ValidatesForSmallN) {
  for (int n = 2; n <= 12; ++n) {
    auto h = hard_family(parse_rational("1.41421356237309"), n);
    EXPECT_EQ(h.rep.size(), static_cast<std::size_t>(n * n));
    EXPECT_NO_THROW(validate(h.rep));
    EXPECT_TRUE(*h.rep.span == Coord(3) + Coord::symbol(1));
  }
  EXPECT_THROW(hard_family(Rational(1, 2), 4), ValidationError);
}

TEST(CutDiversity, Examples) {
  auto k4 = graphs::complete(4);
  EXPECT_EQ(cut_diversity(k4, {}), 0U);
  EXPECT_EQ(cut_diversity(k4, {0, 1}), 1U);
  auto p4 = graphs::path(4);
  EXPECT_EQ(cut_diversity(p4, {0, 1}), 2U);
}

TEST(CutDiversity, HardFamilyDiagnostic) {
  auto q = parse_rational("1.41421356237309");
  auto h3 = hard_family(q, 3), h4 = hard_family(q, 4);
  auto c3 = cut_diversity(build_graph(h3.rep), balanced_prefix_cut(h3.rep));
  auto c4 = cut_diversity(build_graph(h4.rep), balanced_prefix_cut(h4.rep));
  RecordProperty("cut3", static_cast<int>(c3));
  RecordProperty("cut4", static_cast<int>(c4));
  EXPECT_GE(c3, 1U);
  EXPECT_GE(c4, 1U);
}

}  // namespace
}  // namespace ivfo::cw
