#include <random>

#include <gtest/gtest.h>

#include "ivfo/kernel.hpp"
#include "ivfo/logic/parser.hpp"

namespace ivfo {
namespace {

logic::RelStructure graph_of(const IntervalRep& rep) { return logic::RelStructure::from_graph(build_graph(rep)); }

IntervalRep stacked(int copies, std::vector<Rational> extra = {}) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1);
  for (int i = 0; i < copies; ++i) rep.add("s" + std::to_string(i), Coord(0), 0);
  for (std::size_t i = 0; i < extra.size(); ++i) rep.add("x" + std::to_string(i), Coord(extra[i]), 0);
  return rep;
}

IntervalRep random_rep(std::mt19937& rng, int n, int which) {
  IntervalRep rep;
  if (which == 0) rep.lengths.add_exact("u", 1);
  if (which == 1) rep.lengths.add_exact("u", 1).add_approx("q", parse_rational("1.41421356237309"));
  if (which == 2) rep.lengths.add_exact("u", 1).add_exact("h", Rational(3, 2));
  std::uniform_int_distribution<int> pos(0, 16), len(0, static_cast<int>(rep.lengths.size()) - 1);
  for (int i = 0; i < n; ++i)
    rep.add("v" + std::to_string(i), Coord(Rational(pos(rng), 4)), static_cast<std::uint32_t>(len(rng)));
  return rep;
}

TEST(WindowStructure, IntegerOffsets) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1);
  rep.add("a", Coord(Rational(1, 10)), 0).add("b", Coord(Rational(12, 10)), 0).add("c", Coord(Rational(55, 10)), 0);
  // Offsets of L^(2) reach 2, so 5.5 lies outside every window.
  auto ws = build_window_structure(rep, Coord(0), 0);
  ASSERT_EQ(ws.structure.size(), 2U);
  EXPECT_EQ(ws.structure.id(0), "a");
  EXPECT_EQ(ws.structure.id(1), "b");
  EXPECT_TRUE(ws.structure.has_label("win:1*u", 1));
  EXPECT_TRUE(ws.structure.has_label("win:0", 0));
  // With offsets up to 16 all three are in, ordered by fractional part.
  auto wide = build_window_structure(rep, Coord(0), 3, Coord(1));
  ASSERT_EQ(wide.structure.size(), 3U);
  EXPECT_EQ(wide.structure.id(2), "c");
  EXPECT_TRUE(wide.structure.has_label("win:5*u", 2));
  EXPECT_TRUE(wide.structure.related("leq", 0, 2));
  EXPECT_FALSE(wide.structure.related("leq", 2, 0));
  EXPECT_NO_THROW(wide.structure.validate());
}

TEST(WindowStructure, TiesBrokenById) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1).add_approx("q", parse_rational("1.41421356237309"));
  rep.add("z", Coord(Rational(3, 10)) + Coord::symbol(1), 1).add("y", Coord(Rational(3, 10)), 0);
  auto ws = build_window_structure(rep, Coord(0), 1);
  ASSERT_EQ(ws.structure.size(), 2U);
  EXPECT_EQ(ws.rho[0], ws.rho[1]);
  EXPECT_EQ(ws.structure.id(0), "y");
  EXPECT_TRUE(ws.structure.has_label("len:q", 1));
}

TEST(WindowStructure, EmptyWhenNothingInWindows) {
  auto ws = build_window_structure(stacked(3), Coord(100), 1);
  EXPECT_EQ(ws.structure.size(), 0U);
  EXPECT_FALSE(find_removable(ws, 1));
}

TEST(FindRemovable, Examples) {
  IntervalRep one;
  one.lengths.add_exact("u", 1);
  one.add("a", Coord(0), 0).add("b", Coord(Rational(5, 2)), 0);
  EXPECT_FALSE(find_removable(build_window_structure(one, Coord(0), 1), 1));
  EXPECT_TRUE(find_removable(build_window_structure(one, Coord(0), 0), 0));

  IntervalRep ten;
  ten.lengths.add_exact("u", 1);
  for (int i = 0; i < 10; ++i) ten.add("v" + std::to_string(i), Coord(Rational(i, 100)), 0);
  auto ws = build_window_structure(ten, Coord(0), 2);
  ASSERT_EQ(ws.structure.size(), 10U);
  auto w = find_removable(ws, 2);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, 9U);  // top of the order is tried first
}

TEST(Kernelize, SparseInputUnchanged) {
  IntervalRep rep;
  rep.lengths.add_exact("u", 1);
  for (int i = 0; i < 10; ++i) rep.add("v" + std::to_string(i), Coord(2 * i), 0);
  auto k = kernelize(rep, 2);
  EXPECT_EQ(k.report.removals, 0U);
  EXPECT_EQ(k.rep.size(), 10U);
  EXPECT_TRUE(k.report.guarantee_met);
}

TEST(Kernelize, StackedCopies) {
  auto rep = stacked(100);
  KernelOptions opt;
  opt.k_work = 8;
  auto k = kernelize(rep, 2, opt);
  EXPECT_GE(k.rep.size(), 2U);
  EXPECT_LE(k.rep.size(), 8U);
  EXPECT_TRUE(k.report.guarantee_met);
  EXPECT_TRUE(ef::equivalent_rank_d(graph_of(rep), graph_of(k.rep), 2));
  EXPECT_TRUE(same_graph(build_graph(k.rep), graphs::complete(static_cast<int>(k.rep.size()))) ||
              build_graph(k.rep).edge_count() == k.rep.size() * (k.rep.size() - 1) / 2);
}

TEST(Kernelize, IsolatedVertexSurvives) {
  auto rep = stacked(100, {5});
  auto k = kernelize(rep, 1);
  bool has_x = false;
  for (const auto& v : k.rep.vertices) has_x |= v.id == "x0";
  EXPECT_TRUE(has_x);
  EXPECT_LT(k.rep.size(), 101U);
  EXPECT_TRUE(ef::equivalent_rank_d(graph_of(rep), graph_of(k.rep), 1));
}

TEST(Kernelize, InducedSubgraphAndSoundness) {
  std::mt19937 rng(21);
  for (int t = 0; t < 60; ++t) {
    int which = t % 3;
    int d = 1 + t % 2;
    auto rep = random_rep(rng, 8 + t % 20, which);
    KernelOptions opt;
    opt.k_work = 2;
    auto k = kernelize(rep, d, opt);
    Graph g = build_graph(rep), h = build_graph(k.rep);
    for (std::size_t a = 0; a < h.size(); ++a)
      for (std::size_t b = a + 1; b < h.size(); ++b)
        EXPECT_EQ(h.has_edge(a, b), g.has_edge(g.at(h.id(a)), g.at(h.id(b))));
    EXPECT_TRUE(ef::equivalent_rank_d(graph_of(rep), graph_of(k.rep), d)) << t;
    // windows that run out of successors after escalating stay within the escalated k
    EXPECT_TRUE(k.report.guarantee_met) << t;
    EXPECT_LE(k.report.density_epsilon, k.report.max_effective_k);
  }
}

TEST(Kernelize, ParanoidModeAgrees) {
  std::mt19937 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto rep = random_rep(rng, 14, t % 3);
    KernelOptions opt;
    opt.k_work = 2;
    opt.paranoid = true;
    auto k = kernelize(rep, 2, opt);
    EXPECT_EQ(k.report.paranoid_rejections, 0U);
  }
}

TEST(Kernelize, RankZeroRemovesFreely) {
  auto k = kernelize(stacked(30), 0, KernelOptions{.k_work = 3});
  EXPECT_LE(k.rep.size(), 3U);
}

TEST(Kernelize, ReportText) {
  auto k = kernelize(stacked(20), 1);
  auto text = k.report.to_text(k.rep.lengths);
  EXPECT_NE(text.find("removals"), std::string::npos);
  EXPECT_NE(text.find("guarantee met"), std::string::npos);
}

TEST(ModelCheck, Examples) {
  using logic::parse_formula;
  EXPECT_TRUE(modelcheck(stacked(3), parse_formula("exists x. x = x")));
  auto two_indep = parse_formula("exists x. exists y. (x != y & !E(x,y))");
  EXPECT_FALSE(modelcheck(stacked(50), two_indep));
  ModelCheckOptions raw;
  raw.use_kernel = false;
  EXPECT_FALSE(modelcheck(stacked(50), two_indep, raw));
  auto isolated = parse_formula("exists x. forall y. (x = y | !E(x,y))");
  EXPECT_TRUE(modelcheck(stacked(50, {10}), isolated));
  EXPECT_TRUE(modelcheck(stacked(50, {10}), isolated, raw));
  EXPECT_THROW(modelcheck(stacked(3), parse_formula("E(x,y)")), UnboundVariableError);
}

}  // namespace
}  // namespace ivfo
