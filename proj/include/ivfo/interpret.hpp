#pragma once

// Simple interpretations (vertex formula, edge formula) and the two gadgets
// that embed an arbitrary graph into interval graphs: one over lengths dense
// near 1 read by first-order formulas, one over unit lengths read with the
// transitive closure of a first-order relation.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ivfo/errors.hpp"
#include "ivfo/graph.hpp"
#include "ivfo/interval.hpp"
#include "ivfo/logic/evaluate.hpp"
#include "ivfo/logic/formula.hpp"
#include "ivfo/logic/structure.hpp"
#include "ivfo/numerics.hpp"

namespace ivfo {

struct DerivedRelation {
  std::string name;
  logic::Formula base;  // free in x, y
  std::string x = "x", y = "y";
  logic::Closure closure = logic::Closure::None;
};

struct Interpretation {
  logic::Formula vertex_formula;  // free in x
  logic::Formula edge_formula;    // free in x, y; symmetric
  std::vector<DerivedRelation> derived_relations;
  std::string x = "x", y = "y";
};

struct GadgetOutput {
  IntervalRep rep;
  Interpretation interp;
  std::map<std::string, std::string> canonical_map;  // source id -> gadget id
};

// Materializes the derived relations on H, then keeps the vertices passing
// the vertex formula and the pairs passing the edge formula.
inline Graph apply_interpretation(const Graph& h, const Interpretation& interp, logic::EvalOptions opt = {}) {
  auto s = logic::RelStructure::from_graph(h);
  for (const auto& d : interp.derived_relations) s = logic::with_derived_relation(s, d.name, d.base, d.x, d.y, d.closure, opt);
  logic::Evaluator ev(s, opt);
  std::vector<Graph::Vertex> kept;
  for (Graph::Vertex v = 0; v < h.size(); ++v)
    if (ev.evaluate(interp.vertex_formula, {{interp.x, v}})) kept.push_back(v);
  Graph out;
  for (auto v : kept) out.add_vertex(h.id(v));
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j)
      if (ev.evaluate(interp.edge_formula, {{interp.x, kept[i]}, {interp.y, kept[j]}}))
        out.add_edge(static_cast<Graph::Vertex>(i), static_cast<Graph::Vertex>(j));
  return out;
}

struct GadgetCheck {
  bool ok = true;
  std::string diff;  // one line per mismatch
  explicit operator bool() const { return ok; }
};

// Compares the interpreted graph with G carried through the canonical map.
inline GadgetCheck check_gadget(const Graph& g, const GadgetOutput& out, logic::EvalOptions opt = {}) {
  GadgetCheck r;
  std::ostringstream diff;
  auto fail = [&](const std::string& line) {
    r.ok = false;
    diff << line << '\n';
  };
  Graph got;
  try {
    got = apply_interpretation(build_graph(out.rep), out.interp, opt);
  } catch (const Error& e) {
    fail(std::string("evaluation failed: ") + e.what());
    r.diff = diff.str();
    return r;
  }
  std::set<std::string> want_v;
  std::set<std::pair<std::string, std::string>> want_e;
  for (const auto& id : g.ids()) {
    auto it = out.canonical_map.find(id);
    if (it == out.canonical_map.end()) {
      fail("vertex " + id + " has no canonical image");
      continue;
    }
    want_v.insert(it->second);
  }
  if (r.ok)
    for (const auto& [a, b] : g.edge_set()) want_e.insert(std::minmax(out.canonical_map.at(a), out.canonical_map.at(b)));
  std::set<std::string> got_v(got.ids().begin(), got.ids().end());
  for (const auto& v : want_v)
    if (!got_v.count(v)) fail("missing vertex " + v);
  for (const auto& v : got_v)
    if (!want_v.count(v)) fail("extra vertex " + v);
  auto got_e = got.edge_set();
  for (const auto& [a, b] : want_e)
    if (!got_e.count({a, b})) fail("missing edge " + a + " " + b);
  for (const auto& [a, b] : got_e)
    if (!want_e.count({a, b})) fail("extra edge " + a + " " + b);
  r.diff = diff.str();
  return r;
}

inline bool verify_gadget(const Graph& g, const GadgetOutput& out) { return check_gadget(g, out).ok; }

namespace gadget {

// Closed interval [left, left + length] before conversion.
struct ClosedInterval {
  std::string id;
  Rational left, length;
};

// Extends every right end by eta, which turns touching closed intervals into
// overlapping half-open ones when all other end point gaps exceed eta, then
// rescales by 1/(1+eta) so that length-1 intervals keep length 1.
inline IntervalRep to_half_open(const std::vector<ClosedInterval>& closed, const Rational& eta,
                                const std::string& unit_name = "u") {
  IntervalRep rep;
  const Rational scale = Rational(1) / (1 + eta);
  std::map<Rational, std::uint32_t> index;
  rep.lengths.add_exact(unit_name, 1);
  index.emplace(Rational(1), 0);
  Rational right(0);
  for (const auto& c : closed) {
    Rational len = (c.length + eta) * scale;
    auto it = index.find(len);
    if (it == index.end()) {
      auto k = static_cast<std::uint32_t>(rep.lengths.size());
      rep.lengths.add_exact("l" + std::to_string(k), len);
      it = index.emplace(len, k).first;
    }
    Rational left = c.left * scale;
    rep.add(c.id, Coord(left), it->second);
    right = std::max(right, Rational(left + len));
  }
  rep.span = Coord(right);
  return rep;
}

// Fresh bound-variable names for the formula library.
class Names {
 public:
  std::string operator()(const std::string& base) { return base + "_" + std::to_string(next_++); }

 private:
  int next_ = 0;
};

namespace fo = logic::fo;
using logic::Formula;

inline Formula twin(const std::string& x, const std::string& y, Names& fresh) {
  auto z = fresh("z");
  return fo::conj(fo::neq(x, y), fo::forall_except(z, {x, y}, fo::iff(fo::edge(x, z), fo::edge(y, z))));
}

}  // namespace gadget

// Formula library of the first-order gadget.
struct FoLibrary {
  enum class Domination {
    Open,    // y and all its neighbours are neighbours of x, read literally
    Closed,  // x itself is allowed among the neighbours of y
  };
  Domination domination = Domination::Closed;
  bool require_edge_vertex = true;  // z must meet some pair of mates

  using Formula = logic::Formula;

  Formula anchor(const std::string& x, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto y = fresh("y"), z = fresh("z");
    return fo::exists(y, fo::conj({fo::neq(x, y), fo::edge(x, y),
                                   fo::forall_except(z, {x, y}, fo::iff(fo::edge(x, z), fo::edge(y, z)))}));
  }
  Formula adist(const std::string& x, int c, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto y = fresh("a");
    return fo::exists(y, fo::conj(anchor(y, fresh), fo::dist_eq(x, y, c)));
  }
  Formula mu(const std::string& x, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto y = fresh("y");
    return fo::conj({fo::neg(anchor(x, fresh)), adist(x, 1, fresh),
                     fo::exists(y, fo::conj(adist(y, 2, fresh), fo::neg(fo::edge(x, y))))});
  }
  Formula mates(const std::string& x, const std::string& x2, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto y = fresh("y");
    return fo::conj({mu(x, fresh), fo::disj(adist(x2, 3, fresh), adist(x2, 4, fresh)),
                     fo::exists_unique(y, fo::conj({adist(y, 2, fresh), fo::neg(fo::edge(x, y)), fo::neg(fo::edge(x2, y))}))});
  }
  Formula domin(const std::string& x, const std::string& y, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto z = fresh("z");
    Formula inside = domination == Domination::Open ? fo::edge(x, z) : fo::disj(fo::edge(x, z), fo::eq(z, x));
    return fo::conj({fo::neq(x, y), fo::edge(x, y), fo::forall(z, fo::implies(fo::edge(y, z), inside))});
  }
  // z meets x and no interval that x dominates.
  Formula first_touch(const std::string& x, const std::string& z, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto t = fresh("t");
    return fo::conj(fo::edge(x, z), fo::forall(t, fo::implies(domin(x, t, fresh), fo::neg(fo::edge(t, z)))));
  }
  Formula nu_half(const std::string& x, const std::string& y, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto y2 = fresh("yp"), z = fresh("z");
    Formula body = fo::conj({mates(y, y2, fresh), first_touch(x, z, fresh), first_touch(y2, z, fresh)});
    if (require_edge_vertex) {
      auto u = fresh("u"), u2 = fresh("up");
      body = fo::conj(body, fo::exists({u, u2}, fo::conj({mates(u, u2, fresh), fo::edge(u, z), fo::edge(u2, z)})));
    }
    return fo::conj({mu(x, fresh), mu(y, fresh), fo::neq(x, y), fo::exists({y2, z}, body)});
  }
  Interpretation interpretation() const {
    gadget::Names fresh;
    Interpretation in;
    in.vertex_formula = mu("x", fresh);
    in.edge_formula = logic::fo::disj(nu_half("x", "y", fresh), nu_half("y", "x", fresh));
    return in;
  }
};

inline std::string fo_vertex_id(int i, int j) { return "t_" + std::to_string(i) + "_" + std::to_string(j); }

// Graph G on v_1..v_n (in vertex order) becomes an interval graph with
// 3n + 5 + |E(G)| vertices whose lengths lie in [1, 1 + epsilon].
inline GadgetOutput gadget_fo(const Graph& g, const Rational& epsilon, const FoLibrary& lib = {}) {
  const long long n = static_cast<long long>(g.size());
  if (n < 2) throw TooSmall("the first-order gadget needs at least 2 vertices");
  if (epsilon <= 0) throw ValidationError("epsilon must be positive");
  const Rational delta = epsilon / (n + 1);
  std::vector<gadget::ClosedInterval> closed;
  for (int i = 1; i <= 3; ++i)
    for (long long j = 0; j <= n; ++j)
      closed.push_back({fo_vertex_id(i, static_cast<int>(j)), Rational(i - 1) + (i + j) * delta, Rational(1)});
  closed.push_back({"a", Rational(0), Rational(1)});
  closed.push_back({"b", (n + 2) * delta, Rational(1)});
  for (const auto& [u, w] : g.edge_set()) {
    long long j = g.at(u) + 1, k = g.at(w) + 1;
    if (j > k) std::swap(j, k);
    Rational left = 1 + (1 + j) * delta, right = 2 + (k + 3) * delta;
    closed.push_back({"e_" + std::to_string(j) + "_" + std::to_string(k), left, right - left});
  }
  GadgetOutput out;
  out.rep = gadget::to_half_open(closed, delta / (10 * n));
  out.interp = lib.interpretation();
  for (Graph::Vertex v = 0; v < g.size(); ++v) out.canonical_map[g.id(v)] = fo_vertex_id(1, static_cast<int>(v) + 1);
  return out;
}

// Formula library of the unit-interval gadget. mates* is a derived relation
// (transitive, symmetric closure of mates) read by the edge formula.
struct MsoLibrary {
  int anchor_degree = 3;  // degree of the anchors at [0,1]: two twins and [1/2,3/2]
  // "exists! y exists! z" read as one unique pair (y, z); false nests two
  // exists-unique quantifiers instead.
  bool unique_pair = true;
  std::string closure_name = "mates_star";

  using Formula = logic::Formula;

  Formula anchor(const std::string& x, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto y = fresh("y"), z = fresh("z");
    return fo::exists(y, fo::conj(gadget::twin(x, y, fresh),
                                  fo::exists(z, fo::conj({fo::neq(z, y), fo::edge(z, y), gadget::twin(x, z, fresh)}))));
  }
  Formula noanch(const std::string& x, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto z = fresh("z");
    return fo::forall(z, fo::implies(anchor(z, fresh), fo::neg(fo::edge(x, z))));
  }
  Formula mu(const std::string& x, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto t = fresh("t");
    return fo::conj(noanch(x, fresh),
                    fo::exists(t, fo::conj({anchor(t, fresh), fo::deg_eq(t, anchor_degree), fo::dist_eq(t, x, 2)})));
  }
  Formula mates(const std::string& x, const std::string& x2, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto t = fresh("t"), y = fresh("y"), z = fresh("z");
    // The conjuncts on y alone sit outside the inner exists-unique; for a y
    // failing them the inner count is zero either way.
    Formula on_y = fo::conj({fo::edge(y, t), fo::dist_eq(x, y, 2), fo::dist_gt(x2, y, 2)});
    Formula on_z = fo::conj({fo::edge(z, t), fo::neg(fo::edge(y, z)), fo::dist_eq(x2, z, 2), fo::dist_gt(x, z, 2)});
    Formula window;
    if (unique_pair) {
      auto y2 = fresh("y"), z2 = fresh("z");
      Formula on_y2 = logic::rename_free(on_y, y, y2);
      Formula on_z2 = logic::rename_free(logic::rename_free(on_z, y, y2), z, z2);
      Formula only = fo::forall(y2, fo::implies(on_y2, fo::forall(z2, fo::implies(on_z2, fo::conj(fo::eq(y2, y), fo::eq(z2, z))))));
      window = fo::exists(y, fo::conj(on_y, fo::exists(z, fo::conj(on_z, only))));
    } else {
      window = fo::exists_unique(y, fo::conj(on_y, fo::exists_unique(z, on_z)));
    }
    return fo::conj({noanch(x, fresh), noanch(x2, fresh), fo::dist_eq(x, x2, 4), fo::exists(t, fo::conj(anchor(t, fresh), window))});
  }
  Formula nu(const std::string& x, const std::string& y, gadget::Names& fresh) const {
    namespace fo = logic::fo;
    auto x1 = fresh("x"), x2 = fresh("x"), y1 = fresh("y"), y2 = fresh("y");
    // Quantifiers pushed inward: x2 and y2 only constrain x1 and y1.
    Formula has_twin_y = fo::exists(y2, gadget::twin(y1, y2, fresh));
    Formula pick_y = fo::exists(y1, fo::conj({fo::edge(x1, y1), fo::rel(closure_name, y, y1), has_twin_y}));
    Formula pick_x = fo::exists(x1, fo::conj({fo::rel(closure_name, x, x1), fo::exists(x2, gadget::twin(x1, x2, fresh)), pick_y}));
    return fo::conj({mu(x, fresh), mu(y, fresh), fo::neq(x, y), pick_x});
  }
  Interpretation interpretation() const {
    gadget::Names fresh;
    Interpretation in;
    in.vertex_formula = mu("x", fresh);
    in.edge_formula = nu("x", "y", fresh);
    in.derived_relations.push_back({closure_name, mates("x", "y", fresh), "x", "y", logic::Closure::TransitiveSymmetric});
    return in;
  }
};

inline std::string mso_grid_id(long long block, long long level) {
  return "g_" + std::to_string(block) + "_" + std::to_string(level);
}

// Graph G on v_0..v_{n-1} (in vertex order, levels 0..n-1) becomes a unit
// interval graph on n(3m+1) + 3m+3 + 2m + 1 vertices (m >= 1). Edges are placed in
// lexicographic order of their (smaller id, larger id). An edgeless G still
// gets one (empty) edge block, since otherwise W_0 is a set of twins.
inline GadgetOutput gadget_mso(const Graph& g, const MsoLibrary& lib = {}) {
  const long long n = static_cast<long long>(g.size());
  if (n < 4) throw TooSmall("the unit-interval gadget needs at least 4 vertices");
  const auto edges = g.edge_set();
  const long long m = static_cast<long long>(edges.size());
  const long long blocks = std::max(m, 1LL);
  const Rational delta(1, 10 * n), step = 1 + delta;
  std::vector<gadget::ClosedInterval> closed;
  for (long long k = 1; k <= 3 * blocks + 1; ++k)
    for (long long i = 0; i < n; ++i) closed.push_back({mso_grid_id(k, i), k * step + i * delta, Rational(1)});
  for (long long i = 0; i <= blocks; ++i) {
    Rational left = i == 0 ? Rational(0) : (3 * i - Rational(1, 2)) * step;
    for (int c = 0; c < 3; ++c) closed.push_back({"A_" + std::to_string(i) + "_" + std::to_string(c), left, Rational(1)});
  }
  long long ell = 0;
  for (const auto& [u, w] : edges) {
    ++ell;
    for (long long level : {static_cast<long long>(g.at(u)), static_cast<long long>(g.at(w))})
      closed.push_back({"p_" + std::to_string(ell) + "_" + std::to_string(level), (3 * ell + 1) * step + level * delta, Rational(1)});
  }
  closed.push_back({"x", Rational(1, 2), Rational(1)});
  GadgetOutput out;
  out.rep = gadget::to_half_open(closed, delta / (10 * n));
  out.interp = lib.interpretation();
  for (Graph::Vertex v = 0; v < g.size(); ++v) out.canonical_map[g.id(v)] = mso_grid_id(1, v);
  return out;
}

}  // namespace ivfo
