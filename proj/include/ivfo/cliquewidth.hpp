#pragma once

// k-expressions (create, relabel, join, union), the Lemma 1 construction for
// rational (L,d)-interval graphs and the folding family of Lemma 2.
//
// Expressions are stored as a node array in which every child precedes its
// parent, so evaluation, printing and parsing never recurse.

#include <algorithm>
#include <cstdint>
#include <cctype>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ivfo/errors.hpp"
#include "ivfo/graph.hpp"
#include "ivfo/interval.hpp"
#include "ivfo/numerics.hpp"

namespace ivfo::cw {

enum class CwKind { Create, Relabel, Join, Union };

struct CwNode {
  CwKind kind = CwKind::Create;
  int a = 0;  // create: label; relabel: from; join: i
  int b = 0;  // relabel: to; join: j
  std::string vertex;
  int left = -1;  // only child, or left operand of union
  int right = -1;

  bool operator==(const CwNode&) const = default;
};

struct CwExpression {
  std::vector<CwNode> nodes;
  int root = -1;
  int width = 0;  // declared label bound; 0 means "whatever is used"

  int create(int label, std::string vertex) { return push({CwKind::Create, label, 0, std::move(vertex), -1, -1}); }
  int relabel(int from, int to, int child) { return push({CwKind::Relabel, from, to, {}, child, -1}); }
  int join(int i, int j, int child) { return push({CwKind::Join, i, j, {}, child, -1}); }
  int unite(int left, int right) { return push({CwKind::Union, 0, 0, {}, left, right}); }

  // Largest label mentioned anywhere.
  int labels_used() const {
    int m = 0;
    for (const auto& n : nodes) m = std::max({m, n.a, n.b});
    return m;
  }

  std::size_t vertex_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const CwNode& n) { return n.kind == CwKind::Create; }));
  }

  bool operator==(const CwExpression&) const = default;

 private:
  int push(CwNode n) {
    nodes.push_back(std::move(n));
    root = static_cast<int>(nodes.size()) - 1;
    return root;
  }
};

struct CwGraph {
  Graph graph;
  std::map<std::string, int> labels;  // final label per vertex id
};

// Bottom-up evaluation. join(i, i) connects all pairs sharing label i.
inline CwGraph eval_cw_expression(const CwExpression& e) {
  if (e.root < 0 || e.root >= static_cast<int>(e.nodes.size())) throw MalformedExpression("expression has no root");
  const int width = e.width > 0 ? e.width : e.labels_used();
  auto check_label = [&](int l) {
    if (l < 1 || l > width)
      throw MalformedExpression("label " + std::to_string(l) + " outside 1.." + std::to_string(width));
  };
  std::vector<char> used(e.nodes.size(), 0);
  auto take = [&](int child, int parent) {
    if (child < 0 || child >= parent) throw MalformedExpression("child must precede its parent");
    if (used[child]) throw MalformedExpression("subexpression shared between parents");
    used[child] = 1;
  };

  using Buckets = std::map<int, std::vector<Graph::Vertex>>;
  CwGraph out;
  std::vector<Buckets> state(e.nodes.size());
  std::set<std::pair<Graph::Vertex, Graph::Vertex>> edges;
  for (int i = 0; i < static_cast<int>(e.nodes.size()); ++i) {
    const auto& n = e.nodes[i];
    switch (n.kind) {
      case CwKind::Create: {
        check_label(n.a);
        if (out.graph.contains(n.vertex)) throw MalformedExpression("vertex '" + n.vertex + "' created twice");
        state[i][n.a].push_back(out.graph.add_vertex(n.vertex));
        break;
      }
      case CwKind::Relabel: {
        check_label(n.a);
        check_label(n.b);
        take(n.left, i);
        state[i] = std::move(state[n.left]);
        if (n.a != n.b) {
          auto it = state[i].find(n.a);
          if (it != state[i].end()) {
            auto moved = std::move(it->second);
            state[i].erase(it);
            auto& to = state[i][n.b];
            to.insert(to.end(), moved.begin(), moved.end());
          }
        }
        break;
      }
      case CwKind::Join: {
        check_label(n.a);
        check_label(n.b);
        take(n.left, i);
        state[i] = std::move(state[n.left]);
        auto x = state[i].find(n.a), y = state[i].find(n.b);
        if (x == state[i].end() || y == state[i].end()) break;
        for (auto u : x->second)
          for (auto v : y->second)
            if (u != v) edges.insert(std::minmax(u, v));
        break;
      }
      case CwKind::Union: {
        take(n.left, i);
        take(n.right, i);
        state[i] = std::move(state[n.left]);
        for (auto& [label, vs] : state[n.right]) {
          auto& to = state[i][label];
          to.insert(to.end(), vs.begin(), vs.end());
        }
        state[n.right].clear();
        break;
      }
    }
  }
  for (int i = 0; i < static_cast<int>(e.nodes.size()); ++i)
    if (i != e.root && !used[i]) throw MalformedExpression("node " + std::to_string(i) + " is not below the root");
  for (const auto& [u, v] : edges) out.graph.add_edge(u, v);
  for (const auto& [label, vs] : state[e.root])
    for (auto v : vs) out.labels[out.graph.id(v)] = label;
  return out;
}

// `(union A B)`, `(relabel i j A)`, `(join i j A)`, `(vtx l id)`.
inline std::string to_string(const CwExpression& e) {
  if (e.root < 0) return "";
  std::string out;
  // Explicit stack of (node, stage).
  std::vector<std::pair<int, int>> stack{{e.root, 0}};
  while (!stack.empty()) {
    auto& [id, stage] = stack.back();
    const auto& n = e.nodes[id];
    if (stage == 0) {
      switch (n.kind) {
        case CwKind::Create: out += "(vtx " + std::to_string(n.a) + " " + n.vertex + ")"; break;
        case CwKind::Relabel: out += "(relabel " + std::to_string(n.a) + " " + std::to_string(n.b) + " "; break;
        case CwKind::Join: out += "(join " + std::to_string(n.a) + " " + std::to_string(n.b) + " "; break;
        case CwKind::Union: out += "(union "; break;
      }
      if (n.kind == CwKind::Create) {
        stack.pop_back();
        continue;
      }
      stage = 1;
      stack.push_back({n.left, 0});
    } else if (stage == 1 && n.kind == CwKind::Union) {
      stage = 2;
      out += " ";
      stack.push_back({n.right, 0});
    } else {
      out += ")";
      stack.pop_back();
    }
  }
  return out;
}

inline CwExpression parse_cw_expression(std::string_view text) {
  std::size_t i = 0;
  int line = 1, col = 1;
  auto bump = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) bump();
  };
  auto fail = [&](const std::string& why) -> void { throw ParseError(why, line, col); };
  auto word = [&] {
    skip();
    std::size_t s = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' && text[i] != ')')
      bump();
    if (s == i) fail("expected a word");
    return std::string(text.substr(s, i - s));
  };
  auto number = [&] {
    std::string w = word();
    if (!std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        w.size() > 9)
      fail("expected a label, got '" + w + "'");
    return std::stoi(w);
  };

  struct Frame {
    CwNode node;
    std::vector<int> kids;
  };
  CwExpression e;
  std::vector<Frame> stack;
  skip();
  if (i >= text.size()) fail("empty expression");
  while (true) {
    skip();
    if (i >= text.size()) fail("unexpected end of expression");
    if (text[i] == '(') {
      bump();
      std::string head = word();
      Frame f;
      if (head == "vtx") {
        f.node.kind = CwKind::Create;
        f.node.a = number();
        f.node.vertex = word();
      } else if (head == "relabel" || head == "join") {
        f.node.kind = head == "join" ? CwKind::Join : CwKind::Relabel;
        f.node.a = number();
        f.node.b = number();
      } else if (head == "union") {
        f.node.kind = CwKind::Union;
      } else {
        fail("unknown operation '" + head + "'");
      }
      stack.push_back(std::move(f));
    } else if (text[i] == ')') {
      bump();
      if (stack.empty()) fail("unbalanced ')'");
      Frame f = std::move(stack.back());
      stack.pop_back();
      std::size_t want = f.node.kind == CwKind::Create ? 0 : f.node.kind == CwKind::Union ? 2 : 1;
      if (f.kids.size() != want) fail("wrong number of operands");
      if (want >= 1) f.node.left = f.kids[0];
      if (want == 2) f.node.right = f.kids[1];
      e.nodes.push_back(std::move(f.node));
      int id = static_cast<int>(e.nodes.size()) - 1;
      if (stack.empty()) {
        e.root = id;
        skip();
        if (i != text.size()) fail("trailing input");
        return e;
      }
      stack.back().kids.push_back(id);
    } else {
      fail("expected '(' or ')'");
    }
  }
}

// --- Lemma 1 -------------------------------------------------------------

inline Rational rational_gcd(const Rational& x, const Rational& y) {
  using boost::multiprecision::cpp_int;
  cpp_int n = boost::multiprecision::gcd(cpp_int(numerator(x)), cpp_int(numerator(y)));
  cpp_int d = boost::multiprecision::lcm(cpp_int(denominator(x)), cpp_int(denominator(y)));
  return Rational(n, d);
}

inline Rational ceil_div(const Rational& x, const Rational& a) {
  Rational q = x / a;
  using boost::multiprecision::cpp_int;
  cpp_int n = numerator(q), d = denominator(q);
  cpp_int f = n / d;
  if (f * d != n && n > 0) f += 1;
  return Rational(f);
}

inline Rational floor_div(const Rational& x, const Rational& a) {
  Rational q = x / a;
  using boost::multiprecision::cpp_int;
  cpp_int n = numerator(q), d = denominator(q);
  cpp_int f = n / d;
  if (f * d != n && n < 0) f -= 1;
  return Rational(f);
}

struct Lemma1Bound {
  Rational a;      // gcd of the lengths
  Rational d;      // span bound, nudged by a/2 when a multiple of a
  int bound = 0;   // ceil(d/a) + 1
};

inline Rational exact_value(const Coord& c, const LengthSet& lengths) {
  SplitCoord s = split(c, lengths);
  if (!s.irrational.empty()) throw IrrationalLength("coordinate depends on an inexact length");
  return s.exact;
}

inline Lemma1Bound lemma1_bound(const IntervalRep& rep) {
  if (!rep.lengths.all_exact()) throw IrrationalLength("every length must be rational");
  if (!rep.span) throw ValidationError("representation has no span bound");
  Lemma1Bound b;
  b.a = rep.lengths[0].value;
  for (const auto& s : rep.lengths.symbols()) b.a = rational_gcd(b.a, s.value);
  b.d = exact_value(*rep.span, rep.lengths);
  Rational q = b.d / b.a;
  if (denominator(q) == 1) b.d += b.a / 2;
  b.bound = static_cast<int>(ceil_div(b.d, b.a)) + 1;
  return b;
}

namespace detail {

// Vertices enter one at a time in `order`; after each step the vertices that
// agree on everything still to come share a label. The width is the largest
// number of such classes plus the label of the entering vertex.
inline int linear_width(const Graph& g, const std::vector<Graph::Vertex>& order) {
  const std::size_t n = order.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = g.has_edge(order[i], order[j]) ? 1 : 0;
  int peak = n ? 1 : 0;
  for (std::size_t s = 0; s + 1 < n; ++s) {
    std::set<std::vector<char>> classes;
    for (std::size_t i = 0; i <= s; ++i) classes.emplace(adj[i].begin() + static_cast<std::ptrdiff_t>(s + 1), adj[i].end());
    peak = std::max(peak, static_cast<int>(classes.size()) + 1);
  }
  return peak;
}

// Same count with rows packed into 64 bits (n <= 64), for the order search.
inline int linear_width_small(const std::vector<std::uint64_t>& rows, const std::vector<int>& order) {
  const std::size_t n = order.size();
  std::vector<std::uint64_t> perm(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rows[static_cast<std::size_t>(order[i])] >> order[j] & 1U) perm[i] |= std::uint64_t{1} << j;
  int peak = n ? 1 : 0;
  std::vector<std::uint64_t> sig;
  for (std::size_t s = 0; s + 1 < n; ++s) {
    const std::uint64_t mask = ~((std::uint64_t{2} << s) - 1);
    sig.clear();
    for (std::size_t i = 0; i <= s; ++i) sig.push_back(perm[i] & mask);
    std::sort(sig.begin(), sig.end());
    peak = std::max(peak, static_cast<int>(std::unique(sig.begin(), sig.end()) - sig.begin()) + 1);
  }
  return peak;
}

inline CwExpression linear_expression(const Graph& g, const std::vector<Graph::Vertex>& order) {
  CwExpression e;
  const std::size_t n = order.size();
  const int temp = linear_width(g, order);
  struct Class {
    int label;
    Graph::Vertex rep;
  };
  std::vector<Class> classes;
  int cur = -1;
  auto future = [&](Graph::Vertex v, std::size_t s) {
    std::vector<char> sig;
    for (std::size_t t = s + 1; t < n; ++t) sig.push_back(g.has_edge(v, order[t]) ? 1 : 0);
    return sig;
  };
  for (std::size_t s = 0; s < n; ++s) {
    const Graph::Vertex v = order[s];
    if (s == 0) {
      cur = e.create(n == 1 ? 1 : temp, g.id(v));
    } else {
      cur = e.unite(cur, e.create(temp, g.id(v)));
      for (const auto& c : classes)
        if (g.has_edge(c.rep, v)) cur = e.join(temp, c.label, cur);
    }
    std::map<std::vector<char>, int> by_signature;
    std::vector<Class> kept;
    for (const auto& c : classes) {
      auto [it, inserted] = by_signature.emplace(future(c.rep, s), c.label);
      if (inserted)
        kept.push_back(c);
      else
        cur = e.relabel(c.label, it->second, cur);
    }
    classes = std::move(kept);
    if (auto it = by_signature.find(future(v, s)); it != by_signature.end()) {
      cur = e.relabel(temp, it->second, cur);
    } else if (s + 1 < n) {
      std::set<int> used;
      for (const auto& c : classes) used.insert(c.label);
      int l = 1;
      while (used.count(l)) ++l;
      cur = e.relabel(temp, l, cur);
      classes.push_back({l, v});
    }
  }
  e.width = std::max(temp, e.labels_used());
  return e;
}

// Orders by left end, by right end, then a seeded swap search while the
// width is above `target`.
inline std::vector<Graph::Vertex> narrow_order(const Graph& g, const std::vector<Rational>& left,
                                               const std::vector<Rational>& right, int target) {
  const std::size_t n = g.size();
  std::vector<Graph::Vertex> by_left(n), by_right;
  for (std::size_t i = 0; i < n; ++i) by_left[i] = static_cast<Graph::Vertex>(i);
  by_right = by_left;
  std::stable_sort(by_left.begin(), by_left.end(), [&](auto x, auto y) { return left[x] < left[y]; });
  std::stable_sort(by_right.begin(), by_right.end(), [&](auto x, auto y) { return right[x] < right[y]; });
  auto best = by_left;
  int width = linear_width(g, by_left);
  if (int w = linear_width(g, by_right); w < width) {
    best = by_right;
    width = w;
  }
  if (width <= target || n > 64 || n < 3) return best;
  std::vector<std::uint64_t> rows(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto w : g.neighbors(static_cast<Graph::Vertex>(i))) rows[i] |= std::uint64_t{1} << w;
  std::vector<int> cur(best.begin(), best.end());
  int cur_width = width;
  std::mt19937 rng(static_cast<std::uint32_t>(n));
  const long budget = std::max(2000L, 4000000L / static_cast<long>(n * n));
  for (long it = 0; it < budget && width > target; ++it) {
    auto next = cur;
    std::swap(next[rng() % n], next[rng() % n]);
    int w = linear_width_small(rows, next);
    if (w > cur_width) continue;
    cur = std::move(next);
    cur_width = w;
    if (w < width) {
      width = w;
      best.assign(cur.begin(), cur.end());
    }
  }
  return best;
}

}  // namespace detail

enum class Lemma1Labels {
  // Label by (ceil(l/a), ceil(r/a)) classes: exact for every rational rep.
  // Other insertion orders are tried when that exceeds ceil(d/a)+1 labels.
  Classes,
  // The printed rule: label ceil(l/a), join labels ceil(l/a)..ceil(r/a).
  // Only right when every length equals a.
  LeftEnd,
};

inline CwExpression build_cw_expression(const IntervalRep& rep, Lemma1Labels mode = Lemma1Labels::Classes,
                                        const Rational& tol = default_tolerance()) {
  validate(rep, tol);
  const Lemma1Bound bound = lemma1_bound(rep);
  const Rational& a = bound.a;
  const std::size_t n = rep.size();
  CwExpression e;
  if (n == 0) throw ValidationError("empty representation");

  struct Item {
    Rational left, len;
    std::size_t index;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < n; ++i)
    items.push_back({exact_value(rep.vertices[i].left, rep.lengths), rep.lengths[rep.vertices[i].length].value, i});
  std::sort(items.begin(), items.end(), [&](const Item& x, const Item& y) {
    if (x.left != y.left) return x.left < y.left;
    return rep.vertices[x.index].id < rep.vertices[y.index].id;
  });

  // Shift the k-th interval (by left end) right by k*eta. eta is below half of
  // every end point gap and every residue gap, so the graph is unchanged and
  // residues mod a become pairwise distinct and non-zero.
  std::vector<Rational> pts, res{Rational(0)};
  for (const auto& it : items) {
    pts.push_back(it.left);
    pts.push_back(it.left + it.len);
    res.push_back(it.left - floor_div(it.left, a) * a);
  }
  auto min_gap = [](std::vector<Rational> v, Rational cap) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i + 1] != v[i]) cap = std::min(cap, Rational(v[i + 1] - v[i]));
    return cap;
  };
  Rational g = std::min(min_gap(pts, a), min_gap(res, a));
  // Circular gap between the largest residue and a.
  g = std::min(g, Rational(a - *std::max_element(res.begin(), res.end())));
  Rational eta = g / (2 * static_cast<long long>(n) + 2);

  struct Placed {
    long long m;   // left = m*a + b, 0 < b < a
    long long units;
    Rational b;
    std::size_t index;
  };
  std::vector<Placed> placed;
  for (std::size_t k = 0; k < items.size(); ++k) {
    Rational l = items[k].left + eta * static_cast<long long>(k + 1);
    Rational m = floor_div(l, a);
    placed.push_back({static_cast<long long>(m), static_cast<long long>(items[k].len / a), l - m * a, items[k].index});
  }
  std::sort(placed.begin(), placed.end(), [](const Placed& x, const Placed& y) { return x.b < y.b; });

  if (mode == Lemma1Labels::LeftEnd) {
    // Literal rule: label ceil(l/a), new vertex enters with K.
    const int temp = bound.bound;
    std::set<long long> present;
    int cur = -1;
    for (const auto& p : placed) {
      const std::string& id = rep.vertices[p.index].id;
      const long long lo = p.m + 1, hi = p.m + p.units + 1;  // ceil(l/a), ceil(r/a)
      if (cur < 0) {
        cur = e.create(static_cast<int>(lo), id);
      } else {
        cur = e.unite(cur, e.create(temp, id));
        for (long long c : present)
          if (c >= lo && c <= hi) cur = e.join(temp, static_cast<int>(c), cur);
        cur = e.relabel(temp, static_cast<int>(lo), cur);
      }
      present.insert(lo);
    }
    e.width = std::max(temp, e.labels_used());
    return e;
  }

  // With l = m*a + b, an earlier vertex j (b_j < b_i) meets v_i iff
  //   m_j <= m_i + units_i  and  m_j + units_j >= m_i + 1,
  // and when b_j > b_i iff
  //   m_j <= m_i + units_i - 1  and  m_j + units_j >= m_i.
  // So j only matters through (m_j, m_j + units_j). After every step, vertices
  // that agree on all vertices still to come share a label; the new vertex
  // enters with the label after the live ones. Both sweep directions are
  // tried and the narrower expression is kept.
  using Key = std::pair<long long, long long>;
  auto key_of = [](const Placed& p) { return Key(p.m, p.m + p.units); };
  bool descending = false;
  auto meets = [&](const Key& k, const Placed& p) {
    const long long shift = descending ? 1 : 0;
    return k.first <= p.m + p.units - shift && k.second >= p.m + 1 - shift;
  };

  auto signature = [&](const Key& k, std::size_t from) {
    std::vector<char> sig;
    for (std::size_t t = from; t < placed.size(); ++t) sig.push_back(meets(k, placed[t]) ? 1 : 0);
    return sig;
  };
  auto run = [&](int temp, CwExpression& out) {
    std::map<Key, int> label;  // live keys
    int peak = 0, cur = -1;
    auto fresh = [&] {
      std::set<int> used;
      for (const auto& [k, l] : label) used.insert(l);
      int l = 1;
      while (used.count(l) || l == temp) ++l;
      return l;
    };
    for (std::size_t s = 0; s < placed.size(); ++s) {
      const auto& p = placed[s];
      const std::string& id = rep.vertices[p.index].id;
      const Key key = key_of(p);
      // Labels of the older vertices, grouped by what they see from s + 1 on.
      std::map<std::vector<char>, int> by_signature;
      if (cur < 0) {
        label[key] = fresh();
        cur = out.create(label[key], id);
      } else {
        cur = out.unite(cur, out.create(temp, id));
        std::set<int> joined;
        for (const auto& [k, l] : label)
          if (meets(k, p) && joined.insert(l).second) cur = out.join(temp, l, cur);
        // Merge older labels that now agree, then file the new vertex.
        for (auto& [k, l] : label) {
          auto [pos, inserted] = by_signature.emplace(signature(k, s + 1), l);
          if (!inserted && pos->second != l) {
            int from = l;
            cur = out.relabel(from, pos->second, cur);
            for (auto& [k2, l2] : label)
              if (l2 == from) l2 = pos->second;
          }
        }
        auto it = label.find(key);
        auto match = by_signature.find(signature(key, s + 1));
        int target = it != label.end() ? it->second : match != by_signature.end() ? match->second : fresh();
        cur = out.relabel(temp, target, cur);
        label[key] = target;
      }
      std::set<int> live;
      for (const auto& [k, l] : label) live.insert(l);
      peak = std::max(peak, static_cast<int>(live.size()));
    }
    return peak;
  };
  CwExpression probe;
  const int up = run(std::numeric_limits<int>::max(), probe);
  std::reverse(placed.begin(), placed.end());
  descending = true;
  const int down = run(std::numeric_limits<int>::max(), probe);
  if (up <= down) {
    std::reverse(placed.begin(), placed.end());
    descending = false;
  }
  const int peak = std::min(up, down);
  // Live labels stay within 1..peak once the temporary label is peak + 1.
  const int temp = placed.size() == 1 ? 0 : peak + 1;
  run(temp, e);
  e.width = std::max(temp, e.labels_used());
  if (e.labels_used() <= bound.bound) return e;
  std::vector<Rational> lefts(n), rights(n);
  for (const auto& it : items) {
    lefts[it.index] = it.left;
    rights[it.index] = it.left + it.len;
  }
  const Graph h = build_graph(rep, tol);
  auto other = detail::linear_expression(h, detail::narrow_order(h, lefts, rights, bound.bound));
  return other.labels_used() < e.labels_used() ? other : e;
}

// --- Lemma 2 -------------------------------------------------------------

struct FoldingTerm {
  Coord value;
  bool is_q_element = false;
};

struct FoldingSequence {
  LengthSet lengths;  // "u" = 1 exact, "q" approximate
  Coord d;            // q + 3
  std::vector<FoldingTerm> terms;
};

// Exact coefficient test: x equals c + k*q.
inline bool coord_is(const Coord& x, const Rational& c, const Rational& k) {
  return x.constant() == c && x.coeff(1) == k && x.coeff(0) == 0;
}

inline FoldingSequence folding_sequence(const Rational& q_value, int n, const Rational& tol = default_tolerance()) {
  if (q_value <= 1) throw ValidationError("q must exceed 1");
  if (n < 2) throw ValidationError("the sequence needs n >= 2");
  FoldingSequence s;
  s.lengths.add_exact("u", 1).add_approx("q", q_value);
  CoordOrder order(s.lengths, tol);
  const Coord q = Coord::symbol(1);
  s.d = q + Coord(3);
  const Coord d_minus_2 = s.d - Coord(2);
  s.terms.push_back({Coord(0), false});
  s.terms.push_back({Coord(1), false});
  while (static_cast<int>(s.terms.size()) < n) {
    const Coord& x = s.terms[s.terms.size() - 2].value;
    const Coord& y = s.terms.back().value;
    Coord diff = x - y;
    if ((coord_is(diff, 1, 0) || coord_is(diff, -1, 0)) && order.less(y, d_minus_2)) {
      s.terms.push_back({y + Coord(1), false});
    } else if (coord_is(diff, 0, 1)) {
      s.terms.push_back({y - Coord(1), false});
    } else {
      s.terms.push_back({y - q, true});
    }
  }
  return s;
}

struct HardFamily {
  IntervalRep rep;
  FoldingSequence sequence;
  Rational delta;
};

// n^2 intervals: level t of block i is [a_i + t*delta, a_i + t*delta + len)
// with len = q for q-elements and 1 otherwise. Ids "w<i>_<t>" (1-based i).
inline HardFamily hard_family(const Rational& q_value, int n, const Rational& tol = default_tolerance()) {
  HardFamily h;
  h.sequence = folding_sequence(q_value, n, tol);
  const auto& L = h.sequence.lengths;
  CoordOrder order(L, tol);
  // Smallest element of L^(n) in (0, d - q) = (0, 3).
  std::optional<Coord> smallest;
  for (const auto& e : enumerate_Lk(L, n, tol)) {
    if (!order.less(Coord(0), e.value) || !order.less(e.value, Coord(3))) continue;
    if (!smallest || order.less(e.value, *smallest)) smallest = e.value;
  }
  Rational m = approx_value(*smallest, L) - tol;
  if (m <= 0) throw PrecisionError("smallest element of L^(n) is within tolerance of 0");
  h.delta = m / (2 * static_cast<long long>(n));
  h.rep.lengths = L;
  h.rep.span = h.sequence.d;
  for (int i = 0; i < n; ++i) {
    const auto& t = h.sequence.terms[i];
    for (int lvl = 0; lvl < n; ++lvl)
      h.rep.add("w" + std::to_string(i + 1) + "_" + std::to_string(lvl), t.value + Coord(h.delta * lvl),
                t.is_q_element ? 1 : 0);
  }
  validate(h.rep, tol);
  return h;
}

// Number of distinct neighbourhoods outside `part` among vertices of `part`.
inline std::size_t cut_diversity(const Graph& g, const std::vector<Graph::Vertex>& part) {
  std::vector<char> in(g.size(), 0);
  for (auto v : part) in[v] = 1;
  std::set<std::vector<Graph::Vertex>> seen;
  for (auto v : part) {
    std::vector<Graph::Vertex> nb;
    for (auto w : g.neighbors(v))
      if (!in[w]) nb.push_back(w);
    seen.insert(std::move(nb));
  }
  return seen.size();
}

// First half of the vertices by left end (ties by id), as graph vertices of
// build_graph(rep).
inline std::vector<Graph::Vertex> balanced_prefix_cut(const IntervalRep& rep, const Rational& tol = default_tolerance()) {
  CoordOrder order(rep.lengths, tol);
  auto sorted = order_by_left(rep, order);
  std::vector<Graph::Vertex> part;
  for (std::size_t k = 0; k < sorted.size() / 2; ++k) part.push_back(static_cast<Graph::Vertex>(sorted[k]));
  return part;
}

}  // namespace ivfo::cw
