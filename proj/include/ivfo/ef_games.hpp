#pragma once

// Rank-d EF types, d-EF-trees and EF-homomorphisms between them.
//
// A rank-0 type is the atomic type of a tuple (equalities, relation bits and
// labels among its entries, with entry i labeled i). A rank-r type is the
// set of rank-(r-1) types of all one-element extensions. Types live in a
// TypeContext and compare by id; types from one context are comparable
// across structures.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ivfo/errors.hpp"
#include "ivfo/logic/structure.hpp"

namespace ivfo::ef {

using logic::BitRelation;
using logic::RelStructure;
using Element = RelStructure::Element;
using TypeId = std::uint32_t;

inline constexpr std::size_t kMaxTupleLength = 8;

struct EfOptions {
  std::size_t max_types = std::size_t{1} << 24;     // interned types per context
  std::size_t max_tree_leaves = std::size_t{1} << 22;
};

class TypeContext {
 public:
  explicit TypeContext(EfOptions opt = {}) : opt_(opt) {}

  // Relation and label tables of one structure, resolved against this
  // context's name ids. Valid while the structure lives.
  struct View {
    const RelStructure* s = nullptr;
    std::vector<std::pair<std::uint64_t, const BitRelation*>> rels;
    std::vector<std::uint64_t> signature;  // per element: id of its label set
  };

  View view(const RelStructure& s) {
    View v;
    v.s = &s;
    for (const auto& [name, rel] : s.relations()) v.rels.emplace_back(name_id("r:" + name), &rel);
    std::vector<std::vector<std::uint64_t>> held(s.size());
    for (const auto& [name, lab] : s.labels()) {
      std::uint64_t id = name_id("l:" + name);
      for (Element e = 0; e < s.size(); ++e)
        if (lab[e]) held[e].push_back(id);
    }
    v.signature.reserve(s.size());
    for (auto& h : held) {
      std::sort(h.begin(), h.end());
      v.signature.push_back(signatures_.emplace(std::move(h), signatures_.size()).first->second);
    }
    return v;
  }

  TypeId atomic(const View& v, const std::vector<Element>& t) {
    const std::size_t k = t.size();
    if (k > kMaxTupleLength) throw BudgetError("tuples longer than 8 are not supported");
    std::vector<std::uint64_t> code{0, k};
    std::uint64_t eq = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (t[i] == t[j]) eq |= std::uint64_t{1} << (i * k + j);
    code.push_back(eq);
    for (const auto& [id, rel] : v.rels) {
      std::uint64_t m = 0;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (rel->test(t[i], t[j])) m |= std::uint64_t{1} << (i * k + j);
      // Empty relations are left out so that a missing relation and an empty
      // one give the same type.
      if (m) code.insert(code.end(), {id, m});
    }
    code.push_back(~std::uint64_t{0});
    for (std::size_t i = 0; i < k; ++i) code.push_back(v.signature[t[i]]);
    return intern(std::move(code));
  }

  // Type of a set of rank-(r-1) types; `kids` is sorted and deduplicated.
  TypeId set_type(int rank, std::vector<TypeId> kids) {
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    std::vector<std::uint64_t> code{1, static_cast<std::uint64_t>(rank)};
    code.insert(code.end(), kids.begin(), kids.end());
    return intern(std::move(code));
  }

  static constexpr Element kNone = ~Element{0};

  // Rank-d type of `tuple` in the viewed structure, optionally with one
  // element deleted from the domain. `tuple` is restored.
  TypeId rank_type(const View& v, std::vector<Element>& tuple, int d, Element skip = kNone) {
    if (d <= 0) return atomic(v, tuple);
    std::vector<TypeId> kids;
    kids.reserve(v.s->size());
    for (Element e = 0; e < v.s->size(); ++e) {
      if (e == skip) continue;
      tuple.push_back(e);
      kids.push_back(rank_type(v, tuple, d - 1, skip));
      tuple.pop_back();
    }
    return set_type(d, std::move(kids));
  }

  TypeId rank_type(const RelStructure& s, std::vector<Element> tuple, int d) {
    View v = view(s);
    return rank_type(v, tuple, d);
  }

  std::size_t size() const { return codes_.size(); }
  const EfOptions& options() const { return opt_; }

  // Child types of a set type (empty for atomic types).
  std::vector<TypeId> children(TypeId t) const {
    const auto& c = codes_[t];
    if (c[0] != 1) return {};
    return std::vector<TypeId>(c.begin() + 2, c.end());
  }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (auto x : k) h = (h ^ x) * 1099511628211ULL;
      return h;
    }
  };

  std::uint64_t name_id(const std::string& name) {
    auto [it, fresh] = names_.emplace(name, names_.size());
    return it->second;
  }

  TypeId intern(std::vector<std::uint64_t> code) {
    auto it = ids_.find(code);
    if (it != ids_.end()) return it->second;
    if (codes_.size() >= opt_.max_types)
      throw BudgetError("type count exceeds the cap of " + std::to_string(opt_.max_types));
    TypeId id = static_cast<TypeId>(codes_.size());
    codes_.push_back(code);
    ids_.emplace(std::move(code), id);
    return id;
  }

  EfOptions opt_;
  std::unordered_map<std::string, std::uint64_t> names_;
  std::map<std::vector<std::uint64_t>, std::uint64_t> signatures_;
  std::unordered_map<std::vector<std::uint64_t>, TypeId, Hash> ids_;
  std::vector<std::vector<std::uint64_t>> codes_;
};

inline TypeId rank_type(TypeContext& ctx, const RelStructure& s, const std::vector<Element>& tuple, int d) {
  return ctx.rank_type(s, tuple, d);
}

// Rank-d equivalence of two structures (same rank-d theory).
inline bool equivalent_rank_d(const RelStructure& a, const RelStructure& b, int d, EfOptions opt = {}) {
  TypeContext ctx(opt);
  return ctx.rank_type(a, {}, d) == ctx.rank_type(b, {}, d);
}

// d-EF-tree. Node 0 is the root; every root-to-leaf path has d edges. A
// leaf's structure is held as its atomic type in `ctx`.
struct EfTree {
  struct Node {
    int parent = -1;
    Element element = 0;  // element on the edge from the parent
    int depth = 0;
    std::vector<int> children;
    TypeId leaf_type = 0;  // leaves only
  };

  int depth = 0;
  std::vector<Node> nodes;
  std::shared_ptr<TypeContext> ctx;

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [&](const Node& n) {
      return n.depth == depth;
    }));
  }
  bool is_leaf(int u) const { return nodes[u].depth == depth; }

  // Elements on the path from the root to u.
  std::vector<Element> path(int u) const {
    std::vector<Element> out;
    for (; nodes[u].parent >= 0; u = nodes[u].parent) out.push_back(nodes[u].element);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

inline EfTree build_ef_tree(const RelStructure& s, int d, std::shared_ptr<TypeContext> ctx = nullptr) {
  if (!ctx) ctx = std::make_shared<TypeContext>();
  double leaves = 1;
  for (int i = 0; i < d; ++i) leaves *= static_cast<double>(s.size());
  if (leaves > static_cast<double>(ctx->options().max_tree_leaves))
    throw BudgetError("EF tree would have more than " + std::to_string(ctx->options().max_tree_leaves) + " leaves");
  EfTree t;
  t.depth = d;
  t.ctx = ctx;
  auto view = ctx->view(s);
  std::vector<Element> tuple;
  t.nodes.push_back({});
  auto grow = [&](auto&& self, int u) -> void {
    if (t.nodes[u].depth == d) {
      t.nodes[u].leaf_type = ctx->atomic(view, tuple);
      return;
    }
    for (Element e = 0; e < s.size(); ++e) {
      int c = static_cast<int>(t.nodes.size());
      t.nodes.push_back({u, e, t.nodes[u].depth + 1, {}, 0});
      t.nodes[u].children.push_back(c);
      tuple.push_back(e);
      self(self, c);
      tuple.pop_back();
    }
  };
  grow(grow, 0);
  return t;
}

// Deletes, bottom-up, every child whose subtree is isomorphic to that of an
// earlier sibling (leaves: same labeled structure). The result is a subtree
// of the input and EF-equivalent to it.
inline EfTree minimize_ef_tree(const EfTree& t) {
  std::map<std::vector<std::uint64_t>, std::uint64_t> canon_ids;
  std::vector<std::uint64_t> canon(t.nodes.size());
  std::vector<std::vector<int>> kept(t.nodes.size());
  auto visit = [&](auto&& self, int u) -> void {
    const auto& n = t.nodes[u];
    std::vector<std::uint64_t> key;
    if (t.is_leaf(u)) {
      key = {0, n.leaf_type};
    } else {
      std::vector<std::uint64_t> seen;
      for (int c : n.children) {
        self(self, c);
        if (std::find(seen.begin(), seen.end(), canon[c]) != seen.end()) continue;
        seen.push_back(canon[c]);
        kept[u].push_back(c);
      }
      std::sort(seen.begin(), seen.end());
      key = {1};
      key.insert(key.end(), seen.begin(), seen.end());
    }
    canon[u] = canon_ids.emplace(std::move(key), canon_ids.size()).first->second;
  };
  if (!t.nodes.empty()) visit(visit, 0);

  EfTree out;
  out.depth = t.depth;
  out.ctx = t.ctx;
  auto copy = [&](auto&& self, int u, int parent) -> void {
    int id = static_cast<int>(out.nodes.size());
    EfTree::Node n = t.nodes[u];
    n.parent = parent;
    n.children.clear();
    out.nodes.push_back(n);
    if (parent >= 0) out.nodes[parent].children.push_back(id);
    for (int c : kept[u]) self(self, c, id);
  };
  if (!t.nodes.empty()) copy(copy, 0, -1);
  return out;
}

// An EF-homomorphism from `a` to `b` as a node map, if one exists: parents
// map to parents, leaves to leaves, leaf structures agree through labels.
// Both trees must share a TypeContext.
inline std::optional<std::vector<int>> find_ef_homomorphism(const EfTree& a, const EfTree& b) {
  if (a.ctx != b.ctx) throw ValidationError("EF trees built in different type contexts");
  if (a.depth != b.depth || a.nodes.empty() || b.nodes.empty()) return std::nullopt;
  std::map<std::pair<int, int>, bool> memo;
  auto can = [&](auto&& self, int u, int v) -> bool {
    if (a.is_leaf(u)) return a.nodes[u].leaf_type == b.nodes[v].leaf_type;
    auto key = std::make_pair(u, v);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = true;
    for (int c : a.nodes[u].children) {
      bool found = false;
      for (int w : b.nodes[v].children)
        if (self(self, c, w)) {
          found = true;
          break;
        }
      if (!found) {
        ok = false;
        break;
      }
    }
    memo[key] = ok;
    return ok;
  };
  if (!can(can, 0, 0)) return std::nullopt;
  std::vector<int> f(a.nodes.size(), -1);
  auto assign = [&](auto&& self, int u, int v) -> void {
    f[u] = v;
    for (int c : a.nodes[u].children)
      for (int w : b.nodes[v].children)
        if (can(can, c, w)) {
          self(self, c, w);
          break;
        }
  };
  assign(assign, 0, 0);
  return f;
}

// Checks the three homomorphism conditions for a given node map.
inline bool is_ef_homomorphism(const EfTree& a, const EfTree& b, const std::vector<int>& f) {
  if (f.size() != a.nodes.size()) return false;
  for (std::size_t u = 0; u < a.nodes.size(); ++u) {
    int v = f[u];
    if (v < 0 || static_cast<std::size_t>(v) >= b.nodes.size()) return false;
    int p = a.nodes[u].parent;
    if (p >= 0 && b.nodes[v].parent != f[p]) return false;
    if (a.is_leaf(static_cast<int>(u))) {
      if (!b.is_leaf(v) || a.nodes[u].leaf_type != b.nodes[v].leaf_type) return false;
    }
  }
  return true;
}

inline bool ef_equivalent_trees(const EfTree& a, const EfTree& b) {
  return find_ef_homomorphism(a, b) && find_ef_homomorphism(b, a);
}

// Tree-based test: minimized d-EF-trees with EF-homomorphisms both ways.
inline bool equivalent_by_trees(const RelStructure& s1, const RelStructure& s2, int d, EfOptions opt = {}) {
  auto ctx = std::make_shared<TypeContext>(opt);
  auto t1 = minimize_ef_tree(build_ef_tree(s1, d, ctx));
  auto t2 = minimize_ef_tree(build_ef_tree(s2, d, ctx));
  return ef_equivalent_trees(t1, t2);
}

}  // namespace ivfo::ef
