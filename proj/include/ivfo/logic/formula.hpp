#pragma once

// FO / MSO1 formula trees over a graph signature (`edge`), auxiliary binary
// relations and unary labels. Nodes are immutable and shared.

#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ivfo/errors.hpp"

namespace ivfo::logic {

enum class Op {
  True,
  False,
  Edge,         // vars[0], vars[1]
  Eq,           // vars[0], vars[1]
  Rel,          // name(vars[0], vars[1])
  Label,        // name(vars[0])
  In,           // vars[0] in vars[1] (set variable)
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,       // vars[0], kids[0]
  Forall,
  ExistsSet,
  ForallSet,
  ExistsUnique,
  DistEq,       // dist(vars[0], vars[1]) = value
  DistLe,       // dist(vars[0], vars[1]) <= value
  DegEq,        // deg(vars[0]) = value
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string name;
  std::vector<std::string> vars;
  std::vector<Formula> kids;
  int value = 0;
};

inline bool is_set_variable(const std::string& v) { return !v.empty() && std::isupper(static_cast<unsigned char>(v[0])); }

inline Formula make(Op op, std::vector<std::string> vars = {}, std::vector<Formula> kids = {}, std::string name = {},
                    int value = 0) {
  return std::make_shared<const Node>(Node{op, std::move(name), std::move(vars), std::move(kids), value});
}

// Combinators. Names follow the textual syntax.
namespace fo {

inline Formula top() { return make(Op::True); }
inline Formula bottom() { return make(Op::False); }
inline Formula edge(const std::string& x, const std::string& y) { return make(Op::Edge, {x, y}); }
inline Formula eq(const std::string& x, const std::string& y) { return make(Op::Eq, {x, y}); }
inline Formula rel(const std::string& name, const std::string& x, const std::string& y) {
  return make(Op::Rel, {x, y}, {}, name);
}
inline Formula label(const std::string& name, const std::string& x) { return make(Op::Label, {x}, {}, name); }
inline Formula in(const std::string& x, const std::string& set) { return make(Op::In, {x, set}); }
inline Formula neg(Formula f) { return make(Op::Not, {}, {std::move(f)}); }
inline Formula neq(const std::string& x, const std::string& y) { return neg(eq(x, y)); }
inline Formula conj(Formula a, Formula b) { return make(Op::And, {}, {std::move(a), std::move(b)}); }
inline Formula disj(Formula a, Formula b) { return make(Op::Or, {}, {std::move(a), std::move(b)}); }
inline Formula implies(Formula a, Formula b) { return make(Op::Implies, {}, {std::move(a), std::move(b)}); }
inline Formula iff(Formula a, Formula b) { return make(Op::Iff, {}, {std::move(a), std::move(b)}); }

inline Formula conj(std::initializer_list<Formula> fs) {
  if (fs.size() == 0) return top();
  auto it = fs.begin();
  Formula acc = *it++;
  for (; it != fs.end(); ++it) acc = conj(acc, *it);
  return acc;
}

inline Formula disj(std::initializer_list<Formula> fs) {
  if (fs.size() == 0) return bottom();
  auto it = fs.begin();
  Formula acc = *it++;
  for (; it != fs.end(); ++it) acc = disj(acc, *it);
  return acc;
}

inline Formula exists(const std::string& x, Formula f) { return make(Op::Exists, {x}, {std::move(f)}); }
inline Formula forall(const std::string& x, Formula f) { return make(Op::Forall, {x}, {std::move(f)}); }
inline Formula exists(std::initializer_list<std::string> xs, Formula f) {
  std::vector<std::string> v(xs);
  for (auto it = v.rbegin(); it != v.rend(); ++it) f = exists(*it, std::move(f));
  return f;
}
inline Formula forall(std::initializer_list<std::string> xs, Formula f) {
  std::vector<std::string> v(xs);
  for (auto it = v.rbegin(); it != v.rend(); ++it) f = forall(*it, std::move(f));
  return f;
}
// forall z != a, b, ... . f
inline Formula forall_except(const std::string& z, std::initializer_list<std::string> others, Formula f) {
  Formula guard = top();
  bool first = true;
  for (const auto& o : others) {
    guard = first ? neq(z, o) : conj(guard, neq(z, o));
    first = false;
  }
  return forall(z, implies(guard, std::move(f)));
}
inline Formula exists_unique(const std::string& x, Formula f) { return make(Op::ExistsUnique, {x}, {std::move(f)}); }
inline Formula exists_set(const std::string& x, Formula f) { return make(Op::ExistsSet, {x}, {std::move(f)}); }
inline Formula forall_set(const std::string& x, Formula f) { return make(Op::ForallSet, {x}, {std::move(f)}); }
inline Formula dist_eq(const std::string& x, const std::string& y, int c) { return make(Op::DistEq, {x, y}, {}, {}, c); }
inline Formula dist_le(const std::string& x, const std::string& y, int c) { return make(Op::DistLe, {x, y}, {}, {}, c); }
inline Formula dist_gt(const std::string& x, const std::string& y, int c) { return neg(dist_le(x, y, c)); }
inline Formula deg_eq(const std::string& x, int c) { return make(Op::DegEq, {x}, {}, {}, c); }

}  // namespace fo

inline bool is_quantifier(Op op) {
  return op == Op::Exists || op == Op::Forall || op == Op::ExistsSet || op == Op::ForallSet || op == Op::ExistsUnique;
}

inline bool is_macro(Op op) { return op == Op::DistEq || op == Op::DistLe || op == Op::DegEq || op == Op::ExistsUnique; }

inline bool uses_set_quantifiers(const Formula& f) {
  if (f->op == Op::ExistsSet || f->op == Op::ForallSet || f->op == Op::In) return true;
  return std::any_of(f->kids.begin(), f->kids.end(), [](const Formula& k) { return uses_set_quantifiers(k); });
}

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  if (is_quantifier(f->op)) {
    out = free_variables(f->kids[0]);
    out.erase(f->vars[0]);
    return out;
  }
  out.insert(f->vars.begin(), f->vars.end());
  for (const auto& k : f->kids) {
    auto sub = free_variables(k);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

inline void collect_variables(const Formula& f, std::set<std::string>& out) {
  out.insert(f->vars.begin(), f->vars.end());
  for (const auto& k : f->kids) collect_variables(k, out);
}

// Replaces free occurrences of `from` by `to`. `to` must not be bound inside
// f where `from` occurs free.
inline Formula rename_free(const Formula& f, const std::string& from, const std::string& to) {
  if (is_quantifier(f->op) && f->vars[0] == from) return f;
  Node n = *f;
  if (!is_quantifier(f->op))
    for (auto& v : n.vars)
      if (v == from) v = to;
  for (auto& k : n.kids) k = rename_free(k, from, to);
  return std::make_shared<const Node>(std::move(n));
}

namespace detail {

class FreshNames {
 public:
  explicit FreshNames(const Formula& f) { collect_variables(f, used_); }
  std::string next() {
    while (true) {
      std::string n = "z" + std::to_string(++counter_);
      if (used_.insert(n).second) return n;
    }
  }

 private:
  std::set<std::string> used_;
  int counter_ = 0;
};

inline Formula dist_le_fo(const std::string& x, const std::string& y, int c, FreshNames& fresh) {
  using namespace fo;
  if (c <= 0) return eq(x, y);
  if (c == 1) return disj(eq(x, y), edge(x, y));
  std::string z = fresh.next();
  return disj({eq(x, y), edge(x, y), exists(z, conj(edge(x, z), dist_le_fo(z, y, c - 1, fresh)))});
}

inline Formula expand(const Formula& f, FreshNames& fresh) {
  using namespace fo;
  switch (f->op) {
    case Op::DistLe:
      return dist_le_fo(f->vars[0], f->vars[1], f->value, fresh);
    case Op::DistEq: {
      const auto& x = f->vars[0];
      const auto& y = f->vars[1];
      if (f->value <= 0) return eq(x, y);
      return conj(dist_le_fo(x, y, f->value, fresh), neg(dist_le_fo(x, y, f->value - 1, fresh)));
    }
    case Op::DegEq: {
      const auto& x = f->vars[0];
      int c = f->value;
      std::string z = fresh.next();
      if (c <= 0) return forall(z, neg(edge(x, z)));
      std::vector<std::string> ys;
      for (int i = 0; i < c; ++i) ys.push_back(fresh.next());
      Formula body = top();
      bool first = true;
      auto add = [&](Formula g) {
        body = first ? g : conj(body, g);
        first = false;
      };
      for (int i = 0; i < c; ++i) {
        add(edge(x, ys[i]));
        for (int j = i + 1; j < c; ++j) add(neq(ys[i], ys[j]));
      }
      Formula covered = eq(z, ys[0]);
      for (int i = 1; i < c; ++i) covered = disj(covered, eq(z, ys[i]));
      add(forall(z, implies(edge(x, z), covered)));
      for (int i = c - 1; i >= 0; --i) body = exists(ys[i], body);
      return body;
    }
    case Op::ExistsUnique: {
      const auto& x = f->vars[0];
      Formula body = expand(f->kids[0], fresh);
      std::string other = fresh.next();
      return exists(x, conj(body, forall(other, implies(rename_free(body, x, other), eq(other, x)))));
    }
    default: {
      if (f->kids.empty()) return f;
      Node n = *f;
      for (auto& k : n.kids) k = expand(k, fresh);
      return std::make_shared<const Node>(std::move(n));
    }
  }
}

inline int raw_rank(const Formula& f) {
  int best = 0;
  for (const auto& k : f->kids) best = std::max(best, raw_rank(k));
  return best + (is_quantifier(f->op) ? 1 : 0);
}

}  // namespace detail

// Rewrites macro nodes (dist, deg, exists-unique) into plain FO.
inline Formula expand(const Formula& f) {
  detail::FreshNames fresh(f);
  return detail::expand(f, fresh);
}

// Maximum quantifier nesting after macro expansion; set quantifiers count 1.
inline int quantifier_rank(const Formula& f) { return detail::raw_rank(expand(f)); }

inline bool structurally_equal(const Formula& a, const Formula& b) {
  if (a->op != b->op || a->name != b->name || a->vars != b->vars || a->value != b->value ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!structurally_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// Fully parenthesised text in the parser's syntax.
inline std::string to_string(const Formula& f) {
  auto bin = [&](const char* sym) { return "(" + to_string(f->kids[0]) + " " + sym + " " + to_string(f->kids[1]) + ")"; };
  auto quant = [&](const char* kw) { return std::string(kw) + " " + f->vars[0] + ". " + to_string(f->kids[0]); };
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Edge: return "E(" + f->vars[0] + "," + f->vars[1] + ")";
    case Op::Eq: return f->vars[0] + " = " + f->vars[1];
    case Op::Rel: return f->name + "(" + f->vars[0] + "," + f->vars[1] + ")";
    case Op::Label: return f->name + "(" + f->vars[0] + ")";
    case Op::In: return f->vars[0] + " in " + f->vars[1];
    case Op::Not: return "!(" + to_string(f->kids[0]) + ")";
    case Op::And: return bin("&");
    case Op::Or: return bin("|");
    case Op::Implies: return bin("->");
    case Op::Iff: return bin("<->");
    case Op::Exists: return "(" + quant("exists") + ")";
    case Op::Forall: return "(" + quant("forall") + ")";
    case Op::ExistsSet: return "(" + quant("existsS") + ")";
    case Op::ForallSet: return "(" + quant("forallS") + ")";
    case Op::ExistsUnique: return "(" + quant("exists!") + ")";
    case Op::DistEq: return "dist(" + f->vars[0] + "," + f->vars[1] + ")=" + std::to_string(f->value);
    case Op::DistLe: return "dist(" + f->vars[0] + "," + f->vars[1] + ")<=" + std::to_string(f->value);
    case Op::DegEq: return "deg(" + f->vars[0] + ")=" + std::to_string(f->value);
  }
  return "?";
}

}  // namespace ivfo::logic
