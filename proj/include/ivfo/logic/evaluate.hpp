#pragma once

// Naive Tarskian evaluation over a RelStructure. Formulas are compiled to
// slot-indexed nodes first; quantifier and macro nodes are memoized on the
// values of their free variables. dist/deg/exists! are evaluated directly
// (BFS on `edge`, row counts, counting) rather than through their expansion.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "ivfo/logic/formula.hpp"
#include "ivfo/logic/structure.hpp"

namespace ivfo::logic {

inline constexpr std::size_t kDefaultSetDomainCap = 22;

struct EvalOptions {
  std::size_t set_domain_cap = kDefaultSetDomainCap;
  std::size_t memo_limit = 1U << 22;  // total cached entries per evaluator
};

// Partial assignment: element variables map to element indices, set
// variables to bit masks over the domain.
using Assignment = std::map<std::string, std::uint64_t>;

class Evaluator {
 public:
  Evaluator(const RelStructure& s, EvalOptions opt = {}) : s_(s), opt_(opt) {}

  // Compiled programs (and their memo tables) are kept per formula, so
  // repeated calls with different assignments share work.
  bool evaluate(const Formula& f, const Assignment& a = {}) {
    auto found = programs_.find(f.get());
    if (found == programs_.end())
      found = programs_.emplace(f.get(), Cached{f, std::make_unique<Program>(compile(f))}).first;
    Program& p = *found->second.program;
    std::vector<std::uint64_t> env(p.slots.size(), 0);
    for (const auto& name : free_variables(f)) {
      auto it = a.find(name);
      if (it == a.end()) throw UnboundVariableError("variable '" + name + "' is not assigned");
      std::size_t slot = p.slot_of.at(name);
      if (!is_set_variable(name) && it->second >= s_.size())
        throw UnboundVariableError("variable '" + name + "' is assigned outside the domain");
      env[slot] = it->second;
    }
    Run run{p, env};
    return eval(run, p.root);
  }

 private:
  struct CNode {
    Op op;
    int a = -1, b = -1;  // slots
    const BitRelation* rel = nullptr;
    const std::vector<bool>* label = nullptr;
    std::vector<int> kids;
    int value = 0;
    std::vector<int> free;  // slots of free variables (memo key)
    bool memo = false;
  };

  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (auto v : k) h = (h ^ v) * 1099511628211ULL;
      return h;
    }
  };

  struct Program {
    std::vector<CNode> nodes;
    std::vector<std::string> slots;
    std::map<std::string, std::size_t> slot_of;
    int root = -1;
    std::vector<std::unordered_map<std::vector<std::uint64_t>, bool, KeyHash>> memo;
  };

  struct Run {
    Program& p;
    std::vector<std::uint64_t>& env;
  };

  int slot(Program& p, const std::string& name) {
    auto it = p.slot_of.find(name);
    if (it != p.slot_of.end()) return static_cast<int>(it->second);
    p.slot_of.emplace(name, p.slots.size());
    p.slots.push_back(name);
    return static_cast<int>(p.slots.size() - 1);
  }

  int compile_node(Program& p, const Formula& f) {
    CNode n;
    n.op = f->op;
    n.value = f->value;
    if (!f->vars.empty()) n.a = slot(p, f->vars[0]);
    if (f->vars.size() > 1) n.b = slot(p, f->vars[1]);
    switch (f->op) {
      case Op::Edge: n.rel = &s_.relation_or_throw("edge"); break;
      case Op::Rel: n.rel = &s_.relation_or_throw(f->name); break;
      case Op::Label: {
        auto it = s_.labels().find(f->name);
        n.label = it == s_.labels().end() ? nullptr : &it->second;
        break;
      }
      case Op::DistEq:
      case Op::DistLe:
      case Op::DegEq: n.rel = &s_.relation_or_throw("edge"); break;
      case Op::ExistsSet:
      case Op::ForallSet:
        if (s_.size() > opt_.set_domain_cap)
          throw SetQuantifierBudgetError("set quantifier over " + std::to_string(s_.size()) +
                                         " elements exceeds the cap of " + std::to_string(opt_.set_domain_cap));
        break;
      default: break;
    }
    for (const auto& k : f->kids) n.kids.push_back(compile_node(p, k));
    if (is_quantifier(f->op) || is_macro(f->op)) {
      n.memo = true;
      for (const auto& v : free_variables(f)) n.free.push_back(slot(p, v));
    }
    p.nodes.push_back(std::move(n));
    return static_cast<int>(p.nodes.size() - 1);
  }

  Program compile(const Formula& f) {
    Program p;
    p.root = compile_node(p, f);
    p.memo.resize(p.nodes.size());
    return p;
  }

  const std::vector<int>& distances(std::uint64_t src) {
    auto it = dist_.find(src);
    if (it != dist_.end()) return it->second;
    if (adj_.empty() && s_.size() > 0) {
      const auto& e = s_.relation_or_throw("edge");
      adj_.resize(s_.size());
      for (std::size_t v = 0; v < s_.size(); ++v)
        for (std::size_t w = 0; w < s_.size(); ++w)
          if (e.test(v, w)) adj_[v].push_back(static_cast<std::uint32_t>(w));
    }
    std::vector<int> d(s_.size(), -1);
    std::deque<std::uint32_t> q{static_cast<std::uint32_t>(src)};
    d[src] = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      for (auto w : adj_[v])
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          q.push_back(w);
        }
    }
    return dist_.emplace(src, std::move(d)).first->second;
  }

  bool eval(Run& r, int idx) {
    const CNode& n = r.p.nodes[idx];
    if (!n.memo) return eval_raw(r, idx);
    std::vector<std::uint64_t> key;
    key.reserve(n.free.size());
    for (int s : n.free) key.push_back(r.env[s]);
    auto& table = r.p.memo[idx];
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    bool v = eval_raw(r, idx);
    if (memo_entries_ < opt_.memo_limit) {
      table.emplace(std::move(key), v);
      ++memo_entries_;
    }
    return v;
  }

  template <class F>
  bool over_domain(Run& r, int slot, bool want, F&& body) {
    std::uint64_t saved = r.env[slot];
    bool found = false;
    for (std::uint64_t e = 0; e < s_.size() && !found; ++e) {
      r.env[slot] = e;
      found = body() == want;
    }
    r.env[slot] = saved;
    return found;
  }

  bool eval_raw(Run& r, int idx) {
    const CNode& n = r.p.nodes[idx];
    auto& env = r.env;
    switch (n.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Edge:
      case Op::Rel: return n.rel->test(env[n.a], env[n.b]);
      case Op::Eq: return env[n.a] == env[n.b];
      case Op::Label: return n.label && (*n.label)[env[n.a]];
      case Op::In: return env[n.a] < 64 && ((env[n.b] >> env[n.a]) & 1U);
      case Op::Not: return !eval(r, n.kids[0]);
      case Op::And: return eval(r, n.kids[0]) && eval(r, n.kids[1]);
      case Op::Or: return eval(r, n.kids[0]) || eval(r, n.kids[1]);
      case Op::Implies: return !eval(r, n.kids[0]) || eval(r, n.kids[1]);
      case Op::Iff: return eval(r, n.kids[0]) == eval(r, n.kids[1]);
      case Op::Exists: return over_domain(r, n.a, true, [&] { return eval(r, n.kids[0]); });
      case Op::Forall: return !over_domain(r, n.a, false, [&] { return eval(r, n.kids[0]); });
      case Op::ExistsUnique: {
        std::uint64_t saved = env[n.a];
        int count = 0;
        for (std::uint64_t e = 0; e < s_.size() && count < 2; ++e) {
          env[n.a] = e;
          if (eval(r, n.kids[0])) ++count;
        }
        env[n.a] = saved;
        return count == 1;
      }
      case Op::ExistsSet:
      case Op::ForallSet: {
        bool want = n.op == Op::ExistsSet;
        std::uint64_t saved = env[n.a];
        std::uint64_t total = std::uint64_t{1} << s_.size();
        bool found = false;
        for (std::uint64_t m = 0; m < total && !found; ++m) {
          env[n.a] = m;
          found = eval(r, n.kids[0]) == want;
        }
        env[n.a] = saved;
        return want ? found : !found;
      }
      case Op::DistLe: {
        int d = distances(env[n.a])[env[n.b]];
        return d >= 0 && d <= n.value;
      }
      case Op::DistEq: return distances(env[n.a])[env[n.b]] == n.value;
      case Op::DegEq: return static_cast<int>(n.rel->row_count(env[n.a])) == n.value;
    }
    return false;
  }

  struct Cached {
    Formula pin;
    std::unique_ptr<Program> program;
  };

  const RelStructure& s_;
  EvalOptions opt_;
  std::unordered_map<const Node*, Cached> programs_;
  std::size_t memo_entries_ = 0;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::unordered_map<std::uint64_t, std::vector<int>> dist_;
};

inline bool evaluate(const Formula& f, const RelStructure& s, const Assignment& a = {}, EvalOptions opt = {}) {
  return Evaluator(s, opt).evaluate(f, a);
}

enum class Closure { None, TransitiveSymmetric };

// Extends S by the binary relation {(a,b) : S |= base[a/x, b/y]}, optionally
// closed under symmetry and transitivity and made reflexive on its support.
inline RelStructure with_derived_relation(const RelStructure& s, const std::string& name, const Formula& base,
                                          const std::string& x, const std::string& y,
                                          Closure closure = Closure::None, EvalOptions opt = {}) {
  BitRelation rel(s.size());
  Evaluator ev(s, opt);
  for (std::uint64_t a = 0; a < s.size(); ++a)
    for (std::uint64_t b = 0; b < s.size(); ++b)
      if (ev.evaluate(base, {{x, a}, {y, b}})) rel.set(a, b);
  if (closure == Closure::TransitiveSymmetric) {
    std::vector<std::size_t> parent(s.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::vector<char> support(s.size(), 0);
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        if (rel.test(a, b)) {
          support[a] = support[b] = 1;
          parent[find(a)] = find(b);
        }
    BitRelation closed(s.size());
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        if (support[a] && support[b] && find(a) == find(b)) closed.set(a, b);
    rel = std::move(closed);
  }
  RelStructure out = s;
  out.set_relation(name, std::move(rel));
  return out;
}

}  // namespace ivfo::logic
