#pragma once

// Finite relational structures: a domain of named elements, named binary
// relations stored as bit matrices, and named unary labels.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ivfo/errors.hpp"
#include "ivfo/graph.hpp"

namespace ivfo::logic {

class BitRelation {
 public:
  BitRelation() = default;
  explicit BitRelation(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t a, std::size_t b) const { return (bits_[a * words_ + b / 64] >> (b % 64)) & 1U; }
  void set(std::size_t a, std::size_t b, bool on = true) {
    auto& w = bits_[a * words_ + b / 64];
    std::uint64_t bit = std::uint64_t{1} << (b % 64);
    w = on ? (w | bit) : (w & ~bit);
  }
  std::size_t row_count(std::size_t a) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_; ++i) c += static_cast<std::size_t>(__builtin_popcountll(bits_[a * words_ + i]));
    return c;
  }
  std::size_t pair_count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool operator==(const BitRelation&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

class RelStructure {
 public:
  using Element = std::uint32_t;

  RelStructure() = default;
  explicit RelStructure(std::vector<std::string> ids) : ids_(std::move(ids)) {
    for (Element i = 0; i < ids_.size(); ++i)
      if (!index_.emplace(ids_[i], i).second) throw ValidationError("duplicate element '" + ids_[i] + "'");
  }

  // Graph as a structure with the symmetric relation `edge`.
  static RelStructure from_graph(const Graph& g) {
    RelStructure s(g.ids());
    auto& e = s.add_relation("edge");
    for (Graph::Vertex v = 0; v < g.size(); ++v)
      for (auto w : g.neighbors(v)) e.set(v, w);
    return s;
  }

  std::size_t size() const { return ids_.size(); }
  const std::string& id(Element e) const { return ids_[e]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<Element> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Element at(const std::string& id) const {
    auto e = index_of(id);
    if (!e) throw ValidationError("unknown element '" + id + "'");
    return *e;
  }

  // Returns the (possibly new, empty) relation.
  BitRelation& add_relation(const std::string& name) {
    auto it = relations_.find(name);
    if (it == relations_.end()) it = relations_.emplace(name, BitRelation(size())).first;
    return it->second;
  }
  void set_relation(const std::string& name, BitRelation r) {
    if (r.size() != size()) throw ValidationError("relation '" + name + "' has the wrong size");
    relations_[name] = std::move(r);
  }
  const BitRelation* relation(const std::string& name) const {
    auto it = relations_.find(name);
    return it == relations_.end() ? nullptr : &it->second;
  }
  const BitRelation& relation_or_throw(const std::string& name) const {
    const BitRelation* r = relation(name);
    if (!r) throw ValidationError("structure has no relation '" + name + "'");
    return *r;
  }
  bool related(const std::string& name, Element a, Element b) const { return relation_or_throw(name).test(a, b); }
  const std::map<std::string, BitRelation>& relations() const { return relations_; }

  std::vector<bool>& add_label(const std::string& name) {
    auto it = labels_.find(name);
    if (it == labels_.end()) it = labels_.emplace(name, std::vector<bool>(size(), false)).first;
    return it->second;
  }
  void set_label(const std::string& name, Element e) { add_label(name)[e] = true; }
  // Unknown labels hold nowhere.
  bool has_label(const std::string& name, Element e) const {
    auto it = labels_.find(name);
    return it != labels_.end() && it->second[e];
  }
  const std::map<std::string, std::vector<bool>>& labels() const { return labels_; }

  // Substructure on the given elements, in the given order.
  RelStructure induced(const std::vector<Element>& keep) const {
    std::vector<std::string> ids;
    ids.reserve(keep.size());
    for (auto e : keep) ids.push_back(ids_[e]);
    RelStructure s(std::move(ids));
    for (const auto& [name, rel] : relations_) {
      auto& r = s.add_relation(name);
      for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
          if (rel.test(keep[i], keep[j])) r.set(i, j);
    }
    for (const auto& [name, lab] : labels_) {
      auto& l = s.add_label(name);
      for (std::size_t i = 0; i < keep.size(); ++i) l[i] = lab[keep[i]];
    }
    return s;
  }

  // Checks that `edge` is symmetric and irreflexive and `leq` a total order.
  void validate() const {
    if (const auto* e = relation("edge")) {
      for (Element a = 0; a < size(); ++a) {
        if (e->test(a, a)) throw ValidationError("edge relation has a loop at '" + ids_[a] + "'");
        for (Element b = 0; b < size(); ++b)
          if (e->test(a, b) != e->test(b, a)) throw ValidationError("edge relation is not symmetric");
      }
    }
    if (const auto* o = relation("leq")) {
      for (Element a = 0; a < size(); ++a) {
        if (!o->test(a, a)) throw ValidationError("leq is not reflexive");
        for (Element b = 0; b < size(); ++b) {
          if (a != b && o->test(a, b) == o->test(b, a)) throw ValidationError("leq is not a total order");
          for (Element c = 0; c < size(); ++c)
            if (o->test(a, b) && o->test(b, c) && !o->test(a, c)) throw ValidationError("leq is not transitive");
        }
      }
    }
  }

  bool operator==(const RelStructure& o) const {
    return ids_ == o.ids_ && relations_ == o.relations_ && labels_ == o.labels_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Element> index_;
  std::map<std::string, BitRelation> relations_;
  std::map<std::string, std::vector<bool>> labels_;
};

}  // namespace ivfo::logic
