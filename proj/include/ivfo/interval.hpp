#pragma once

// Interval representations [left, left + length) over a declared length set,
// the graphs they induce, and the shift that makes left end points distinct.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ivfo/graph.hpp"
#include "ivfo/numerics.hpp"

namespace ivfo {

struct IntervalVertex {
  std::string id;
  Coord left;
  std::uint32_t length = 0;  // index into the representation's LengthSet

  bool operator==(const IntervalVertex&) const = default;
};

struct IntervalRep {
  LengthSet lengths;
  std::vector<IntervalVertex> vertices;
  std::optional<Coord> span;  // (L,d) bound: every interval inside [0, span)

  std::size_t size() const { return vertices.size(); }
  Coord length_of(std::size_t i) const { return Coord::symbol(vertices[i].length); }
  Coord right(std::size_t i) const { return vertices[i].left + length_of(i); }

  IntervalRep& add(std::string id, Coord left, std::uint32_t length) {
    vertices.push_back({std::move(id), std::move(left), length});
    return *this;
  }

  // Sub-representation on the vertices at the given positions, in order.
  IntervalRep subset(const std::vector<std::size_t>& keep) const {
    IntervalRep r{lengths, {}, span};
    for (auto i : keep) r.vertices.push_back(vertices[i]);
    return r;
  }

  bool operator==(const IntervalRep&) const = default;
};

// Throws ValidationError when ids repeat, a length index is out of range, or
// an interval leaves [0, span).
inline void validate(const IntervalRep& rep, const Rational& tol = default_tolerance()) {
  if (rep.lengths.empty()) throw ValidationError("representation declares no lengths");
  std::unordered_set<std::string> seen;
  CoordOrder order(rep.lengths, tol);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const auto& v = rep.vertices[i];
    if (!seen.insert(v.id).second) throw ValidationError("duplicate vertex id '" + v.id + "'");
    if (v.length >= rep.lengths.size()) throw ValidationError("vertex '" + v.id + "' uses an undeclared length");
    if (rep.span) {
      if (order.less(v.left, Coord(0)))
        throw SpanViolation("vertex '" + v.id + "' starts left of 0");
      if (order.less(*rep.span, rep.right(i)))
        throw SpanViolation("vertex '" + v.id + "' ends right of the span bound");
    }
  }
}

// Vertex positions sorted by (left end, id).
inline std::vector<std::size_t> order_by_left(const IntervalRep& rep, const CoordOrder& order) {
  detail::ShadowOrder fast(order);
  std::vector<detail::Shadowed> left;
  left.reserve(rep.size());
  for (const auto& v : rep.vertices) left.push_back(fast.make(v.left));
  std::vector<std::size_t> idx(rep.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (fast.less(left[a], left[b])) return true;
    if (fast.less(left[b], left[a])) return false;
    return rep.vertices[a].id < rep.vertices[b].id;
  });
  return idx;
}

// Half-open intersection graph: [l,r) and [l',r') meet iff l < r' and l' < r.
inline Graph build_graph(const IntervalRep& rep, const Rational& tol = default_tolerance()) {
  CoordOrder order(rep.lengths, tol);
  Graph g;
  for (const auto& v : rep.vertices) g.add_vertex(v.id);
  auto sorted = order_by_left(rep, order);
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    Coord r = rep.right(sorted[a]);
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      if (!order.less(rep.vertices[sorted[b]].left, r)) break;
      g.add_edge(static_cast<Graph::Vertex>(sorted[a]), static_cast<Graph::Vertex>(sorted[b]));
    }
  }
  return g;
}

// Minimum positive gap between distinct end points (left and right), or
// nullopt when all end points coincide.
inline std::optional<Coord> min_endpoint_gap(const IntervalRep& rep, const CoordOrder& order) {
  detail::ShadowOrder fast(order);
  std::vector<detail::Shadowed> pts;
  pts.reserve(2 * rep.size());
  for (std::size_t i = 0; i < rep.size(); ++i) {
    pts.push_back(fast.make(rep.vertices[i].left));
    pts.push_back(fast.make(rep.right(i)));
  }
  std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) { return fast.less(a, b); });
  std::optional<detail::Shadowed> best;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!fast.less(pts[i], pts[i + 1])) continue;
    double g = pts[i + 1].approx - pts[i].approx;
    if (best && g > best->approx + fast.margin(g, best->approx)) continue;
    auto gap = fast.make(pts[i + 1].exact - pts[i].exact);
    if (!best || fast.less(gap, *best)) best = std::move(gap);
  }
  if (!best) return std::nullopt;
  return best->exact;
}

// Rational stand-in for a positive gap: the gap itself when its value is
// rational, otherwise the largest 1/2^t below (numeric gap - tol).
inline Rational rational_gap(const Coord& gap, const CoordOrder& order) {
  SplitCoord s = split(gap, order.lengths());
  if (s.irrational.empty()) return s.exact;
  Rational bound = approx_value(gap, order.lengths()) - order.tolerance();
  Rational p(1);
  while (p >= bound) p /= 2;
  return p;
}

// Shifts the i-th interval (1-based, by left end then id) right by
// i * delta / (2n). Keeps the induced graph, makes all end points distinct.
inline IntervalRep perturb_distinct(const IntervalRep& rep, const Rational& tol = default_tolerance()) {
  if (rep.size() == 0) return rep;
  CoordOrder order(rep.lengths, tol);
  auto gap = min_endpoint_gap(rep, order);
  Rational delta = gap ? rational_gap(*gap, order) : Rational(1);
  Rational step = delta / (2 * static_cast<long long>(rep.size()));
  auto sorted = order_by_left(rep, order);
  IntervalRep out = rep;
  for (std::size_t k = 0; k < sorted.size(); ++k)
    out.vertices[sorted[k]].left += Coord(step * static_cast<long long>(k + 1));
  if (out.span) {
    // The shift may push the rightmost interval past the bound; widen it by
    // the largest shift so the (L,d) condition keeps holding.
    out.span = *out.span + Coord(delta / 2);
  }
  return out;
}

struct DensityProfile {
  std::size_t max_count = 0;
  Coord witness;  // left edge of a window attaining max_count
};

// Max number of left end points in a half-open window of the given width.
inline DensityProfile density_profile(const IntervalRep& rep, const Coord& window,
                                      const Rational& tol = default_tolerance()) {
  CoordOrder order(rep.lengths, tol);
  if (!order.less(Coord(0), window)) throw ValidationError("window must be positive");
  detail::ShadowOrder fast(order);
  std::vector<detail::Shadowed> lefts;
  lefts.reserve(rep.size());
  for (const auto& v : rep.vertices) lefts.push_back(fast.make(v.left));
  std::sort(lefts.begin(), lefts.end(), [&](const auto& a, const auto& b) { return fast.less(a, b); });
  const detail::Shadowed w = fast.make(window);
  DensityProfile best;
  std::size_t j = 0;
  for (std::size_t i = 0; i < lefts.size(); ++i) {
    detail::Shadowed end{lefts[i].exact + window, lefts[i].approx + w.approx};
    double m = 2 * fast.margin(end.approx, end.approx);
    j = std::max(j, i);
    while (j < lefts.size()) {
      if (lefts[j].approx + m < end.approx) {
        ++j;
        continue;
      }
      if (lefts[j].approx > end.approx + m || !order.less(lefts[j].exact, end.exact)) break;
      ++j;
    }
    if (j - i > best.max_count) best = {j - i, lefts[i].exact};
  }
  return best;
}

}  // namespace ivfo
