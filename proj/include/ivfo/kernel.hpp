#pragma once

// Kernelization of L-representations: removes vertices from dense spots as
// long as a local window structure certifies that the rank-d theory of the
// graph is unchanged, then model checking on the result.
//
// Window structure W around an anchor a: windows [a+o, a+o+width) for every
// o in L^(2^(d+1)); W holds the vertices whose left end lies in some window,
// ordered by l(w) - i(w) (i(w) = left edge of the first window holding w,
// ties by id), with the `edge` relation of the graph, one label per window
// holding the vertex and one label for its length.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ivfo/ef_games.hpp"
#include "ivfo/interval.hpp"
#include "ivfo/logic/evaluate.hpp"
#include "ivfo/logic/formula.hpp"

namespace ivfo {

struct WindowFamily {
  Coord anchor;
  Coord width;
  std::vector<LkElement> offsets;         // windows holding at least one vertex, ascending
  std::optional<std::size_t> target;      // index of the offset-0 window, if materialized
};

struct WindowStructure {
  WindowFamily family;
  logic::RelStructure structure;          // elements in `leq` order
  std::vector<std::size_t> vertex;        // representation index per element
  std::vector<std::vector<std::size_t>> windows;  // offsets holding each element
  std::vector<Coord> rho;                 // l(w) - i(w)

  std::vector<ef::Element> members(std::size_t window) const {
    std::vector<ef::Element> out;
    for (ef::Element e = 0; e < windows.size(); ++e)
      if (std::find(windows[e].begin(), windows[e].end(), window) != windows[e].end()) out.push_back(e);
    return out;
  }
};

inline std::string window_label(const Coord& offset, const LengthSet& lengths) {
  return "win:" + to_string(offset, lengths);
}

namespace detail {

// Members: representation index -> indices into `table` of the windows that
// hold its left end. Entries must be listed by increasing left end.
inline WindowStructure assemble_windows(const IntervalRep& rep, const CoordOrder& order, const Coord& anchor,
                                        const Coord& width, const LkTable& table,
                                        const std::vector<std::pair<std::size_t, std::vector<std::size_t>>>& members) {
  WindowStructure ws;
  ws.family.anchor = anchor;
  ws.family.width = width;
  std::vector<std::size_t> used;
  for (const auto& [v, wins] : members) used.insert(used.end(), wins.begin(), wins.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < used.size(); ++i) {
    local[used[i]] = i;
    ws.family.offsets.push_back(table.elements()[used[i]]);
    if (table.elements()[used[i]].value == Coord()) ws.family.target = i;
  }

  std::vector<Coord> starts;
  std::vector<std::string> names;
  for (const auto& o : ws.family.offsets) {
    starts.push_back(anchor + o.value);
    names.push_back(window_label(o.value, rep.lengths));
  }

  // Order by rho, then id.
  struct Item {
    std::size_t vertex;
    std::vector<std::size_t> wins;
    Coord rho;
  };
  std::vector<Item> items;
  items.reserve(members.size());
  for (const auto& [v, wins] : members) {
    std::vector<std::size_t> lw;
    for (auto w : wins) lw.push_back(local.at(w));
    std::sort(lw.begin(), lw.end());
    Coord rho = rep.vertices[v].left - starts[lw.front()];
    items.push_back({v, std::move(lw), std::move(rho)});
  }
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Shadows keep the quadratic edge sweep and the sort off exact arithmetic.
  ShadowOrder fast(order);
  std::vector<Shadowed> rho(items.size()), left(items.size()), right(items.size());
  for (std::size_t x = 0; x < items.size(); ++x) {
    const auto& v = rep.vertices[items[x].vertex];
    rho[x] = fast.make(items[x].rho);
    left[x] = fast.make(v.left);
    right[x] = fast.make(v.left + Coord::symbol(v.length));
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    if (fast.less(rho[x], rho[y])) return true;
    if (fast.less(rho[y], rho[x])) return false;
    return rep.vertices[items[x].vertex].id < rep.vertices[items[y].vertex].id;
  });
  std::vector<ef::Element> element_of(items.size());
  std::vector<std::string> ids;
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    const auto& it = items[idx[pos]];
    element_of[idx[pos]] = static_cast<ef::Element>(pos);
    ids.push_back(rep.vertices[it.vertex].id);
    ws.vertex.push_back(it.vertex);
    ws.windows.push_back(it.wins);
    ws.rho.push_back(it.rho);
  }
  ws.structure = logic::RelStructure(std::move(ids));
  auto& s = ws.structure;
  auto& leq = s.add_relation("leq");
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i; j < idx.size(); ++j) leq.set(i, j);
  auto& edge = s.add_relation("edge");
  // `members` is sorted by left end: sweep.
  for (std::size_t x = 0; x < items.size(); ++x) {
    for (std::size_t y = x + 1; y < items.size(); ++y) {
      if (!fast.less(left[y], right[x])) break;
      edge.set(element_of[x], element_of[y]);
      edge.set(element_of[y], element_of[x]);
    }
  }
  for (std::size_t e = 0; e < ws.vertex.size(); ++e) {
    for (auto w : ws.windows[e]) s.set_label(names[w], e);
    s.set_label("len:" + rep.lengths[rep.vertices[ws.vertex[e]].length].name, e);
  }
  return ws;
}

}  // namespace detail

// Window structure around `anchor` over all vertices of `rep`. The window
// width defaults to the minimum positive element of L^(2^(d+1)).
inline WindowStructure build_window_structure(const IntervalRep& rep, const Coord& anchor, int d,
                                              std::optional<Coord> width = std::nullopt,
                                              const Rational& tol = default_tolerance()) {
  CoordOrder order(rep.lengths, tol);
  LkTable table(rep.lengths, checked_pow2(d + 1), tol);
  Coord w = width ? *width : min_positive_epsilon(rep.lengths, d, tol);
  if (!order.less(Coord(0), w)) throw ValidationError("window width must be positive");
  auto sorted = order_by_left(rep, order);
  std::map<std::size_t, std::vector<std::size_t>> hold;  // sorted position -> windows
  for (std::size_t t = 0; t < table.elements().size(); ++t) {
    Coord lo = anchor + table.elements()[t].value;
    Coord hi = lo + w;
    auto first = std::partition_point(sorted.begin(), sorted.end(),
                                      [&](std::size_t v) { return order.less(rep.vertices[v].left, lo); });
    for (auto it = first; it != sorted.end() && order.less(rep.vertices[*it].left, hi); ++it)
      hold[static_cast<std::size_t>(it - sorted.begin())].push_back(t);
  }
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> members;
  for (auto& [pos, wins] : hold) members.emplace_back(sorted[pos], std::move(wins));
  return detail::assemble_windows(rep, order, anchor, w, table, members);
}

// An element of the target window whose deletion keeps the rank-d type of W,
// trying candidates from the top of the order down. `accept` may veto a
// candidate that passed. `max_work` bounds |W|^d.
inline std::optional<ef::Element> find_removable(const WindowStructure& ws, int d, double max_work = 5e7,
                                                 const std::function<bool(ef::Element)>& accept = nullptr) {
  if (!ws.family.target) return std::nullopt;
  auto candidates = ws.members(*ws.family.target);
  if (candidates.empty()) return std::nullopt;
  if (std::pow(static_cast<double>(ws.structure.size()), d) > max_work)
    throw BudgetError("window structure of " + std::to_string(ws.structure.size()) + " elements is too large for rank " +
                      std::to_string(d));
  ef::TypeContext ctx;
  auto view = ctx.view(ws.structure);
  std::vector<ef::Element> tuple;
  ef::TypeId whole = ctx.rank_type(view, tuple, d);
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it)
    if (ctx.rank_type(view, tuple, d, *it) == whole && (!accept || accept(*it))) return *it;
  return std::nullopt;
}

struct KernelOptions {
  std::size_t k_work = 16;
  std::size_t k_ceiling = 256;
  bool paranoid = false;                  // also certify on the graphs themselves
  std::size_t paranoid_max_vertices = 20;
  double max_type_work = 5e7;             // bound on |W|^d per certification
  Rational tol = default_tolerance();
};

struct KernelWindowRecord {
  std::string anchor_id;                  // vertex whose left end anchors the window
  std::size_t effective_k = 0;
  bool marked = false;                    // left intact
  std::string reason;
};

struct KernelReport {
  int d = 0;
  std::size_t input_vertices = 0;
  std::size_t output_vertices = 0;
  std::size_t removals = 0;
  Coord epsilon;
  std::size_t k_work = 0;
  std::size_t max_effective_k = 0;
  std::vector<KernelWindowRecord> windows;  // escalated or marked windows
  std::size_t marked_windows = 0;
  std::size_t density_epsilon = 0;        // max left ends in an epsilon window
  std::size_t density_unit = 0;           // max left ends in a unit window
  bool guarantee_met = true;
  std::size_t paranoid_checks = 0;
  std::size_t paranoid_rejections = 0;
  double seconds = 0;

  std::string to_text(const LengthSet& lengths) const {
    std::ostringstream out;
    out << "rank " << d << "\n"
        << "vertices " << input_vertices << " -> " << output_vertices << "\n"
        << "removals " << removals << "\n"
        << "epsilon " << to_string(epsilon, lengths) << "\n"
        << "k_work " << k_work << "\n"
        << "max_effective_k " << max_effective_k << "\n"
        << "density_epsilon " << density_epsilon << "\n"
        << "density_unit " << density_unit << "\n"
        << "marked_windows " << marked_windows << "\n"
        << "guarantee " << (guarantee_met ? "met" : "not met") << "\n";
    if (paranoid_checks) out << "paranoid " << paranoid_checks << " checks, " << paranoid_rejections << " rejected\n";
    for (const auto& w : windows)
      out << "window " << w.anchor_id << " k=" << w.effective_k << (w.marked ? " marked" : "")
          << (w.reason.empty() ? "" : " (" + w.reason + ")") << "\n";
    out << "seconds " << seconds << "\n";
    return out.str();
  }
};

struct KernelResult {
  IntervalRep rep;
  KernelReport report;
};

inline KernelResult kernelize(const IntervalRep& input, int d, const KernelOptions& opt = {}) {
  auto started = std::chrono::steady_clock::now();
  if (d < 0) throw ValidationError("rank must be non-negative");
  if (opt.k_work < 1) throw ValidationError("k_work must be at least 1");
  validate(input, opt.tol);
  KernelResult res;
  auto& rep_out = res.rep;
  auto& report = res.report;
  report.d = d;
  report.k_work = opt.k_work;
  report.max_effective_k = opt.k_work;
  report.input_vertices = input.size();

  const IntervalRep rep = input.size() ? perturb_distinct(input, opt.tol) : input;
  CoordOrder order(rep.lengths, opt.tol);
  detail::ShadowOrder fast(order);
  report.epsilon = min_positive_epsilon(rep.lengths, d, opt.tol);
  LkTable table(rep.lengths, checked_pow2(d + 1), opt.tol);
  const detail::Shadowed eps = fast.make(report.epsilon);

  const std::size_t n = rep.size();
  const auto sorted = order_by_left(rep, order);
  std::vector<std::size_t> pos_of(n);
  for (std::size_t p = 0; p < n; ++p) pos_of[sorted[p]] = p;
  std::vector<detail::Shadowed> left(n);
  for (std::size_t p = 0; p < n; ++p) left[p] = fast.make(rep.vertices[sorted[p]].left);

  // Alive positions: doubly linked list plus a union-find "next alive".
  const std::size_t none = n;
  std::vector<std::size_t> next(n), prev(n), jump(n + 1);
  for (std::size_t p = 0; p < n; ++p) {
    next[p] = p + 1;
    prev[p] = p == 0 ? none : p - 1;
  }
  std::iota(jump.begin(), jump.end(), 0);
  std::vector<char> alive(n, 1), marked(n, 0);
  std::size_t alive_count = n;
  auto next_alive = [&](std::size_t p) {
    std::size_t r = p;
    while (jump[r] != r) r = jump[r];
    while (jump[p] != r) p = std::exchange(jump[p], r);
    return r;
  };
  auto kth = [&](std::size_t p, std::size_t k) {
    for (std::size_t i = 0; i < k && p != none; ++i) p = next[p];
    return p;
  };

  struct Entry {
    detail::Shadowed gap;
    std::size_t pos;
    std::uint32_t version;
  };
  // Shadow order only: near ties may pop in either order, and the exact test
  // against eps below decides what gets processed. Spans never shrink, so an
  // entry at or above eps can be dropped for good.
  auto worse = [](const Entry& a, const Entry& b) { return a.gap.approx > b.gap.approx; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  std::vector<std::uint32_t> version(n, 0);
  auto refresh = [&](std::size_t p) {
    ++version[p];
    if (!alive[p] || marked[p]) return;
    std::size_t q = kth(p, opt.k_work);
    if (q == none) return;
    heap.push({fast.make(left[q].exact - left[p].exact), p, version[p]});
  };
  for (std::size_t p = 0; p < n; ++p) refresh(p);

  std::vector<double> offset_approx;
  for (const auto& e : table.elements()) offset_approx.push_back(fast.make(e.value).approx);

  // Window structure over the alive vertices.
  auto window_structure = [&](std::size_t p, const Coord& width) {
    const Coord& a = left[p].exact;
    std::map<std::size_t, std::vector<std::size_t>> hold;
    double w_approx = to_double(approx_value(width, rep.lengths));
    for (std::size_t t = 0; t < table.elements().size(); ++t) {
      double lo_approx = left[p].approx + offset_approx[t];
      double hi_approx = lo_approx + w_approx;
      // Generous: the sum of two shadows carries both rounding errors.
      double m = 2 * fast.margin(lo_approx, hi_approx);
      // First position whose shadow could reach lo.
      std::size_t start = static_cast<std::size_t>(
          std::partition_point(left.begin(), left.end(), [&](const detail::Shadowed& x) { return x.approx < lo_approx - m; }) -
          left.begin());
      std::optional<detail::Shadowed> lo, hi;
      for (std::size_t q = next_alive(start); q != none; q = next[q]) {
        if (left[q].approx > hi_approx + m) break;
        if (!lo) lo = fast.make(a + table.elements()[t].value);
        if (fast.less(left[q], *lo)) continue;
        if (!hi) hi = fast.make(lo->exact + width);
        if (!fast.less(left[q], *hi)) break;
        hold[q].push_back(t);
      }
    }
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> members;
    for (auto& [q, wins] : hold) members.emplace_back(sorted[q], std::move(wins));
    return detail::assemble_windows(rep, order, a, width, table, members);
  };

  auto graph_check = [&](std::size_t vertex) {
    std::vector<std::size_t> keep, keep_without;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[pos_of[v]]) continue;
      keep.push_back(v);
      if (v != vertex) keep_without.push_back(v);
    }
    auto g1 = logic::RelStructure::from_graph(build_graph(rep.subset(keep), opt.tol));
    auto g2 = logic::RelStructure::from_graph(build_graph(rep.subset(keep_without), opt.tol));
    return ef::equivalent_rank_d(g1, g2, d);
  };

  // Window structures repeat (a dense stack looks the same after each
  // removal), and the answer only depends on the structure and the target.
  std::unordered_map<std::string, std::optional<ef::Element>> memo;
  auto memo_key = [&](const WindowStructure& ws) {
    std::string key = std::to_string(ws.structure.size());
    for (auto e : ws.members(*ws.family.target)) key += "," + std::to_string(e);
    const auto m = ws.structure.size();
    for (const auto& [name, rel] : ws.structure.relations()) {
      key += "|" + name + ":";
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) key += rel.test(i, j) ? '1' : '0';
    }
    for (const auto& [name, lab] : ws.structure.labels()) {
      key += "|" + name + ":";
      for (std::size_t i = 0; i < m; ++i) key += lab[i] ? '1' : '0';
    }
    return key;
  };

  auto remove = [&](std::size_t p) {
    alive[p] = 0;
    --alive_count;
    if (prev[p] != none) next[prev[p]] = next[p];
    if (next[p] != none) prev[next[p]] = prev[p];
    jump[p] = p + 1;
    ++version[p];
    std::size_t s = prev[p];
    for (std::size_t i = 0; i < opt.k_work && s != none; ++i, s = prev[s]) refresh(s);
  };

  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.version != version[top.pos] || !alive[top.pos] || marked[top.pos]) continue;
    if (top.gap.approx > eps.approx + fast.margin(top.gap.approx, eps.approx)) break;
    if (!fast.less(top.gap, eps)) continue;
    const std::size_t p = top.pos;
    std::size_t k = opt.k_work;
    std::optional<std::size_t> victim;
    std::string reason;
    bool short_tail = false;
    while (true) {
      std::size_t q = kth(p, k);
      if (q == none) {
        reason = "no " + std::to_string(k) + "-th successor";
        // fewer than k vertices from p onwards, so the window is within k anyway
        short_tail = k > opt.k_work;
        break;
      }
      WindowStructure ws = window_structure(p, left[q].exact - left[p].exact);
      std::optional<ef::Element> found;
      std::string key;
      const bool cacheable = !opt.paranoid && ws.family.target;
      if (cacheable) {
        key = memo_key(ws);
        if (auto hit = memo.find(key); hit != memo.end()) {
          if (hit->second) {
            victim = pos_of[ws.vertex[*hit->second]];
            break;
          }
          if (k * 2 > opt.k_ceiling) {
            reason = "ceiling " + std::to_string(opt.k_ceiling) + " reached";
            break;
          }
          k *= 2;
          continue;
        }
      }
      try {
        found = find_removable(ws, d, opt.max_type_work, [&](ef::Element e) {
          if (!opt.paranoid || alive_count > opt.paranoid_max_vertices) return true;
          ++report.paranoid_checks;
          if (graph_check(ws.vertex[e])) return true;
          ++report.paranoid_rejections;
          return false;
        });
      } catch (const BudgetError& e) {
        reason = e.what();
        break;
      }
      if (cacheable) memo.emplace(std::move(key), found);
      if (found) {
        victim = pos_of[ws.vertex[*found]];
        break;
      }
      if (k * 2 > opt.k_ceiling) {
        reason = "ceiling " + std::to_string(opt.k_ceiling) + " reached";
        break;
      }
      k *= 2;
    }
    report.max_effective_k = std::max(report.max_effective_k, k);
    if (victim) {
      remove(*victim);
      ++report.removals;
      if (k != opt.k_work) report.windows.push_back({rep.vertices[sorted[p]].id, k, false, {}});
      // The anchor may still be dense.
      refresh(p);
    } else if (short_tail) {
      marked[p] = 1;
      ++version[p];
      report.windows.push_back({rep.vertices[sorted[p]].id, k, false, reason});
    } else {
      marked[p] = 1;
      ++version[p];
      ++report.marked_windows;
      report.guarantee_met = false;
      report.windows.push_back({rep.vertices[sorted[p]].id, k, true, reason});
    }
  }

  std::vector<std::size_t> keep;
  std::vector<char> keep_vertex(n, 0);
  for (std::size_t p = 0; p < n; ++p)
    if (alive[p]) keep_vertex[sorted[p]] = 1;
  for (std::size_t v = 0; v < n; ++v)
    if (keep_vertex[v]) keep.push_back(v);
  rep_out = rep.subset(keep);
  report.output_vertices = rep_out.size();
  if (rep_out.size()) {
    report.density_epsilon = density_profile(rep_out, report.epsilon, opt.tol).max_count;
    report.density_unit = density_profile(rep_out, Coord(1), opt.tol).max_count;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

struct ModelCheckOptions {
  bool use_kernel = true;
  KernelOptions kernel;
  logic::EvalOptions eval;
};

struct ModelCheckResult {
  bool value = false;
  int rank = 0;
  std::size_t evaluated_vertices = 0;
  std::optional<KernelReport> report;
};

// Decides rep's graph |= sentence, evaluating on the rank-d kernel.
inline ModelCheckResult modelcheck_report(const IntervalRep& rep, const logic::Formula& sentence,
                                          const ModelCheckOptions& opt = {}) {
  if (!logic::free_variables(sentence).empty()) throw UnboundVariableError("model checking needs a sentence");
  if (logic::uses_set_quantifiers(sentence)) throw DialectError("model checking takes FO sentences");
  ModelCheckResult out;
  out.rank = logic::quantifier_rank(sentence);
  IntervalRep target = rep;
  if (opt.use_kernel) {
    auto k = kernelize(rep, out.rank, opt.kernel);
    target = std::move(k.rep);
    out.report = std::move(k.report);
  }
  out.evaluated_vertices = target.size();
  auto s = logic::RelStructure::from_graph(build_graph(target, opt.kernel.tol));
  out.value = logic::evaluate(sentence, s, {}, opt.eval);
  return out;
}

inline bool modelcheck(const IntervalRep& rep, const logic::Formula& sentence, const ModelCheckOptions& opt = {}) {
  return modelcheck_report(rep, sentence, opt).value;
}

}  // namespace ivfo
