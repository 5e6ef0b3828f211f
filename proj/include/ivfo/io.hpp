#pragma once

// Line-oriented text formats for representations and graphs. `#` starts a
// comment; blank lines are ignored.
//
//   lengths u=1 q=1.41421356237309
//   span 4.5
//   vertex v1 len=u left=0
//   vertex v2 len=q left=1/2+1*q
//
// Length values written as integers or p/q are exact; decimals with a
// fractional part are approximations of irrational lengths.
//
//   vertices a b c
//   edge a b

#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ivfo/graph.hpp"
#include "ivfo/interval.hpp"

namespace ivfo {

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

// Re-throws a ParseError at the given line.
template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (e.line() != 0) throw;
    std::string msg = e.what();
    if (auto p = msg.find(": "); p != std::string::npos && msg.rfind("0:0", 0) == 0) msg = msg.substr(p + 2);
    throw ParseError(msg, line, 1);
  } catch (const Error& e) {
    throw ParseError(e.what(), line, 1);
  }
}

inline std::pair<std::string, std::string> key_value(const std::string& tok) {
  auto eq = tok.find('=');
  if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'", 0, 0);
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

// Exact decimal text for a rational whose denominator divides 10^k.
inline std::optional<std::string> decimal_text(const Rational& r) {
  BigInt den = denominator(r);
  BigInt num = numerator(r);
  int digits = 0;
  BigInt scale = 1;
  while (scale % den != 0) {
    if (++digits > 18) return std::nullopt;
    scale *= 10;
  }
  BigInt scaled = abs(num) * (scale / den);
  std::string s = scaled.str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  std::string whole = s.substr(0, s.size() - digits);
  std::string frac = s.substr(s.size() - digits);
  if (frac.empty()) frac = "0";
  return (num < 0 ? "-" : "") + whole + "." + frac;
}

}  // namespace detail

inline IntervalRep parse_rep(std::istream& in) {
  IntervalRep rep;
  bool have_lengths = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;
    detail::at_line(lineno, [&] {
      if (toks[0] == "lengths") {
        if (have_lengths) throw ParseError("lengths declared twice", 0, 0);
        if (toks.size() < 2) throw ParseError("lengths needs at least one symbol", 0, 0);
        for (std::size_t i = 1; i < toks.size(); ++i) {
          auto [name, value] = detail::key_value(toks[i]);
          if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
            throw ParseError("bad length name '" + name + "'", 0, 0);
          rep.lengths.add(name, parse_rational(value), !is_decimal_literal(value));
        }
        have_lengths = true;
      } else if (toks[0] == "span") {
        if (!have_lengths) throw ParseError("span before lengths", 0, 0);
        if (toks.size() != 2) throw ParseError("span takes one value", 0, 0);
        rep.span = parse_coord(toks[1], rep.lengths);
      } else if (toks[0] == "vertex") {
        if (!have_lengths) throw ParseError("vertex before lengths", 0, 0);
        if (toks.size() != 4) throw ParseError("expected: vertex <id> len=<symbol> left=<coord>", 0, 0);
        IntervalVertex v;
        v.id = toks[1];
        bool have_len = false, have_left = false;
        for (std::size_t i = 2; i < 4; ++i) {
          auto [key, value] = detail::key_value(toks[i]);
          if (key == "len") {
            auto idx = rep.lengths.index_of(value);
            if (!idx) throw ParseError("unknown length symbol '" + value + "'", 0, 0);
            v.length = *idx;
            have_len = true;
          } else if (key == "left") {
            v.left = parse_coord(value, rep.lengths);
            have_left = true;
          } else {
            throw ParseError("unexpected key '" + key + "'", 0, 0);
          }
        }
        if (!have_len || !have_left) throw ParseError("vertex needs len= and left=", 0, 0);
        rep.vertices.push_back(std::move(v));
      } else {
        throw ParseError("unknown directive '" + toks[0] + "'", 0, 0);
      }
      return 0;
    });
  }
  if (!have_lengths) throw ParseError("missing lengths line", lineno + 1, 1);
  detail::at_line(lineno, [&] {
    validate(rep);
    return 0;
  });
  return rep;
}

inline IntervalRep parse_rep(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_rep(in);
}

inline std::string format_rep(const IntervalRep& rep) {
  std::string out = "lengths";
  for (const auto& s : rep.lengths.symbols()) {
    std::string value;
    if (s.exact) {
      value = to_string(s.value);
    } else {
      auto dec = detail::decimal_text(s.value);
      if (!dec) throw ValidationError("approximate length '" + s.name + "' is not a finite decimal");
      value = *dec;
    }
    out += " " + s.name + "=" + value;
  }
  out += "\n";
  if (rep.span) out += "span " + to_string(*rep.span, rep.lengths) + "\n";
  for (const auto& v : rep.vertices)
    out += "vertex " + v.id + " len=" + rep.lengths[v.length].name + " left=" + to_string(v.left, rep.lengths) + "\n";
  return out;
}

inline Graph parse_graph(std::istream& in) {
  Graph g;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;
    detail::at_line(lineno, [&] {
      if (toks[0] == "vertices") {
        for (std::size_t i = 1; i < toks.size(); ++i) g.add_vertex(toks[i]);
      } else if (toks[0] == "edge") {
        if (toks.size() != 3) throw ParseError("expected: edge <a> <b>", 0, 0);
        g.add_edge(toks[1], toks[2]);
      } else {
        throw ParseError("unknown directive '" + toks[0] + "'", 0, 0);
      }
      return 0;
    });
  }
  return g;
}

inline Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

inline std::string format_graph(const Graph& g) {
  std::string out = "vertices";
  for (const auto& id : g.ids()) out += " " + id;
  out += "\n";
  for (Graph::Vertex v = 0; v < g.size(); ++v)
    for (Graph::Vertex w : g.neighbors(v))
      if (v < w) out += "edge " + g.id(v) + " " + g.id(w) + "\n";
  return out;
}

}  // namespace ivfo
