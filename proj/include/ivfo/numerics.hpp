#pragma once

// Exact coordinates over a finite set of interval lengths.
//
// A Coord is c + sum_i k_i * s_i where c and k_i are rationals and s_i are
// declared length symbols. Symbols flagged exact carry a rational value and
// are substituted before comparison; the remaining symbols are irrational
// and only their decimal approximations are known. Comparisons that cannot
// be decided exactly are decided at the approximations, and fail with
// PrecisionError when the gap is within tolerance.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ivfo/errors.hpp"

namespace ivfo {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline const Rational& default_tolerance() {
  static const Rational tol(BigInt(1), BigInt(1000000000));
  return tol;
}

inline constexpr std::size_t kDefaultEnumerationBudget = 1000000;

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Integer-level comparison; the generic rational one is slow.
inline std::strong_ordering compare(const Rational& a, const Rational& b) {
  auto ad = denominator(a), bd = denominator(b);
  int c = ad == bd ? numerator(a).compare(numerator(b)) : (numerator(a) * bd).compare(numerator(b) * ad);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

// Parses `p/q`, an integer, or a decimal with at most 18 fractional digits.
// Decimals are read exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const std::string& why) -> Rational {
    throw ParseError("bad number '" + std::string(text) + "': " + why, 0, 0);
  };
  if (text.empty()) return fail("empty");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string_view body = text.substr(pos);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits(num) || !digits(den)) return fail("expected p/q");
    BigInt d{std::string(den)};
    if (d == 0) return fail("zero denominator");
    value = Rational(BigInt(std::string(num)), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits(whole) || !digits(frac)) return fail("expected decimal");
    if (frac.size() > 18) return fail("more than 18 fractional digits");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    value = Rational(BigInt(std::string(whole)) * scale + BigInt(std::string(frac)), scale);
  } else {
    if (!digits(body)) return fail("expected integer");
    value = Rational(BigInt(std::string(body)));
  }
  return negative ? Rational(-value) : value;
}

inline bool is_decimal_literal(std::string_view text) {
  return text.find('.') != std::string_view::npos;
}

struct LengthSymbol {
  std::string name;
  Rational value;  // exact value, or the declared approximation
  bool exact = true;

  bool operator==(const LengthSymbol&) const = default;
};

// Ordered set of declared interval lengths. Symbols that are not exact are
// asserted to be Q-linearly independent of each other and of 1.
class LengthSet {
 public:
  LengthSet() = default;

  LengthSet& add(std::string name, const Rational& value, bool exact) {
    if (value <= 0) throw ValidationError("length '" + name + "' must be positive");
    if (index_of(name)) throw ValidationError("duplicate length '" + name + "'");
    symbols_.push_back({std::move(name), value, exact});
    return *this;
  }
  LengthSet& add_exact(std::string name, const Rational& value) { return add(std::move(name), value, true); }
  LengthSet& add_approx(std::string name, const Rational& value) { return add(std::move(name), value, false); }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const LengthSymbol& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<LengthSymbol>& symbols() const { return symbols_; }

  std::optional<std::uint32_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  bool all_exact() const {
    return std::all_of(symbols_.begin(), symbols_.end(), [](const auto& s) { return s.exact; });
  }

  Rational max_value() const {
    Rational m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.value);
    return m;
  }

  Rational min_value() const {
    if (symbols_.empty()) return 0;
    Rational m = symbols_.front().value;
    for (const auto& s : symbols_) m = std::min(m, s.value);
    return m;
  }

  bool operator==(const LengthSet&) const = default;

 private:
  std::vector<LengthSymbol> symbols_;
};

// Rational constant plus rational coefficients over length-symbol indices.
// Terms are sorted by index and never hold a zero coefficient.
class Coord {
 public:
  using Term = std::pair<std::uint32_t, Rational>;

  Coord() = default;
  Coord(const Rational& c) : constant_(c) {}  // NOLINT: implicit by design of the arithmetic
  Coord(long long c) : constant_(c) {}        // NOLINT

  static Coord symbol(std::uint32_t index, const Rational& coeff = 1) {
    Coord c;
    if (coeff != 0) c.terms_.emplace_back(index, coeff);
    return c;
  }

  const Rational& constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  Rational coeff(std::uint32_t index) const {
    for (const auto& [i, k] : terms_)
      if (i == index) return k;
    return 0;
  }

  Coord operator-() const {
    Coord r = *this;
    r.constant_ = -r.constant_;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  Coord& operator+=(const Coord& o) { return *this = combine(*this, o, 1); }
  Coord& operator-=(const Coord& o) { return *this = combine(*this, o, -1); }
  friend Coord operator+(const Coord& a, const Coord& b) { return combine(a, b, 1); }
  friend Coord operator-(const Coord& a, const Coord& b) { return combine(a, b, -1); }

  friend Coord operator*(const Coord& a, const Rational& s) {
    if (s == 0) return Coord();
    Coord r = a;
    r.constant_ *= s;
    for (auto& t : r.terms_) t.second *= s;
    return r;
  }
  friend Coord operator*(const Rational& s, const Coord& a) { return a * s; }
  friend Coord operator/(const Coord& a, const Rational& s) { return a * (Rational(1) / s); }

  // Structural (exact) equality.
  bool operator==(const Coord&) const = default;

  // Lexicographic order on the representation; only for use as a map key.
  friend bool structural_less(const Coord& a, const Coord& b) {
    if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
    return a.terms_ < b.terms_;
  }

 private:
  static Coord combine(const Coord& a, const Coord& b, int sign) {
    Coord r;
    r.constant_ = sign > 0 ? Rational(a.constant_ + b.constant_) : Rational(a.constant_ - b.constant_);
    if (a.terms_.empty() && b.terms_.empty()) return r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        r.terms_.emplace_back(b.terms_[j].first, sign > 0 ? b.terms_[j].second : Rational(-b.terms_[j].second));
        ++j;
      } else {
        Rational k = sign > 0 ? Rational(a.terms_[i].second + b.terms_[j].second)
                              : Rational(a.terms_[i].second - b.terms_[j].second);
        if (k != 0) r.terms_.emplace_back(a.terms_[i].first, std::move(k));
        ++i;
        ++j;
      }
    }
    return r;
  }

  Rational constant_{0};
  std::vector<Term> terms_;
};

// Exact value of the rational part (constant plus exact symbols) and the
// coefficients that remain on irrational symbols.
struct SplitCoord {
  Rational exact;
  std::vector<Coord::Term> irrational;

  bool operator<(const SplitCoord& o) const {
    if (irrational != o.irrational) return irrational < o.irrational;
    return exact < o.exact;
  }
  bool operator==(const SplitCoord&) const = default;
};

inline SplitCoord split(const Coord& x, const LengthSet& lengths) {
  SplitCoord s{x.constant(), {}};
  for (const auto& [i, k] : x.terms()) {
    const auto& sym = lengths[i];
    if (sym.exact)
      s.exact += k * sym.value;
    else
      s.irrational.emplace_back(i, k);
  }
  return s;
}

// Value of x with every symbol replaced by its declared value.
inline Rational approx_value(const Coord& x, const LengthSet& lengths) {
  Rational v = x.constant();
  for (const auto& [i, k] : x.terms()) v += k * lengths[i].value;
  return v;
}

inline std::strong_ordering coord_compare(const Coord& x, const Coord& y, const LengthSet& lengths,
                                          const Rational& tol = default_tolerance()) {
  if (x.terms().size() == y.terms().size() &&
      std::equal(x.terms().begin(), x.terms().end(), y.terms().begin(), [](const auto& a, const auto& b) {
        return a.first == b.first && compare(a.second, b.second) == 0;
      }))
    return compare(x.constant(), y.constant());
  Coord diff = x - y;
  SplitCoord s = split(diff, lengths);
  if (s.irrational.empty()) return compare(s.exact, Rational(0));
  Rational numeric = approx_value(diff, lengths);
  if (abs(numeric) <= tol)
    throw PrecisionError("coordinates differ symbolically but agree within tolerance (difference " +
                         std::to_string(to_double(numeric)) + ")");
  return compare(numeric, Rational(0));
}

// Binds a length set and tolerance for repeated comparisons.
class CoordOrder {
 public:
  CoordOrder(const LengthSet& lengths, Rational tol = default_tolerance())
      : lengths_(&lengths), tol_(std::move(tol)) {}

  std::strong_ordering cmp(const Coord& a, const Coord& b) const { return coord_compare(a, b, *lengths_, tol_); }
  bool less(const Coord& a, const Coord& b) const { return cmp(a, b) < 0; }
  bool equal(const Coord& a, const Coord& b) const { return cmp(a, b) == 0; }
  bool operator()(const Coord& a, const Coord& b) const { return less(a, b); }

  const Coord& min(const Coord& a, const Coord& b) const { return less(b, a) ? b : a; }
  const Coord& max(const Coord& a, const Coord& b) const { return less(a, b) ? b : a; }

  const LengthSet& lengths() const { return *lengths_; }
  const Rational& tolerance() const { return tol_; }

 private:
  const LengthSet* lengths_;
  Rational tol_;
};

namespace detail {

// Coordinates with a double shadow. Comparisons use the shadow when the two
// values are clearly apart and the exact order otherwise.
struct Shadowed {
  Coord exact;
  double approx = 0;
};

class ShadowOrder {
 public:
  explicit ShadowOrder(const CoordOrder& order)
      : order_(order), slack_(std::max(2 * to_double(order.tolerance()), 1e-12)) {}

  Shadowed make(Coord c) const {
    double v = to_double(approx_value(c, order_.lengths()));
    return {std::move(c), v};
  }
  double margin(double a, double b) const { return slack_ + 1e-12 * std::max(std::fabs(a), std::fabs(b)); }
  bool less(const Shadowed& a, const Shadowed& b) const {
    double m = margin(a.approx, b.approx);
    if (a.approx + m < b.approx) return true;
    if (b.approx + m < a.approx) return false;
    return order_.less(a.exact, b.exact);
  }
  const CoordOrder& exact() const { return order_; }

 private:
  const CoordOrder& order_;
  double slack_;
};

}  // namespace detail

// Text form: `c+k1*s1+k2*s2`, constant omitted when zero and there are terms.
inline std::string to_string(const Coord& x, const LengthSet& lengths) {
  std::string out;
  if (x.constant() != 0 || x.terms().empty()) out = to_string(x.constant());
  for (const auto& [i, k] : x.terms()) {
    if (!out.empty()) out += "+";
    out += to_string(k) + "*" + lengths[i].name;
  }
  return out;
}

// Inverse of to_string: `+`-separated terms, each a rational, a symbol, or
// `rational*symbol`.
inline Coord parse_coord(std::string_view text, const LengthSet& lengths) {
  Coord result;
  if (text.empty()) throw ParseError("empty coordinate", 0, 0);
  auto symbol_index = [&](std::string_view name) {
    auto idx = lengths.index_of(name);
    if (!idx) throw ParseError("unknown length symbol '" + std::string(name) + "'", 0, 0);
    return *idx;
  };
  std::size_t start = 0;
  bool first = true;
  while (true) {
    std::size_t plus = text.find('+', start);
    std::string_view term = text.substr(start, plus == std::string_view::npos ? text.npos : plus - start);
    if (term.empty()) {
      if (!(first && plus == 0)) throw ParseError("empty term in coordinate '" + std::string(text) + "'", 0, 0);
    } else if (auto star = term.find('*'); star != std::string_view::npos) {
      result += Coord::symbol(symbol_index(term.substr(star + 1)), parse_rational(term.substr(0, star)));
    } else if (std::isalpha(static_cast<unsigned char>(term.back())) || term.back() == '_') {
      bool neg = term.front() == '-';
      result += Coord::symbol(symbol_index(term.substr(neg ? 1 : 0)), neg ? -1 : 1);
    } else {
      result += Coord(parse_rational(term));
    }
    first = false;
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// L^(k): integer combinations of lengths with coefficient weight at most k.

struct LkElement {
  Coord value;
  int weight = 0;
};

// All values of L^(k), merged by exact value and sorted ascending. Value
// membership is decided on the split (exact, irrational-coefficient) form.
class LkTable {
 public:
  LkTable(const LengthSet& lengths, int k, const Rational& tol = default_tolerance(),
          std::size_t budget = kDefaultEnumerationBudget)
      : k_(k) {
    if (k < 0) throw ValidationError("L^(k) needs k >= 0");
    if (lengths.empty()) throw ValidationError("empty length set");
    std::vector<long long> coeffs(lengths.size(), 0);
    std::size_t produced = 0;
    // Depth-first over coefficient vectors with remaining weight.
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
      if (pos == coeffs.size()) {
        if (++produced > budget) throw BudgetError("L^(" + std::to_string(k) + ") exceeds enumeration budget");
        Coord c;
        int w = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
          if (coeffs[i] != 0) {
            c += Coord::symbol(static_cast<std::uint32_t>(i), Rational(coeffs[i]));
            w += static_cast<int>(coeffs[i] < 0 ? -coeffs[i] : coeffs[i]);
          }
        }
        SplitCoord key = split(c, lengths);
        auto it = index_.find(key);
        if (it == index_.end()) {
          index_.emplace(std::move(key), elements_.size());
          elements_.push_back({std::move(c), w});
        } else if (w < elements_[it->second].weight) {
          elements_[it->second] = {std::move(c), w};
        }
        return;
      }
      for (long long v = -remaining; v <= remaining; ++v) {
        coeffs[pos] = v;
        self(self, pos + 1, remaining - static_cast<int>(v < 0 ? -v : v));
      }
      coeffs[pos] = 0;
    };
    rec(rec, 0, k);
    CoordOrder order(lengths, tol);
    // Sorting compares every adjacent pair, which surfaces distinct values
    // that collide within tolerance.
    std::sort(elements_.begin(), elements_.end(),
              [&](const LkElement& a, const LkElement& b) { return order.less(a.value, b.value); });
    index_.clear();
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(split(elements_[i].value, lengths), i);
    lengths_ = lengths;
  }

  int k() const { return k_; }
  const std::vector<LkElement>& elements() const { return elements_; }

  // Minimum weight of a representation of x, if x is in L^(k).
  std::optional<int> weight_of(const Coord& x) const {
    auto it = index_.find(split(x, lengths_));
    if (it == index_.end()) return std::nullopt;
    return elements_[it->second].weight;
  }

  // Smallest strictly positive element, if any.
  std::optional<LkElement> min_positive() const {
    for (const auto& e : elements_) {
      SplitCoord s = split(e.value, lengths_);
      if (s.irrational.empty() ? s.exact > 0 : approx_value(e.value, lengths_) > 0) return e;
    }
    return std::nullopt;
  }

 private:
  int k_;
  LengthSet lengths_;
  std::vector<LkElement> elements_;
  std::map<SplitCoord, std::size_t> index_;
};

inline std::vector<LkElement> enumerate_Lk(const LengthSet& lengths, int k, const Rational& tol = default_tolerance(),
                                           std::size_t budget = kDefaultEnumerationBudget) {
  return LkTable(lengths, k, tol, budget).elements();
}

// Smallest k <= cutoff with c - a in L^(k); nullopt stands for infinity.
inline std::optional<int> l_distance(const Coord& a, const Coord& c, const LengthSet& lengths, int cutoff,
                                     const Rational& tol = default_tolerance(),
                                     std::size_t budget = kDefaultEnumerationBudget) {
  if (cutoff < 0) throw ValidationError("cutoff must be non-negative");
  return LkTable(lengths, cutoff, tol, budget).weight_of(c - a);
}

inline int checked_pow2(int e) {
  if (e < 0 || e > 24) throw BudgetError("2^" + std::to_string(e) + " is beyond the supported range");
  return 1 << e;
}

// Minimum positive element of L^(2^(d+1)).
inline Coord min_positive_epsilon(const LengthSet& lengths, int d, const Rational& tol = default_tolerance(),
                                  std::size_t budget = kDefaultEnumerationBudget) {
  if (d < 0) throw ValidationError("d must be non-negative");
  LkTable table(lengths, checked_pow2(d + 1), tol, budget);
  auto e = table.min_positive();
  if (!e) throw ValidationError("L^(k) has no positive element");
  return e->value;
}

}  // namespace ivfo
