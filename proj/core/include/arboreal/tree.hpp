#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arboreal {

/// Edge color, integer in 1..d. d is carried by the surrounding context.
using Color = int;

constexpr int kMinDegree = 3;
constexpr int kMaxDegree = 8;

inline void check_degree(int d) {
  if (d < kMinDegree || d > kMaxDegree)
    throw std::invalid_argument("degree must be in [3, 8], got " + std::to_string(d));
}

/// Vertex of the d-regular tree: a reduced color word (no letter repeats
/// consecutively). The empty word is the base vertex x0. Stored as digit
/// characters '1'..'8' so serialization is the identity.
class Vertex {
 public:
  Vertex() = default;

  static Vertex base() { return Vertex(); }

  /// Parses a digit string; "" is x0. Validates reduction and color range.
  static Vertex parse(const std::string& s, int d) {
    check_degree(d);
    Vertex v;
    v.w_.reserve(s.size());
    for (char c : s) {
      if (c < '1' || c > '0' + d)
        throw std::invalid_argument("vertex word '" + s + "': color out of range for d=" + std::to_string(d));
      if (!v.w_.empty() && v.w_.back() == c)
        throw std::invalid_argument("vertex word '" + s + "' is not reduced");
      v.w_ += c;
    }
    return v;
  }

  const std::string& word() const { return w_; }
  int length() const { return static_cast<int>(w_.size()); }
  bool is_base() const { return w_.empty(); }

  Color letter(int i) const { return w_[i] - '0'; }
  Color last() const { return w_.back() - '0'; }

  /// Appends color c; requires c != last (keeps the word reduced).
  Vertex child(Color c) const {
    if (!w_.empty() && last() == c) throw std::invalid_argument("child: color equals last letter");
    Vertex v = *this;
    v.w_ += static_cast<char>('0' + c);
    return v;
  }
  Vertex parent() const {
    if (w_.empty()) throw std::invalid_argument("parent of base vertex");
    Vertex v = *this;
    v.w_.pop_back();
    return v;
  }

  /// Crosses the color-c edge at this vertex: pops if the word ends with c,
  /// else appends. Total: every color is valid at every vertex.
  Vertex step(Color c) const {
    Vertex v = *this;
    if (!v.w_.empty() && v.last() == c)
      v.w_.pop_back();
    else
      v.w_ += static_cast<char>('0' + c);
    return v;
  }

  bool is_prefix_of(const Vertex& o) const {
    return o.w_.size() >= w_.size() && o.w_.compare(0, w_.size(), w_) == 0;
  }
  Vertex prefix(int n) const {
    Vertex v;
    v.w_ = w_.substr(0, n);
    return v;
  }

  friend int common_prefix_length(const Vertex& a, const Vertex& b) {
    int n = 0;
    int m = static_cast<int>(std::min(a.w_.size(), b.w_.size()));
    while (n < m && a.w_[n] == b.w_[n]) ++n;
    return n;
  }

  auto operator<=>(const Vertex&) const = default;

 private:
  std::string w_;
};

inline int dist(const Vertex& a, const Vertex& b) {
  int l = common_prefix_length(a, b);
  return a.length() + b.length() - 2 * l;
}

/// Vertices of the geodesic from a to b inclusive: up from a to the common
/// prefix, then down to b.
inline std::vector<Vertex> geodesic(const Vertex& a, const Vertex& b) {
  int l = common_prefix_length(a, b);
  std::vector<Vertex> path;
  path.reserve(dist(a, b) + 1);
  Vertex cur = a;
  path.push_back(cur);
  while (cur.length() > l) {
    cur = cur.parent();
    path.push_back(cur);
  }
  for (int i = l; i < b.length(); ++i) {
    cur = cur.child(b.letter(i));
    path.push_back(cur);
  }
  return path;
}

/// Colors crossed along the geodesic from a to b (length dist(a,b)).
inline std::vector<Color> geodesic_colors(const Vertex& a, const Vertex& b) {
  int l = common_prefix_length(a, b);
  std::vector<Color> cols;
  cols.reserve(dist(a, b));
  for (int i = a.length(); i > l; --i) cols.push_back(a.letter(i - 1));
  for (int i = l; i < b.length(); ++i) cols.push_back(b.letter(i));
  return cols;
}

/// Oriented edge: the color-c edge at vertex v, i.e. {v, v.step(c)}.
struct Edge {
  Vertex v;
  Color c = 1;

  Vertex other() const { return v.step(c); }
};

/// Does the half-tree T_{v,c} (the component of e's far endpoint when the edge
/// {v, v.step(c)} is removed, with v itself counted in) contain u?
/// Concretely: u == v, or the geodesic from v to u starts with color c.
inline bool half_tree_contains(const Edge& e, const Vertex& u) {
  if (u == e.v) return true;
  if (e.v.is_prefix_of(u)) return u.letter(e.v.length()) == e.c;
  // First step from e.v toward u goes up to the parent.
  return e.v.last() == e.c;
}

/// End of the tree given by an eventually periodic reduced ray from x0:
/// prefix . period . period . ...  Serialized "prefix|period".
class BoundaryPoint {
 public:
  /// Unset placeholder; any letter access throws until a real end is assigned.
  BoundaryPoint() = default;

  BoundaryPoint(const std::string& prefix, const std::string& period, int d) {
    check_degree(d);
    if (period.empty()) throw std::invalid_argument("boundary point: empty period");
    auto check = [&](const std::string& s) {
      for (char c : s)
        if (c < '1' || c > '0' + d)
          throw std::invalid_argument("boundary point: color out of range for d=" + std::to_string(d));
    };
    check(prefix);
    check(period);
    std::string probe = prefix + period + period;
    for (size_t i = 1; i < probe.size(); ++i)
      if (probe[i] == probe[i - 1])
        throw std::invalid_argument("boundary point '" + prefix + "|" + period + "' is not reduced");
    prefix_ = prefix;
    period_ = period;
    normalize();
  }

  static BoundaryPoint parse(const std::string& s, int d) {
    auto bar = s.find('|');
    if (bar == std::string::npos)
      throw std::invalid_argument("boundary point '" + s + "': expected 'prefix|period'");
    return BoundaryPoint(s.substr(0, bar), s.substr(bar + 1), d);
  }

  const std::string& prefix() const { return prefix_; }
  const std::string& period() const { return period_; }
  std::string to_string() const { return prefix_ + "|" + period_; }

  /// i-th letter (0-based) of the infinite word.
  Color letter(int i) const {
    if (period_.empty()) throw std::logic_error("boundary point is unset");
    if (i < static_cast<int>(prefix_.size())) return prefix_[i] - '0';
    return period_[(i - prefix_.size()) % period_.size()] - '0';
  }

  /// Vertex at distance n from x0 along the ray.
  Vertex ray_vertex(int n) const {
    Vertex v;
    for (int i = 0; i < n; ++i) v = v.child(letter(i));
    return v;
  }

  /// Is v on the ray [x0, xi)? (Equivalently: v equals its own-length ray prefix.)
  bool on_ray(const Vertex& v) const {
    for (int i = 0; i < v.length(); ++i)
      if (v.letter(i) != letter(i)) return false;
    return true;
  }

  /// Phase of position n for cycle detection: -1 while inside the prefix.
  int phase(int n) const {
    int p = static_cast<int>(prefix_.size());
    if (n < p) return -1;
    return (n - p) % static_cast<int>(period_.size());
  }

  bool operator==(const BoundaryPoint& o) const { return prefix_ == o.prefix_ && period_ == o.period_; }
  bool operator!=(const BoundaryPoint& o) const { return !(*this == o); }

 private:
  // Canonical form: shortest prefix, primitive period. Two eventually periodic
  // words are equal iff their canonical forms coincide.
  void normalize() {
    // Primitive period.
    size_t n = period_.size();
    for (size_t k = 1; k <= n / 2; ++k) {
      if (n % k) continue;
      bool rep = true;
      for (size_t i = k; i < n && rep; ++i)
        if (period_[i] != period_[i - k]) rep = false;
      if (rep) {
        period_.resize(k);
        break;
      }
    }
    // Absorb: while the prefix ends with the period's last letter, rotate.
    while (!prefix_.empty() && prefix_.back() == period_.back()) {
      prefix_.pop_back();
      period_ = period_.back() + period_.substr(0, period_.size() - 1);
    }
  }

  std::string prefix_;
  std::string period_;
};

/// Longest common prefix length of two ends (as vertex words);
/// -1 encodes equality (infinite agreement).
inline int boundary_agreement(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a == b) return -1;
  int bound = static_cast<int>(a.prefix().size() + b.prefix().size() +
                               2 * std::max(a.period().size(), b.period().size()) *
                                   std::max(a.period().size(), b.period().size())) +
              2;
  for (int i = 0; i < bound; ++i)
    if (a.letter(i) != b.letter(i)) return i;
  // Normalized distinct ends must disagree within the bound.
  throw std::logic_error("boundary_agreement: normalization failure");
}

}  // namespace arboreal
