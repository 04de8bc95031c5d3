#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/tree.hpp"

namespace arboreal {

/// Permutation of {1..d}, d <= 8. Value type, lex-ordered by one-line notation.
class Perm {
 public:
  Perm() = default;
  explicit Perm(int d) : d_(static_cast<uint8_t>(d)) {
    check_degree(d);
    for (int i = 1; i <= d; ++i) img_[i] = static_cast<uint8_t>(i);
  }

  static Perm identity(int d) { return Perm(d); }

  /// From one-line images: images[i-1] = sigma(i).
  static Perm from_images(const std::vector<int>& images);

  /// Parses "2 1 3", "213", or cycle notation "(1 2)(3 4)" / "(12)(34)".
  static Perm parse(const std::string& s, int d);

  int degree() const { return d_; }
  Color operator()(Color c) const { return img_[c]; }

  Perm after(const Perm& first) const {  // (*this . first)(c) = this(first(c))
    Perm r(d_);
    for (int c = 1; c <= d_; ++c) r.img_[c] = img_[first.img_[c]];
    return r;
  }
  Perm inverse() const {
    Perm r(d_);
    for (int c = 1; c <= d_; ++c) r.img_[img_[c]] = static_cast<uint8_t>(c);
    return r;
  }
  bool is_identity() const {
    for (int c = 1; c <= d_; ++c)
      if (img_[c] != c) return false;
    return true;
  }

  /// One-line serialization "sigma(1) sigma(2) ... sigma(d)".
  std::string to_string() const {
    std::string s;
    for (int c = 1; c <= d_; ++c) {
      if (c > 1) s += ' ';
      s += static_cast<char>('0' + img_[c]);
    }
    return s;
  }
  std::string cycles() const;

  bool operator==(const Perm& o) const { return d_ == o.d_ && img_ == o.img_; }
  bool operator!=(const Perm& o) const { return !(*this == o); }
  bool operator<(const Perm& o) const {  // lex on one-line notation
    for (int c = 1; c <= d_; ++c)
      if (img_[c] != o.img_[c]) return img_[c] < o.img_[c];
    return false;
  }

 private:
  uint8_t d_ = 0;
  std::array<uint8_t, 9> img_{};  // img_[0] unused
};

/// Finite permutation group F <= Sym({1..d}), the local action constraint.
/// Elements are enumerated once (closure of the generators) and kept sorted,
/// so every derived enumeration is deterministic.
class LocalGroup {
 public:
  LocalGroup(int d, std::vector<Perm> generators);

  /// Convenience: parses comma- or whitespace-separated generator list.
  static LocalGroup parse(int d, const std::string& generators);

  int degree() const { return d_; }
  const std::vector<Perm>& elements() const { return elements_; }
  const std::vector<Perm>& generators() const { return generators_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(const Perm& p) const;

  bool is_transitive() const;
  bool is_2transitive() const;
  /// Brute-force block search (degree <= 8 makes this cheap).
  bool is_primitive() const;
  bool is_cyclic_of_prime_order() const;
  /// Primitive and not cyclic of prime order.
  bool passes_gate() const { return is_primitive() && !is_cyclic_of_prime_order(); }
  /// Is F generated by its point stabilizers?
  bool generated_by_point_stabilizers() const;

  std::vector<Perm> point_stabilizer(Color c) const;
  /// Orbit of c2 under the point stabilizer of c1, sorted.
  std::vector<Color> stabilizer_orbit(Color c1, Color c2) const;
  std::vector<Color> orbit(Color c) const;

  /// Lexicographically least sigma in F with sigma(a) = b, if any.
  std::optional<Perm> transversal(Color a, Color b) const;
  /// Lexicographically least sigma in F with sigma(a) = b and sigma(c) = e.
  std::optional<Perm> transversal2(Color a, Color b, Color c, Color e) const;
  /// All sigma in F with sigma(a) = b, in lex order.
  std::vector<Perm> coset(Color a, Color b) const;

 private:
  int d_;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;  // sorted
  // Full transversal table, filled at construction; index (a-1)*d + (b-1).
  std::vector<std::optional<Perm>> trans_;
};

}  // namespace arboreal
