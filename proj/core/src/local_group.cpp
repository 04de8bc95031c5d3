#include "arboreal/local_group.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace arboreal {

Perm Perm::from_images(const std::vector<int>& images) {
  int d = static_cast<int>(images.size());
  check_degree(d);
  Perm p(d);
  std::array<bool, 9> seen{};
  for (int i = 1; i <= d; ++i) {
    int v = images[i - 1];
    if (v < 1 || v > d) throw std::invalid_argument("permutation image out of range");
    if (seen[v]) throw std::invalid_argument("permutation image repeated");
    seen[v] = true;
    p.img_[i] = static_cast<uint8_t>(v);
  }
  return p;
}

Perm Perm::parse(const std::string& s, int d) {
  check_degree(d);
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty permutation");
  if (t == "id" || t == "()" || t == "e") return identity(d);
  if (t[0] == '(') {
    // Cycle notation; single digits, parens required, optional commas.
    std::vector<int> images(d);
    for (int i = 1; i <= d; ++i) images[i - 1] = i;
    size_t i = 0;
    while (i < t.size()) {
      if (t[i] != '(') throw std::invalid_argument("bad cycle notation: '" + s + "'");
      std::vector<int> cyc;
      ++i;
      while (i < t.size() && t[i] != ')') {
        if (t[i] == ',') {
          ++i;
          continue;
        }
        if (t[i] < '1' || t[i] > '0' + d)
          throw std::invalid_argument("cycle entry out of range in '" + s + "'");
        cyc.push_back(t[i] - '0');
        ++i;
      }
      if (i == t.size()) throw std::invalid_argument("unbalanced cycle in '" + s + "'");
      ++i;  // ')'
      for (size_t k = 0; k < cyc.size(); ++k) {
        int from = cyc[k];
        int to = cyc[(k + 1) % cyc.size()];
        if (images[from - 1] != from) throw std::invalid_argument("repeated entry in cycles '" + s + "'");
        images[from - 1] = to;
      }
    }
    return from_images(images);
  }
  // One-line, digits with or without spaces.
  std::vector<int> images;
  for (char c : t) {
    if (c < '1' || c > '0' + d) throw std::invalid_argument("bad one-line permutation '" + s + "'");
    images.push_back(c - '0');
  }
  if (static_cast<int>(images.size()) != d)
    throw std::invalid_argument("one-line permutation '" + s + "' has wrong length for d=" + std::to_string(d));
  return from_images(images);
}

std::string Perm::cycles() const {
  std::string out;
  std::array<bool, 9> seen{};
  for (int c = 1; c <= d_; ++c) {
    if (seen[c] || img_[c] == c) continue;
    out += '(';
    int cur = c;
    while (!seen[cur]) {
      seen[cur] = true;
      out += static_cast<char>('0' + cur);
      cur = img_[cur];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

LocalGroup::LocalGroup(int d, std::vector<Perm> generators) : d_(d), generators_(std::move(generators)) {
  check_degree(d);
  for (const Perm& g : generators_)
    if (g.degree() != d) throw std::invalid_argument("generator degree mismatch");
  // Closure.
  std::set<Perm> elems;
  elems.insert(Perm::identity(d));
  std::vector<Perm> frontier(elems.begin(), elems.end());
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& e : frontier)
      for (const Perm& g : generators_) {
        Perm p = g.after(e);
        if (elems.insert(p).second) next.push_back(p);
      }
    frontier = std::move(next);
  }
  elements_.assign(elems.begin(), elems.end());
  trans_.assign(static_cast<size_t>(d) * d, std::nullopt);
  for (const Perm& p : elements_)  // sorted, so the first hit per slot is lex-least
    for (Color a = 1; a <= d; ++a) {
      auto& slot = trans_[static_cast<size_t>(a - 1) * d + (p(a) - 1)];
      if (!slot) slot = p;
    }
}

LocalGroup LocalGroup::parse(int d, const std::string& generators) {
  std::vector<Perm> gens;
  std::string cur;
  int depth = 0;
  auto flush = [&] {
    std::string t;
    for (char c : cur)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (!t.empty()) gens.push_back(Perm::parse(t, d));
    cur.clear();
  };
  for (char c : generators) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ',' || c == ';') && depth == 0) {
      flush();
      continue;
    }
    cur += c;
  }
  flush();
  return LocalGroup(d, std::move(gens));
}

bool LocalGroup::contains(const Perm& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

std::vector<Color> LocalGroup::orbit(Color c) const {
  std::set<Color> o;
  for (const Perm& p : elements_) o.insert(p(c));
  return std::vector<Color>(o.begin(), o.end());
}

bool LocalGroup::is_transitive() const { return static_cast<int>(orbit(1).size()) == d_; }

bool LocalGroup::is_2transitive() const {
  if (!is_transitive()) return false;
  // Orbit of the ordered pair (1,2) must be all d(d-1) pairs.
  std::set<std::pair<Color, Color>> o;
  for (const Perm& p : elements_) o.insert({p(1), p(2)});
  return o.size() == static_cast<size_t>(d_) * (d_ - 1);
}

bool LocalGroup::is_primitive() const {
  if (!is_transitive()) return false;
  // A transitive group is imprimitive iff some block B with 1 in B,
  // 1 < |B| < d, satisfies sigma(B) = B or sigma(B) disjoint from B for all sigma.
  for (int mask = 0; mask < (1 << d_); ++mask) {
    if (!(mask & 1)) continue;  // must contain color 1 (bit 0)
    int size = __builtin_popcount(mask);
    if (size <= 1 || size >= d_) continue;
    if (d_ % size != 0) continue;
    bool block = true;
    for (const Perm& p : elements_) {
      int img = 0;
      for (int c = 1; c <= d_; ++c)
        if (mask & (1 << (c - 1))) img |= 1 << (p(c) - 1);
      if (img != mask && (img & mask) != 0) {
        block = false;
        break;
      }
    }
    if (block) return false;
  }
  return true;
}

bool LocalGroup::is_cyclic_of_prime_order() const {
  size_t n = order();
  if (n < 2) return false;
  for (size_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;  // prime order implies cyclic
}

bool LocalGroup::generated_by_point_stabilizers() const {
  std::vector<Perm> gens;
  for (int c = 1; c <= d_; ++c) {
    auto st = point_stabilizer(c);
    gens.insert(gens.end(), st.begin(), st.end());
  }
  LocalGroup sub(d_, std::move(gens));
  return sub.order() == order();
}

std::vector<Perm> LocalGroup::point_stabilizer(Color c) const {
  std::vector<Perm> out;
  for (const Perm& p : elements_)
    if (p(c) == c) out.push_back(p);
  return out;
}

std::vector<Color> LocalGroup::stabilizer_orbit(Color c1, Color c2) const {
  std::set<Color> o;
  for (const Perm& p : elements_)
    if (p(c1) == c1) o.insert(p(c2));
  return std::vector<Color>(o.begin(), o.end());
}

std::optional<Perm> LocalGroup::transversal(Color a, Color b) const {
  return trans_[static_cast<size_t>(a - 1) * d_ + (b - 1)];
}

std::optional<Perm> LocalGroup::transversal2(Color a, Color b, Color c, Color e) const {
  for (const Perm& p : elements_)
    if (p(a) == b && p(c) == e) return p;
  return std::nullopt;
}

std::vector<Perm> LocalGroup::coset(Color a, Color b) const {
  std::vector<Perm> out;
  for (const Perm& p : elements_)
    if (p(a) == b) out.push_back(p);
  return out;
}

}  // namespace arboreal
