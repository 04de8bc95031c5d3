#include "arboreal/element.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace arboreal {

namespace detail {

struct Node {
  enum class Kind { Leaf, Compose, Inverse };
  Kind kind = Kind::Leaf;
  GroupPtr F;

  // Leaf payload.
  Vertex root;
  std::map<Vertex, Perm> entries;
  int stored_depth = 0;

  // Compose: a after b. Inverse: a.
  NodePtr a, b;

  // Caches, filled at construction.
  Vertex root_img;
  int token_depth = 0;
  int support = 0;
};

namespace {

Vertex node_apply(const Node& n, const Vertex& v);
Perm node_local_perm(const Node& n, const Vertex& v);

/// Local permutation prescribed at v by the leaf's chain: the stored entry if
/// present, else the lex-least element of F taking the inbound color to the
/// value inherited from the parent (identity when those coincide).
/// Returns {image of v, local permutation at v}.
std::pair<Vertex, Perm> leaf_walk(const Node& n, const Vertex& v) {
  int d = n.F->degree();
  Vertex t = n.root;
  Perm sigma = Perm::identity(d);
  if (auto it = n.entries.find(Vertex::base()); it != n.entries.end()) sigma = it->second;
  for (int i = 0; i < v.length(); ++i) {
    Color c = v.letter(i);
    Color req = sigma(c);
    t = t.step(req);
    Vertex s = v.prefix(i + 1);
    if (auto it = n.entries.find(s); it != n.entries.end()) {
      sigma = it->second;
    } else if (req == c) {
      sigma = Perm::identity(d);
    } else {
      auto tr = n.F->transversal(c, req);
      if (!tr) throw std::logic_error("chain requirement left the color orbit");
      sigma = *tr;
    }
  }
  return {t, sigma};
}

Vertex inverse_apply(const Node& inner, const Vertex& v) {
  // Pull the geodesic from inner(x0) to v back through inner's local actions.
  Vertex u;
  for (Color step : geodesic_colors(inner.root_img, v)) {
    Perm sigma = node_local_perm(inner, u);
    u = u.step(sigma.inverse()(step));
  }
  return u;
}

Vertex node_apply(const Node& n, const Vertex& v) {
  switch (n.kind) {
    case Node::Kind::Leaf:
      return leaf_walk(n, v).first;
    case Node::Kind::Compose:
      return node_apply(*n.a, node_apply(*n.b, v));
    case Node::Kind::Inverse:
      return inverse_apply(*n.a, v);
  }
  throw std::logic_error("bad node kind");
}

Perm node_local_perm(const Node& n, const Vertex& v) {
  switch (n.kind) {
    case Node::Kind::Leaf:
      return leaf_walk(n, v).second;
    case Node::Kind::Compose: {
      Vertex bv = node_apply(*n.b, v);
      return node_local_perm(*n.a, bv).after(node_local_perm(*n.b, v));
    }
    case Node::Kind::Inverse: {
      Vertex w = inverse_apply(*n.a, v);
      return node_local_perm(*n.a, w).inverse();
    }
  }
  throw std::logic_error("bad node kind");
}

std::string node_token(const Node& n, const Vertex& v) {
  switch (n.kind) {
    case Node::Kind::Leaf: {
      if (v.is_base()) return "I";
      auto it = n.entries.lower_bound(v);
      if (it != n.entries.end() && v.is_prefix_of(it->first)) return "I" + v.word();
      // No stored structure at or below v: everything there is chain-canonical,
      // determined by the inbound color and its inherited value.
      Perm above = leaf_walk(n, v.parent()).second;
      Color c = v.last();
      return std::string("O") + static_cast<char>('0' + c) + static_cast<char>('0' + above(c));
    }
    case Node::Kind::Compose:
      return "C[" + node_token(*n.a, node_apply(*n.b, v)) + "|" + node_token(*n.b, v) + "]";
    case Node::Kind::Inverse:
      return "V[" + node_token(*n.a, inverse_apply(*n.a, v)) + "]";
  }
  throw std::logic_error("bad node kind");
}

NodePtr make_leaf(GroupPtr F, const Vertex& root, const std::map<Vertex, Perm>& entries) {
  if (!F) throw std::invalid_argument("null local group");
  int d = F->degree();
  if (root.length() % 2 != 0)
    throw std::invalid_argument("root image '" + root.word() +
                                "' has odd length; type-preserving elements translate the base by even distance");
  for (int i = 0; i < root.length(); ++i)
    if (root.letter(i) > d) throw std::invalid_argument("root image color out of range");

  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Leaf;
  n->F = std::move(F);
  n->root = root;
  n->entries = entries;
  n->root_img = root;
  for (const auto& [v, p] : entries) {
    if (p.degree() != d) throw std::invalid_argument("local permutation degree mismatch at '" + v.word() + "'");
    if (!n->F->contains(p))
      throw std::invalid_argument("local permutation '" + p.to_string() + "' at '" + v.word() +
                                  "' lies outside the local group");
    n->stored_depth = std::max(n->stored_depth, v.length());
  }
  // Edge-color compatibility: the permutation stored at v must send the color
  // of the edge to its parent to the same value the parent's chain does.
  for (const auto& [v, p] : entries) {
    if (v.is_base()) continue;
    Perm above = leaf_walk(*n, v.parent()).second;
    Color c = v.last();
    if (p(c) != above(c))
      throw std::invalid_argument("local permutation at '" + v.word() + "' maps inbound color " + std::to_string(c) +
                                  " to " + std::to_string(p(c)) + " but the parent chain requires " +
                                  std::to_string(above(c)));
  }
  n->token_depth = std::max(n->stored_depth, root.length());
  n->support = n->stored_depth;
  return n;
}

NodePtr make_compose(const NodePtr& a, const NodePtr& b) {
  if (a->F != b->F) throw std::invalid_argument("compose: elements over different local groups");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Compose;
  n->F = a->F;
  n->a = a;
  n->b = b;
  n->root_img = node_apply(*a, b->root_img);
  int rb = b->root_img.length();
  n->token_depth = std::max({b->token_depth, a->token_depth + rb, rb, n->root_img.length()});
  n->support = std::max(b->support, a->support + rb);
  return n;
}

NodePtr make_inverse(const NodePtr& a) {
  if (a->kind == Node::Kind::Inverse) return a->a;  // (g^-1)^-1 = g
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Inverse;
  n->F = a->F;
  n->a = a;
  n->root_img = inverse_apply(*a, Vertex::base());
  n->token_depth = std::max(a->token_depth + a->root_img.length(), n->root_img.length());
  n->support = a->support + a->root_img.length();
  return n;
}

}  // namespace
}  // namespace detail

using detail::Node;

const LocalGroup& Portrait::group() const { return *node_->F; }
GroupPtr Portrait::group_ptr() const { return node_->F; }

Portrait Portrait::identity(GroupPtr F) { return Portrait(detail::make_leaf(std::move(F), Vertex::base(), {})); }

Portrait Portrait::leaf(GroupPtr F, const Vertex& root_image, const std::map<Vertex, Perm>& entries) {
  return Portrait(detail::make_leaf(std::move(F), root_image, entries));
}

Portrait Portrait::left_mult(GroupPtr F, const Vertex& w) {
  return Portrait(detail::make_leaf(std::move(F), w, {}));
}

Portrait Portrait::rotation(GroupPtr F, const Perm& sigma) {
  if (!F->contains(sigma))
    throw std::invalid_argument("rotation permutation '" + sigma.to_string() + "' lies outside the local group");
  std::map<Vertex, Perm> entries;
  if (!sigma.is_identity()) entries[Vertex::base()] = sigma;
  return Portrait(detail::make_leaf(std::move(F), Vertex::base(), entries));
}

Portrait Portrait::path_rotation(GroupPtr F, const Vertex& from, const Vertex& to) {
  if (from.length() != to.length())
    throw std::invalid_argument("path rotation requires endpoints at equal depth");
  if (from == to) return identity(std::move(F));
  std::map<Vertex, Perm> entries;
  for (int i = 0; i < from.length(); ++i) {
    std::optional<Perm> sigma;
    if (i == 0) {
      sigma = F->transversal(from.letter(0), to.letter(0));
    } else {
      sigma = F->transversal2(from.letter(i), to.letter(i), from.letter(i - 1), to.letter(i - 1));
    }
    if (!sigma)
      throw std::invalid_argument("path rotation blocked at depth " + std::to_string(i) +
                                  ": no permutation in the local group takes " + std::to_string(from.letter(i)) +
                                  " to " + std::to_string(to.letter(i)) +
                                  (i ? " compatibly with the inbound edge" : ""));
    entries[from.prefix(i)] = *sigma;
  }
  return Portrait(detail::make_leaf(std::move(F), Vertex::base(), entries));
}

Portrait Portrait::build_hyperbolic(GroupPtr F, const Edge& e, const Edge& e2) {
  if (!e.v.is_base()) throw std::invalid_argument("first edge must be based at x0");
  int d = F->degree();
  if (e.c < 1 || e.c > d || e2.c < 1 || e2.c > d) throw std::invalid_argument("edge color out of range");
  const Vertex& v = e2.v;
  if (v.is_base()) throw std::invalid_argument("target edge coincides with the base edge");
  if (v.letter(0) != e.c)
    throw std::invalid_argument("axis must pass through the first edge: target word starts with " +
                                std::to_string(v.letter(0)) + ", expected " + std::to_string(e.c));
  if (e2.c == v.last())
    throw std::invalid_argument("second edge must point away from x0");
  if (v.length() % 2 != 0)
    throw std::invalid_argument("parity violation: translation length " + std::to_string(v.length()) +
                                " is odd, no type-preserving element translates by it");
  auto sigma = F->transversal(e.c, e2.c);
  if (!sigma)
    throw std::invalid_argument("local group has no permutation taking color " + std::to_string(e.c) + " to " +
                                std::to_string(e2.c));
  std::map<Vertex, Perm> entries;
  if (!sigma->is_identity()) entries[Vertex::base()] = *sigma;
  return Portrait(detail::make_leaf(std::move(F), v, entries));
}

Portrait Portrait::random(GroupPtr F, std::mt19937_64& rng, const RandomOptions& opts) {
  int d = F->degree();
  std::uniform_int_distribution<int> half(0, std::max(0, opts.max_root_length) / 2);
  int len = 2 * half(rng);
  Vertex root;
  for (int i = 0; i < len; ++i) {
    if (i == 0) {
      root = root.child(std::uniform_int_distribution<int>(1, d)(rng));
    } else {
      int idx = std::uniform_int_distribution<int>(1, d - 1)(rng);
      Color c = 0;
      for (Color cand = 1; cand <= d; ++cand) {
        if (cand == root.last()) continue;
        if (--idx == 0) {
          c = cand;
          break;
        }
      }
      root = root.child(c);
    }
  }

  // Walk the ball breadth-first, fixing the effective chain as we go so each
  // child's requirement is known before its own permutation is drawn.
  std::map<Vertex, Perm> entries;
  std::map<Vertex, Perm> effective;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Vertex> level{Vertex::base()};
  for (int depth = 0; depth <= opts.radius; ++depth) {
    std::vector<Vertex> next;
    for (const Vertex& v : level) {
      Color inbound = v.is_base() ? 0 : v.last();
      Color req = inbound;
      if (!v.is_base()) req = effective.at(v.parent())(inbound);
      std::vector<Perm> allowed =
          v.is_base() ? F->elements() : F->coset(inbound, req);
      Perm chosen;
      if (coin(rng) < opts.density) {
        chosen = allowed[std::uniform_int_distribution<size_t>(0, allowed.size() - 1)(rng)];
        entries[v] = chosen;
      } else if (v.is_base() || req == inbound) {
        chosen = Perm::identity(d);
      } else {
        chosen = *F->transversal(inbound, req);
      }
      effective[v] = chosen;
      if (depth < opts.radius)
        for (Color c = 1; c <= d; ++c) {
          if (!v.is_base() && c == v.last()) continue;
          next.push_back(v.child(c));
        }
    }
    level = std::move(next);
  }
  return Portrait(detail::make_leaf(std::move(F), root, entries));
}

Vertex Portrait::apply(const Vertex& v) const { return detail::node_apply(*node_, v); }
Perm Portrait::local_perm(const Vertex& v) const { return detail::node_local_perm(*node_, v); }
const Vertex& Portrait::root_image() const { return node_->root_img; }
int Portrait::support_bound() const { return node_->support; }
int Portrait::token_depth() const { return node_->token_depth; }
std::string Portrait::token(const Vertex& v) const { return detail::node_token(*node_, v); }
bool Portrait::is_leaf() const { return node_->kind == Node::Kind::Leaf; }

const std::map<Vertex, Perm>& Portrait::leaf_entries() const {
  if (!is_leaf()) throw std::logic_error("leaf_entries on a composite element");
  return node_->entries;
}

Portrait compose(const Portrait& a, const Portrait& b) {
  return Portrait(detail::make_compose(a.node_, b.node_));
}

Portrait inverse(const Portrait& g) { return Portrait(detail::make_inverse(g.node_)); }

Portrait Portrait::pow(int n) const {
  if (n < 0) return inverse(pow(-n));
  if (n == 0) return identity(node_->F);
  if (n == 1) return *this;
  Portrait h = pow(n / 2);
  Portrait sq = compose(h, h);
  return (n % 2) ? compose(*this, sq) : sq;
}

namespace {

nlohmann::json node_to_json(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Leaf: {
      nlohmann::json entries = nlohmann::json::object();
      for (const auto& [v, p] : n.entries) entries[v.word()] = p.to_string();
      return {{"root_image", n.root.word()}, {"entries", entries}, {"radius", n.stored_depth}};
    }
    case Node::Kind::Compose:
      return {{"compose", {node_to_json(*n.a), node_to_json(*n.b)}}};
    case Node::Kind::Inverse:
      return {{"inverse", node_to_json(*n.a)}};
  }
  throw std::logic_error("bad node kind");
}

Portrait node_from_json(const GroupPtr& F, const nlohmann::json& j) {
  if (j.contains("compose")) {
    const auto& parts = j.at("compose");
    if (!parts.is_array() || parts.size() != 2)
      throw std::invalid_argument("\"compose\" expects a two-element array [outer, inner]");
    return compose(node_from_json(F, parts[0]), node_from_json(F, parts[1]));
  }
  if (j.contains("inverse")) return inverse(node_from_json(F, j.at("inverse")));
  int d = F->degree();
  Vertex root = Vertex::parse(j.at("root_image").get<std::string>(), d);
  std::map<Vertex, Perm> entries;
  if (j.contains("entries"))
    for (const auto& [key, val] : j.at("entries").items())
      entries[Vertex::parse(key, d)] = Perm::parse(val.get<std::string>(), d);
  return Portrait::leaf(F, root, entries);
}

}  // namespace

std::string Portrait::to_json() const { return node_to_json(*node_).dump(); }

Portrait Portrait::from_json(GroupPtr F, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("element JSON: ") + e.what());
  }
  return node_from_json(F, j);
}

RayWalkResult ray_walk(const Portrait& g, const BoundaryPoint& xi, int max_depth) {
  int pre = static_cast<int>(xi.prefix().size());
  int per = static_cast<int>(xi.period().size());
  int trust = std::max(g.token_depth(), pre) + 1;
  int cap = max_depth > 0 ? max_depth : trust + 40 + 30 * per;
  if (cap < trust + 2 * per)
    throw InsufficientDepth("ray walk cap " + std::to_string(cap) + " below certification threshold " +
                            std::to_string(trust + 2 * per));

  std::unordered_map<std::string, int> seen;
  std::vector<Vertex> images;
  images.reserve(cap + 1);
  Vertex u = g.root_image();
  images.push_back(u);
  for (int n = 0; n <= cap; ++n) {
    Vertex v = xi.ray_vertex(n);
    if (n >= trust) {
      std::string state = std::to_string(xi.phase(n)) + ":" + g.token(v);
      auto [it, fresh] = seen.try_emplace(std::move(state), n);
      if (!fresh) {
        int m = it->second;
        const Vertex& um = images[m];
        const Vertex& un = images[n];
        // Beyond the trust depth the image walk is in its append regime, so
        // the window's appended colors repeat verbatim forever.
        if (!um.is_prefix_of(un) || un.length() != um.length() + (n - m))
          throw std::logic_error("ray walk: image popped past the trust depth");
        std::string block = un.word().substr(um.word().size());
        RayWalkResult r;
        r.transient = m;
        r.cycle_length = n - m;
        r.image_end = BoundaryPoint(um.word(), block, g.group().degree());
        r.fixes_end = (*r.image_end == xi);
        if (r.fixes_end)
          r.busemann_shift = um.length() - m;
        else
          r.agreement = boundary_agreement(*r.image_end, xi);
        return r;
      }
    }
    Perm sigma = g.local_perm(v);
    u = u.step(sigma(xi.letter(n)));
    images.push_back(u);
  }
  throw InsufficientDepth("ray walk exhausted depth " + std::to_string(cap) +
                          " without a certified cycle; raise the probe depth");
}

bool fixes_boundary_point(const Portrait& g, const BoundaryPoint& xi, int certify_depth) {
  return ray_walk(g, xi, certify_depth).fixes_end;
}

namespace {

int displacement(const Portrait& g, const Vertex& v) { return dist(v, g.apply(v)); }

/// Token-certified end of the forward orbit of v under g (hyperbolic g with v
/// on the axis). Returns the exact end, or nullopt past depth_cap; prefix_out
/// receives the deepest probed orbit word either way.
std::optional<BoundaryPoint> orbit_end(const Portrait& g, const Vertex& v, int depth_cap, std::string* prefix_out) {
  std::unordered_map<std::string, std::pair<int, std::string>> seen;
  Vertex u = v;
  *prefix_out = u.word();
  for (int n = 0;; ++n) {
    if (n > 4 * depth_cap + 8) throw std::logic_error("orbit walk failed to progress");
    Vertex next = g.apply(u);
    if (next.length() > depth_cap) return std::nullopt;
    *prefix_out = next.word();
    bool append = u.is_prefix_of(next) && next.length() > u.length();
    if (append && u.length() > g.token_depth()) {
      std::string block = next.word().substr(u.word().size());
      // The next block is the sigma-image of this one along the axis segment,
      // so (token, block) determines the entire future.
      std::string state = g.token(u) + "|" + block;
      auto [it, fresh] = seen.try_emplace(state, std::pair{n, u.word()});
      if (!fresh) {
        const std::string& wm = it->second.second;
        return BoundaryPoint(wm, u.word().substr(wm.size()), g.group().degree());
      }
    }
    u = next;
  }
}

}  // namespace

Classification classify(const Portrait& g, int probe_depth) {
  int d0 = displacement(g, Vertex::base());
  if (probe_depth < d0 + 2)
    throw InsufficientDepth("probe depth " + std::to_string(probe_depth) + " below displacement bound " +
                            std::to_string(d0 + 2));

  // Displacement is convex along geodesics: strict descent finds the global
  // minimum, and the descent path is the geodesic toward it.
  Vertex v;
  int dv = d0;
  while (dv > 0) {
    bool moved = false;
    if (!v.is_base()) {
      Vertex w = v.parent();
      int dw = displacement(g, w);
      if (dw < dv) {
        v = w;
        dv = dw;
        moved = true;
      }
    }
    for (Color c = 1; c <= g.group().degree() && !moved; ++c) {
      if (!v.is_base() && c == v.last()) continue;
      Vertex w = v.child(c);
      int dw = displacement(g, w);
      if (dw < dv) {
        v = w;
        dv = dw;
        moved = true;
      }
    }
    if (!moved) break;
    if (v.length() > probe_depth)
      throw InsufficientDepth("displacement descent left the probe ball");
  }

  Classification out;
  if (dv % 2 != 0) throw std::logic_error("odd displacement minimum for a type-preserving element");
  out.translation_length = dv;
  out.min_vertex = v;
  out.kind = dv == 0 ? IsometryKind::Elliptic : IsometryKind::Hyperbolic;
  if (out.kind == IsometryKind::Hyperbolic) {
    auto att = orbit_end(g, v, probe_depth, &out.attracting_prefix);
    Portrait gi = inverse(g);
    auto rep = orbit_end(gi, v, probe_depth, &out.repelling_prefix);
    out.attracting = att;
    out.repelling = rep;
    out.directions_exact = att.has_value() && rep.has_value();
  }
  return out;
}

Classification classify(const Portrait& g) {
  int d0 = displacement(g, Vertex::base());
  int probe = std::max({32, 2 * (d0 + g.token_depth()) + 16});
  return classify(g, probe);
}

}  // namespace arboreal
