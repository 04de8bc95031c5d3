#include "arboreal/decomposition.hpp"

#include <stdexcept>
#include <string>

namespace arboreal {

KAKTriple kak_decompose(const Portrait& g, const Edge& e) {
  if (!g.valid()) throw std::invalid_argument("kak_decompose: invalid element");
  const LocalGroup& F = g.group();
  if (!F.passes_gate())
    throw std::invalid_argument(
        "kak_decompose: local group must be primitive and not cyclic of prime order");
  if (!e.v.is_base())
    throw std::invalid_argument("kak_decompose: reference edge must be at the base vertex");
  if (e.c < 1 || e.c > F.degree()) throw std::invalid_argument("kak_decompose: edge color out of range");

  GroupPtr Fp = g.group_ptr();
  Vertex w = g.apply(Vertex::base());
  if (w.is_base()) return KAKTriple{g, Portrait::identity(Fp), Portrait::identity(Fp)};

  auto sigma = F.transversal(w.letter(0), e.c);
  if (!sigma)
    throw std::logic_error("kak_decompose: transitive local group lacks a transversal");
  Portrait k = Portrait::rotation(Fp, *sigma);
  Vertex v = k.apply(w);

  Color c_next = 0;
  for (Color c = 1; c <= F.degree(); ++c) {
    if (c == v.last()) continue;
    if (F.transversal(e.c, c)) {
      c_next = c;
      break;
    }
  }
  if (c_next == 0)
    throw std::logic_error("kak_decompose: no admissible continuation color past the image path");

  Portrait gamma = Portrait::build_hyperbolic(Fp, e, Edge{v, c_next});
  Portrait k2 = compose(inverse(gamma), compose(k, g));
  if (!k2.apply(Vertex::base()).is_base())
    throw std::logic_error("kak_decompose: right factor fails to fix the base vertex");
  return KAKTriple{inverse(k), gamma, k2};
}

ProjResult proj_interval(const Portrait& g, const BoundaryPoint& xi, int probe_depth) {
  Classification cl = probe_depth > 0 ? classify(g, probe_depth) : classify(g);
  if (cl.kind != IsometryKind::Hyperbolic)
    throw std::invalid_argument("proj_interval: element is not hyperbolic");
  if (!cl.min_vertex.is_base())
    throw std::invalid_argument("proj_interval: axis does not pass through the base vertex");
  if (!cl.directions_exact || !cl.attracting)
    throw InsufficientDepth("proj_interval: attracting end not certified at this probe depth");
  const BoundaryPoint& att = *cl.attracting;
  if (att.letter(0) != xi.letter(0))
    throw std::invalid_argument(
        "proj_interval: attracting end leaves the base vertex away from the ray");
  if (att == xi) return ProjResult{true, Vertex::base()};
  int a = boundary_agreement(att, xi);
  ProjResult r;
  r.infinite = false;
  r.v = xi.ray_vertex(a);
  return r;
}

Portrait translate_along_ray(GroupPtr F, const BoundaryPoint& xi, int shift) {
  if (!F) throw std::invalid_argument("translate_along_ray: null local group");
  if (shift == 0 || shift % 2 != 0)
    throw std::invalid_argument("translate_along_ray: shift must be a nonzero even integer");
  if (shift < 0) return inverse(translate_along_ray(F, xi, -shift));

  int horizon = static_cast<int>(xi.to_string().size()) + 2;  // transient plus a full cycle
  std::map<Vertex, Perm> entries;
  for (int n = 0; n <= horizon; ++n) {
    std::optional<Perm> sigma;
    if (n == 0) {
      sigma = F->transversal(xi.letter(0), xi.letter(shift));
    } else {
      sigma = F->transversal2(xi.letter(n), xi.letter(n + shift), xi.letter(n - 1),
                              xi.letter(n + shift - 1));
    }
    if (!sigma)
      throw std::invalid_argument("translate_along_ray: blocked at depth " + std::to_string(n) +
                                  ": no permutation takes " + std::to_string(xi.letter(n)) +
                                  " to " + std::to_string(xi.letter(n + shift)) +
                                  " compatibly with the inbound edge");
    if (!sigma->is_identity()) entries.emplace(xi.ray_vertex(n), *sigma);
  }

  Portrait gamma = Portrait::leaf(F, xi.ray_vertex(shift), entries);
  RayWalkResult rw = ray_walk(gamma, xi);
  if (!rw.fixes_end || rw.busemann_shift != shift)
    throw std::invalid_argument(
        "translate_along_ray: canonical continuation breaks the translation beyond the stored "
        "entries (shift " +
        std::to_string(shift) + ")");
  return gamma;
}

DoubleCosetRep canonical_double_coset_rep(const Portrait& g, const BoundaryPoint& xi) {
  if (!g.valid()) throw std::invalid_argument("canonical_double_coset_rep: invalid element");
  Vertex w = g.apply(Vertex::base());
  GroupPtr Fp = g.group_ptr();
  if (w.is_base()) return DoubleCosetRep{Portrait::identity(Fp), g, Portrait::identity(Fp)};
  int L = w.length();
  Portrait gamma = translate_along_ray(Fp, xi, L);
  Portrait k = Portrait::path_rotation(Fp, xi.ray_vertex(L), w);
  Portrait k_prime = compose(inverse(gamma), compose(inverse(k), g));
  if (!k_prime.apply(Vertex::base()).is_base())
    throw std::logic_error("canonical_double_coset_rep: residual factor fails to fix the base");
  return DoubleCosetRep{gamma, k, k_prime};
}

}  // namespace arboreal
