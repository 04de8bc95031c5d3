#pragma once

#include "arboreal/element.hpp"

namespace arboreal {

/// g = k1 * a * k2 (exact identity): k1, k2 fix the base vertex, a is a
/// hyperbolic translation whose axis passes through x0 and leaves it via the
/// reference edge.
struct KAKTriple {
  Portrait k1;
  Portrait a;
  Portrait k2;
};

/// Cartan-style factorization with respect to the reference edge e = (x0, c).
/// Requires the local group to be primitive and not cyclic of prime order.
/// Elements fixing x0 come back as (g, id, id).
KAKTriple kak_decompose(const Portrait& g, const Edge& e);

/// Projection of the attracting end of g onto (x0, xi]: the deepest vertex
/// common to [x0, attracting) and [x0, xi), or xi itself when they coincide.
struct ProjResult {
  bool infinite = false;
  Vertex v;  // meaningful only when !infinite; never the base vertex
};

/// Requires g hyperbolic with axis through x0 and attracting end leaving x0
/// along the first edge of [x0, xi); throws invalid_argument otherwise.
ProjResult proj_interval(const Portrait& g, const BoundaryPoint& xi, int probe_depth = 0);

/// Exact translation by `shift` toward xi along the ray [x0, xi): maps ray
/// vertex n to ray vertex n + shift for every n. Throws invalid_argument when
/// the local group cannot transport the ray (naming the failing depth) or when
/// the finite-entry construction fails end certification.
Portrait translate_along_ray(GroupPtr F, const BoundaryPoint& xi, int shift);

/// g = k * gamma * k_prime (exact identity): gamma the canonical translation
/// along [x0, xi) by dist(x0, g(x0)), k an element of K carrying the ray onto
/// the path [x0, g(x0)], k_prime the remaining stabilizer factor.
struct DoubleCosetRep {
  Portrait gamma;
  Portrait k;
  Portrait k_prime;
};

DoubleCosetRep canonical_double_coset_rep(const Portrait& g, const BoundaryPoint& xi);

}  // namespace arboreal
