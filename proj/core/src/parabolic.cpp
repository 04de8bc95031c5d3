#include "arboreal/parabolic.hpp"

#include <stdexcept>
#include <string>

namespace arboreal {

namespace {

ParabolicSpec make_spec(ParabolicKind kind, GroupPtr F, const BoundaryPoint& xi,
                        const Vertex& base) {
  if (!F) throw std::invalid_argument("parabolic subgroup: null local group");
  if (xi.letter(0) < 1 || xi.letter(0) > F->degree())
    throw std::invalid_argument("parabolic subgroup: end colors exceed the tree degree");
  if (!xi.on_ray(base))
    throw std::invalid_argument("parabolic subgroup: base vertex must lie on the ray");
  ParabolicSpec H;
  H.kind = kind;
  H.xi = xi;
  H.base = base;
  H.F = std::move(F);
  return H;
}

}  // namespace

ParabolicSpec full_fixator(GroupPtr F, const BoundaryPoint& xi) {
  return make_spec(ParabolicKind::FullFixator, std::move(F), xi, Vertex::base());
}

ParabolicSpec horospherical(GroupPtr F, const BoundaryPoint& xi) {
  return make_spec(ParabolicKind::Horospherical, std::move(F), xi, Vertex::base());
}

ParabolicSpec ray_fixator(GroupPtr F, const BoundaryPoint& xi, const Vertex& base) {
  return make_spec(ParabolicKind::RayFixator, std::move(F), xi, base);
}

std::string kind_name(ParabolicKind kind) {
  switch (kind) {
    case ParabolicKind::FullFixator:
      return "full";
    case ParabolicKind::Horospherical:
      return "horospherical";
    case ParabolicKind::RayFixator:
      return "ray";
  }
  throw std::logic_error("kind_name: unknown kind");
}

std::optional<RayWalkResult> membership_walk(const ParabolicSpec& H, const Portrait& g,
                                             int depth) {
  if (!g.valid()) throw std::invalid_argument("contains: invalid element");
  if (g.group_ptr().get() != H.F.get())
    throw std::invalid_argument("contains: element and subgroup use different local groups");
  RayWalkResult rw = ray_walk(g, H.xi, depth);
  switch (H.kind) {
    case ParabolicKind::FullFixator:
      if (rw.fixes_end) return rw;
      return std::nullopt;
    case ParabolicKind::Horospherical:
      if (rw.fixes_end && rw.busemann_shift == 0) return rw;
      return std::nullopt;
    case ParabolicKind::RayFixator: {
      if (!rw.fixes_end || rw.busemann_shift != 0) return std::nullopt;
      // Shift zero means the walk is eventually the identity on ray vertices;
      // checking through the certified transient plus two cycles pins every
      // depth, and vertices before the base are unconstrained.
      int upto = rw.transient + 2 * rw.cycle_length + 2;
      for (int n = H.base.length(); n <= upto; ++n) {
        Vertex v = H.xi.ray_vertex(n);
        if (g.apply(v) != v) return std::nullopt;
      }
      return rw;
    }
  }
  throw std::logic_error("contains: unknown kind");
}

bool contains(const ParabolicSpec& H, const Portrait& g, int depth) {
  return membership_walk(H, g, depth).has_value();
}

MinimalHyperbolic minimal_hyperbolic(const ParabolicSpec& H) {
  if (H.kind != ParabolicKind::FullFixator)
    throw UnimodularCase("minimal_hyperbolic: " + kind_name(H.kind) +
                         " subgroup has no hyperbolic elements (unimodular case)");
  int limit = 2 * static_cast<int>(H.xi.to_string().size());
  std::string first_error;
  for (int shift = 2; shift <= limit; shift += 2) {
    try {
      Portrait gamma = translate_along_ray(H.F, H.xi, shift);
      return MinimalHyperbolic{gamma, shift, Vertex::base()};
    } catch (const std::invalid_argument& err) {
      if (first_error.empty()) first_error = err.what();
    }
  }
  throw std::invalid_argument("minimal_hyperbolic: no ray translation realizable up to shift " +
                              std::to_string(limit) + " (first failure: " + first_error + ")");
}

Rational modular_value(const ParabolicSpec& H, const Portrait& gamma, int depth) {
  if (H.kind != ParabolicKind::FullFixator)
    return Rational(1);  // no hyperbolic directions: the subgroup is unimodular
  RayWalkResult rw = ray_walk(gamma, H.xi, depth);
  if (!rw.fixes_end || rw.busemann_shift <= 0)
    throw std::invalid_argument("modular_value: element is not a translation toward the end");
  int l = rw.busemann_shift;
  for (int n = 0; n <= rw.transient + 2 * rw.cycle_length + 2; ++n) {
    if (gamma.apply(H.xi.ray_vertex(n)) != H.xi.ray_vertex(n + l))
      throw std::invalid_argument("modular_value: element does not translate along the ray");
  }

  // Index of the fixator of [gamma(x0), xi) inside the fixator of [x0, xi):
  // the orbit of x0 under the deeper fixator, counted level by level walking
  // back from gamma(x0). At ray vertex n+1 the local permutation must fix the
  // color toward xi up to the inherited coset translate, leaving exactly the
  // stabilizer orbit of the parent color as choices.
  BigInt index = 1;
  for (int i = 0; i < l; ++i)
    index *= static_cast<long>(H.F->stabilizer_orbit(H.xi.letter(i + 1), H.xi.letter(i)).size());

  Rational value(BigInt(1), index);
  Rational lower = rational_pow(Rational(BigInt(1), BigInt(H.F->degree() - 1)), l);
  if (value < lower || value >= 1)
    throw std::logic_error("modular_value: index escapes the structural bounds");
  return value;
}

Rational modular_of(const ParabolicSpec& H, const MinimalHyperbolic& gamma_min, const Portrait& h,
                    int depth) {
  if (H.kind != ParabolicKind::FullFixator) return Rational(1);
  RayWalkResult rw = ray_walk(h, H.xi, depth);
  if (!rw.fixes_end) throw std::invalid_argument("modular_of: element does not fix the end");
  if (rw.busemann_shift == 0) return Rational(1);
  if (gamma_min.length <= 0 || rw.busemann_shift % gamma_min.length != 0)
    throw std::logic_error("modular_of: shift is not a multiple of the minimal length");
  Rational delta = modular_value(H, gamma_min.gamma, depth);
  return rational_pow(delta, rw.busemann_shift / gamma_min.length);
}

}  // namespace arboreal
