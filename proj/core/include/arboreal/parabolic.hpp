#pragma once

#include "arboreal/decomposition.hpp"
#include "arboreal/element.hpp"
#include "arboreal/rational.hpp"

#include <optional>

namespace arboreal {

/// Closed subgroups of the stabilizer of an end xi.
///  - FullFixator:   every element fixing the end xi.
///  - Horospherical: elements fixing xi with zero Busemann shift.
///  - RayFixator:    elements fixing the ray [base, xi) pointwise.
enum class ParabolicKind { FullFixator, Horospherical, RayFixator };

struct ParabolicSpec {
  ParabolicKind kind = ParabolicKind::FullFixator;
  BoundaryPoint xi;
  Vertex base;  // on the ray; relevant for RayFixator only
  GroupPtr F;
};

ParabolicSpec full_fixator(GroupPtr F, const BoundaryPoint& xi);
ParabolicSpec horospherical(GroupPtr F, const BoundaryPoint& xi);
ParabolicSpec ray_fixator(GroupPtr F, const BoundaryPoint& xi, const Vertex& base = Vertex::base());

std::string kind_name(ParabolicKind kind);

/// Exact membership test (end fixing via the certified ray walk). depth caps
/// the walk; 0 picks the default budget.
bool contains(const ParabolicSpec& H, const Portrait& g, int depth = 0);

/// Membership plus the certified walk that witnessed it, in one pass.
std::optional<RayWalkResult> membership_walk(const ParabolicSpec& H, const Portrait& g,
                                             int depth = 0);

/// Requested operation only makes sense when the subgroup has hyperbolic
/// elements; these kinds do not.
struct UnimodularCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MinimalHyperbolic {
  Portrait gamma;
  int length = 0;
  Vertex base_vertex;  // on the axis, closest to x0
};

/// Shortest hyperbolic element of H translating along [x0, xi) toward xi.
/// Throws UnimodularCase for Horospherical/RayFixator kinds and
/// invalid_argument when no even shift up to a full period is realizable.
MinimalHyperbolic minimal_hyperbolic(const ParabolicSpec& H);

/// Modular function of H at a certified ray translation gamma: 1/index of the
/// deeper ray fixator in the shallower one. Exact; satisfies
/// 1/(d-1)^{|gamma|} <= value < 1.
Rational modular_value(const ParabolicSpec& H, const Portrait& gamma, int depth = 0);

/// Modular function of H at an arbitrary member h: modular_value(gamma_min)
/// raised to the Busemann shift of h divided by |gamma_min|. Elliptic members
/// give 1.
Rational modular_of(const ParabolicSpec& H, const MinimalHyperbolic& gamma_min, const Portrait& h,
                    int depth = 0);

}  // namespace arboreal
