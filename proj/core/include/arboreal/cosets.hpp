#pragma once

#include <optional>
#include <vector>

#include "arboreal/parabolic.hpp"

namespace arboreal {

/// One cell of K/(K cap H) at a finite truncation depth. The label is the
/// image of the depth-n ray vertex; the representative carries the ray path
/// onto the label path.
struct CosetRep {
  Portrait rep;
  Vertex label;
};

/// All depth-n cells of K/(K cap H), K the stabilizer of x0, in label order.
/// The trivial cell (label on the ray) comes with the identity representative.
std::vector<CosetRep> enumerate_cosets(const ParabolicSpec& H, int n);

/// Index in K of the pointwise fixator of the path [x0, x].
BigInt fixator_index(const LocalGroup& F, const Vertex& x);

struct ContainmentSolution {
  Vertex k1_label;
  Vertex k2_label;
};

/// Shape of g*K*H intersected with K*H for a subgroup without hyperbolic
/// elements: solutions of k2^{-1} g k1 in H over depth-n cells, all funneled
/// through one coset of the fixator of [x0, x_g], x_g the ray vertex at half
/// the displacement of g.
struct ContainmentReport {
  std::optional<CosetRep> k_g;  // left factor of the funnel coset (first solution)
  Vertex x_g;
  bool verified = false;  // every solution's k2 agrees with k_g on [x0, x_g]
  bool empty = false;
  std::vector<ContainmentSolution> solutions;
};

ContainmentReport unimodular_containment(const Portrait& g, const ParabolicSpec& H, int n);

/// One cell of the intersection g*f1*K*H cap f2*K*H: the cell f2*k*H together
/// with the unique depth-n k_prime and member h with g*f1*k_prime = f2*k*h.
struct IntersectionCell {
  CosetRep k;
  CosetRep kprime;
  Portrait h;
  int kprime_count = 0;  // depth-n witnesses; 1 whenever a solution exists at all
};

std::vector<IntersectionCell> coset_decomposition(const Portrait& g, const Portrait& f1,
                                                  const Portrait& f2, const ParabolicSpec& H,
                                                  int n);

/// Position of the branch vertex of [x0, k2(xi)) off the axis line of g:
/// on the attracting side (or at x0), strictly between x0 and g^{-1}(x0) on
/// the repelling side, or at g^{-1}(x0) and beyond.
enum class SolutionCase { TowardXi, Between, BeyondInverse };

struct SolutionEntry {
  Vertex k1_label;
  Vertex k2_label;
  SolutionCase tag = SolutionCase::TowardXi;
};

/// Solutions of k1 g k2 in H with k1, k2 nontrivial depth-n cells, grouped by
/// the power class m of the minimal translation. Every solution is checked
/// against the structural constraints: |m| |gamma| <= dist(x0, g(x0)) and k1
/// fixing [x0, x_h] pointwise, where dist(x0, x_h) = (dist + m |gamma|)/2.
struct SolutionDomain {
  int m = 0;
  Vertex x_h;
  std::vector<SolutionEntry> solutions;
  bool constraint_vacuous = false;  // x_h is the base vertex
};

std::vector<SolutionDomain> solution_domains(const Portrait& g, const ParabolicSpec& H,
                                             const MinimalHyperbolic& gamma_min, int n);

std::string case_name(SolutionCase c);

}  // namespace arboreal
