#pragma once

#include "arboreal/config.hpp"
#include "arboreal/cosets.hpp"
#include "arboreal/parabolic.hpp"
#include "arboreal/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace arboreal {

/// Left Haar data for the induced-measure computations: rho is 1 on the
/// compact open K and transforms by the modular function of H across the
/// hyperbolic direction. Unimodular kinds carry delta = 1 and no translation.
struct RhoFunction {
  ParabolicSpec H;
  Rational delta{1};
  int gamma_length = 0;
  Portrait gamma;
};

RhoFunction make_rho(const ParabolicSpec& H);

/// Evaluates rho at g in KH by certifying a factorization g = k h: k is the
/// canonical rotation onto the image end of the ray, h fixes the end, and the
/// value is delta raised to the Busemann shift of h over the period. Throws
/// InsufficientDepth when no stored-depth rotation locks onto the end and
/// std::invalid_argument when g is not in KH at the certified depth.
Rational rho_eval(const RhoFunction& rho, const Portrait& g, int depth = 0);

struct RefineNeeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Radon-Nikodym value of the g-translate of the induced measure on one
/// depth-n cell: rho(g k_cell). Certifies constancy by re-evaluating on the
/// first child cell and throws RefineNeeded when the two disagree.
Rational radon_nikodym(const RhoFunction& rho, const Portrait& g, const CosetRep& cell,
                       int depth = 0);

/// Uniform probability on the depth-n cell partition of the K-orbit closure:
/// every cell gets mass 1 / cells.
struct CylinderMeasure {
  int depth = 0;
  BigInt cells{1};
};

CylinderMeasure cylinder_measure(const ParabolicSpec& H, int depth);
Rational cell_mass(const CylinderMeasure& mu);

/// The decay functional at one group element: sum over the certified cells of
/// the double coset decomposition of t between f1 K and f2 K of
/// delta^{-m/2} times the cell mass, where m is the translation class of the
/// cell witness. Unimodular kinds weight every certified cell by its plain
/// mass. Exact up to a single square root of delta.
QuadExt bound_integral(const RhoFunction& rho, const Portrait& t, const Portrait& f1,
                       const Portrait& f2, int depth);

/// Closed comparison series at displacement M (even, at least 2) with period
/// 2p and ratio t: the three block sum whose value dominates the decay
/// functional along a translation power schedule. Requires
/// 1/(d-1)^{2p} <= t < 1.
QuadExt sn_sequence(int d, int p, const Rational& t, long M);

struct DecayRow {
  int n = 0;
  int tn_dist = 0;
  int depth = 0;
  QuadExt bound;
  QuadExt sn;
  Rational fixator_term{1};
};

struct DecayReport {
  std::vector<DecayRow> rows;
  Rational C{0};
  bool dominated = false;
  bool eventually_decreasing = false;
  bool final_small = false;
  std::string primary;

  bool pass() const { return dominated && eventually_decreasing && final_small; }
};

/// Runs the full schedule t_n = gamma^n for n = 1..n_max, with per-row cell
/// depth max(config depth, displacement) for the fixator kind and
/// max(config depth, displacement / 2) for the unimodular kinds. Cell sums
/// run on a thread pool (ARBOREAL_THREADS caps it) with exact associative
/// reduction, so the report is deterministic.
DecayReport decay_experiment(const ExperimentConfig& cfg);

std::string decay_csv(const DecayReport& report, const ExperimentConfig& cfg);
std::string domains_csv(const std::vector<SolutionDomain>& domains, const ExperimentConfig& cfg);

}  // namespace arboreal
