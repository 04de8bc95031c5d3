// Acceptance gate: one line per criterion, exit 0 only when all hold.
// Every check is exact (rational or quadratic-extension comparisons); wall
// clock budgets are enforced where a criterion carries one.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arboreal/measure.hpp"

#include "oracles.hpp"

using namespace arboreal;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;  // 0 means no budget
};

GroupPtr sym3() { return std::make_shared<LocalGroup>(LocalGroup::parse(3, "(12),(123)")); }
GroupPtr dih5() { return std::make_shared<LocalGroup>(LocalGroup::parse(5, "(12345),(25)(34)")); }

Classification classify_hard(const Portrait& g) {
  try {
    return classify(g);
  } catch (const InsufficientDepth&) {
    return classify(g, 64);
  }
}

std::optional<RayWalkResult> walk_hard(const ParabolicSpec& H, const Portrait& g) {
  try {
    return membership_walk(H, g);
  } catch (const InsufficientDepth&) {
    return membership_walk(H, g, 96);
  }
}

bool contains_hard(const ParabolicSpec& H, const Portrait& g) {
  return walk_hard(H, g).has_value();
}

Outcome criterion_even_lengths() {
  Outcome out;
  out.budget = 10.0;
  long hyperbolic = 0, odd = 0, total = 0;
  for (auto [F, seed] : {std::pair{sym3(), 1001UL}, std::pair{dih5(), 5005UL}}) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 500; ++i) {
      Portrait g = Portrait::random(F, rng);
      ++total;
      Classification cl = classify_hard(g);
      if (cl.kind != IsometryKind::Hyperbolic) continue;
      ++hyperbolic;
      if (cl.translation_length <= 0 || cl.translation_length % 2 != 0) ++odd;
    }
  }
  out.pass = (total == 1000 && odd == 0 && hyperbolic > 0);
  std::ostringstream d;
  d << total << " portraits, " << hyperbolic << " hyperbolic, " << odd
    << " with odd translation length";
  out.detail = d.str();
  return out;
}

Outcome criterion_kak_roundtrip() {
  Outcome out;
  out.budget = 30.0;
  long failures = 0, total = 0;
  for (auto [F, seed] : {std::pair{sym3(), 2002UL}, std::pair{dih5(), 7007UL}}) {
    Edge e{Vertex::base(), 1};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 250; ++i) {
      Portrait g = Portrait::random(F, rng);
      ++total;
      KAKTriple kak = kak_decompose(g, e);
      Portrait back = compose(kak.k1, compose(kak.a, kak.k2));
      bool ok = test::equal_on_ball(back, g, 4);
      ok = ok && kak.k1.apply(Vertex::base()).is_base();
      ok = ok && kak.k2.apply(Vertex::base()).is_base();
      ok = ok && dist(Vertex::base(), kak.a.apply(Vertex::base())) ==
                     dist(Vertex::base(), g.apply(Vertex::base()));
      if (!ok) ++failures;
    }
  }
  out.pass = (total == 500 && failures == 0);
  std::ostringstream d;
  d << total << " roundtrips, " << failures << " mismatches";
  out.detail = d.str();
  return out;
}

Outcome criterion_modular_bounds() {
  Outcome out;
  out.budget = 5.0;
  std::ostringstream d;
  bool ok = true;
  Rational delta3;
  for (auto [F, name] : {std::pair{sym3(), "d=3"}, std::pair{dih5(), "d=5"}}) {
    BoundaryPoint xi = BoundaryPoint::parse("|12", F->degree());
    ParabolicSpec H = full_fixator(F, xi);
    MinimalHyperbolic mh = minimal_hyperbolic(H);
    Rational delta = modular_value(H, mh.gamma);
    Rational lower(BigInt(1), boost::multiprecision::pow(BigInt(F->degree() - 1),
                                                         static_cast<unsigned>(mh.length)));
    bool in_range = (delta >= lower && delta < 1);
    ok = ok && in_range;
    if (F->degree() == 3) delta3 = delta;
    d << name << " value " << to_string(delta) << (in_range ? " in range; " : " OUT OF RANGE; ");
  }
  GroupPtr F = sym3();
  BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
  ParabolicSpec H = full_fixator(F, xi);
  MinimalHyperbolic mh = minimal_hyperbolic(H);
  for (int j = 1; j <= 2; ++j) {
    auto gens = test::path_fixator_gens(F, xi.ray_vertex(j), j + mh.length);
    auto orbit = test::bfs_orbit(gens, xi.ray_vertex(j + mh.length));
    bool agrees = (delta3 == Rational(1, static_cast<long>(orbit.size())) && delta3 == Rational(1, 4));
    ok = ok && agrees;
    d << "orbit oracle j=" << j << " size " << orbit.size() << (agrees ? "; " : " DISAGREES; ");
  }
  out.pass = ok;
  out.detail = d.str();
  return out;
}

struct ScanStats {
  long solutions = 0;
  long violations = 0;
};

ScanStats scan_pairs(const ParabolicSpec& H, const MinimalHyperbolic& mh, const Portrait& g,
                     const std::vector<CosetRep>& reps, int) {
  ScanStats st;
  int L = dist(Vertex::base(), g.apply(Vertex::base()));
  for (const CosetRep& k1 : reps) {
    Portrait lead = compose(k1.rep, g);
    for (const CosetRep& k2 : reps) {
      auto w = walk_hard(H, compose(lead, k2.rep));
      if (!w) continue;
      ++st.solutions;
      if (mh.length <= 0 || w->busemann_shift % mh.length != 0) {
        ++st.violations;
        continue;
      }
      int m = w->busemann_shift / mh.length;
      if (std::abs(m) * mh.length > L) {
        ++st.violations;
        continue;
      }
      int xh = (L + m * mh.length) / 2;
      if ((L + m * mh.length) % 2 != 0 || xh < 0) {
        ++st.violations;
        continue;
      }
      for (int j = 0; j <= xh; ++j) {
        Vertex v = H.xi.ray_vertex(j);
        if (k1.rep.apply(v) != v) {
          ++st.violations;
          break;
        }
      }
    }
  }
  return st;
}

Outcome criterion_solution_constraints() {
  Outcome out;
  out.budget = 300.0;
  long solutions = 0, violations = 0;
  for (auto [F, depth] : {std::pair{sym3(), 4}, std::pair{dih5(), 3}}) {
    BoundaryPoint xi = BoundaryPoint::parse("|12", F->degree());
    ParabolicSpec H = full_fixator(F, xi);
    MinimalHyperbolic mh = minimal_hyperbolic(H);
    auto reps = enumerate_cosets(H, depth);
    for (int n = 1; n <= 3; ++n) {
      ScanStats st = scan_pairs(H, mh, mh.gamma.pow(n), reps, depth);
      solutions += st.solutions;
      violations += st.violations;
    }
  }
  out.pass = (violations == 0 && solutions > 0);
  std::ostringstream d;
  d << solutions << " brute force solutions, " << violations << " constraint violations";
  out.detail = d.str();
  return out;
}

Outcome criterion_cell_uniqueness() {
  Outcome out;
  long cells_total = 0, label_clashes = 0, nonunique = 0, identity_fail = 0;
  for (auto [F, depth] : {std::pair{sym3(), 4}, std::pair{dih5(), 3}}) {
    BoundaryPoint xi = BoundaryPoint::parse("|12", F->degree());
    ParabolicSpec H = full_fixator(F, xi);
    MinimalHyperbolic mh = minimal_hyperbolic(H);
    Portrait id = Portrait::identity(F);
    auto reps = enumerate_cosets(H, depth);
    for (int n = 1; n <= 3; ++n) {
      Portrait g = mh.gamma.pow(n);
      auto cells = coset_decomposition(g, id, id, H, depth);
      std::set<Vertex> labels;
      for (const IntersectionCell& cell : cells) {
        ++cells_total;
        if (!labels.insert(cell.k.label).second) ++label_clashes;
        long count = 0;
        Vertex found;
        Portrait inv_k = inverse(cell.k.rep);
        for (const CosetRep& kp : reps) {
          if (!contains_hard(H, compose(inv_k, compose(g, kp.rep)))) continue;
          ++count;
          found = kp.label;
        }
        if (count != 1 || cell.kprime_count != 1 || found != cell.kprime.label) ++nonunique;
        Portrait left = compose(g, cell.kprime.rep);
        Portrait right = compose(cell.k.rep, cell.h);
        if (!test::equal_on_ball(left, right, 4) || !contains_hard(H, cell.h)) ++identity_fail;
      }
    }
  }
  out.pass = (cells_total > 0 && label_clashes == 0 && nonunique == 0 && identity_fail == 0);
  std::ostringstream d;
  d << cells_total << " cells, " << label_clashes << " label clashes, " << nonunique
    << " non-unique witnesses, " << identity_fail << " identity failures";
  out.detail = d.str();
  return out;
}

Outcome criterion_series_numerics() {
  Outcome out;
  out.budget = 1.0;
  Rational t(1, 4);
  std::vector<QuadExt> values;
  bool positive = true;
  for (long M = 2; M <= 200; M += 2) {
    QuadExt s = sn_sequence(3, 1, t, M);
    if (s.sign() <= 0) positive = false;
    values.push_back(s);
  }
  std::size_t i0 = values.size() - 1;
  while (i0 > 0 && (values[i0 - 1] - values[i0]).sign() > 0) --i0;
  long m0 = 2 * static_cast<long>(i0 + 1);
  bool tail_decreasing = (m0 <= 100);
  QuadExt s100 = sn_sequence(3, 1, t, 100);
  bool small = s100 < QuadExt::of_rational(Rational(1, 1000));
  out.pass = positive && tail_decreasing && small;
  std::ostringstream d;
  d << "positive on M=2..200, decreasing from M0=" << m0 << ", S(100) "
    << (small ? "<" : ">=") << " 1/1000";
  out.detail = d.str();
  return out;
}

ExperimentConfig horo_config() {
  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.generators = "(12),(123)";
  cfg.kind = ParabolicKind::Horospherical;
  cfg.xi = "|12";
  cfg.n_max = 10;
  cfg.depth = 3;
  cfg.final_ratio = Rational(1, 100);
  return cfg;
}

ExperimentConfig full5_config() {
  ExperimentConfig cfg;
  cfg.d = 5;
  cfg.generators = "(12345),(25)(34)";
  cfg.kind = ParabolicKind::FullFixator;
  cfg.xi = "|12";
  cfg.n_max = 8;
  cfg.depth = 3;
  cfg.final_ratio = Rational(1, 100);
  return cfg;
}

Outcome criterion_unimodular_decay() {
  Outcome out;
  out.budget = 60.0;
  DecayReport report = decay_experiment(horo_config());
  bool ok = report.rows.size() == 10;
  for (std::size_t i = 1; ok && i < report.rows.size(); ++i)
    if (!(report.rows[i].fixator_term < report.rows[i - 1].fixator_term)) ok = false;
  Rational first = report.rows.front().fixator_term;
  Rational last = report.rows.back().fixator_term;
  bool small = last * Rational(100) < first;
  out.pass = ok && small;
  std::ostringstream d;
  d << report.rows.size() << " rows, fixator terms " << to_string(first) << " .. "
    << to_string(last) << (ok ? " strictly decreasing" : " NOT DECREASING")
    << ", final/initial " << (small ? "< 1/100" : ">= 1/100");
  out.detail = d.str();
  return out;
}

Outcome criterion_general_decay() {
  Outcome out;
  out.budget = 600.0;
  DecayReport report = decay_experiment(full5_config());
  bool ok = report.rows.size() == 8;
  std::size_t i0 = report.rows.size() - 1;
  while (i0 > 0 && (report.rows[i0 - 1].bound - report.rows[i0].bound).sign() > 0) --i0;
  std::size_t suffix = report.rows.size() - i0;
  bool decreasing = suffix >= 3;
  QuadExt first = report.rows.front().bound;
  QuadExt last = report.rows.back().bound;
  bool small = last * Rational(100) < first;
  bool dominated = true;
  for (const DecayRow& row : report.rows)
    if ((row.sn * report.C - row.bound).sign() < 0) dominated = false;
  out.pass = ok && decreasing && small && dominated && report.C > 0;
  std::ostringstream d;
  d << report.rows.size() << " rows, decreasing suffix " << suffix << ", final/initial "
    << (small ? "< 1/100" : ">= 1/100") << ", C=" << to_string(report.C)
    << (dominated ? " dominates rowwise" : " FAILS domination");
  out.detail = d.str();
  return out;
}

Outcome criterion_determinism() {
  Outcome out;
  ExperimentConfig horo = horo_config();
  ExperimentConfig full5 = full5_config();
  std::string h1 = decay_csv(decay_experiment(horo), horo);
  std::string h2 = decay_csv(decay_experiment(horo), horo);
  std::string f1 = decay_csv(decay_experiment(full5), full5);
  std::string f2 = decay_csv(decay_experiment(full5), full5);
  GroupPtr F = sym3();
  ParabolicSpec H = full_fixator(F, BoundaryPoint::parse("|12", 3));
  MinimalHyperbolic mh = minimal_hyperbolic(H);
  std::string d1 = domains_csv(solution_domains(mh.gamma, H, mh, 2), horo);
  std::string d2 = domains_csv(solution_domains(mh.gamma, H, mh, 2), horo);
  bool ok = (h1 == h2) && (f1 == f2) && (d1 == d2) && !h1.empty() && !f1.empty();
  out.pass = ok;
  out.detail = ok ? "repeated runs byte-identical across three report kinds"
                  : "repeated runs differ";
  return out;
}

using CriterionFn = Outcome (*)();

struct Criterion {
  int number;
  const char* name;
  CriterionFn fn;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "even translation lengths on random portraits", criterion_even_lengths},
      {2, "polar factorization roundtrip", criterion_kak_roundtrip},
      {3, "modular value bounds and orbit oracle", criterion_modular_bounds},
      {4, "conjugated translate solution constraints", criterion_solution_constraints},
      {5, "intersection cell uniqueness", criterion_cell_uniqueness},
      {6, "comparison series positivity and decay", criterion_series_numerics},
      {7, "zero shift schedule decay", criterion_unimodular_decay},
      {8, "fixator schedule decay and domination", criterion_general_decay},
      {9, "byte identical reports", criterion_determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = (out.budget == 0.0 || out.seconds < out.budget);
    bool pass = out.pass && in_budget;
    if (!pass) ++failed;
    std::printf("[%s] criterion %d (%s): %s (%.2fs", pass ? "PASS" : "FAIL", c.number, c.name,
                out.detail.c_str(), out.seconds);
    if (out.budget > 0.0)
      std::printf(" of %.0fs budget%s", out.budget, in_budget ? "" : " EXCEEDED");
    std::printf(")\n");
    std::fflush(stdout);
  }
  if (failed == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d of 9 criteria failed\n", failed);
  return 1;
}
