#include "arboreal/cosets.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace arboreal {

std::vector<CosetRep> enumerate_cosets(const ParabolicSpec& H, int n) {
  if (n < 0) throw std::invalid_argument("enumerate_cosets: negative depth");
  const LocalGroup& F = *H.F;
  std::vector<Vertex> labels{Vertex::base()};
  for (int i = 0; i < n; ++i) {
    std::vector<Vertex> next;
    for (const Vertex& w : labels) {
      std::set<Color> letters;
      if (i == 0) {
        for (Color c : F.orbit(H.xi.letter(0))) letters.insert(c);
      } else {
        for (const Perm& sigma : F.coset(H.xi.letter(i - 1), w.letter(i - 1)))
          letters.insert(sigma(H.xi.letter(i)));
      }
      for (Color c : letters) next.push_back(w.child(c));
    }
    labels = std::move(next);
  }
  std::sort(labels.begin(), labels.end());
  std::vector<CosetRep> out;
  out.reserve(labels.size());
  Vertex from = H.xi.ray_vertex(n);
  for (const Vertex& label : labels)
    out.push_back(CosetRep{Portrait::path_rotation(H.F, from, label), label});
  return out;
}

BigInt fixator_index(const LocalGroup& F, const Vertex& x) {
  if (x.is_base()) return BigInt(1);
  BigInt index(F.orbit(x.letter(0)).size());
  for (int i = 1; i < x.length(); ++i)
    index *= static_cast<long>(F.stabilizer_orbit(x.letter(i - 1), x.letter(i)).size());
  return index;
}

ContainmentReport unimodular_containment(const Portrait& g, const ParabolicSpec& H, int n) {
  if (H.kind == ParabolicKind::FullFixator)
    throw std::invalid_argument("unimodular_containment: requires a subgroup without hyperbolic "
                                "elements");
  Vertex w = g.apply(Vertex::base());
  int L = w.length();

  ContainmentReport report;
  report.x_g = H.xi.ray_vertex(L / 2);
  std::vector<CosetRep> reps = enumerate_cosets(H, n);
  for (const CosetRep& k2 : reps) {
    Portrait lead = compose(inverse(k2.rep), g);
    for (const CosetRep& k1 : reps) {
      if (!contains(H, compose(lead, k1.rep))) continue;
      report.solutions.push_back(ContainmentSolution{k1.label, k2.label});
      if (!report.k_g) report.k_g = k2;
    }
  }
  report.empty = report.solutions.empty();
  report.verified = true;
  if (report.k_g) {
    std::set<Vertex> seen;
    for (const ContainmentSolution& s : report.solutions) {
      if (!seen.insert(s.k2_label).second) continue;
      const CosetRep* k2 = nullptr;
      for (const CosetRep& r : reps)
        if (r.label == s.k2_label) k2 = &r;
      Portrait d = compose(inverse(report.k_g->rep), k2->rep);
      for (int j = 0; j <= L / 2; ++j) {
        Vertex v = H.xi.ray_vertex(j);
        if (d.apply(v) != v) {
          report.verified = false;
          break;
        }
      }
      if (!report.verified) break;
    }
  }
  return report;
}

std::vector<IntersectionCell> coset_decomposition(const Portrait& g, const Portrait& f1,
                                                  const Portrait& f2, const ParabolicSpec& H,
                                                  int n) {
  std::vector<CosetRep> reps = enumerate_cosets(H, n);
  std::vector<IntersectionCell> cells;
  for (const CosetRep& k : reps) {
    Portrait lead = compose(inverse(compose(f2, k.rep)), compose(g, f1));
    IntersectionCell cell;
    for (const CosetRep& kprime : reps) {
      Portrait h = compose(lead, kprime.rep);
      if (!contains(H, h)) continue;
      if (cell.kprime_count == 0) {
        cell.k = k;
        cell.kprime = kprime;
        cell.h = h;
      }
      ++cell.kprime_count;
    }
    if (cell.kprime_count > 0) cells.push_back(std::move(cell));
  }
  return cells;
}

std::string case_name(SolutionCase c) {
  switch (c) {
    case SolutionCase::TowardXi:
      return "toward";
    case SolutionCase::Between:
      return "between";
    case SolutionCase::BeyondInverse:
      return "beyond";
  }
  throw std::logic_error("case_name: unknown case");
}

std::vector<SolutionDomain> solution_domains(const Portrait& g, const ParabolicSpec& H,
                                             const MinimalHyperbolic& gamma_min, int n) {
  if (H.kind != ParabolicKind::FullFixator)
    throw std::invalid_argument("solution_domains: requires the full end fixator");
  Classification cl = classify(g);
  if (cl.kind != IsometryKind::Hyperbolic)
    throw std::invalid_argument("solution_domains: element is not hyperbolic");
  if (!cl.min_vertex.is_base())
    throw std::invalid_argument("solution_domains: axis does not pass through the base vertex");
  if (!cl.directions_exact || !cl.attracting || !cl.repelling)
    throw InsufficientDepth("solution_domains: axis ends not certified");
  if (!(*cl.attracting == H.xi))
    throw std::invalid_argument("solution_domains: attracting end must be the parabolic end");

  const BoundaryPoint& xi = H.xi;
  const BoundaryPoint& xi_rep = *cl.repelling;
  int L = cl.translation_length;
  int ell = gamma_min.length;

  std::vector<CosetRep> reps;
  Vertex trivial = xi.ray_vertex(n);
  for (CosetRep& r : enumerate_cosets(H, n))
    if (r.label != trivial) reps.push_back(std::move(r));

  std::map<int, SolutionDomain> domains;
  for (const CosetRep& k1 : reps) {
    Portrait lead = compose(k1.rep, g);
    for (const CosetRep& k2 : reps) {
      Portrait h = compose(lead, k2.rep);
      RayWalkResult rw = ray_walk(h, xi);
      if (!rw.fixes_end) continue;

      if (ell <= 0 || rw.busemann_shift % ell != 0)
        throw std::logic_error("solution_domains: member shift is not a multiple of the minimal "
                               "length");
      int m = rw.busemann_shift / ell;
      if (m * ell > L || -m * ell > L)
        throw std::logic_error("solution_domains: member power class exceeds the displacement "
                               "bound");
      int xh_depth = (L + m * ell) / 2;
      for (int j = 0; j <= xh_depth; ++j) {
        Vertex v = xi.ray_vertex(j);
        if (k1.rep.apply(v) != v)
          throw std::logic_error("solution_domains: left factor moves the pinned path at depth " +
                                 std::to_string(j));
      }

      RayWalkResult rk2 = ray_walk(k2.rep, xi);
      if (rk2.fixes_end)
        throw std::logic_error("solution_domains: nontrivial cell representative fixes the end");
      const BoundaryPoint& eta = *rk2.image_end;
      SolutionCase tag;
      if (eta.letter(0) == xi_rep.letter(0)) {
        int b = boundary_agreement(eta, xi_rep);
        tag = (b < 0 || b >= L) ? SolutionCase::BeyondInverse : SolutionCase::Between;
      } else {
        tag = SolutionCase::TowardXi;
      }

      SolutionDomain& dom = domains[m];
      dom.m = m;
      dom.x_h = xi.ray_vertex(xh_depth);
      dom.constraint_vacuous = (xh_depth == 0);
      dom.solutions.push_back(SolutionEntry{k1.label, k2.label, tag});
    }
  }

  std::vector<SolutionDomain> out;
  out.reserve(domains.size());
  for (auto& [m, dom] : domains) out.push_back(std::move(dom));
  return out;
}

}  // namespace arboreal
