#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <set>

#include "arboreal/cosets.hpp"

#include "oracles.hpp"

using namespace arboreal;

namespace {

GroupPtr sym3() { return std::make_shared<LocalGroup>(LocalGroup::parse(3, "(12),(123)")); }
GroupPtr dih5() { return std::make_shared<LocalGroup>(LocalGroup::parse(5, "(12345),(25)(34)")); }

}  // namespace

TEST_SUITE("cosets") {
  TEST_CASE("cell counts follow the stabilizer orbit branching") {
    ParabolicSpec h3 = full_fixator(sym3(), BoundaryPoint::parse("|12", 3));
    CHECK(enumerate_cosets(h3, 1).size() == 3);
    CHECK(enumerate_cosets(h3, 2).size() == 6);
    CHECK(enumerate_cosets(h3, 3).size() == 12);
    ParabolicSpec h5 = full_fixator(dih5(), BoundaryPoint::parse("|12", 5));
    CHECK(enumerate_cosets(h5, 1).size() == 5);
    CHECK(enumerate_cosets(h5, 2).size() == 10);
    CHECK(enumerate_cosets(h5, 3).size() == 20);
  }

  TEST_CASE("labels are the base stabilizer orbit of the ray vertex") {
    for (GroupPtr F : {sym3(), dih5()}) {
      BoundaryPoint xi = BoundaryPoint::parse("|12", F->degree());
      ParabolicSpec H = full_fixator(F, xi);
      for (int n = 1; n <= 3; ++n) {
        auto cells = enumerate_cosets(H, n);
        std::set<Vertex> labels;
        for (const CosetRep& cell : cells) labels.insert(cell.label);
        CHECK(labels.size() == cells.size());
        auto orbit = test::bfs_orbit(test::stabilizer_gens(F, n), xi.ray_vertex(n));
        CHECK(labels == orbit);
      }
    }
  }

  TEST_CASE("cell representatives carry the ray path onto the label path") {
    GroupPtr F = dih5();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 5);
    ParabolicSpec H = full_fixator(F, xi);
    for (const CosetRep& cell : enumerate_cosets(H, 3)) {
      for (int i = 0; i <= 3; ++i)
        CHECK(cell.rep.apply(xi.ray_vertex(i)) == cell.label.prefix(i));
      CHECK(cell.rep.apply(Vertex::base()) == Vertex::base());
    }
  }

  TEST_CASE("the trivial cell ships the identity representative") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    auto cells = enumerate_cosets(full_fixator(F, xi), 2);
    auto trivial = std::find_if(cells.begin(), cells.end(),
                                [&](const CosetRep& c) { return c.label == xi.ray_vertex(2); });
    REQUIRE(trivial != cells.end());
    CHECK(test::equal_on_ball(trivial->rep, Portrait::identity(F), 3));
  }

  TEST_CASE("labels are identical across the three kinds") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    auto full = enumerate_cosets(full_fixator(F, xi), 2);
    auto horo = enumerate_cosets(horospherical(F, xi), 2);
    REQUIRE(full.size() == horo.size());
    for (std::size_t i = 0; i < full.size(); ++i) CHECK(full[i].label == horo[i].label);
  }

  TEST_CASE("fixator indices multiply the stabilizer orbit sizes along the path") {
    LocalGroup F3 = LocalGroup::parse(3, "(12),(123)");
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    BigInt expected[] = {1, 3, 6, 12, 24};
    for (int n = 0; n <= 4; ++n) CHECK(fixator_index(F3, xi.ray_vertex(n)) == expected[n]);
    CHECK(fixator_index(F3, Vertex::parse("13", 3)) == 6);
    LocalGroup F5 = LocalGroup::parse(5, "(12345),(25)(34)");
    BoundaryPoint xi5 = BoundaryPoint::parse("|12", 5);
    BigInt expected5[] = {1, 5, 10, 20, 40};
    for (int n = 0; n <= 4; ++n) CHECK(fixator_index(F5, xi5.ray_vertex(n)) == expected5[n]);
  }

  TEST_CASE("fixator indices equal portrait BFS orbit sizes") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    for (int n = 1; n <= 3; ++n) {
      auto orbit = test::bfs_orbit(test::stabilizer_gens(F, n), xi.ray_vertex(n));
      CHECK(fixator_index(*F, xi.ray_vertex(n)) == BigInt(orbit.size()));
    }
  }

  TEST_CASE("elliptic subgroups funnel solutions through one fixator coset") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    ParabolicSpec horo = horospherical(F, xi);
    Portrait gamma = Portrait::left_mult(F, Vertex::parse("12", 3));
    ContainmentReport report = unimodular_containment(gamma, horo, 2);
    CHECK(!report.empty);
    CHECK(report.verified);
    CHECK(report.x_g == Vertex::parse("1", 3));
    CHECK(!report.solutions.empty());
    REQUIRE(report.k_g.has_value());
  }

  TEST_CASE("ray fixator translates of hyperbolic elements miss the base coset") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    ParabolicSpec ray = ray_fixator(F, xi);
    Portrait gamma = Portrait::left_mult(F, Vertex::parse("12", 3));
    ContainmentReport report = unimodular_containment(gamma, ray, 2);
    CHECK(report.empty);
    CHECK(report.solutions.empty());
  }

  TEST_CASE("intersection cells certify a unique witness and member") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    ParabolicSpec H = full_fixator(F, xi);
    Portrait gamma = Portrait::left_mult(F, Vertex::parse("12", 3));
    Portrait id = Portrait::identity(F);
    auto cells = coset_decomposition(gamma, id, id, H, 2);
    CHECK(!cells.empty());
    std::set<Vertex> labels;
    for (const IntersectionCell& cell : cells) {
      CHECK(cell.kprime_count == 1);
      CHECK(contains(H, cell.h));
      CHECK(labels.insert(cell.k.label).second);
      Portrait left = compose(gamma, cell.kprime.rep);
      Portrait right = compose(cell.k.rep, cell.h);
      CHECK(test::equal_on_ball(left, right, 4));
    }
  }

  TEST_CASE("solution domains tag the power classes with their constraints") {
    GroupPtr F = sym3();
    BoundaryPoint xi = BoundaryPoint::parse("|12", 3);
    ParabolicSpec H = full_fixator(F, xi);
    MinimalHyperbolic mh = minimal_hyperbolic(H);
    Portrait g = mh.gamma;
    auto domains = solution_domains(g, H, mh, 2);
    CHECK(!domains.empty());
    int disp = dist(Vertex::base(), g.apply(Vertex::base()));
    for (const SolutionDomain& dom : domains) {
      CHECK(std::abs(dom.m) * mh.length <= disp);
      int xh_dist = (disp + dom.m * mh.length) / 2;
      CHECK(dom.x_h == xi.ray_vertex(xh_dist));
      CHECK(dom.constraint_vacuous == dom.x_h.is_base());
      for (const SolutionEntry& sol : dom.solutions) {
        Portrait k1 = Portrait::path_rotation(F, xi.ray_vertex(2), sol.k1_label);
        Portrait k2 = Portrait::path_rotation(F, xi.ray_vertex(2), sol.k2_label);
        auto walk = membership_walk(H, compose(k1, compose(g, k2)));
        REQUIRE(walk.has_value());
        CHECK(walk->busemann_shift == dom.m * mh.length);
      }
    }
  }

  TEST_CASE("solution case names are distinct and printable") {
    CHECK(case_name(SolutionCase::TowardXi) != case_name(SolutionCase::Between));
    CHECK(case_name(SolutionCase::Between) != case_name(SolutionCase::BeyondInverse));
    CHECK(!case_name(SolutionCase::TowardXi).empty());
  }
}
