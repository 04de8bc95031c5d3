#include "doctest.h"

#include <algorithm>
#include <vector>

#include "arboreal/local_group.hpp"

using namespace arboreal;

namespace {

struct CatalogRow {
  const char* name;
  int d;
  const char* gens;
  std::size_t order;
  bool transitive;
  bool two_transitive;
  bool primitive;
  bool cyclic_prime;
  bool gate;
};

// Reference classification of the groups the experiments draw from, checked
// against the predicate implementations below.
const CatalogRow kCatalog[] = {
    {"Sym(3)", 3, "(12),(123)", 6, true, true, true, false, true},
    {"Alt(3)", 3, "(123)", 3, true, false, true, true, false},
    {"<(12)>", 3, "(12)", 2, false, false, false, true, false},
    {"Sym(4)", 4, "(12),(1234)", 24, true, true, true, false, true},
    {"Dih(4)", 4, "(1234),(13)", 8, true, false, false, false, false},
    {"Cyc(4)", 4, "(1234)", 4, true, false, false, false, false},
    {"Dih(5)", 5, "(12345),(25)(34)", 10, true, false, true, false, true},
    {"Alt(5)", 5, "(12345),(123)", 60, true, true, true, false, true},
};

}  // namespace

TEST_SUITE("local group") {
  TEST_CASE("permutation parsing handles cycles and one-line forms") {
    CHECK(Perm::parse("(12)", 3) == Perm::parse("213", 3));
    CHECK(Perm::parse("(1 2 3)", 3) == Perm::parse("2 3 1", 3));
    CHECK(Perm::parse("(12)(34)", 4) == Perm::parse("2143", 4));
    CHECK(Perm::parse("(123)", 3).inverse() == Perm::parse("(132)", 3));
    CHECK(Perm::identity(5).is_identity());
  }

  TEST_CASE("composition convention: (a.after(b))(c) = a(b(c))") {
    Perm a = Perm::parse("(12)", 3);
    Perm b = Perm::parse("(23)", 3);
    Perm ab = a.after(b);
    for (Color c = 1; c <= 3; ++c) CHECK(ab(c) == a(b(c)));
  }

  TEST_CASE("catalog orders and predicates") {
    for (const CatalogRow& row : kCatalog) {
      CAPTURE(row.name);
      LocalGroup F = LocalGroup::parse(row.d, row.gens);
      CHECK(F.order() == row.order);
      CHECK(F.is_transitive() == row.transitive);
      CHECK(F.is_2transitive() == row.two_transitive);
      CHECK(F.is_primitive() == row.primitive);
      CHECK(F.is_cyclic_of_prime_order() == row.cyclic_prime);
      CHECK(F.passes_gate() == row.gate);
    }
  }

  TEST_CASE("predicate implications hold across the catalog") {
    for (const CatalogRow& row : kCatalog) {
      CAPTURE(row.name);
      LocalGroup F = LocalGroup::parse(row.d, row.gens);
      if (F.is_2transitive()) CHECK(F.is_primitive());
      if (F.is_primitive()) CHECK(F.is_transitive());
      if (F.passes_gate()) CHECK(F.generated_by_point_stabilizers());
    }
  }

  TEST_CASE("orbit stabilizer counting") {
    for (const CatalogRow& row : kCatalog) {
      CAPTURE(row.name);
      LocalGroup F = LocalGroup::parse(row.d, row.gens);
      for (Color c = 1; c <= row.d; ++c)
        CHECK(F.orbit(c).size() * F.point_stabilizer(c).size() == F.order());
    }
  }

  TEST_CASE("element enumeration is sorted and closed") {
    LocalGroup F = LocalGroup::parse(5, "(12345),(25)(34)");
    const auto& els = F.elements();
    CHECK(std::is_sorted(els.begin(), els.end()));
    for (const Perm& a : els)
      for (const Perm& b : els) CHECK(F.contains(a.after(b)));
  }

  TEST_CASE("transversal returns the lex-least transporter") {
    LocalGroup F = LocalGroup::parse(3, "(12),(123)");
    for (Color a = 1; a <= 3; ++a) {
      CHECK(F.transversal(a, a).has_value());
      CHECK(F.transversal(a, a)->is_identity());
      for (Color b = 1; b <= 3; ++b) {
        auto t = F.transversal(a, b);
        REQUIRE(t.has_value());
        CHECK((*t)(a) == b);
        for (const Perm& p : F.elements())
          if (p(a) == b) CHECK(!(p < *t));
      }
    }
  }

  TEST_CASE("transversal is empty exactly off the orbit") {
    LocalGroup F = LocalGroup::parse(3, "(12)");
    CHECK(F.transversal(1, 2).has_value());
    CHECK(!F.transversal(1, 3).has_value());
    CHECK(!F.transversal(3, 1).has_value());
    CHECK(F.transversal(3, 3).has_value());
  }

  TEST_CASE("two point transversal constrains both points") {
    LocalGroup F = LocalGroup::parse(5, "(12345),(25)(34)");
    auto t = F.transversal2(2, 2, 1, 1);
    REQUIRE(t.has_value());
    CHECK(t->is_identity());
    auto u = F.transversal2(2, 5, 1, 1);
    REQUIRE(u.has_value());
    CHECK((*u)(2) == 5);
    CHECK((*u)(1) == 1);
    CHECK(!F.transversal2(2, 3, 1, 1).has_value());
  }

  TEST_CASE("coset lists every transporter in lex order") {
    LocalGroup F = LocalGroup::parse(3, "(12),(123)");
    auto coset = F.coset(1, 2);
    CHECK(coset.size() == 2);
    CHECK(std::is_sorted(coset.begin(), coset.end()));
    for (const Perm& p : coset) CHECK(p(1) == 2);
    std::size_t count = 0;
    for (const Perm& p : F.elements())
      if (p(1) == 2) ++count;
    CHECK(count == coset.size());
  }

  TEST_CASE("stabilizer orbits drive the sphere branching") {
    LocalGroup sym3 = LocalGroup::parse(3, "(12),(123)");
    CHECK(sym3.stabilizer_orbit(1, 2) == std::vector<Color>{2, 3});
    LocalGroup dih5 = LocalGroup::parse(5, "(12345),(25)(34)");
    CHECK(dih5.stabilizer_orbit(1, 2) == std::vector<Color>{2, 5});
    CHECK(dih5.orbit(1).size() == 5);
  }
}
