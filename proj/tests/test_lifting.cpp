#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "flatlift/lifting.hpp"
#include "flatlift/testgen.hpp"

using namespace flatlift;

namespace {

const RingParams R9 = RingParams::make(3, 2);

ModMorphism scalar_map(const ModObject& x, const ModObject& y, i64 c) {
  Matrix m(x.rank(), y.rank());
  for (int i = 0; i < std::min(x.rank(), y.rank()); ++i) m.at(i, i) = c;
  return ModMorphism(x, y, std::move(m));
}

// xi_{0,1} = 0, xi_{1,2} = 0, xi_{0,2} = iota: stably commutative only.
Prediagram chain_zero_composite() {
  Prediagram X;
  X.shape = chain(2);
  X.ring_params = R9;
  auto z3 = make_object(R9, {1});
  auto z9 = make_object(R9, {2});
  X.objects = {z3, z3, z9};
  X.set_arrow(0, 1, zero_morphism(z3, z3));
  X.set_arrow(1, 2, zero_morphism(z3, z9));
  X.set_arrow(0, 2, scalar_map(z3, z9, 3));
  return X;
}

// The wedge instance: two monos into Z/p^2 (+) Z/p^2 mapping to 0 -> 0 -> Z/p^2.
struct WedgeInstance {
  Prediagram X, Y;
  std::vector<ModMorphism> fhat;
};

// Ambient ring Z/p^3 with p = 3: the bijectives are the free Z/27-modules,
// so Z/9 carries genuine stable information.
WedgeInstance wedge_instance() {
  WedgeInstance w;
  const RingParams R = RingParams::make(3, 3);
  auto shape = full_subposet(powerset(2), {"{1}", "{2}", "{1,2}"});
  auto zp2 = make_object(R, {2});
  auto top = make_object(R, {2, 2});
  w.X.shape = shape;
  w.X.ring_params = R;
  w.X.objects = {zp2, zp2, top};
  Matrix a(1, 2);
  a.at(0, 0) = 2;  // p - 1
  a.at(0, 1) = 1;
  Matrix b(1, 2);
  b.at(0, 0) = 4;  // p + 1
  b.at(0, 1) = 8;  // -1 mod p^2
  int i1 = shape.index_of("{1}"), i2 = shape.index_of("{2}"), it = shape.index_of("{1,2}");
  w.X.set_arrow(i1, it, ModMorphism(zp2, top, a));
  w.X.set_arrow(i2, it, ModMorphism(zp2, top, b));
  auto zero = zero_object(R);
  w.Y.shape = shape;
  w.Y.ring_params = R;
  w.Y.objects = {zero, zero, zp2};
  w.Y.set_arrow(i1, it, zero_morphism(zero, zp2));
  w.Y.set_arrow(i2, it, zero_morphism(zero, zp2));
  Matrix f(2, 1);
  f.at(0, 0) = 1;
  f.at(1, 0) = 1;
  w.fhat = {zero_morphism(zp2, zero), zero_morphism(zp2, zero), ModMorphism(top, zp2, f)};
  return w;
}

}  // namespace

TEST_CASE("replacement") {
  auto X = wedge_instance().X;
  int top = X.shape.index_of("{1,2}");
  const RingParams R = X.ring();
  SECTION("zero summand changes nothing") {
    auto rep = replace_at(X, top, {}, {}, zero_object(R));
    REQUIRE(rep.diagram == X);
    REQUIRE(verify_stable_iso(rep.family));
  }
  SECTION("maximal replacement is a homotopism") {
    auto N = free_object(R, 1);
    std::map<int, ModMorphism> zeta;
    zeta.emplace(X.shape.index_of("{1}"), scalar_map(X.object(0), N, 3));
    auto rep = replace_at(X, top, {}, zeta, N);
    REQUIRE(verify_homotopism(DiagramMorphism{rep.diagram, X, rep.family.components}));
  }
  SECTION("non-free summands are rejected") {
    REQUIRE_THROWS_MATCHES(replace_at(X, top, {}, {}, make_object(R, {1})), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::not_free;
                           }));
  }
}

TEST_CASE("purification at a maximal element") {
  SECTION("zero arrow into the zero module becomes an embedding") {
    Prediagram X;
    X.shape = chain(1);
    X.ring_params = R9;
    auto z3 = make_object(R9, {1});
    X.objects = {z3, zero_object(R9)};
    X.set_arrow(0, 1, zero_morphism(z3, zero_object(R9)));
    auto out = purify_at_max(X, 1);
    REQUIRE(out.diagram.object(1) == make_object(R9, {2}));
    REQUIRE(out.diagram.arrow(0, 1).matrix().at(0, 0) == 3);
    REQUIRE(check(out.diagram, CheckLevel::purely_monic).ok);
    REQUIRE(verify_homotopism(out.homotopism));
  }
  SECTION("already monic with empty cone is untouched up to a trivial summand") {
    Prediagram X;
    X.shape = chain(0);
    X.ring_params = R9;
    X.objects = {make_object(R9, {1})};
    auto out = purify_at_max(X, 0);
    REQUIRE(out.diagram == X);
  }
}

TEST_CASE("full purification") {
  std::mt19937_64 rng(321);
  SECTION("purely monic input stays purely monic and homotopic") {
    auto P = testgen::random_ind_flat_poset(rng, 5);
    auto X = testgen::random_monic_diagram(rng, P, R9, 2);
    auto out = purify(X);
    REQUIRE(check(out.diagram, CheckLevel::purely_monic).ok);
    REQUIRE(verify_homotopism(out.homotopism));
  }
  SECTION("random strict non-monic diagrams purify") {
    for (int it = 0; it < 12; ++it) {
      auto P = testgen::random_ind_flat_poset(rng, 5);
      auto X = testgen::random_monic_diagram(rng, P, R9, 2);
      // damage monicity: multiply arrows out of minima by p
      for (auto& [pair, f] : X.arrows) {
        bool is_min = true;
        for (int x = 0; x < P.size(); ++x)
          if (P.lt(x, pair.first)) is_min = false;
        if (is_min) f = scale(R9.p, f);
      }
      if (!check(X, CheckLevel::strictly_commutative).ok) continue;
      auto out = purify(X);
      REQUIRE(check(out.diagram, CheckLevel::purely_monic).ok);
      REQUIRE(check(out.diagram, CheckLevel::strictly_commutative).ok);
      REQUIRE(verify_homotopism(out.homotopism));
    }
  }
  SECTION("empty shape") {
    Prediagram X;
    X.ring_params = R9;
    auto out = purify(X);
    REQUIRE(out.diagram == X);
  }
  SECTION("non-ind-flat shapes are rejected") {
    Prediagram X;
    X.shape = powerset(3);
    X.ring_params = R9;
    for (int i = 0; i < 8; ++i) X.objects.push_back(zero_object(R9));
    for (auto [a, b] : X.shape.strict_pairs())
      X.set_arrow(a, b, zero_morphism(zero_object(R9), zero_object(R9)));
    REQUIRE_THROWS_MATCHES(purify(X), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::not_ind_flat;
                           }));
  }
}

TEST_CASE("adding a commutativity") {
  // prepared instance: objects Z/3, Z/3 (+) Z/9, Z/9 over a chain, with the
  // composite through the middle zero but the direct arrow an embedding
  Prediagram X;
  X.shape = chain(2);
  X.ring_params = R9;
  auto z3 = make_object(R9, {1});
  auto mid = make_object(R9, {1, 2});
  auto z9 = make_object(R9, {2});
  X.objects = {z3, mid, z9};
  Matrix a01(1, 2);
  a01.at(0, 0) = 0;
  a01.at(0, 1) = 3;
  X.set_arrow(0, 1, ModMorphism(z3, mid, a01));
  X.set_arrow(1, 2, zero_morphism(mid, z9));
  X.set_arrow(0, 2, scalar_map(z3, z9, 3));

  SECTION("the triangle commutes exactly afterwards") {
    REQUIRE_FALSE(check(X, CheckLevel::strictly_commutative).ok);
    auto rep = add_commutativity(X, 2, 1, 0);
    REQUIRE(rep.diagram.arrow(0, 2) ==
            compose(rep.diagram.arrow(0, 1), rep.diagram.arrow(1, 2)));
    REQUIRE(verify_stable_iso(rep.family));
    // restriction below the top stays purely monic
    auto below = restrict(rep.diagram, std::vector<int>{0, 1});
    REQUIRE(check(below, CheckLevel::purely_monic).ok);
  }
  SECTION("zero defect still satisfies the contract") {
    Prediagram Z = X;
    Z.set_arrow(0, 2, zero_morphism(z3, z9));
    auto rep = add_commutativity(Z, 2, 1, 0);
    REQUIRE(rep.diagram.arrow(0, 2) ==
            compose(rep.diagram.arrow(0, 1), rep.diagram.arrow(1, 2)));
  }
}

TEST_CASE("diagram lifting") {
  SECTION("the zero-composite chain lifts") {
    auto X = chain_zero_composite();
    auto out = lift_diagram(X);
    REQUIRE(check(out.lifted, CheckLevel::strictly_commutative).ok);
    REQUIRE(check(out.lifted, CheckLevel::purely_monic).ok);
    REQUIRE(verify_stable_iso(out.iso));
    REQUIRE_FALSE(out.trace.empty());
    // no homotopism to the input exists, so the family must be non-strict
    REQUIRE_FALSE(
        is_strictly_natural(DiagramMorphism{out.lifted, X, out.iso.components}));
  }
  SECTION("already purely monic diagrams lift to something stably isomorphic") {
    std::mt19937_64 rng(14);
    auto P = testgen::random_ind_flat_poset(rng, 4);
    auto X = testgen::random_monic_diagram(rng, P, R9, 2);
    auto out = lift_diagram(X);
    REQUIRE(verify_stable_iso(out.iso));
  }
  SECTION("random stably commutative prediagrams lift") {
    std::mt19937_64 rng(15);
    for (int it = 0; it < 10; ++it) {
      auto P = testgen::random_ind_flat_poset(rng, 5);
      const RingParams ring = it % 2 ? R9 : RingParams::make(2, 3);
      auto X = testgen::random_stably_commutative_prediagram(rng, P, ring, 2);
      auto out = lift_diagram(X);
      REQUIRE(check(out.lifted, CheckLevel::strictly_commutative).ok);
      REQUIRE(check(out.lifted, CheckLevel::purely_monic).ok);
      REQUIRE(verify_stable_iso(out.iso));
    }
  }
  SECTION("lifting is idempotent up to stable isomorphism") {
    std::mt19937_64 rng(16);
    auto P = testgen::random_ind_flat_poset(rng, 4);
    auto X = testgen::random_stably_commutative_prediagram(rng, P, R9, 2);
    auto once = lift_diagram(X);
    auto twice = lift_diagram(once.lifted);
    auto composed = compose_families(twice.iso, once.iso);
    REQUIRE(verify_stable_iso(composed));
  }
  SECTION("non-stably-commutative input is rejected") {
    Prediagram X;
    X.shape = chain(2);
    X.ring_params = R9;
    auto z3 = make_object(R9, {1});
    X.objects = {z3, z3, z3};
    X.set_arrow(0, 1, identity_morphism(z3));
    X.set_arrow(1, 2, identity_morphism(z3));
    X.set_arrow(0, 2, zero_morphism(z3, z3));
    REQUIRE_THROWS_MATCHES(lift_diagram(X), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::not_stably_commutative;
                           }));
  }
}

TEST_CASE("strict lift of a stable morphism") {
  SECTION("strictly natural input returns unchanged corrections") {
    std::mt19937_64 rng(17);
    auto P = testgen::random_quasitree(rng, 4);
    auto inst = testgen::random_morphism_instance(rng, P, R9, 2);
    // the plain inclusion is strictly natural
    std::vector<ModMorphism> incl;
    for (int a = 0; a < P.size(); ++a) {
      Matrix m(inst.source.object(a).rank(), inst.target.object(a).rank());
      for (int i = 0; i < m.rows; ++i) m.at(i, i) = 1;
      incl.push_back(ModMorphism(inst.source.object(a), inst.target.object(a), m));
    }
    auto g = strict_lift_of_stable_morphism(inst.source, inst.target, incl);
    REQUIRE(g.has_value());
    REQUIRE(is_strictly_natural(*g));
  }
  SECTION("the wedge obstruction: no strict lift exists") {
    auto w = wedge_instance();
    REQUIRE_FALSE(strict_lift_of_stable_morphism(w.X, w.Y, w.fhat).has_value());
  }
}

TEST_CASE("morphism lifting over quasitrees") {
  SECTION("the wedge instance lifts even though no strict lift exists") {
    auto w = wedge_instance();
    REQUIRE(quasitree_check(w.X.shape));
    auto out = lift_morphism(w.X, w.Y, w.fhat);
    REQUIRE(verify_homotopism(out.g_prime));
    REQUIRE(is_strictly_natural(out.g));
    REQUIRE(out.certificate.size() == 3);
  }
  SECTION("random quasitree instances pass all invariants") {
    std::mt19937_64 rng(18);
    for (int it = 0; it < 8; ++it) {
      auto P = testgen::random_quasitree(rng, 5);
      const RingParams ring = it % 2 ? R9 : RingParams::make(2, 2);
      auto inst = testgen::random_morphism_instance(rng, P, ring, 2);
      auto out = lift_morphism(inst.source, inst.target, inst.fhat);
      REQUIRE(check(out.replaced, CheckLevel::purely_monic).ok);
      REQUIRE(verify_homotopism(out.g_prime));
      REQUIRE(is_strictly_natural(out.g));
    }
  }
  SECTION("non-quasitree shapes are rejected") {
    std::mt19937_64 rng(19);
    auto P = product(chain(1), chain(1));
    auto inst = testgen::random_morphism_instance(rng, P, R9, 1);
    REQUIRE_THROWS_MATCHES(lift_morphism(inst.source, inst.target, inst.fhat), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::not_quasitree;
                           }));
  }
}

TEST_CASE("dual lifting to pure epimorphisms") {
  std::mt19937_64 rng(20);
  for (int it = 0; it < 6; ++it) {
    auto P = testgen::random_pro_flat_poset(rng, 5);
    auto X = testgen::random_stably_commutative_prediagram(rng, P, R9, 2);
    auto out = lift_diagram_epi(X);
    REQUIRE(check(out.lifted, CheckLevel::strictly_commutative).ok);
    for (auto [a, b] : out.lifted.shape.strict_pairs())
      REQUIRE(is_epi(out.lifted.arrow(a, b)));
    REQUIRE(verify_stable_iso(out.iso));
  }
}
