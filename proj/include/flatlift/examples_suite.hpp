#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "flatlift/census.hpp"
#include "flatlift/colimit.hpp"
#include "flatlift/lifting.hpp"

namespace flatlift::fixtures {

// ---------------------------------------------------------------------------
// Shared instance builders.

inline Poset punctured_cube() {
  return full_subposet(powerset(3),
                       {"{}", "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}"});
}

inline Poset nonfull_crown_poset() {  // {∅, {1}, {2}, {2,3}, {2,4}}
  return full_subposet(powerset(4), {"{}", "{1}", "{2}", "{2,3}", "{2,4}"});
}

inline Poset four_crown() {  // {{1}, {2}, {1,2}, {2,3}}
  return full_subposet(powerset(3), {"{1}", "{2}", "{1,2}", "{2,3}"});
}

inline Poset ten_element_family() {
  return full_subposet(powerset(5), {"{}", "{1}", "{2}", "{3}", "{1,4}", "{1,5}", "{1,2,3}",
                                     "{3,4}", "{3,5}", "{1,2,3,4,5}"});
}

inline Poset subposet_loss_big() {
  return full_subposet(powerset(4), {"{1}", "{2}", "{1,2}", "{1,2,3}", "{1,2,4}", "{1,2,3,4}"});
}

inline Poset subposet_loss_small() {
  return full_subposet(powerset(4), {"{1}", "{2}", "{1,2,3}", "{1,2,4}", "{1,2,3,4}"});
}

inline Poset jump_one() {
  return full_subposet(powerset(4), {"{}", "{1}", "{2}", "{3}", "{1,2}", "{2,3}", "{1,3}",
                                     "{1,2,3}", "{1,3,4}", "{1,2,3,4}"});
}

inline Poset jump_two() {
  return full_subposet(powerset(4), {"{}", "{1}", "{2}", "{3}", "{1,2}", "{2,3,4}", "{1,3,4}",
                                     "{1,2,3}", "{1,2,3,4}"});
}

inline ModMorphism scalar_map(const ModObject& x, const ModObject& y, i64 c) {
  Matrix m(x.rank(), y.rank());
  for (int i = 0; i < std::min(x.rank(), y.rank()); ++i) m.at(i, i) = c;
  return ModMorphism(x, y, std::move(m));
}

// Four copies of Z/9 over the complete 2x2 crown with one arrow p + 1;
// the colimit collapses to Z/3 and kills injectivity of the upper legs.
inline Prediagram collapse_instance() {
  const RingParams R = RingParams::make(3, 2);
  Prediagram X;
  X.shape = Poset::from_cover_relations({"a", "b", "u", "v"},
                                        {{"a", "u"}, {"a", "v"}, {"b", "u"}, {"b", "v"}});
  X.ring_params = R;
  auto z9 = make_object(R, {2});
  X.objects = {z9, z9, z9, z9};
  X.set_arrow(0, 2, scalar_map(z9, z9, 1));
  X.set_arrow(0, 3, scalar_map(z9, z9, 1));
  X.set_arrow(1, 2, scalar_map(z9, z9, 1));
  X.set_arrow(1, 3, scalar_map(z9, z9, 4));
  return X;
}

// Zero composites along a chain with a monomorphic direct arrow into a free
// module: stably commutative but admitting no strictly commutative homotopic
// replacement.
inline Prediagram zero_composite_chain() {
  const RingParams R = RingParams::make(3, 2);
  Prediagram X;
  X.shape = chain(2);
  X.ring_params = R;
  auto z3 = make_object(R, {1});
  auto z9 = make_object(R, {2});
  X.objects = {z3, z3, z9};
  X.set_arrow(0, 1, zero_morphism(z3, z3));
  X.set_arrow(1, 2, zero_morphism(z3, z9));
  X.set_arrow(0, 2, scalar_map(z3, z9, 3));
  return X;
}

struct WedgeInstance {
  Prediagram source;
  Prediagram target;
  std::vector<ModMorphism> fhat;
};

// Two monomorphisms into Z/p^2 (+) Z/p^2 over the wedge, mapped onto
// 0 -> Z/p^2 <- 0, inside Z/p^3-modules with p = 3.
inline WedgeInstance wedge_instance(bool free_target = false) {
  const RingParams R = RingParams::make(3, 3);
  WedgeInstance w;
  auto shape = full_subposet(powerset(2), {"{1}", "{2}", "{1,2}"});
  auto zp2 = make_object(R, {2});
  auto top = make_object(R, {2, 2});
  w.source.shape = shape;
  w.source.ring_params = R;
  w.source.objects = {zp2, zp2, top};
  Matrix a(1, 2);
  a.at(0, 0) = 2;  // p - 1
  a.at(0, 1) = 1;
  Matrix b(1, 2);
  b.at(0, 0) = 4;  // p + 1
  b.at(0, 1) = 8;  // -1 mod p^2
  int i1 = shape.index_of("{1}"), i2 = shape.index_of("{2}"), it = shape.index_of("{1,2}");
  w.source.set_arrow(i1, it, ModMorphism(zp2, top, a));
  w.source.set_arrow(i2, it, ModMorphism(zp2, top, b));
  auto zero = zero_object(R);
  auto ytop = free_target ? make_object(R, {3}) : zp2;
  w.target.shape = shape;
  w.target.ring_params = R;
  w.target.objects = {zero, zero, ytop};
  w.target.set_arrow(i1, it, zero_morphism(zero, ytop));
  w.target.set_arrow(i2, it, zero_morphism(zero, ytop));
  Matrix f(2, 1);
  f.at(0, 0) = free_target ? 3 : 1;
  f.at(1, 0) = free_target ? 3 : 1;
  w.fhat = {zero_morphism(zp2, zero), zero_morphism(zp2, zero), ModMorphism(top, ytop, f)};
  return w;
}

// ---------------------------------------------------------------------------
// The regression suite.

struct FixtureOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

struct Checker {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

}  // namespace detail

inline std::vector<FixtureOutcome> run_examples_suite(const std::string& tamper = "") {
  std::vector<FixtureOutcome> results;
  auto run = [&](const std::string& name, const std::function<void(detail::Checker&, bool)>& fn) {
    detail::Checker ck;
    try {
      fn(ck, name == tamper);
    } catch (const Error& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    results.push_back(FixtureOutcome{name, ck.ok, ck.detail});
  };

  run("punctured-cube-crown", [](detail::Checker& ck, bool t) {
    auto P = t ? powerset(3) : punctured_cube();
    auto C = crown_of(P, CrownMode::ind).poset;
    ck.expect(C.size() == 6, "crown size != 6");
    ck.expect(C.strict_pairs().size() == 6, "crown relation count != 6");
    if (!ck.ok) return;
    auto rep = connectedness_check(C);
    ck.expect(!rep.one_connected, "crown unexpectedly 1-connected");
    ck.expect(rep.kernel_dim == 1, "kernel dimension != 1");
    if (rep.cycle_witness) {
      const std::vector<i64> expected = {1, -1, -1, 1, 1, -1};
      const auto& w = *rep.cycle_witness;
      i64 num = 0, den = 0;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (expected[i] != 0 && w[i] != 0 && den == 0) {
          num = w[i];
          den = expected[i];
        }
      bool prop = num != 0;
      for (std::size_t i = 0; prop && i < w.size(); ++i)
        if (w[i] * den != expected[i] * num) prop = false;
      ck.expect(prop, "kernel witness not proportional to the stated vector");
    } else {
      ck.expect(false, "missing kernel witness");
    }
  });

  run("nonfull-crown-order", [](detail::Checker& ck, bool t) {
    auto P = t ? full_subposet(powerset(4), {"{}", "{1}", "{2}", "{2,3}"})
               : nonfull_crown_poset();
    auto c = crown_of(P, CrownMode::ind);
    ck.expect(c.poset.size() == 5, "crown does not contain all five elements");
    ck.expect(!is_crown(P), "poset unexpectedly a crown");
    ck.expect(is_crown(c.poset), "extracted crown is not a crown");
    if (!ck.ok) return;
    int e = c.poset.index_of("{}");
    int two = c.poset.index_of("{2}");
    ck.expect(P.lt(P.index_of("{}"), P.index_of("{2}")), "order missing in the poset");
    ck.expect(!c.poset.lt(e, two), "crown order kept a relation into a non-maximum");
  });

  run("four-crown-two-sides", [](detail::Checker& ck, bool t) {
    auto P = t ? full_subposet(powerset(3), {"{1}", "{2}", "{1,2}"}) : four_crown();
    ck.expect(is_crown(P), "not a crown");
    auto ind = crown_of(P, CrownMode::ind).poset;
    auto pro = crown_of(P, CrownMode::pro).poset;
    ck.expect(ind.names() == std::vector<std::string>{"{2}", "{1,2}", "{2,3}"},
              "ind-crown objects differ");
    ck.expect(pro.names() == std::vector<std::string>{"{1}", "{2}", "{1,2}"},
              "pro-crown objects differ");
  });

  run("integer-collapse-colimit", [](detail::Checker& ck, bool t) {
    auto X = collapse_instance();
    if (t) X.set_arrow(1, 3, scalar_map(X.object(1), X.object(3), 1));
    ck.expect(check(X, CheckLevel::purely_monic).ok, "diagram not purely monic");
    auto c = brute_force_colimit(X);
    ck.expect(isomorphic(c.apex, make_object(X.ring(), {1})), "apex not Z/3");
    ck.expect(!is_mono(c.leg(2)), "upper leg unexpectedly monomorphic");
    ck.expect(!is_mono(c.leg(3)), "upper leg unexpectedly monomorphic");
  });

  run("flatness-classification", [](detail::Checker& ck, bool t) {
    auto p1 = flatness_check(punctured_cube());
    ck.expect(p1.ind_flat && !p1.pro_flat, "(i) punctured cube classification");
    bool fail_at_bottom = false;
    for (const auto& f : p1.failures)
      if (f.direction == CrownMode::pro && punctured_cube().name(f.element) == "{}")
        fail_at_bottom = true;
    ck.expect(fail_at_bottom, "(i) failing element is not the bottom");
    ck.expect(flatness_check(nonfull_crown_poset()).flat, "(ii) five-element family not flat");
    ck.expect(flatness_check(four_crown()).flat, "(iii) four-crown not flat");
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n)
        ck.expect(flatness_check(product(chain(m), chain(n))).flat,
                  "(iv) chain product not flat");
    // (v) is stated flat at the source; the ten-element family as printed is
    // not ind-flat (see the project notes); the stated verdict is asserted and
    // reported honestly.
    auto v = flatness_check(ten_element_family());
    ck.expect(v.flat, "(v) DIVERGENT: stated flat, computed not ind-flat at {1,2,3,4,5}");
    auto p6 = flatness_check(t ? powerset(2) : powerset(3));
    ck.expect(!p6.ind_flat && !p6.pro_flat, "(vi) powerset 3 classification");
    auto p7 = flatness_check(powerset(4));
    ck.expect(!p7.ind_flat && !p7.pro_flat, "(vii) powerset 4 classification");
  });

  run("subposet-flatness-loss", [](detail::Checker& ck, bool t) {
    auto D = t ? subposet_loss_small() : subposet_loss_big();
    ck.expect(flatness_check(D).flat, "big family not flat");
    auto rep = flatness_check(subposet_loss_small());
    ck.expect(!rep.ind_flat, "small family unexpectedly ind-flat");
    bool at_top = false;
    for (const auto& f : rep.failures)
      if (f.direction == CrownMode::ind &&
          subposet_loss_small().name(f.element) == "{1,2,3,4}")
        at_top = true;
    ck.expect(at_top, "failure not located at {1,2,3,4}");
  });

  run("zero-composite-chain-lift", [](detail::Checker& ck, bool t) {
    auto X = zero_composite_chain();
    if (t) X.set_arrow(0, 2, zero_morphism(X.object(0), X.object(2)));
    ck.expect(check(X, CheckLevel::stably_commutative).ok, "not stably commutative");
    auto strict = check(X, CheckLevel::strictly_commutative);
    ck.expect(!strict.ok, "unexpectedly strictly commutative");
    ck.expect(strict.failures.size() == 1 && strict.failures[0].a == 0 &&
                  strict.failures[0].b == 1 && strict.failures[0].c == 2,
              "defect not at the whole chain");
    auto lift = lift_diagram(X);
    ck.expect(check(lift.lifted, CheckLevel::strictly_commutative).ok, "lift not strict");
    ck.expect(check(lift.lifted, CheckLevel::purely_monic).ok, "lift not purely monic");
    ck.expect(verify_stable_iso(lift.iso), "lift family not a stable isomorphism");
    ck.expect(!is_strictly_natural(DiagramMorphism{lift.lifted, X, lift.iso.components}),
              "family unexpectedly strict (no homotopism can exist here)");
  });

  run("mod27-prolongation", [](detail::Checker& ck, bool t) {
    const RingParams R = RingParams::make(3, 3);
    auto C = make_object(R, {2});
    auto N = make_object(R, {3});
    auto a = scalar_map(C, C, 2);
    auto u = scalar_map(C, N, 3);
    auto v = scalar_map(N, C, 1);
    auto atilde = scalar_map(N, N, t ? 5 : 2);
    ck.expect(compose(a, u) == compose(u, atilde), "u does not prolong a");
    ck.expect(compose(a, u).matrix().at(0, 0) == 6, "prolongation composite != 6");
    ck.expect(sub(compose(atilde, v), compose(v, a)).is_zero(), "first identity fails");
    ck.expect(sub(sub(compose(atilde, atilde), identity_morphism(N)), compose(v, u)).is_zero(),
              "second identity fails");
  });

  run("wedge-fullness-obstruction", [](detail::Checker& ck, bool t) {
    auto w = wedge_instance(t);
    auto strict = strict_lift_of_stable_morphism(w.source, w.target, w.fhat);
    ck.expect(!strict.has_value(), "strict lift unexpectedly exists");
    auto lifted = lift_morphism(w.source, w.target, w.fhat);
    ck.expect(verify_homotopism(lifted.g_prime), "comparison is not a homotopism");
    ck.expect(is_strictly_natural(lifted.g), "lifted morphism not strictly natural");
  });

  run("suspended-crown-jump-one", [](detail::Checker& ck, bool t) {
    auto D = t ? full_subposet(powerset(4), {"{}", "{1}", "{2}", "{3}", "{1,2}", "{2,3}",
                                             "{1,3}", "{1,2,3}", "{1,2,3,4}"})
               : jump_one();
    auto emb = find_full_embedding(suspended_crown(3), D);
    ck.expect(emb.has_value(), "no full suspended 3-crown");
    auto stated = full_subposet(
        powerset(4), {"{}", "{1}", "{2}", "{3}", "{1,2}", "{2,3}", "{1,3,4}", "{1,2,3,4}"});
    ck.expect(find_full_embedding(suspended_crown(3), stated).has_value() &&
                  stated.size() == suspended_crown(3).size(),
              "stated image is not a full suspended 3-crown");
    auto crown_at = [&](const std::string& top) {
      return connectedness_check(
          crown_of(cone(D, top, ConeMode::strict_down).poset, CrownMode::ind).poset);
    };
    ck.expect(crown_at("{1,2,3,4}").one_connected, "top cone crown not 1-connected");
    ck.expect(crown_at("{1,2,3}").kernel_dim == 1, "inner cone kernel dimension != 1");
    auto mit = mitchell_check(D);
    ck.expect(!mit.dimension_le_2 && mit.witness && mit.witness->n == 3,
              "criterion did not fail via a 3-crown");
  });

  run("suspended-crown-jump-two", [](detail::Checker& ck, bool t) {
    auto D = t ? full_subposet(powerset(4), {"{1}", "{2}", "{3}", "{1,2}", "{2,3,4}",
                                             "{1,3,4}", "{1,2,3}", "{1,2,3,4}"})
               : jump_two();
    auto emb = find_full_embedding(suspended_crown(3), D);
    ck.expect(emb.has_value(), "no full suspended 3-crown");
    if (emb) {
      std::vector<std::string> image;
      for (int x : emb->map) image.push_back(D.name(x));
      std::sort(image.begin(), image.end());
      std::vector<std::string> expected = {"{}",      "{1}",     "{2}",     "{3}",
                                           "{1,2}",   "{2,3,4}", "{1,3,4}", "{1,2,3,4}"};
      std::sort(expected.begin(), expected.end());
      ck.expect(image == expected, "embedding image differs from the stated one");
    }
    auto kd = [&](const Poset& Q) {
      return connectedness_check(
                 crown_of(cone(Q, "{1,2,3,4}", ConeMode::strict_down).poset, CrownMode::ind)
                     .poset)
          .kernel_dim;
    };
    ck.expect(kd(jump_two()) == 2, "full family kernel dimension != 2");
    auto Dp = full_subposet(powerset(4), {"{}", "{1}", "{2}", "{3}", "{1,2}", "{2,3,4}",
                                          "{1,3,4}", "{1,2,3,4}"});
    ck.expect(kd(Dp) == 1, "punctured family kernel dimension != 1");
  });

  run("quasitree-region", [](detail::Checker& ck, bool t) {
    ck.expect(quasitree_check(four_crown()), "crown not recognized as a quasitree");
    auto wedge = t ? product(chain(1), chain(1))
                   : full_subposet(powerset(2), {"{1}", "{2}", "{1,2}"});
    ck.expect(quasitree_check(wedge), "wedge not a quasitree");
    ck.expect(!quasitree_check(product(chain(1), chain(1))), "square wrongly a quasitree");
    for (const auto& P : enumerate_posets(5))
      if (quasitree_check(P))
        ck.expect(flatness_check(P).flat, "a five-element quasitree is not flat");
  });

  run("chain-product-flatness", [](detail::Checker& ck, bool t) {
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n) {
        auto P = t && m == 1 && n == 1 ? powerset(3) : product(chain(m), chain(n));
        ck.expect(flatness_check(P).flat, "chain product not flat");
      }
  });

  return results;
}

// The single documented divergence between stated and computed verdicts.
inline const char* known_divergent_fixture() { return "flatness-classification"; }

}  // namespace flatlift::fixtures
