#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlift/colimit.hpp"
#include "flatlift/flatness.hpp"

namespace flatlift {

struct TraceStep {
  std::string element;
  std::string action;
  int added_free_rank = 0;
};

struct ReplaceResult {
  Prediagram diagram;
  StableIsoFamily family;  // new diagram -> old diagram
};

// Replacement at a: the object gains a free summand N, arrows out of a gain
// prolongations eta_c, arrows into a gain coordinates zeta_b. Missing entries
// default to zero. The comparison family is the projection off N at a and the
// identity elsewhere; it is strictly natural precisely when no prolongation
// out of a is nonzero, in particular whenever a is maximal.
inline ReplaceResult replace_at(const Prediagram& X, int a,
                                const std::map<int, ModMorphism>& eta,
                                const std::map<int, ModMorphism>& zeta, const ModObject& N) {
  require(N.is_free(), Errc::not_free, "replacement summand must be free");
  require(a >= 0 && a < X.shape.size(), Errc::unknown_name, "replacement element out of range");
  for (const auto& [c, h] : eta) {
    require(X.shape.lt(a, c), Errc::ill_typed, "prolongation key is not above the element");
    require(h.source() == N && h.target() == X.object(c), Errc::ill_typed,
            "prolongation has the wrong type");
  }
  for (const auto& [b, z] : zeta) {
    require(X.shape.lt(b, a), Errc::ill_typed, "coordinate key is not below the element");
    require(z.source() == X.object(b) && z.target() == N, Errc::ill_typed,
            "coordinate has the wrong type");
  }

  ReplaceResult out;
  out.diagram = X;
  out.diagram.objects[static_cast<std::size_t>(a)] = direct_sum(X.object(a), N);
  for (const auto& [pair, f] : X.arrows) {
    auto [b, c] = pair;
    if (b == a) {
      auto it = eta.find(c);
      out.diagram.arrows.insert_or_assign(
          pair, vstack(f, it != eta.end() ? it->second : zero_morphism(N, X.object(c))));
    } else if (c == a) {
      auto it = zeta.find(b);
      out.diagram.arrows.insert_or_assign(
          pair, hstack(f, it != zeta.end() ? it->second : zero_morphism(X.object(b), N)));
    }
  }

  StableIsoFamily fam{out.diagram, X, {}};
  for (int b = 0; b < X.shape.size(); ++b) {
    if (b == a)
      fam.components.push_back(
          vstack(identity_morphism(X.object(a)), zero_morphism(N, X.object(a))));
    else
      fam.components.push_back(identity_morphism(X.object(b)));
  }
  out.family = std::move(fam);

  bool maximal = true;
  for (int c = 0; c < X.shape.size(); ++c)
    if (X.shape.lt(a, c)) maximal = false;
  if (maximal)
    sentinel(is_strictly_natural(DiagramMorphism{out.diagram, X, out.family.components}),
             Errc::internal_check_failed, "replacement at a maximal element must be strict");
  return out;
}

struct PurifyResult {
  Prediagram diagram;
  DiagramMorphism homotopism;  // new diagram -> old diagram
  std::vector<TraceStep> trace;
};

// One purification step at a maximal element c: replace X_c by X_c (+) N where
// N is a bijective cover of the colimit over the strict down cone, and extend
// every arrow into c by its transition into that cover.
inline PurifyResult purify_at_max(const Prediagram& X, int c) {
  const Poset& P = X.shape;
  require(c >= 0 && c < P.size(), Errc::unknown_name, "element out of range");
  for (int x = 0; x < P.size(); ++x)
    require(!P.lt(c, x), Errc::precondition_violated, "element is not maximal");
  require(check(X, CheckLevel::strictly_commutative).ok, Errc::precondition_violated,
          "diagram is not strictly commutative");
  auto down = cone(P, c, ConeMode::strict_down);
  std::vector<int> others;
  for (int x = 0; x < P.size(); ++x)
    if (x != c) others.push_back(x);
  require(check(restrict(X, others), CheckLevel::purely_monic).ok, Errc::precondition_violated,
          "diagram is not purely monic away from the element");
  require(connectedness_check(crown_of(down.poset, CrownMode::ind).poset).one_connected,
          Errc::precondition_violated, "down-cone ind-crown is not componentwise 1-connected");

  Cocone colim = poset_colimit_via_crown(restrict(X, down.embedding.map));
  auto be = bijective_embedding(colim.apex);
  std::map<int, ModMorphism> zeta;
  for (int i = 0; i < down.poset.size(); ++i)
    zeta.emplace(down.embedding.map[static_cast<std::size_t>(i)],
                 compose(colim.leg(i), be.embedding));
  auto rep = replace_at(X, c, {}, zeta, be.bijective);

  sentinel(check(rep.diagram, CheckLevel::strictly_commutative).ok, Errc::internal_check_failed,
           "purification broke strict commutativity");
  sentinel(check(rep.diagram, CheckLevel::purely_monic).ok, Errc::internal_check_failed,
           "purification did not produce pure monomorphisms");

  PurifyResult out{rep.diagram,
                   DiagramMorphism{rep.diagram, X, rep.family.components},
                   {TraceStep{P.name(c), "purify", be.bijective.rank()}}};
  return out;
}

namespace detail {

inline PurifyResult purify_rec(const Prediagram& X) {
  if (X.shape.empty())
    return PurifyResult{X, DiagramMorphism{X, X, {}}, {}};
  const int c = extrema(X.shape, ExtremaMode::max).front();
  std::vector<int> keep;
  for (int x = 0; x < X.shape.size(); ++x)
    if (x != c) keep.push_back(x);
  std::vector<int> inv(static_cast<std::size_t>(X.shape.size()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) inv[static_cast<std::size_t>(keep[i])] =
      static_cast<int>(i);

  PurifyResult sub = purify_rec(restrict(X, keep));

  Prediagram cur;
  cur.shape = X.shape;
  cur.ring_params = X.ring_params;
  cur.objects.resize(static_cast<std::size_t>(X.shape.size()), zero_object(X.ring_params));
  for (std::size_t i = 0; i < keep.size(); ++i)
    cur.objects[static_cast<std::size_t>(keep[i])] = sub.diagram.object(static_cast<int>(i));
  cur.objects[static_cast<std::size_t>(c)] = X.object(c);
  for (const auto& [pair, f] : sub.diagram.arrows)
    cur.arrows.emplace(std::pair{keep[static_cast<std::size_t>(pair.first)],
                                 keep[static_cast<std::size_t>(pair.second)]},
                       f);
  for (int b : keep)
    if (X.shape.lt(b, c))
      cur.set_arrow(b, c,
                    compose(sub.homotopism.at(inv[static_cast<std::size_t>(b)]), X.arrow(b, c)));

  DiagramMorphism to_x{cur, X, {}};
  for (int x = 0; x < X.shape.size(); ++x) {
    if (x == c)
      to_x.components.push_back(identity_morphism(X.object(c)));
    else
      to_x.components.push_back(sub.homotopism.at(inv[static_cast<std::size_t>(x)]));
  }

  PurifyResult step = purify_at_max(cur, c);
  PurifyResult out{step.diagram, compose_morphisms(step.homotopism, to_x), sub.trace};
  out.trace.insert(out.trace.end(), step.trace.begin(), step.trace.end());
  return out;
}

}  // namespace detail

// Purely monomorphic replacement over an ind-flat shape: peel a maximal
// element, recurse, transport the arrows into it along the recursive
// homotopism, and finish with a purification step there.
inline PurifyResult purify(const Prediagram& X) {
  require(flatness_check(X.shape).ind_flat, Errc::not_ind_flat, "shape is not ind-flat");
  require(check(X, CheckLevel::typed).ok, Errc::ill_formed, "prediagram is not well typed");
  require(check(X, CheckLevel::strictly_commutative).ok, Errc::precondition_violated,
          "diagram is not strictly commutative");
  PurifyResult out = detail::purify_rec(X);
  sentinel(verify_homotopism(out.homotopism), Errc::internal_check_failed,
           "purification did not return a homotopism");
  return out;
}

// Replacement at d that makes the triangle through d into c commute on the
// nose, leaving everything away from d unchanged: the stably zero defect at
// (e, c) is factored through a bijective cover of the colimit below d.
inline ReplaceResult add_commutativity(const Prediagram& X, int c, int d, int e) {
  const Poset& P = X.shape;
  for (int x = 0; x < P.size(); ++x)
    require(!P.lt(c, x), Errc::precondition_violated, "c is not maximal");
  require(P.lt(d, c), Errc::precondition_violated, "d is not strictly below c");
  for (int x = 0; x < P.size(); ++x)
    require(!(P.lt(d, x) && P.lt(x, c)), Errc::precondition_violated,
            "d is not maximal in the strict down cone of c");
  require(P.lt(e, d), Errc::precondition_violated, "e is not strictly below d");

  auto down_d = cone(P, d, ConeMode::strict_down);
  require(connectedness_check(crown_of(down_d.poset, CrownMode::ind).poset).one_connected,
          Errc::precondition_violated, "down-cone ind-crown of d is not 1-connected");
  std::vector<int> not_c;
  for (int x = 0; x < P.size(); ++x)
    if (x != c) not_c.push_back(x);
  require(check(restrict(X, not_c), CheckLevel::strictly_commutative).ok,
          Errc::precondition_violated, "diagram is not strictly commutative away from c");
  auto down_c = cone(P, c, ConeMode::strict_down);
  require(check(restrict(X, down_c.embedding.map), CheckLevel::purely_monic).ok,
          Errc::precondition_violated, "diagram is not purely monic below c");

  Cocone colim = poset_colimit_via_crown(restrict(X, down_d.embedding.map));
  auto be = bijective_embedding(colim.apex);

  int e_local = -1;
  for (int i = 0; i < down_d.poset.size(); ++i)
    if (down_d.embedding.map[static_cast<std::size_t>(i)] == e) e_local = i;
  sentinel(e_local >= 0, Errc::internal_check_failed, "e is missing from the cone of d");

  ModMorphism defect = sub(X.arrow(e, c), compose(X.arrow(e, d), X.arrow(d, c)));
  auto theta = solve(compose(colim.leg(e_local), be.embedding), defect,
                     SolveSide::through_source);
  require(theta.has_value(), Errc::factorization_failed,
          "composition defect is not stably zero");

  std::map<int, ModMorphism> eta;
  eta.emplace(c, *theta);
  std::map<int, ModMorphism> zeta;
  for (int i = 0; i < down_d.poset.size(); ++i)
    zeta.emplace(down_d.embedding.map[static_cast<std::size_t>(i)],
                 compose(colim.leg(i), be.embedding));
  ReplaceResult rep = replace_at(X, d, eta, zeta, be.bijective);

  // contract: (i) strict away from c, (ii) monic below c, (iii) the triangle
  // commutes, (iv) untouched away from d
  sentinel(check(restrict(rep.diagram, not_c), CheckLevel::strictly_commutative).ok,
           Errc::internal_check_failed, "replacement broke strictness away from c");
  sentinel(check(restrict(rep.diagram, down_c.embedding.map), CheckLevel::purely_monic).ok,
           Errc::internal_check_failed, "replacement broke purity below c");
  sentinel(rep.diagram.arrow(e, c) ==
               compose(rep.diagram.arrow(e, d), rep.diagram.arrow(d, c)),
           Errc::internal_check_failed, "triangle does not commute after replacement");
  std::vector<int> not_d;
  for (int x = 0; x < P.size(); ++x)
    if (x != d) not_d.push_back(x);
  sentinel(restrict(rep.diagram, not_d) == restrict(X, not_d), Errc::internal_check_failed,
           "replacement changed the diagram away from d");
  return rep;
}

struct LiftResult {
  Prediagram lifted;       // strictly commutative, purely monic
  StableIsoFamily iso;     // lifted -> input
  std::vector<TraceStep> trace;
};

namespace detail {

inline LiftResult lift_rec(const Prediagram& X) {
  if (X.shape.empty())
    return LiftResult{X, identity_family(X), {}};

  const Poset& P = X.shape;
  const int c = extrema(P, ExtremaMode::max).front();
  std::vector<int> keep;
  for (int x = 0; x < P.size(); ++x)
    if (x != c) keep.push_back(x);
  std::vector<int> inv(static_cast<std::size_t>(P.size()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i)
    inv[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);

  LiftResult sub = lift_rec(restrict(X, keep));
  std::vector<TraceStep> trace = sub.trace;

  // re-attach the top object along representatives of the recursive family
  Prediagram cur;
  cur.shape = P;
  cur.ring_params = X.ring_params;
  cur.objects.resize(static_cast<std::size_t>(P.size()), zero_object(X.ring_params));
  for (std::size_t i = 0; i < keep.size(); ++i)
    cur.objects[static_cast<std::size_t>(keep[i])] = sub.lifted.object(static_cast<int>(i));
  cur.objects[static_cast<std::size_t>(c)] = X.object(c);
  for (const auto& [pair, f] : sub.lifted.arrows)
    cur.arrows.emplace(std::pair{keep[static_cast<std::size_t>(pair.first)],
                                 keep[static_cast<std::size_t>(pair.second)]},
                       f);
  for (int b : keep)
    if (P.lt(b, c))
      cur.set_arrow(b, c, compose(sub.iso.at(inv[static_cast<std::size_t>(b)]), X.arrow(b, c)));

  std::vector<StableIsoFamily> fams;
  {
    StableIsoFamily fam{cur, X, {}};
    for (int x = 0; x < P.size(); ++x) {
      if (x == c)
        fam.components.push_back(identity_morphism(X.object(c)));
      else
        fam.components.push_back(sub.iso.at(inv[static_cast<std::size_t>(x)]));
    }
    fams.push_back(std::move(fam));
  }
  trace.push_back(TraceStep{P.name(c), "reattach", 0});
  sentinel(check(cur, CheckLevel::stably_commutative).ok, Errc::internal_check_failed,
           "re-attachment broke stable commutativity");

  // commutant induction over the crown of the strict down cone of c
  auto down_c = cone(P, c, ConeMode::strict_down);
  auto crown = crown_of(down_c.poset, CrownMode::ind);
  auto crep = connectedness_check(crown.poset);
  sentinel(crep.one_connected, Errc::internal_check_failed,
           "ind-flat shape with a non-1-connected crown");
  auto to_shape = [&](int crown_idx) {
    return down_c.embedding.map[static_cast<std::size_t>(
        crown.embedding.map[static_cast<std::size_t>(crown_idx)])];
  };
  const auto& peel = *crep.peel_sequence;
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(crown.poset.size()), 0);
  for (auto it = peel.rbegin(); it != peel.rend(); ++it) {
    const int u = it->element;
    int dn = -1, up = -1;
    for (int w = 0; w < crown.poset.size(); ++w) {
      if (!alive[static_cast<std::size_t>(w)]) continue;
      if (crown.poset.lt(w, u)) dn = w;
      if (crown.poset.lt(u, w)) up = w;
    }
    switch (it->tag) {
      case PeelCase::isolated:
        break;
      case PeelCase::case_i: {
        sentinel(dn >= 0, Errc::internal_check_failed, "peel case without a lower neighbour");
        auto rep = add_commutativity(cur, c, to_shape(u), to_shape(dn));
        int added = rep.diagram.object(to_shape(u)).rank() - cur.object(to_shape(u)).rank();
        cur = rep.diagram;
        fams.push_back(rep.family);
        trace.push_back(TraceStep{P.name(to_shape(u)), "square", added});
        break;
      }
      case PeelCase::case_ii: {
        sentinel(up >= 0, Errc::internal_check_failed, "peel case without an upper neighbour");
        Prediagram next = cur;
        next.set_arrow(to_shape(u), c,
                       compose(cur.arrow(to_shape(u), to_shape(up)),
                               cur.arrow(to_shape(up), c)));
        StableIsoFamily fam{next, cur, {}};
        for (const auto& obj : cur.objects) fam.components.push_back(identity_morphism(obj));
        cur = std::move(next);
        fams.push_back(std::move(fam));
        trace.push_back(TraceStep{P.name(to_shape(u)), "reroute", 0});
        break;
      }
    }
    alive[static_cast<std::size_t>(u)] = 1;
  }

  // collapse: route every arrow into c through a maximal element of the cone
  {
    std::vector<int> max_cone;
    for (int i : extrema(down_c.poset, ExtremaMode::max))
      max_cone.push_back(down_c.embedding.map[static_cast<std::size_t>(i)]);
    Prediagram next = cur;
    for (int b : down_c.embedding.map) {
      std::optional<ModMorphism> routed;
      for (int t : max_cone) {
        if (!P.leq(b, t)) continue;
        ModMorphism cand =
            b == t ? cur.arrow(b, c) : compose(cur.arrow(b, t), cur.arrow(t, c));
        if (!routed)
          routed = std::move(cand);
        else
          sentinel(*routed == cand, Errc::internal_check_failed,
                   "collapse depends on the chosen maximal element");
      }
      sentinel(routed.has_value(), Errc::internal_check_failed,
               "cone element below no maximal element");
      next.set_arrow(b, c, std::move(*routed));
    }
    StableIsoFamily fam{next, cur, {}};
    for (const auto& obj : cur.objects) fam.components.push_back(identity_morphism(obj));
    cur = std::move(next);
    fams.push_back(std::move(fam));
    trace.push_back(TraceStep{P.name(c), "collapse", 0});
  }
  sentinel(check(cur, CheckLevel::strictly_commutative).ok, Errc::internal_check_failed,
           "collapse did not produce a strict diagram");

  PurifyResult pur = detail::purify_rec(cur);
  fams.push_back(family_of(pur.homotopism));
  trace.insert(trace.end(), pur.trace.begin(), pur.trace.end());

  StableIsoFamily total = fams.back();
  for (std::size_t i = fams.size() - 1; i-- > 0;) total = compose_families(total, fams[i]);
  return LiftResult{pur.diagram, std::move(total), std::move(trace)};
}

}  // namespace detail

// Density: every stably commutative prediagram over an ind-flat finite poset
// is stably isomorphic to a strictly commutative diagram of pure
// monomorphisms. The returned family runs from the lift to the input and is
// verified before returning.
inline LiftResult lift_diagram(const Prediagram& X) {
  require(check(X, CheckLevel::typed).ok, Errc::ill_formed, "prediagram is not well typed");
  require(flatness_check(X.shape).ind_flat, Errc::not_ind_flat, "shape is not ind-flat");
  require(check(X, CheckLevel::stably_commutative).ok, Errc::not_stably_commutative,
          "prediagram is not stably commutative");
  LiftResult out = detail::lift_rec(X);
  sentinel(check(out.lifted, CheckLevel::strictly_commutative).ok, Errc::internal_check_failed,
           "lift is not strictly commutative");
  sentinel(check(out.lifted, CheckLevel::purely_monic).ok, Errc::internal_check_failed,
           "lift is not purely monic");
  sentinel(verify_stable_iso(out.iso), Errc::internal_check_failed,
           "lift comparison family is not a stable isomorphism");
  return out;
}

// Strict lift of a stable morphism between strict diagrams (the fullness
// test): look for corrections of the representatives by stably zero maps that
// make every naturality square commute on the nose.
inline std::optional<DiagramMorphism> strict_lift_of_stable_morphism(
    const Prediagram& X, const Prediagram& Y, const std::vector<ModMorphism>& fhat) {
  require(X.shape == Y.shape, Errc::shape_mismatch, "shapes differ");
  require(check(X, CheckLevel::strictly_commutative).ok &&
              check(Y, CheckLevel::strictly_commutative).ok,
          Errc::precondition_violated, "diagrams are not strictly commutative");
  require(fhat.size() == static_cast<std::size_t>(X.shape.size()), Errc::shape_mismatch,
          "component count mismatch");
  for (int a = 0; a < X.shape.size(); ++a)
    require(fhat[static_cast<std::size_t>(a)].source() == X.object(a) &&
                fhat[static_cast<std::size_t>(a)].target() == Y.object(a),
            Errc::ill_typed, "representative has the wrong type");
  for (auto [a, b] : X.shape.strict_pairs()) {
    ModMorphism defect = sub(compose(fhat[static_cast<std::size_t>(a)], Y.arrow(a, b)),
                             compose(X.arrow(a, b), fhat[static_cast<std::size_t>(b)]));
    require(is_stably_zero(defect).has_value(), Errc::not_stably_natural,
            "representatives are not stably natural");
  }
  if (X.shape.empty()) return DiagramMorphism{X, Y, {}};

  MorphismSystem sys(X.ring());
  std::vector<int> blocks;
  std::vector<ModMorphism> iotas;
  for (int a = 0; a < X.shape.size(); ++a) {
    auto be = bijective_embedding(X.object(a));
    blocks.push_back(sys.add_unknown(be.bijective, Y.object(a)));
    iotas.push_back(be.embedding);
  }
  for (auto [a, b] : X.shape.strict_pairs()) {
    std::vector<MorphismSystem::Term> terms;
    terms.push_back({blocks[static_cast<std::size_t>(a)], iotas[static_cast<std::size_t>(a)],
                     Y.arrow(a, b), +1});
    terms.push_back({blocks[static_cast<std::size_t>(b)],
                     compose(X.arrow(a, b), iotas[static_cast<std::size_t>(b)]),
                     identity_morphism(Y.object(b)), -1});
    ModMorphism rhs = sub(compose(X.arrow(a, b), fhat[static_cast<std::size_t>(b)]),
                          compose(fhat[static_cast<std::size_t>(a)], Y.arrow(a, b)));
    sys.add_equation(terms, rhs);
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  DiagramMorphism g{X, Y, {}};
  for (int a = 0; a < X.shape.size(); ++a)
    g.components.push_back(add(fhat[static_cast<std::size_t>(a)],
                               compose(iotas[static_cast<std::size_t>(a)],
                                       (*sol)[static_cast<std::size_t>(a)])));
  sentinel(is_strictly_natural(g), Errc::internal_check_failed,
           "computed corrections are not strictly natural");
  return g;
}

struct MorphismLiftResult {
  Prediagram replaced;                   // X', purely monic and strict
  DiagramMorphism g_prime;               // X' -> X, a homotopism
  DiagramMorphism g;                     // X' -> Y, strictly natural
  std::vector<ModMorphism> certificate;  // witnesses that g'_a fhat_a - g_a is stably zero
};

namespace detail {

inline MorphismLiftResult lift_morphism_rec(const Prediagram& X, const Prediagram& Y,
                                            const std::vector<ModMorphism>& fhat) {
  if (X.shape.empty())
    return MorphismLiftResult{X, DiagramMorphism{X, X, {}}, DiagramMorphism{X, Y, {}}, {}};

  const Poset& P = X.shape;
  const int c = extrema(P, ExtremaMode::max).front();
  std::vector<int> keep;
  for (int x = 0; x < P.size(); ++x)
    if (x != c) keep.push_back(x);
  std::vector<int> inv(static_cast<std::size_t>(P.size()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i)
    inv[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);

  std::vector<ModMorphism> fsub;
  for (int b : keep) fsub.push_back(fhat[static_cast<std::size_t>(b)]);
  MorphismLiftResult inner = lift_morphism_rec(restrict(X, keep), restrict(Y, keep), fsub);

  // X'' = recursive replacement with the top object re-attached by composition
  Prediagram X2;
  X2.shape = P;
  X2.ring_params = X.ring_params;
  X2.objects.resize(static_cast<std::size_t>(P.size()), zero_object(X.ring_params));
  for (std::size_t i = 0; i < keep.size(); ++i)
    X2.objects[static_cast<std::size_t>(keep[i])] = inner.replaced.object(static_cast<int>(i));
  X2.objects[static_cast<std::size_t>(c)] = X.object(c);
  for (const auto& [pair, f] : inner.replaced.arrows)
    X2.arrows.emplace(std::pair{keep[static_cast<std::size_t>(pair.first)],
                                keep[static_cast<std::size_t>(pair.second)]},
                      f);
  for (int b : keep)
    if (P.lt(b, c))
      X2.set_arrow(b, c,
                   compose(inner.g_prime.at(inv[static_cast<std::size_t>(b)]), X.arrow(b, c)));

  DiagramMorphism hprime{X2, X, {}};
  for (int x = 0; x < P.size(); ++x) {
    if (x == c)
      hprime.components.push_back(identity_morphism(X.object(c)));
    else
      hprime.components.push_back(inner.g_prime.at(inv[static_cast<std::size_t>(x)]));
  }

  const ModMorphism& fc = fhat[static_cast<std::size_t>(c)];

  // factor the defects over the maxima of the cone through one bijective cover
  auto down_c = cone(P, c, ConeMode::strict_down);
  std::vector<int> max_cone;
  for (int i : extrema(down_c.poset, ExtremaMode::max))
    max_cone.push_back(down_c.embedding.map[static_cast<std::size_t>(i)]);

  ModObject S = zero_object(X.ring_params);
  std::vector<ModObject> parts;
  for (int a : max_cone) {
    parts.push_back(X2.object(a));
    S = direct_sum(S, X2.object(a));
  }
  auto be = bijective_embedding(S);
  std::optional<ModMorphism> defect_stack;
  for (std::size_t t = 0; t < max_cone.size(); ++t) {
    const int a = max_cone[t];
    ModMorphism block = sub(compose(inner.g.at(inv[static_cast<std::size_t>(a)]), Y.arrow(a, c)),
                            compose(X2.arrow(a, c), fc));
    defect_stack = defect_stack ? vstack(*defect_stack, block) : block;
  }
  ModMorphism s = zero_morphism(be.bijective, Y.object(c));
  if (defect_stack) {
    auto sol = solve(be.embedding, *defect_stack, SolveSide::through_source);
    sentinel(sol.has_value(), Errc::internal_check_failed,
             "defect over the cone maxima did not factor");
    s = *sol;
  }

  std::map<int, ModMorphism> zeta;
  for (int b : down_c.embedding.map) {
    // the unique maximal way from b into the cone of c
    std::optional<int> routed;
    for (std::size_t t = 0; t < max_cone.size(); ++t)
      if (P.leq(b, max_cone[t])) {
        sentinel(!routed.has_value(), Errc::internal_check_failed,
                 "interval to c is not linearly ordered");
        routed = static_cast<int>(t);
      }
    sentinel(routed.has_value(), Errc::internal_check_failed, "no maximal element above");
    const int t = *routed;
    ModMorphism i_a = compose(sum_injection(parts, static_cast<std::size_t>(t)), be.embedding);
    zeta.emplace(b, compose(X2.arrow_or_id(b, max_cone[static_cast<std::size_t>(t)]), i_a));
  }
  ReplaceResult rep = replace_at(X2, c, {}, zeta, be.bijective);

  MorphismLiftResult out;
  out.replaced = rep.diagram;
  out.g_prime = compose_morphisms(DiagramMorphism{rep.diagram, X2, rep.family.components},
                                  hprime);
  out.g = DiagramMorphism{rep.diagram, Y, {}};
  for (int x = 0; x < P.size(); ++x) {
    if (x == c)
      out.g.components.push_back(vstack(fc, s));
    else
      out.g.components.push_back(inner.g.at(inv[static_cast<std::size_t>(x)]));
  }
  for (int a = 0; a < P.size(); ++a) {
    auto w = is_stably_zero(sub(compose(out.g_prime.at(a), fhat[static_cast<std::size_t>(a)]),
                                out.g.at(a)));
    sentinel(w.has_value(), Errc::internal_check_failed,
             "lift certificate defect is not stably zero");
    out.certificate.push_back(std::move(*w));
  }
  return out;
}

}  // namespace detail

// 1-epimorphy over quasitrees: a stable morphism between purely monic strict
// diagrams is realized as a strict morphism out of a homotopism-equivalent
// replacement of its source.
inline MorphismLiftResult lift_morphism(const Prediagram& X, const Prediagram& Y,
                                        const std::vector<ModMorphism>& fhat) {
  require(X.shape == Y.shape, Errc::shape_mismatch, "shapes differ");
  require(quasitree_check(X.shape), Errc::not_quasitree, "shape is not a quasitree");
  require(check(X, CheckLevel::strictly_commutative).ok &&
              check(X, CheckLevel::purely_monic).ok,
          Errc::precondition_violated, "source is not a purely monic diagram");
  require(check(Y, CheckLevel::strictly_commutative).ok &&
              check(Y, CheckLevel::purely_monic).ok,
          Errc::precondition_violated, "target is not a purely monic diagram");
  require(fhat.size() == static_cast<std::size_t>(X.shape.size()), Errc::shape_mismatch,
          "component count mismatch");
  for (int a = 0; a < X.shape.size(); ++a)
    require(fhat[static_cast<std::size_t>(a)].source() == X.object(a) &&
                fhat[static_cast<std::size_t>(a)].target() == Y.object(a),
            Errc::ill_typed, "representative has the wrong type");
  for (auto [a, b] : X.shape.strict_pairs())
    require(is_stably_zero(sub(compose(fhat[static_cast<std::size_t>(a)], Y.arrow(a, b)),
                               compose(X.arrow(a, b), fhat[static_cast<std::size_t>(b)])))
                .has_value(),
            Errc::precondition_violated, "representatives are not stably natural");

  MorphismLiftResult out = detail::lift_morphism_rec(X, Y, fhat);
  sentinel(check(out.replaced, CheckLevel::strictly_commutative).ok &&
               check(out.replaced, CheckLevel::purely_monic).ok,
           Errc::internal_check_failed, "replacement is not a purely monic diagram");
  sentinel(verify_homotopism(out.g_prime), Errc::internal_check_failed,
           "comparison morphism is not a homotopism");
  sentinel(is_strictly_natural(out.g), Errc::internal_check_failed,
           "lifted morphism is not strictly natural");
  for (int a = 0; a < X.shape.size(); ++a) {
    ModMorphism lhs = sub(compose(out.g_prime.at(a), fhat[static_cast<std::size_t>(a)]),
                          out.g.at(a));
    sentinel(compose(bijective_embedding(out.replaced.object(a)).embedding,
                     out.certificate[static_cast<std::size_t>(a)]) == lhs,
             Errc::internal_check_failed, "certificate witness mismatch");
  }
  return out;
}

// The pure-epi statement, by passing to the opposite poset and transposing.
inline LiftResult lift_diagram_epi(const Prediagram& X) {
  require(check(X, CheckLevel::typed).ok, Errc::ill_formed, "prediagram is not well typed");
  require(flatness_check(X.shape).pro_flat, Errc::not_ind_flat,
          "opposite shape is not ind-flat (shape is not pro-flat)");

  Prediagram Xop;
  Xop.shape = opposite(X.shape);
  Xop.ring_params = X.ring_params;
  for (const auto& obj : X.objects) Xop.objects.push_back(dual_object(obj));
  for (auto [a, b] : Xop.shape.strict_pairs()) Xop.set_arrow(a, b, dual_morphism(X.arrow(b, a)));

  LiftResult res = lift_diagram(Xop);

  Prediagram lifted;
  lifted.shape = X.shape;
  lifted.ring_params = X.ring_params;
  for (const auto& obj : res.lifted.objects) lifted.objects.push_back(dual_object(obj));
  for (auto [a, b] : X.shape.strict_pairs())
    lifted.set_arrow(a, b, dual_morphism(res.lifted.arrow(b, a)));

  StableIsoFamily iso{lifted, X, {}};
  for (int a = 0; a < X.shape.size(); ++a) {
    ModMorphism to_lift = dual_morphism(res.iso.at(a));  // X_a -> lifted_a
    auto w = stable_iso_witness(to_lift);
    sentinel(w.has_value(), Errc::internal_check_failed, "dualized component not invertible");
    iso.components.push_back(w->inverse);
  }

  sentinel(check(lifted, CheckLevel::strictly_commutative).ok, Errc::internal_check_failed,
           "dual lift is not strictly commutative");
  for (auto [a, b] : lifted.shape.strict_pairs())
    sentinel(is_epi(lifted.arrow(a, b)), Errc::internal_check_failed,
             "dual lift arrow is not a pure epimorphism");
  sentinel(verify_stable_iso(iso), Errc::internal_check_failed,
           "dual lift family is not a stable isomorphism");
  return LiftResult{std::move(lifted), std::move(iso), std::move(res.trace)};
}

}  // namespace flatlift
