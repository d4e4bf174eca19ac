#pragma once

#include <utility>
#include <vector>

#include "flatlift/crown.hpp"
#include "flatlift/diagram.hpp"

namespace flatlift {

struct Cocone {
  Prediagram diagram;
  ModObject apex;
  std::vector<ModMorphism> legs;

  const ModMorphism& leg(int a) const { return legs[static_cast<std::size_t>(a)]; }
};

namespace detail {

inline void verify_cocone(const Cocone& c, Errc on_purity) {
  for (auto [a, b] : c.diagram.shape.strict_pairs())
    sentinel(compose(c.diagram.arrow(a, b), c.leg(b)) == c.leg(a), Errc::internal_check_failed,
             "cocone legs do not commute with the diagram");
  for (const auto& leg : c.legs)
    sentinel(is_mono(leg), on_purity, "transition morphism is not a pure monomorphism");
}

}  // namespace detail

// Colimit of a purely monic diagram over a componentwise 1-connected crown,
// built along the peel sequence: isolated elements contribute direct summands,
// maximal elements with one lower neighbour a pushout, minimal elements with
// one upper neighbour reuse the apex.
inline Cocone crown_colimit(const Prediagram& X) {
  const Poset& C = X.shape;
  const RingParams& ring = X.ring();
  auto rep = connectedness_check(C);
  require(rep.one_connected, Errc::not_one_connected, "crown is not componentwise 1-connected");
  require(check(X, CheckLevel::typed).ok, Errc::ill_formed, "prediagram is not well typed");
  require(check(X, CheckLevel::purely_monic).ok, Errc::not_purely_monic,
          "diagram is not purely monic");

  const auto& peel = *rep.peel_sequence;
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(C.size()), 0);
  ModObject apex = zero_object(ring);
  std::vector<ModMorphism> legs(static_cast<std::size_t>(C.size()),
                                zero_morphism(zero_object(ring), zero_object(ring)));

  for (auto it = peel.rbegin(); it != peel.rend(); ++it) {
    const int e = it->element;
    int down = -1, up = -1;
    for (int d = 0; d < C.size(); ++d) {
      if (!alive[static_cast<std::size_t>(d)]) continue;
      if (C.lt(d, e)) down = d;
      if (C.lt(e, d)) up = d;
    }
    switch (it->tag) {
      case PeelCase::isolated: {
        sentinel(down < 0 && up < 0, Errc::internal_check_failed, "peel tag mismatch");
        ModObject grown = direct_sum(apex, X.object(e));
        std::vector<ModObject> parts = {apex, X.object(e)};
        auto keep = sum_injection(parts, 0);
        for (int a = 0; a < C.size(); ++a)
          if (alive[static_cast<std::size_t>(a)])
            legs[static_cast<std::size_t>(a)] = compose(legs[static_cast<std::size_t>(a)], keep);
        legs[static_cast<std::size_t>(e)] = sum_injection(parts, 1);
        apex = std::move(grown);
        break;
      }
      case PeelCase::case_i: {
        sentinel(down >= 0 && up < 0, Errc::internal_check_failed, "peel tag mismatch");
        auto po = pushout(legs[static_cast<std::size_t>(down)], X.arrow(down, e));
        for (int a = 0; a < C.size(); ++a)
          if (alive[static_cast<std::size_t>(a)])
            legs[static_cast<std::size_t>(a)] =
                compose(legs[static_cast<std::size_t>(a)], po.from_left);
        legs[static_cast<std::size_t>(e)] = po.from_right;
        apex = po.object;
        break;
      }
      case PeelCase::case_ii: {
        sentinel(up >= 0 && down < 0, Errc::internal_check_failed, "peel tag mismatch");
        legs[static_cast<std::size_t>(e)] =
            compose(X.arrow(e, up), legs[static_cast<std::size_t>(up)]);
        break;
      }
    }
    alive[static_cast<std::size_t>(e)] = 1;
  }

  Cocone out{X, std::move(apex), std::move(legs)};
  detail::verify_cocone(out, Errc::purity_violation);
  return out;
}

// Colimit of a purely monic strictly commutative diagram over a poset whose
// ind-crown is componentwise 1-connected; legs extend from the crown through
// any maximal element above, and the extension is checked to be independent
// of that choice.
inline Cocone poset_colimit_via_crown(const Prediagram& X) {
  const Poset& P = X.shape;
  require(check(X, CheckLevel::typed).ok, Errc::ill_formed, "prediagram is not well typed");
  auto cr = crown_of(P, CrownMode::ind);
  auto rep = connectedness_check(cr.poset);
  require(rep.one_connected, Errc::not_one_connected,
          "ind-crown is not componentwise 1-connected");
  require(check(X, CheckLevel::strictly_commutative).ok, Errc::precondition_violated,
          "diagram is not strictly commutative");
  require(check(X, CheckLevel::purely_monic).ok, Errc::not_purely_monic,
          "diagram is not purely monic");

  // restriction along the crown's own (non-full) order
  Prediagram XC;
  XC.shape = cr.poset;
  XC.ring_params = X.ring();
  for (int i = 0; i < cr.poset.size(); ++i)
    XC.objects.push_back(X.object(cr.embedding.map[static_cast<std::size_t>(i)]));
  for (auto [r, s] : cr.poset.strict_pairs())
    XC.set_arrow(r, s,
                 X.arrow(cr.embedding.map[static_cast<std::size_t>(r)],
                         cr.embedding.map[static_cast<std::size_t>(s)]));
  Cocone inner = crown_colimit(XC);

  std::vector<int> crown_index(static_cast<std::size_t>(P.size()), -1);
  for (int i = 0; i < cr.poset.size(); ++i)
    crown_index[static_cast<std::size_t>(cr.embedding.map[static_cast<std::size_t>(i)])] = i;

  auto maxima = extrema(P, ExtremaMode::max);
  std::vector<ModMorphism> legs;
  legs.reserve(static_cast<std::size_t>(P.size()));
  for (int p = 0; p < P.size(); ++p) {
    std::optional<ModMorphism> leg;
    for (int c : maxima) {
      if (!P.leq(p, c)) continue;
      int ci = crown_index[static_cast<std::size_t>(c)];
      sentinel(ci >= 0, Errc::internal_check_failed, "maximal element missing from the crown");
      ModMorphism cand = compose(X.arrow_or_id(p, c), inner.leg(ci));
      if (!leg)
        leg = std::move(cand);
      else
        sentinel(*leg == cand, Errc::ill_defined_transition,
                 "transition depends on the chosen maximal element");
    }
    sentinel(leg.has_value(), Errc::internal_check_failed, "element below no maximal element");
    if (crown_index[static_cast<std::size_t>(p)] >= 0)
      sentinel(*leg == inner.leg(crown_index[static_cast<std::size_t>(p)]),
               Errc::ill_defined_transition, "crown leg disagrees with the extension");
    legs.push_back(std::move(*leg));
  }

  Cocone out{X, inner.apex, std::move(legs)};
  detail::verify_cocone(out, Errc::purity_violation);
  return out;
}

// Independent oracle: the colimit as the cokernel of the difference map over
// the Hasse covers. Needs only strict commutativity.
inline Cocone brute_force_colimit(const Prediagram& X) {
  const Poset& P = X.shape;
  require(check(X, CheckLevel::typed).ok, Errc::ill_formed, "prediagram is not well typed");
  require(check(X, CheckLevel::strictly_commutative).ok, Errc::precondition_violated,
          "diagram is not strictly commutative");
  const RingParams& ring = X.ring();

  ModObject big = zero_object(ring);
  std::vector<int> offset(static_cast<std::size_t>(P.size()), 0);
  for (int p = 0; p < P.size(); ++p) {
    offset[static_cast<std::size_t>(p)] = big.rank();
    big = direct_sum(big, X.object(p));
  }
  auto covers = P.cover_pairs();
  ModObject dom = zero_object(ring);
  for (auto [a, b] : covers) {
    (void)b;
    dom = direct_sum(dom, X.object(a));
  }
  Matrix m(dom.rank(), big.rank());
  int row = 0;
  for (auto [a, b] : covers) {
    const ModMorphism& f = X.arrow(a, b);
    for (int i = 0; i < X.object(a).rank(); ++i) {
      m.at(row + i, offset[static_cast<std::size_t>(a)] + i) = -1;
      for (int j = 0; j < X.object(b).rank(); ++j)
        m.at(row + i, offset[static_cast<std::size_t>(b)] + j) = f.matrix().at(i, j);
    }
    row += X.object(a).rank();
  }
  auto ck = cokernel(ModMorphism(dom, big, std::move(m)));

  std::vector<ModMorphism> legs;
  for (int p = 0; p < P.size(); ++p) {
    Matrix inj(X.object(p).rank(), big.rank());
    for (int i = 0; i < inj.rows; ++i) inj.at(i, offset[static_cast<std::size_t>(p)] + i) = 1;
    legs.push_back(compose(ModMorphism(X.object(p), big, std::move(inj)), ck.projection));
  }
  Cocone out{X, ck.object, std::move(legs)};
  for (auto [a, b] : P.strict_pairs())
    sentinel(compose(X.arrow(a, b), out.leg(b)) == out.leg(a), Errc::internal_check_failed,
             "cocone legs do not commute with the diagram");
  return out;
}

// Unique mediating morphism from a colimit cocone to a test cocone.
inline ModMorphism induced_map(const Cocone& colim, const Cocone& test) {
  require(colim.diagram == test.diagram, Errc::shape_mismatch,
          "cocones over different diagrams");
  const RingParams& ring = colim.diagram.ring();
  ModObject dom = zero_object(ring);
  for (int p = 0; p < colim.diagram.shape.size(); ++p)
    dom = direct_sum(dom, colim.diagram.object(p));
  Matrix stacked_legs(dom.rank(), colim.apex.rank());
  Matrix stacked_tests(dom.rank(), test.apex.rank());
  int row = 0;
  for (int p = 0; p < colim.diagram.shape.size(); ++p) {
    for (int i = 0; i < colim.diagram.object(p).rank(); ++i) {
      for (int j = 0; j < colim.apex.rank(); ++j)
        stacked_legs.at(row + i, j) = colim.leg(p).matrix().at(i, j);
      for (int j = 0; j < test.apex.rank(); ++j)
        stacked_tests.at(row + i, j) = test.leg(p).matrix().at(i, j);
    }
    row += colim.diagram.object(p).rank();
  }
  auto sol = solve_full(ModMorphism(dom, colim.apex, std::move(stacked_legs)),
                        ModMorphism(dom, test.apex, std::move(stacked_tests)),
                        SolveSide::through_source);
  require(sol.has_value(), Errc::no_solution, "test family is not a cocone");
  sentinel(sol->unique, Errc::internal_check_failed, "induced morphism is not unique");
  return sol->solution;
}

}  // namespace flatlift
