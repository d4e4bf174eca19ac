#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlift/modcat.hpp"
#include "flatlift/poset.hpp"

namespace flatlift {

// An assignment of modules to poset elements and morphisms to all strict
// relations (not only covers: non-cover arrows carry independent data).
struct Prediagram {
  Poset shape;
  RingParams ring_params;
  std::vector<ModObject> objects;
  std::map<std::pair<int, int>, ModMorphism> arrows;

  const RingParams& ring() const { return ring_params; }

  const ModObject& object(int a) const { return objects[static_cast<std::size_t>(a)]; }

  const ModMorphism& arrow(int a, int b) const {
    auto it = arrows.find({a, b});
    require(it != arrows.end(), Errc::ill_formed,
            "missing arrow " + shape.name(a) + " -> " + shape.name(b));
    return it->second;
  }

  ModMorphism arrow_or_id(int a, int b) const {
    if (a == b) return identity_morphism(object(a));
    return arrow(a, b);
  }

  void set_arrow(int a, int b, ModMorphism f) {
    require(shape.lt(a, b), Errc::ill_formed, "arrow must follow a strict relation");
    arrows.insert_or_assign({a, b}, std::move(f));
  }

  bool operator==(const Prediagram&) const = default;
};

enum class CheckLevel { typed, stably_commutative, strictly_commutative, purely_monic };

struct CheckFailure {
  int a = -1, b = -1, c = -1;  // triple for commutativity, (a,b) for arrows
  std::string what;
  std::optional<ModMorphism> defect;
};

struct CheckReport {
  CheckLevel level;
  bool ok = true;
  std::vector<CheckFailure> failures;
};

inline CheckReport check(const Prediagram& X, CheckLevel level) {
  CheckReport rep;
  rep.level = level;
  const Poset& P = X.shape;
  auto fail = [&](CheckFailure f) {
    rep.ok = false;
    rep.failures.push_back(std::move(f));
  };

  if (level == CheckLevel::typed) {
    if (static_cast<int>(X.objects.size()) != P.size()) {
      fail({-1, -1, -1, "object count does not match the shape", std::nullopt});
      return rep;
    }
    for (int a = 0; a < P.size(); ++a)
      if (!(X.object(a).ring == X.ring_params))
        fail({a, -1, -1, "object ring differs from the diagram ring", std::nullopt});
    for (auto [a, b] : P.strict_pairs()) {
      auto it = X.arrows.find({a, b});
      if (it == X.arrows.end()) {
        fail({a, b, -1, "missing arrow", std::nullopt});
        continue;
      }
      if (!(it->second.source() == X.object(a) && it->second.target() == X.object(b)))
        fail({a, b, -1, "arrow endpoints do not match the objects", std::nullopt});
    }
    for (const auto& [key, f] : X.arrows)
      if (!P.lt(key.first, key.second))
        fail({key.first, key.second, -1, "arrow without a strict relation", std::nullopt});
    return rep;
  }

  if (level == CheckLevel::purely_monic) {
    for (auto [a, b] : P.strict_pairs())
      if (!is_mono(X.arrow(a, b)))
        fail({a, b, -1, "arrow is not a pure monomorphism", X.arrow(a, b)});
    return rep;
  }

  for (int a = 0; a < P.size(); ++a)
    for (int b = 0; b < P.size(); ++b) {
      if (!P.lt(a, b)) continue;
      for (int c = 0; c < P.size(); ++c) {
        if (!P.lt(b, c)) continue;
        ModMorphism defect = sub(compose(X.arrow(a, b), X.arrow(b, c)), X.arrow(a, c));
        if (level == CheckLevel::strictly_commutative) {
          if (!defect.is_zero())
            fail({a, b, c, "composite differs from the direct arrow", std::move(defect)});
        } else {
          if (!is_stably_zero(defect))
            fail({a, b, c, "composition defect is not stably zero", std::move(defect)});
        }
      }
    }
  return rep;
}

// Morphism of prediagrams: components source_a -> target_a with
// f_a xi_{a,b} = xi'_{a,b} f_b on the nose.
struct DiagramMorphism {
  Prediagram source;
  Prediagram target;
  std::vector<ModMorphism> components;

  const ModMorphism& at(int a) const { return components[static_cast<std::size_t>(a)]; }
};

inline bool is_strictly_natural(const DiagramMorphism& f) {
  const Poset& P = f.source.shape;
  for (auto [a, b] : P.strict_pairs()) {
    if (!(compose(f.at(a), f.target.arrow(a, b)) == compose(f.source.arrow(a, b), f.at(b))))
      return false;
  }
  return true;
}

// A homotopism is a strictly natural morphism whose components are all stable
// isomorphisms.
inline bool verify_homotopism(const DiagramMorphism& f) {
  require(f.source.shape == f.target.shape, Errc::shape_mismatch, "shapes differ");
  require(is_strictly_natural(f), Errc::ill_formed, "morphism is not strictly natural");
  for (const auto& c : f.components)
    if (!stable_iso_witness(c)) return false;
  return true;
}

// A pointwise stable isomorphism whose naturality squares commute up to
// stably zero defects.
struct StableIsoFamily {
  Prediagram source;
  Prediagram target;
  std::vector<ModMorphism> components;

  const ModMorphism& at(int a) const { return components[static_cast<std::size_t>(a)]; }
};

inline bool verify_stable_iso(const StableIsoFamily& F) {
  require(F.source.shape == F.target.shape, Errc::shape_mismatch, "shapes differ");
  for (const auto& c : F.components)
    if (!stable_iso_witness(c)) return false;
  for (auto [a, b] : F.source.shape.strict_pairs()) {
    ModMorphism defect =
        sub(compose(F.at(a), F.target.arrow(a, b)), compose(F.source.arrow(a, b), F.at(b)));
    if (!is_stably_zero(defect)) return false;
  }
  return true;
}

inline StableIsoFamily family_of(const DiagramMorphism& f) {
  return StableIsoFamily{f.source, f.target, f.components};
}

inline DiagramMorphism identity_diagram_morphism(const Prediagram& X) {
  DiagramMorphism f{X, X, {}};
  for (const auto& obj : X.objects) f.components.push_back(identity_morphism(obj));
  return f;
}

inline StableIsoFamily identity_family(const Prediagram& X) {
  return family_of(identity_diagram_morphism(X));
}

inline DiagramMorphism compose_morphisms(const DiagramMorphism& f, const DiagramMorphism& g) {
  require(f.target == g.source, Errc::shape_mismatch, "morphisms do not compose");
  DiagramMorphism out{f.source, g.target, {}};
  for (std::size_t a = 0; a < f.components.size(); ++a)
    out.components.push_back(compose(f.components[a], g.components[a]));
  return out;
}

inline StableIsoFamily compose_families(const StableIsoFamily& f, const StableIsoFamily& g) {
  require(f.target == g.source, Errc::shape_mismatch, "families do not compose");
  StableIsoFamily out{f.source, g.target, {}};
  for (std::size_t a = 0; a < f.components.size(); ++a)
    out.components.push_back(compose(f.components[a], g.components[a]));
  return out;
}

// Restriction to the full subposet on the given elements.
inline Prediagram restrict(const Prediagram& X, const std::vector<int>& keep) {
  auto sub = full_subposet(X.shape, keep);
  Prediagram out;
  out.shape = std::move(sub.poset);
  out.ring_params = X.ring_params;
  for (int i : keep) out.objects.push_back(X.object(i));
  for (int a = 0; a < out.shape.size(); ++a)
    for (int b = 0; b < out.shape.size(); ++b)
      if (out.shape.lt(a, b))
        out.arrows.emplace(std::pair{a, b},
                           X.arrow(keep[static_cast<std::size_t>(a)],
                                   keep[static_cast<std::size_t>(b)]));
  return out;
}

inline Prediagram restrict(const Prediagram& X, const std::vector<std::string>& keep) {
  std::vector<int> idx;
  idx.reserve(keep.size());
  for (const auto& n : keep) idx.push_back(X.shape.index_of(n));
  return restrict(X, idx);
}

}  // namespace flatlift
