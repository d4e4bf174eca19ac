#pragma once

#include <random>
#include <string>
#include <vector>

#include "flatlift/flatness.hpp"
#include "flatlift/lifting.hpp"

namespace flatlift::testgen {

inline Poset random_poset(std::mt19937_64& rng, int n, double density) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> covers;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) < density) covers.emplace_back(names[(std::size_t)i], names[(std::size_t)j]);
  return Poset::from_cover_relations(names, covers);
}

inline Poset random_ind_flat_poset(std::mt19937_64& rng, int max_n) {
  for (;;) {
    auto P = random_poset(rng, 1 + (int)(rng() % (std::uint64_t)max_n), 0.3);
    if (flatness_check(P).ind_flat) return P;
  }
}

inline Poset random_pro_flat_poset(std::mt19937_64& rng, int max_n) {
  for (;;) {
    auto P = random_poset(rng, 1 + (int)(rng() % (std::uint64_t)max_n), 0.3);
    if (flatness_check(P).pro_flat) return P;
  }
}

inline Poset random_quasitree(std::mt19937_64& rng, int max_n) {
  for (;;) {
    auto P = random_poset(rng, 1 + (int)(rng() % (std::uint64_t)max_n), 0.25);
    if (quasitree_check(P)) return P;
  }
}

inline Poset random_crown_connected_poset(std::mt19937_64& rng, int max_n) {
  for (;;) {
    auto P = random_poset(rng, 1 + (int)(rng() % (std::uint64_t)max_n), 0.3);
    if (connectedness_check(crown_of(P, CrownMode::ind).poset).one_connected) return P;
  }
}

// A random unit automorphism: permutation within equal exponents, unit
// diagonal, and unipotent well-typed noise.
inline ModMorphism random_automorphism(std::mt19937_64& rng, const ModObject& x) {
  const RingParams& ring = x.ring;
  const int n = x.rank();
  Matrix m(n, n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[(std::size_t)i] = i;
  for (int i = 0; i < n; ++i) {
    int j = i + (int)(rng() % (std::uint64_t)(n - i));
    if (x.exponents[(std::size_t)i] == x.exponents[(std::size_t)j])
      std::swap(perm[(std::size_t)i], perm[(std::size_t)j]);
  }
  for (int i = 0; i < n; ++i) {
    i64 unit = 1 + (i64)(rng() % (std::uint64_t)(ring.q - 1));
    while (unit % ring.p == 0) unit = 1 + (i64)(rng() % (std::uint64_t)(ring.q - 1));
    m.at(i, perm[(std::size_t)i]) = unit;
  }
  ModMorphism w(x, x, std::move(m));
  Matrix noise(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int need = std::max(0, x.exponents[(std::size_t)j] - x.exponents[(std::size_t)i]);
      noise.at(i, j) = ring.p * ring.pow(need) * (i64)(rng() % (std::uint64_t)ring.q);
    }
  return ModMorphism(
      x, x,
      detail::mat_mul(w.matrix(), add(identity_morphism(x), ModMorphism(x, x, noise)).matrix(),
                      ring.q));
}

// Purely monic strictly commutative diagram: monotone valuation profiles on a
// shared coordinate frame (canonical diagonal embeddings), conjugated by
// random unit automorphisms of the objects.
inline Prediagram random_monic_diagram(std::mt19937_64& rng, const Poset& shape,
                                       const RingParams& ring, int ambient_rank) {
  const int n = shape.size();
  std::vector<std::vector<int>> raw((std::size_t)n, std::vector<int>((std::size_t)ambient_rank));
  for (auto& row : raw)
    for (auto& v : row) v = (int)(rng() % (std::uint64_t)(ring.k + 1));
  std::vector<std::vector<int>> prof = raw;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (shape.leq(b, a))
        for (int t = 0; t < ambient_rank; ++t)
          prof[(std::size_t)a][(std::size_t)t] =
              std::max(prof[(std::size_t)a][(std::size_t)t], raw[(std::size_t)b][(std::size_t)t]);

  Prediagram X;
  X.shape = shape;
  X.ring_params = ring;
  std::vector<std::vector<int>> coords((std::size_t)n);
  for (int a = 0; a < n; ++a) {
    std::vector<int> exps;
    for (int t = 0; t < ambient_rank; ++t)
      if (prof[(std::size_t)a][(std::size_t)t] >= 1) {
        coords[(std::size_t)a].push_back(t);
        exps.push_back(prof[(std::size_t)a][(std::size_t)t]);
      }
    X.objects.push_back(make_object(ring, exps));
  }
  for (auto [a, b] : shape.strict_pairs()) {
    Matrix m((int)coords[(std::size_t)a].size(), (int)coords[(std::size_t)b].size());
    for (std::size_t i = 0; i < coords[(std::size_t)a].size(); ++i)
      for (std::size_t j = 0; j < coords[(std::size_t)b].size(); ++j)
        if (coords[(std::size_t)a][i] == coords[(std::size_t)b][j])
          m.at((int)i, (int)j) =
              ring.pow(prof[(std::size_t)b][(std::size_t)coords[(std::size_t)b][j]] -
                       prof[(std::size_t)a][(std::size_t)coords[(std::size_t)a][i]]);
    X.set_arrow(a, b, ModMorphism(X.object(a), X.object(b), std::move(m)));
  }
  std::vector<ModMorphism> w, winv;
  for (int a = 0; a < n; ++a) {
    w.push_back(random_automorphism(rng, X.object(a)));
    auto inv = solve(w.back(), identity_morphism(X.object(a)), SolveSide::through_source);
    sentinel(inv.has_value(), Errc::internal_check_failed, "automorphism not invertible");
    winv.push_back(*inv);
  }
  for (auto& [pair, f] : X.arrows)
    f = compose(winv[(std::size_t)pair.first], compose(f, w[(std::size_t)pair.second]));
  return X;
}

// Stably-zero noise on the arrows turns a strict diagram into a genuinely
// non-strict but still stably commutative prediagram.
inline Prediagram perturb_stably(std::mt19937_64& rng, const Prediagram& X, double rate) {
  Prediagram out = X;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (auto& [pair, f] : out.arrows) {
    if (coin(rng) >= rate) continue;
    auto be = bijective_embedding(f.source());
    Matrix noise(be.bijective.rank(), f.target().rank());
    for (int i = 0; i < noise.rows; ++i)
      for (int j = 0; j < noise.cols; ++j)
        noise.at(i, j) = (i64)(rng() % (std::uint64_t)X.ring().q);
    f = add(f, compose(be.embedding,
                       ModMorphism(be.bijective, f.target(), std::move(noise))));
  }
  return out;
}

inline Prediagram random_stably_commutative_prediagram(std::mt19937_64& rng, const Poset& shape,
                                                       const RingParams& ring, int ambient_rank,
                                                       double noise_rate = 0.7) {
  return perturb_stably(rng, random_monic_diagram(rng, shape, ring, ambient_rank), noise_rate);
}

struct MorphismInstance {
  Prediagram source;               // purely monic strict
  Prediagram target;               // purely monic strict
  std::vector<ModMorphism> fhat;   // stably natural representatives
};

// Target is source (+) extra; representatives are the inclusion perturbed by
// pointwise stably zero noise, hence stably natural by construction.
inline MorphismInstance random_morphism_instance(std::mt19937_64& rng, const Poset& shape,
                                                 const RingParams& ring, int ambient_rank) {
  MorphismInstance inst;
  inst.source = random_monic_diagram(rng, shape, ring, ambient_rank);
  Prediagram extra = random_monic_diagram(rng, shape, ring, ambient_rank);
  inst.target.shape = shape;
  inst.target.ring_params = ring;
  for (int a = 0; a < shape.size(); ++a)
    inst.target.objects.push_back(direct_sum(inst.source.object(a), extra.object(a)));
  for (auto [a, b] : shape.strict_pairs())
    inst.target.set_arrow(a, b, direct_sum(inst.source.arrow(a, b), extra.arrow(a, b)));
  for (int a = 0; a < shape.size(); ++a) {
    std::vector<ModObject> parts = {inst.source.object(a), extra.object(a)};
    ModMorphism f = sum_injection(parts, 0);
    auto be = bijective_embedding(inst.source.object(a));
    Matrix noise(be.bijective.rank(), inst.target.object(a).rank());
    for (auto& v : noise.a) v = (i64)(rng() % (std::uint64_t)ring.q);
    f = add(f, compose(be.embedding,
                       ModMorphism(be.bijective, inst.target.object(a), std::move(noise))));
    inst.fhat.push_back(std::move(f));
  }
  return inst;
}

}  // namespace flatlift::testgen
