#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flatlift/crown.hpp"
#include "flatlift/poset.hpp"

namespace flatlift {

struct FlatnessFailure {
  int element;
  CrownMode direction;
  CrownReport report;
};

struct FlatnessReport {
  bool ind_flat = true;
  bool pro_flat = true;
  bool flat = true;
  std::vector<FlatnessFailure> failures;
};

// P is ind-flat when the ind-crown of every strict down cone is componentwise
// 1-connected; pro-flat dually via pro-crowns of strict up cones.
inline FlatnessReport flatness_check(const Poset& P) {
  FlatnessReport rep;
  for (int d = 0; d < P.size(); ++d) {
    auto ind = connectedness_check(
        crown_of(cone(P, d, ConeMode::strict_down).poset, CrownMode::ind).poset);
    if (!ind.one_connected) {
      rep.ind_flat = false;
      rep.failures.push_back(FlatnessFailure{d, CrownMode::ind, std::move(ind)});
    }
    auto pro = connectedness_check(
        crown_of(cone(P, d, ConeMode::strict_up).poset, CrownMode::pro).poset);
    if (!pro.one_connected) {
      rep.pro_flat = false;
      rep.failures.push_back(FlatnessFailure{d, CrownMode::pro, std::move(pro)});
    }
  }
  rep.flat = rep.ind_flat && rep.pro_flat;
  return rep;
}

// Quasitree: every open interval {x : a < x < b} is linearly ordered.
// Checked twice: directly, and via discreteness of the down cones' ind-crowns.
inline bool quasitree_check(const Poset& P) {
  bool by_intervals = true;
  for (int a = 0; a < P.size() && by_intervals; ++a)
    for (int b = 0; b < P.size() && by_intervals; ++b) {
      std::vector<int> interval;
      for (int x = 0; x < P.size(); ++x)
        if (P.lt(a, x) && P.lt(x, b)) interval.push_back(x);
      for (std::size_t i = 0; i < interval.size() && by_intervals; ++i)
        for (std::size_t j = i + 1; j < interval.size() && by_intervals; ++j)
          if (!P.leq(interval[i], interval[j]) && !P.leq(interval[j], interval[i]))
            by_intervals = false;
    }

  bool by_crowns = true;
  for (int a = 0; a < P.size() && by_crowns; ++a) {
    auto c = crown_of(cone(P, a, ConeMode::strict_down).poset, CrownMode::ind);
    if (!c.poset.strict_pairs().empty()) by_crowns = false;
  }

  sentinel(by_intervals == by_crowns, Errc::characterization_disagreement,
           "interval and crown quasitree tests differ");
  return by_intervals;
}

// The suspended n-crown: bottom s, top t, and an n-cycle v_i < u_i, v_i < u_{i-1}.
inline Poset suspended_crown(int n) {
  require(n >= 2, Errc::bad_parameter, "suspended crown needs n >= 2");
  std::vector<std::string> names;
  names.push_back("s");
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  for (int i = 0; i < n; ++i) names.push_back("u" + std::to_string(i));
  names.push_back("t");
  std::vector<std::pair<std::string, std::string>> covers;
  for (int i = 0; i < n; ++i) {
    std::string vi = "v" + std::to_string(i);
    covers.emplace_back(vi, "u" + std::to_string(i));
    covers.emplace_back(vi, "u" + std::to_string((i + n - 1) % n));
    covers.emplace_back("s", vi);
    covers.emplace_back("u" + std::to_string(i), "t");
  }
  return Poset::from_cover_relations(names, covers);
}

namespace detail {

struct EmbeddingSearch {
  const Poset& S;
  const Poset& P;
  std::vector<int> up_s, down_s, up_p, down_p;
  std::vector<int> map;
  std::vector<std::uint8_t> used;

  EmbeddingSearch(const Poset& S_, const Poset& P_) : S(S_), P(P_) {
    auto degrees = [](const Poset& Q, std::vector<int>& up, std::vector<int>& down) {
      up.assign((std::size_t)Q.size(), 0);
      down.assign((std::size_t)Q.size(), 0);
      for (int i = 0; i < Q.size(); ++i)
        for (int j = 0; j < Q.size(); ++j)
          if (Q.lt(i, j)) {
            ++up[(std::size_t)i];
            ++down[(std::size_t)j];
          }
    };
    degrees(S, up_s, down_s);
    degrees(P, up_p, down_p);
    map.assign((std::size_t)S.size(), -1);
    used.assign((std::size_t)P.size(), 0);
  }

  // fn is called with the completed map; returning true stops the search.
  bool run(int i, const std::function<bool(const std::vector<int>&)>& fn) {
    if (i == S.size()) return fn(map);
    for (int cand = 0; cand < P.size(); ++cand) {
      if (used[(std::size_t)cand]) continue;
      if (up_s[(std::size_t)i] > up_p[(std::size_t)cand] ||
          down_s[(std::size_t)i] > down_p[(std::size_t)cand])
        continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        if (S.leq(j, i) != P.leq(map[(std::size_t)j], cand)) ok = false;
        if (S.leq(i, j) != P.leq(cand, map[(std::size_t)j])) ok = false;
      }
      if (!ok) continue;
      map[(std::size_t)i] = cand;
      used[(std::size_t)cand] = 1;
      if (run(i + 1, fn)) return true;
      used[(std::size_t)cand] = 0;
      map[(std::size_t)i] = -1;
    }
    return false;
  }
};

}  // namespace detail

// Enumerates full embeddings of S into P in deterministic (input) order;
// fn returning true stops.
inline void for_each_full_embedding(const Poset& S, const Poset& P,
                                    const std::function<bool(const std::vector<int>&)>& fn) {
  detail::EmbeddingSearch search(S, P);
  search.run(0, fn);
}

// First full embedding of S into P in deterministic order, if any.
inline std::optional<SubposetEmbedding> find_full_embedding(const Poset& S, const Poset& P) {
  std::optional<SubposetEmbedding> out;
  for_each_full_embedding(S, P, [&](const std::vector<int>& map) {
    out = SubposetEmbedding{S, P, map, /*full=*/true};
    return true;
  });
  return out;
}

struct MitchellWitness {
  int n;
  SubposetEmbedding embedding;
  int condition;  // 1 or 2
};

struct MitchellReport {
  bool dimension_le_2 = true;
  std::optional<MitchellWitness> witness;
};

namespace detail {

// d mediates an embedded 2-crown when v0, v1 <= d <= u0, u1.
inline bool sc2_has_mediator(const Poset& P, const std::vector<int>& map) {
  // suspended_crown(2) layout: s, v0, v1, u0, u1, t
  int v0 = map[1], v1 = map[2], u0 = map[3], u1 = map[4];
  for (int d = 0; d < P.size(); ++d)
    if (P.leq(v0, d) && P.leq(v1, d) && P.leq(d, u0) && P.leq(d, u1)) return true;
  return false;
}

}  // namespace detail

// Mitchell's criterion: cohomological dimension <= 2 iff no suspended n-crown
// (n >= 3) embeds fully and no fully embedded 2-crown lacks a mediating element.
inline MitchellReport mitchell_check(const Poset& P) {
  MitchellReport rep;
  for (int n = 3; 2 * n + 2 <= P.size(); ++n) {
    auto emb = find_full_embedding(suspended_crown(n), P);
    if (emb) {
      rep.dimension_le_2 = false;
      rep.witness = MitchellWitness{n, std::move(*emb), 1};
      return rep;
    }
  }
  if (P.size() >= 6) {
    Poset sc2 = suspended_crown(2);
    std::optional<std::vector<int>> violating;
    for_each_full_embedding(sc2, P, [&](const std::vector<int>& map) {
      if (!detail::sc2_has_mediator(P, map)) {
        violating = map;
        return true;
      }
      return false;
    });
    if (violating) {
      rep.dimension_le_2 = false;
      rep.witness = MitchellWitness{2, SubposetEmbedding{sc2, P, *violating, true}, 2};
    }
  }
  return rep;
}

}  // namespace flatlift
