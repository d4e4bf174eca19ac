#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flatlift/error.hpp"

namespace flatlift {

enum class ConeMode { down, strict_down, up, strict_up };
enum class ExtremaMode { max, min };
enum class CrownMode { ind, pro };

// A finite poset: element names plus the closed (reflexive-transitive) order
// matrix. Immutable after construction; element iteration order is the input
// order and every "choose an element" step downstream uses first-in-input-order.
class Poset {
 public:
  Poset() = default;

  static Poset from_cover_relations(
      const std::vector<std::string>& names,
      const std::vector<std::pair<std::string, std::string>>& covers) {
    Poset P;
    P.names_ = names;
    const int n = static_cast<int>(names.size());
    {
      std::unordered_map<std::string_view, int> seen;
      for (int i = 0; i < n; ++i)
        require(seen.emplace(P.names_[i], i).second, Errc::duplicate_name, P.names_[i]);
    }
    P.leq_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) P.leq_[static_cast<std::size_t>(i) * n + i] = 1;
    for (const auto& [a, b] : covers) {
      int i = P.index_of(a);
      int j = P.index_of(b);
      P.leq_[static_cast<std::size_t>(i) * n + j] = 1;
    }
    // Warshall closure.
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        if (P.leq_[static_cast<std::size_t>(i) * n + m])
          for (int j = 0; j < n; ++j)
            if (P.leq_[static_cast<std::size_t>(m) * n + j])
              P.leq_[static_cast<std::size_t>(i) * n + j] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        require(!(P.leq(i, j) && P.leq(j, i)), Errc::cycle_detected,
                P.names_[i] + " and " + P.names_[j] + " are in a cycle");
    return P;
  }

  // The matrix must already be reflexive, antisymmetric and transitive.
  static Poset from_leq(std::vector<std::string> names, std::vector<std::uint8_t> leq) {
    Poset P;
    P.names_ = std::move(names);
    P.leq_ = std::move(leq);
    const int n = P.size();
    require(P.leq_.size() == static_cast<std::size_t>(n) * n, Errc::bad_parameter,
            "order matrix size mismatch");
    {
      std::unordered_map<std::string_view, int> seen;
      for (int i = 0; i < n; ++i)
        require(seen.emplace(P.names_[i], i).second, Errc::duplicate_name, P.names_[i]);
    }
    for (int i = 0; i < n; ++i) {
      require(P.leq(i, i), Errc::bad_parameter, "order matrix not reflexive");
      for (int j = 0; j < n; ++j) {
        if (i != j)
          require(!(P.leq(i, j) && P.leq(j, i)), Errc::bad_parameter,
                  "order matrix not antisymmetric");
        if (P.leq(i, j))
          for (int m = 0; m < n; ++m)
            if (P.leq(j, m))
              require(P.leq(i, m), Errc::bad_parameter, "order matrix not transitive");
      }
    }
    return P;
  }

  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }
  const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<int> find(std::string_view n) const {
    for (int i = 0; i < size(); ++i)
      if (names_[static_cast<std::size_t>(i)] == n) return i;
    return std::nullopt;
  }

  int index_of(std::string_view n) const {
    auto i = find(n);
    require(i.has_value(), Errc::unknown_name, std::string(n));
    return *i;
  }

  bool leq(int i, int j) const {
    return leq_[static_cast<std::size_t>(i) * names_.size() + static_cast<std::size_t>(j)] != 0;
  }
  bool lt(int i, int j) const { return i != j && leq(i, j); }

  // All strict relations, source-major in input order.
  std::vector<std::pair<int, int>> strict_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (lt(i, j)) out.emplace_back(i, j);
    return out;
  }

  // Hasse diagram: strict relations with nothing in between.
  std::vector<std::pair<int, int>> cover_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        if (!lt(i, j)) continue;
        bool covered = true;
        for (int m = 0; m < size() && covered; ++m)
          if (lt(i, m) && lt(m, j)) covered = false;
        if (covered) out.emplace_back(i, j);
      }
    return out;
  }

  bool operator==(const Poset&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::uint8_t> leq_;
};

// An injective order-preserving map between posets; `full` additionally means
// the map reflects the order.
struct SubposetEmbedding {
  Poset source;
  Poset target;
  std::vector<int> map;  // source index -> target index
  bool full = false;

  void validate() const {
    require(map.size() == static_cast<std::size_t>(source.size()), Errc::bad_parameter,
            "embedding map size mismatch");
    std::vector<std::uint8_t> used(static_cast<std::size_t>(target.size()), 0);
    for (int i = 0; i < source.size(); ++i) {
      int t = map[static_cast<std::size_t>(i)];
      require(t >= 0 && t < target.size(), Errc::bad_parameter, "embedding image out of range");
      require(!used[static_cast<std::size_t>(t)], Errc::bad_parameter, "embedding not injective");
      used[static_cast<std::size_t>(t)] = 1;
    }
    for (int i = 0; i < source.size(); ++i)
      for (int j = 0; j < source.size(); ++j) {
        if (source.leq(i, j))
          require(target.leq(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]),
                  Errc::bad_parameter, "embedding not order-preserving");
        else if (full)
          require(!target.leq(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]),
                  Errc::bad_parameter, "embedding not full");
      }
  }
};

struct ConeResult {
  Poset poset;
  SubposetEmbedding embedding;
};

namespace detail {

inline ConeResult subposet_on(const Poset& P, const std::vector<int>& keep, bool full) {
  const int m = static_cast<int>(keep.size());
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(m));
  for (int i : keep) names.push_back(P.name(i));
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(m) * m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      leq[static_cast<std::size_t>(a) * m + b] =
          P.leq(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]) ? 1 : 0;
  ConeResult r;
  r.poset = Poset::from_leq(std::move(names), std::move(leq));
  r.embedding = SubposetEmbedding{r.poset, P, keep, full};
  return r;
}

}  // namespace detail

// Full subposet on {q : q <= p} / {q : q < p} / {q : q >= p} / {q : q > p}.
inline ConeResult cone(const Poset& P, int p, ConeMode mode) {
  require(p >= 0 && p < P.size(), Errc::unknown_name, "cone element index out of range");
  std::vector<int> keep;
  for (int q = 0; q < P.size(); ++q) {
    bool in = false;
    switch (mode) {
      case ConeMode::down: in = P.leq(q, p); break;
      case ConeMode::strict_down: in = P.lt(q, p); break;
      case ConeMode::up: in = P.leq(p, q); break;
      case ConeMode::strict_up: in = P.lt(p, q); break;
    }
    if (in) keep.push_back(q);
  }
  return detail::subposet_on(P, keep, /*full=*/true);
}

inline ConeResult cone(const Poset& P, std::string_view p, ConeMode mode) {
  return cone(P, P.index_of(p), mode);
}

inline std::vector<int> extrema(const Poset& P, ExtremaMode mode) {
  std::vector<int> out;
  for (int q = 0; q < P.size(); ++q) {
    bool ext = true;
    for (int r = 0; r < P.size() && ext; ++r) {
      if (mode == ExtremaMode::max ? P.lt(q, r) : P.lt(r, q)) ext = false;
    }
    if (ext) out.push_back(q);
  }
  return out;
}

// The ind-crown (resp. pro-crown) of P: objects are the maxima of pairwise
// meets of maxima (resp. minima of pairwise joins of minima); the order keeps
// p < q only when q is maximal (resp. p minimal) in P. A subposet of P that is
// in general not full, hence the embedding carries full = false.
inline ConeResult crown_of(const Poset& P, CrownMode mode) {
  const int n = P.size();
  auto above = [&](int a, int b) { return mode == CrownMode::ind ? P.leq(a, b) : P.leq(b, a); };
  std::vector<int> ext = extrema(P, mode == CrownMode::ind ? ExtremaMode::max : ExtremaMode::min);
  std::vector<std::uint8_t> is_ext(static_cast<std::size_t>(n), 0);
  for (int e : ext) is_ext[static_cast<std::size_t>(e)] = 1;

  std::vector<std::uint8_t> in_crown(static_cast<std::size_t>(n), 0);
  for (int p : ext)
    for (int q : ext) {
      // maxima (ind) / minima (pro) of the intersection of the two cones
      for (int r = 0; r < n; ++r) {
        if (!(above(r, p) && above(r, q))) continue;
        bool extremal = true;
        for (int s = 0; s < n && extremal; ++s)
          if (s != r && above(s, p) && above(s, q) && above(r, s)) extremal = false;
        if (extremal) in_crown[static_cast<std::size_t>(r)] = 1;
      }
    }

  std::vector<int> keep;
  for (int r = 0; r < n; ++r)
    if (in_crown[static_cast<std::size_t>(r)]) keep.push_back(r);

  const int m = static_cast<int>(keep.size());
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(m));
  for (int r : keep) names.push_back(P.name(r));
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(m) * m, 0);
  for (int a = 0; a < m; ++a) leq[static_cast<std::size_t>(a) * m + a] = 1;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      int pa = keep[static_cast<std::size_t>(a)], pb = keep[static_cast<std::size_t>(b)];
      bool rel = mode == CrownMode::ind
                     ? (P.lt(pa, pb) && !is_ext[static_cast<std::size_t>(pa)] &&
                        is_ext[static_cast<std::size_t>(pb)])
                     : (P.lt(pa, pb) && is_ext[static_cast<std::size_t>(pa)] &&
                        !is_ext[static_cast<std::size_t>(pb)]);
      if (rel) leq[static_cast<std::size_t>(a) * m + b] = 1;
    }
  ConeResult r;
  r.poset = Poset::from_leq(std::move(names), std::move(leq));
  r.embedding = SubposetEmbedding{r.poset, P, keep, /*full=*/false};
  return r;
}

// The linearly ordered set [0, n].
inline Poset chain(int n) {
  require(n >= 0, Errc::bad_parameter, "chain length must be >= 0");
  std::vector<std::string> names;
  for (int i = 0; i <= n; ++i) names.push_back(std::to_string(i));
  const int m = n + 1;
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(m) * m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) leq[static_cast<std::size_t>(i) * m + j] = 1;
  return Poset::from_leq(std::move(names), std::move(leq));
}

// Componentwise order on pairs, named "(p,q)".
inline Poset product(const Poset& P, const Poset& Q) {
  const int np = P.size(), nq = Q.size(), n = np * nq;
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j) names.push_back("(" + P.name(i) + "," + Q.name(j) + ")");
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j)
      for (int a = 0; a < np; ++a)
        for (int b = 0; b < nq; ++b)
          leq[static_cast<std::size_t>(i * nq + j) * n + (a * nq + b)] =
              (P.leq(i, a) && Q.leq(j, b)) ? 1 : 0;
  return Poset::from_leq(std::move(names), std::move(leq));
}

namespace detail {

inline std::string subset_name(unsigned mask) {
  std::string s = "{";
  bool first = true;
  for (int b = 0; mask >> b; ++b)
    if (mask & (1u << b)) {
      if (!first) s += ",";
      s += std::to_string(b + 1);
      first = false;
    }
  return s + "}";
}

}  // namespace detail

// Subsets of [1, m] ordered by inclusion; listed by size, then numerically.
inline Poset powerset(int m) {
  require(m >= 0 && m <= 16, Errc::bad_parameter, "powerset size out of range");
  const int n = 1 << m;
  std::vector<unsigned> masks;
  masks.reserve(static_cast<std::size_t>(n));
  for (unsigned mask = 0; mask < static_cast<unsigned>(n); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (unsigned mask : masks) names.push_back(detail::subset_name(mask));
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      leq[static_cast<std::size_t>(i) * n + j] =
          ((masks[static_cast<std::size_t>(i)] & ~masks[static_cast<std::size_t>(j)]) == 0) ? 1
                                                                                            : 0;
  return Poset::from_leq(std::move(names), std::move(leq));
}

inline Poset opposite(const Poset& P) {
  const int n = P.size();
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      leq[static_cast<std::size_t>(i) * n + j] = P.leq(j, i) ? 1 : 0;
  return Poset::from_leq(P.names(), std::move(leq));
}

inline ConeResult full_subposet(const Poset& P, const std::vector<int>& keep) {
  for (int i : keep)
    require(i >= 0 && i < P.size(), Errc::unknown_name, "subposet index out of range");
  return detail::subposet_on(P, keep, /*full=*/true);
}

inline Poset full_subposet(const Poset& P, const std::vector<std::string>& keep) {
  std::vector<int> idx;
  idx.reserve(keep.size());
  for (const auto& n : keep) idx.push_back(P.index_of(n));
  return detail::subposet_on(P, idx, /*full=*/true).poset;
}

}  // namespace flatlift
