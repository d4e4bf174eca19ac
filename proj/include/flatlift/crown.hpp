#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flatlift/error.hpp"
#include "flatlift/exact_linalg.hpp"
#include "flatlift/poset.hpp"

namespace flatlift {

// True iff there is no chain c < c' < c'' in P, i.e. P = min(P) u max(P).
inline bool is_crown(const Poset& P) {
  for (int b = 0; b < P.size(); ++b) {
    bool has_lower = false, has_upper = false;
    for (int a = 0; a < P.size(); ++a) {
      if (P.lt(a, b)) has_lower = true;
      if (P.lt(b, a)) has_upper = true;
    }
    if (has_lower && has_upper) return false;
  }
  return true;
}

// The map sending each non-identity relation (c -> d) to d - c, as an integer
// matrix: one row per strict relation (source-major input order), one column
// per element.
struct BoundaryMatrix {
  Poset crown;
  std::vector<std::pair<int, int>> rows;
  std::vector<std::vector<std::int64_t>> entries;
};

inline BoundaryMatrix boundary_matrix(const Poset& C) {
  require(is_crown(C), Errc::not_a_crown, "boundary matrix needs a crown");
  BoundaryMatrix B;
  B.crown = C;
  B.rows = C.strict_pairs();
  B.entries.assign(B.rows.size(),
                   std::vector<std::int64_t>(static_cast<std::size_t>(C.size()), 0));
  for (std::size_t r = 0; r < B.rows.size(); ++r) {
    B.entries[r][static_cast<std::size_t>(B.rows[r].first)] = -1;
    B.entries[r][static_cast<std::size_t>(B.rows[r].second)] = +1;
  }
  return B;
}

enum class PeelCase { case_i, case_ii, isolated };

struct PeelStep {
  int element;
  PeelCase tag;
};

struct CrownReport {
  bool is_crown = false;
  bool one_connected = false;
  int kernel_dim = 0;
  std::optional<std::vector<PeelStep>> peel_sequence;
  // A nonzero integer vector w (content 1) with w * boundary = 0, indexed by
  // the rows of boundary_matrix(C).
  std::optional<std::vector<std::int64_t>> cycle_witness;
};

namespace detail {

// Peeling: repeatedly remove a maximal element with at most one strict lower
// neighbour, or a minimal one with at most one strict upper neighbour; scan in
// input order, preferring the maximal case. Succeeds iff the crown empties.
inline std::optional<std::vector<PeelStep>> peel_crown(const Poset& C) {
  const int n = C.size();
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(n), 1);
  std::vector<PeelStep> steps;
  int remaining = n;
  while (remaining > 0) {
    int chosen = -1;
    PeelCase tag = PeelCase::isolated;
    for (int e = 0; e < n && chosen < 0; ++e) {
      if (!alive[static_cast<std::size_t>(e)]) continue;
      int below = 0, above = 0;
      for (int d = 0; d < n; ++d) {
        if (!alive[static_cast<std::size_t>(d)]) continue;
        if (C.lt(d, e)) ++below;
        if (C.lt(e, d)) ++above;
      }
      if (above == 0 && below <= 1) {
        chosen = e;
        tag = below == 0 ? PeelCase::isolated : PeelCase::case_i;
      } else if (below == 0 && above <= 1) {
        chosen = e;
        tag = PeelCase::case_ii;
      }
    }
    if (chosen < 0) return std::nullopt;
    alive[static_cast<std::size_t>(chosen)] = 0;
    --remaining;
    steps.push_back(PeelStep{chosen, tag});
  }
  return steps;
}

// Forest test on the underlying undirected graph, via union-find.
inline bool is_forest(const Poset& C) {
  std::vector<int> parent(static_cast<std::size_t>(C.size()));
  for (int i = 0; i < C.size(); ++i) parent[static_cast<std::size_t>(i)] = i;
  auto root = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (auto [a, b] : C.strict_pairs()) {
    int ra = root(a), rb = root(b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
  }
  return true;
}

}  // namespace detail

// Runs the exact rank test, the recursive peeling and the forest test, and
// requires their verdicts to agree.
inline CrownReport connectedness_check(const Poset& C) {
  require(is_crown(C), Errc::not_a_crown, "connectedness check needs a crown");

  BoundaryMatrix B = boundary_matrix(C);
  detail::RowReduction red =
      detail::integer_row_reduce(B.entries, static_cast<int>(B.rows.size()), C.size());
  const int kernel_dim = static_cast<int>(B.rows.size()) - red.rank;
  const bool by_rank = kernel_dim == 0;

  auto peel = detail::peel_crown(C);
  const bool by_peel = peel.has_value();
  const bool by_forest = detail::is_forest(C);

  sentinel(by_rank == by_peel && by_peel == by_forest, Errc::method_disagreement,
           "rank/peeling/forest verdicts differ");

  CrownReport rep;
  rep.is_crown = true;
  rep.one_connected = by_rank;
  rep.kernel_dim = kernel_dim;
  if (by_rank) {
    rep.peel_sequence = std::move(peel);
  } else {
    sentinel(!red.left_kernel.empty(), Errc::method_disagreement, "missing kernel witness");
    rep.cycle_witness = std::move(red.left_kernel.front());
  }
  return rep;
}

}  // namespace flatlift
