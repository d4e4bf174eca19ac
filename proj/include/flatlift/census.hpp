#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "flatlift/flatness.hpp"

namespace flatlift {

namespace detail {

// Lexicographically minimal row-major order matrix over all relabelings.
// Position 0 must minimize the first row, which forces an element of minimal
// up-set size; the remaining positions are searched exhaustively with early
// comparison cutoffs.
inline std::string minimal_matrix_code(const Poset& P) {
  const int n = P.size();
  std::string best(static_cast<std::size_t>(n) * n, '2');
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);

  std::vector<int> upsize(static_cast<std::size_t>(n), 0);
  int min_up = n + 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (P.lt(i, j)) ++upsize[static_cast<std::size_t>(i)];
    min_up = std::min(min_up, upsize[static_cast<std::size_t>(i)]);
  }

  auto leaf = [&]() {
    std::string code(static_cast<std::size_t>(n) * n, '0');
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::size_t idx = static_cast<std::size_t>(i) * n + j;
        char c = P.leq(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])
                     ? '1'
                     : '0';
        if (c > best[idx]) return;  // prefix already worse
        code[idx] = c;
        if (c < best[idx]) {
          // strictly better so far: fill the rest unconditionally
          for (std::size_t r = idx + 1; r < code.size(); ++r) {
            int ri = static_cast<int>(r) / n, rj = static_cast<int>(r) % n;
            code[r] = P.leq(perm[static_cast<std::size_t>(ri)],
                            perm[static_cast<std::size_t>(rj)])
                          ? '1'
                          : '0';
          }
          best = code;
          return;
        }
      }
    best = code;  // equal
  };

  std::function<void(int)> rec = [&](int depth) {
    if (depth == n) {
      leaf();
      return;
    }
    for (int cand = 0; cand < n; ++cand) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      if (depth == 0 && upsize[static_cast<std::size_t>(cand)] != min_up) continue;
      used[static_cast<std::size_t>(cand)] = 1;
      perm[static_cast<std::size_t>(depth)] = cand;
      rec(depth + 1);
      used[static_cast<std::size_t>(cand)] = 0;
    }
  };
  rec(0);
  return best;
}

inline Poset poset_from_code(int n, const std::string& code) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  for (std::size_t i = 0; i < leq.size(); ++i) leq[i] = code[i] == '1' ? 1 : 0;
  return Poset::from_leq(std::move(names), std::move(leq));
}

}  // namespace detail

inline std::string canonical_code(const Poset& P) { return detail::minimal_matrix_code(P); }

// All isomorphism classes of n-element posets, as canonical representatives
// sorted by code. Generation adds one maximal element at a time, with its
// strict down-set ranging over the ideals of the part built so far; the
// naturally labeled leaves are then canonicalized (in parallel) and deduped.
inline std::vector<Poset> enumerate_posets(int n, int jobs = 1) {
  require(n >= 0 && n <= 7, Errc::bad_parameter, "census size out of range");
  std::vector<std::vector<std::uint8_t>> leaves;
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);

  std::function<void(int)> rec = [&](int m) {
    if (m == n) {
      std::vector<std::uint8_t> sub(static_cast<std::size_t>(n) * n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          sub[static_cast<std::size_t>(i) * n + j] =
              i == j ? 1 : leq[static_cast<std::size_t>(i) * n + j];
      leaves.push_back(std::move(sub));
      return;
    }
    // down-closed subsets of the first m elements
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      bool closed = true;
      for (int i = 0; i < m && closed; ++i) {
        if (!(mask & (1u << i))) continue;
        for (int j = 0; j < m && closed; ++j)
          if (leq[static_cast<std::size_t>(j) * n + i] && !(mask & (1u << j))) closed = false;
      }
      if (!closed) continue;
      for (int i = 0; i < m; ++i)
        leq[static_cast<std::size_t>(i) * n + m] = (mask & (1u << i)) ? 1 : 0;
      rec(m + 1);
    }
    for (int i = 0; i < m; ++i) leq[static_cast<std::size_t>(i) * n + m] = 0;
  };
  rec(0);

  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<std::string> all_codes(leaves.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= leaves.size()) return;
      all_codes[i] = canonical_code(Poset::from_leq(names, leaves[i]));
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::unordered_set<std::string> seen;
  std::vector<std::string> codes;
  for (auto& c : all_codes)
    if (seen.insert(c).second) codes.push_back(std::move(c));
  std::sort(codes.begin(), codes.end());
  std::vector<Poset> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.push_back(detail::poset_from_code(n, c));
  return out;
}

inline std::uint64_t automorphism_count(const Poset& P) {
  const int n = P.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);
  std::uint64_t count = 0;
  std::function<void(int)> rec = [&](int depth) {
    if (depth == n) {
      ++count;
      return;
    }
    for (int cand = 0; cand < n; ++cand) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      bool ok = true;
      for (int i = 0; i < depth && ok; ++i) {
        if (P.leq(i, depth) != P.leq(perm[static_cast<std::size_t>(i)], cand)) ok = false;
        if (P.leq(depth, i) != P.leq(cand, perm[static_cast<std::size_t>(i)])) ok = false;
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(cand)] = 1;
      perm[static_cast<std::size_t>(depth)] = cand;
      rec(depth + 1);
      used[static_cast<std::size_t>(cand)] = 0;
    }
  };
  rec(0);
  return count;
}

// Independent oracle: the number of partial orders on n labeled points, by a
// depth-first scan over pairwise relations with transitivity enforced on every
// completed triangle.
inline std::uint64_t count_labeled_posets(int n) {
  require(n >= 0 && n <= 6, Errc::bad_parameter, "labeled count oracle limited to n <= 6");
  if (n <= 1) return 1;
  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
  // rel values: 0 incomparable, 1 first below second, 2 second below first
  std::vector<std::vector<int>> rel(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), 0));
  auto get = [&](int a, int b) {  // 1 iff a < b
    if (a < b) return rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == 1;
    return rel[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] == 2;
  };
  std::uint64_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == pairs.size()) {
      ++count;
      return;
    }
    auto [i, j] = pairs[t];
    for (int v = 0; v < 3; ++v) {
      rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      bool ok = true;
      for (int m = 0; m < i && ok; ++m) {
        // triangle {m, i, j}: all three pair relations are assigned by now
        int a = i, b = m, c = j;
        auto lt = [&](int x, int y) { return get(x, y); };
        if (lt(a, b) && lt(b, c) && !lt(a, c)) ok = false;
        if (lt(b, a) && lt(a, c) && !lt(b, c)) ok = false;
        if (lt(a, c) && lt(c, b) && !lt(a, b)) ok = false;
        if (lt(c, a) && lt(a, b) && !lt(c, b)) ok = false;
        if (lt(b, c) && lt(c, a) && !lt(b, a)) ok = false;
        if (lt(c, b) && lt(b, a) && !lt(c, a)) ok = false;
      }
      if (ok) rec(t + 1);
    }
    rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 0;
  };
  rec(0);
  return count;
}

struct CensusRecord {
  std::string code;
  int n = 0;
  bool crown = false;
  bool one_connected = false;  // meaningful when crown
  bool ind_flat = false;
  bool pro_flat = false;
  bool quasitree = false;
  bool mitchell_dim_le_2 = false;
  bool mitchell_readings_differ = false;  // some 2-crown copies mediated, some not
};

inline CensusRecord classify_poset(const Poset& P) {
  CensusRecord r;
  r.code = canonical_code(P);
  r.n = P.size();
  r.crown = is_crown(P);
  if (r.crown) r.one_connected = connectedness_check(P).one_connected;
  auto flat = flatness_check(P);
  r.ind_flat = flat.ind_flat;
  r.pro_flat = flat.pro_flat;
  r.quasitree = quasitree_check(P);
  r.mitchell_dim_le_2 = mitchell_check(P).dimension_le_2;
  if (P.size() >= 6) {
    bool some_mediated = false, some_unmediated = false;
    for_each_full_embedding(suspended_crown(2), P, [&](const std::vector<int>& map) {
      if (detail::sc2_has_mediator(P, map))
        some_mediated = true;
      else
        some_unmediated = true;
      return some_mediated && some_unmediated;
    });
    r.mitchell_readings_differ = some_mediated && some_unmediated;
  }
  return r;
}

struct CensusStats {
  int n = 0;
  std::uint64_t classes = 0;
  std::uint64_t crowns = 0;
  std::uint64_t one_connected_crowns = 0;
  std::uint64_t ind_flat = 0;
  std::uint64_t pro_flat = 0;
  std::uint64_t flat = 0;
  std::uint64_t quasitrees = 0;
  std::uint64_t quasitree_not_flat = 0;  // must stay zero
  std::uint64_t mitchell_dim_le_2 = 0;
  std::uint64_t mitchell_readings_differ = 0;
  std::uint64_t scan_candidates = 0;  // ind-flat but of Mitchell dimension > 2
};

struct CensusResult {
  std::vector<CensusStats> per_size;          // sizes 1..max_n
  std::vector<Poset> scan_candidates;         // emitted, never asserted
  std::vector<CensusRecord> records;
};

// Classifies every isomorphism class of size 1..max_n; classification fans
// out over worker threads.
inline CensusResult run_census(int max_n, int jobs = 1) {
  require(max_n >= 1 && max_n <= 7, Errc::bad_parameter, "census size out of range");
  CensusResult out;
  for (int n = 1; n <= max_n; ++n) {
    auto classes = enumerate_posets(n, jobs);
    std::vector<CensusRecord> records(classes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= classes.size()) return;
        records[i] = classify_poset(classes[i]);
      }
    };
    if (jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    CensusStats st;
    st.n = n;
    st.classes = classes.size();
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& r = records[i];
      if (r.crown) {
        ++st.crowns;
        if (r.one_connected) ++st.one_connected_crowns;
      }
      if (r.ind_flat) ++st.ind_flat;
      if (r.pro_flat) ++st.pro_flat;
      if (r.ind_flat && r.pro_flat) ++st.flat;
      if (r.quasitree) {
        ++st.quasitrees;
        if (!(r.ind_flat && r.pro_flat)) ++st.quasitree_not_flat;
      }
      if (r.mitchell_dim_le_2) ++st.mitchell_dim_le_2;
      if (r.mitchell_readings_differ) ++st.mitchell_readings_differ;
      if (r.ind_flat && !r.mitchell_dim_le_2) {
        ++st.scan_candidates;
        out.scan_candidates.push_back(classes[i]);
      }
      out.records.push_back(r);
    }
    out.per_size.push_back(st);
  }
  return out;
}

}  // namespace flatlift
