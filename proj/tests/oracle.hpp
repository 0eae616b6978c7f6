#pragma once

// Independent checks used as test oracles. Written with plain containers,
// no bit tricks and no code shared with the library's verifiers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "kss/design.hpp"

namespace oracle {

using kss::Triple;

inline std::set<std::uint32_t> points_of(const Triple& t) { return {t.a, t.b, t.c}; }

inline bool disjoint(const Triple& x, const Triple& y) {
  for (auto p : points_of(x)) {
    if (points_of(y).count(p)) return false;
  }
  return true;
}

// Every pair at most once.
inline bool partial_sts(std::uint64_t v, const std::vector<Triple>& ts) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> cover;
  for (const Triple& t : ts) {
    const std::uint32_t p[3] = {t.a, t.b, t.c};
    for (int i = 0; i < 3; ++i) {
      if (p[i] >= v) return false;
      for (int j = i + 1; j < 3; ++j) {
        if (++cover[{std::min(p[i], p[j]), std::max(p[i], p[j])}] > 1) return false;
      }
    }
  }
  return true;
}

// Every pair exactly once.
inline bool complete_sts(std::uint64_t v, const std::vector<Triple>& ts) {
  if (!partial_sts(v, ts)) return false;
  return ts.size() * 3 == v * (v - 1) / 2;
}

// A valid signal set with class size m: pairs at most once, each class
// m pairwise disjoint triples, classes use each triple index exactly once.
inline bool signal_set_ok(const kss::SignalSet& ss) {
  const auto& sys = ss.system();
  if (!partial_sts(sys.order(), sys.triples())) return false;
  std::vector<int> used(sys.size(), 0);
  for (const auto& cls : ss.classes()) {
    if (cls.size() != ss.class_size()) return false;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (cls[i] >= sys.size()) return false;
      ++used[cls[i]];
      for (std::size_t j = 0; j < i; ++j) {
        if (!disjoint(sys[cls[i]], sys[cls[j]])) return false;
      }
    }
  }
  return std::all_of(used.begin(), used.end(), [](int u) { return u == 1; });
}

inline bool kss_ok(const kss::SignalSet& ss) {
  if (!signal_set_ok(ss) || ss.class_size() == 0) return false;
  const std::uint64_t v = ss.order();
  return ss.class_count() == v * (v - 1) / 6 / ss.class_size();
}

// Largest set of pairwise disjoint triples, by plain recursion.
inline std::size_t max_disjoint(const std::vector<Triple>& ts, std::size_t from = 0,
                                std::vector<Triple> chosen = {}) {
  std::size_t best = chosen.size();
  for (std::size_t i = from; i < ts.size(); ++i) {
    bool ok = true;
    for (const Triple& c : chosen) ok = ok && disjoint(c, ts[i]);
    if (!ok) continue;
    chosen.push_back(ts[i]);
    best = std::max(best, max_disjoint(ts, i + 1, chosen));
    chosen.pop_back();
  }
  return best;
}

namespace detail {

// Can `rest` be cut into classes of m pairwise disjoint triples?
inline bool partition(std::vector<Triple> rest, std::size_t m) {
  if (rest.empty()) return true;
  const Triple first = rest.front();
  rest.erase(rest.begin());
  // choose m-1 partners for `first` among rest
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> bool {
    if (pick.size() == m - 1) {
      std::vector<Triple> left;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (std::find(pick.begin(), pick.end(), i) == pick.end()) left.push_back(rest[i]);
      }
      return partition(left, m);
    }
    for (std::size_t i = from; i < rest.size(); ++i) {
      bool ok = disjoint(first, rest[i]);
      for (std::size_t j : pick) ok = ok && disjoint(rest[j], rest[i]);
      if (!ok) continue;
      pick.push_back(i);
      if (self(self, i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace detail

// Whether the triples of `ts` minus some b mod m of them split into
// floor(b/m) classes of m disjoint triples. Exponential; tiny inputs only.
inline bool kss_exists_over(const std::vector<Triple>& ts, std::size_t m) {
  const std::size_t leftover = ts.size() % m;
  std::vector<std::size_t> drop;
  auto rec = [&](auto&& self, std::size_t from) -> bool {
    if (drop.size() == leftover) {
      std::vector<Triple> keep;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) keep.push_back(ts[i]);
      }
      return detail::partition(keep, m);
    }
    for (std::size_t i = from; i < ts.size(); ++i) {
      drop.push_back(i);
      if (self(self, i + 1)) return true;
      drop.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

// Independent mu(v).
inline std::uint64_t mu(std::uint64_t v) {
  if (v % 6 == 3) return v / 3;
  return v == 7 ? 1 : (v - 1) / 3;
}

}  // namespace oracle
