#pragma once

// Desk-scale construction of KSS(v,m) witnesses: exact backtracking, greedy
// class extraction, min-conflicts local search, windowed triple orderings,
// and a cyclic-orbit search for Kirkman triple systems.

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kss/design.hpp"
#include "kss/detail/bits.hpp"

namespace kss {

struct SearchParams {
  std::uint64_t seed = 1;
  std::uint64_t node_limit = 20'000'000;
  std::uint64_t restart_limit = 100;
  std::chrono::milliseconds time_limit{60'000};
};

enum class SearchStatus { found, exhausted, inconclusive };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

// Reproducibility record. `hash` covers everything except wall time.
struct Transcript {
  std::string method;
  std::uint64_t seed = 0;
  std::uint64_t nodes = 0;
  std::uint64_t restarts = 0;
  double wall_seconds = 0.0;
  std::uint64_t hash = 0;
};

inline std::string to_string(const Transcript& t) {
  return "method=" + t.method + " seed=" + std::to_string(t.seed) + " nodes=" + std::to_string(t.nodes) +
         " restarts=" + std::to_string(t.restarts) + " wall=" + std::to_string(t.wall_seconds) + "s" +
         " hash=" + std::to_string(t.hash);
}

struct DecomposeResult {
  SearchStatus status = SearchStatus::inconclusive;
  std::optional<SignalSet> design;
  Transcript transcript;
};

// A permutation of a system's triples whose every run of `window`
// consecutive triples is pairwise vertex-disjoint.
struct Ordering {
  TripleSystem system;
  std::vector<std::size_t> permutation;
  std::size_t window = 1;
};

struct OrderResult {
  SearchStatus status = SearchStatus::inconclusive;
  std::optional<Ordering> ordering;
  Transcript transcript;
};

// Sliding check: each triple is compared with the window - 1 before it.
inline bool ordering_valid(const Ordering& o) {
  const std::size_t b = o.system.size();
  if (o.window == 0 || o.permutation.size() != b) return false;
  std::vector<bool> seen(b, false);
  for (std::size_t i : o.permutation) {
    if (i >= b || seen[i]) return false;
    seen[i] = true;
  }
  std::vector<std::uint32_t> count(o.system.order(), 0);
  for (std::size_t pos = 0; pos < b; ++pos) {
    if (pos >= o.window) {
      for (Point p : o.system[o.permutation[pos - o.window]].points()) --count[p];
    }
    for (Point p : o.system[o.permutation[pos]].points()) {
      if (count[p]++ > 0) return false;
    }
  }
  return true;
}

// Builds a signal set over only the triples the classes use, keeping their
// relative order; leftover triples are not part of a signal set.
inline SignalSet signal_set_from_classes(const TripleSystem& sts, std::size_t m, std::vector<TripleClass> classes) {
  std::vector<std::size_t> remap(sts.size(), npos);
  for (const TripleClass& cls : classes) {
    for (std::size_t i : cls) remap[i] = 0;
  }
  std::vector<Triple> kept;
  for (std::size_t i = 0; i < sts.size(); ++i) {
    if (remap[i] == 0) {
      remap[i] = kept.size();
      kept.push_back(sts[i]);
    }
  }
  for (TripleClass& cls : classes) {
    for (std::size_t& i : cls) i = remap[i];
  }
  return SignalSet(TripleSystem(sts.order(), std::move(kept)), m, std::move(classes));
}

// Cuts the first floor(b/m) * m triples of the ordering into consecutive
// classes of m.
inline SignalSet kss_from_ordering(const Ordering& o, std::size_t m) {
  if (m == 0 || m > o.window) {
    throw std::domain_error("kss_from_ordering: class size " + std::to_string(m) + " exceeds window " +
                            std::to_string(o.window));
  }
  const std::size_t s = o.system.size() / m;
  std::vector<TripleClass> classes(s);
  for (std::size_t k = 0; k < s; ++k) {
    classes[k].assign(o.permutation.begin() + static_cast<std::ptrdiff_t>(k * m),
                      o.permutation.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
  }
  return signal_set_from_classes(o.system, m, std::move(classes));
}

// Cuts every class of size M into M/m consecutive chunks of m. The result is
// a KSS(v,m) exactly when the input is a KSS(v,M) and b(v) mod M < m.
inline SignalSet split_signal_set(const SignalSet& ss, std::size_t m) {
  const std::size_t big = ss.class_size();
  if (m == 0 || big % m != 0) {
    throw std::domain_error("split_signal_set: " + std::to_string(m) + " does not divide " + std::to_string(big));
  }
  std::vector<TripleClass> classes;
  classes.reserve(ss.class_count() * (big / m));
  for (const TripleClass& cls : ss.classes()) {
    for (std::size_t at = 0; at + m <= cls.size(); at += m) {
      classes.emplace_back(cls.begin() + static_cast<std::ptrdiff_t>(at),
                           cls.begin() + static_cast<std::ptrdiff_t>(at + m));
    }
  }
  return signal_set_from_classes(ss.system(), m, std::move(classes));
}

namespace detail {

class Budget {
 public:
  explicit Budget(const SearchParams& p)
      : limit_(p.node_limit), deadline_(std::chrono::steady_clock::now() + p.time_limit),
        start_(std::chrono::steady_clock::now()) {}

  // Counts one node; false once the node or time limit is spent.
  bool spend() {
    ++nodes_;
    if (nodes_ > limit_) return false;
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
    }
    return !timed_out_;
  }

  bool exhausted_time() const { return timed_out_ || std::chrono::steady_clock::now() > deadline_; }
  std::uint64_t nodes() const { return nodes_; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::uint64_t limit_;
  std::chrono::steady_clock::time_point deadline_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

inline void check_params(const SearchParams& p) {
  if (p.node_limit == 0 || p.restart_limit == 0 || p.time_limit.count() <= 0) {
    throw std::invalid_argument("search limits must be positive");
  }
}

inline void check_decompose_args(const TripleSystem& sts, std::size_t m, const SearchParams& p) {
  check_params(p);
  if (!sts.complete() || !verify_triple_system(sts).ok()) {
    throw std::domain_error("decomposition search needs a complete, verified STS");
  }
  if (m < 1 || m > sts.order() / 3) {
    throw std::domain_error("class size " + std::to_string(m) + " outside 1.." + std::to_string(sts.order() / 3));
  }
}

inline DecomposeResult finish(std::string method, const SearchParams& p, const Budget& budget,
                              std::uint64_t restarts, SearchStatus status, std::optional<SignalSet> design) {
  DecomposeResult r;
  r.status = status;
  r.transcript.method = std::move(method);
  r.transcript.seed = p.seed;
  r.transcript.nodes = budget.nodes();
  r.transcript.restarts = restarts;
  r.transcript.wall_seconds = budget.elapsed();
  Fnv1a h;
  for (char c : r.transcript.method) h.add(static_cast<unsigned char>(c));
  h.add(p.seed);
  h.add(static_cast<std::uint64_t>(status));
  h.add(budget.nodes());
  h.add(restarts);
  if (design) {
    for (const TripleClass& cls : design->classes()) {
      h.add(cls.size());
      for (std::size_t i : cls) h.add(i);
    }
  }
  r.transcript.hash = h.value();
  r.design = std::move(design);
  return r;
}

}  // namespace detail

// Exact search. Class k always contains the least unused triple unless that
// triple is one of the b mod m leftovers; members of a class are taken in
// increasing index order. `exhausted` means no KSS(v,m) exists over this STS.
inline DecomposeResult backtrack_decompose(const TripleSystem& sts, std::size_t m, const SearchParams& p) {
  detail::check_decompose_args(sts, m, p);
  detail::Budget budget(p);
  const std::size_t b = sts.size();
  const std::size_t s = b / m;
  const std::size_t leftover_budget = b - s * m;

  detail::BitVector used(b);
  detail::BitVector occupied(sts.order());
  std::vector<TripleClass> classes(1);
  struct Decision {
    std::size_t triple;
    bool leftover;
  };
  std::vector<Decision> log;
  std::size_t leftovers = 0;

  auto fits = [&](std::size_t j) {
    const Triple& t = sts[j];
    return !used.test(j) && !occupied.test(t.a) && !occupied.test(t.b) && !occupied.test(t.c);
  };
  auto next_candidate = [&](std::size_t from) {
    for (std::size_t j = from; j < b; ++j) {
      if (fits(j)) return j;
    }
    return npos;
  };
  auto place = [&](std::size_t j) {
    used.set(j);
    for (Point q : sts[j].points()) occupied.set(q);
    classes.back().push_back(j);
    log.push_back({j, false});
    if (classes.back().size() == m) {
      occupied.clear();
      classes.emplace_back();
    }
  };
  auto first_unused = [&]() {
    for (std::size_t j = 0; j < b; ++j) {
      if (!used.test(j)) return j;
    }
    return npos;
  };
  // Undo the latest decision and take the next alternative. False when the
  // whole tree has been covered.
  auto backtrack = [&]() {
    while (!log.empty()) {
      const Decision d = log.back();
      log.pop_back();
      used.reset(d.triple);
      if (d.leftover) {
        --leftovers;
        continue;
      }
      if (classes.back().empty()) {
        classes.pop_back();
        for (std::size_t i : classes.back()) {
          for (Point q : sts[i].points()) occupied.set(q);
        }
      }
      classes.back().pop_back();
      for (Point q : sts[d.triple].points()) occupied.reset(q);
      if (classes.back().empty()) {
        if (leftovers < leftover_budget) {
          used.set(d.triple);
          ++leftovers;
          log.push_back({d.triple, true});
          return true;
        }
        continue;
      }
      const std::size_t j = next_candidate(d.triple + 1);
      if (j != npos) {
        if (!budget.spend()) return false;
        place(j);
        return true;
      }
    }
    return false;
  };

  for (;;) {
    if (classes.size() == s + 1) {
      classes.pop_back();
      return detail::finish("backtrack", p, budget, 0, SearchStatus::found,
                            signal_set_from_classes(sts, m, std::move(classes)));
    }
    std::size_t j;
    if (classes.back().empty()) {
      j = first_unused();
    } else {
      j = next_candidate(classes.back().back() + 1);
    }
    if (j != npos) {
      if (!budget.spend()) break;
      place(j);
      continue;
    }
    if (!backtrack()) {
      if (budget.nodes() > p.node_limit || budget.exhausted_time()) break;
      return detail::finish("backtrack", p, budget, 0, SearchStatus::exhausted, std::nullopt);
    }
  }
  return detail::finish("backtrack", p, budget, 0, SearchStatus::inconclusive, std::nullopt);
}

// Extracts classes one at a time. Each class is a size-m partial parallel
// class found by a small depth-first search over the remaining triples,
// tried in order of point-degree sum (highest first, randomly jittered after
// the first restart), so the least flexible triples are placed early and the
// well connected ones stay available for later classes. A class search that
// fails or exceeds its node cap ends the restart.
inline DecomposeResult greedy_decompose(const TripleSystem& sts, std::size_t m, const SearchParams& p) {
  detail::check_decompose_args(sts, m, p);
  detail::Budget budget(p);
  const std::size_t b = sts.size();
  const std::size_t v = sts.order();
  const std::size_t s = b / m;
  const std::uint64_t class_cap = 64 * b;

  std::uint64_t restart = 0;
  for (; restart < p.restart_limit; ++restart) {
    detail::Rng rng(p.seed * 0x9e3779b97f4a7c15ULL + restart);
    const std::uint64_t jitter = restart == 0 ? 1 : 4;
    std::vector<bool> remaining(b, true);
    std::vector<std::uint32_t> degree(v, 0);
    for (const Triple& t : sts.triples()) {
      for (Point q : t.points()) ++degree[q];
    }
    std::vector<TripleClass> classes;
    detail::BitVector occupied(v);
    std::vector<std::size_t> cand;
    std::vector<std::uint64_t> key(b);
    bool stuck = false;
    bool out_of_budget = false;
    while (classes.size() < s && !stuck) {
      cand.clear();
      for (std::size_t j = 0; j < b; ++j) {
        if (!remaining[j]) continue;
        const Triple& t = sts[j];
        key[j] = 4 * std::uint64_t{degree[t.a] + degree[t.b] + degree[t.c]} + (jitter > 1 ? rng.below(jitter) : 0);
        cand.push_back(j);
      }
      std::stable_sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) { return key[x] > key[y]; });

      TripleClass cls;
      occupied.clear();
      std::uint64_t nodes = 0;
      // Returns true once cls holds m triples.
      auto extend = [&](auto&& self, std::size_t from) -> bool {
        if (cls.size() == m) return true;
        for (std::size_t i = from; i + (m - cls.size()) <= cand.size(); ++i) {
          if (++nodes > class_cap) return false;
          if (!budget.spend()) {
            out_of_budget = true;
            return false;
          }
          const Triple& t = sts[cand[i]];
          if (occupied.test(t.a) || occupied.test(t.b) || occupied.test(t.c)) continue;
          cls.push_back(cand[i]);
          for (Point q : t.points()) occupied.set(q);
          if (self(self, i + 1)) return true;
          for (Point q : t.points()) occupied.reset(q);
          cls.pop_back();
          if (out_of_budget || nodes > class_cap) return false;
        }
        return false;
      };
      if (!extend(extend, 0)) {
        stuck = true;
        break;
      }
      for (std::size_t j : cls) {
        remaining[j] = false;
        for (Point q : sts[j].points()) --degree[q];
      }
      classes.push_back(std::move(cls));
    }
    if (out_of_budget) break;
    if (!stuck) {
      return detail::finish("greedy", p, budget, restart, SearchStatus::found, signal_set_from_classes(sts, m, std::move(classes)));
    }
    if (budget.exhausted_time()) break;
  }
  return detail::finish("greedy", p, budget, restart, SearchStatus::inconclusive, std::nullopt);
}

// Min-conflicts hill climbing over a fixed-size assignment: s classes of m
// plus a bin for the b mod m leftovers. Cost is the number of surplus point
// occurrences inside classes plus any class-size deficit (always zero here,
// since moves are swaps). A move swaps a conflicting triple with the triple
// in another bin that gives the lowest cost; only non-worsening moves are
// taken, ties broken at random. A plateau of 40 * b steps without a new best
// triggers a restart.
inline DecomposeResult local_search_decompose(const TripleSystem& sts, std::size_t m, const SearchParams& p) {
  detail::check_decompose_args(sts, m, p);
  detail::Budget budget(p);
  const std::size_t b = sts.size();
  const std::size_t v = sts.order();
  const std::size_t s = b / m;
  const std::size_t plateau = 40 * b + 1000;

  std::uint64_t restart = 0;
  for (; restart < p.restart_limit; ++restart) {
    detail::Rng rng(p.seed * 0x9e3779b97f4a7c15ULL + restart);
    std::vector<std::size_t> order(b);
    for (std::size_t i = 0; i < b; ++i) order[i] = i;
    rng.shuffle(order);

    // bin_of[t] in [0, s]; bin s holds leftovers and carries no cost.
    std::vector<std::size_t> bin_of(b);
    for (std::size_t k = 0; k < b; ++k) bin_of[order[k]] = std::min(k / m, s);
    std::vector<std::uint16_t> count(s * v, 0);
    auto cnt = [&](std::size_t bin, Point q) -> std::uint16_t& { return count[bin * v + q]; };
    std::int64_t cost = 0;
    for (std::size_t t = 0; t < b; ++t) {
      if (bin_of[t] == s) continue;
      for (Point q : sts[t].points()) {
        if (cnt(bin_of[t], q)++ > 0) ++cost;
      }
    }

    // Change in a class's surplus when `out` leaves and `in` joins it.
    auto class_delta = [&](std::size_t bin, std::size_t out, std::size_t in) {
      if (bin == s) return std::int64_t{0};
      std::int64_t d = 0;
      for (Point q : sts[out].points()) {
        if (cnt(bin, q) >= 2) --d;
        --cnt(bin, q);
      }
      for (Point q : sts[in].points()) {
        if (cnt(bin, q) >= 1) ++d;
        ++cnt(bin, q);
      }
      for (Point q : sts[in].points()) --cnt(bin, q);
      for (Point q : sts[out].points()) ++cnt(bin, q);
      return d;
    };
    auto conflicted = [&](std::size_t t) {
      const std::size_t bin = bin_of[t];
      if (bin == s) return false;
      for (Point q : sts[t].points()) {
        if (cnt(bin, q) >= 2) return true;
      }
      return false;
    };

    std::int64_t best_cost = cost;
    std::size_t since_best = 0;
    std::vector<std::size_t> hot;
    std::vector<std::size_t> ties;
    while (cost > 0 && since_best < plateau) {
      if (!budget.spend()) {
        return detail::finish("local", p, budget, restart, SearchStatus::inconclusive, std::nullopt);
      }
      hot.clear();
      for (std::size_t t = 0; t < b; ++t) {
        if (conflicted(t)) hot.push_back(t);
      }
      const std::size_t x = hot[rng.below(hot.size())];
      const std::size_t bx = bin_of[x];
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      ties.clear();
      for (std::size_t y = 0; y < b; ++y) {
        const std::size_t by = bin_of[y];
        if (by == bx) continue;
        const std::int64_t d = class_delta(bx, x, y) + class_delta(by, y, x);
        if (d < best) {
          best = d;
          ties.clear();
        }
        if (d == best) ties.push_back(y);
      }
      if (ties.empty() || best > 0) {
        ++since_best;
        continue;
      }
      const std::size_t y = ties[rng.below(ties.size())];
      const std::size_t by = bin_of[y];
      for (Point q : sts[x].points()) {
        --cnt(bx, q);
        if (by != s) ++cnt(by, q);
      }
      for (Point q : sts[y].points()) {
        if (by != s) --cnt(by, q);
        ++cnt(bx, q);
      }
      std::swap(bin_of[x], bin_of[y]);
      cost += best;
      if (cost < best_cost) {
        best_cost = cost;
        since_best = 0;
      } else {
        ++since_best;
      }
    }
    if (cost == 0) {
      std::vector<TripleClass> classes(s);
      for (std::size_t t = 0; t < b; ++t) {
        if (bin_of[t] < s) classes[bin_of[t]].push_back(t);
      }
      return detail::finish("local", p, budget, restart, SearchStatus::found, signal_set_from_classes(sts, m, std::move(classes)));
    }
    if (budget.exhausted_time()) break;
  }
  return detail::finish("local", p, budget, restart, SearchStatus::inconclusive, std::nullopt);
}

// Depth-first search for a permutation in which every `target_window`
// consecutive triples are pairwise disjoint; candidate order is shuffled per
// node from the seed. `exhausted` means no such ordering exists.
inline OrderResult order_triples(const TripleSystem& sts, std::size_t target_window, const SearchParams& p) {
  detail::check_params(p);
  if (target_window < 1) throw std::domain_error("order_triples: window must be at least 1");
  if (!sts.complete()) throw std::domain_error("order_triples: system must be complete");
  detail::Budget budget(p);
  const std::size_t b = sts.size();
  const std::size_t v = sts.order();
  detail::Rng rng(p.seed);

  auto result = [&](SearchStatus status, std::vector<std::size_t> perm) {
    OrderResult r;
    r.status = status;
    r.transcript.method = "order";
    r.transcript.seed = p.seed;
    r.transcript.nodes = budget.nodes();
    r.transcript.wall_seconds = budget.elapsed();
    detail::Fnv1a h;
    h.add(p.seed);
    h.add(static_cast<std::uint64_t>(status));
    h.add(budget.nodes());
    for (std::size_t i : perm) h.add(i);
    r.transcript.hash = h.value();
    if (status == SearchStatus::found) r.ordering = Ordering{sts, std::move(perm), target_window};
    return r;
  };

  if (target_window == 1) {
    std::vector<std::size_t> identity(b);
    for (std::size_t i = 0; i < b; ++i) identity[i] = i;
    return result(SearchStatus::found, std::move(identity));
  }

  std::vector<std::uint32_t> window_count(v, 0);
  std::vector<bool> used(b, false);
  std::vector<std::size_t> perm;
  // candidates[d] are the untried choices at depth d, consumed from the back.
  std::vector<std::vector<std::size_t>> candidates;

  auto push_candidates = [&]() {
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < b; ++j) {
      if (used[j]) continue;
      const Triple& t = sts[j];
      if (window_count[t.a] || window_count[t.b] || window_count[t.c]) continue;
      c.push_back(j);
    }
    rng.shuffle(c);
    candidates.push_back(std::move(c));
  };
  // window_count holds the points of the last target_window - 1 triples.
  auto enter = [&](std::size_t j) {
    perm.push_back(j);
    used[j] = true;
    for (Point q : sts[j].points()) ++window_count[q];
    if (perm.size() >= target_window) {
      for (Point q : sts[perm[perm.size() - target_window]].points()) --window_count[q];
    }
  };
  auto leave = [&]() {
    if (perm.size() >= target_window) {
      for (Point q : sts[perm[perm.size() - target_window]].points()) ++window_count[q];
    }
    const std::size_t j = perm.back();
    for (Point q : sts[j].points()) --window_count[q];
    perm.pop_back();
    used[j] = false;
  };

  push_candidates();
  while (!candidates.empty()) {
    if (perm.size() == b) return result(SearchStatus::found, perm);
    auto& top = candidates.back();
    if (top.empty()) {
      candidates.pop_back();
      if (!perm.empty()) leave();
      continue;
    }
    if (!budget.spend()) return result(SearchStatus::inconclusive, {});
    const std::size_t j = top.back();
    top.pop_back();
    enter(j);
    push_candidates();
  }
  return result(SearchStatus::exhausted, {});
}

namespace detail {

// Points of an orbit search: (x, level) flattened to x + n*level, plus an
// optional point at levels*n that every shift fixes. Shifts act as x -> x + 1.
struct OrbitLayout {
  std::size_t n;
  std::size_t levels;
  bool fixed_point;

  std::size_t points() const { return levels * n + (fixed_point ? 1 : 0); }
  std::size_t level_pairs() const { return levels * (levels - 1) / 2; }
  std::size_t key_count() const { return levels * n + level_pairs() * n + levels; }
  std::size_t slot(std::size_t i, std::size_t j) const { return i * levels - i * (i + 1) / 2 + (j - i - 1); }

  // Orbit key of the pair {x, y}: a pure difference min(d, n-d) within a
  // level, a directed difference between two levels, or the level joined
  // to the fixed point.
  std::size_t key(std::size_t x, std::size_t y) const {
    if (x > y) std::swap(x, y);
    const std::size_t inf = levels * n;
    if (fixed_point && y == inf) return levels * n + level_pairs() * n + x / n;
    const std::size_t li = x / n, lj = y / n;
    const std::size_t d = (y % n + n - x % n) % n;
    if (li == lj) return li * n + std::min(d, n - d);
    return levels * n + slot(li, lj) * n + d;
  }

  Point shifted(std::size_t q, std::size_t shift) const {
    if (fixed_point && q == levels * n) return static_cast<Point>(q);
    return static_cast<Point>((q % n + shift) % n + n * (q / n));
  }
};

using BaseTriple = std::array<std::size_t, 3>;

// Depth-first search for `count` base classes of `depth` disjoint triples
// each, leaving `skips` points of every class uncovered. All pair keys must
// be distinct and absent from `key_used`. Within the current class the least
// open point is covered first, or skipped while skips remain; options are
// shuffled per node. A skip is encoded as {x, npos, npos}.
inline std::optional<std::vector<std::vector<BaseTriple>>> base_class_search(const OrbitLayout& layout,
                                                                            std::vector<bool> key_used,
                                                                            std::size_t count, std::size_t depth,
                                                                            std::size_t skips, Rng& rng,
                                                                            Budget& budget, std::uint64_t cap) {
  const std::size_t npoints = layout.points();
  std::vector<bool> covered(count * npoints, false);
  struct Frame {
    std::vector<BaseTriple> options;
    BaseTriple chosen{};
    bool active = false;
  };
  std::vector<Frame> stack;
  std::size_t cls = 0;
  std::vector<std::size_t> placed(count, 0), skipped(count, 0);
  auto cov = [&](std::size_t q) { return covered[cls * npoints + q]; };

  auto options_for = [&]() {
    std::vector<BaseTriple> out;
    std::size_t x = 0;
    while (x < npoints && cov(x)) ++x;
    if (x == npoints) return out;
    for (std::size_t y = x + 1; y < npoints; ++y) {
      if (cov(y)) continue;
      const std::size_t kxy = layout.key(x, y);
      if (key_used[kxy]) continue;
      for (std::size_t z = y + 1; z < npoints; ++z) {
        if (cov(z)) continue;
        const std::size_t kxz = layout.key(x, z), kyz = layout.key(y, z);
        if (key_used[kxz] || key_used[kyz] || kxz == kxy || kyz == kxy || kxz == kyz) continue;
        out.push_back({x, y, z});
      }
    }
    rng.shuffle(out);
    if (skipped[cls] < skips) out.insert(out.begin(), BaseTriple{x, npos, npos});
    return out;
  };
  // Frames record the class they belong to implicitly: a frame opened right
  // after a class completes belongs to the next class.
  std::vector<std::size_t> frame_class;
  auto apply = [&](const BaseTriple& t, std::size_t k, bool on) {
    if (t[1] == npos) {
      covered[k * npoints + t[0]] = on;
      skipped[k] += on ? 1 : std::size_t(-1);
      return;
    }
    for (std::size_t q : t) covered[k * npoints + q] = on;
    key_used[layout.key(t[0], t[1])] = on;
    key_used[layout.key(t[0], t[2])] = on;
    key_used[layout.key(t[1], t[2])] = on;
    placed[k] += on ? 1 : std::size_t(-1);
  };

  const std::uint64_t start = budget.nodes();
  stack.push_back({options_for()});
  frame_class.push_back(0);
  while (!stack.empty()) {
    Frame& f = stack.back();
    const std::size_t k = frame_class.back();
    cls = k;
    if (f.active) {
      apply(f.chosen, k, false);
      f.active = false;
    }
    if (f.options.empty()) {
      stack.pop_back();
      frame_class.pop_back();
      continue;
    }
    if (!budget.spend() || budget.nodes() - start > cap) return std::nullopt;
    f.chosen = f.options.back();
    f.options.pop_back();
    apply(f.chosen, k, true);
    f.active = true;
    std::size_t next = k;
    if (placed[k] == depth) {
      if (k + 1 == count) {
        std::vector<std::vector<BaseTriple>> out(count);
        for (std::size_t i = 0; i < stack.size(); ++i) {
          if (stack[i].chosen[1] != npos) out[frame_class[i]].push_back(stack[i].chosen);
        }
        return out;
      }
      next = k + 1;
    }
    cls = next;
    stack.push_back({options_for()});
    frame_class.push_back(next);
  }
  return std::nullopt;
}

}  // namespace detail

// Searches for a Kirkman triple system of order v whose resolution is
// invariant under a cyclic shift, using one of two point layouts:
//
//  * Z_n x {0,1,2} with n = v/3. The resolution is the orbit of a base
//    parallel class (n classes) plus (n-1)/2 fixed classes
//    {(x,0), (x+a,1), (x+c,2)}.
//  * Z_n x {0,1} plus a fixed point, with n = (v-1)/2 odd. The resolution is
//    the orbit of a base parallel class alone.
//
// In both, each pair orbit (pure difference in a level, directed difference
// between levels, level joined to the fixed point) must be hit exactly once.
// Restarts alternate between the layouts when both apply. No KTS(15) admits
// the first layout, so v = 15 relies on the second.
inline DecomposeResult cyclic_kirkman(std::uint64_t v, const SearchParams& p) {
  detail::check_params(p);
  if (v % 6 != 3) throw std::domain_error("cyclic_kirkman: order must be 3 mod 6");
  detail::Budget budget(p);
  const std::uint64_t cap = std::max<std::uint64_t>(p.node_limit / p.restart_limit, 1000);
  const detail::OrbitLayout three{v / 3, 3, false};
  const detail::OrbitLayout two{(v - 1) / 2, 2, true};
  const bool two_applies = v > 3 && two.n % 2 == 1;

  std::uint64_t restart = 0;
  for (; restart < p.restart_limit; ++restart) {
    detail::Rng rng(p.seed * 0x9e3779b97f4a7c15ULL + restart);
    const bool use_two = two_applies && restart % 2 == 1;
    const detail::OrbitLayout& layout = use_two ? two : three;
    const std::size_t n = layout.n;
    std::vector<bool> key_used(layout.key_count(), false);
    for (std::size_t l = 0; l < layout.levels; ++l) key_used[l * n] = true;  // pure difference 0

    // Fixed transversals (a, c) for the three-level layout; the first
    // attempt uses (k, 2k).
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    if (!use_two) {
      const std::size_t want = (n - 1) / 2;
      auto keys_of = [&](std::size_t a, std::size_t c) {
        return std::array<std::size_t, 3>{layout.key(0, n + a), layout.key(0, 2 * n + c), layout.key(n, 2 * n + (c + n - a) % n)};
      };
      auto take = [&](std::size_t a, std::size_t c) {
        const auto ks = keys_of(a, c);
        for (std::size_t k : ks) {
          if (key_used[k]) return false;
        }
        for (std::size_t k : ks) key_used[k] = true;
        fixed.emplace_back(a, c);
        return true;
      };
      if (restart == 0) {
        for (std::size_t k = 0; k < want; ++k) take(k, 2 * k % n);
      } else {
        for (std::size_t tries = 0; fixed.size() < want && tries < 100 * n * n; ++tries) {
          take(rng.below(n), rng.below(n));
        }
      }
      if (fixed.size() < want) continue;
    }

    auto found = detail::base_class_search(layout, key_used, 1, v / 3, 0, rng, budget, cap);
    if (found) {
      const auto& base = found->front();
      std::vector<Triple> triples;
      std::vector<TripleClass> classes;
      for (std::size_t shift = 0; shift < n; ++shift) {
        TripleClass cls;
        for (const auto& t : base) {
          cls.push_back(triples.size());
          triples.emplace_back(layout.shifted(t[0], shift), layout.shifted(t[1], shift), layout.shifted(t[2], shift));
        }
        classes.push_back(std::move(cls));
      }
      for (auto [a, c] : fixed) {
        TripleClass cls;
        for (std::size_t x = 0; x < n; ++x) {
          cls.push_back(triples.size());
          triples.emplace_back(static_cast<Point>(x), static_cast<Point>((x + a) % n + n),
                               static_cast<Point>((x + c) % n + 2 * n));
        }
        classes.push_back(std::move(cls));
      }
      return detail::finish("kirkman", p, budget, restart, SearchStatus::found,
                            SignalSet(TripleSystem(v, std::move(triples)), v / 3, std::move(classes)));
    }
    if (budget.nodes() > p.node_limit || budget.exhausted_time()) break;
  }
  return detail::finish("kirkman", p, budget, restart, SearchStatus::inconclusive, std::nullopt);
}

// Hill climbing in the style of Stinson's STS algorithm, building the partial
// system and its classes together. A step takes a deficient class C and a
// point x that C misses, then two more points y, z missed by C with {x,y}
// and {x,z} unused. If {y,z} is unused too, {x,y,z} joins C; otherwise the
// triple holding {y,z} is evicted from its class first. When x has fewer
// than two usable partners the step instead evicts a random triple of C.
// The result is a partial STS; it need not extend to a complete STS(v).
inline DecomposeResult hill_climb_decompose(std::uint64_t v, std::size_t m, const SearchParams& p) {
  detail::check_params(p);
  require_admissible(v, "hill_climb_decompose");
  if (m < 1 || m > v / 3) {
    throw std::domain_error("class size " + std::to_string(m) + " outside 1.." + std::to_string(v / 3));
  }
  detail::Budget budget(p);
  const std::size_t s = triple_count(v) / m;
  const std::size_t nv = v;
  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  const std::uint64_t per_restart = std::max<std::uint64_t>(p.node_limit / p.restart_limit, 1000);

  std::uint64_t restart = 0;
  for (; restart < p.restart_limit; ++restart) {
    detail::Rng rng(p.seed * 0x9e3779b97f4a7c15ULL + restart);
    std::vector<Triple> slot;
    std::vector<std::size_t> slot_class;
    std::vector<std::uint32_t> free_slots;
    std::vector<std::uint32_t> pair_owner(nv * nv, none);
    std::vector<std::uint32_t> cover(s * nv, none);  // cover[k*v + x]: slot covering x in class k
    std::vector<TripleClass> members(s);
    std::vector<std::size_t> deficient(s);
    for (std::size_t k = 0; k < s; ++k) deficient[k] = k;

    auto owner = [&](Point a, Point b) -> std::uint32_t& { return pair_owner[a * nv + b]; };
    auto link = [&](std::uint32_t id, std::uint32_t value) {
      const Triple& t = slot[id];
      owner(t.a, t.b) = owner(t.b, t.a) = value;
      owner(t.a, t.c) = owner(t.c, t.a) = value;
      owner(t.b, t.c) = owner(t.c, t.b) = value;
    };
    auto remove = [&](std::uint32_t id) {
      const std::size_t k = slot_class[id];
      link(id, none);
      for (Point q : slot[id].points()) cover[k * nv + q] = none;
      auto& mem = members[k];
      mem.erase(std::find(mem.begin(), mem.end(), id));
      if (mem.size() + 1 == m) deficient.push_back(k);
      free_slots.push_back(id);
    };
    auto add = [&](std::size_t k, Point x, Point y, Point z) {
      std::uint32_t id;
      if (!free_slots.empty()) {
        id = free_slots.back();
        free_slots.pop_back();
        slot[id] = Triple(x, y, z);
      } else {
        id = static_cast<std::uint32_t>(slot.size());
        slot.emplace_back(x, y, z);
        slot_class.push_back(0);
      }
      slot_class[id] = k;
      link(id, id);
      for (Point q : slot[id].points()) cover[k * nv + q] = id;
      members[k].push_back(id);
      if (members[k].size() == m) deficient.erase(std::find(deficient.begin(), deficient.end(), k));
    };

    std::vector<Point> open;
    std::vector<Point> partners;
    const std::uint64_t start = budget.nodes();
    while (!deficient.empty()) {
      if (!budget.spend() || budget.nodes() - start > per_restart) break;
      const std::size_t k = deficient[rng.below(deficient.size())];
      open.clear();
      for (Point q = 0; q < nv; ++q) {
        if (cover[k * nv + q] == none) open.push_back(q);
      }
      const Point x = open[rng.below(open.size())];
      partners.clear();
      for (Point q : open) {
        if (q != x && owner(x, q) == none) partners.push_back(q);
      }
      if (partners.size() < 2) {
        if (!members[k].empty()) remove(members[k][rng.below(members[k].size())]);
        continue;
      }
      const std::size_t iy = rng.below(partners.size());
      std::size_t iz = rng.below(partners.size() - 1);
      if (iz >= iy) ++iz;
      const Point y = partners[iy], z = partners[iz];
      if (owner(y, z) != none) remove(owner(y, z));
      add(k, x, y, z);
    }
    if (deficient.empty()) {
      std::vector<Triple> triples;
      std::vector<TripleClass> classes(s);
      for (std::size_t k = 0; k < s; ++k) {
        for (std::uint32_t id : members[k]) {
          classes[k].push_back(triples.size());
          triples.push_back(slot[id]);
        }
      }
      return detail::finish("hill", p, budget, restart, SearchStatus::found,
                            SignalSet(TripleSystem(v, std::move(triples)), m, std::move(classes)));
    }
    if (budget.nodes() > p.node_limit || budget.exhausted_time()) break;
  }
  return detail::finish("hill", p, budget, restart, SearchStatus::inconclusive, std::nullopt);
}

namespace detail {

// Orbit layouts for (v, m): Z_n acting on n * levels points plus at most one
// fixed point, with n | s so the s classes form s/n orbits. Layouts without
// enough pair orbits for s/n base classes are dropped; the rest are ordered
// by spare pair orbits, then by larger n.
inline std::vector<OrbitLayout> orbit_layouts(std::uint64_t v, std::size_t m) {
  std::vector<std::pair<std::size_t, OrbitLayout>> ranked;
  const std::size_t s = triple_count(v) / m;
  for (std::size_t n = s; n >= 2; --n) {
    if (s % n != 0) continue;
    for (std::size_t f : {1, 0}) {
      if (v < f || (v - f) % n != 0) continue;
      const OrbitLayout layout{n, (v - f) / n, f == 1};
      const std::size_t usable = layout.levels * ((n - 1) / 2) + layout.level_pairs() * n + (f == 1 ? layout.levels : 0);
      const std::size_t needed = (s / n) * 3 * m;
      if (usable >= needed) ranked.emplace_back(usable - needed, layout);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<OrbitLayout> out;
  for (const auto& r : ranked) out.push_back(r.second);
  return out;
}

}  // namespace detail

// Whether orbit_decompose has a layout for (v, m).
inline bool orbit_applies(std::uint64_t v, std::size_t m) {
  if (!admissible(v) || v < 7 || m == 0 || m > v / 3) return false;
  if (v % 6 == 3 && (v / 3) % m == 0) return true;
  return !detail::orbit_layouts(v, m).empty();
}

// Searches for a KSS(v,m) invariant under a cyclic group. When m divides v/3
// this is cyclic_kirkman followed by splitting each class. Otherwise the
// points are Z_n x levels (plus a fixed point) for some n dividing s; each
// of the s/n orbits of classes comes from a base class of m disjoint
// triples, built one after another, and every pair orbit is hit at most
// once overall. For even n the pure difference n/2 is barred, since its
// orbit has only n/2 pairs and developing it would cover each twice.
// Restarts cycle through the layouts.
inline DecomposeResult orbit_decompose(std::uint64_t v, std::size_t m, const SearchParams& p) {
  if (!orbit_applies(v, m)) {
    throw std::domain_error("orbit_decompose: no cyclic layout for v=" + std::to_string(v) + " m=" + std::to_string(m));
  }
  if (v % 6 == 3 && (v / 3) % m == 0) {
    DecomposeResult r = cyclic_kirkman(v, p);
    if (r.design) r.design = split_signal_set(*r.design, m);
    r.transcript.method = "orbit";
    return r;
  }
  detail::check_params(p);
  detail::Budget budget(p);
  const std::vector<detail::OrbitLayout> layouts = detail::orbit_layouts(v, m);
  const std::uint64_t cap = std::max<std::uint64_t>(p.node_limit / p.restart_limit, 1000);
  const std::size_t s = triple_count(v) / m;

  std::uint64_t restart = 0;
  for (; restart < p.restart_limit; ++restart) {
    detail::Rng rng(p.seed * 0x9e3779b97f4a7c15ULL + restart);
    const detail::OrbitLayout& layout = layouts[restart % layouts.size()];
    const std::size_t n = layout.n;
    std::vector<bool> key_used(layout.key_count(), false);
    for (std::size_t l = 0; l < layout.levels; ++l) {
      key_used[l * n] = true;
      if (n % 2 == 0) key_used[l * n + n / 2] = true;
    }
    auto bases = detail::base_class_search(layout, key_used, s / n, m, v - 3 * m, rng, budget, cap);
    if (bases) {
      std::vector<Triple> triples;
      std::vector<TripleClass> classes;
      for (const auto& base : *bases) {
        for (std::size_t shift = 0; shift < n; ++shift) {
          TripleClass cls;
          for (const auto& t : base) {
            cls.push_back(triples.size());
            triples.emplace_back(layout.shifted(t[0], shift), layout.shifted(t[1], shift),
                                 layout.shifted(t[2], shift));
          }
          classes.push_back(std::move(cls));
        }
      }
      return detail::finish("orbit", p, budget, restart, SearchStatus::found,
                            SignalSet(TripleSystem(v, std::move(triples)), m, std::move(classes)));
    }
    if (budget.nodes() > p.node_limit || budget.exhausted_time()) break;
  }
  return detail::finish("orbit", p, budget, restart, SearchStatus::inconclusive, std::nullopt);
}

// Portfolio used by the CLI and the cross-validation tests. Stages share
// p.time_limit: Kirkman splitting when m | v/3, then local search on
// known_system(v), the orbit search, hill climbing, and finally
// backtracking, which may report `exhausted` for known_system(v).
inline DecomposeResult auto_decompose(std::uint64_t v, std::size_t m, const SearchParams& p) {
  detail::check_params(p);
  const TripleSystem sts = known_system(v);
  detail::check_decompose_args(sts, m, p);
  const auto start = std::chrono::steady_clock::now();
  auto stage = [&](double share) {
    SearchParams q = p;
    const auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    const auto left = std::max(p.time_limit - spent, std::chrono::milliseconds(1));
    q.time_limit = std::max(std::chrono::milliseconds(1),
                            std::min(left, std::chrono::milliseconds(static_cast<long long>(p.time_limit.count() * share))));
    return q;
  };
  auto done = [&](DecomposeResult r) {
    r.transcript.method = "auto/" + r.transcript.method;
    r.transcript.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  if (m == 1) return done(greedy_decompose(sts, m, p));
  if (v % 6 == 3 && (v / 3) % m == 0) {
    DecomposeResult r = orbit_decompose(v, m, stage(0.2));
    if (r.design) return done(std::move(r));
  }
  if (DecomposeResult r = local_search_decompose(sts, m, stage(0.1)); r.design) return done(std::move(r));
  if (orbit_applies(v, m)) {
    if (DecomposeResult r = orbit_decompose(v, m, stage(0.6)); r.design) return done(std::move(r));
  }
  if (DecomposeResult r = hill_climb_decompose(v, m, stage(0.1)); r.design) return done(std::move(r));
  return done(backtrack_decompose(sts, m, stage(1.0)));
}

}  // namespace kss
