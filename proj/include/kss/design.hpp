#pragma once

// Core value types for partial Steiner triple systems and signal sets.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace kss {

using Point = std::uint32_t;

inline bool admissible(std::uint64_t v) { return v % 6 == 1 || v % 6 == 3; }

inline void require_admissible(std::uint64_t v, const char* what) {
  if (!admissible(v)) {
    throw std::domain_error(std::string(what) + ": order " + std::to_string(v) +
                            " is not 1 or 3 mod 6");
  }
}

// b(v) = v(v-1)/6, the number of triples in an STS(v).
inline std::uint64_t triple_count(std::uint64_t v) {
  require_admissible(v, "triple_count");
  return v * (v - 1) / 6;
}

// mu(v): largest partial parallel class available in some STS(v).
// Any two Fano lines meet, so mu(7) = 1.
inline std::uint64_t max_ppc_size(std::uint64_t v) {
  require_admissible(v, "max_ppc_size");
  if (v < 3) throw std::domain_error("max_ppc_size: STS(1) has no triples");
  if (v % 6 == 3) return v / 3;
  if (v == 7) return 1;
  return (v - 1) / 3;
}

struct Triple {
  Point a = 0, b = 0, c = 0;

  Triple() = default;
  // Sorts its arguments; the three points must be distinct.
  Triple(Point x, Point y, Point z) {
    std::array<Point, 3> p{x, y, z};
    std::sort(p.begin(), p.end());
    if (p[0] == p[1] || p[1] == p[2]) {
      throw std::invalid_argument("Triple: points must be distinct");
    }
    a = p[0];
    b = p[1];
    c = p[2];
  }

  std::array<Point, 3> points() const { return {a, b, c}; }
  bool contains(Point p) const { return p == a || p == b || p == c; }
  bool meets(const Triple& o) const { return o.contains(a) || o.contains(b) || o.contains(c); }

  auto operator<=>(const Triple&) const = default;
};

inline std::string to_string(const Triple& t) {
  return std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.c);
}

class TripleSystem {
 public:
  TripleSystem() = default;
  TripleSystem(std::uint64_t order, std::vector<Triple> triples)
      : order_(order), triples_(std::move(triples)) {}

  std::uint64_t order() const { return order_; }
  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  const Triple& operator[](std::size_t i) const { return triples_[i]; }

  // True when the triple count reaches b(v). Pair-disjointness is checked
  // separately by verify_triple_system.
  bool complete() const { return admissible(order_) && triples_.size() == triple_count(order_); }

  bool operator==(const TripleSystem&) const = default;

 private:
  std::uint64_t order_ = 0;
  std::vector<Triple> triples_;
};

using TripleClass = std::vector<std::size_t>;

// Triples of `system` partitioned into classes of m triple indices each.
class SignalSet {
 public:
  SignalSet() = default;
  SignalSet(TripleSystem system, std::size_t m, std::vector<TripleClass> classes)
      : system_(std::move(system)), m_(m), classes_(std::move(classes)) {}

  const TripleSystem& system() const { return system_; }
  std::uint64_t order() const { return system_.order(); }
  std::size_t class_size() const { return m_; }
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<TripleClass>& classes() const { return classes_; }

  std::vector<Triple> class_triples(std::size_t k) const {
    std::vector<Triple> out;
    out.reserve(classes_[k].size());
    for (std::size_t i : classes_[k]) out.push_back(system_[i]);
    return out;
  }

  bool operator==(const SignalSet&) const = default;

 private:
  TripleSystem system_;
  std::size_t m_ = 0;
  std::vector<TripleClass> classes_;
};

enum class ViolationKind {
  duplicate_pair,
  oversize_class,
  undersize_class,
  intra_class_point_collision,
  partition_gap,
  partition_overlap,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::duplicate_pair: return "duplicate-pair";
    case ViolationKind::oversize_class: return "oversize-class";
    case ViolationKind::undersize_class: return "undersize-class";
    case ViolationKind::intra_class_point_collision: return "intra-class-point-collision";
    case ViolationKind::partition_gap: return "partition-gap";
    case ViolationKind::partition_overlap: return "partition-overlap";
  }
  return "?";
}

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// Where a violation sits. Unused fields stay npos.
//   duplicate-pair:      point_a < point_b, triple_index = second offending triple
//   class size:          class_index
//   point collision:     class_index, point_a = shared point
//   gap/overlap:         triple_index (overlap: class_index = a repeat site)
struct Violation {
  ViolationKind kind;
  std::size_t class_index = npos;
  std::size_t triple_index = npos;
  std::size_t point_a = npos;
  std::size_t point_b = npos;

  bool operator==(const Violation&) const = default;
};

inline std::string describe(const Violation& x) {
  std::string s = to_string(x.kind);
  auto field = [&](const char* name, std::size_t value) {
    if (value != npos) s += std::string(" ") + name + "=" + std::to_string(value);
  };
  field("class", x.class_index);
  field("triple", x.triple_index);
  field("point", x.point_a);
  field("point2", x.point_b);
  return s;
}

struct VerificationReport {
  std::vector<Violation> violations;
  bool complete = false;

  bool ok() const { return violations.empty(); }

  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& x) { return x.kind == k; });
  }
};

inline void check_point_range(const TripleSystem& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].c >= t.order()) {
      throw std::out_of_range("triple " + std::to_string(i) + " (" + to_string(t[i]) +
                              ") has a point outside 0.." + std::to_string(t.order()) + "-1");
    }
  }
}

// Reports every pair covered more than once. Throws std::out_of_range for
// point indices >= v; that is an input error, not a verification failure.
inline VerificationReport verify_triple_system(const TripleSystem& t) {
  check_point_range(t);
  struct Cover {
    Point lo, hi;
    std::size_t triple;
    bool operator<(const Cover& o) const { return std::tie(lo, hi, triple) < std::tie(o.lo, o.hi, o.triple); }
  };
  std::vector<Cover> pairs;
  pairs.reserve(3 * t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Triple& x = t[i];
    pairs.push_back({x.a, x.b, i});
    pairs.push_back({x.a, x.c, i});
    pairs.push_back({x.b, x.c, i});
  }
  std::sort(pairs.begin(), pairs.end());

  VerificationReport report;
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    if (pairs[k].lo == pairs[k - 1].lo && pairs[k].hi == pairs[k - 1].hi) {
      report.violations.push_back(
          {ViolationKind::duplicate_pair, npos, pairs[k].triple, pairs[k].lo, pairs[k].hi});
    }
  }
  report.complete = t.complete();
  return report;
}

// Checks the underlying system, class sizes, point-disjointness within each
// class, and that the classes use every triple index exactly once. Class
// entries that are not valid triple indices throw std::out_of_range.
inline VerificationReport verify_signal_set(const SignalSet& ss) {
  const TripleSystem& sys = ss.system();
  VerificationReport report = verify_triple_system(sys);

  std::vector<std::size_t> uses(sys.size(), 0);
  std::vector<std::size_t> seen_in(sys.order(), npos);
  for (std::size_t k = 0; k < ss.class_count(); ++k) {
    const TripleClass& cls = ss.classes()[k];
    if (cls.size() > ss.class_size()) {
      report.violations.push_back({ViolationKind::oversize_class, k});
    } else if (cls.size() < ss.class_size()) {
      report.violations.push_back({ViolationKind::undersize_class, k});
    }
    for (std::size_t idx : cls) {
      if (idx >= sys.size()) {
        throw std::out_of_range("class " + std::to_string(k) + " refers to triple " +
                                std::to_string(idx) + " of " + std::to_string(sys.size()));
      }
      if (++uses[idx] == 2) {
        report.violations.push_back({ViolationKind::partition_overlap, k, idx});
      }
      for (Point p : sys[idx].points()) {
        if (seen_in[p] == k) {
          report.violations.push_back({ViolationKind::intra_class_point_collision, k, idx, p});
        }
        seen_in[p] = k;
      }
    }
  }
  for (std::size_t i = 0; i < uses.size(); ++i) {
    if (uses[i] == 0) report.violations.push_back({ViolationKind::partition_gap, npos, i});
  }
  return report;
}

// A KSS(v,m) has floor(b(v)/m) classes.
inline bool is_kss(const SignalSet& ss) {
  if (!verify_signal_set(ss).ok()) {
    throw std::logic_error("is_kss: signal set does not verify");
  }
  if (ss.class_size() == 0) return false;
  return ss.class_count() == triple_count(ss.order()) / ss.class_size();
}

// Sorts each class's triples and renumbers the system so its triple list is
// the concatenation of the classes. Class order is kept.
inline SignalSet canonical_form(const SignalSet& ss) {
  std::vector<Triple> triples;
  std::vector<TripleClass> classes;
  triples.reserve(ss.system().size());
  classes.reserve(ss.class_count());
  for (std::size_t k = 0; k < ss.class_count(); ++k) {
    std::vector<Triple> cls = ss.class_triples(k);
    std::sort(cls.begin(), cls.end());
    TripleClass idx;
    idx.reserve(cls.size());
    for (const Triple& t : cls) {
      idx.push_back(triples.size());
      triples.push_back(t);
    }
    classes.push_back(std::move(idx));
  }
  return SignalSet(TripleSystem(ss.order(), std::move(triples)), ss.class_size(), std::move(classes));
}

}  // namespace kss
