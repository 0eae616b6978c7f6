#include <gtest/gtest.h>

#include <random>

#include "kss/construct.hpp"
#include "kss/design.hpp"
#include "kss/search.hpp"
#include "oracle.hpp"

using namespace kss;

namespace {

TripleSystem fano() {
  return TripleSystem(7, {Triple(0, 1, 3), Triple(1, 2, 4), Triple(2, 3, 5), Triple(3, 4, 6), Triple(0, 4, 5),
                          Triple(1, 5, 6), Triple(0, 2, 6)});
}

// The four parallel classes of the affine plane of order 3 on Z_3 x Z_3.
SignalSet sts9_resolution() {
  auto p = [](int x, int y) { return static_cast<Point>(3 * x + y); };
  std::vector<Triple> ts;
  std::vector<TripleClass> classes;
  const int dirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, 2}};
  for (const auto& d : dirs) {
    TripleClass cls;
    std::set<std::set<Point>> seen;
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y) {
        std::set<Point> line;
        for (int t = 0; t < 3; ++t) line.insert(p((x + t * d[0]) % 3, (y + t * d[1]) % 3));
        if (!seen.insert(line).second) continue;
        auto it = line.begin();
        const Point a = *it++, b = *it++, c = *it;
        cls.push_back(ts.size());
        ts.emplace_back(a, b, c);
      }
    }
    classes.push_back(cls);
  }
  return SignalSet(TripleSystem(9, ts), 3, classes);
}

}  // namespace

TEST(Order, Admissible) {
  for (std::uint64_t v = 0; v < 100; ++v) EXPECT_EQ(admissible(v), v % 6 == 1 || v % 6 == 3) << v;
}

TEST(TripleCount, Examples) {
  EXPECT_EQ(triple_count(7), 7U);
  EXPECT_EQ(triple_count(9), 12U);
  EXPECT_EQ(triple_count(999), 166167U);
  EXPECT_EQ(triple_count(999997), 999997ULL * 999996ULL / 6);
  EXPECT_THROW(triple_count(8), std::domain_error);
  EXPECT_THROW(triple_count(11), std::domain_error);
}

TEST(MaxPpcSize, Examples) {
  EXPECT_EQ(max_ppc_size(7), 1U);
  EXPECT_EQ(max_ppc_size(9), 3U);
  EXPECT_EQ(max_ppc_size(13), 4U);
  EXPECT_EQ(max_ppc_size(15), 5U);
  EXPECT_EQ(max_ppc_size(19), 6U);
  EXPECT_THROW(max_ppc_size(10), std::domain_error);
  EXPECT_THROW(max_ppc_size(1), std::domain_error);
}

TEST(MaxPpcSize, MatchesBruteForce) {
  for (std::uint64_t v : {7, 9, 13}) {
    EXPECT_EQ(max_ppc_size(v), oracle::max_disjoint(known_system(v).triples())) << v;
  }
  EXPECT_EQ(max_ppc_size(13), oracle::max_disjoint(skolem(13).triples()));
}

TEST(MaxPpcSize, MatchesFormulaOracle) {
  for (std::uint64_t v = 7; v < 2000; ++v) {
    if (admissible(v)) {
      EXPECT_EQ(max_ppc_size(v), oracle::mu(v)) << v;
    }
  }
}

TEST(Triple, Canonical) {
  const Triple t(5, 1, 3);
  EXPECT_EQ(t.a, 1U);
  EXPECT_EQ(t.b, 3U);
  EXPECT_EQ(t.c, 5U);
  EXPECT_EQ(to_string(t), "1,3,5");
  EXPECT_THROW(Triple(1, 1, 2), std::invalid_argument);
  EXPECT_TRUE(t.meets(Triple(0, 2, 5)));
  EXPECT_FALSE(t.meets(Triple(0, 2, 4)));
}

TEST(VerifyTripleSystem, Fano) {
  const VerificationReport r = verify_triple_system(fano());
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.complete);
}

TEST(VerifyTripleSystem, DuplicatePair) {
  const VerificationReport r = verify_triple_system(TripleSystem(7, {Triple(0, 1, 2), Triple(0, 1, 3)}));
  ASSERT_EQ(r.violations.size(), 1U);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::duplicate_pair);
  EXPECT_EQ(r.violations[0].point_a, 0U);
  EXPECT_EQ(r.violations[0].point_b, 1U);
  EXPECT_EQ(r.violations[0].triple_index, 1U);
}

TEST(VerifyTripleSystem, EmptyAndRange) {
  const VerificationReport r = verify_triple_system(TripleSystem(9, {}));
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.complete);
  EXPECT_THROW(verify_triple_system(TripleSystem(7, {Triple(0, 1, 7)})), std::out_of_range);
}

TEST(VerifyTripleSystem, ListsEveryDuplicate) {
  const VerificationReport r =
      verify_triple_system(TripleSystem(9, {Triple(0, 1, 2), Triple(0, 1, 2), Triple(3, 4, 5)}));
  EXPECT_EQ(r.violations.size(), 3U);
}

TEST(VerifySignalSet, Sts9Resolution) {
  const SignalSet ss = sts9_resolution();
  const VerificationReport r = verify_signal_set(ss);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(is_kss(ss));
  EXPECT_TRUE(oracle::kss_ok(ss));
}

TEST(VerifySignalSet, MovedTriple) {
  const SignalSet good = sts9_resolution();
  auto classes = good.classes();
  classes[1].push_back(classes[0].back());
  classes[0].pop_back();
  const VerificationReport r = verify_signal_set(SignalSet(good.system(), 3, classes));
  EXPECT_TRUE(r.has(ViolationKind::oversize_class));
  EXPECT_TRUE(r.has(ViolationKind::undersize_class));
  EXPECT_TRUE(r.has(ViolationKind::intra_class_point_collision));

  classes = good.classes();
  classes[1][0] = classes[0][0];
  const VerificationReport r2 = verify_signal_set(SignalSet(good.system(), 3, classes));
  EXPECT_TRUE(r2.has(ViolationKind::partition_gap));
  EXPECT_TRUE(r2.has(ViolationKind::partition_overlap));
  EXPECT_TRUE(r2.has(ViolationKind::intra_class_point_collision));
}

TEST(VerifySignalSet, Collision) {
  const SignalSet ss(TripleSystem(7, {Triple(0, 1, 2), Triple(2, 3, 4)}), 2, {{0, 1}});
  const VerificationReport r = verify_signal_set(ss);
  ASSERT_EQ(r.violations.size(), 1U);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::intra_class_point_collision);
  EXPECT_EQ(r.violations[0].point_a, 2U);
  EXPECT_EQ(r.violations[0].class_index, 0U);
  EXPECT_EQ(r.violations[0].triple_index, 1U);
}

TEST(VerifySignalSet, BadIndexThrows) {
  const SignalSet ss(TripleSystem(7, {Triple(0, 1, 2)}), 1, {{3}});
  EXPECT_THROW(verify_signal_set(ss), std::out_of_range);
}

TEST(IsKss, Examples) {
  const SignalSet full = sts9_resolution();
  EXPECT_TRUE(is_kss(full));

  auto classes = full.classes();
  classes.pop_back();
  std::vector<Triple> ts;
  std::vector<TripleClass> renum;
  for (const auto& cls : classes) {
    TripleClass c;
    for (std::size_t i : cls) {
      c.push_back(ts.size());
      ts.push_back(full.system()[i]);
    }
    renum.push_back(c);
  }
  EXPECT_FALSE(is_kss(SignalSet(TripleSystem(9, ts), 3, renum)));

  const SignalSet bad(TripleSystem(7, {Triple(0, 1, 2), Triple(2, 3, 4)}), 2, {{0, 1}});
  EXPECT_THROW(is_kss(bad), std::logic_error);
}

TEST(IsKss, ThirteenFour) {
  const DecomposeResult r = orbit_decompose(13, 4, SearchParams{});
  ASSERT_TRUE(r.design);
  EXPECT_EQ(r.design->class_count(), 6U);
  EXPECT_EQ(r.design->system().size(), 24U);
  EXPECT_TRUE(is_kss(*r.design));
  EXPECT_TRUE(oracle::kss_ok(*r.design));
}

TEST(CanonicalForm, SortsWithinClass) {
  const SignalSet ss(TripleSystem(7, {Triple(2, 3, 5), Triple(0, 1, 3)}), 1, {{0}, {1}});
  const SignalSet two(TripleSystem(9, {Triple(2, 3, 5), Triple(0, 1, 4)}), 2, {{0, 1}});
  const SignalSet c = canonical_form(two);
  EXPECT_EQ(c.class_triples(0), (std::vector<Triple>{Triple(0, 1, 4), Triple(2, 3, 5)}));
  EXPECT_EQ(canonical_form(ss).class_triples(0), std::vector<Triple>{Triple(2, 3, 5)});
}

TEST(CanonicalForm, IdempotentAndVerificationInvariant) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t v = std::vector<std::uint64_t>{9, 13, 15, 19, 21}[gen() % 5];
    const std::size_t m = 1 + gen() % (v / 3);
    const TripleSystem sts = known_system(v);
    std::vector<std::size_t> idx(sts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), gen);
    std::vector<TripleClass> classes;
    // arbitrary, often invalid, grouping
    for (std::size_t i = 0; i + m <= idx.size(); i += m) classes.emplace_back(idx.begin() + i, idx.begin() + i + m);
    const SignalSet raw = signal_set_from_classes(sts, m, classes);
    const SignalSet once = canonical_form(raw);
    EXPECT_EQ(canonical_form(once), once);
    EXPECT_EQ(verify_signal_set(raw).ok(), verify_signal_set(once).ok());
    EXPECT_EQ(oracle::signal_set_ok(raw), oracle::signal_set_ok(once));
  }
}

TEST(SignalSetProperty, ClassesTouchThreeMPoints) {
  for (std::uint64_t v : {9, 15, 21, 27}) {
    const DecomposeResult r = orbit_decompose(v, v / 3, SearchParams{});
    ASSERT_TRUE(r.design) << v;
    const SignalSet& ss = *r.design;
    ASSERT_TRUE(verify_signal_set(ss).ok());
    EXPECT_EQ(ss.class_count() * ss.class_size(), ss.system().size());
    for (std::size_t k = 0; k < ss.class_count(); ++k) {
      std::set<Point> pts;
      for (const Triple& t : ss.class_triples(k)) pts.insert({t.a, t.b, t.c});
      EXPECT_EQ(pts.size(), 3 * ss.class_size());
    }
  }
}

TEST(Violation, Describe) {
  EXPECT_EQ(describe({ViolationKind::duplicate_pair, npos, 4, 0, 1}), "duplicate-pair triple=4 point=0 point2=1");
  EXPECT_EQ(describe({ViolationKind::undersize_class, 2}), "undersize-class class=2");
}
