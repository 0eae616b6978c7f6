#include <gtest/gtest.h>

#include "kss/construct.hpp"
#include "oracle.hpp"

using namespace kss;

TEST(Bose, Examples) {
  const TripleSystem s9 = bose(9);
  EXPECT_EQ(s9.size(), 12U);
  EXPECT_TRUE(verify_triple_system(s9).ok());
  EXPECT_TRUE(s9.complete());
  const TripleSystem s15 = bose(15);
  EXPECT_EQ(s15.size(), 35U);
  EXPECT_TRUE(verify_triple_system(s15).complete);
  EXPECT_THROW(bose(7), std::domain_error);
  EXPECT_THROW(bose(13), std::domain_error);
}

TEST(Bose, Layout) {
  // vertical triples first, points (x, i) at x + n i
  const TripleSystem s15 = bose(15);
  for (Point x = 0; x < 5; ++x) EXPECT_EQ(s15[x], Triple(x, x + 5, x + 10));
}

TEST(Skolem, Examples) {
  const TripleSystem s7 = skolem(7);
  EXPECT_EQ(s7.size(), 7U);
  EXPECT_TRUE(oracle::complete_sts(7, s7.triples()));
  const TripleSystem s13 = skolem(13);
  EXPECT_EQ(s13.size(), 26U);
  EXPECT_TRUE(oracle::complete_sts(13, s13.triples()));
  EXPECT_THROW(skolem(9), std::domain_error);
}

TEST(KnownSystem, Examples) {
  EXPECT_EQ(known_system(7).size(), 7U);
  EXPECT_EQ(known_system(21).size(), 70U);
  EXPECT_EQ(known_system(25).size(), 100U);
  EXPECT_THROW(known_system(11), std::domain_error);
}

TEST(KnownSystem, CompleteUpTo99) {
  for (std::uint64_t v = 1; v <= 99; ++v) {
    if (!admissible(v)) continue;
    const TripleSystem t = known_system(v);
    const VerificationReport r = verify_triple_system(t);
    EXPECT_TRUE(r.ok()) << v;
    EXPECT_TRUE(r.complete) << v;
    EXPECT_EQ(t.size(), v * (v - 1) / 6) << v;
    EXPECT_TRUE(oracle::complete_sts(v, t.triples())) << v;
  }
}

TEST(Constructions, CompleteUpTo99) {
  for (std::uint64_t v = 7; v <= 99; v += 6) EXPECT_TRUE(oracle::complete_sts(v, skolem(v).triples())) << v;
  for (std::uint64_t v = 9; v <= 99; v += 6) EXPECT_TRUE(oracle::complete_sts(v, bose(v).triples())) << v;
}

TEST(Constructions, Deterministic) {
  for (std::uint64_t v : {7, 9, 13, 15, 31, 45, 97}) EXPECT_EQ(known_system(v), known_system(v)) << v;
  EXPECT_EQ(bose(21), bose(21));
  EXPECT_EQ(skolem(19), skolem(19));
}

TEST(KnownSystem, FanoIsCyclic) {
  EXPECT_EQ(known_system(7), cyclic_system(7, {Triple(0, 1, 3)}));
}
