#pragma once

// Deterministic constructions of complete Steiner triple systems.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kss/design.hpp"

namespace kss {

// Bose construction for v = 3n, n odd. Points (x, i) in Z_n x Z_3 are
// flattened to x + n*i. The quasigroup x o y = (x + y)(n + 1)/2 mod n is
// idempotent and commutative.
inline TripleSystem bose(std::uint64_t v) {
  if (v % 6 != 3) throw std::domain_error("bose: order must be 3 mod 6");
  const std::uint64_t n = v / 3;
  const std::uint64_t half = (n + 1) / 2;
  auto pt = [n](std::uint64_t x, std::uint64_t i) { return static_cast<Point>(x + n * (i % 3)); };

  std::vector<Triple> triples;
  triples.reserve(triple_count(v));
  for (std::uint64_t x = 0; x < n; ++x) triples.emplace_back(pt(x, 0), pt(x, 1), pt(x, 2));
  for (std::uint64_t i = 0; i < 3; ++i) {
    for (std::uint64_t x = 0; x < n; ++x) {
      for (std::uint64_t y = x + 1; y < n; ++y) {
        const std::uint64_t xy = (x + y) * half % n;
        triples.emplace_back(pt(x, i), pt(y, i), pt(xy, i + 1));
      }
    }
  }
  return TripleSystem(v, std::move(triples));
}

// Skolem construction for v = 6t + 1, with n = 2t. The half-idempotent
// commutative quasigroup on Z_n is x o y = sigma((x + y) mod n), where
// sigma(k) = k/2 for even k and t + (k-1)/2 for odd k, so x o x = x o (x+t)
// = x mod t. Points (x, i) in Z_n x Z_3 are flattened to x + n*i, and the
// extra point is v - 1.
inline TripleSystem skolem(std::uint64_t v) {
  if (v % 6 != 1) throw std::domain_error("skolem: order must be 1 mod 6");
  const std::uint64_t t = (v - 1) / 6;
  const std::uint64_t n = 2 * t;
  const Point inf = static_cast<Point>(v - 1);
  auto pt = [n](std::uint64_t x, std::uint64_t i) { return static_cast<Point>(x + n * (i % 3)); };
  auto op = [n, t](std::uint64_t x, std::uint64_t y) {
    const std::uint64_t k = (x + y) % n;
    return k % 2 == 0 ? k / 2 : t + (k - 1) / 2;
  };

  std::vector<Triple> triples;
  triples.reserve(triple_count(v));
  for (std::uint64_t x = 0; x < t; ++x) triples.emplace_back(pt(x, 0), pt(x, 1), pt(x, 2));
  for (std::uint64_t x = 0; x < t; ++x) {
    for (std::uint64_t i = 0; i < 3; ++i) triples.emplace_back(inf, pt(x + t, i), pt(x, i + 1));
  }
  for (std::uint64_t i = 0; i < 3; ++i) {
    for (std::uint64_t x = 0; x < n; ++x) {
      for (std::uint64_t y = x + 1; y < n; ++y) triples.emplace_back(pt(x, i), pt(y, i), pt(op(x, y), i + 1));
    }
  }
  return TripleSystem(v, std::move(triples));
}

// Develops base blocks modulo v.
inline TripleSystem cyclic_system(std::uint64_t v, const std::vector<Triple>& base) {
  std::vector<Triple> triples;
  for (const Triple& b : base) {
    for (std::uint64_t s = 0; s < v; ++s) {
      triples.emplace_back(static_cast<Point>((b.a + s) % v), static_cast<Point>((b.b + s) % v),
                           static_cast<Point>((b.c + s) % v));
    }
  }
  return TripleSystem(v, std::move(triples));
}

// Seed library. v = 7 is the Fano plane {0,1,3} mod 7 and v = 13 the cyclic
// system {0,1,4}, {0,2,7} mod 13; everything else comes from bose or skolem.
inline TripleSystem known_system(std::uint64_t v) {
  require_admissible(v, "known_system");
  if (v == 1) return TripleSystem(1, {});
  if (v == 3) return TripleSystem(3, {Triple(0, 1, 2)});
  if (v == 7) return cyclic_system(7, {Triple(0, 1, 3)});
  if (v == 13) return cyclic_system(13, {Triple(0, 1, 4), Triple(0, 2, 7)});
  return v % 6 == 3 ? bose(v) : skolem(v);
}

}  // namespace kss
