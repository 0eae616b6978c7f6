#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace kss::detail {

// Fixed-width bit vector sized in 64-bit words.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  bool intersects(const BitVector& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & o.words_[k]) return true;
    }
    return false;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// splitmix64-seeded xorshift; identical streams on every platform, unlike
// the standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    for (int i = 0; i < 4; ++i) s_[i] = splitmix();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, n); n > 0.
  std::size_t below(std::size_t n) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(next()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t splitmix() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  std::uint64_t s_[4];
};

// FNV-1a, used for transcript fingerprints.
class Fnv1a {
 public:
  void add(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (x >> (8 * i)) & 0xff;
      h_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace kss::detail
