#pragma once

// Existence checkers for KSS(v,m), certificates, and the classifier.
//
// Letters: A..G are the published constructions, K the Kirkman triple
// system axiom KSS(v, v/3) for v = 3 mod 6, S a split of a known larger
// class size, W a registered search witness, ! a registered exhaustion.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kss/construct.hpp"
#include "kss/design.hpp"
#include "kss/design_io.hpp"
#include "kss/search.hpp"

namespace kss {

// ---------------------------------------------------------------------------
// Window bound

// floor((1/3) ((u-2)/u) (2 (v-6u+1)^2 / (2v + 6u^2 - 9u + 2))), evaluated in
// exact rationals. For u = 1 the expression is negative and the result is
// clamped to 0.
inline std::uint64_t chw_M(std::uint64_t u, std::uint64_t v) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (u == 0) throw std::domain_error("chw_M: u must be positive");
  if (v == 0) throw std::domain_error("chw_M: v must be positive");
  const cpp_int U(u), V(v);
  const cpp_rational x = cpp_rational(1, 3) * cpp_rational(U - 2, U) *
                         cpp_rational(2 * (V - 6 * U + 1) * (V - 6 * U + 1), 2 * V + 6 * U * U - 9 * U + 2);
  if (x <= 0) return 0;
  const cpp_int floor = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
  return floor.convert_to<std::uint64_t>();
}

inline bool chw_applicable(std::uint64_t u, std::uint64_t v) {
  if (u % 6 != 2 || u < 88 || !admissible(v)) return false;
  using boost::multiprecision::uint128_t;
  const uint128_t U(u);
  return uint128_t(v) >= std::max<uint128_t>(9 * U * U + 9 * U, 99 * U);
}

struct ChwBound {
  std::uint64_t u = 0;  // 0 when no u applies
  std::uint64_t M = 0;
};

// Best window bound over applicable u; ties keep the smallest u. 92 is the
// least u >= 88 with u = 2 mod 6, and applicability only shrinks as u grows.
inline ChwBound chw_best(std::uint64_t v) {
  ChwBound best;
  for (std::uint64_t u = 92; chw_applicable(u, v); u += 6) {
    const std::uint64_t M = chw_M(u, v);
    if (best.u == 0 || M > best.M) best = {u, M};
  }
  return best;
}

inline std::uint64_t chw_bound(std::uint64_t v) { return chw_best(v).M; }

// ---------------------------------------------------------------------------
// Certificates

struct TheoremA {
  std::uint64_t u = 0;
  std::uint64_t M = 0;
  bool operator==(const TheoremA&) const = default;
};
struct TheoremB {
  bool operator==(const TheoremB&) const = default;
};
struct TheoremC {
  bool operator==(const TheoremC&) const = default;
};
struct TheoremD {
  std::uint64_t source = 0;
  bool operator==(const TheoremD&) const = default;
};
struct TheoremE {
  bool operator==(const TheoremE&) const = default;
};
struct TheoremF {
  std::uint64_t g = 0;
  bool operator==(const TheoremF&) const = default;
};
struct GrCertificate {
  std::uint64_t g = 0, r = 0, d = 0, m = 0, q = 0, z = 0, N = 0;
  bool operator==(const GrCertificate&) const = default;
};
struct KirkmanAxiom {
  bool operator==(const KirkmanAxiom&) const = default;
};
struct Split {
  std::uint64_t base = 0;
  bool operator==(const Split&) const = default;
};
struct Witness {
  std::string file;
  bool operator==(const Witness&) const = default;
};
struct Impossible {
  std::string search = "backtrack";
  std::uint64_t nodes = 0;
  bool operator==(const Impossible&) const = default;
};

using CertificateBody = std::variant<TheoremA, TheoremB, TheoremC, TheoremD, TheoremE, TheoremF, GrCertificate,
                                     KirkmanAxiom, Split, Witness, Impossible>;

struct Certificate {
  std::uint64_t v = 0;
  std::uint64_t m = 0;
  CertificateBody body;

  char letter() const { return "ABCDEFGKSW!"[body.index()]; }
  bool operator==(const Certificate&) const = default;
};

class CertificateFormatError : public std::runtime_error {
 public:
  CertificateFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// `v m LETTER key=value ...` with keys in a fixed order per letter.
inline std::string to_line(const Certificate& c) {
  std::string s = std::to_string(c.v) + " " + std::to_string(c.m) + " " + c.letter();
  auto kv = [&s](const char* key, const std::string& value) { s += std::string(" ") + key + "=" + value; };
  auto num = [&kv](const char* key, std::uint64_t value) { kv(key, std::to_string(value)); };
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, TheoremA>) {
          num("u", b.u);
          num("M", b.M);
        } else if constexpr (std::is_same_v<T, TheoremD>) {
          num("source", b.source);
        } else if constexpr (std::is_same_v<T, TheoremF>) {
          num("g", b.g);
        } else if constexpr (std::is_same_v<T, GrCertificate>) {
          num("g", b.g);
          num("r", b.r);
          num("d", b.d);
          num("q", b.q);
          num("z", b.z);
          num("N", b.N);
        } else if constexpr (std::is_same_v<T, Split>) {
          num("base", b.base);
        } else if constexpr (std::is_same_v<T, Witness>) {
          kv("file", b.file);
        } else if constexpr (std::is_same_v<T, Impossible>) {
          kv("search", b.search);
          num("nodes", b.nodes);
        }
      },
      c.body);
  return s;
}

namespace detail {

inline std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t at = 0;
  while (at < line.size()) {
    const std::size_t next = std::min(line.find(' ', at), line.size());
    if (next == at) throw std::invalid_argument("empty field (doubled space?)");
    out.push_back(line.substr(at, next - at));
    at = next + 1;
    if (next + 1 == line.size()) throw std::invalid_argument("trailing space");
  }
  return out;
}

inline std::uint64_t to_u64(std::string_view s) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || (s.size() > 1 && s[0] == '0')) {
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  }
  return x;
}

}  // namespace detail

inline Certificate parse_certificate(std::string_view line, std::size_t line_no = 1) {
  try {
    const std::vector<std::string_view> w = detail::words(line);
    if (w.size() < 3 || w[2].size() != 1) throw std::invalid_argument("expected 'v m LETTER key=value ...'");
    Certificate c;
    c.v = detail::to_u64(w[0]);
    c.m = detail::to_u64(w[1]);
    const char letter = w[2][0];

    std::vector<std::string_view> keys;
    std::vector<std::string_view> values;
    for (std::size_t i = 3; i < w.size(); ++i) {
      const std::size_t eq = w[i].find('=');
      if (eq == std::string_view::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + std::string(w[i]) + "'");
      keys.push_back(w[i].substr(0, eq));
      values.push_back(w[i].substr(eq + 1));
    }
    auto expect = [&](std::initializer_list<const char*> names) {
      if (keys.size() != names.size()) throw std::invalid_argument(std::string("wrong fields for letter ") + letter);
      std::size_t i = 0;
      for (const char* n : names) {
        if (keys[i++] != n) throw std::invalid_argument(std::string("expected key '") + n + "'");
      }
    };
    auto num = [&](std::size_t i) { return detail::to_u64(values[i]); };

    switch (letter) {
      case 'A': expect({"u", "M"}); c.body = TheoremA{num(0), num(1)}; break;
      case 'B': expect({}); c.body = TheoremB{}; break;
      case 'C': expect({}); c.body = TheoremC{}; break;
      case 'D': expect({"source"}); c.body = TheoremD{num(0)}; break;
      case 'E': expect({}); c.body = TheoremE{}; break;
      case 'F': expect({"g"}); c.body = TheoremF{num(0)}; break;
      case 'G':
        expect({"g", "r", "d", "q", "z", "N"});
        c.body = GrCertificate{num(0), num(1), num(2), c.m, num(3), num(4), num(5)};
        break;
      case 'K': expect({}); c.body = KirkmanAxiom{}; break;
      case 'S': expect({"base"}); c.body = Split{num(0)}; break;
      case 'W':
        expect({"file"});
        if (values[0].empty()) throw std::invalid_argument("empty file name");
        c.body = Witness{std::string(values[0])};
        break;
      case '!':
        expect({"search", "nodes"});
        c.body = Impossible{std::string(values[0]), num(1)};
        break;
      default: throw std::invalid_argument(std::string("unknown letter '") + letter + "'");
    }
    return c;
  } catch (const std::invalid_argument& e) {
    throw CertificateFormatError(line_no, e.what());
  }
}

// ---------------------------------------------------------------------------
// Checkers

inline std::optional<Certificate> theorem_a(std::uint64_t v, std::uint64_t m) {
  if (m == 0) return std::nullopt;
  const ChwBound best = chw_best(v);
  if (best.u == 0 || m > best.M) return std::nullopt;
  return Certificate{v, m, TheoremA{best.u, best.M}};
}

inline std::optional<Certificate> theorem_b(std::uint64_t v, std::uint64_t m) {
  if (!admissible(v) || v < 14 || v > 32 || m < 1 || m > v / 3) return std::nullopt;
  return Certificate{v, m, TheoremB{}};
}

inline std::optional<Certificate> theorem_c(std::uint64_t v) {
  if (!admissible(v) || v < 19 || v == 21 || v == 27 || triple_count(v) % 4 != 0) return std::nullopt;
  return Certificate{v, 4, TheoremC{}};
}

inline std::optional<Certificate> theorem_d(std::uint64_t source) {
  if (source % 6 != 3 || source <= 9) return std::nullopt;
  return Certificate{4 * source - 3, source - 1, TheoremD{source}};
}

inline std::optional<Certificate> theorem_d_match(std::uint64_t v, std::uint64_t m) {
  if ((v + 3) % 4 != 0) return std::nullopt;
  auto c = theorem_d((v + 3) / 4);
  if (!c || c->m != m) return std::nullopt;
  return c;
}

inline std::optional<Certificate> theorem_e(std::uint64_t v) {
  if (v % 6 != 1 || v < 7) return std::nullopt;
  return Certificate{v, (v - 1) / 6, TheoremE{}};
}

inline std::optional<Certificate> theorem_f(std::uint64_t g) {
  if (g % 6 != 3) return std::nullopt;
  return Certificate{g * g, g * (g - 1) / 3, TheoremF{g}};
}

inline std::optional<Certificate> theorem_f_match(std::uint64_t v, std::uint64_t m) {
  std::uint64_t g = 0;
  while ((g + 1) * (g + 1) <= v) ++g;
  if (g * g != v) return std::nullopt;
  auto c = theorem_f(g);
  if (!c || c->m != m) return std::nullopt;
  return c;
}

// Outcome of the product-construction arithmetic for one (g, r, d).
struct GrEvaluation {
  bool well_formed = false;  // g, r, d side conditions hold
  bool accepted = false;
  std::string reason;        // why it was rejected
  GrCertificate cert;        // q, z, N filled in when computable
};

inline GrEvaluation evaluate_gr(std::uint64_t g, std::uint64_t r, std::uint64_t d) {
  GrEvaluation e;
  e.cert.g = g;
  e.cert.r = r;
  e.cert.d = d;
  const std::uint64_t v = g * r;
  if (g % 6 != 3 || r % 6 != 3) {
    e.reason = "g and r must be 3 mod 6";
    return e;
  }
  if (d < 3 || d > r || (r * (v - 1) / 2) % d != 0 || (d * g) % r != 0) {
    e.reason = "d violates 3 <= d <= r, d | r(v-1)/2, r | dg";
    return e;
  }
  e.well_formed = true;
  const std::uint64_t m = d * g / 3;
  e.cert.m = m;
  const std::uint64_t rest = v - 3 * m;
  e.cert.q = rest / (3 * (d / 3));
  std::uint64_t z = 0;
  while (z < r && (3 * d * (e.cert.q + 1 + z)) % r != 0) ++z;
  if (z == r) {
    e.reason = "no z in [0, r) with 3d(q+1+z) = 0 mod r";
    return e;
  }
  e.cert.z = z;
  const std::uint64_t lhs = d * (e.cert.q + 1 + z);
  if (lhs < rest || (3 * (lhs - rest)) % r != 0) {
    e.reason = "N is not a nonnegative integer";
    return e;
  }
  e.cert.N = 3 * (lhs - rest) / r;
  const std::uint64_t cap = 3 * ((g - 1) / (r - 1));
  if (e.cert.N > cap) {
    e.reason = "N = " + std::to_string(e.cert.N) + " exceeds " + std::to_string(cap);
    return e;
  }
  e.accepted = true;
  return e;
}

// Smallest (r, d) accepted for v = g r and m = dg/3.
inline std::optional<GrCertificate> theorem_g(std::uint64_t v, std::uint64_t m) {
  if (!admissible(v) || m == 0) return std::nullopt;
  for (std::uint64_t r = 3; r <= v; r += 6) {
    if (v % r != 0) continue;
    const std::uint64_t g = v / r;
    if (g % 6 != 3 || (3 * m) % g != 0) continue;
    const std::uint64_t d = 3 * m / g;
    const GrEvaluation e = evaluate_gr(g, r, d);
    if (e.accepted && e.cert.m == m) return e.cert;
  }
  return std::nullopt;
}

inline std::optional<Certificate> theorem_g_cert(std::uint64_t v, std::uint64_t m) {
  auto c = theorem_g(v, m);
  if (!c) return std::nullopt;
  return Certificate{v, m, *c};
}

inline std::optional<Certificate> kirkman_axiom(std::uint64_t v, std::uint64_t m) {
  if (v % 6 != 3 || m != v / 3) return std::nullopt;
  return Certificate{v, m, KirkmanAxiom{}};
}

// Cutting each class of a KSS(v,M) into M/m chunks gives floor(b/m) classes
// exactly when b mod M < m.
inline bool split_valid(std::uint64_t v, std::uint64_t M, std::uint64_t m) {
  return m >= 1 && M >= m && M % m == 0 && triple_count(v) % M < m;
}

// ---------------------------------------------------------------------------
// Status and registry

enum class StatusKind { known, unknown, impossible };

inline const char* to_string(StatusKind k) {
  switch (k) {
    case StatusKind::known: return "known";
    case StatusKind::unknown: return "unknown";
    case StatusKind::impossible: return "impossible";
  }
  return "?";
}

struct Status {
  StatusKind kind = StatusKind::unknown;
  std::optional<Certificate> certificate;

  static Status known(Certificate c) { return {StatusKind::known, std::move(c)}; }
  static Status impossible(Certificate c) { return {StatusKind::impossible, std::move(c)}; }
  static Status unknown() { return {}; }

  char letter() const { return certificate ? certificate->letter() : '?'; }
  bool operator==(const Status&) const = default;
};

// Search witnesses and exhaustion records. Reads are shared, registration is
// exclusive.
class CertificateRegistry {
 public:
  CertificateRegistry() = default;
  CertificateRegistry(const CertificateRegistry& o) : entries_(o.snapshot()) {}
  CertificateRegistry& operator=(const CertificateRegistry& o) {
    if (this != &o) {
      auto copy = o.snapshot();
      std::unique_lock lock(mutex_);
      entries_ = std::move(copy);
    }
    return *this;
  }

  // Only W and ! certificates can be registered; the rest are derived.
  void add(Certificate c) {
    if (!std::holds_alternative<Witness>(c.body) && !std::holds_alternative<Impossible>(c.body)) {
      throw std::invalid_argument(std::string("registry: letter ") + c.letter() + " is derived, not registered");
    }
    std::unique_lock lock(mutex_);
    entries_[{c.v, c.m}] = std::move(c);
  }

  std::optional<Certificate> find(std::uint64_t v, std::uint64_t m) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find({v, m});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  std::vector<Certificate> all() const {
    std::vector<Certificate> out;
    for (auto& [key, c] : snapshot()) out.push_back(c);
    return out;
  }

  std::string serialize() const {
    std::string out;
    for (const Certificate& c : all()) out += to_line(c) + "\n";
    return out;
  }

  // Blank lines and lines starting with '#' are ignored. Relative witness
  // paths are resolved against `base_dir` when it is non-empty.
  static CertificateRegistry parse(std::string_view text, const std::string& base_dir = "") {
    CertificateRegistry reg;
    std::size_t line_no = 0;
    std::size_t at = 0;
    while (at < text.size()) {
      ++line_no;
      const std::size_t nl = text.find('\n', at);
      std::string_view line = text.substr(at, nl == std::string_view::npos ? std::string_view::npos : nl - at);
      at = nl == std::string_view::npos ? text.size() : nl + 1;
      if (line.empty() || line[0] == '#') continue;
      if (line.find('\r') != std::string_view::npos) throw CertificateFormatError(line_no, "carriage return not allowed");
      Certificate c = parse_certificate(line, line_no);
      if (auto* w = std::get_if<Witness>(&c.body); w && !base_dir.empty()) {
        const std::filesystem::path p(w->file);
        if (p.is_relative()) w->file = (std::filesystem::path(base_dir) / p).lexically_normal().string();
      }
      try {
        reg.add(std::move(c));
      } catch (const std::invalid_argument& e) {
        throw CertificateFormatError(line_no, e.what());
      }
    }
    return reg;
  }

  static CertificateRegistry load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), std::filesystem::path(path).parent_path().string());
  }

 private:
  std::map<std::pair<std::uint64_t, std::uint64_t>, Certificate> snapshot() const {
    std::shared_lock lock(mutex_);
    return entries_;
  }

  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Certificate> entries_;
};

// Exhaustion over the unique STS(v) for v in {7, 9}.
inline std::optional<Certificate> exhaust_small(std::uint64_t v, std::uint64_t m) {
  if (v != 7 && v != 9) return std::nullopt;
  const DecomposeResult r = backtrack_decompose(known_system(v), m, SearchParams{});
  if (r.status != SearchStatus::exhausted) return std::nullopt;
  return Certificate{v, m, Impossible{"backtrack", r.transcript.nodes}};
}

// Exhaustion records for every cell of v in {7, 9} that has no KSS.
inline CertificateRegistry default_registry() {
  CertificateRegistry reg;
  for (std::uint64_t v : {7, 9}) {
    for (std::uint64_t m = 1; m <= max_ppc_size(v); ++m) {
      if (auto c = exhaust_small(v, m)) reg.add(*c);
    }
  }
  return reg;
}

// ---------------------------------------------------------------------------
// Classification

namespace detail {

inline void check_cell(std::uint64_t v, std::uint64_t m) {
  require_admissible(v, "classify");
  if (v < 3) throw std::domain_error("classify: STS(1) has no triples");
  if (m < 1 || m > max_ppc_size(v)) {
    throw std::domain_error("classify: m=" + std::to_string(m) + " outside 1.." + std::to_string(max_ppc_size(v)) +
                            " for v=" + std::to_string(v));
  }
}

inline std::optional<Certificate> theorem_match(std::uint64_t v, std::uint64_t m, std::uint64_t chw) {
  if (chw > 0 && m <= chw) return theorem_a(v, m);
  if (auto c = theorem_b(v, m)) return c;
  if (m == 4) {
    if (auto c = theorem_c(v)) return c;
  }
  if (auto c = theorem_d_match(v, m)) return c;
  if (auto c = theorem_e(v); c && c->m == m) return c;
  if (auto c = theorem_f_match(v, m)) return c;
  if (auto c = theorem_g_cert(v, m)) return c;
  return kirkman_axiom(v, m);
}

// `larger(M)` is the status of (v, M) for multiples M > m.
template <typename Lookup>
Status resolve(std::uint64_t v, std::uint64_t m, std::uint64_t chw, const CertificateRegistry& reg, Lookup larger) {
  const std::optional<Certificate> registered = reg.find(v, m);
  if (registered && std::holds_alternative<Impossible>(registered->body)) return Status::impossible(*registered);
  if (auto c = theorem_match(v, m, chw)) return Status::known(*c);
  for (std::uint64_t M = max_ppc_size(v) / m * m; M > m; M -= m) {
    if (split_valid(v, M, m) && larger(M).kind == StatusKind::known) return Status::known({v, m, Split{M}});
  }
  if (registered) return Status::known(*registered);
  return Status::unknown();
}

}  // namespace detail

// Registered exhaustion first (it overrides the g = 3 case of letter F),
// then A..G, K, splits from the largest known multiple, registered
// witnesses; otherwise unknown.
inline Status classify(std::uint64_t v, std::uint64_t m, const CertificateRegistry& reg) {
  detail::check_cell(v, m);
  const std::uint64_t chw = chw_bound(v);
  const std::uint64_t top = max_ppc_size(v) / m;
  std::vector<Status> by_multiple(top + 1);
  for (std::uint64_t k = top; k >= 1; --k) {
    by_multiple[k] = detail::resolve(v, k * m, chw, reg, [&](std::uint64_t M) { return by_multiple[M / m]; });
  }
  return by_multiple[1];
}

// Statuses for m = 1..mu(v); element m-1 is classify(v, m).
inline std::vector<Status> classify_order(std::uint64_t v, const CertificateRegistry& reg) {
  detail::check_cell(v, 1);
  const std::uint64_t chw = chw_bound(v);
  const std::uint64_t mu = max_ppc_size(v);
  std::vector<Status> out(mu);
  for (std::uint64_t m = mu; m >= 1; --m) {
    out[m - 1] = detail::resolve(v, m, chw, reg, [&](std::uint64_t M) { return out[M - 1]; });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay

// Re-checks a certificate's side conditions from scratch. Split bases are
// re-classified against `reg`; witness files are re-read and re-verified;
// exhaustion records are re-run.
inline bool replay(const Certificate& c, const CertificateRegistry& reg) {
  const std::uint64_t v = c.v, m = c.m;
  if (!admissible(v) || v < 3 || m < 1 || m > max_ppc_size(v)) return false;
  return std::visit(
      [&](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, TheoremA>) {
          return chw_applicable(b.u, v) && chw_M(b.u, v) == b.M && m <= b.M;
        } else if constexpr (std::is_same_v<T, TheoremB>) {
          return theorem_b(v, m).has_value();
        } else if constexpr (std::is_same_v<T, TheoremC>) {
          return m == 4 && theorem_c(v).has_value();
        } else if constexpr (std::is_same_v<T, TheoremD>) {
          auto d = theorem_d(b.source);
          return d && d->v == v && d->m == m;
        } else if constexpr (std::is_same_v<T, TheoremE>) {
          auto e = theorem_e(v);
          return e && e->m == m;
        } else if constexpr (std::is_same_v<T, TheoremF>) {
          auto f = theorem_f(b.g);
          return f && f->v == v && f->m == m;
        } else if constexpr (std::is_same_v<T, GrCertificate>) {
          // Any z in [0, r) satisfying the congruence is accepted here.
          if (b.g * b.r != v || b.m != m || b.g % 6 != 3 || b.r % 6 != 3) return false;
          if (b.d < 3 || b.d > b.r || (b.r * (v - 1) / 2) % b.d != 0 || (b.d * b.g) % b.r != 0) return false;
          if (b.d * b.g != 3 * m) return false;
          const std::uint64_t rest = v - 3 * m;
          if (b.q != rest / (3 * (b.d / 3)) || b.z >= b.r || (3 * b.d * (b.q + 1 + b.z)) % b.r != 0) return false;
          const std::uint64_t lhs = b.d * (b.q + 1 + b.z);
          if (lhs < rest || b.r * b.N != 3 * (lhs - rest)) return false;
          return b.N <= 3 * ((b.g - 1) / (b.r - 1));
        } else if constexpr (std::is_same_v<T, KirkmanAxiom>) {
          return kirkman_axiom(v, m).has_value();
        } else if constexpr (std::is_same_v<T, Split>) {
          return b.base <= max_ppc_size(v) && split_valid(v, b.base, m) && b.base > m &&
                 classify(v, b.base, reg).kind == StatusKind::known;
        } else if constexpr (std::is_same_v<T, Witness>) {
          try {
            const SignalSet ss = read_design_file(b.file);
            return ss.order() == v && ss.class_size() == m && is_kss(ss);
          } catch (const std::exception&) {
            return false;
          }
        } else {
          auto again = exhaust_small(v, m);
          return b.search == "backtrack" && again && std::get<Impossible>(again->body).nodes == b.nodes;
        }
      },
      c.body);
}

}  // namespace kss
