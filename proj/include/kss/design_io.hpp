#pragma once

// Design files:
//
//   KSS v=<v> m=<m> s=<s>
//   a,b,c a,b,c ...        (one line per class, m triples, points ascending)
//
// ASCII, LF line endings, 0-based points, classes in listed order.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kss/design.hpp"

namespace kss {

class DesignParseError : public std::runtime_error {
 public:
  DesignParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::string write_design(const SignalSet& ss) {
  const VerificationReport report = verify_signal_set(ss);
  if (!report.ok()) {
    throw std::invalid_argument("write_design: signal set does not verify (" + describe(report.violations.front()) + ")");
  }
  std::string out = "KSS v=" + std::to_string(ss.order()) + " m=" + std::to_string(ss.class_size()) +
                    " s=" + std::to_string(ss.class_count()) + "\n";
  for (std::size_t k = 0; k < ss.class_count(); ++k) {
    std::vector<Triple> cls = ss.class_triples(k);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i > 0) out += ' ';
      out += to_string(cls[i]);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::uint64_t parse_number(std::string_view text, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  if (text.empty() || (text.size() > 1 && text[0] == '0')) {
    throw DesignParseError(line, std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DesignParseError(line, std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

inline std::uint64_t parse_field(std::string_view token, std::string_view key, std::size_t line) {
  if (token.substr(0, key.size()) != key) {
    throw DesignParseError(line, "expected '" + std::string(key) + "<n>' in header, got '" + std::string(token) + "'");
  }
  return parse_number(token.substr(key.size()), line, "header value");
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t at = 0;
  for (;;) {
    const std::size_t next = text.find(sep, at);
    out.push_back(text.substr(at, next - at));
    if (next == std::string_view::npos) return out;
    at = next + 1;
  }
}

}  // namespace detail

// Parses and validates a design file. Every problem is reported as a
// DesignParseError carrying the 1-based line it was found on.
inline SignalSet read_design(std::string_view text) {
  if (text.find('\r') != std::string_view::npos) {
    const std::size_t at = text.find('\r');
    throw DesignParseError(1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + at, '\n')),
                           "carriage return not allowed");
  }
  if (text.empty() || text.back() != '\n') {
    throw DesignParseError(1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
                           "file must end with a newline");
  }
  std::vector<std::string_view> lines = detail::split(text.substr(0, text.size() - 1), '\n');

  const std::vector<std::string_view> header = detail::split(lines[0], ' ');
  if (header.size() != 4 || header[0] != "KSS") {
    throw DesignParseError(1, "expected header 'KSS v=<v> m=<m> s=<s>'");
  }
  const std::uint64_t v = detail::parse_field(header[1], "v=", 1);
  const std::uint64_t m = detail::parse_field(header[2], "m=", 1);
  const std::uint64_t s = detail::parse_field(header[3], "s=", 1);
  if (v > std::numeric_limits<Point>::max()) throw DesignParseError(1, "order too large");
  if (m == 0) throw DesignParseError(1, "class size must be positive");

  std::vector<Triple> triples;
  std::vector<TripleClass> classes;
  std::vector<std::size_t> line_of_triple;
  for (std::size_t k = 0; k < s && k + 1 < lines.size(); ++k) {
    const std::size_t line = k + 2;
    if (lines[k + 1].empty()) throw DesignParseError(line, "empty line");
    const std::vector<std::string_view> tokens = detail::split(lines[k + 1], ' ');
    if (tokens.size() != m) {
      throw DesignParseError(line, "class has " + std::to_string(tokens.size()) + " triples, expected " +
                                       std::to_string(m));
    }
    TripleClass cls;
    for (std::string_view token : tokens) {
      const std::vector<std::string_view> parts = detail::split(token, ',');
      if (parts.size() != 3) throw DesignParseError(line, "malformed triple '" + std::string(token) + "'");
      std::uint64_t pt[3];
      for (int i = 0; i < 3; ++i) {
        pt[i] = detail::parse_number(parts[i], line, "point");
        if (pt[i] >= v) {
          throw DesignParseError(line, "point " + std::to_string(pt[i]) + " out of range for v=" + std::to_string(v));
        }
      }
      if (!(pt[0] < pt[1] && pt[1] < pt[2])) {
        throw DesignParseError(line, "triple '" + std::string(token) + "' is not strictly ascending");
      }
      cls.push_back(triples.size());
      line_of_triple.push_back(line);
      triples.emplace_back(static_cast<Point>(pt[0]), static_cast<Point>(pt[1]), static_cast<Point>(pt[2]));
    }
    classes.push_back(std::move(cls));
  }
  if (lines.size() - 1 != s) {
    // a missing class is reported where it should start, an extra one where it does
    throw DesignParseError(std::min<std::size_t>(lines.size(), s + 1) + 1, "header declares " + std::to_string(s) +
                                                                             " classes, file has " +
                                                                             std::to_string(lines.size() - 1));
  }

  SignalSet ss(TripleSystem(v, std::move(triples)), m, std::move(classes));
  const VerificationReport report = verify_signal_set(ss);
  if (!report.ok()) {
    const Violation& x = report.violations.front();
    const std::size_t line = x.triple_index != npos ? line_of_triple[x.triple_index]
                             : x.class_index != npos ? x.class_index + 2
                                                     : 1;
    throw DesignParseError(line, "verification failed: " + describe(x));
  }
  return ss;
}

inline SignalSet read_design_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_design(buf.str());
}

inline void write_design_file(const std::string& path, const SignalSet& ss) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << write_design(ss);
}

}  // namespace kss
