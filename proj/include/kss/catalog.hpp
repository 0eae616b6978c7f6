#pragma once

// Existence catalog over all admissible 7 <= v <= v_max, 1 <= m <= mu(v).

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kss/theorems.hpp"

namespace kss {

// exact: omit (v,m) when a known KSS(v,M), M > m, splits down to it.
// loose: omit whenever m | M for a known M > m.
enum class OmissionMode { exact, loose };

inline const char* to_string(OmissionMode mode) { return mode == OmissionMode::exact ? "exact" : "loose"; }

struct CatalogEntry {
  std::uint64_t v = 0;
  std::uint64_t m = 0;
  Status status;
  bool omitted = false;
};

struct Catalog {
  std::uint64_t v_max = 0;
  OmissionMode mode = OmissionMode::exact;
  std::vector<CatalogEntry> entries;
};

inline std::vector<CatalogEntry> catalog_row(std::uint64_t v, OmissionMode mode, const CertificateRegistry& reg) {
  const std::vector<Status> statuses = classify_order(v, reg);
  const std::uint64_t b = triple_count(v);
  std::vector<CatalogEntry> row;
  row.reserve(statuses.size());
  for (std::uint64_t m = 1; m <= statuses.size(); ++m) {
    bool omitted = false;
    for (std::uint64_t M = 2 * m; M <= statuses.size() && !omitted; M += m) {
      omitted = statuses[M - 1].kind == StatusKind::known && (mode == OmissionMode::loose || b % M < m);
    }
    row.push_back({v, m, statuses[m - 1], omitted});
  }
  return row;
}

// Rows are computed on up to `threads` workers (0 = hardware concurrency);
// the result does not depend on the thread count.
inline Catalog build_catalog(std::uint64_t v_max, OmissionMode mode, const CertificateRegistry& reg,
                             unsigned threads = 0) {
  if (v_max < 7) throw std::domain_error("build_catalog: v_max must be at least 7");
  std::vector<std::uint64_t> orders;
  for (std::uint64_t v = 7; v <= v_max; ++v) {
    if (admissible(v)) orders.push_back(v);
  }
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(orders.size()));

  std::vector<std::vector<CatalogEntry>> rows(orders.size());
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < orders.size(); i += threads) rows[i] = catalog_row(orders[i], mode, reg);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Catalog c{v_max, mode, {}};
  for (auto& row : rows) c.entries.insert(c.entries.end(), row.begin(), row.end());
  return c;
}

enum class CatalogFormat { txt, csv, json };

inline CatalogFormat parse_catalog_format(const std::string& name) {
  if (name == "txt") return CatalogFormat::txt;
  if (name == "csv") return CatalogFormat::csv;
  if (name == "json") return CatalogFormat::json;
  throw std::invalid_argument("unknown catalog format '" + name + "'");
}

// txt lists non-omitted cells as `v m X`; csv and json list every cell with
// its certificate line.
inline std::string render(const Catalog& c, CatalogFormat format) {
  std::string out;
  switch (format) {
    case CatalogFormat::txt:
      for (const CatalogEntry& e : c.entries) {
        if (!e.omitted) out += std::to_string(e.v) + " " + std::to_string(e.m) + " " + e.status.letter() + "\n";
      }
      return out;
    case CatalogFormat::csv:
      if (c.entries.empty()) return out;
      out = "v,m,status,letter,omitted,certificate\n";
      for (const CatalogEntry& e : c.entries) {
        out += std::to_string(e.v) + "," + std::to_string(e.m) + "," + to_string(e.status.kind) + "," +
               e.status.letter() + "," + (e.omitted ? "1" : "0") + "," +
               (e.status.certificate ? to_line(*e.status.certificate) : "") + "\n";
      }
      return out;
    case CatalogFormat::json: {
      if (c.entries.empty()) return out;
      nlohmann::ordered_json doc;
      doc["v_max"] = c.v_max;
      doc["mode"] = to_string(c.mode);
      doc["entries"] = nlohmann::ordered_json::array();
      for (const CatalogEntry& e : c.entries) {
        nlohmann::ordered_json j;
        j["v"] = e.v;
        j["m"] = e.m;
        j["status"] = to_string(e.status.kind);
        j["letter"] = std::string(1, e.status.letter());
        j["omitted"] = e.omitted;
        j["certificate"] = e.status.certificate ? nlohmann::ordered_json(to_line(*e.status.certificate))
                                                : nlohmann::ordered_json(nullptr);
        doc["entries"].push_back(std::move(j));
      }
      return doc.dump(1) + "\n";
    }
  }
  return out;
}

}  // namespace kss
