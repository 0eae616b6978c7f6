#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure or
// unknown status, 2 usage error, 3 search inconclusive or exhausted.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kss/catalog.hpp"
#include "kss/construct.hpp"
#include "kss/design_io.hpp"
#include "kss/search.hpp"
#include "kss/theorems.hpp"

namespace kss {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2, exit_inconclusive = 3 };

namespace detail {

inline CertificateRegistry cli_registry(const std::string& path) {
  CertificateRegistry reg = default_registry();
  if (!path.empty()) {
    for (const Certificate& c : CertificateRegistry::load(path).all()) reg.add(c);
  }
  return reg;
}

inline bool emit(const std::string& text, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

struct ConstructArgs {
  std::uint64_t v = 0, m = 0, seed = 1;
  std::string method = "auto";
  std::string out;
  std::uint64_t node_limit = 20'000'000;
  std::uint64_t restart_limit = 100;
  double seconds = 60.0;
  std::size_t window = 0;
  std::string registry;
};

inline int run_construct(const ConstructArgs& a, std::ostream& out, std::ostream& err) {
  if (!admissible(a.v) || a.v < 7) {
    err << "error: v must be admissible (1 or 3 mod 6) and at least 7\n";
    return exit_usage;
  }
  if (a.m < 1 || a.m > a.v / 3) {
    err << "error: m must lie in 1.." << a.v / 3 << "\n";
    return exit_usage;
  }
  SearchParams p;
  p.seed = a.seed;
  p.node_limit = a.node_limit;
  p.restart_limit = a.restart_limit;
  p.time_limit = std::chrono::milliseconds(static_cast<long long>(a.seconds * 1000));
  if (p.node_limit == 0 || p.restart_limit == 0 || p.time_limit.count() <= 0) {
    err << "error: limits must be positive\n";
    return exit_usage;
  }

  std::string method = a.method;
  if (method == "theorem") {
    if (a.m > max_ppc_size(a.v)) {
      err << "unknown: m exceeds mu(" << a.v << ")\n";
      return exit_failure;
    }
    const Status st = classify(a.v, a.m, cli_registry(a.registry));
    if (st.kind != StatusKind::known) {
      err << to_string(st.kind) << (st.certificate ? ": " + to_line(*st.certificate) : std::string()) << "\n";
      return exit_failure;
    }
    err << "certificate: " << to_line(*st.certificate) << "\n";
    method = "auto";
  }

  const TripleSystem sts = known_system(a.v);
  DecomposeResult r;
  if (method == "auto") {
    r = auto_decompose(a.v, a.m, p);
  } else if (method == "backtrack") {
    r = backtrack_decompose(sts, a.m, p);
  } else if (method == "greedy") {
    r = greedy_decompose(sts, a.m, p);
  } else if (method == "local") {
    r = local_search_decompose(sts, a.m, p);
  } else if (method == "hill") {
    r = hill_climb_decompose(a.v, a.m, p);
  } else if (method == "orbit") {
    if (!orbit_applies(a.v, a.m)) {
      err << "error: no cyclic layout for v=" << a.v << " m=" << a.m << "\n";
      return exit_usage;
    }
    r = orbit_decompose(a.v, a.m, p);
  } else {
    const OrderResult o = order_triples(sts, a.window == 0 ? a.m : a.window, p);
    r.status = o.status;
    r.transcript = o.transcript;
    if (o.ordering) {
      if (o.ordering->window < a.m) {
        err << "error: window " << o.ordering->window << " is smaller than m=" << a.m << "\n";
        return exit_usage;
      }
      r.design = kss_from_ordering(*o.ordering, a.m);
    }
  }
  err << to_string(r.transcript) << "\n";

  if (!r.design) {
    if (r.status == SearchStatus::exhausted) {
      err << "exhausted: nonexistent over STS(" << a.v << ")\n";
    } else {
      err << "inconclusive: no KSS(" << a.v << "," << a.m << ") found within limits\n";
    }
    return exit_inconclusive;
  }
  const SignalSet ss = canonical_form(*r.design);
  if (!verify_signal_set(ss).ok() || !is_kss(ss)) {
    err << "internal error: search result does not verify\n";
    return exit_failure;
  }
  return emit(write_design(ss), a.out, out, err) ? exit_ok : exit_failure;
}

inline int run_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const SignalSet ss = read_design_file(path);
    if (!is_kss(ss)) {
      err << "not a KSS: " << ss.class_count() << " classes, need " << triple_count(ss.order()) / ss.class_size()
          << "\n";
      return exit_failure;
    }
    out << "ok KSS(" << ss.order() << "," << ss.class_size() << ") s=" << ss.class_count() << "\n";
    return exit_ok;
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace detail

inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  CLI::App app{"Kirkman signal sets: construct, verify, classify, catalog"};
  app.require_subcommand(1);

  detail::ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "search for a KSS(v,m) and write it as a design file");
  construct->add_option("--v", ca.v, "number of points")->required();
  construct->add_option("--m", ca.m, "triples per class")->required();
  construct->add_option("--method", ca.method, "search method")
      ->check(CLI::IsMember({"theorem", "backtrack", "greedy", "local", "order", "orbit", "hill", "auto"}));
  construct->add_option("--seed", ca.seed, "random seed");
  construct->add_option("--out", ca.out, "output file (default stdout)");
  construct->add_option("--node-limit", ca.node_limit, "search node limit");
  construct->add_option("--restart-limit", ca.restart_limit, "restart limit");
  construct->add_option("--time-limit", ca.seconds, "time limit in seconds");
  construct->add_option("--window", ca.window, "target window for --method order (default m)");
  construct->add_option("--registry", ca.registry, "extra certificate registry for --method theorem");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "exit 0 iff FILE holds a verified KSS");
  verify->add_option("file", verify_path, "design file")->required();

  std::uint64_t cv = 0, cm = 0;
  std::string classify_registry;
  auto* classify_cmd = app.add_subcommand("classify", "report the status of (v,m) with its certificate");
  classify_cmd->add_option("--v", cv, "number of points")->required();
  classify_cmd->add_option("--m", cm, "triples per class")->required();
  classify_cmd->add_option("--registry", classify_registry, "extra certificate registry");

  std::uint64_t max_v = 0;
  std::string mode = "exact", format = "txt", catalog_out, catalog_registry;
  unsigned threads = 0;
  auto* catalog = app.add_subcommand("catalog", "existence catalog for all admissible v <= max-v");
  catalog->add_option("--max-v", max_v, "largest order")->required();
  catalog->add_option("--mode", mode, "omission rule")->check(CLI::IsMember({"exact", "loose"}));
  catalog->add_option("--format", format, "output format")->check(CLI::IsMember({"txt", "csv", "json"}));
  catalog->add_option("--out", catalog_out, "output file (default stdout)");
  catalog->add_option("--registry", catalog_registry, "extra certificate registry");
  catalog->add_option("--threads", threads, "worker threads (default: all cores)");

  std::uint64_t bu = 0, bv = 0;
  auto* bound = app.add_subcommand("bound", "window bound M(u,v) and its applicability");
  bound->add_option("--u", bu, "u, 2 mod 6")->required();
  bound->add_option("--v", bv, "number of points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }

  try {
    if (*construct) return detail::run_construct(ca, out, err);
    if (*verify) return detail::run_verify(verify_path, out, err);
    if (*classify_cmd) {
      if (!admissible(cv) || cv < 3 || cm < 1 || cm > max_ppc_size(cv)) {
        err << "error: need admissible v >= 3 and 1 <= m <= mu(v)\n";
        return exit_usage;
      }
      const Status st = classify(cv, cm, detail::cli_registry(classify_registry));
      out << cv << " " << cm << " " << st.letter() << " " << to_string(st.kind) << "\n";
      if (st.certificate) out << to_line(*st.certificate) << "\n";
      return st.kind == StatusKind::unknown ? exit_failure : exit_ok;
    }
    if (*catalog) {
      if (max_v < 7) {
        err << "error: --max-v must be at least 7\n";
        return exit_usage;
      }
      const Catalog c = build_catalog(max_v, mode == "loose" ? OmissionMode::loose : OmissionMode::exact,
                                      detail::cli_registry(catalog_registry), threads);
      return detail::emit(render(c, parse_catalog_format(format)), catalog_out, out, err) ? exit_ok : exit_failure;
    }
    if (*bound) {
      if (bu == 0 || bv == 0) {
        err << "error: u and v must be positive\n";
        return exit_usage;
      }
      out << "M=" << chw_M(bu, bv) << "\n"
          << "applicable=" << (chw_applicable(bu, bv) ? "true" : "false") << "\n";
      return exit_ok;
    }
  } catch (const CertificateFormatError& e) {
    err << "registry: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace kss
