#pragma once

// Command-line driver. Every invocation prints a single JSON document
//   {"schema": "cy-modularity/1", "command": {...}, "payload": {...}, "timing": {...}}
// (or CSV for trace tables). Exit codes: 0 success / modular, 1 verification
// mismatch, 2 argument error, 3 unsupported characteristic.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "io.hpp"
#include "livne.hpp"
#include "qseries.hpp"
#include "threefold.hpp"

namespace cymod::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kArgument = 2, kUnsupported = 3 };

namespace detail {

inline std::vector<i64> parse_prime_list(const std::string& text) {
  std::vector<i64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    i64 v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ArgumentError("not an integer: '" + item + "'");
    require_prime(v);
    out.push_back(v);
  }
  return out;
}

inline Json to_json(const FibreParam& t) {
  if (t.is_infinity()) return "inf";
  return t.value();
}

inline Json to_json(const CuspBlock& b) {
  Json j;
  j["base"] = to_json(b.base);
  j["partner"] = to_json(b.partner);
  j["fibres"] = {to_string(b.first.kodaira), to_string(b.second.kodaira)};
  j["counts"] = {b.first_count, b.second_count};
  j["fixed_nodes"] = b.fixed_nodes;
  j["points"] = b.points;
  return j;
}

inline Json to_json(const ObstructionCertificate& c) {
  Json j;
  j["level"] = c.level;
  if (!c.cubic) {
    j["cubic"] = "none-exists";
    return j;
  }
  j["cubic"] = to_string(*c.cubic);
  j["coefficients"] = c.cubic->coeffs;
  j["witness_prime"] = *c.witness_prime;
  j["a_p"] = *c.a_p;
  return j;
}

inline Json to_json(const VerificationReport& r) {
  Json j;
  j["twist"] = to_string(r.twist);
  j["level"] = r.level;
  j["S"] = r.S.primes();
  j["level_supported"] = r.level_supported;
  Json T = Json::array();
  for (const auto& w : r.T) T.push_back({{"p", w.p}, {"xi", w.xi.bits}});
  j["T"] = std::move(T);
  j["covers"] = r.covers;
  if (!r.covers) {
    Json un = Json::array();
    for (const auto& v : r.uncovered) un.push_back(v.bits);
    j["uncovered"] = std::move(un);
    j["missing_primes"] = r.missing_primes;
  }
  j["char3_used"] = r.char3_used;
  Json cmp = Json::array();
  for (const auto& c : r.comparisons)
    cmp.push_back({{"p", c.p}, {"xi", c.xi.bits}, {"trace", c.trace}, {"a_p", c.a_p}, {"match", c.match()}});
  j["comparisons"] = std::move(cmp);
  if (r.first_mismatch) j["first_mismatch"] = *r.first_mismatch;
  Json parity;
  parity["sweep_pmax"] = r.parity_pmax;
  parity["sweep_primes"] = r.parity_checked.size();
  parity["odd_counts"] = r.odd_counts;
  parity["odd_traces"] = r.odd_traces;
  parity["odd_fixture_coefficients"] = r.odd_fixture_coefficients;
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  parity["certificates"] = std::move(certs);
  parity["status"] = to_string(r.parity_status);
  if (!r.parity_note.empty()) parity["note"] = r.parity_note;
  j["parity"] = std::move(parity);
  j["determinant"] = "p^3 on both sides (analytic)";
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  return j;
}

struct Common {
  bool no_timing = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

inline void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--no-timing", c.no_timing, "Omit the timing block (byte-stable output)");
  sub->add_option("--threads", c.threads, "Worker threads for fibre counting")->check(CLI::Range(1u, 1024u));
}

inline TraceTable build_trace_table(TwistId twist, i64 p_max, bool char3, unsigned threads) {
  TwistAut sigma = TwistAut::of(twist);
  TraceTable t;
  t.twist = twist;
  t.euler = node_census(sigma).euler;
  RamificationSet S = ramification_set(sigma);
  t.ramification = S.primes();
  t.rows = trace_table(sigma, p_max, char3, threads);
  annotate_xi(t.rows, S);
  return t;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Point counts, Lefschetz traces and modularity checks for twisted fibre products of S1(6)"};
  app.require_subcommand(1);
  Common common;

  std::string twist_name;
  i64 prime = 0, p_max = 0, limit = 200, n_max = 0, fixture_level = 0, parity_pmax = 200;
  std::string format = "json", set_text, exclude_text, fixture_file;
  bool allow_char3 = false, forbid_char3 = false;

  auto* count = app.add_subcommand("count", "Point count of the resolved threefold over F_p");
  count->add_option("--twist", twist_name, "identity, pi1..pi5")->required();
  count->add_option("--prime", prime, "Good odd prime")->required();
  add_common(count, common);

  auto* trace = app.add_subcommand("trace", "Trace table over all good primes up to --pmax");
  trace->add_option("--twist", twist_name)->required();
  trace->add_option("--pmax", p_max)->required();
  trace->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  trace->add_flag("--allow-char3", allow_char3, "Include p = 3 (merged type III fibre)");
  add_common(trace, common);

  auto* verify = app.add_subcommand("verify", "Livne-criterion verification against a newform fixture");
  verify->add_option("--twist", twist_name)->required();
  verify->add_option("--fixture-level", fixture_level, "Newform level (default: the twist's level)");
  verify->add_option("--fixture-file", fixture_file, "Fixture document (JSON) replacing the embedded one");
  verify->add_option("--limit", limit, "Largest prime considered for the covering set");
  verify->add_option("--parity-pmax", parity_pmax, "Largest prime of the parity sweep");
  auto* allow_opt = verify->add_flag("--allow-char3", allow_char3, "Treat p = 3 as an ordinary candidate");
  verify->add_flag("--forbid-char3", forbid_char3, "Never use p = 3")->excludes(allow_opt);
  add_common(verify, common);

  auto* eta = app.add_subcommand("eta", "Coefficients of (eta(t)eta(2t)eta(3t)eta(6t))^2");
  eta->add_option("--nmax", n_max)->required();
  add_common(eta, common);

  auto* selfcheck = app.add_subcommand("selfcheck", "Untwisted traces against the eta product");
  selfcheck->add_option("--pmax", p_max)->required();
  add_common(selfcheck, common);

  auto* covering = app.add_subcommand("covering", "Greedy covering set of Frobenius sign vectors");
  covering->add_option("--set", set_text, "Comma-separated S, must contain 2")->required();
  covering->add_option("--limit", limit);
  covering->add_option("--exclude", exclude_text, "Comma-separated primes to skip");
  add_common(covering, common);

  auto* fixture_cmd = app.add_subcommand("fixture", "Export an embedded fixture or reference table");
  auto* level_opt = fixture_cmd->add_option("--level", fixture_level);
  fixture_cmd->add_option("--twist", twist_name)->excludes(level_opt);
  add_common(fixture_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kArgument;
  }

  const auto start = std::chrono::steady_clock::now();
  Json doc;
  doc["schema"] = kSchema;
  Json command;
  Json payload;
  int status = kOk;
  bool csv = false;
  std::string csv_text;

  try {
    if (count->parsed()) {
      TwistAut sigma = TwistAut::of(parse_twist(twist_name));
      command = {{"name", "count"}, {"twist", twist_name}, {"prime", prime}};
      CountBreakdown b = count_breakdown(sigma, prime, common.threads);
      NodeCensus census = node_census(sigma);
      payload["twist"] = twist_name;
      payload["p"] = prime;
      payload["e"] = census.euler;
      payload["h11"] = census.h11;
      payload["S"] = ramification_set(sigma).primes();
      Json blocks = Json::array();
      for (const auto& c : b.cusps) blocks.push_back(to_json(c));
      payload["cusps"] = std::move(blocks);
      payload["cusp_total"] = b.cusp_total;
      payload["generic_total"] = b.generic_total;
      payload["count"] = b.total;
      payload["trace"] = trace_from_count(prime, census.h11, b.total);
    } else if (trace->parsed()) {
      TwistId twist = parse_twist(twist_name);
      if (p_max < 5) throw ArgumentError("--pmax must be at least 5");
      command = {{"name", "trace"}, {"twist", twist_name}, {"pmax", p_max}, {"allow_char3", allow_char3}};
      TraceTable table = build_trace_table(twist, p_max, allow_char3, common.threads);
      if (format == "csv") {
        csv = true;
        csv_text = to_csv(table.rows);
        if (table.rows.empty()) err << "notice: no good primes in range\n";
      } else {
        payload = to_json(table);
        if (table.rows.empty()) payload["notice"] = "no good primes in range (p = 3 requires --allow-char3)";
        // Annotate against the embedded reference table where it has a row.
        Json discrepancies = Json::array();
        if (auto ref = reference_table(twist)) {
          for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& r = table.rows[i];
            for (const auto& rr : ref->rows) {
              if (rr.p != r.p) continue;
              payload["rows"][i]["reference"] = {{"count", rr.count}, {"trace", rr.trace}};
              if (rr.count != r.count || rr.trace != r.trace || rr.xi != r.xi)
                discrepancies.push_back({{"p", r.p},
                                         {"computed_xi", r.xi},
                                         {"reference_xi", rr.xi},
                                         {"computed_count", r.count},
                                         {"reference_count", rr.count},
                                         {"computed_trace", r.trace},
                                         {"reference_trace", rr.trace},
                                         {"traces_agree", rr.trace == r.trace}});
            }
          }
        }
        payload["discrepancies"] = std::move(discrepancies);
      }
    } else if (verify->parsed()) {
      TwistId twist = parse_twist(twist_name);
      i64 level = fixture_level ? fixture_level : expected_level(twist);
      command = {{"name", "verify"}, {"twist", twist_name}, {"fixture_level", level}, {"limit", limit}};
      NewformFixture fx;
      if (!fixture_file.empty()) {
        std::ifstream in(fixture_file);
        if (!in) throw ArgumentError("cannot open fixture file " + fixture_file);
        Json fj;
        try {
          fj = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw ArgumentError(std::string("fixture file is not valid JSON: ") + e.what());
        }
        fx = fixture_from_json(fj);
        command["fixture_file"] = fixture_file;
      } else {
        fx = fixture(level);
      }
      VerifyOptions opt;
      opt.p_limit = limit;
      opt.parity_pmax = parity_pmax;
      opt.threads = common.threads;
      opt.char3 = allow_char3 ? Char3Policy::Allow : forbid_char3 ? Char3Policy::Forbid : Char3Policy::Auto;
      VerificationReport rep = verify_modularity(TwistAut::of(twist), fx, opt);
      payload = to_json(rep);
      if (rep.verdict != Verdict::Modular) {
        status = kMismatch;
        err << to_string(rep.verdict) << ": " << rep.reason << "\n";
        if (!rep.missing_primes.empty()) {
          err << "incomplete fixture: needed primes";
          for (i64 p : rep.missing_primes) err << " " << p;
          err << "\n";
        }
      }
    } else if (eta->parsed()) {
      if (n_max < 2 || n_max > kMaxPrecision)
        throw ArgumentError("--nmax must lie in [2, " + std::to_string(kMaxPrecision) + "]");
      command = {{"name", "eta"}, {"nmax", n_max}};
      QSeries f = level6_form(n_max);
      payload["n_max"] = n_max;
      payload["coefficients"] = f.coefficients();
    } else if (selfcheck->parsed()) {
      command = {{"name", "selfcheck"}, {"pmax", p_max}};
      if (p_max < 2 || p_max > kMaxPrime) throw ArgumentError("--pmax must lie in [2, " + std::to_string(kMaxPrime) + "]");
      TwistAut id = TwistAut::of(TwistId::Identity);
      QSeries f = level6_form(std::max<i64>(p_max, 2));
      Json rows = Json::array();
      std::vector<i64> mismatches;
      for (const auto& r : trace_table(id, p_max, false, common.threads)) {
        rows.push_back({{"p", r.p}, {"trace", r.trace}, {"eta", f[r.p]}, {"match", r.trace == f[r.p]}});
        if (r.trace != f[r.p]) mismatches.push_back(r.p);
      }
      if (rows.empty()) payload["notice"] = "no good primes in range (2 and 3 are bad for the untwisted product)";
      payload["p_max"] = p_max;
      payload["comparisons"] = std::move(rows);
      payload["mismatches"] = mismatches;
      payload["all_match"] = mismatches.empty();
      if (!mismatches.empty()) status = kMismatch;
    } else if (covering->parsed()) {
      auto S_list = parse_prime_list(set_text);
      if (std::find(S_list.begin(), S_list.end(), 2) == S_list.end()) throw ArgumentError("--set must contain 2");
      auto ex_list = parse_prime_list(exclude_text);
      command = {{"name", "covering"}, {"set", S_list}, {"limit", limit}, {"exclude", ex_list}};
      RamificationSet S(std::set<i64>(S_list.begin(), S_list.end()));
      auto cover = find_covering(S, limit, std::set<i64>(ex_list.begin(), ex_list.end()));
      Json rows = Json::array();
      for (const auto& w : cover) rows.push_back({{"p", w.p}, {"xi", w.xi.bits}});
      payload["S"] = S.primes();
      payload["size"] = cover.size();
      payload["covering"] = std::move(rows);
    } else if (fixture_cmd->parsed()) {
      if (!twist_name.empty()) {
        command = {{"name", "fixture"}, {"twist", twist_name}};
        auto t = reference_table(parse_twist(twist_name));
        if (!t) throw ArgumentError("no reference table for " + twist_name);
        payload = to_json(*t);
      } else {
        if (!fixture_level) throw ArgumentError("fixture needs --level or --twist");
        command = {{"name", "fixture"}, {"level", fixture_level}};
        payload = to_json(fixture(fixture_level));
      }
    }
  } catch (const UnsupportedCharacteristic& e) {
    err << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kArgument;
  } catch (const InsufficientLimit& e) {
    err << "error: " << e.what() << "\n";
    return kArgument;
  } catch (const IncompleteFixture& e) {
    err << "error: " << e.what() << "\n";
    return kMismatch;
  }

  if (csv) {
    out << csv_text;
    return status;
  }
  doc["command"] = std::move(command);
  doc["payload"] = std::move(payload);
  if (!common.no_timing) {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    doc["timing"] = {{"elapsed_ms", ms}, {"threads", common.threads}};
  }
  out << doc.dump(2) << "\n";
  return status;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("cymod");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cymod::cli
