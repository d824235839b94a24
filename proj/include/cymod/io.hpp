#pragma once

// Structured-text (JSON / CSV) forms of trace tables and newform fixtures.

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "qseries.hpp"
#include "threefold.hpp"

namespace cymod {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "cy-modularity/1";

// A trace table together with the invariants of its threefold.
struct TraceTable {
  TwistId twist = TwistId::Identity;
  int euler = 0;
  std::vector<i64> ramification;  // S
  std::vector<TraceRecord> rows;

  friend bool operator==(const TraceTable&, const TraceTable&) = default;
};

inline std::string format_xi(const std::vector<int>& xi) {
  std::string s = "(";
  for (std::size_t i = 0; i < xi.size(); ++i) s += (i ? "," : "") + std::to_string(xi[i]);
  return s + ")";
}

inline std::vector<int> parse_xi(const std::string& text) {
  std::vector<int> out;
  for (char ch : text) {
    if (ch == '0' || ch == '1')
      out.push_back(ch - '0');
    else if (ch != '(' && ch != ')' && ch != ',' && ch != ' ')
      throw ArgumentError("malformed sign vector '" + text + "'");
  }
  return out;
}

inline Json to_json(const TraceRecord& r) {
  Json j;
  j["p"] = r.p;
  j["xi"] = r.xi;
  j["count"] = r.count;
  j["trace"] = r.trace;
  if (r.char3) j["char3"] = true;
  return j;
}

inline Json to_json(const TraceTable& t) {
  Json j;
  j["twist"] = to_string(t.twist);
  j["e"] = t.euler;
  j["S"] = t.ramification;
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(to_json(r));
  j["rows"] = std::move(rows);
  return j;
}

inline TraceTable trace_table_from_json(const Json& j) {
  try {
    TraceTable t;
    t.twist = parse_twist(j.at("twist").get<std::string>());
    t.euler = j.at("e").get<int>();
    t.ramification = j.at("S").get<std::vector<i64>>();
    for (const auto& row : j.at("rows")) {
      TraceRecord r;
      r.twist = t.twist;
      r.p = row.at("p").get<i64>();
      r.xi = row.at("xi").get<std::vector<int>>();
      r.count = row.at("count").get<u64>();
      r.trace = row.at("trace").get<i64>();
      r.char3 = row.value("char3", false);
      t.rows.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed trace table: ") + e.what());
  }
}

// Column order is fixed: p, xi, count, trace.
inline std::string to_csv(const std::vector<TraceRecord>& rows) {
  std::ostringstream os;
  os << "p,xi,count,trace\n";
  for (const auto& r : rows) os << r.p << ",\"" << format_xi(r.xi) << "\"," << r.count << "," << r.trace << "\n";
  return os.str();
}

inline std::vector<TraceRecord> records_from_csv(const std::string& text, TwistId twist) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "p,xi,count,trace") throw ArgumentError("missing CSV header");
  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto q1 = line.find('"');
    auto q2 = line.find('"', q1 + 1);
    if (q1 == std::string::npos || q2 == std::string::npos) throw ArgumentError("malformed CSV row: " + line);
    TraceRecord r;
    r.twist = twist;
    r.p = std::stoll(line.substr(0, q1 - 1));
    r.xi = parse_xi(line.substr(q1 + 1, q2 - q1 - 1));
    std::istringstream rest(line.substr(q2 + 2));
    std::string count, trace;
    std::getline(rest, count, ',');
    std::getline(rest, trace, ',');
    r.count = std::stoull(count);
    r.trace = std::stoll(trace);
    r.char3 = r.p == 3;
    out.push_back(std::move(r));
  }
  return out;
}

inline Json to_json(const NewformFixture& f) {
  Json j;
  j["level"] = f.level;
  j["prefix"] = f.prefix;
  j["prefix_provenance"] = to_string(f.prefix_provenance);
  Json entries = Json::array();
  for (const auto& [p, e] : f.entries) entries.push_back({{"p", p}, {"ap", e.ap}, {"provenance", to_string(e.provenance)}});
  j["entries"] = std::move(entries);
  Json cubics = Json::array();
  for (const auto& h : f.cubics) cubics.push_back(h.coeffs);
  j["cubics"] = std::move(cubics);
  j["cubics_complete"] = f.cubics_complete;
  if (f.cubic_count) j["cubic_count"] = *f.cubic_count;
  if (!f.witness_primes.empty()) j["witness_primes"] = f.witness_primes;
  return j;
}

inline NewformFixture fixture_from_json(const Json& j) {
  try {
    NewformFixture f;
    f.level = j.at("level").get<i64>();
    f.prefix = j.value("prefix", std::vector<i64>{});
    if (!f.prefix.empty() && f.prefix.front() != 1) throw ArgumentError("fixture is not normalised (a_1 != 1)");
    f.prefix_provenance = parse_provenance(j.value("prefix_provenance", std::string("paper-expansion")));
    for (std::size_t n = 2; n <= f.prefix.size(); ++n)
      if (is_prime(static_cast<i64>(n))) f.add(static_cast<i64>(n), f.prefix[n - 1], f.prefix_provenance);
    for (const auto& e : j.value("entries", Json::array()))
      f.add(e.at("p").get<i64>(), e.at("ap").get<i64>(), parse_provenance(e.at("provenance").get<std::string>()));
    for (const auto& c : j.value("cubics", Json::array())) {
      auto v = c.get<std::vector<i64>>();
      if (v.size() != 4) throw ArgumentError("cubic must have 4 coefficients");
      f.cubics.emplace_back(v[0], v[1], v[2], v[3]);
    }
    f.cubics_complete = j.value("cubics_complete", false);
    if (j.contains("cubic_count")) f.cubic_count = j.at("cubic_count").get<i64>();
    f.witness_primes = j.value("witness_primes", std::vector<i64>{});
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed fixture: ") + e.what());
  }
}

}  // namespace cymod
