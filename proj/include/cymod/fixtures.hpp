#pragma once

// Embedded reference data: published trace tables of the five twisted
// products and the weight-4 newform coefficients they are compared with.
// Level 6 is not stored; it is expanded from the eta product on demand.

#include <optional>
#include <string_view>

#include "io.hpp"
#include "qseries.hpp"
#include "threefold.hpp"

namespace cymod {

inline constexpr std::string_view kEmbeddedFixtures = R"json({
  "schema": "cy-modularity/1",
  "tables": [
    {"twist": "pi1", "e": 96, "S": [2, 17], "rows": [
      {"p": 3,  "xi": [1,1,1], "count": 612,     "trace": -8, "char3": true},
      {"p": 5,  "xi": [0,1,1], "count": 1560,    "trace": 6},
      {"p": 7,  "xi": [1,0,1], "count": 3060,    "trace": -28},
      {"p": 13, "xi": [0,1,0], "count": 10992,   "trace": -58},
      {"p": 19, "xi": [1,1,0], "count": 24984,   "trace": 116},
      {"p": 41, "xi": [0,0,1], "count": 151920,  "trace": -342},
      {"p": 47, "xi": [1,0,0], "count": 211824,  "trace": 288},
      {"p": 89, "xi": [0,0,0], "count": 1090224, "trace": -774}]},
    {"twist": "pi2", "e": 80, "S": [2, 3, 7], "rows": [
      {"p": 5,   "xi": [0,1,1,1], "count": 1344,    "trace": -18},
      {"p": 11,  "xi": [1,1,0,1], "count": 6648,    "trace": -36},
      {"p": 13,  "xi": [0,1,0,1], "count": 9512,    "trace": -34},
      {"p": 17,  "xi": [0,0,1,1], "count": 17112,   "trace": 42},
      {"p": 19,  "xi": [1,1,1,0], "count": 22184,   "trace": -124},
      {"p": 23,  "xi": [1,0,0,1], "count": 34248,   "trace": 0},
      {"p": 29,  "xi": [0,1,1,0], "count": 59088,   "trace": 102},
      {"p": 31,  "xi": [1,0,1,0], "count": 69632,   "trace": -160},
      {"p": 37,  "xi": [0,1,0,0], "count": 106496,  "trace": 398},
      {"p": 43,  "xi": [1,1,1,1], "count": 155456,  "trace": -268},
      {"p": 47,  "xi": [1,0,0,0], "count": 193824,  "trace": 240},
      {"p": 59,  "xi": [1,1,0,0], "count": 347112,  "trace": -132},
      {"p": 73,  "xi": [0,0,0,1], "count": 605600,  "trace": -502},
      {"p": 103, "xi": [1,0,1,1], "count": 1521152, "trace": 56},
      {"p": 137, "xi": [0,0,1,0], "count": 3329952, "trace": -2358},
      {"p": 193, "xi": [0,0,0,0], "count": 8682704, "trace": 4034}]},
    {"twist": "pi3", "e": 66, "S": [2, 5], "rows": [
      {"p": 3,  "xi": [1,1,1], "count": 468,    "trace": -8, "char3": true},
      {"p": 7,  "xi": [1,0,1], "count": 2196,   "trace": -4},
      {"p": 11, "xi": [1,1,0], "count": 5676,   "trace": 12},
      {"p": 13, "xi": [0,1,1], "count": 8262,   "trace": -58},
      {"p": 17, "xi": [0,0,1], "count": 14946,  "trace": 66},
      {"p": 29, "xi": [0,1,0], "count": 53190,  "trace": -90},
      {"p": 31, "xi": [1,0,0], "count": 62376,  "trace": 152},
      {"p": 41, "xi": [0,0,0], "count": 126186, "trace": -438}]},
    {"twist": "pi4", "e": 72, "S": [2, 73], "rows": [
      {"p": 3,  "xi": [1,1,0], "count": 432,    "trace": -8, "char3": true},
      {"p": 5,  "xi": [0,1,1], "count": 1200,   "trace": 6},
      {"p": 7,  "xi": [1,0,1], "count": 2394,   "trace": -34},
      {"p": 11, "xi": [1,1,1], "count": 6078,   "trace": 6},
      {"p": 17, "xi": [0,0,1], "count": 15840,  "trace": 90},
      {"p": 23, "xi": [1,0,0], "count": 31980,  "trace": 60},
      {"p": 37, "xi": [0,1,0], "count": 101556, "trace": -286},
      {"p": 41, "xi": [0,0,0], "count": 130764, "trace": 150}]}
  ],
  "fixtures": [
    {"level": 17, "source_table": "pi1", "prefix": [1, -3, -8, 1, 6],
     "cubics": [], "cubics_complete": true, "cubic_count": 0},
    {"level": 21, "source_table": "pi2", "prefix": [1, -3, -3, 1, -18],
     "cubics": [], "cubics_complete": false, "cubic_count": 34,
     "witness_primes": [5, 11, 13, 19, 23, 31]},
    {"level": 10, "source_table": "pi3", "prefix": [1, 2, -8, 4, 5, -16, -4],
     "cubics": [[1, -1, 2, 2]], "cubics_complete": true, "cubic_count": 1},
    {"level": 73, "source_table": "pi4", "prefix": [1, 3, -8, 1, 6, -24, -34],
     "entries": [{"p": 13, "ap": -34, "provenance": "paper-expansion"}],
     "cubics": [], "cubics_complete": false, "cubic_count": 3,
     "witness_primes": [3, 13]}
  ]
})json";

inline const Json& embedded_document() {
  static const Json doc = Json::parse(kEmbeddedFixtures);
  return doc;
}

// pi4 and pi5 are mutually inverse and share one table.
inline std::optional<TraceTable> reference_table(TwistId twist) {
  const TwistId lookup = twist == TwistId::Pi5 ? TwistId::Pi4 : twist;
  for (const auto& t : embedded_document().at("tables")) {
    if (t.at("twist").get<std::string>() != to_string(lookup)) continue;
    TraceTable table = trace_table_from_json(t);
    table.twist = twist;
    for (auto& r : table.rows) r.twist = twist;
    return table;
  }
  return std::nullopt;
}

inline i64 expected_level(TwistId twist) {
  switch (twist) {
    case TwistId::Identity: return 6;
    case TwistId::Pi1: return 17;
    case TwistId::Pi2: return 21;
    case TwistId::Pi3: return 10;
    case TwistId::Pi4:
    case TwistId::Pi5: return 73;
  }
  return 0;
}

inline constexpr i64 kLevel6Primes = 200;

inline NewformFixture level6_fixture(i64 prime_limit = kLevel6Primes) {
  QSeries f = level6_form(prime_limit);
  NewformFixture fx;
  fx.level = 6;
  fx.prefix_provenance = Provenance::EtaDerived;
  for (i64 n = 1; n <= std::min<i64>(10, prime_limit); ++n) fx.prefix.push_back(f[n]);
  for (i64 p = 2; p <= prime_limit; ++p)
    if (is_prime(p)) fx.add(p, f[p], Provenance::EtaDerived);
  return fx;
}

inline NewformFixture fixture(i64 level) {
  if (level == 6) return level6_fixture();
  for (const auto& doc : embedded_document().at("fixtures")) {
    if (doc.at("level").get<i64>() != level) continue;
    NewformFixture fx = fixture_from_json(doc);
    if (doc.contains("source_table")) {
      auto table = reference_table(parse_twist(doc.at("source_table").get<std::string>()));
      for (const auto& r : table->rows) fx.add(r.p, r.trace, Provenance::PaperTable);
    }
    return fx;
  }
  throw ArgumentError("no fixture for level " + std::to_string(level) + " (supported: 6, 10, 17, 21, 73)");
}

}  // namespace cymod
