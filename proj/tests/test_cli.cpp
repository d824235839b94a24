#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cymod/cli.hpp"

using namespace cymod;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, CountDocument) {
  Result r = run({"count", "--twist", "pi3", "--prime", "3", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = r.json();
  EXPECT_EQ(j["schema"], kSchema);
  EXPECT_FALSE(j.contains("timing"));
  EXPECT_EQ(j["payload"]["count"], 432);
  EXPECT_EQ(j["payload"]["trace"], -8);
  EXPECT_EQ(j["payload"]["e"], 66);

  Json timed = run({"count", "--twist", "pi1", "--prime", "5"}).json();
  EXPECT_TRUE(timed["timing"].contains("elapsed_ms"));
  EXPECT_EQ(timed["payload"]["count"], 1560);
}

TEST(Cli, ExitCodes) {
  Result bad = run({"count", "--twist", "pi2", "--prime", "7"});
  EXPECT_EQ(bad.code, cli::kArgument);
  EXPECT_NE(bad.err.find("bad set {3,7}"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"count", "--twist", "pi1", "--prime", "2"}).code, cli::kUnsupported);
  EXPECT_EQ(run({"count", "--twist", "pi9", "--prime", "5"}).code, cli::kArgument);
  EXPECT_EQ(run({"count", "--twist", "pi1", "--prime", "9"}).code, cli::kArgument);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kArgument);
  EXPECT_EQ(run({"trace", "--twist", "pi1", "--pmax", "4"}).code, cli::kArgument);
  EXPECT_EQ(run({"eta", "--nmax", "1"}).code, cli::kArgument);
  EXPECT_EQ(run({"covering", "--set", "3,7"}).code, cli::kArgument);
  EXPECT_EQ(run({"covering", "--set", "2,5", "--limit", "4"}).code, cli::kArgument);
}

TEST(Cli, VerifyExitCodes) {
  Result ok = run({"verify", "--twist", "pi1", "--no-timing"});
  EXPECT_EQ(ok.code, cli::kOk) << ok.err;
  EXPECT_EQ(ok.json()["payload"]["verdict"], "modular");

  Result wrong = run({"verify", "--twist", "pi1", "--fixture-level", "10", "--no-timing"});
  EXPECT_EQ(wrong.code, cli::kMismatch);
  EXPECT_EQ(wrong.json()["payload"]["first_mismatch"], 5);

  Result wrong21 = run({"verify", "--twist", "pi1", "--fixture-level", "21", "--no-timing"});
  EXPECT_EQ(wrong21.code, cli::kMismatch);

  Result strict = run({"verify", "--twist", "pi1", "--forbid-char3", "--no-timing"});
  EXPECT_EQ(strict.code, cli::kMismatch);
  EXPECT_NE(strict.err.find("needed primes 11"), std::string::npos) << strict.err;
  EXPECT_EQ(strict.json()["payload"]["verdict"], "incomplete");
}

TEST(Cli, VerifyPi2ReportsNeededPrime) {
  Result r = run({"verify", "--twist", "pi2", "--no-timing"});
  EXPECT_EQ(r.code, cli::kMismatch);
  EXPECT_NE(r.err.find("needed primes 79"), std::string::npos) << r.err;
  EXPECT_EQ(r.json()["payload"]["verdict"], "incomplete");
}

TEST(Cli, TraceFlagsPrintedVectorAt103) {
  Result r = run({"trace", "--twist", "pi2", "--pmax", "103", "--no-timing"});
  ASSERT_EQ(r.code, 0);
  Json disc = r.json()["payload"]["discrepancies"];
  ASSERT_EQ(disc.size(), 1u);
  EXPECT_EQ(disc[0]["p"], 103);
  EXPECT_EQ(disc[0]["traces_agree"], true);
}

TEST(Cli, VerifyFromFixtureFile) {
  auto path = std::filesystem::temp_directory_path() / "cymod_fixture_10.json";
  Result exported = run({"fixture", "--level", "10", "--no-timing"});
  ASSERT_EQ(exported.code, 0);
  {
    std::ofstream f(path);
    f << exported.json()["payload"].dump();
  }
  Result r = run({"verify", "--twist", "pi3", "--fixture-file", path.string(), "--no-timing"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.json()["payload"]["parity"]["status"], "certified");
  std::filesystem::remove(path);

  EXPECT_EQ(run({"verify", "--twist", "pi3", "--fixture-file", "/nonexistent/x.json"}).code, cli::kArgument);
}

TEST(Cli, ByteIdenticalWithoutTiming) {
  std::vector<std::string> args = {"trace", "--twist", "pi2", "--pmax", "60", "--no-timing"};
  Result a = run(args);
  args.insert(args.end(), {"--threads", "3"});
  Result b = run(args);
  ASSERT_EQ(a.code, 0);
  // The command block does not record the thread count.
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, TraceJsonRoundTrip) {
  Result r = run({"trace", "--twist", "pi4", "--pmax", "41", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json payload = r.json()["payload"];
  TraceTable t = trace_table_from_json(payload);
  ASSERT_FALSE(t.rows.empty());
  const TraceRecord& last = t.rows.back();
  EXPECT_EQ(last.p, 41);
  EXPECT_EQ(last.xi, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(last.count, 130764);
  EXPECT_EQ(last.trace, 150);
  EXPECT_EQ(to_json(t), Json::parse(to_json(t).dump()));
  EXPECT_TRUE(payload["discrepancies"].empty());
  EXPECT_EQ(payload["rows"][0]["reference"]["trace"], payload["rows"][0]["trace"]);
}

TEST(Cli, TraceCsvRoundTrip) {
  Result r = run({"trace", "--twist", "pi2", "--pmax", "200", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "p,xi,count,trace");
  auto rows = records_from_csv(r.out, TwistId::Pi2);
  EXPECT_EQ(rows.size(), 43u);  // odd primes up to 200 other than 3 and 7
  EXPECT_EQ(to_csv(rows), r.out);
  auto ref = reference_table(TwistId::Pi2);
  std::size_t matched = 0;
  for (const auto& rr : ref->rows)
    for (const auto& row : rows)
      if (row.p == rr.p) {
        ++matched;
        EXPECT_EQ(row.count, rr.count) << rr.p;
        EXPECT_EQ(row.trace, rr.trace) << rr.p;
      }
  EXPECT_EQ(matched, 16u);
}

TEST(Cli, EmptyTraceTableCarriesNotice) {
  Result r = run({"trace", "--twist", "pi3", "--pmax", "6", "--no-timing"});
  ASSERT_EQ(r.code, 0);
  Json p = r.json()["payload"];
  EXPECT_TRUE(p["rows"].empty());
  EXPECT_TRUE(p.contains("notice"));

  Result with3 = run({"trace", "--twist", "pi3", "--pmax", "6", "--allow-char3", "--no-timing"});
  Json rows = with3.json()["payload"]["rows"];
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["count"], 432);
  EXPECT_EQ(rows[0]["char3"], true);
}

TEST(Cli, Selfcheck) {
  Result r = run({"selfcheck", "--pmax", "97", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json p = r.json()["payload"];
  EXPECT_TRUE(p["all_match"]);
  EXPECT_EQ(p["comparisons"].size(), 23u);  // primes 5..97

  Result small = run({"selfcheck", "--pmax", "3", "--no-timing"});
  ASSERT_EQ(small.code, 0);
  EXPECT_TRUE(small.json()["payload"]["comparisons"].empty());
  EXPECT_TRUE(small.json()["payload"].contains("notice"));
}

TEST(Cli, Eta) {
  Result r = run({"eta", "--nmax", "13", "--no-timing"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["payload"]["coefficients"],
            Json::parse("[0, 1, -2, -3, 4, 6, 6, -16, -8, 9, -12, 12, -12, 38]"));
}

TEST(Cli, Covering) {
  Result r = run({"covering", "--set", "2,3,7", "--limit", "200", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json p = r.json()["payload"];
  EXPECT_EQ(p["size"], 16);
  EXPECT_EQ(p["S"], Json::parse("[2, 3, 7]"));

  Result ex = run({"covering", "--set", "2,17", "--exclude", "3", "--no-timing"});
  ASSERT_EQ(ex.code, 0);
  bool has11 = false;
  Json cover = ex.json()["payload"]["covering"];
  for (const auto& w : cover) has11 = has11 || w["p"] == 11;
  EXPECT_TRUE(has11);
}

TEST(Cli, FixtureExport) {
  Result r = run({"fixture", "--twist", "pi2", "--no-timing"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["payload"]["rows"].size(), 16u);
  EXPECT_EQ(run({"fixture", "--level", "11"}).code, cli::kArgument);
  EXPECT_EQ(run({"fixture"}).code, cli::kArgument);
}
