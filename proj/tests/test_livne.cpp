#include <gtest/gtest.h>

#include <map>

#include "cymod/fixtures.hpp"
#include "cymod/livne.hpp"
#include "oracles.hpp"

using namespace cymod;

namespace {

RamificationSet S_of(std::set<i64> s) { return RamificationSet(std::move(s)); }

std::vector<i64> table_primes(TwistId id) {
  std::vector<i64> out;
  auto ref = reference_table(id);
  for (const auto& r : ref->rows) out.push_back(r.p);
  return out;
}

}  // namespace

TEST(RamificationSet, AlwaysContainsTwo) {
  EXPECT_EQ(S_of({17}).primes(), (std::vector<i64>{2, 17}));
  EXPECT_EQ(ramification_set(TwistAut::of(TwistId::Pi2)).primes(), (std::vector<i64>{2, 3, 7}));
  EXPECT_EQ(ramification_set(TwistAut::of(TwistId::Pi3)).primes(), (std::vector<i64>{2, 5}));
  EXPECT_EQ(S_of({2, 3, 7}).group_order(), 16u);
  EXPECT_THROW(S_of({2, 9}), ArgumentError);
}

TEST(XiVector, Examples) {
  EXPECT_EQ(xi_vector(3, S_of({2, 17})).bits, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(xi_vector(5, S_of({2, 3, 7})).bits, (std::vector<int>{0, 1, 1, 1}));
  EXPECT_EQ(xi_vector(41, S_of({2, 5})).bits, (std::vector<int>{0, 0, 0}));
  EXPECT_THROW(xi_vector(17, S_of({2, 17})), DomainError);
  EXPECT_THROW(xi_vector(2, S_of({2, 17})), DomainError);
}

TEST(XiVector, ReproducesReferenceColumns) {
  for (TwistId id : kNontrivialTwists) {
    auto ref = reference_table(id);
    RamificationSet S = ramification_set(TwistAut::of(id));
    EXPECT_EQ(S.primes(), ref->ramification);
    for (const auto& r : ref->rows) {
      if (id == TwistId::Pi2 && r.p == 103) continue;  // see PrintedVectorAt103
      EXPECT_EQ(xi_vector(r.p, S).bits, r.xi) << to_string(id) << " p=" << r.p;
    }
  }
}

// The pi2 table prints (1,0,1,1) at p = 103. The symbols (-1/103), (2/103),
// (3/103), (7/103) are -1, +1, -1, +1, i.e. (1,0,1,0), the vector of p = 31.
TEST(XiVector, PrintedVectorAt103) {
  std::vector<int> bits;
  for (i64 s : {-1, 2, 3, 7}) bits.push_back((1 - oracle::legendre(s, 103)) / 2);
  EXPECT_EQ(bits, (std::vector<int>{1, 0, 1, 0}));
  RamificationSet S = S_of({2, 3, 7});
  EXPECT_EQ(xi_vector(103, S).bits, bits);
  EXPECT_EQ(xi_vector(31, S).bits, bits);
  auto ref = reference_table(TwistId::Pi2);
  for (const auto& r : ref->rows)
    if (r.p == 103) {
      EXPECT_EQ(r.xi, (std::vector<int>{1, 0, 1, 1}));
    }
}

TEST(XiVector, DependsOnlyOnResidueClass) {
  for (const auto& S : {S_of({2, 17}), S_of({2, 3, 7}), S_of({2, 5}), S_of({2, 73})}) {
    i64 modulus = 8;
    for (i64 s : S.primes())
      if (s != 2) modulus *= s;
    std::map<i64, std::vector<int>> by_class;
    for (i64 p = 3; p <= 500; p += 2) {
      if (!is_prime(p) || S.contains(p)) continue;
      auto bits = xi_vector(p, S).bits;
      auto [it, inserted] = by_class.try_emplace(p % modulus, bits);
      if (!inserted) { EXPECT_EQ(it->second, bits) << p; }
    }
  }
}

TEST(IsCovering, Examples) {
  EXPECT_TRUE(is_covering({3, 5, 7, 13, 19, 41, 47, 89}, S_of({2, 17})));
  EXPECT_FALSE(is_covering({3, 5}, S_of({2, 17})));
  EXPECT_TRUE(is_covering({3, 7, 11, 13, 17, 29, 31, 41}, S_of({2, 5})));
  EXPECT_THROW(is_covering({3, 17}, S_of({2, 17})), ArgumentError);
}

TEST(IsCovering, ReferenceTables) {
  for (TwistId id : {TwistId::Pi1, TwistId::Pi3, TwistId::Pi4, TwistId::Pi5})
    EXPECT_TRUE(is_covering(table_primes(id), ramification_set(TwistAut::of(id)))) << to_string(id);

  // With the true vector at 103, the pi2 primes miss (1,0,1,1); 79 is the
  // least prime realising it.
  RamificationSet S = ramification_set(TwistAut::of(TwistId::Pi2));
  std::vector<i64> T = table_primes(TwistId::Pi2);
  EXPECT_FALSE(is_covering(T, S));
  T.push_back(79);
  EXPECT_TRUE(is_covering(T, S));
  EXPECT_EQ(xi_vector(79, S).bits, (std::vector<int>{1, 0, 1, 1}));
  for (i64 p = 5; p < 79; p += 2)
    if (oracle::is_prime(p) && !S.contains(p)) {
      EXPECT_NE(xi_vector(p, S).bits, (std::vector<int>{1, 0, 1, 1})) << p;
    }
}

TEST(FindCovering, Examples) {
  auto cover = find_covering(S_of({2, 17}), 100, {3});
  ASSERT_EQ(cover.size(), 8u);
  i64 witness = 0;
  for (const auto& w : cover)
    if (w.xi.bits == std::vector<int>{1, 1, 1}) witness = w.p;
  EXPECT_EQ(witness, 11);
  // brute force: 11 is the least prime other than 3 with all three symbols -1
  for (i64 p = 5; p < 11; p += 2)
    if (oracle::is_prime(p)) { EXPECT_FALSE(oracle::legendre(-1, p) == -1 && oracle::legendre(2, p) == -1 && oracle::legendre(17, p) == -1); }
  EXPECT_TRUE(oracle::legendre(-1, 11) == -1 && oracle::legendre(2, 11) == -1 && oracle::legendre(17, 11) == -1);

  auto with3 = find_covering(S_of({2, 17}), 100, {});
  EXPECT_EQ(with3.front().p, 3);
  EXPECT_THROW(find_covering(S_of({2, 5}), 4, {}), InsufficientLimit);
}

TEST(FindCovering, OutputCoversAndWitnessesAreMinimal) {
  for (const auto& S : {S_of({2, 17}), S_of({2, 3, 7}), S_of({2, 5}), S_of({2, 73})}) {
    for (const std::set<i64>& ex : {std::set<i64>{}, std::set<i64>{3}, std::set<i64>{3, 5, 11}}) {
      auto cover = find_covering(S, 2000, ex);
      std::vector<i64> T;
      for (const auto& w : cover) T.push_back(w.p);
      EXPECT_TRUE(is_covering(T, S));
      EXPECT_EQ(cover.size(), S.group_order());
      for (const auto& w : cover)
        for (i64 q = 3; q < w.p; q += 2)
          if (is_prime(q) && !S.contains(q) && !ex.contains(q)) { EXPECT_NE(xi_vector(q, S), w.xi); }
    }
  }
}

TEST(ParityCertificate, Examples) {
  NewformFixture f10 = fixture(10);
  auto c10 = parity_certificate(10, {Cubic(1, -1, 2, 2)}, f10, certificate_pool(f10));
  ASSERT_EQ(c10.size(), 1u);
  EXPECT_EQ(c10[0].witness_prime, 3);
  EXPECT_EQ(c10[0].a_p, -8);
  EXPECT_TRUE(validate_certificate(c10[0], f10));

  NewformFixture f17 = fixture(17);
  auto c17 = parity_certificate(17, {}, f17, certificate_pool(f17));
  ASSERT_EQ(c17.size(), 1u);
  EXPECT_FALSE(c17[0].cubic.has_value());
  EXPECT_TRUE(validate_certificate(c17[0], f17));
}

TEST(ParityCertificate, Level73WithSuppliedCubics) {
  NewformFixture f = fixture(73);
  ASSERT_FALSE(oracle::has_root(1, 0, -1, -1, 3));
  ASSERT_TRUE(oracle::has_root(1, 0, 0, -2, 3));
  std::vector<Cubic> cubics = {Cubic(1, 0, -1, -1), Cubic(1, 0, 0, -2)};
  auto pool = certificate_pool(f);
  auto certs = parity_certificate(73, cubics, f, pool);
  ASSERT_EQ(certs.size(), 2u);
  EXPECT_EQ(certs[0].witness_prime, 3);
  EXPECT_EQ(certs[0].a_p, -8);
  // x^3 - 2 has a root mod 3, so its witness is the least pool prime with even
  // a_p and no root, found here by search
  i64 expected = 0;
  for (i64 p : pool)
    if (*f.a_p(p) % 2 == 0 && !oracle::has_root(1, 0, 0, -2, p)) {
      expected = p;
      break;
    }
  ASSERT_NE(expected, 0);
  EXPECT_EQ(certs[1].witness_prime, expected);
  for (const auto& c : certs) EXPECT_TRUE(validate_certificate(c, f));
}

TEST(ParityCertificate, MissingWitness) {
  NewformFixture f = fixture(17);
  // x^3 - x has the root 0 modulo every prime
  EXPECT_THROW(parity_certificate(17, {Cubic(1, 0, -1, 0)}, f, certificate_pool(f)), IncompleteFixture);
  ObstructionCertificate forged{17, Cubic(1, 0, -1, 0), 5, 6};
  EXPECT_FALSE(validate_certificate(forged, f));
}

TEST(Verify, Pi3Level10) {
  VerificationReport r = verify_modularity(TwistAut::of(TwistId::Pi3), fixture(10));
  EXPECT_EQ(r.verdict, Verdict::Modular) << r.reason;
  EXPECT_TRUE(r.covers);
  EXPECT_TRUE(r.level_supported);
  EXPECT_EQ(r.parity_status, ParityStatus::Certified);
  EXPECT_TRUE(r.odd_traces.empty());
  for (const auto& c : r.comparisons) EXPECT_TRUE(c.match());
}

TEST(Verify, Pi1Level17UsesCharThreeOnlyWhenNeeded) {
  VerificationReport r = verify_modularity(TwistAut::of(TwistId::Pi1), fixture(17));
  EXPECT_EQ(r.verdict, Verdict::Modular) << r.reason;
  EXPECT_TRUE(r.char3_used);
  std::vector<i64> T;
  for (const auto& w : r.T) T.push_back(w.p);
  EXPECT_EQ(T, (std::vector<i64>{3, 5, 7, 13, 19, 41, 47, 89}));

  VerifyOptions strict;
  strict.char3 = Char3Policy::Forbid;
  VerificationReport s = verify_modularity(TwistAut::of(TwistId::Pi1), fixture(17), strict);
  EXPECT_EQ(s.verdict, Verdict::Incomplete);
  EXPECT_FALSE(s.char3_used);
  EXPECT_EQ(s.missing_primes, (std::vector<i64>{11}));
}

TEST(Verify, Pi2Level21NeedsCoefficientAt79) {
  VerificationReport r = verify_modularity(TwistAut::of(TwistId::Pi2), fixture(21));
  EXPECT_EQ(r.verdict, Verdict::Incomplete) << r.reason;
  EXPECT_FALSE(r.first_mismatch.has_value());
  EXPECT_FALSE(r.char3_used);
  EXPECT_EQ(r.T.size(), 15u);
  ASSERT_EQ(r.uncovered.size(), 1u);
  EXPECT_EQ(r.uncovered[0].bits, (std::vector<int>{1, 0, 1, 1}));
  EXPECT_EQ(r.missing_primes, (std::vector<i64>{79}));
  EXPECT_EQ(r.parity_status, ParityStatus::Conditional);
  for (const auto& c : r.comparisons) EXPECT_TRUE(c.match()) << c.p;
}

TEST(Verify, Pi4Pi5Symmetric) {
  VerificationReport a = verify_modularity(TwistAut::of(TwistId::Pi4), fixture(73));
  VerificationReport b = verify_modularity(TwistAut::of(TwistId::Pi5), fixture(73));
  EXPECT_EQ(a.verdict, Verdict::Modular) << a.reason;
  EXPECT_EQ(b.verdict, a.verdict);
  ASSERT_EQ(a.comparisons.size(), b.comparisons.size());
  for (std::size_t i = 0; i < a.comparisons.size(); ++i) {
    EXPECT_EQ(a.comparisons[i].p, b.comparisons[i].p);
    EXPECT_EQ(a.comparisons[i].trace, b.comparisons[i].trace);
  }
  EXPECT_EQ(a.parity_note, b.parity_note);
  EXPECT_EQ(a.odd_traces, b.odd_traces);
}

TEST(Verify, WrongLevelIsAMismatch) {
  VerificationReport r = verify_modularity(TwistAut::of(TwistId::Pi1), fixture(10));
  EXPECT_EQ(r.verdict, Verdict::Mismatch);
  ASSERT_TRUE(r.first_mismatch.has_value());
  EXPECT_EQ(*r.first_mismatch, 5);
  EXPECT_FALSE(r.level_supported);
}

TEST(Verify, IdentityAgainstEtaFixture) {
  VerificationReport r = verify_modularity(TwistAut::of(TwistId::Identity), fixture(6));
  EXPECT_EQ(r.verdict, Verdict::Modular) << r.reason;
  EXPECT_EQ(r.S.primes(), (std::vector<i64>{2, 3}));
}
