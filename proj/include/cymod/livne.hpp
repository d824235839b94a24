#pragma once

// Finite verification of an isomorphism of 2-adic Galois representations
// (Livne's criterion), carried out entirely on integer traces:
//
//  * Frobenius classes in Gal(Q[S]/Q), Q[S] = Q(sqrt(-1), sqrt(s) : s in S),
//    are read off as sign vectors of Legendre symbols;
//  * a covering set T realises every sign vector;
//  * traces are compared on T;
//  * evenness of the traces is checked directly on the point counts and, for the
//    newform, by exhibiting for every candidate S3/C3 cubic a prime where it is
//    irreducible but a_p is even.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "ffarith.hpp"
#include "qseries.hpp"
#include "threefold.hpp"

namespace cymod {

class RamificationSet {
 public:
  explicit RamificationSet(std::set<i64> primes) {
    primes.insert(2);
    for (i64 p : primes) require_prime(p);
    primes_.assign(primes.begin(), primes.end());
  }

  const std::vector<i64>& primes() const { return primes_; }
  bool contains(i64 p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }
  std::size_t size() const { return primes_.size(); }
  // Number of sign vectors, 2^(#S + 1).
  u64 group_order() const { return u64{1} << (primes_.size() + 1); }

  friend bool operator==(const RamificationSet&, const RamificationSet&) = default;

 private:
  std::vector<i64> primes_;
};

inline RamificationSet ramification_set(const TwistAut& sigma) { return RamificationSet(bad_primes(sigma)); }

// Coordinates ordered (-1, then S ascending); bit = (1 - (s/p)) / 2.
struct SignVector {
  std::vector<int> bits;

  u64 index() const {
    u64 v = 0;
    for (int b : bits) v = (v << 1) | static_cast<u64>(b);
    return v;
  }

  static SignVector from_index(u64 index, std::size_t length) {
    SignVector s;
    s.bits.resize(length);
    for (std::size_t i = 0; i < length; ++i) s.bits[length - 1 - i] = static_cast<int>((index >> i) & 1);
    return s;
  }

  friend bool operator==(const SignVector&, const SignVector&) = default;
  friend auto operator<=>(const SignVector&, const SignVector&) = default;
};

inline std::string to_string(const SignVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.bits.size(); ++i) s += (i ? "," : "") + std::to_string(v.bits[i]);
  return s + ")";
}

inline SignVector xi_vector(i64 p, const RamificationSet& S) {
  require_prime(p);
  if (p == 2) throw DomainError("Frobenius at 2 is excluded");
  if (S.contains(p)) throw DomainError("Frobenius at " + std::to_string(p) + " is ramified in Q[S]");
  SignVector v;
  v.bits.push_back((1 - legendre(-1, p)) / 2);
  for (i64 s : S.primes()) v.bits.push_back((1 - legendre(s, p)) / 2);
  return v;
}

inline void annotate_xi(std::vector<TraceRecord>& records, const RamificationSet& S) {
  for (auto& r : records) r.xi = xi_vector(r.p, S).bits;
}

inline bool is_covering(const std::vector<i64>& T, const RamificationSet& S) {
  std::set<u64> seen;
  for (i64 p : T) {
    if (S.contains(p)) throw ArgumentError("covering candidate " + std::to_string(p) + " lies in S");
    seen.insert(xi_vector(p, S).index());
  }
  return seen.size() == S.group_order();
}

struct CoverWitness {
  i64 p;
  SignVector xi;
  friend bool operator==(const CoverWitness&, const CoverWitness&) = default;
};

struct GreedyCover {
  std::vector<CoverWitness> witnesses;  // ascending in p
  std::vector<SignVector> uncovered;    // ascending by index

  bool complete() const { return uncovered.empty(); }
  std::vector<i64> primes() const {
    std::vector<i64> out;
    for (const auto& w : witnesses) out.push_back(w.p);
    return out;
  }
};

// First prime (ascending, outside S and exclude) for each sign vector.
inline GreedyCover greedy_cover(const RamificationSet& S, i64 p_limit, const std::set<i64>& exclude) {
  GreedyCover out;
  std::set<u64> seen;
  const u64 need = S.group_order();
  for (i64 p = 3; p <= p_limit && seen.size() < need; p += 2) {
    if (!is_prime(p) || S.contains(p) || exclude.contains(p)) continue;
    SignVector v = xi_vector(p, S);
    if (seen.insert(v.index()).second) out.witnesses.push_back({p, std::move(v)});
  }
  for (u64 i = 0; i < need; ++i)
    if (!seen.contains(i)) out.uncovered.push_back(SignVector::from_index(i, S.size() + 1));
  return out;
}

inline std::vector<CoverWitness> find_covering(const RamificationSet& S, i64 p_limit, const std::set<i64>& exclude) {
  GreedyCover g = greedy_cover(S, p_limit, exclude);
  if (!g.complete())
    throw InsufficientLimit("primes up to " + std::to_string(p_limit) + " realise only " +
                            std::to_string(g.witnesses.size()) + " of " + std::to_string(S.group_order()) +
                            " sign vectors");
  return g.witnesses;
}

// A prime at which a candidate cubic is irreducible (Frobenius of order 3 in
// its splitting field, forcing an odd trace) while a_p is even. A certificate
// without cubic records that no S3/C3 extension unramified outside S exists.
struct ObstructionCertificate {
  i64 level = 0;
  std::optional<Cubic> cubic;
  std::optional<i64> witness_prime;
  std::optional<i64> a_p;
};

inline bool validate_certificate(const ObstructionCertificate& cert, const NewformFixture& fixture) {
  if (cert.level != fixture.level) return false;
  if (!cert.cubic) return fixture.cubics_complete && fixture.cubics.empty();
  if (!cert.witness_prime || !cert.a_p) return false;
  const i64 p = *cert.witness_prime;
  if (p == 2 || fixture.divides_level(p)) return false;
  if (mod(cert.cubic->coeffs[0], p) == 0 || !cubic_irreducible(*cert.cubic, p)) return false;
  auto ap = fixture.a_p(p);
  return ap && *ap == *cert.a_p && *ap % 2 == 0;
}

// Good odd primes of the fixture, ascending.
inline std::vector<i64> certificate_pool(const NewformFixture& fixture) {
  std::vector<i64> pool;
  for (i64 p : fixture.primes())
    if (p != 2 && !fixture.divides_level(p)) pool.push_back(p);
  return pool;
}

inline std::vector<ObstructionCertificate> parity_certificate(i64 level, const std::vector<Cubic>& cubics,
                                                              const NewformFixture& fixture,
                                                              const std::vector<i64>& pool) {
  std::vector<ObstructionCertificate> out;
  if (cubics.empty()) {
    out.push_back({level, std::nullopt, std::nullopt, std::nullopt});
    return out;
  }
  std::vector<std::string> unresolved;
  for (const Cubic& h : cubics) {
    std::optional<ObstructionCertificate> found;
    for (i64 p : pool) {
      auto ap = fixture.a_p(p);
      if (!ap || mod(h.coeffs[0], p) == 0) continue;
      if (*ap % 2 == 0 && cubic_irreducible(h, p)) {
        found = ObstructionCertificate{level, h, p, *ap};
        break;
      }
    }
    if (found)
      out.push_back(*found);
    else
      unresolved.push_back(to_string(h));
  }
  if (!unresolved.empty()) {
    std::string msg = "level " + std::to_string(level) + ": no witness prime in fixture for";
    for (const auto& s : unresolved) msg += " [" + s + "]";
    throw IncompleteFixture(msg);
  }
  return out;
}

enum class Char3Policy { Auto, Allow, Forbid };

enum class Verdict { Modular, Mismatch, Incomplete, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Modular: return "modular";
    case Verdict::Mismatch: return "mismatch";
    case Verdict::Incomplete: return "incomplete";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

enum class ParityStatus { Certified, Conditional, Failed };

inline std::string to_string(ParityStatus s) {
  switch (s) {
    case ParityStatus::Certified: return "certified";
    case ParityStatus::Conditional: return "conditional-on-external-cubics";
    case ParityStatus::Failed: return "failed";
  }
  return "?";
}

struct TraceComparison {
  i64 p;
  SignVector xi;
  i64 trace;
  i64 a_p;
  bool match() const { return trace == a_p; }
};

struct VerifyOptions {
  i64 p_limit = 200;
  Char3Policy char3 = Char3Policy::Auto;
  i64 parity_pmax = 200;
  unsigned threads = 1;
};

struct VerificationReport {
  TwistId twist = TwistId::Identity;
  i64 level = 0;
  RamificationSet S{{}};
  bool level_supported = false;  // every prime divisor of the level lies in S
  std::vector<CoverWitness> T;
  bool covers = false;
  std::vector<SignVector> uncovered;
  std::vector<i64> missing_primes;  // primes whose a_p would complete the cover
  bool char3_used = false;
  std::vector<TraceComparison> comparisons;
  std::optional<i64> first_mismatch;

  i64 parity_pmax = 0;
  std::vector<i64> parity_checked;
  std::vector<i64> odd_counts;
  std::vector<i64> odd_traces;
  std::vector<i64> odd_fixture_coefficients;
  std::vector<ObstructionCertificate> certificates;
  ParityStatus parity_status = ParityStatus::Failed;
  std::string parity_note;

  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

inline VerificationReport verify_modularity(const TwistAut& sigma, const NewformFixture& fixture,
                                            const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.twist = sigma.id();
  rep.level = fixture.level;
  rep.S = ramification_set(sigma);

  rep.level_supported = true;
  for (i64 q = 2, n = fixture.level; n > 1; ++q) {
    if (n % q) continue;
    if (!rep.S.contains(q)) rep.level_supported = false;
    while (n % q == 0) n /= q;
  }

  // Covering set, drawn from primes where the fixture knows a_p.
  std::set<i64> no_data;
  for (i64 p = 3; p <= opt.p_limit; p += 2)
    if (is_prime(p) && !fixture.a_p(p)) no_data.insert(p);
  auto with_char3 = [&](bool allow) {
    std::set<i64> ex = no_data;
    if (!allow) ex.insert(3);
    return ex;
  };
  GreedyCover cover = greedy_cover(rep.S, opt.p_limit, with_char3(opt.char3 == Char3Policy::Allow));
  if (!cover.complete() && opt.char3 == Char3Policy::Auto) {
    GreedyCover retry = greedy_cover(rep.S, opt.p_limit, with_char3(true));
    if (retry.witnesses.size() > cover.witnesses.size()) cover = std::move(retry);
  }
  rep.T = cover.witnesses;
  rep.covers = cover.complete();
  rep.uncovered = cover.uncovered;
  rep.char3_used = std::any_of(rep.T.begin(), rep.T.end(), [](const CoverWitness& w) { return w.p == 3; });
  if (!rep.covers) {
    GreedyCover unrestricted = greedy_cover(rep.S, opt.p_limit, opt.char3 == Char3Policy::Forbid ? std::set<i64>{3} : std::set<i64>{});
    for (const auto& w : unrestricted.witnesses)
      if (std::find(rep.uncovered.begin(), rep.uncovered.end(), w.xi) != rep.uncovered.end())
        rep.missing_primes.push_back(w.p);
  }

  const int h11 = node_census(sigma).h11;
  for (const auto& w : rep.T) {
    FibreTable table(w.p, opt.threads);
    i64 trace = trace_from_count(w.p, h11, count_breakdown(sigma, table).total);
    rep.comparisons.push_back({w.p, w.xi, trace, *fixture.a_p(w.p)});
    if (!rep.comparisons.back().match() && !rep.first_mismatch) rep.first_mismatch = w.p;
  }

  // Evenness of the variety side: every good prime from 5 (3 as well when it
  // was used in T).
  rep.parity_pmax = opt.parity_pmax;
  for (i64 p = 3; p <= opt.parity_pmax; p += 2) {
    if (!is_prime(p) || rep.S.contains(p) || (p == 3 && !rep.char3_used)) continue;
    FibreTable table(p, opt.threads);
    u64 n = count_breakdown(sigma, table).total;
    rep.parity_checked.push_back(p);
    if (n % 2) rep.odd_counts.push_back(p);
    if (trace_from_count(p, h11, n) % 2) rep.odd_traces.push_back(p);
  }
  for (const auto& [p, e] : fixture.entries)
    if (p != 2 && !rep.S.contains(p) && !fixture.divides_level(p) && e.ap % 2) rep.odd_fixture_coefficients.push_back(p);

  // Evenness of the newform side.
  if (fixture.cubics_complete || !fixture.cubics.empty()) {
    try {
      rep.certificates = parity_certificate(fixture.level, fixture.cubics, fixture, certificate_pool(fixture));
      bool valid = std::all_of(rep.certificates.begin(), rep.certificates.end(),
                               [&](const ObstructionCertificate& c) { return validate_certificate(c, fixture); });
      if (!valid) {
        rep.parity_status = ParityStatus::Failed;
        rep.parity_note = "certificate failed validation";
      } else if (fixture.cubics_complete) {
        rep.parity_status = ParityStatus::Certified;
      } else {
        rep.parity_status = ParityStatus::Conditional;
        rep.parity_note = "certificates cover the supplied cubics; the candidate list is not known to be complete";
      }
    } catch (const IncompleteFixture& e) {
      rep.parity_status = ParityStatus::Failed;
      rep.parity_note = e.what();
    }
  } else {
    rep.parity_status = ParityStatus::Conditional;
    rep.parity_note = "candidate S3/C3 cubics";
    if (fixture.cubic_count) rep.parity_note += " (" + std::to_string(*fixture.cubic_count) + " extensions)";
    rep.parity_note += " are external data";
    if (!fixture.witness_primes.empty()) {
      rep.parity_note += "; a_p at the stated witness primes";
      bool all_even = true;
      for (i64 p : fixture.witness_primes) {
        rep.parity_note += " " + std::to_string(p);
        auto ap = fixture.a_p(p);
        all_even = all_even && ap && *ap % 2 == 0;
      }
      rep.parity_note += all_even ? " are even" : " are NOT all even";
      if (!all_even) rep.parity_status = ParityStatus::Failed;
    }
  }

  const bool parity_ok = rep.odd_counts.empty() && rep.odd_traces.empty() && rep.odd_fixture_coefficients.empty() &&
                         rep.parity_status != ParityStatus::Failed;
  if (rep.first_mismatch) {
    rep.verdict = Verdict::Mismatch;
    rep.reason = "trace differs from a_p at p = " + std::to_string(*rep.first_mismatch);
  } else if (!rep.level_supported) {
    rep.verdict = Verdict::Mismatch;
    rep.reason = "level " + std::to_string(fixture.level) + " has a prime divisor outside S";
  } else if (!rep.covers) {
    rep.verdict = Verdict::Incomplete;
    rep.reason = "fixture lacks coefficients to complete a covering set";
  } else if (!parity_ok) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "parity conditions not established";
  } else {
    rep.verdict = Verdict::Modular;
    rep.reason = "traces agree on a covering set; determinant p^3 on both sides and the mod-2 determinant "
                 "condition hold analytically";
  }
  return rep;
}

}  // namespace cymod
