#pragma once

// Twisted self fibre products W = S x_{P^1} (S, sigma o pr) of the level-6
// elliptic surface, their node census, and point counts of the small
// resolution over F_p.
//
// The fibre of W over a base point u is S_u x S_{sigma^-1(u)}. Over a double
// cusp (both factors singular) every pair of singular points is a node; the
// small resolution replaces it by a line, contributing p extra points for each
// node whose coordinates are F_p-rational.

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "ffarith.hpp"
#include "surface.hpp"

namespace cymod {

enum class TwistId { Identity, Pi1, Pi2, Pi3, Pi4, Pi5 };

inline constexpr std::array<TwistId, 6> kAllTwists = {TwistId::Identity, TwistId::Pi1, TwistId::Pi2,
                                                      TwistId::Pi3,     TwistId::Pi4, TwistId::Pi5};
inline constexpr std::array<TwistId, 5> kNontrivialTwists = {TwistId::Pi1, TwistId::Pi2, TwistId::Pi3, TwistId::Pi4,
                                                             TwistId::Pi5};

inline std::string to_string(TwistId id) {
  switch (id) {
    case TwistId::Identity: return "identity";
    case TwistId::Pi1: return "pi1";
    case TwistId::Pi2: return "pi2";
    case TwistId::Pi3: return "pi3";
    case TwistId::Pi4: return "pi4";
    case TwistId::Pi5: return "pi5";
  }
  return "?";
}

inline TwistId parse_twist(const std::string& name) {
  for (TwistId id : kAllTwists)
    if (to_string(id) == name) return id;
  throw ArgumentError("unknown twist '" + name + "' (expected identity, pi1..pi5)");
}

// t -> (a t + b) / (c t + d)
struct Mobius {
  i64 a, b, c, d;
  i64 det() const { return a * d - b * c; }
  Mobius adjugate() const { return {d, -b, -c, a}; }
  friend bool operator==(const Mobius&, const Mobius&) = default;
};

// A point of P^1(Q), normalised with gcd(num, den) = 1 and den >= 0; den == 0 is infinity.
struct RationalParam {
  i64 num = 0;
  i64 den = 1;

  static RationalParam make(i64 num, i64 den) {
    if (num == 0 && den == 0) throw ArgumentError("(0:0) is not a point of P^1");
    i64 g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (den < 0 || (den == 0 && num < 0)) {
      num = -num;
      den = -den;
    }
    return {num, den};
  }
  static RationalParam integer(i64 n) { return {n, 1}; }
  static RationalParam infinity() { return {1, 0}; }

  bool is_infinity() const { return den == 0; }
  FibreParam reduce(i64 p) const {
    if (mod(den, p) == 0) return FibreParam::infinity();
    return FibreParam::at(mul_mod(num, inverse_mod(den, p), p), p);
  }

  friend bool operator==(const RationalParam&, const RationalParam&) = default;
};

inline std::string to_string(const RationalParam& t) {
  if (t.is_infinity()) return "inf";
  if (t.den == 1) return std::to_string(t.num);
  return std::to_string(t.num) + "/" + std::to_string(t.den);
}

// The cusps of the surface over Q, in the order inf, 0, 1, -8.
inline FibreClass classify_fibre_rational(const RationalParam& t) {
  if (t.is_infinity()) return fibre_classes::i6();
  if (t == RationalParam::integer(0)) return fibre_classes::i3();
  if (t == RationalParam::integer(1)) return fibre_classes::i2();
  if (t == RationalParam::integer(-8)) return fibre_classes::i1();
  return fibre_classes::smooth();
}

inline std::array<RationalParam, 4> rational_cusps() {
  return {RationalParam::infinity(), RationalParam::integer(0), RationalParam::integer(1),
          RationalParam::integer(-8)};
}

class TwistAut {
 public:
  static TwistAut of(TwistId id) {
    switch (id) {
      case TwistId::Identity: return {id, {1, 0, 0, 1}};
      case TwistId::Pi1: return {id, {-1, 1, 0, 1}};   // 1 - t
      case TwistId::Pi2: return {id, {0, 1, 1, 0}};    // 1 / t
      case TwistId::Pi3: return {id, {1, 0, 1, -1}};   // t / (t - 1)
      case TwistId::Pi4: return {id, {0, 1, -1, 1}};   // 1 / (1 - t)
      case TwistId::Pi5: return {id, {1, -1, 1, 0}};   // (t - 1) / t
    }
    throw ArgumentError("unknown twist");
  }

  TwistId id() const { return id_; }
  const Mobius& matrix() const { return m_; }

  // The adjugate represents the inverse map; pi4 and pi5 are mutually inverse,
  // the others are involutions.
  TwistAut inverse() const {
    TwistId inv = id_ == TwistId::Pi4 ? TwistId::Pi5 : id_ == TwistId::Pi5 ? TwistId::Pi4 : id_;
    return {inv, m_.adjugate()};
  }

  RationalParam apply(const RationalParam& t) const {
    if (t.is_infinity()) return RationalParam::make(m_.a, m_.c);
    return RationalParam::make(checked::add(checked::mul(m_.a, t.num), checked::mul(m_.b, t.den)),
                               checked::add(checked::mul(m_.c, t.num), checked::mul(m_.d, t.den)));
  }

 private:
  TwistAut(TwistId id, Mobius m) : id_(id), m_(m) {}
  TwistId id_;
  Mobius m_;
};

inline FibreParam twist_apply(const TwistAut& sigma, const FibreParam& t, i64 p) {
  require_odd_prime(p);
  const Mobius& m = sigma.matrix();
  if (mod(m.det(), p) == 0)
    throw DegenerateReduction(to_string(sigma.id()) + " is not invertible mod " + std::to_string(p));
  if (t.is_infinity()) {
    if (mod(m.c, p) == 0) return FibreParam::infinity();
    return FibreParam::at(mul_mod(m.a, inverse_mod(m.c, p), p), p);
  }
  i64 den = mod(mul_mod(m.c, t.value(), p) + m.d, p);
  if (den == 0) return FibreParam::infinity();
  i64 num = mod(mul_mod(m.a, t.value(), p) + m.b, p);
  return FibreParam::at(mul_mod(num, inverse_mod(den, p), p), p);
}

// 2 (3) is bad iff sigma fixes the cusp 0 (1): a fibre with two additive
// factors appears. A prime p >= 5 is bad iff sigma(-8) = -8 mod p, i.e. p divides
// the numerator of sigma(-8) + 8. When sigma fixes -8 over Q the fibre over -8 is
// an ordinary double cusp and contributes no bad prime.
inline std::set<i64> bad_primes(const TwistAut& sigma) {
  std::set<i64> out;
  if (sigma.apply(RationalParam::integer(0)) == RationalParam::integer(0)) out.insert(2);
  if (sigma.apply(RationalParam::integer(1)) == RationalParam::integer(1)) out.insert(3);
  const Mobius& m = sigma.matrix();
  i64 v = m.a * -8 + m.b + 8 * (m.c * -8 + m.d);
  v = v < 0 ? -v : v;
  if (v != 0) {
    for (i64 d = 2; d * d <= v; ++d) {
      if (v % d) continue;
      if (d >= 5) out.insert(d);
      while (v % d == 0) v /= d;
    }
    if (v >= 5) out.insert(v);
  }
  return out;
}

inline bool is_bad_prime(const TwistAut& sigma, i64 p) { return bad_primes(sigma).contains(p); }

struct CuspNodes {
  RationalParam cusp;
  Kodaira first;   // fibre of the first factor over the cusp
  Kodaira second;  // fibre of the twisted factor, i.e. over sigma^-1(cusp)
  int nodes;
};

struct NodeCensus {
  std::vector<CuspNodes> cusps;
  int total_nodes = 0;
  int euler = 0;
  int h11 = 0;
};

// Characteristic-zero census of the nodes of W.
inline NodeCensus node_census(const TwistAut& sigma) {
  NodeCensus census;
  const TwistAut inv = sigma.inverse();
  for (const RationalParam& c : rational_cusps()) {
    FibreClass f = classify_fibre_rational(c);
    FibreClass g = classify_fibre_rational(inv.apply(c));
    if (!f.singular() || !g.singular()) continue;
    int nodes = f.singular_points * g.singular_points;
    census.cusps.push_back({c, f.kodaira, g.kodaira, nodes});
    census.total_nodes += nodes;
  }
  census.euler = 2 * census.total_nodes;
  census.h11 = census.euler / 2;
  return census;
}

// Fibre of the resolved threefold over a double cusp.
struct CuspBlock {
  FibreParam base = FibreParam::infinity();
  FibreParam partner = FibreParam::infinity();  // sigma^-1(base)
  FibreClass first;
  FibreClass second;
  u64 first_count = 0;
  u64 second_count = 0;
  u64 fixed_nodes = 0;  // nodes whose exceptional line is defined over F_p
  u64 points = 0;
};

struct CountBreakdown {
  TwistId twist = TwistId::Identity;
  i64 p = 0;
  std::vector<CuspBlock> cusps;
  u64 cusp_total = 0;
  u64 generic_total = 0;
  u64 total = 0;
};

inline void require_good_prime(const TwistAut& sigma, i64 p) {
  require_supported_characteristic(p);
  auto bad = bad_primes(sigma);
  if (bad.contains(p)) {
    std::string list;
    for (i64 b : bad) list += (list.empty() ? "" : ",") + std::to_string(b);
    throw BadPrime(std::to_string(p) + " is a prime of bad reduction for " + to_string(sigma.id()) + " (bad set {" +
                   list + "})");
  }
}

namespace detail {

inline std::vector<FibreParam> cusps_mod(i64 p) {
  std::vector<FibreParam> out;
  for (const RationalParam& c : rational_cusps()) {
    FibreParam r = c.reduce(p);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

}  // namespace detail

// Double cusps over F_p are found by classifying both factors, not from a fixed list.
inline std::vector<CuspBlock> cusp_blocks(const TwistAut& sigma, const FibreTable& table) {
  const i64 p = table.prime();
  require_good_prime(sigma, p);
  const TwistAut inv = sigma.inverse();
  std::vector<CuspBlock> blocks;
  for (const FibreParam& c : detail::cusps_mod(p)) {
    CuspBlock b;
    b.base = c;
    b.partner = twist_apply(inv, c, p);
    b.first = classify_fibre(c, p);
    b.second = classify_fibre(b.partner, p);
    if (!b.first.singular() || !b.second.singular()) continue;
    b.first_count = table.at(b.base);
    b.second_count = table.at(b.partner);
    b.fixed_nodes = static_cast<u64>(b.first.rational_singular_points(p)) *
                    static_cast<u64>(b.second.rational_singular_points(p));
    b.points = checked::add(checked::mul(b.first_count, b.second_count),
                            checked::mul(b.fixed_nodes, static_cast<u64>(p)));
    blocks.push_back(b);
  }
  return blocks;
}

inline CountBreakdown count_breakdown(const TwistAut& sigma, const FibreTable& table) {
  const i64 p = table.prime();
  CountBreakdown out;
  out.twist = sigma.id();
  out.p = p;
  out.cusps = cusp_blocks(sigma, table);
  for (const CuspBlock& b : out.cusps) out.cusp_total = checked::add(out.cusp_total, b.points);

  const TwistAut inv = sigma.inverse();
  auto is_double_cusp = [&](const FibreParam& u) {
    return std::any_of(out.cusps.begin(), out.cusps.end(), [&](const CuspBlock& b) { return b.base == u; });
  };
  auto add_base_point = [&](const FibreParam& u) {
    if (is_double_cusp(u)) return;
    out.generic_total =
        checked::add(out.generic_total, checked::mul(table.at(u), table.at(twist_apply(inv, u, p))));
  };
  for (i64 k = 0; k < p; ++k) add_base_point(FibreParam::at(k, p));
  add_base_point(FibreParam::infinity());
  out.total = checked::add(out.cusp_total, out.generic_total);
  return out;
}

inline CountBreakdown count_breakdown(const TwistAut& sigma, i64 p, unsigned threads = 1) {
  require_good_prime(sigma, p);
  return count_breakdown(sigma, FibreTable(p, threads));
}

inline u64 cusp_contribution(const TwistAut& sigma, i64 p) {
  require_good_prime(sigma, p);
  // Cusp fibres only need their own counts.
  const TwistAut inv = sigma.inverse();
  u64 sum = 0;
  for (const FibreParam& c : detail::cusps_mod(p)) {
    FibreClass f = classify_fibre(c, p);
    FibreParam partner = twist_apply(inv, c, p);
    FibreClass g = classify_fibre(partner, p);
    if (!f.singular() || !g.singular()) continue;
    u64 fixed = static_cast<u64>(f.rational_singular_points(p)) * static_cast<u64>(g.rational_singular_points(p));
    sum = checked::add(sum, checked::add(checked::mul(count_resolved_fibre(c, p), count_resolved_fibre(partner, p)),
                                         checked::mul(fixed, static_cast<u64>(p))));
  }
  return sum;
}

inline u64 total_count(const TwistAut& sigma, i64 p, unsigned threads = 1) {
  return count_breakdown(sigma, p, threads).total;
}

// tr_3(p) = 1 + p(1+p) h11 + p^3 - #W(F_p): Frobenius acts on H^0, H^2, H^4, H^6
// by 1, p h11, p^2 h11, p^3 and H^1 = H^5 = 0.
inline i64 trace_from_count(i64 p, int h11, u64 count) {
  i64 expected = checked::add<i64>(
      checked::add<i64>(1, checked::mul<i64>(checked::mul<i64>(p, 1 + p), h11)),
      checked::mul<i64>(p, checked::mul<i64>(p, p)));
  return checked::sub(expected, checked::cast<i64>(count));
}

inline i64 lefschetz_trace(const TwistAut& sigma, i64 p, unsigned threads = 1) {
  return trace_from_count(p, node_census(sigma).h11, total_count(sigma, p, threads));
}

struct TraceRecord {
  TwistId twist = TwistId::Identity;
  i64 p = 0;
  std::vector<int> xi;  // filled in by the Livne layer
  u64 count = 0;
  i64 trace = 0;
  bool char3 = false;  // p = 3, counted with the merged type III fibre

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline TraceRecord trace_record(const TwistAut& sigma, i64 p, unsigned threads = 1) {
  TraceRecord r;
  r.twist = sigma.id();
  r.p = p;
  r.count = total_count(sigma, p, threads);
  r.trace = trace_from_count(p, node_census(sigma).h11, r.count);
  r.char3 = p == 3;
  return r;
}

// One record per good odd prime up to p_max; p = 3 only when requested.
inline std::vector<TraceRecord> trace_table(const TwistAut& sigma, i64 p_max, bool include_char3 = false,
                                            unsigned threads = 1) {
  std::vector<TraceRecord> out;
  const auto bad = bad_primes(sigma);
  for (i64 p = 3; p <= p_max; p += 2) {
    if (!is_prime(p) || bad.contains(p)) continue;
    if (p == 3 && !include_char3) continue;
    out.push_back(trace_record(sigma, p, threads));
  }
  return out;
}

}  // namespace cymod
