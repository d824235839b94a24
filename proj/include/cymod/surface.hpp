#pragma once

// The modular elliptic surface of level 6 as the pencil of plane cubics
//   s (x+y)(y+z)(z+x) + t xyz = 0
// over the base line with coordinate (s:t). Fibres are counted over F_p by
// walking the canonical representatives (1:y:z), (0:1:z), (0:0:1) of P^2.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"
#include "ffarith.hpp"

namespace cymod {

// A point of P^1(F_p): the affine coordinate t (s = 1) or infinity (s:t) = (0:1).
class FibreParam {
 public:
  static FibreParam at(i64 t, i64 p) { return FibreParam(mod(t, p), false); }
  static FibreParam infinity() { return FibreParam(0, true); }

  bool is_infinity() const { return infinite_; }
  // Residue in [0, p); only meaningful for finite parameters.
  i64 value() const { return value_; }

  friend bool operator==(const FibreParam&, const FibreParam&) = default;

 private:
  FibreParam(i64 v, bool inf) : value_(v), infinite_(inf) {}
  i64 value_;
  bool infinite_;
};

inline std::string to_string(const FibreParam& t) {
  return t.is_infinity() ? std::string("inf") : std::to_string(t.value());
}

enum class Kodaira { Smooth, I1, I2, I3, I6, III };

inline std::string to_string(Kodaira k) {
  switch (k) {
    case Kodaira::Smooth: return "smooth";
    case Kodaira::I1: return "I1";
    case Kodaira::I2: return "I2";
    case Kodaira::I3: return "I3";
    case Kodaira::I6: return "I6";
    case Kodaira::III: return "III";
  }
  return "?";
}

enum class NodeRationality { AllRational, ConjugatePair, None };

struct FibreClass {
  Kodaira kodaira = Kodaira::Smooth;
  int singular_points = 0;
  NodeRationality rationality = NodeRationality::None;
  // Field of definition of a conjugate pair, Q(sqrt(discriminant)); 0 otherwise.
  int discriminant = 0;

  bool singular() const { return kodaira != Kodaira::Smooth; }

  // Singular points defined over F_p.
  int rational_singular_points(i64 p) const {
    switch (rationality) {
      case NodeRationality::AllRational: return singular_points;
      case NodeRationality::ConjugatePair: return legendre(discriminant, p) == 1 ? singular_points : 0;
      case NodeRationality::None: return 0;
    }
    return 0;
  }

  friend bool operator==(const FibreClass&, const FibreClass&) = default;
};

namespace fibre_classes {
inline FibreClass smooth() { return {}; }
inline FibreClass i1() { return {Kodaira::I1, 1, NodeRationality::AllRational, 0}; }
inline FibreClass i2() { return {Kodaira::I2, 2, NodeRationality::ConjugatePair, -3}; }
inline FibreClass i3() { return {Kodaira::I3, 3, NodeRationality::AllRational, 0}; }
inline FibreClass i6() { return {Kodaira::I6, 6, NodeRationality::AllRational, 0}; }
inline FibreClass iii() { return {Kodaira::III, 1, NodeRationality::AllRational, 0}; }
}  // namespace fibre_classes

inline void require_supported_characteristic(i64 p) {
  if (p == 2) throw UnsupportedCharacteristic("characteristic 2 is not modelled");
  require_odd_prime(p);
  if (p > kMaxPrime) throw ArgumentError("prime exceeds supported bound " + std::to_string(kMaxPrime));
}

// Singular fibres: inf -> I6, 0 -> I3, 1 -> I2, -8 -> I1. In characteristic 3
// the cusps 1 and -8 collide and the I2 and I1 fibres merge into a type III fibre.
inline FibreClass classify_fibre(const FibreParam& t, i64 p) {
  require_supported_characteristic(p);
  if (t.is_infinity()) return fibre_classes::i6();
  if (t.value() == 0) return fibre_classes::i3();
  if (t.value() == 1) return p == 3 ? fibre_classes::iii() : fibre_classes::i2();
  if (t.value() == mod(-8, p)) return fibre_classes::i1();
  return fibre_classes::smooth();
}

namespace detail {

// Points of the fibre over finite t with the representative (1:y:z), y in [y_begin, y_end).
inline u64 count_affine_rows(u64 t, u64 p, u64 y_begin, u64 y_end) {
  u64 n = 0;
  for (u64 y = y_begin; y < y_end; ++y) {
    u64 xy = (1 + y) % p;
    for (u64 z = 0; z < p; ++z) {
      u64 v = (xy * ((y + z) % p) % p * ((z + 1) % p) + t * (y * z % p)) % p;
      n += v == 0;
    }
  }
  return n;
}

}  // namespace detail

// Number of F_p-points of the plane cubic over t, by exhaustive enumeration.
inline u64 count_plane_fibre(const FibreParam& t, i64 p) {
  require_odd_prime(p);
  if (p > kMaxPrime) throw ArgumentError("prime exceeds supported bound " + std::to_string(kMaxPrime));
  const u64 q = static_cast<u64>(p);
  if (t.is_infinity()) {
    // xyz = 0
    u64 n = 0;
    for (u64 y = 0; y < q; ++y)
      for (u64 z = 0; z < q; ++z) n += (y * z % q) == 0;
    n += q;  // (0:1:z)
    n += 1;  // (0:0:1)
    return n;
  }
  const u64 tv = static_cast<u64>(t.value());
  u64 n = detail::count_affine_rows(tv, q, 0, q);
  // (0:1:z): (1)(1+z)(z) + t*0 = z(z+1)
  for (u64 z = 0; z < q; ++z) n += (z * ((z + 1) % q)) % q == 0;
  // (0:0:1): (0)(1)(1) = 0 always on the curve
  n += 1;
  return n;
}

// Point count of the fibre of the resolved surface. Only the fibre over
// infinity is touched by the resolution: three exceptional lines, 3p new points.
inline u64 count_resolved_fibre(const FibreParam& t, i64 p) {
  require_supported_characteristic(p);
  u64 n = count_plane_fibre(t, p);
  if (t.is_infinity()) n += 3 * static_cast<u64>(p);
  return n;
}

// Resolved count of a singular fibre from its Kodaira type alone. The I1
// fibre over -8 has its node tangents defined over Q(sqrt(-3)), so it is split
// multiplicative exactly when -3 is a square mod p.
inline std::optional<u64> resolved_fibre_closed_form(const FibreClass& c, i64 p) {
  require_supported_characteristic(p);
  const u64 q = static_cast<u64>(p);
  const bool split = legendre(-3, p) == 1;
  switch (c.kodaira) {
    case Kodaira::I6: return 6 * q;
    case Kodaira::I3: return 3 * q;
    case Kodaira::I2: return split ? 2 * q : 2 * q + 2;
    case Kodaira::I1: return split ? q : q + 2;
    case Kodaira::III: return 2 * q + 1;
    case Kodaira::Smooth: return std::nullopt;
  }
  return std::nullopt;
}

// Resolved counts of every fibre over F_p; index p holds the fibre over infinity.
class FibreTable {
 public:
  FibreTable(i64 p, unsigned threads = 1) : p_(p) {
    require_supported_characteristic(p);
    counts_.assign(static_cast<std::size_t>(p) + 1, 0);
    const u64 q = static_cast<u64>(p);
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(p));
    auto work = [&](unsigned offset) {
      for (u64 k = offset; k < q; k += threads) counts_[k] = count_resolved_fibre(FibreParam::at(static_cast<i64>(k), p), p);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work, i);
    }
    counts_[q] = count_resolved_fibre(FibreParam::infinity(), p);
  }

  i64 prime() const { return p_; }

  u64 at(const FibreParam& t) const {
    return t.is_infinity() ? counts_.back() : counts_.at(static_cast<std::size_t>(t.value()));
  }

  const std::vector<u64>& counts() const { return counts_; }

 private:
  i64 p_;
  std::vector<u64> counts_;
};

}  // namespace cymod
