#pragma once

// Prime-field arithmetic, quadratic symbols and the degree-3 irreducibility test.

#include <array>
#include <cstdint>
#include <ostream>
#include <string>

#include "checked.hpp"
#include "error.hpp"

namespace cymod {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Every prime the pipeline touches is below this bound; it keeps p^3 times a
// fibre count comfortably inside 64 bits.
inline constexpr i64 kMaxPrime = 10000;

constexpr bool is_prime(i64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (i64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline void require_prime(i64 p) {
  if (!is_prime(p)) throw ArgumentError("not a prime: " + std::to_string(p));
}

inline void require_odd_prime(i64 p) {
  require_prime(p);
  if (p == 2) throw ArgumentError("expected an odd prime, got 2");
}

// Least non-negative residue.
constexpr i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) { return mod(checked::mul(mod(a, m), mod(b, m)), m); }

inline i64 pow_mod(i64 base, u64 e, i64 m) {
  i64 r = 1 % m;
  i64 b = mod(base, m);
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

class FpElem {
 public:
  FpElem(i64 value, i64 p) : value_(0), p_(p) {
    require_prime(p);
    if (p > kMaxPrime * kMaxPrime) throw ArgumentError("modulus too large: " + std::to_string(p));
    value_ = mod(value, p);
  }

  i64 value() const { return value_; }
  i64 modulus() const { return p_; }
  bool is_zero() const { return value_ == 0; }

  friend FpElem operator+(const FpElem& a, const FpElem& b) { return {a.value_ + a.same(b).value_, a.p_}; }
  friend FpElem operator-(const FpElem& a, const FpElem& b) { return {a.value_ - a.same(b).value_, a.p_}; }
  friend FpElem operator*(const FpElem& a, const FpElem& b) {
    return {mul_mod(a.value_, a.same(b).value_, a.p_), a.p_};
  }
  FpElem operator-() const { return {-value_, p_}; }
  friend bool operator==(const FpElem&, const FpElem&) = default;

  friend std::ostream& operator<<(std::ostream& os, const FpElem& a) {
    return os << a.value_ << " mod " << a.p_;
  }

 private:
  const FpElem& same(const FpElem& other) const {
    if (other.p_ != p_) throw ArgumentError("mixed moduli");
    return other;
  }

  i64 value_;
  i64 p_;
};

// Extended Euclid.
inline FpElem inverse(const FpElem& a) {
  if (a.is_zero()) throw DivisionByZero("inverse of 0 mod " + std::to_string(a.modulus()));
  i64 r0 = a.modulus(), r1 = a.value();
  i64 s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    i64 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return {s0, a.modulus()};
}

inline i64 inverse_mod(i64 a, i64 p) { return inverse(FpElem(a, p)).value(); }

// Euler's criterion s^((p-1)/2).
inline int legendre_euler(i64 s, i64 p) {
  require_odd_prime(p);
  i64 r = pow_mod(s, static_cast<u64>((p - 1) / 2), p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

// Jacobi-symbol recursion: reciprocity plus the supplementary laws for -1 and 2.
inline int legendre_reciprocity(i64 s, i64 p) {
  require_odd_prime(p);
  int sign = 1;
  i64 a = s;
  if (a < 0) {
    a = -a;
    if (p % 4 == 3) sign = -sign;
  }
  i64 n = p;
  a %= n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      if (n % 8 == 3 || n % 8 == 5) sign = -sign;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) sign = -sign;
    a %= n;
  }
  return n == 1 ? sign : 0;
}

inline int legendre(i64 s, i64 p) { return legendre_reciprocity(s, p); }

// c3 x^3 + c2 x^2 + c1 x + c0 over the integers.
struct Cubic {
  std::array<i64, 4> coeffs;  // c3, c2, c1, c0

  Cubic(i64 c3, i64 c2, i64 c1, i64 c0) : coeffs{c3, c2, c1, c0} {
    if (c3 == 0) throw ArgumentError("cubic with zero leading coefficient");
  }

  i64 eval_mod(i64 x, i64 p) const {
    i64 acc = 0;
    for (i64 c : coeffs) acc = mod(mul_mod(acc, x, p) + mod(c, p), p);
    return acc;
  }

  friend bool operator==(const Cubic&, const Cubic&) = default;
};

inline std::string to_string(const Cubic& h) {
  std::string out;
  static constexpr const char* kMonomial[] = {"x^3", "x^2", "x", ""};
  for (int i = 0; i < 4; ++i) {
    i64 c = h.coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    bool neg = c < 0;
    i64 a = neg ? -c : c;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    if (a != 1 || i == 3) out += std::to_string(a);
    out += kMonomial[i];
  }
  return out;
}

// A cubic over F_p is irreducible iff it has no root in F_p.
inline bool cubic_irreducible(const Cubic& h, i64 p) {
  require_prime(p);
  if (mod(h.coeffs[0], p) == 0)
    throw DegenerateReduction("leading coefficient of " + to_string(h) + " vanishes mod " + std::to_string(p));
  for (i64 x = 0; x < p; ++x)
    if (h.eval_mod(x, p) == 0) return false;
  return true;
}

// floor(sqrt(n)) for n >= 0.
constexpr u64 isqrt(u64 n) {
  u64 lo = 0, hi = n < 2 ? n : (n / 2 < 0xFFFFFFFFull ? n / 2 : 0xFFFFFFFFull);
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    if (mid * mid <= n)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

// floor(2 p^(3/2)) = floor(sqrt(4 p^3)), exact.
inline i64 weil_bound(i64 p) {
  u64 q = static_cast<u64>(p);
  return static_cast<i64>(isqrt(checked::mul<u64>(4, checked::mul(q, checked::mul(q, q)))));
}

}  // namespace cymod
