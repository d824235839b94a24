#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>

namespace cymod::checked {

[[noreturn]] inline void overflow(const char* op, long long a, long long b) {
  std::fprintf(stderr, "cymod: integer overflow in %s(%lld, %lld)\n", op, a, b);
  std::abort();
}

template <typename T>
T mul(T a, T b) {
  T r;
  if (__builtin_mul_overflow(a, b, &r)) overflow("mul", static_cast<long long>(a), static_cast<long long>(b));
  return r;
}

template <typename T>
T add(T a, T b) {
  T r;
  if (__builtin_add_overflow(a, b, &r)) overflow("add", static_cast<long long>(a), static_cast<long long>(b));
  return r;
}

template <typename T>
T sub(T a, T b) {
  T r;
  if (__builtin_sub_overflow(a, b, &r)) overflow("sub", static_cast<long long>(a), static_cast<long long>(b));
  return r;
}

// Narrowing that aborts instead of truncating.
template <typename To, typename From>
To cast(From v) {
  To r = static_cast<To>(v);
  if (static_cast<From>(r) != v || ((r < To{}) != (v < From{}))) overflow("cast", static_cast<long long>(v), 0);
  return r;
}

}  // namespace cymod::checked
