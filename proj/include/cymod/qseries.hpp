#pragma once

// Truncated integer q-series, eta products and newform coefficient fixtures.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "checked.hpp"
#include "error.hpp"
#include "ffarith.hpp"

namespace cymod {

inline constexpr i64 kMaxPrecision = 100000;

// sum_{n=0}^{precision} c_n q^n
class QSeries {
 public:
  explicit QSeries(i64 precision) : coeffs_(checked_size(precision), 0) {}

  static QSeries one(i64 precision) {
    QSeries s(precision);
    s.coeffs_[0] = 1;
    return s;
  }

  i64 precision() const { return static_cast<i64>(coeffs_.size()) - 1; }

  i64 operator[](i64 n) const {
    if (n < 0 || n > precision())
      throw ArgumentError("coefficient q^" + std::to_string(n) + " beyond precision " + std::to_string(precision()));
    return coeffs_[static_cast<std::size_t>(n)];
  }

  void set(i64 n, i64 value) {
    if (n < 0 || n > precision()) throw ArgumentError("index beyond precision");
    coeffs_[static_cast<std::size_t>(n)] = value;
  }

  const std::vector<i64>& coefficients() const { return coeffs_; }

  // Product truncated at the smaller precision. The loop runs over the nonzero
  // terms of the sparser factor, so eta blocks multiply in O(n sqrt n).
  friend QSeries operator*(const QSeries& a, const QSeries& b) {
    const i64 n = std::min(a.precision(), b.precision());
    const QSeries& sparse = a.nonzero_terms(n) <= b.nonzero_terms(n) ? a : b;
    const QSeries& dense = &sparse == &a ? b : a;
    QSeries out(n);
    for (i64 i = 0; i <= n; ++i) {
      i64 ci = sparse.coeffs_[static_cast<std::size_t>(i)];
      if (ci == 0) continue;
      for (i64 j = 0; i + j <= n; ++j) {
        i64 cj = dense.coeffs_[static_cast<std::size_t>(j)];
        if (cj == 0) continue;
        auto& slot = out.coeffs_[static_cast<std::size_t>(i + j)];
        slot = checked::add(slot, checked::mul(ci, cj));
      }
    }
    return out;
  }

  // Multiply by q^k, dropping terms past the precision.
  QSeries shifted(i64 k) const {
    QSeries out(precision());
    for (i64 i = 0; i + k <= precision(); ++i) out.coeffs_[static_cast<std::size_t>(i + k)] = coeffs_[static_cast<std::size_t>(i)];
    return out;
  }

  friend bool operator==(const QSeries&, const QSeries&) = default;

 private:
  static std::size_t checked_size(i64 precision) {
    if (precision < 0 || precision > kMaxPrecision)
      throw ArgumentError("precision must lie in [0, " + std::to_string(kMaxPrecision) + "]");
    return static_cast<std::size_t>(precision) + 1;
  }

  i64 nonzero_terms(i64 n) const {
    return std::count_if(coeffs_.begin(), coeffs_.begin() + n + 1, [](i64 c) { return c != 0; });
  }

  std::vector<i64> coeffs_;
};

// prod_{n >= 1} (1 - q^{mn}) by Euler's pentagonal number theorem:
//   prod (1 - x^n) = sum_{k in Z} (-1)^k x^{k(3k-1)/2}.
inline QSeries eta_block(i64 m, i64 n_max) {
  if (m < 1) throw ArgumentError("eta_block: m must be positive");
  if (n_max < 1) throw ArgumentError("eta_block: n_max must be >= 1");
  QSeries s(n_max);
  s.set(0, 1);
  for (i64 k = 1;; ++k) {
    const i64 sign = k % 2 ? -1 : 1;
    const i64 e1 = m * (k * (3 * k - 1) / 2);
    const i64 e2 = m * (k * (3 * k + 1) / 2);
    if (e1 > n_max) break;
    s.set(e1, sign);
    if (e2 <= n_max) s.set(e2, sign);
  }
  return s;
}

// (eta(t) eta(2t) eta(3t) eta(6t))^2, the weight-4 newform of level 6.
inline QSeries level6_form(i64 n_max) {
  constexpr std::array<i64, 4> kLevels = {1, 2, 3, 6};
  constexpr i64 kExponentTimes24 = 2 * (1 + 2 + 3 + 6);
  static_assert(kExponentTimes24 % 24 == 0, "the eta quotient must have an integral q-power prefactor");
  constexpr i64 kShift = kExponentTimes24 / 24;
  static_assert(kShift == 1);
  if (n_max < 2) throw ArgumentError("level6_form: n_max must be >= 2");

  QSeries prod = QSeries::one(n_max);
  for (i64 m : kLevels) {
    QSeries block = eta_block(m, n_max);
    prod = prod * block;
    prod = prod * block;
  }
  return prod.shifted(kShift);
}

// (1, -a_p, p^3): 1 - a_p T + p^3 T^2 with T = p^{-s}.
inline std::array<i64, 3> euler_factor(i64 p, i64 a_p) {
  require_prime(p);
  return {1, -a_p, checked::mul(p, checked::mul(p, p))};
}

enum class Provenance { PaperExpansion, PaperTable, EtaDerived };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::PaperExpansion: return "paper-expansion";
    case Provenance::PaperTable: return "paper-table";
    case Provenance::EtaDerived: return "eta-derived";
  }
  return "?";
}

inline Provenance parse_provenance(const std::string& s) {
  for (Provenance p : {Provenance::PaperExpansion, Provenance::PaperTable, Provenance::EtaDerived})
    if (to_string(p) == s) return p;
  throw ArgumentError("unknown provenance label '" + s + "'");
}

struct FixtureEntry {
  i64 ap = 0;
  Provenance provenance = Provenance::PaperExpansion;
};

struct NewformFixture {
  i64 level = 0;
  std::vector<i64> prefix;               // a_1, a_2, ... of the q-expansion
  Provenance prefix_provenance = Provenance::PaperExpansion;
  std::map<i64, FixtureEntry> entries;   // prime-indexed coefficients
  std::vector<Cubic> cubics;             // cubics whose splitting fields are the S3/C3 candidates
  bool cubics_complete = false;          // false: the candidate list lives outside this fixture
  std::optional<i64> cubic_count;        // number of candidate extensions, when known
  std::vector<i64> witness_primes;       // primes at which the candidates are known to be irreducible

  std::optional<i64> a_p(i64 p) const {
    if (auto it = entries.find(p); it != entries.end()) return it->second.ap;
    return std::nullopt;
  }

  std::vector<i64> primes() const {
    std::vector<i64> out;
    for (const auto& [p, e] : entries) out.push_back(p);
    return out;
  }

  bool divides_level(i64 p) const { return level % p == 0; }

  // Adds an entry, rejecting disagreement with an existing value for the same prime.
  void add(i64 p, i64 ap, Provenance prov) {
    require_prime(p);
    auto [it, inserted] = entries.try_emplace(p, FixtureEntry{ap, prov});
    if (!inserted && it->second.ap != ap)
      throw ArgumentError("level " + std::to_string(level) + ": conflicting a_" + std::to_string(p) + " (" +
                          std::to_string(it->second.ap) + " vs " + std::to_string(ap) + ")");
    if (!inserted && prov == Provenance::PaperTable) it->second.provenance = prov;
  }
};

}  // namespace cymod
