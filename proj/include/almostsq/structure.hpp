#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "almostsq/enumerate.hpp"
#include "almostsq/window.hpp"

namespace almostsq {

/// n = (d1 e1)(d2 e2) = (d1 e2)(d2 e1) with 1 < d1 < d2, e1 < e2 and gcd(e1, e2) = 1.
class Decomposition {
 public:
  /// Throws StructureViolation if the invariants above do not hold.
  Decomposition(std::uint64_t d1, std::uint64_t d2, std::uint64_t e1, std::uint64_t e2);

  std::uint64_t d1() const { return d1_; }
  std::uint64_t d2() const { return d2_; }
  std::uint64_t e1() const { return e1_; }
  std::uint64_t e2() const { return e2_; }
  std::array<std::uint64_t, 4> elements() const { return {d1_, d2_, e1_, e2_}; }

  friend bool operator==(const Decomposition&, const Decomposition&) = default;

 private:
  std::uint64_t d1_, d2_, e1_, e2_;
};

/// Recovers the quadruple from the first two pairs via d1 = gcd(a1, a2),
/// d2 = gcd(b1, b2). Throws StructureViolation when d1 or d2 is 1, or when
/// the pairs are not ordered a1 < a2 <= b2 < b1 with a1 b1 = a2 b2.
Decomposition decompose(const AlmostSquare& asq);
Decomposition decompose(FactorPair first, FactorPair second);

/// Every unordered pair of factorizations of a multi-pair record, in
/// lexicographic order of pair indices.
std::vector<Decomposition> decompose_all(const AlmostSquare& asq);

AlmostSquare recompose(const Decomposition& dec);

struct RangeReport {
  IntegerInterval range;
  /// Membership of d1, d2, e1, e2 in range, in that order.
  std::array<bool, 4> in_range{};
  bool pass = false;
};

RangeReport verify_range(const Decomposition& dec, const WindowSpec& spec,
                         const PrecisionLadder& ladder = {});

}  // namespace almostsq
