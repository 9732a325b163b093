#pragma once

#include <string>
#include <vector>

#include "almostsq/exactmath.hpp"
#include "almostsq/window.hpp"

namespace almostsq {

/// Transcript of one run of the near-x construction. With
/// d1 = qN + r1, d2 = qN + r2, e1 = (N + s1)/q, e2 = (N + s2)/q the integer
/// n = (d1 e1)(d2 e2) = (d1 e2)(d2 e1) lies close to x.
struct ConstructionResult {
  BigInt x;
  Ratio epsilon;
  BigInt N;                ///< floor(x^(1/4))
  FixedPointApprox xi;     ///< fractional part of x^(1/4), at the ladder's start precision
  BigInt dirichlet_limit;  ///< floor(N^epsilon), the largest admissible q
  BigInt p;
  BigInt q;
  BigInt s1, s2;
  BigInt r1, r2;
  BigInt d1, d2, e1, e2;
  BigInt n;
  BigInt abs_error;  ///< |n - x|
  Ratio theta_effective;
  /// d1 e2 == d2 e1: the two middle factors coincide and n has a square factorization.
  bool middle_pair_tie = false;

  /// The four factors a1 = d1 e1 <= {d1 e2, d2 e1} <= b1 = d2 e2.
  std::vector<BigInt> factors() const;
};

/// Throws TargetTooSmall when floor(x^(1/4)) < 16, InvalidArgument unless
/// epsilon lies in (0, 1/3] with denominator <= 64, and PrecisionExhausted if
/// 4 {x^(1/4)} cannot be certified within the ladder.
ConstructionResult construct_near(const BigInt& x, const Ratio& epsilon,
                                  const PrecisionLadder& ladder = {});

struct ClauseResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ConstructionReport {
  Ratio C;
  Ratio C_prime;
  std::vector<ClauseResult> clauses;

  bool pass() const;
  const ClauseResult& clause(std::string_view name) const;
};

inline constexpr std::int64_t kDefaultFactorSlack = 8;   // C
inline constexpr std::int64_t kDefaultErrorSlack = 32;   // C'

/// Independently re-checks a transcript against x and epsilon:
///   "factorizations": (d1 e1)(d2 e2) = (d1 e2)(d2 e1) = n
///   "recipe":         the transcript's internal identities (d1 = qN + r1, ...,
///                     (r1 + r2)/q + s1 + s2 = p/q, e2 = e1 + 1)
///   "window":         all four factors within C x^theta of x^(1/2), theta = 1/4 + epsilon/4
///   "error":          |n - x| <= C' x^(3/4 - epsilon/4)
///   "dirichlet":      q <= N^epsilon and |4 {x^(1/4)} - p/q| <= 1/(q N^epsilon)
ConstructionReport verify_construction(const ConstructionResult& res, const BigInt& x,
                                       const Ratio& epsilon, const Ratio& C = Ratio(kDefaultFactorSlack),
                                       const Ratio& C_prime = Ratio(kDefaultErrorSlack),
                                       const PrecisionLadder& ladder = {});

}  // namespace almostsq
