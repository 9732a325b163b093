#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "almostsq/numeric.hpp"

namespace almostsq {

/// Closed interval [lo, hi] known to contain a real value. lo == hi means
/// the value is known exactly.
struct Enclosure {
  BigRational lo;
  BigRational hi;

  bool exact() const { return lo == hi; }
};

/// mantissa / 2^scale_bits approximates a real value to within error_bound.
struct FixedPointApprox {
  BigInt mantissa;
  unsigned scale_bits = 0;
  BigRational error_bound;

  BigRational value() const;
  Enclosure enclosure() const;
  bool exact() const { return error_bound == 0; }
};

struct RationalApprox {
  BigInt p;
  BigInt q{1};

  BigRational value() const { return BigRational(p, q); }
  friend bool operator==(const RationalApprox&, const RationalApprox&) = default;
};

/// Bit widths tried, doubling from start_bits, before PrecisionExhausted.
struct PrecisionLadder {
  unsigned start_bits = 128;
  unsigned cap_bits = 1024;
};

/// floor(x^(1/k)), exact.
BigInt int_root(const BigInt& x, unsigned k);

/// Encloses x^exponent (exponent >= 0) between consecutive multiples of 2^-bits;
/// the enclosure collapses to a point when the power is rational.
Enclosure enclose_power(const BigInt& x, const Ratio& exponent, unsigned bits);

/// Fractional part of x^(1/4) at the given scale, from the exact root of x * 2^(4 scale).
FixedPointApprox frac_fourth_root(const BigInt& x, unsigned scale_bits);

/// Reinterprets the same mantissa at scale_bits - k, i.e. multiplies the value by 2^k.
FixedPointApprox times_pow2(const FixedPointApprox& a, unsigned k);

/// Continued-fraction convergents with q <= max_q, in increasing q order.
///
/// For an enclosure, a partial quotient is emitted only when both ends of the
/// current complete-quotient interval agree on it, so every returned convergent
/// belongs to the true value. Throws PrecisionExhausted when the enclosure is
/// too wide to decide whether another convergent fits under max_q.
std::vector<RationalApprox> convergents(const Enclosure& alpha, const BigInt& max_q);
std::vector<RationalApprox> convergents(const BigRational& alpha, const BigInt& max_q);
std::vector<RationalApprox> convergents(const FixedPointApprox& alpha, const BigInt& max_q);

/// Last convergent with denominator <= Q. Satisfies |alpha - p/q| <= 1/(q q') with
/// q' > Q the next convergent denominator, hence <= 1/(q Q).
RationalApprox dirichlet_approx(const BigRational& alpha, const BigInt& Q);
RationalApprox dirichlet_approx(const FixedPointApprox& alpha, const BigInt& Q);

/// Re-evaluates alpha along the precision ladder until the answer is certified.
RationalApprox dirichlet_approx(const std::function<FixedPointApprox(unsigned)>& alpha_at,
                                const BigInt& Q, const PrecisionLadder& ladder = {});

/// One term coef * x^exponent of a certified sum.
struct PowerTerm {
  BigRational coef;
  Ratio exponent;
};

/// floor(constant + sum coef_i * x^exponent_i), certified by widening precision
/// along the ladder. Exact when every power is rational.
BigInt certified_floor(const BigInt& x, std::span<const PowerTerm> terms,
                       const BigRational& constant, const PrecisionLadder& ladder = {});
BigInt certified_ceil(const BigInt& x, std::span<const PowerTerm> terms,
                      const BigRational& constant, const PrecisionLadder& ladder = {});

/// floor(c * x^exponent) for c >= 0, computed without any approximation.
BigInt floor_scaled_power(const BigInt& x, const Ratio& exponent, const Ratio& c);

}  // namespace almostsq
