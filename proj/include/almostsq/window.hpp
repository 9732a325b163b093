#pragma once

#include "almostsq/exactmath.hpp"
#include "almostsq/numeric.hpp"

namespace almostsq {

/// Inclusive integer interval; empty iff lo > hi.
struct IntegerInterval {
  BigInt lo;
  BigInt hi;

  bool empty() const { return lo > hi; }
  bool contains(const BigInt& v) const { return lo <= v && v <= hi; }
  BigInt size() const { return empty() ? BigInt(0) : hi - lo + 1; }
  friend bool operator==(const IntegerInterval&, const IntegerInterval&) = default;
};

/// Center x with exponent theta and coefficient c2: factors are drawn from
/// [x^(1/2) - c2 x^theta, x^(1/2) + c2 x^theta].
class WindowSpec {
 public:
  static constexpr std::int64_t kMaxDenominator = 64;

  /// Throws InvalidArgument unless x >= 2, 0 <= theta < 1/2, c2 > 0 and both
  /// rationals have denominator <= 64.
  WindowSpec(BigInt x, Ratio theta, Ratio c2);

  const BigInt& x() const { return x_; }
  const Ratio& theta() const { return theta_; }
  const Ratio& c2() const { return c2_; }

  /// Same theta and c2, re-anchored at another center.
  WindowSpec at(BigInt x) const { return WindowSpec(std::move(x), theta_, c2_); }

 private:
  BigInt x_;
  Ratio theta_;
  Ratio c2_;
};

/// [ceil(x^(1/2) - c x^theta), floor(x^(1/2) + c x^theta)] for any theta in [0, 1)
/// and c > 0. WindowSpec-free so other modules can use wider parameter ranges.
IntegerInterval window_around_root(const BigInt& x, const Ratio& theta, const Ratio& c,
                                   const PrecisionLadder& ladder = {});

IntegerInterval factor_window(const WindowSpec& spec, const PrecisionLadder& ladder = {});

/// [ceil(x - c1 x^g), floor(x + c1 x^g)] for g in (0, 1].
IntegerInterval center_interval(const BigInt& x, const Ratio& g, const Ratio& c1);

/// Range every element of a quadruple decomposition must lie in:
/// [max(1, ceil(x^(1/2-theta) / (2 c2) - 1/2)), floor(2 c2 x^theta)].
IntegerInterval quadruple_range(const WindowSpec& spec, const PrecisionLadder& ladder = {});

/// True iff quadruple_range(spec) is empty, in which case no two distinct
/// pairs from the factor window share a product.
bool is_collision_free_regime(const WindowSpec& spec, const PrecisionLadder& ladder = {});

}  // namespace almostsq
