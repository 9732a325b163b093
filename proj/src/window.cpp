#include "almostsq/window.hpp"

#include <algorithm>
#include <array>

namespace almostsq {

WindowSpec::WindowSpec(BigInt x, Ratio theta, Ratio c2)
    : x_(std::move(x)), theta_(theta), c2_(c2) {
  if (x_ < 2) throw InvalidArgument("window: x must be >= 2");
  if (theta_ < Ratio(0) || !(theta_ < Ratio(1, 2))) {
    throw InvalidArgument("window: theta must lie in [0, 1/2), got " + theta_.str());
  }
  if (c2_ <= Ratio(0)) throw InvalidArgument("window: c2 must be positive, got " + c2_.str());
  if (theta_.den() > kMaxDenominator || c2_.den() > kMaxDenominator) {
    throw InvalidArgument("window: rational denominators must be <= 64");
  }
}

IntegerInterval window_around_root(const BigInt& x, const Ratio& theta, const Ratio& c,
                                   const PrecisionLadder& ladder) {
  if (x < 1) throw InvalidArgument("window: x must be positive");
  const std::array<PowerTerm, 2> plus{PowerTerm{BigRational(1), Ratio(1, 2)},
                                      PowerTerm{c.to_big(), theta}};
  const std::array<PowerTerm, 2> minus{PowerTerm{BigRational(1), Ratio(1, 2)},
                                       PowerTerm{-c.to_big(), theta}};
  return {certified_ceil(x, minus, 0, ladder), certified_floor(x, plus, 0, ladder)};
}

IntegerInterval factor_window(const WindowSpec& spec, const PrecisionLadder& ladder) {
  return window_around_root(spec.x(), spec.theta(), spec.c2(), ladder);
}

IntegerInterval center_interval(const BigInt& x, const Ratio& g, const Ratio& c1) {
  if (x < 1) throw InvalidArgument("center_interval: x must be positive");
  if (g <= Ratio(0) || Ratio(1) < g) throw InvalidArgument("center_interval: g must lie in (0, 1]");
  if (c1 <= Ratio(0)) throw InvalidArgument("center_interval: c1 must be positive");
  const BigInt reach = floor_scaled_power(x, g, c1);
  return {x - reach, x + reach};
}

IntegerInterval quadruple_range(const WindowSpec& spec, const PrecisionLadder& ladder) {
  const Ratio& c = spec.c2();
  const std::array<PowerTerm, 1> lower{
      PowerTerm{BigRational(BigInt(c.den()), BigInt(2) * c.num()), Ratio(1, 2) - spec.theta()}};
  BigInt lo = certified_ceil(spec.x(), lower, BigRational(-1, 2), ladder);
  if (lo < 1) lo = 1;
  const BigInt hi = floor_scaled_power(spec.x(), spec.theta(), Ratio(2) * c);
  return {lo, hi};
}

bool is_collision_free_regime(const WindowSpec& spec, const PrecisionLadder& ladder) {
  return quadruple_range(spec, ladder).empty();
}

}  // namespace almostsq
