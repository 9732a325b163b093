#include "almostsq/exactmath.hpp"

#include <string>

namespace almostsq {

namespace mp = boost::multiprecision;

BigInt int_root(const BigInt& x, unsigned k) {
  if (k == 0) throw InvalidArgument("int_root: k must be positive");
  if (x < 0) throw InvalidArgument("int_root: x must be nonnegative");
  if (x < 2 || k == 1) return x;

  // Newton from above: 2^ceil(bits/k) exceeds the root, and the integer
  // iteration decreases monotonically until it reaches the floor.
  const unsigned bits = static_cast<unsigned>(mp::msb(x)) + 1;
  BigInt r = BigInt(1) << ((bits + k - 1) / k);
  for (;;) {
    BigInt next = (BigInt(k - 1) * r + x / pow(r, k - 1)) / k;
    if (next >= r) break;
    r = std::move(next);
  }
  while (pow(r, k) > x) --r;
  while (pow(r + 1, k) <= x) ++r;
  return r;
}

BigRational FixedPointApprox::value() const {
  return BigRational(mantissa, BigInt(1) << scale_bits);
}

Enclosure FixedPointApprox::enclosure() const {
  const BigRational v = value();
  return {v - error_bound, v + error_bound};
}

Enclosure enclose_power(const BigInt& x, const Ratio& exponent, unsigned bits) {
  if (exponent.num() < 0) throw InvalidArgument("enclose_power: negative exponent");
  if (x < 0) throw InvalidArgument("enclose_power: negative base");
  const auto u = static_cast<unsigned>(exponent.num());
  const auto v = static_cast<unsigned>(exponent.den());
  const BigInt radicand = pow(x, u) << (static_cast<std::size_t>(bits) * v);
  const BigInt root = int_root(radicand, v);
  const BigInt unit = BigInt(1) << bits;
  if (pow(root, v) == radicand) {
    BigRational exact(root, unit);
    return {exact, exact};
  }
  return {BigRational(root, unit), BigRational(root + 1, unit)};
}

FixedPointApprox frac_fourth_root(const BigInt& x, unsigned scale_bits) {
  if (x <= 0) throw InvalidArgument("frac_fourth_root: x must be positive");
  if (scale_bits < 16) throw InvalidArgument("frac_fourth_root: scale_bits must be >= 16");
  const BigInt whole = int_root(x, 4);
  const BigInt radicand = x << (4 * static_cast<std::size_t>(scale_bits));
  const BigInt scaled = int_root(radicand, 4);
  FixedPointApprox out;
  out.mantissa = scaled - (whole << scale_bits);
  out.scale_bits = scale_bits;
  out.error_bound =
      pow(scaled, 4) == radicand ? BigRational(0) : BigRational(BigInt(1), BigInt(1) << scale_bits);
  return out;
}

FixedPointApprox times_pow2(const FixedPointApprox& a, unsigned k) {
  if (k > a.scale_bits) throw InvalidArgument("times_pow2: shift exceeds scale");
  FixedPointApprox out = a;
  out.scale_bits -= k;
  out.error_bound *= BigRational(BigInt(1) << k);
  return out;
}

std::vector<RationalApprox> convergents(const Enclosure& alpha, const BigInt& max_q) {
  if (max_q < 1) throw InvalidArgument("convergents: max_q must be positive");
  if (alpha.hi < alpha.lo) throw InvalidArgument("convergents: inverted enclosure");

  std::vector<RationalApprox> out;
  // p_{k-2}/q_{k-2} and p_{k-1}/q_{k-1}, seeded with 0/1 and 1/0.
  BigInt p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  BigRational lo = alpha.lo;
  std::optional<BigRational> hi = alpha.hi;  // nullopt: unbounded above

  for (;;) {
    const BigInt a = floor(lo);
    if (!hi || floor(*hi) != a) {
      // The true quotient is at least a; if even that overflows max_q we are done.
      if (a * q1 + q2 > max_q) break;
      throw PrecisionExhausted("convergents: enclosure too wide to certify partial quotient #" +
                               std::to_string(out.size()));
    }
    BigInt q = a * q1 + q2;
    if (q > max_q) break;
    BigInt p = a * p1 + p2;
    out.push_back({p, q});
    p2 = std::exchange(p1, std::move(p));
    q2 = std::exchange(q1, std::move(q));

    const BigRational lo_rest = lo - BigRational(a);
    const BigRational hi_rest = *hi - BigRational(a);
    if (hi_rest == 0) break;  // value is exactly the last convergent
    BigRational next_lo = 1 / hi_rest;
    if (lo_rest == 0) {
      hi.reset();
    } else {
      hi = 1 / lo_rest;
    }
    lo = std::move(next_lo);
  }
  return out;
}

std::vector<RationalApprox> convergents(const BigRational& alpha, const BigInt& max_q) {
  return convergents(Enclosure{alpha, alpha}, max_q);
}

std::vector<RationalApprox> convergents(const FixedPointApprox& alpha, const BigInt& max_q) {
  return convergents(alpha.enclosure(), max_q);
}

RationalApprox dirichlet_approx(const BigRational& alpha, const BigInt& Q) {
  return convergents(alpha, Q).back();
}

RationalApprox dirichlet_approx(const FixedPointApprox& alpha, const BigInt& Q) {
  if (alpha.exact()) return dirichlet_approx(alpha.value(), Q);
  return convergents(alpha, Q).back();
}

RationalApprox dirichlet_approx(const std::function<FixedPointApprox(unsigned)>& alpha_at,
                                const BigInt& Q, const PrecisionLadder& ladder) {
  for (unsigned bits = ladder.start_bits;; bits *= 2) {
    try {
      return dirichlet_approx(alpha_at(bits), Q);
    } catch (const PrecisionExhausted&) {
      if (bits >= ladder.cap_bits) {
        throw PrecisionExhausted("dirichlet_approx: not certified at " +
                                 std::to_string(ladder.cap_bits) + " bits");
      }
    }
  }
}

namespace {

Enclosure enclose_sum(const BigInt& x, std::span<const PowerTerm> terms,
                      const BigRational& constant, unsigned bits) {
  Enclosure sum{constant, constant};
  for (const auto& term : terms) {
    const Enclosure p = enclose_power(x, term.exponent, bits);
    if (term.coef >= 0) {
      sum.lo += term.coef * p.lo;
      sum.hi += term.coef * p.hi;
    } else {
      sum.lo += term.coef * p.hi;
      sum.hi += term.coef * p.lo;
    }
  }
  return sum;
}

}  // namespace

BigInt certified_floor(const BigInt& x, std::span<const PowerTerm> terms,
                       const BigRational& constant, const PrecisionLadder& ladder) {
  for (unsigned bits = ladder.start_bits; bits <= ladder.cap_bits; bits *= 2) {
    const Enclosure e = enclose_sum(x, terms, constant, bits);
    const BigInt f = floor(e.lo);
    if (e.exact() || floor(e.hi) == f) return f;
  }
  throw PrecisionExhausted("certified_floor: not certified at " + std::to_string(ladder.cap_bits) +
                           " bits");
}

BigInt certified_ceil(const BigInt& x, std::span<const PowerTerm> terms,
                      const BigRational& constant, const PrecisionLadder& ladder) {
  std::vector<PowerTerm> negated(terms.begin(), terms.end());
  for (auto& t : negated) t.coef = -t.coef;
  return -certified_floor(x, negated, -constant, ladder);
}

BigInt floor_scaled_power(const BigInt& x, const Ratio& exponent, const Ratio& c) {
  if (c.num() < 0 || exponent.num() < 0) throw InvalidArgument("floor_scaled_power: negative input");
  const auto u = static_cast<unsigned>(exponent.num());
  const auto v = static_cast<unsigned>(exponent.den());
  // floor(y / b) == floor(floor(y) / b) for integer b > 0.
  const BigInt root = int_root(pow(BigInt(c.num()), v) * pow(x, u), v);
  return root / c.den();
}

}  // namespace almostsq
