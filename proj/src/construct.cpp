#include "almostsq/construct.hpp"

#include <algorithm>

namespace almostsq {

namespace {

const Ratio kMaxEpsilon(1, 3);

void check_epsilon(const Ratio& epsilon) {
  if (epsilon <= Ratio(0) || kMaxEpsilon < epsilon) {
    throw InvalidArgument("epsilon must lie in (0, 1/3], got " + epsilon.str());
  }
  if (epsilon.den() > 64) throw InvalidArgument("epsilon denominator must be <= 64");
}

// 4 {x^(1/4)} at `bits` fractional bits.
FixedPointApprox four_xi(const BigInt& x, unsigned bits) {
  return times_pow2(frac_fourth_root(x, bits + 2), 2);
}

Enclosure abs_enclosure(const Enclosure& e) {
  if (e.lo >= 0) return e;
  if (e.hi <= 0) return {-e.hi, -e.lo};
  return {BigRational(0), std::max(BigRational(-e.lo), e.hi)};
}

std::string str(const BigInt& v) { return to_string(v); }

}  // namespace

std::vector<BigInt> ConstructionResult::factors() const {
  BigInt m1 = d1 * e2;
  BigInt m2 = d2 * e1;
  if (m2 < m1) std::swap(m1, m2);
  return {d1 * e1, m1, m2, d2 * e2};
}

ConstructionResult construct_near(const BigInt& x, const Ratio& epsilon,
                                  const PrecisionLadder& ladder) {
  check_epsilon(epsilon);
  ConstructionResult r;
  r.x = x;
  r.epsilon = epsilon;
  r.N = int_root(x, 4);
  if (r.N < 16) {
    throw TargetTooSmall("floor(x^(1/4)) = " + str(r.N) + " is below 16");
  }
  r.xi = frac_fourth_root(x, ladder.start_bits);
  r.dirichlet_limit = floor_scaled_power(r.N, epsilon, Ratio(1));

  RationalApprox pq;
  if (pow(r.N, 4) == x) {
    pq = {0, 1};
  } else {
    pq = dirichlet_approx([&](unsigned bits) { return four_xi(x, bits); }, r.dirichlet_limit, ladder);
  }
  r.p = pq.p;
  r.q = pq.q;

  // Largest two negative s with N + s divisible by q.
  const BigInt residue = r.N % r.q;
  r.s2 = residue == 0 ? BigInt(-r.q) : BigInt(-residue);
  r.s1 = r.s2 - r.q;

  const BigInt split = r.p - r.q * (r.s1 + r.s2);
  if (split < 3) {
    throw InfeasibleSplit("r1 + r2 = " + str(split) + " leaves no room for 0 < r1 < r2");
  }
  r.r1 = 1;
  r.r2 = split - 1;

  r.d1 = r.q * r.N + r.r1;
  r.d2 = r.q * r.N + r.r2;
  r.e1 = (r.N + r.s1) / r.q;
  r.e2 = (r.N + r.s2) / r.q;
  r.n = r.d1 * r.e1 * r.d2 * r.e2;
  r.abs_error = boost::multiprecision::abs(r.n - x);
  r.theta_effective = Ratio(1, 4) + epsilon * Ratio(1, 4);
  r.middle_pair_tie = r.d1 * r.e2 == r.d2 * r.e1;
  return r;
}

bool ConstructionReport::pass() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.pass; });
}

const ClauseResult& ConstructionReport::clause(std::string_view name) const {
  for (const auto& c : clauses) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("no clause named " + std::string(name));
}

ConstructionReport verify_construction(const ConstructionResult& res, const BigInt& x,
                                       const Ratio& epsilon, const Ratio& C, const Ratio& C_prime,
                                       const PrecisionLadder& ladder) {
  check_epsilon(epsilon);
  ConstructionReport report{C, C_prime, {}};

  {
    const bool ok = res.d1 * res.e1 * res.d2 * res.e2 == res.n &&
                    res.d1 * res.e2 * res.d2 * res.e1 == res.n && res.n > 0;
    report.clauses.push_back({"factorizations", ok, "n = " + str(res.n)});
  }

  {
    const BigInt N = int_root(x, 4);
    bool ok = res.N == N && res.q >= 1 && res.d1 == res.q * N + res.r1 &&
              res.d2 == res.q * N + res.r2 && res.e1 * res.q == N + res.s1 &&
              res.e2 * res.q == N + res.s2 && res.e2 == res.e1 + 1 && res.r1 > 0 &&
              res.r1 < res.r2 && res.s1 < res.s2 && res.s2 < 0 &&
              BigRational(res.r1 + res.r2, res.q) + BigRational(res.s1 + res.s2) ==
                  BigRational(res.p, res.q);
    report.clauses.push_back({"recipe", ok, "N = " + str(N) + ", q = " + str(res.q)});
  }

  {
    const Ratio theta = Ratio(1, 4) + epsilon * Ratio(1, 4);
    const IntegerInterval window = window_around_root(x, theta, C, ladder);
    bool ok = true;
    const BigInt root = int_root(x, 2);
    BigInt worst = 0;
    for (const auto& f : res.factors()) {
      ok = ok && window.contains(f);
      worst = std::max(worst, BigInt(boost::multiprecision::abs(f - root)));
    }
    report.clauses.push_back({"window", ok,
                              "factors within [" + str(window.lo) + ", " + str(window.hi) +
                                  "], max |f - floor(sqrt x)| = " + str(worst)});
  }

  {
    const Ratio exponent = Ratio(3, 4) - epsilon * Ratio(1, 4);
    const BigInt bound = floor_scaled_power(x, exponent, C_prime);
    const BigInt err = boost::multiprecision::abs(res.n - x);
    report.clauses.push_back({"error", err == res.abs_error && err <= bound,
                              "|n - x| = " + str(err) + ", bound floor(C' x^" + exponent.str() +
                                  ") = " + str(bound)});
  }

  {
    const BigInt N = int_root(x, 4);
    const BigInt limit = floor_scaled_power(N, epsilon, Ratio(1));
    const bool q_ok = res.q >= 1 && res.q <= limit;
    std::string detail = "q = " + str(res.q) + ", floor(N^eps) = " + str(limit);
    bool ineq_ok = false;
    if (q_ok) {
      const BigRational pq(res.p, res.q);
      bool decided = false;
      for (unsigned bits = ladder.start_bits; bits <= ladder.cap_bits && !decided; bits *= 2) {
        const Enclosure alpha = pow(N, 4) == x ? Enclosure{0, 0} : four_xi(x, bits).enclosure();
        const Enclosure gap = abs_enclosure({alpha.lo - pq, alpha.hi - pq});
        const Enclosure n_eps = enclose_power(N, epsilon, bits);
        const BigRational rhs_lo = 1 / (BigRational(res.q) * n_eps.hi);
        const BigRational rhs_hi = 1 / (BigRational(res.q) * n_eps.lo);
        if (gap.hi <= rhs_lo) {
          ineq_ok = decided = true;
        } else if (gap.lo > rhs_hi) {
          decided = true;
        }
      }
      if (!decided) detail += ", inequality undecided at precision cap";
    }
    report.clauses.push_back({"dirichlet", q_ok && ineq_ok, detail});
  }
  return report;
}

}  // namespace almostsq
