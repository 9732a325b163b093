#include <doctest.h>

#include <map>
#include <random>

#include "almostsq/enumerate.hpp"

using namespace almostsq;

namespace {

using Records = std::vector<AlmostSquare>;

// Trial division: every n in target whose divisors a <= sqrt(n) with a, n/a in
// the window number at least two.
Records trial_division(U64Range target, U64Range window) {
  Records out;
  for (std::uint64_t n = target.lo; n <= target.hi; ++n) {
    std::vector<FactorPair> pairs;
    for (std::uint64_t a = std::max<std::uint64_t>(window.lo, 1); a * a <= n && a <= window.hi; ++a) {
      if (n % a == 0 && window.contains(n / a)) pairs.push_back({a, n / a});
    }
    if (pairs.size() >= 2) out.emplace_back(n, std::move(pairs));
  }
  return out;
}

U64Range window_of(const WindowSpec& spec) { return to_window_range(factor_window(spec)); }

}  // namespace

TEST_CASE("products on a small target match the brute-force record list") {
  const WindowSpec spec(14520, Ratio(1, 4), Ratio(2));
  const IntegerInterval target{14000, 15000};
  const Records expected{
      {14000, {{100, 140}, {112, 125}}},
      {14040, {{104, 135}, {108, 130}, {117, 120}}},
      {14280, {{102, 140}, {105, 136}, {119, 120}}},
      {14364, {{108, 133}, {114, 126}}},
      {14490, {{105, 138}, {115, 126}}},
      {14520, {{110, 132}, {120, 121}}},
      {14560, {{104, 140}, {112, 130}}},
  };
  CHECK(scan_products(target, spec) == expected);
  CHECK(scan_quadruples(target, spec) == expected);
}

TEST_CASE("empty factor window yields nothing") {
  // sqrt(2) +- 1/64 contains no integer
  const WindowSpec spec(2, Ratio(0), Ratio(1, 64));
  CHECK(factor_window(spec).empty());
  CHECK(scan_products({1, 100}, spec).empty());
  CHECK(scan_quadruples({1, 100}, spec).empty());
}

TEST_CASE("collision-free window has no almost squares") {
  const WindowSpec spec(1000500, Ratio(1, 5), Ratio(1));
  const IntegerInterval target{1000000, 1001000};
  CHECK(scan_products(target, spec).empty());
  CHECK(scan_quadruples(target, spec).empty());
}

TEST_CASE("duplicate products vanish whenever the quadruple range is empty") {
  for (std::int64_t x : {1000000LL, 100000000LL, 10000000000LL}) {
    const WindowSpec spec(x, Ratio(1, 5), Ratio(1));
    REQUIRE(is_collision_free_regime(spec));
    CHECK(duplicate_products(window_of(spec)).empty());
  }
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 60; ++i) {
    const WindowSpec spec(BigInt(1000 + rng() % 10000000000ULL), Ratio(static_cast<std::int64_t>(rng() % 13), 40),
                          Ratio(1 + static_cast<std::int64_t>(rng() % 8), 4));
    if (!is_collision_free_regime(spec)) continue;
    ++checked;
    CHECK(duplicate_products(window_of(spec)).empty());
  }
  CHECK(checked > 10);
}

TEST_CASE("duplicate products equal the record set over the full product range") {
  const WindowSpec spec(14520, Ratio(1, 4), Ratio(2));
  const U64Range w = window_of(spec);
  const auto dups = duplicate_products(w);
  const auto recs = scan_quadruples_in({w.lo * w.lo, w.hi * w.hi}, w, to_window_range(quadruple_range(spec)));
  REQUIRE(dups.size() == recs.size());
  for (std::size_t i = 0; i < dups.size(); ++i) CHECK(dups[i] == recs[i].n());
}

TEST_CASE("trial division agrees with both scans") {
  const WindowSpec spec(55000, Ratio(1, 3), Ratio(2));
  const IntegerInterval target{10000, 100000};
  const auto oracle = trial_division(to_target_range(target), window_of(spec));
  CHECK(!oracle.empty());
  CHECK(scan_products(target, spec) == oracle);
  CHECK(scan_quadruples(target, spec) == oracle);
}

TEST_CASE("scans agree on random specs") {
  std::mt19937_64 rng(37);
  const std::vector<Ratio> thetas{Ratio(13, 50), Ratio(3, 10), Ratio(1, 3), Ratio(1, 4), Ratio(2, 5)};
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t x = 1000 + rng() % 3000000;
    const WindowSpec spec(BigInt(x), thetas[rng() % thetas.size()], Ratio(1 + static_cast<std::int64_t>(rng() % 3)));
    const std::uint64_t width = 1 + rng() % 3000;
    const std::uint64_t lo = x > width / 2 ? x - width / 2 : 1;
    const IntegerInterval target{BigInt(lo), BigInt(lo + width)};
    const auto p = scan_products(target, spec);
    CHECK(p == scan_quadruples(target, spec));
    if (i % 4 == 0) CHECK(p == trial_division(to_target_range(target), window_of(spec)));
  }
}

TEST_CASE("results do not depend on the thread count") {
  const WindowSpec spec(3000000, Ratio(1, 3), Ratio(2));
  const IntegerInterval target{2900000, 3100000};
  const auto one = scan_quadruples(target, spec, {.budget = 1'000'000'000, .threads = 1});
  CHECK(!one.empty());
  for (unsigned t : {2u, 3u, 8u}) {
    CHECK(scan_quadruples(target, spec, {.budget = 1'000'000'000, .threads = t}) == one);
    CHECK(scan_products(target, spec, {.budget = 1'000'000'000, .threads = t}) == one);
  }
}

TEST_CASE("budget is enforced before any work") {
  const WindowSpec spec(3000000, Ratio(1, 3), Ratio(2));
  const IntegerInterval target{2900000, 3100000};
  CHECK_THROWS_AS(scan_products(target, spec, {.budget = 100, .threads = 1}), CapacityExceeded);
  CHECK_THROWS_AS(scan_quadruples(target, spec, {.budget = 100, .threads = 1}), CapacityExceeded);
}

TEST_CASE("windows beyond 32 bits are refused") {
  CHECK_THROWS_AS(to_window_range({BigInt(1), BigInt(1) << 33}), CapacityExceeded);
  CHECK_NOTHROW(to_window_range({BigInt(1), (BigInt(1) << 32) - 1}));
}

TEST_CASE("AlmostSquare invariants") {
  CHECK_NOTHROW(AlmostSquare(36, {{4, 9}, {6, 6}}));
  CHECK_THROWS_AS(AlmostSquare(36, {{4, 9}}), InvalidArgument);
  CHECK_THROWS_AS(AlmostSquare(36, {{6, 6}, {4, 9}}), InvalidArgument);
  CHECK_THROWS_AS(AlmostSquare(36, {{4, 9}, {5, 7}}), InvalidArgument);
  CHECK_THROWS_AS(AlmostSquare(36, {{9, 4}, {6, 6}}), InvalidArgument);
  CHECK_THROWS_AS(AlmostSquare(36, {{4, 9}, {4, 9}}), InvalidArgument);
}

TEST_CASE("every record satisfies the invariants and has in-window factors") {
  const WindowSpec spec(500000, Ratio(3, 10), Ratio(2));
  const U64Range w = window_of(spec);
  const auto recs = scan_products({480000, 520000}, spec);
  CHECK(!recs.empty());
  std::uint64_t prev = 0;
  for (const auto& r : recs) {
    CHECK(r.n() > prev);
    prev = r.n();
    for (const auto& p : r.pairs()) {
      CHECK(p.a * p.b == r.n());
      CHECK(w.contains(p.a));
      CHECK(w.contains(p.b));
    }
  }
}
