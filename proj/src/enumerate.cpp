#include "almostsq/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "parallel.hpp"

namespace almostsq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kMaxFactor = 0xFFFF'FFFFull;

u64 ceil_div(u64 a, u64 b) { return a / b + (a % b != 0); }

u64 isqrt(u64 v) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(v)));
  while (static_cast<u128>(r) * r > v) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

u64 ceil_sqrt(u64 v) {
  const u64 r = isqrt(v);
  return static_cast<u128>(r) * r == v ? r : r + 1;
}

std::string describe(u64 work, u64 budget) {
  return "scan needs " + std::to_string(work) + " steps, budget is " + std::to_string(budget);
}

// Chunking of [lo, hi] into about 8 pieces per worker.
struct Chunking {
  u64 lo;
  u64 step;
  std::size_t count;

  Chunking(u64 lo_, u64 hi_, unsigned threads) : lo(lo_) {
    const u64 span = hi_ - lo_ + 1;
    const u64 pieces = std::max<u64>(1, std::min<u64>(span, 8ull * detail::resolve_threads(threads)));
    step = ceil_div(span, pieces);
    count = static_cast<std::size_t>(ceil_div(span, step));
  }
  U64Range piece(std::size_t i, u64 hi) const {
    const u64 a = lo + step * i;
    return {a, std::min(hi, a + step - 1)};
  }
};

struct Hit {
  u64 n;
  FactorPair first;
  FactorPair second;
};

std::vector<AlmostSquare> merge_hits(std::vector<std::vector<Hit>> chunks) {
  std::vector<std::pair<u64, FactorPair>> flat;
  for (const auto& chunk : chunks) {
    for (const auto& h : chunk) {
      flat.push_back({h.n, h.first});
      flat.push_back({h.n, h.second});
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());

  std::vector<AlmostSquare> out;
  for (std::size_t i = 0; i < flat.size();) {
    std::size_t j = i;
    std::vector<FactorPair> pairs;
    while (j < flat.size() && flat[j].first == flat[i].first) pairs.push_back(flat[j++].second);
    if (pairs.size() >= 2) out.emplace_back(flat[i].first, std::move(pairs));
    i = j;
  }
  return out;
}

U64Range clamp_window(U64Range window) {
  window.lo = std::max<u64>(window.lo, 1);
  if (!window.empty() && window.hi > kMaxFactor) {
    throw CapacityExceeded("factor window upper end " + std::to_string(window.hi) +
                           " exceeds 2^32 - 1; products would overflow");
  }
  return window;
}

// Bounds on d2 for fixed (d1, e1), or an empty range.
struct QuadBounds {
  U64Range window;
  U64Range quad;
  U64Range target;
  u64 target_root;  // ceil(sqrt(target.lo))

  U64Range e1_range(u64 d1) const {
    const u64 lo = std::max(quad.lo, ceil_div(window.lo, d1));
    const u64 hi = std::min(quad.hi - 1, window.hi / d1);
    return {lo, hi};
  }

  U64Range d2_range(u64 d1, u64 e1) const {
    const u64 a1 = d1 * e1;
    // n = a1 * d2 * e2 <= a1 * d2^2 e1 / d1 = (d2 e1)^2 bounds d2 from below.
    u64 lo = std::max({d1 + 1, quad.lo, ceil_div(target_root, e1)});
    u64 hi = std::min({quad.hi, window.hi / (e1 + 1),
                       static_cast<u64>(target.hi / (static_cast<u128>(a1) * (e1 + 1)))});
    return {lo, hi};
  }

  U64Range e2_range(u64 d1, u64 e1, u64 d2) const {
    const u128 a1d2 = static_cast<u128>(d1 * e1) * d2;
    const u64 lo = std::max({e1 + 1, quad.lo, static_cast<u64>((target.lo + a1d2 - 1) / a1d2)});
    const u64 hi = std::min({quad.hi, window.hi / d2, d2 * e1 / d1, static_cast<u64>(target.hi / a1d2)});
    return {lo, hi};
  }

  u64 work() const {
    u64 total = 0;
    for (u64 d1 = quad.lo; d1 < quad.hi; ++d1) {
      const U64Range e1s = e1_range(d1);
      for (u64 e1 = e1s.lo; e1 <= e1s.hi; ++e1) {
        const U64Range d2s = d2_range(d1, e1);
        if (!d2s.empty()) total += d2s.hi - d2s.lo + 1;
      }
    }
    return total;
  }

  template <class Visit>
  void for_each(U64Range d1s, Visit&& visit) const {
    for (u64 d1 = d1s.lo; d1 <= d1s.hi; ++d1) {
      const U64Range e1s = e1_range(d1);
      for (u64 e1 = e1s.lo; e1 <= e1s.hi; ++e1) {
        const U64Range d2s = d2_range(d1, e1);
        for (u64 d2 = d2s.lo; d2 <= d2s.hi; ++d2) {
          const U64Range e2s = e2_range(d1, e1, d2);
          for (u64 e2 = e2s.lo; e2 <= e2s.hi; ++e2) {
            if (std::gcd(e1, e2) == 1) visit(d1, d2, e1, e2);
          }
        }
      }
    }
  }
};

// Returns nullopt when there is nothing to enumerate.
std::optional<QuadBounds> make_bounds(U64Range target, U64Range window, U64Range quad) {
  window = clamp_window(window);
  quad.lo = std::max<u64>(quad.lo, 1);
  quad.hi = std::min(quad.hi, window.hi);
  if (window.empty() || quad.empty() || quad.lo == quad.hi || target.empty()) return std::nullopt;
  target.lo = std::max<u64>(target.lo, 1);
  return QuadBounds{window, quad, target, ceil_sqrt(target.lo)};
}

}  // namespace

AlmostSquare::AlmostSquare(std::uint64_t n, std::vector<FactorPair> pairs)
    : n_(n), pairs_(std::move(pairs)) {
  if (pairs_.size() < 2) throw InvalidArgument("almost square needs at least two factor pairs");
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    if (p.a > p.b || static_cast<u128>(p.a) * p.b != n_) {
      throw InvalidArgument("factor pair (" + std::to_string(p.a) + ", " + std::to_string(p.b) +
                            ") does not multiply to " + std::to_string(n_));
    }
    if (i > 0 && !(pairs_[i - 1].a < p.a)) throw InvalidArgument("factor pairs not sorted by a");
  }
  // Sorted distinct pairs with a <= b already give a1 < a2 <= b2 < b1.
}

U64Range to_window_range(const IntegerInterval& window) {
  if (window.empty()) return {};
  const BigInt lo = window.lo < 1 ? BigInt(1) : window.lo;
  const auto hi = to_u64(window.hi);
  if (!hi || *hi > kMaxFactor) {
    throw CapacityExceeded("factor window upper end " + to_string(window.hi) + " exceeds 2^32 - 1");
  }
  return {lo.convert_to<u64>(), *hi};
}

U64Range to_target_range(const IntegerInterval& target) {
  if (target.empty() || target.hi < 1) return {};
  const BigInt lo = target.lo < 1 ? BigInt(1) : target.lo;
  const auto hi = to_u64(target.hi);
  if (!hi) throw CapacityExceeded("target upper end " + to_string(target.hi) + " exceeds 64 bits");
  return {lo.convert_to<u64>(), *hi};
}

std::vector<AlmostSquare> scan_products_in(U64Range target, U64Range window,
                                           const ScanOptions& options) {
  window = clamp_window(window);
  if (window.empty() || target.empty()) return {};
  target.lo = std::max<u64>(target.lo, 1);

  const u64 a_hi = std::min(window.hi, isqrt(target.hi));
  if (a_hi < window.lo) return {};
  auto b_range = [&](u64 a) -> U64Range {
    return {std::max(a, ceil_div(target.lo, a)), std::min(window.hi, target.hi / a)};
  };

  u64 work = 0;
  for (u64 a = window.lo; a <= a_hi; ++a) {
    const U64Range bs = b_range(a);
    if (!bs.empty()) work += bs.hi - bs.lo + 1;
  }
  if (work > options.budget) throw CapacityExceeded(describe(work, options.budget));

  // Each hit carries a single pair; the second slot duplicates it and is
  // collapsed by the merge.
  const Chunking chunks(window.lo, a_hi, options.threads);
  auto hits = detail::run_chunks<std::vector<Hit>>(chunks.count, options.threads, [&](std::size_t i) {
    std::vector<Hit> local;
    const U64Range as = chunks.piece(i, a_hi);
    for (u64 a = as.lo; a <= as.hi; ++a) {
      const U64Range bs = b_range(a);
      for (u64 b = bs.lo; b <= bs.hi; ++b) local.push_back({a * b, {a, b}, {a, b}});
    }
    return local;
  });
  return merge_hits(std::move(hits));
}

std::vector<AlmostSquare> scan_quadruples_in(U64Range target, U64Range window, U64Range quad,
                                             const ScanOptions& options) {
  const auto bounds = make_bounds(target, window, quad);
  if (!bounds) return {};
  const u64 work = bounds->work();
  if (work > options.budget) throw CapacityExceeded(describe(work, options.budget));

  const u64 d1_hi = bounds->quad.hi - 1;
  const Chunking chunks(bounds->quad.lo, d1_hi, options.threads);
  auto hits = detail::run_chunks<std::vector<Hit>>(chunks.count, options.threads, [&](std::size_t i) {
    std::vector<Hit> local;
    bounds->for_each(chunks.piece(i, d1_hi), [&](u64 d1, u64 d2, u64 e1, u64 e2) {
      local.push_back({d1 * e1 * d2 * e2, {d1 * e1, d2 * e2}, {d1 * e2, d2 * e1}});
    });
    return local;
  });
  return merge_hits(std::move(hits));
}

std::uint64_t count_quadruples_in(U64Range window, U64Range quad, const ScanOptions& options) {
  const U64Range clamped = clamp_window(window);
  if (clamped.empty()) return 0;
  const U64Range all{clamped.lo * clamped.lo, clamped.hi * clamped.hi};
  const auto bounds = make_bounds(all, clamped, quad);
  if (!bounds) return 0;
  const u64 work = bounds->work();
  if (work > options.budget) throw CapacityExceeded(describe(work, options.budget));

  const u64 d1_hi = bounds->quad.hi - 1;
  const Chunking chunks(bounds->quad.lo, d1_hi, options.threads);
  auto counts = detail::run_chunks<u64>(chunks.count, options.threads, [&](std::size_t i) {
    u64 local = 0;
    bounds->for_each(chunks.piece(i, d1_hi), [&](u64, u64, u64, u64) { ++local; });
    return local;
  });
  return std::accumulate(counts.begin(), counts.end(), u64{0});
}

std::vector<std::uint64_t> duplicate_products(U64Range window, const ScanOptions& options) {
  window = clamp_window(window);
  if (window.empty()) return {};
  const u64 width = window.hi - window.lo + 1;
  const u128 work = static_cast<u128>(width) * (width + 1) / 2;
  if (work > options.budget) throw CapacityExceeded(describe(static_cast<u64>(std::min<u128>(work, ~0ull)), options.budget));

  std::vector<u64> products;
  products.reserve(static_cast<std::size_t>(work));
  for (u64 a = window.lo; a <= window.hi; ++a) {
    for (u64 b = a; b <= window.hi; ++b) products.push_back(a * b);
  }
  std::sort(products.begin(), products.end());
  std::vector<u64> dups;
  for (std::size_t i = 1; i < products.size(); ++i) {
    if (products[i] == products[i - 1] && (dups.empty() || dups.back() != products[i])) {
      dups.push_back(products[i]);
    }
  }
  return dups;
}

std::vector<AlmostSquare> scan_products(const IntegerInterval& target, const WindowSpec& spec,
                                        const ScanOptions& options) {
  const IntegerInterval window = factor_window(spec, options.ladder);
  if (window.empty() || window.hi < 1) return {};
  return scan_products_in(to_target_range(target), to_window_range(window), options);
}

std::vector<AlmostSquare> scan_quadruples(const IntegerInterval& target, const WindowSpec& spec,
                                          const ScanOptions& options) {
  const IntegerInterval window = factor_window(spec, options.ladder);
  const IntegerInterval quad = quadruple_range(spec, options.ladder);
  if (window.empty() || window.hi < 1 || quad.empty()) return {};
  const auto quad_hi = to_u64(quad.hi);
  if (!quad_hi) throw CapacityExceeded("quadruple range exceeds 64 bits");
  return scan_quadruples_in(to_target_range(target), to_window_range(window),
                            {quad.lo.convert_to<u64>(), *quad_hi}, options);
}

}  // namespace almostsq
