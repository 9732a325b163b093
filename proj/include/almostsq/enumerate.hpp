#pragma once

#include <cstdint>
#include <vector>

#include "almostsq/window.hpp"

namespace almostsq {

struct FactorPair {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  friend auto operator<=>(const FactorPair&, const FactorPair&) = default;
};

/// An integer n with every factor pair (a, b), a <= b, drawn from one window.
/// Construction enforces: at least two pairs, sorted by a, each multiplying to
/// n, and a1 < a2 <= b2 < b1 on the first two.
class AlmostSquare {
 public:
  AlmostSquare(std::uint64_t n, std::vector<FactorPair> pairs);

  std::uint64_t n() const { return n_; }
  const std::vector<FactorPair>& pairs() const { return pairs_; }

  friend bool operator==(const AlmostSquare&, const AlmostSquare&) = default;

 private:
  std::uint64_t n_;
  std::vector<FactorPair> pairs_;
};

/// Inclusive range of machine integers; empty iff lo > hi.
struct U64Range {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;

  bool empty() const { return lo > hi; }
  bool contains(std::uint64_t v) const { return lo <= v && v <= hi; }
};

struct ScanOptions {
  /// Maximum number of candidate products (or quadruple triples) examined.
  std::uint64_t budget = 1'000'000'000;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Precision used for the window edges by the spec-based scans.
  PrecisionLadder ladder;
};

/// Every n in target with >= 2 in-window factor pairs, found by multiplying
/// all pairs a <= b from the factor window. Sorted by n.
std::vector<AlmostSquare> scan_products(const IntegerInterval& target, const WindowSpec& spec,
                                        const ScanOptions& options = {});

/// Same output as scan_products, found by enumerating quadruples
/// (d1, d2, e1, e2) with n = (d1 e1)(d2 e2) = (d1 e2)(d2 e1).
std::vector<AlmostSquare> scan_quadruples(const IntegerInterval& target, const WindowSpec& spec,
                                          const ScanOptions& options = {});

// Explicit-window forms. Factors are taken from `window` (clamped below at 1)
// and quadruple elements from `quad`.
std::vector<AlmostSquare> scan_products_in(U64Range target, U64Range window,
                                           const ScanOptions& options = {});
std::vector<AlmostSquare> scan_quadruples_in(U64Range target, U64Range window, U64Range quad,
                                             const ScanOptions& options = {});

/// Number of canonical quadruples (d1 < d2, e1 < e2, gcd(e1, e2) = 1,
/// d1 e2 <= d2 e1) in `quad` whose four products all lie in `window`.
std::uint64_t count_quadruples_in(U64Range window, U64Range quad, const ScanOptions& options = {});

/// Products a*b (a <= b, both in window) that arise from more than one pair,
/// sorted ascending. Hashes every product in the window.
std::vector<std::uint64_t> duplicate_products(U64Range window, const ScanOptions& options = {});

/// Narrows a window/target interval for the scans. Throws CapacityExceeded when
/// products of window elements would not fit in 64 bits.
U64Range to_window_range(const IntegerInterval& window);
U64Range to_target_range(const IntegerInterval& target);

}  // namespace almostsq
