#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "almostsq/enumerate.hpp"
#include "almostsq/window.hpp"

namespace almostsq {

/// Canonical quadruples (d1 < d2, e1 < e2, gcd(e1, e2) = 1, d1 e2 <= d2 e1)
/// inside quadruple_range(spec) whose four products lie in factor_window(spec).
/// Equals the number of pairs-of-factorizations over all in-window products.
std::uint64_t count_quadruples(const WindowSpec& spec, const ScanOptions& options = {});

struct GapScanOptions {
  ScanOptions scan;
  PrecisionLadder ladder;
  /// Target width per enumeration chunk; 0 means about sqrt(range_hi).
  std::uint64_t chunk_width = 0;
  /// Histogram output is forced on, or switched on automatically above the threshold.
  bool histogram = false;
  std::uint64_t histogram_threshold = 100'000;
  /// Slack applied to exponent comparisons (stands in for the x^eps of the divisor bound).
  double exponent_slack = 0.25;
};

/// Gap counts binned by powers of two: gaps g with lo <= g <= hi.
struct GapBin {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t count = 0;
};

struct GapReport {
  Ratio theta;
  Ratio c2;
  std::uint64_t range_lo = 0;
  std::uint64_t range_hi = 0;
  std::uint64_t instance_count = 0;
  /// Omitted in histogram mode.
  std::optional<std::vector<std::uint64_t>> instances;
  std::uint64_t max_gap = 0;
  bool histogram_mode = false;
  std::vector<std::uint64_t> gaps;  ///< consecutive differences (list mode)
  std::vector<GapBin> histogram;    ///< binned differences (histogram mode)
  /// Slope of log(max gap per geometric block) against log(block midpoint).
  std::optional<double> fitted_exponent;
  std::string fit_note;
  double exponent_slack = 0.25;
  double predicted_gap_exponent_lower = 0;                 ///< 1 - 2 theta
  std::optional<double> predicted_gap_exponent_upper;      ///< 1 - theta, for 1/4 <= theta <= 1/3
  std::uint64_t window_segments = 0;  ///< distinct exact windows across the range
};

/// Every n in [range_lo, range_hi] that is an almost square for its own window
/// (x = n, theta, c2), with consecutive gaps. Windows are evaluated exactly per
/// n; enumeration runs chunk by chunk over a window covering the whole chunk.
GapReport gap_scan(std::uint64_t range_lo, std::uint64_t range_hi, const Ratio& theta,
                   const Ratio& c2, const GapScanOptions& options = {});

/// Least-squares slope of log(value) against log(x). Throws DegenerateFit with
/// fewer than two distinct x or a nonpositive coordinate.
double fit_exponent(std::span<const std::pair<double, double>> points);

}  // namespace almostsq
