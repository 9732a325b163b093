#include "almostsq/gaps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "parallel.hpp"

namespace almostsq {

namespace {

using u64 = std::uint64_t;

bool same(const U64Range& a, const U64Range& b) {
  return (a.empty() && b.empty()) || (a.lo == b.lo && a.hi == b.hi);
}

struct Segment {
  u64 lo;
  u64 hi;
  U64Range window;
};

class WindowTable {
 public:
  WindowTable(const Ratio& theta, const Ratio& c2, const PrecisionLadder& ladder)
      : theta_(theta), c2_(c2), ladder_(ladder) {
    // The lower window end sqrt(x) - c x^theta is nondecreasing once
    // x^(1/2 - theta) >= 2 c theta, i.e. x^(v - 2u) (b v)^(2v) >= (2 a u)^(2v).
    const auto u = static_cast<unsigned>(theta.num());
    const auto v = static_cast<unsigned>(theta.den());
    monotone_exponent_ = v - 2 * u;
    monotone_lhs_scale_ = pow(BigInt(c2.den()) * v, 2 * v);
    monotone_rhs_ = pow(BigInt(2) * c2.num() * u, 2 * v);
  }

  U64Range window_at(u64 n) const {
    const IntegerInterval w = window_around_root(BigInt(n), theta_, c2_, ladder_);
    if (w.empty() || w.hi < 1) return {};
    return to_window_range(w);
  }

  bool monotone_from(u64 a) const {
    return pow(BigInt(a), monotone_exponent_) * monotone_lhs_scale_ >= monotone_rhs_;
  }

  std::vector<Segment> segments(u64 lo, u64 hi) const {
    std::vector<Segment> out;
    build(lo, hi, window_at(lo), window_at(hi), out);
    return out;
  }

 private:
  static void append(std::vector<Segment>& out, Segment seg) {
    if (!out.empty()) {
      Segment& back = out.back();
      if (seg.lo <= back.hi) seg.lo = back.hi + 1;
      if (seg.lo > seg.hi) return;
      if (same(back.window, seg.window) && back.hi + 1 == seg.lo) {
        back.hi = seg.hi;
        return;
      }
    }
    out.push_back(seg);
  }

  void build(u64 a, u64 b, U64Range wa, U64Range wb, std::vector<Segment>& out) const {
    if (same(wa, wb) && monotone_from(a)) {
      append(out, {a, b, wa});
      return;
    }
    if (b - a <= 1) {
      append(out, {a, a, wa});
      append(out, {b, b, wb});
      return;
    }
    const u64 mid = a + (b - a) / 2;
    const U64Range wm = window_at(mid);
    build(a, mid, wa, wm, out);
    build(mid, b, wm, wb, out);
  }

  Ratio theta_;
  Ratio c2_;
  PrecisionLadder ladder_;
  unsigned monotone_exponent_ = 0;
  BigInt monotone_lhs_scale_;
  BigInt monotone_rhs_;
};

struct Chunk {
  u64 lo;
  u64 hi;
  std::size_t first_segment;
  std::size_t last_segment;
};

std::vector<Chunk> cut_chunks(const std::vector<Segment>& segments, u64 width) {
  std::vector<Chunk> chunks;
  const u64 hi = segments.back().hi;
  std::size_t s = 0;
  for (u64 start = segments.front().lo;;) {
    const u64 end = hi - start < width ? hi : start + width - 1;
    while (segments[s].hi < start) ++s;
    std::size_t last = s;
    while (segments[last].hi < end) ++last;
    chunks.push_back({start, end, s, last});
    if (end == hi) break;
    start = end + 1;
  }
  return chunks;
}

// Quadruple bounds implied by any integer window [L, H]: every element is at
// most H - L and at least L / (H - L).
U64Range quad_for_window(const U64Range& w) {
  if (w.empty() || w.hi == w.lo) return {};
  const u64 width = w.hi - w.lo;
  return {std::max<u64>(1, (w.lo + width - 1) / width), width};
}

std::vector<GapBin> bin_gaps(const std::vector<u64>& gaps) {
  std::vector<GapBin> bins;
  for (u64 g : gaps) {
    const auto idx = static_cast<std::size_t>(std::bit_width(g) - 1);
    while (bins.size() <= idx) {
      const u64 lo = u64{1} << bins.size();
      bins.push_back({lo, 2 * lo - 1, 0});
    }
    ++bins[idx].count;
  }
  return bins;
}

void fit_within(GapReport& report, const std::vector<u64>& instances) {
  constexpr int kBlocks = 8;
  const double lo = static_cast<double>(report.range_lo);
  const double hi = static_cast<double>(report.range_hi) + 1;
  if (hi / lo < 2) {
    report.fit_note = "range spans less than a factor of 2; no within-report fit";
    return;
  }
  const double ratio = std::pow(hi / lo, 1.0 / kBlocks);
  std::vector<std::pair<double, double>> points;
  std::size_t i = 0;
  for (int b = 0; b < kBlocks; ++b) {
    const double block_lo = lo * std::pow(ratio, b);
    const double block_hi = lo * std::pow(ratio, b + 1);
    u64 best = 0;
    std::optional<u64> prev;
    for (; i < instances.size() && static_cast<double>(instances[i]) < block_hi; ++i) {
      if (prev) best = std::max(best, instances[i] - *prev);
      prev = instances[i];
    }
    if (best > 0) points.push_back({std::sqrt(block_lo * block_hi), static_cast<double>(best)});
  }
  if (points.size() < 2) {
    report.fit_note = "fewer than two geometric blocks with a gap; no within-report fit";
    return;
  }
  report.fitted_exponent = fit_exponent(points);
  report.fit_note = "max gap per block vs block midpoint over " + std::to_string(points.size()) +
                    " of " + std::to_string(kBlocks) + " geometric blocks; unweighted";
}

}  // namespace

std::uint64_t count_quadruples(const WindowSpec& spec, const ScanOptions& options) {
  const IntegerInterval window = factor_window(spec, options.ladder);
  const IntegerInterval quad = quadruple_range(spec, options.ladder);
  if (window.empty() || window.hi < 1 || quad.empty()) return 0;
  const auto quad_hi = to_u64(quad.hi);
  if (!quad_hi) throw CapacityExceeded("quadruple range exceeds 64 bits");
  return count_quadruples_in(to_window_range(window), {quad.lo.convert_to<u64>(), *quad_hi},
                             options);
}

GapReport gap_scan(std::uint64_t range_lo, std::uint64_t range_hi, const Ratio& theta,
                   const Ratio& c2, const GapScanOptions& options) {
  if (range_lo < 2 || range_lo > range_hi) {
    throw InvalidArgument("gap_scan: need 2 <= range_lo <= range_hi");
  }
  const WindowSpec validated(BigInt(range_lo), theta, c2);

  GapReport report;
  report.theta = theta;
  report.c2 = c2;
  report.range_lo = range_lo;
  report.range_hi = range_hi;
  report.exponent_slack = options.exponent_slack;
  report.predicted_gap_exponent_lower = 1.0 - 2.0 * theta.to_double();
  if (Ratio(1, 4) <= theta && theta <= Ratio(1, 3)) {
    report.predicted_gap_exponent_upper = 1.0 - theta.to_double();
  }

  const WindowTable table(theta, c2, options.ladder);
  const std::vector<Segment> segments = table.segments(range_lo, range_hi);
  report.window_segments = segments.size();

  u64 width = options.chunk_width;
  if (width == 0) {
    width = std::max<u64>(1024, static_cast<u64>(std::sqrt(static_cast<double>(range_hi))));
  }
  const std::vector<Chunk> chunks = cut_chunks(segments, width);

  ScanOptions inner = options.scan;
  inner.threads = 1;
  auto per_chunk = detail::run_chunks<std::vector<u64>>(
      chunks.size(), options.scan.threads, [&](std::size_t ci) {
        const Chunk& chunk = chunks[ci];
        U64Range cover{~u64{0}, 0};
        for (std::size_t s = chunk.first_segment; s <= chunk.last_segment; ++s) {
          const U64Range& w = segments[s].window;
          if (w.empty()) continue;
          cover.lo = std::min(cover.lo, w.lo);
          cover.hi = std::max(cover.hi, w.hi);
        }
        std::vector<u64> found;
        if (cover.empty()) return found;
        const auto candidates =
            scan_quadruples_in({chunk.lo, chunk.hi}, cover, quad_for_window(cover), inner);
        std::size_t s = chunk.first_segment;
        for (const auto& rec : candidates) {
          while (segments[s].hi < rec.n()) ++s;
          const U64Range& own = segments[s].window;
          const auto in_window = std::count_if(rec.pairs().begin(), rec.pairs().end(),
                                               [&](const FactorPair& p) {
                                                 return !own.empty() && p.a >= own.lo && p.b <= own.hi;
                                               });
          if (in_window >= 2) found.push_back(rec.n());
        }
        return found;
      });

  std::vector<u64> instances;
  for (auto& part : per_chunk) instances.insert(instances.end(), part.begin(), part.end());

  report.instance_count = instances.size();
  std::vector<u64> gaps;
  for (std::size_t i = 1; i < instances.size(); ++i) gaps.push_back(instances[i] - instances[i - 1]);
  report.max_gap = gaps.empty() ? 0 : *std::max_element(gaps.begin(), gaps.end());
  report.histogram_mode = options.histogram || instances.size() > options.histogram_threshold;
  fit_within(report, instances);
  if (report.histogram_mode) {
    report.histogram = bin_gaps(gaps);
  } else {
    report.gaps = std::move(gaps);
    report.instances = std::move(instances);
  }
  return report;
}

double fit_exponent(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, value] : points) {
    if (!(x > 0) || !(value > 0)) throw DegenerateFit("fit_exponent: coordinates must be positive");
    logs.push_back({std::log(x), std::log(value)});
  }
  std::map<double, int> distinct;
  for (const auto& p : points) distinct[p.first]++;
  if (distinct.size() < 2) throw DegenerateFit("fit_exponent: need at least two distinct x");

  double mx = 0, my = 0;
  for (const auto& [lx, ly] : logs) {
    mx += lx;
    my += ly;
  }
  mx /= static_cast<double>(logs.size());
  my /= static_cast<double>(logs.size());
  double sxy = 0, sxx = 0;
  for (const auto& [lx, ly] : logs) {
    sxy += (lx - mx) * (ly - my);
    sxx += (lx - mx) * (lx - mx);
  }
  return sxy / sxx;
}

}  // namespace almostsq
