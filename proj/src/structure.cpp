#include "almostsq/structure.hpp"

#include <numeric>
#include <string>

namespace almostsq {

namespace {

using u128 = unsigned __int128;

std::string quad_text(std::uint64_t d1, std::uint64_t d2, std::uint64_t e1, std::uint64_t e2) {
  return "(" + std::to_string(d1) + ", " + std::to_string(d2) + ", " + std::to_string(e1) + ", " +
         std::to_string(e2) + ")";
}

}  // namespace

Decomposition::Decomposition(std::uint64_t d1, std::uint64_t d2, std::uint64_t e1,
                             std::uint64_t e2)
    : d1_(d1), d2_(d2), e1_(e1), e2_(e2) {
  if (d1 <= 1 || d2 <= 1) {
    throw StructureViolation("decomposition " + quad_text(d1, d2, e1, e2) + " has d1 or d2 <= 1");
  }
  if (!(d1 < d2) || e1 == 0 || !(e1 < e2) || std::gcd(e1, e2) != 1) {
    throw StructureViolation("decomposition " + quad_text(d1, d2, e1, e2) +
                             " violates d1 < d2, e1 < e2, gcd(e1, e2) = 1");
  }
}

Decomposition decompose(FactorPair first, FactorPair second) {
  const auto [a1, b1] = first;
  const auto [a2, b2] = second;
  if (!(a1 < a2 && a2 <= b2 && b2 < b1)) {
    throw StructureViolation("pairs not ordered a1 < a2 <= b2 < b1");
  }
  if (static_cast<u128>(a1) * b1 != static_cast<u128>(a2) * b2) {
    throw StructureViolation("pairs do not share a product");
  }
  const std::uint64_t d1 = std::gcd(a1, a2);
  const std::uint64_t d2 = std::gcd(b1, b2);
  const std::uint64_t e1 = a1 / d1;
  const std::uint64_t e2 = a2 / d1;
  if (d1 * e1 != a1 || d1 * e2 != a2 || d2 * e1 != b2 || d2 * e2 != b1) {
    throw StructureViolation("gcd decomposition does not reproduce the pairs: " +
                             quad_text(d1, d2, e1, e2));
  }
  return Decomposition(d1, d2, e1, e2);
}

Decomposition decompose(const AlmostSquare& asq) {
  return decompose(asq.pairs()[0], asq.pairs()[1]);
}

std::vector<Decomposition> decompose_all(const AlmostSquare& asq) {
  const auto& pairs = asq.pairs();
  std::vector<Decomposition> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) out.push_back(decompose(pairs[i], pairs[j]));
  }
  return out;
}

AlmostSquare recompose(const Decomposition& dec) {
  const std::uint64_t a1 = dec.d1() * dec.e1();
  const std::uint64_t b1 = dec.d2() * dec.e2();
  const std::uint64_t m1 = dec.d1() * dec.e2();
  const std::uint64_t m2 = dec.d2() * dec.e1();
  return AlmostSquare(a1 * b1, {{a1, b1}, {std::min(m1, m2), std::max(m1, m2)}});
}

RangeReport verify_range(const Decomposition& dec, const WindowSpec& spec,
                         const PrecisionLadder& ladder) {
  RangeReport report;
  report.range = quadruple_range(spec, ladder);
  const auto elements = dec.elements();
  report.pass = true;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    report.in_range[i] = report.range.contains(BigInt(elements[i]));
    report.pass = report.pass && report.in_range[i];
  }
  return report;
}

}  // namespace almostsq
