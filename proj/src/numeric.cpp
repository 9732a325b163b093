#include "almostsq/numeric.hpp"

#include <charconv>
#include <numeric>

namespace almostsq {

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("ratio with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InvalidArgument("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Ratio Ratio::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Ratio(parse_int(text, text));
  const auto den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
  return Ratio(parse_int(text.substr(0, slash), text), den);
}

std::string Ratio::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

Ratio from_big(const BigInt& num, const BigInt& den) {
  auto n = to_i64(num);
  auto d = to_i64(den);
  if (!n || !d) throw InvalidArgument("ratio arithmetic overflow");
  return Ratio(*n, *d);
}

}  // namespace

Ratio operator+(const Ratio& a, const Ratio& b) {
  return from_big(BigInt(a.num_) * b.den_ + BigInt(b.num_) * a.den_, BigInt(a.den_) * b.den_);
}

Ratio operator-(const Ratio& a, const Ratio& b) {
  return from_big(BigInt(a.num_) * b.den_ - BigInt(b.num_) * a.den_, BigInt(a.den_) * b.den_);
}

Ratio operator*(const Ratio& a, const Ratio& b) {
  return from_big(BigInt(a.num_) * b.num_, BigInt(a.den_) * b.den_);
}

bool operator<(const Ratio& a, const Ratio& b) {
  return BigInt(a.num_) * b.den_ < BigInt(b.num_) * a.den_;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  BigInt r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) { return -floor_div(-a, b); }

BigInt floor(const BigRational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

BigInt ceil(const BigRational& r) {
  return ceil_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

BigInt pow(const BigInt& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

std::optional<std::uint64_t> to_u64(const BigInt& v) {
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return v.convert_to<std::uint64_t>();
}

std::optional<std::int64_t> to_i64(const BigInt& v) {
  if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max()) {
    return std::nullopt;
  }
  return v.convert_to<std::int64_t>();
}

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const BigRational& v) {
  const auto& den = boost::multiprecision::denominator(v);
  if (den == 1) return boost::multiprecision::numerator(v).str();
  return boost::multiprecision::numerator(v).str() + "/" + den.str();
}

}  // namespace almostsq
