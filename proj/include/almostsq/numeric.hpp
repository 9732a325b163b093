#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace almostsq {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Error taxonomy. Each maps to a stable CLI exit code (see cli.hpp).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct PrecisionExhausted : Error {
  using Error::Error;
};
struct CapacityExceeded : Error {
  using Error::Error;
};
struct StructureViolation : Error {
  using Error::Error;
};
struct TargetTooSmall : Error {
  using Error::Error;
};
struct InfeasibleSplit : Error {
  using Error::Error;
};
struct DegenerateFit : Error {
  using Error::Error;
};

/// A small exact fraction, always stored reduced with a positive denominator.
/// Used for the exponents and coefficients that parameterize windows.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1);

  /// Parses "u/v" or "u". Throws InvalidArgument on malformed input.
  static Ratio parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  BigRational to_big() const { return BigRational(BigInt(num_), BigInt(den_)); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend Ratio operator+(const Ratio& a, const Ratio& b);
  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend bool operator<(const Ratio& a, const Ratio& b);
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt ceil_div(const BigInt& a, const BigInt& b);
BigInt floor(const BigRational& r);
BigInt ceil(const BigRational& r);
BigInt pow(const BigInt& base, unsigned exponent);

/// Narrowing with a range check; nullopt when the value does not fit.
std::optional<std::uint64_t> to_u64(const BigInt& v);
std::optional<std::int64_t> to_i64(const BigInt& v);

std::string to_string(const BigInt& v);
std::string to_string(const BigRational& v);

}  // namespace almostsq
