#pragma once

// Scalar types used by the exact and floating evaluation paths.
//
// Every template in the library is written against a Scalar that supports
// + - * /, comparison, ipow() and sqrt() of a rational argument. Two scalars
// are provided: double (fast path) and QuadraticNumber, an exact element of
// a real quadratic field Q(sqrt(r)). The latter is closed under every
// transformation the reductions perform, because all square roots that ever
// appear are sqrt(gamma/beta) times rationals.

#include <gmpxx.h>

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

namespace twospin {

/// Parses a decimal ("-1.25e-3"), integer or fraction ("7/6") literal into
/// an exact rational. Throws DomainError on malformed input.
mpq_class parse_rational(std::string_view text);

/// p + q*sqrt(r) with p, q rational and r a square-free positive integer.
///
/// A value with q == 0 is purely rational and combines with any radicand.
/// Mixing two irrational values over different radicands throws
/// DomainError; the library never needs more than one radicand per
/// instance.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(int value) : rational_(value) {}  // NOLINT: implicit by design of Scalar
  QuadraticNumber(long value) : rational_(value) {}  // NOLINT
  QuadraticNumber(const mpq_class& value) : rational_(value) {}  // NOLINT
  QuadraticNumber(mpq_class rational, mpq_class coefficient,
                  const mpz_class& radicand);

  /// Exact square root of a non-negative rational.
  static QuadraticNumber sqrt_of(const mpq_class& value);

  const mpq_class& rational_part() const { return rational_; }
  const mpq_class& coefficient() const { return coefficient_; }
  const mpz_class& radicand() const { return radicand_; }
  bool is_rational() const { return sgn(coefficient_) == 0; }

  /// -1, 0 or +1, computed exactly.
  int sign() const;
  double to_double() const;
  /// "p", "q*sqrt(r)" or "p + q*sqrt(r)" with p, q in lowest terms.
  std::string str() const;

  QuadraticNumber& operator+=(const QuadraticNumber& other);
  QuadraticNumber& operator-=(const QuadraticNumber& other);
  QuadraticNumber& operator*=(const QuadraticNumber& other);
  QuadraticNumber& operator/=(const QuadraticNumber& other);

  friend QuadraticNumber operator+(QuadraticNumber a, const QuadraticNumber& b) { return a += b; }
  friend QuadraticNumber operator-(QuadraticNumber a, const QuadraticNumber& b) { return a -= b; }
  friend QuadraticNumber operator*(QuadraticNumber a, const QuadraticNumber& b) { return a *= b; }
  friend QuadraticNumber operator/(QuadraticNumber a, const QuadraticNumber& b) { return a /= b; }
  friend QuadraticNumber operator-(const QuadraticNumber& a);

  friend bool operator==(const QuadraticNumber& a, const QuadraticNumber& b);
  friend bool operator!=(const QuadraticNumber& a, const QuadraticNumber& b) { return !(a == b); }
  friend bool operator<(const QuadraticNumber& a, const QuadraticNumber& b) { return (a - b).sign() < 0; }
  friend bool operator>(const QuadraticNumber& a, const QuadraticNumber& b) { return b < a; }
  friend bool operator<=(const QuadraticNumber& a, const QuadraticNumber& b) { return !(b < a); }
  friend bool operator>=(const QuadraticNumber& a, const QuadraticNumber& b) { return !(a < b); }

 private:
  void adopt_radicand(const QuadraticNumber& other);

  mpq_class rational_{0};
  mpq_class coefficient_{0};
  mpz_class radicand_{0};  // 0 while the value is rational
};

QuadraticNumber sqrt(const QuadraticNumber& x);
QuadraticNumber abs(const QuadraticNumber& x);

template <class Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, QuadraticNumber>;

inline double to_double(double x) { return x; }
inline double to_double(const QuadraticNumber& x) { return x.to_double(); }

inline std::string to_string(const QuadraticNumber& x) { return x.str(); }
std::string to_string(double x);

/// Converts a decimal literal into Scalar, exactly where Scalar allows.
template <class Scalar>
Scalar scalar_from_text(std::string_view text);

template <>
double scalar_from_text<double>(std::string_view text);
template <>
QuadraticNumber scalar_from_text<QuadraticNumber>(std::string_view text);

/// Converts a double into Scalar through its shortest round-trip decimal
/// representation, so 0.8 becomes exactly 4/5 in exact mode.
template <class Scalar>
Scalar scalar_from_double(double value) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return value;
  } else {
    return scalar_from_text<Scalar>(to_string(value));
  }
}

/// base^exponent by repeated squaring; negative exponents invert.
template <class Scalar>
Scalar ipow(Scalar base, long long exponent) {
  if (exponent < 0) return Scalar(1) / ipow(base, -exponent);
  Scalar result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

/// Square root dispatching to std::sqrt or the exact quadratic root.
template <class Scalar>
Scalar scalar_sqrt(const Scalar& x) {
  using std::sqrt;
  return sqrt(x);
}

}  // namespace twospin

namespace Eigen {

template <>
struct NumTraits<twospin::QuadraticNumber>
    : GenericNumTraits<twospin::QuadraticNumber> {
  using Real = twospin::QuadraticNumber;
  using NonInteger = twospin::QuadraticNumber;
  using Literal = twospin::QuadraticNumber;
  using Nested = twospin::QuadraticNumber;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 120
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
