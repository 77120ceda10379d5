#include "twospin/scalar.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "twospin/errors.hpp"

namespace twospin {

namespace {

mpz_class pow10(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

mpq_class parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long long fraction_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_point) ++fraction_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw DomainError("malformed number '" + std::string(text) + "'");
  long long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const std::string rest(text.substr(pos));
    char* end = nullptr;
    exponent = std::strtoll(rest.c_str(), &end, 10);
    if (end == rest.c_str() || *end != '\0') {
      throw DomainError("malformed exponent in '" + std::string(text) + "'");
    }
    pos = text.size();
  }
  if (pos != text.size()) throw DomainError("malformed number '" + std::string(text) + "'");
  if (exponent > 4000 || exponent < -4000) {
    throw DomainError("exponent out of range in '" + std::string(text) + "'");
  }

  mpq_class value{mpz_class(digits, 10)};
  const long long shift = exponent - fraction_digits;
  if (shift > 0) value *= pow10(static_cast<unsigned long>(shift));
  if (shift < 0) value /= pow10(static_cast<unsigned long>(-shift));
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

// Splits n = square * rest with rest free of small square factors.
void extract_square(mpz_class n, mpz_class& root, mpz_class& rest) {
  root = 1;
  for (unsigned long p = 2; p <= 100000; ++p) {
    const mpz_class p2 = mpz_class(p) * p;
    if (p2 > n) break;
    while (mpz_divisible_p(n.get_mpz_t(), p2.get_mpz_t())) {
      n /= p2;
      root *= p;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    root *= s;
    n = 1;
  }
  rest = n;
}

}  // namespace

mpq_class parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty number");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const mpq_class num = parse_decimal(text.substr(0, slash));
  const mpq_class den = parse_decimal(text.substr(slash + 1));
  if (sgn(den) == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  mpq_class out = num / den;
  out.canonicalize();
  return out;
}

QuadraticNumber::QuadraticNumber(mpq_class rational, mpq_class coefficient,
                                 const mpz_class& radicand)
    : rational_(std::move(rational)), coefficient_(std::move(coefficient)) {
  if (sgn(radicand) < 0) throw DomainError("negative radicand");
  mpz_class root;
  mpz_class rest;
  extract_square(radicand, root, rest);
  coefficient_ *= root;
  if (rest == 1 || sgn(rest) == 0 || sgn(coefficient_) == 0) {
    if (rest == 1) rational_ += coefficient_;
    coefficient_ = 0;
    radicand_ = 0;
  } else {
    radicand_ = rest;
  }
}

QuadraticNumber QuadraticNumber::sqrt_of(const mpq_class& value) {
  if (sgn(value) < 0) throw DomainError("square root of a negative number");
  // sqrt(n/d) = sqrt(n*d)/d
  const mpz_class& n = value.get_num();
  const mpz_class& d = value.get_den();
  return QuadraticNumber(mpq_class(0), mpq_class(mpz_class(1), d), mpz_class(n * d));
}

int QuadraticNumber::sign() const {
  const int sp = sgn(rational_);
  const int sq = sgn(coefficient_);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // opposite signs: compare p^2 against q^2 r; never equal since r is not a square
  const mpq_class lhs = rational_ * rational_;
  const mpq_class rhs = coefficient_ * coefficient_ * mpq_class(radicand_);
  return lhs > rhs ? sp : sq;
}

double QuadraticNumber::to_double() const {
  if (is_rational()) return rational_.get_d();
  return rational_.get_d() + coefficient_.get_d() * std::sqrt(radicand_.get_d());
}

std::string QuadraticNumber::str() const {
  if (is_rational()) return rational_.get_str();
  std::ostringstream out;
  if (sgn(rational_) != 0) out << rational_.get_str() << " + ";
  out << coefficient_.get_str() << "*sqrt(" << radicand_.get_str() << ")";
  return out.str();
}

void QuadraticNumber::adopt_radicand(const QuadraticNumber& other) {
  if (other.is_rational()) return;
  if (is_rational()) {
    radicand_ = other.radicand_;
    return;
  }
  if (radicand_ != other.radicand_) {
    throw DomainError("cannot combine sqrt(" + radicand_.get_str() + ") and sqrt(" +
                      other.radicand_.get_str() + ") exactly");
  }
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& other) {
  adopt_radicand(other);
  rational_ += other.rational_;
  coefficient_ += other.coefficient_;
  if (sgn(coefficient_) == 0) radicand_ = 0;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& other) {
  adopt_radicand(other);
  rational_ -= other.rational_;
  coefficient_ -= other.coefficient_;
  if (sgn(coefficient_) == 0) radicand_ = 0;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& other) {
  if (other.is_rational()) {
    rational_ *= other.rational_;
    coefficient_ *= other.rational_;
    if (sgn(coefficient_) == 0) radicand_ = 0;
    return *this;
  }
  if (is_rational()) {
    const mpq_class p = rational_;
    rational_ = p * other.rational_;
    coefficient_ = p * other.coefficient_;
    radicand_ = sgn(coefficient_) == 0 ? mpz_class(0) : other.radicand_;
    return *this;
  }
  adopt_radicand(other);
  // (p + q s)(p' + q' s) = pp' + qq' r + (pq' + qp') s
  const mpq_class p = rational_ * other.rational_ +
                      coefficient_ * other.coefficient_ * mpq_class(radicand_);
  const mpq_class q = rational_ * other.coefficient_ + coefficient_ * other.rational_;
  rational_ = p;
  coefficient_ = q;
  if (sgn(coefficient_) == 0) radicand_ = 0;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& other) {
  if (other.sign() == 0) throw DomainError("division by zero");
  if (other.is_rational()) {
    rational_ /= other.rational_;
    coefficient_ /= other.rational_;
    return *this;
  }
  // 1/(p + q s) = (p - q s)/(p^2 - q^2 r)
  const mpq_class norm = other.rational_ * other.rational_ -
                         other.coefficient_ * other.coefficient_ * mpq_class(other.radicand_);
  QuadraticNumber conjugate;
  conjugate.rational_ = other.rational_ / norm;
  conjugate.coefficient_ = -other.coefficient_ / norm;
  conjugate.radicand_ = other.radicand_;
  return *this *= conjugate;
}

QuadraticNumber operator-(const QuadraticNumber& a) {
  QuadraticNumber out = a;
  out.rational_ = -a.rational_;
  out.coefficient_ = -a.coefficient_;
  return out;
}

bool operator==(const QuadraticNumber& a, const QuadraticNumber& b) {
  if (a.rational_ != b.rational_ || a.coefficient_ != b.coefficient_) return false;
  return a.is_rational() || a.radicand_ == b.radicand_;
}

QuadraticNumber sqrt(const QuadraticNumber& x) {
  if (!x.is_rational()) throw DomainError("exact square root of an irrational value");
  return QuadraticNumber::sqrt_of(x.rational_part());
}

QuadraticNumber abs(const QuadraticNumber& x) { return x.sign() < 0 ? -x : x; }

std::string to_string(double x) {
  char buffer[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, x);
    if (std::strtod(buffer, nullptr) == x) break;
  }
  return buffer;
}

template <>
double scalar_from_text<double>(std::string_view text) {
  const mpq_class exact = parse_rational(text);  // validates the literal
  if (text.find('/') == std::string_view::npos) return std::strtod(std::string(text).c_str(), nullptr);
  return exact.get_d();
}

template <>
QuadraticNumber scalar_from_text<QuadraticNumber>(std::string_view text) {
  return QuadraticNumber(parse_rational(text));
}

}  // namespace twospin
