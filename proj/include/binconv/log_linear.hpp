#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "binconv/numbers.hpp"

namespace binconv {

/// Exact formal rational-linear combination sum_p c_p * log p over primes.
/// Zero coefficients are never stored, so equality is map equality.
class LogLinear {
 public:
  LogLinear() = default;

  static LogLinear log_of(std::uint64_t n) {
    LogLinear out;
    for (const auto& f : factorize(n).factors)
      out.coeffs_.emplace(f.prime, BigRat(f.exponent));
    return out;
  }

  static LogLinear single(std::uint64_t p, BigRat coeff) {
    LogLinear out;
    out.add_term(p, std::move(coeff));
    return out;
  }

  void add_term(std::uint64_t p, const BigRat& coeff) {
    if (coeff == 0) return;
    auto it = coeffs_.find(p);
    if (it == coeffs_.end()) {
      coeffs_.emplace(p, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  bool is_zero() const { return coeffs_.empty(); }
  const std::map<std::uint64_t, BigRat>& coefficients() const { return coeffs_; }

  LogLinear& operator+=(const LogLinear& other) {
    for (const auto& [p, c] : other.coeffs_) add_term(p, c);
    return *this;
  }
  LogLinear& operator-=(const LogLinear& other) {
    for (const auto& [p, c] : other.coeffs_) add_term(p, -c);
    return *this;
  }
  LogLinear& operator*=(const BigRat& s) {
    if (s == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [p, c] : coeffs_) c *= s;
    return *this;
  }

  friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
  friend LogLinear operator-(LogLinear a, const LogLinear& b) { return a -= b; }
  friend LogLinear operator*(LogLinear a, const BigRat& s) { return a *= s; }
  friend LogLinear operator*(const BigRat& s, LogLinear a) { return a *= s; }
  friend LogLinear operator-(LogLinear a) { return a *= BigRat(-1); }

  friend bool operator==(const LogLinear&, const LogLinear&) = default;

  /// Numeric value sum c_p * log(p) in the requested float type.
  template <typename Float>
  Float to_float() const {
    Float acc = 0;
    for (const auto& [p, c] : coeffs_) {
      Float coeff = static_cast<Float>(numerator(c)) / static_cast<Float>(denominator(c));
      acc += coeff * log(static_cast<Float>(p));
    }
    return acc;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : coeffs_) {
      BigRat a = c;
      if (first) {
        if (a < 0) {
          os << "-";
          a = -a;
        }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      if (a != 1) os << rational_to_string(a) << "*";
      os << "log(" << p << ")";
      first = false;
    }
    return os.str();
  }

 private:
  std::map<std::uint64_t, BigRat> coeffs_;
};

}  // namespace binconv
