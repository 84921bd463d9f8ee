#pragma once

// Laurent polynomials in t with arbitrary-precision integer coefficients.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

namespace knotflow {

using BigInt = boost::multiprecision::cpp_int;

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(BigInt c) : LaurentPoly(0, {std::move(c)}) {}  // NOLINT: implicit constant
  LaurentPoly(long long c) : LaurentPoly(BigInt(c)) {}        // NOLINT
  /// Σ coeffs[i] t^(low + i).
  LaurentPoly(int low, std::vector<BigInt> coeffs);

  static LaurentPoly monomial(BigInt c, int exponent);
  static LaurentPoly t() { return monomial(1, 1); }

  bool is_zero() const { return c_.empty(); }
  /// Exponent of the lowest nonzero term (0 for the zero polynomial).
  int low() const { return low_; }
  int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
  int span() const { return is_zero() ? 0 : high() - low(); }
  BigInt coeff(int exponent) const;
  const std::vector<BigInt>& coeffs() const { return c_; }
  /// (exponent, coefficient) for every nonzero term, ascending.
  std::vector<std::pair<int, BigInt>> terms() const;

  BigInt at_one() const;
  /// Substitutes t → 1/t.
  LaurentPoly inverted() const;
  LaurentPoly shifted(int k) const;  ///< multiply by t^k

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.low_ == b.low_ && a.c_ == b.c_;
  }

  /// Exact quotient; throws std::domain_error if b does not divide a.
  static LaurentPoly divide_exact(const LaurentPoly& a, const LaurentPoly& b);

  /// Representative of the class a·(±t^k) that is symmetric under
  /// t → 1/t with positive leading coefficient. Throws std::domain_error
  /// when no unit multiple is symmetric.
  LaurentPoly symmetrized() const;

  /// Human-readable form, e.g. "t - 1 + t^-1".
  std::string to_string() const;

 private:
  void trim();
  int low_ = 0;
  std::vector<BigInt> c_;
};

}  // namespace knotflow
