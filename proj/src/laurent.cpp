#include "knotflow/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace knotflow {

LaurentPoly::LaurentPoly(int low, std::vector<BigInt> coeffs) : low_(low), c_(std::move(coeffs)) { trim(); }

LaurentPoly LaurentPoly::monomial(BigInt c, int exponent) { return LaurentPoly(exponent, {std::move(c)}); }

void LaurentPoly::trim() {
  std::size_t first = 0;
  while (first < c_.size() && c_[first] == 0) ++first;
  if (first == c_.size()) {
    c_.clear();
    low_ = 0;
    return;
  }
  std::size_t last = c_.size();
  while (c_[last - 1] == 0) --last;
  c_ = std::vector<BigInt>(c_.begin() + static_cast<std::ptrdiff_t>(first),
                           c_.begin() + static_cast<std::ptrdiff_t>(last));
  low_ += static_cast<int>(first);
}

BigInt LaurentPoly::coeff(int e) const {
  if (is_zero() || e < low_ || e > high()) return 0;
  return c_[static_cast<std::size_t>(e - low_)];
}

std::vector<std::pair<int, BigInt>> LaurentPoly::terms() const {
  std::vector<std::pair<int, BigInt>> out;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) out.emplace_back(low_ + static_cast<int>(i), c_[i]);
  return out;
}

BigInt LaurentPoly::at_one() const {
  BigInt s = 0;
  for (const BigInt& c : c_) s += c;
  return s;
}

LaurentPoly LaurentPoly::inverted() const {
  if (is_zero()) return {};
  std::vector<BigInt> r(c_.rbegin(), c_.rend());
  return LaurentPoly(-high(), std::move(r));
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r = *this;
  if (!r.is_zero()) r.low_ += k;
  return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int lo = std::min(a.low_, b.low_), hi = std::max(a.high(), b.high());
  std::vector<BigInt> c(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[static_cast<std::size_t>(a.low_ - lo) + i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[static_cast<std::size_t>(b.low_ - lo) + i] += b.c_[i];
  return LaurentPoly(lo, std::move(c));
}

LaurentPoly operator-(const LaurentPoly& a) {
  LaurentPoly r = a;
  for (BigInt& c : r.c_) c = -c;
  return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return LaurentPoly(a.low_ + b.low_, std::move(c));
}

LaurentPoly LaurentPoly::divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.is_zero()) return {};
  // Long division from the top degree on ordinary polynomials.
  std::vector<BigInt> rem = a.c_;
  const std::size_t nb = b.c_.size();
  if (rem.size() < nb) throw std::domain_error("inexact Laurent division");
  std::vector<BigInt> q(rem.size() - nb + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    const BigInt& top = rem[k + nb - 1];
    if (top == 0) continue;
    if (top % b.c_.back() != 0) throw std::domain_error("inexact Laurent division");
    q[k] = top / b.c_.back();
    for (std::size_t j = 0; j < nb; ++j) rem[k + j] -= q[k] * b.c_[j];
  }
  for (const BigInt& r : rem)
    if (r != 0) throw std::domain_error("inexact Laurent division");
  return LaurentPoly(a.low_ - b.low_, std::move(q));
}

LaurentPoly LaurentPoly::symmetrized() const {
  if (is_zero()) return {};
  const int s = span();
  if (s % 2 != 0) throw std::domain_error("odd degree span has no symmetric representative");
  LaurentPoly r = shifted(-low_ - s / 2);
  if (r.c_.back() < 0) r = -r;
  if (!(r == r.inverted())) throw std::domain_error("polynomial is not symmetric up to units");
  return r;
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const BigInt& c = c_[i];
    if (c == 0) continue;
    const int e = low_ + static_cast<int>(i);
    const BigInt mag = c < 0 ? BigInt(-c) : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1 || e == 0) out += mag.str();
    if (e != 0) {
      out += "t";
      if (e != 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

}  // namespace knotflow
