#pragma once

// Exact finite sums  sum_j c_j * 2^e_j  with 64-bit exponents. The objective
// terms 2^-gamma have exponents far beyond what a rational can hold at T = 5,
// but products and differences of such terms stay in this form, so their
// sign is decidable without materialising any big number.

#include <cstdint>
#include <map>
#include <stdexcept>

#include "semsel/rational.hpp"

namespace semsel {

class DyadicSum {
 public:
  DyadicSum() = default;

  static DyadicSum power(std::int64_t exponent, std::int64_t coeff = 1) {
    DyadicSum d;
    d.add(exponent, coeff);
    return d;
  }

  void add(std::int64_t exponent, std::int64_t coeff) {
    if (coeff == 0) return;
    auto& c = terms_[exponent];
    c += coeff;
    if (c == 0) terms_.erase(exponent);
  }

  DyadicSum& operator+=(const DyadicSum& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  DyadicSum& operator-=(const DyadicSum& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  friend DyadicSum operator+(DyadicSum a, const DyadicSum& b) { return a += b; }
  friend DyadicSum operator-(DyadicSum a, const DyadicSum& b) { return a -= b; }

  friend DyadicSum operator*(const DyadicSum& a, const DyadicSum& b) {
    DyadicSum out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) out.add(checked_add(ea, eb), ca * cb);
    }
    return out;
  }

  bool is_zero() const { return terms_.empty(); }

  // Rewrites every coefficient into {-1, 0, 1} by carrying upwards. In that
  // form the lower digits sum to less than the top digit's weight, so the top
  // digit decides the sign.
  int sign() const {
    std::map<std::int64_t, std::int64_t> digits = terms_;
    for (auto it = digits.begin(); it != digits.end();) {
      const std::int64_t c = it->second;
      const std::int64_t r = c % 2;  // -1, 0 or 1
      const std::int64_t carry = (c - r) / 2;
      it->second = r;
      if (carry != 0) digits[checked_add(it->first, 1)] += carry;
      it = (r == 0) ? digits.erase(it) : std::next(it);
    }
    if (digits.empty()) return 0;
    return digits.rbegin()->second > 0 ? 1 : -1;
  }

  // Only for sums whose exponents fit the rational budget.
  Rational to_rational(std::uint64_t budget_bits = kDefaultExponentBudgetBits) const {
    Rational r = 0;
    for (const auto& [e, c] : terms_) {
      const std::uint64_t mag = static_cast<std::uint64_t>(e < 0 ? -e : e);
      Rational p = e < 0 ? pow2_neg(mag, budget_bits) : Rational(pow2(mag, budget_bits));
      r += p * c;
    }
    return r;
  }

  const std::map<std::int64_t, std::int64_t>& terms() const { return terms_; }

 private:
  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw FeasibilityError("dyadic exponent overflow");
    return r;
  }

  std::map<std::int64_t, std::int64_t> terms_;
};

}  // namespace semsel
