#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "semsel/errors.hpp"

namespace semsel {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Largest power of two the closed-form path will materialise.
inline constexpr std::uint64_t kDefaultExponentBudgetBits = std::uint64_t{1} << 20;

inline Integer pow2(std::uint64_t e, std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  if (e > budget_bits) {
    throw FeasibilityError("2^" + std::to_string(e) + " exceeds the exponent budget of " +
                           std::to_string(budget_bits) + " bits");
  }
  Integer r = 1;
  r <<= static_cast<unsigned long>(e);
  return r;
}

// 2^-e as an exact rational.
inline Rational pow2_neg(std::uint64_t e,
                         std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  return Rational(Integer(1), pow2(e, budget_bits));
}

inline std::string to_string(const Rational& r) {
  return r.str();
}

}  // namespace semsel
