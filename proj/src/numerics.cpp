#include "wfb/numerics.hpp"

#include <stdexcept>

namespace wfb {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  return make_rational(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
}

std::string to_string(const Rational& q) { return q.get_str(); }

BigInt binomial(std::int64_t n, std::int64_t j) {
  if (n < 0 || j < 0 || j > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(j));
  return out;
}

}  // namespace wfb
