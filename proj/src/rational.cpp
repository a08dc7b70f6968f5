// SPDX-License-Identifier: Apache-2.0
#include "melnikov/rational.hpp"

#include <cctype>

namespace mlk {

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rat q;
    if (q.set_str(text, 10) != 0)
      throw std::invalid_argument("bad rational literal: " + text);
    q.canonicalize();
    return q;
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rat q;
    if (q.set_str(text, 10) != 0)
      throw std::invalid_argument("bad integer literal: " + text);
    return q;
  }
  // Decimal string: digits.digits -> numerator / 10^k, exact.
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const size_t frac_len = text.size() - dot - 1;
  if (digits == "" || digits == "-" || digits == "+")
    throw std::invalid_argument("bad decimal literal: " + text);
  for (size_t k = (digits[0] == '-' || digits[0] == '+') ? 1 : 0; k < digits.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(digits[k])))
      throw std::invalid_argument("bad decimal literal: " + text);
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  return c.get_str();
}

}  // namespace mlk
