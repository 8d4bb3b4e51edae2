#include "torich/field.hpp"

#include <cctype>
#include <charconv>

#include "torich/error.hpp"

namespace torich {

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(Int p) {
  if (!is_prime(p)) throw Error(ErrorCode::kField, "characteristic " + std::to_string(p) + " is not prime");
  return FieldSpec(p);
}

FieldSpec FieldSpec::parse(std::string_view text) {
  if (text == "Q" || text == "QQ" || text == "q") return rationals();
  std::string_view digits;
  if (text.starts_with("Fp:")) digits = text.substr(3);
  else if (text.starts_with("GF(") && text.ends_with(")")) digits = text.substr(3, text.size() - 4);
  else if (text.starts_with("F")) digits = text.substr(1);
  else throw Error(ErrorCode::kField, "unrecognized field '" + std::string(text) + "'");
  Int p = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw Error(ErrorCode::kField, "unrecognized field '" + std::string(text) + "'");
  return prime(p);
}

std::string FieldSpec::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

mpq_class FieldSpec::normalize(const mpq_class& x) const {
  if (p_ == 0) return x;
  mpz_class num = x.get_num();
  mpz_class den = x.get_den();
  mpz_class mod(static_cast<long>(p_));
  if (den != 1) {
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw Error(ErrorCode::kField, "denominator divisible by characteristic");
    num *= inv;
  }
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), mod.get_mpz_t());
  return mpq_class(r);
}

mpq_class FieldSpec::inv(const mpq_class& a) const {
  if (p_ == 0) return 1 / a;
  mpz_class r;
  mpz_class mod(static_cast<long>(p_));
  mpz_class num = a.get_num();
  if (mpz_invert(r.get_mpz_t(), num.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw Error(ErrorCode::kField, "division by zero in F" + std::to_string(p_));
  return mpq_class(r);
}

}  // namespace torich
