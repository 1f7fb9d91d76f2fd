#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pialg {

// Exact scalar type. All structural computations run over the rationals.
using Rational = mpq_class;
using Integer = mpz_class;

// Error for violated operation contracts (bad input, exceeded budget,
// non-split center, ...). The CLI maps these to exit code 2.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw ContractError("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

// Image of r in Z/p. Requires p prime and not dividing the denominator.
inline std::uint64_t mod_p(const Rational& r, std::uint64_t p) {
  std::uint64_t num = mpz_fdiv_ui(r.get_num().get_mpz_t(), p);
  std::uint64_t den = mpz_fdiv_ui(r.get_den().get_mpz_t(), p);
  if (den == 0) throw ContractError("prime divides a denominator");
  // den^(p-2) mod p
  std::uint64_t inv = 1, base = den, e = p - 2;
  while (e) {
    if (e & 1) inv = inv * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return num * inv % p;
}

using QVec = std::vector<Rational>;

inline bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace pialg
