#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pialg/algebra.hpp"

namespace pialg {

struct CodimRecord {
  int n = 0;
  unsigned long long c_n = 0;
  std::string method;                // "exact" | "modular"
  std::vector<std::uint64_t> primes; // empty for exact, >= 2 agreeing for modular
  bool verified = false;
  double wall_time = 0.0;            // measured; excluded from artifacts by default
};

// Rank over Q of the n! x dim^{n+1} monomial-evaluation matrix.
// Budget guards n! * dim^{n+1}; the default admits n <= 5 at dim <= 4.
CodimRecord codimension_exact_oracle(const StructureAlgebra& a, int n,
                                     long max_cells = 500000);

// Same rank modulo two independent random primes below 2^31 (64-bit
// accumulation). Disagreement draws a third prime; persistent disagreement
// escalates to the exact oracle when affordable, else errors.
CodimRecord codimension_modular(const StructureAlgebra& a, int n,
                                std::uint64_t seed = 0,
                                std::vector<std::uint64_t> primes = {},
                                int workers = 1);

struct CodimSequence {
  std::vector<CodimRecord> records;
  // smallest m (1-based) with c_m <= c_{m+1} <= ... <= c_N
  int nondecreasing_from = 1;
  bool eventually_nondecreasing = false;
};

CodimSequence codim_sequence(const StructureAlgebra& a, int max_n,
                             std::uint64_t seed = 0, int workers = 1);

// CSV columns: n, c_n, method, primes, verified, seconds.
// Timings are written only when with_timings is set, keeping default
// artifacts byte-reproducible.
std::string codim_csv(const std::vector<CodimRecord>& records,
                      bool with_timings = false);
std::string codim_json(const std::vector<CodimRecord>& records,
                       bool with_timings = false);

bool is_probable_prime(std::uint64_t n);
// Uniform-ish random prime in [2^30, 2^31).
std::uint64_t random_prime(std::uint64_t& state);

}  // namespace pialg
