#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pialg/algebra.hpp"

namespace pialg {

// A monomial: permutation of the variable index set [0, nvars).
using Word = std::vector<int>;

// Disjoint variable-index subsets in which a polynomial alternates. Small sets
// have a common size d, big sets size d+1; everything else is unconstrained.
struct AlternationShape {
  std::vector<std::vector<int>> small_sets;
  std::vector<std::vector<int>> big_sets;
  std::vector<int> free_vars;
  std::vector<std::vector<int>> all_sets() const;
};

class MultilinearPolynomial {
 public:
  std::vector<std::string> variables;
  std::map<Word, Rational> terms;
  std::optional<AlternationShape> shape;

  int nvars() const { return static_cast<int>(variables.size()); }
  int var_index(const std::string& name) const;  // -1 when absent
  void add_term(Word w, Rational c);             // merges, prunes zeros
};

// Sum over Sym(S) of sign(sigma) * (f with S permuted); S given by indices.
MultilinearPolynomial alternate(const MultilinearPolynomial& f,
                                const std::vector<int>& set,
                                long max_terms = 5000000);

// Formal antisymmetry check: every adjacent transposition of the set negates
// the term map.
bool is_alternating_in(const MultilinearPolynomial& f, const std::vector<int>& set);

// cap_n = sum_{sigma} sign(sigma) y1 x_{sigma(1)} y2 ... y_n x_{sigma(n)} y_{n+1},
// variables x1..xn, y1..y_{n+1}; alternating x-set recorded in the shape.
MultilinearPolynomial capelli(int n);

// Product of polynomials on disjoint variable sets (words concatenate).
MultilinearPolynomial concat_product(const MultilinearPolynomial& a,
                                     const MultilinearPolynomial& b);

// Per block i a run of mu Capelli factors cap_{d_i^2}(X_{i,j}; Y_{i,j}),
// blocks joined by bridge variables w_1..w_{q-1}. Shape lists every X_{i,j}
// as an alternating set.
MultilinearPolynomial capelli_product_bridged(const std::vector<int>& block_dims,
                                              int mu);

struct UtKemerResult {
  MultilinearPolynomial f1;
  MultilinearPolynomial f2;
  AlternationShape shape;  // shape of f2: mu-(q-1) small sets, q-1 big sets
};

// f1 alternates the unions X_j = U_i X_{i,j} (mu small sets of size d);
// f2 additionally folds w_j into X_j for j < q (q-1 big sets of size d+1).
// Throws when the expansion exceeds max_terms.
UtKemerResult ut_kemer_polynomial(const std::vector<int>& block_dims, int mu,
                                  long max_terms = 5000000);

using Assignment = std::map<std::string, QVec>;

QVec evaluate(const MultilinearPolynomial& f, const StructureAlgebra& a,
              const Assignment& assignment);

// Vanishing on all basis tuples. A verified attached shape lets tuples with a
// repeated basis element inside one alternating set be skipped.
bool is_identity(const MultilinearPolynomial& f, const StructureAlgebra& a,
                 int workers = 1);

struct SearchStrategy {
  enum Kind { structured, randomized } kind = structured;
  std::uint64_t seed = 0;
  long budget = 200000;
};

// Assignment with evaluate(f, a, result) != 0, or nullopt within budget.
// "nullopt" is not a proof of identity.
std::optional<Assignment> find_nonzero_evaluation(const MultilinearPolynomial& f,
                                                  const StructureAlgebra& a,
                                                  const SearchStrategy& strategy);

// Closed walk through all d^2 edges of the complete digraph with loops on d
// vertices; drives the Capelli witness on a full matrix block.
std::vector<std::pair<int, int>> eulerian_unit_order(int d);

std::string polynomial_to_json(const MultilinearPolynomial& f);
MultilinearPolynomial polynomial_from_json(const std::string& text);

}  // namespace pialg
