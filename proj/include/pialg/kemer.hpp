#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pialg/algebra.hpp"
#include "pialg/multilinear.hpp"

namespace pialg {

// Witness family: per chosen block a run of mu Capelli factors on its matrix
// units, blocks joined by radical bridges; the polynomial is alternated in mu
// cross-block sets (the first b of them absorbing a bridge, making them big).
struct StructuredFamily {
  std::vector<int> block_dims;  // d_i of the chosen blocks, chain order
  std::vector<int> block_ids;   // positions into AlgebraMeta::blocks
  int mu = 1;
  int b = 0;  // big sets; requires b < block count (one bridge each)
};

struct StructuredAssignment {
  std::vector<std::vector<QVec>> xunits;  // per block: units in snake order
  std::vector<std::vector<QVec>> yvals;   // per block: m+1 pinning values
  std::vector<QVec> bridges;              // one per junction
};

// Value of Alt_{T_1}..Alt_{T_mu}(P) at the assignment, where P is the bridged
// Capelli product and T_j takes the full unit list (plus bridge j when big).
// Computed by summing over value distributions instead of expanding the
// alternation, so mu and d well beyond expansion reach stay cheap.
QVec evaluate_structured(const StructureAlgebra& a, const StructuredFamily& fam,
                         const StructuredAssignment& asg,
                         long max_combos = 10000000);

struct KemerWitness {
  int r = 0;        // small-set size
  int big_sets = 0; // big sets of size r+1
  int nu = 0;       // small-set count
  StructuredFamily family;
  StructuredAssignment assignment;
  QVec value;
  // expansion retained when small enough to materialize
  std::optional<MultilinearPolynomial> polynomial;
  std::optional<Assignment> named_assignment;
};

struct KemerEstimate {
  int d_lower = 0;
  int s_lower = 0;
  ParValue par;
  std::string status;  // "certified_basic" | "lower_bound_only"
  std::vector<KemerWitness> witnesses;
  int nu = 0;
  // exhaustive refutation detail (kemer_index_estimate with extra-var bound)
  std::optional<int> refuted_up_to_extra_vars;
};

// max over orderings of distinct simple components of sum dim(A_i), admissible
// when the J-interleaved chain of lifted component spans is nonzero.
int exp_gz(const StructureAlgebra& a, std::uint64_t seed = 0);

KemerEstimate kemer_lower_bound_search(const StructureAlgebra& a, int nu,
                                       long budget = 200000,
                                       std::uint64_t seed = 0);

// True when every multilinear polynomial alternating in nu disjoint sets of
// size r, with at most extra_vars additional variables, is an identity of a.
// Alternations of all monomials span that space, so the check is exhaustive.
bool refute_alternating(const StructureAlgebra& a, int nu, int r, int extra_vars);

KemerEstimate kemer_index_estimate(const StructureAlgebra& a, int nu = 2,
                                   long budget = 200000,
                                   std::optional<int> exhaustive_extra_vars = {},
                                   std::uint64_t seed = 0);

struct BasicnessResult {
  bool certified = false;
  std::string details;
  KemerEstimate estimate;
};

BasicnessResult basicness_check(const StructureAlgebra& a, std::uint64_t seed = 0);

std::string kemer_report_json(const StructureAlgebra& a, const KemerEstimate& est,
                              int exp, std::uint64_t seed, long budget);

}  // namespace pialg
