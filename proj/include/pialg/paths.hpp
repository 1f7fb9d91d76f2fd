#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pialg/algebra.hpp"

namespace pialg {

struct PathSymbol {
  enum Kind { sim_comp, radical_word } kind = sim_comp;
  int index = 0;  // sim_comp: 1..q; radical_word: 0-based position in W
  friend bool operator==(const PathSymbol&, const PathSymbol&) = default;
  friend auto operator<=>(const PathSymbol&, const PathSymbol&) = default;
};

// Alternating component/word sequence A_{k_1} w_1 A_{k_2} ... w_{s'} A_{k_{s'+1}}.
// The flagged variants carry an extra radical word before the first component
// or after the last one; the source material leaves those shapes undefined,
// so they are kept visibly separate.
struct PathStructure {
  std::vector<PathSymbol> symbols;
  bool leading_radical = false;
  bool trailing_radical = false;
  int radical_count() const;
  bool flagged() const { return leading_radical || trailing_radical; }
};

// Symb for an algebra built with associated-word metadata: the q simple
// components followed by the |W| radical words. Errors on other algebras.
std::vector<PathSymbol> enumerate_symbols(const StructureAlgebra& acal);

// All structures with at most max_radical radical words, lexicographically
// ordered by (length, symbol sequence). include_flagged adds the
// leading/trailing-radical variants.
std::vector<PathStructure> enumerate_path_structures(const StructureAlgebra& acal,
                                                     int max_radical,
                                                     bool include_flagged = false);

// sum_{t=1}^{2s+1} symb_count^t
Integer path_count_bound(int symb_count, int s);

// n^{s'} * multinomial(n - s'; parts); requires sum(parts) = n - s'.
Integer monomial_class_bound(int n, const std::vector<int>& parts, int s_prime);

// Codimension supplier for the series: c_m of the block of size d_i.
using CodimSource = std::function<Integer(int block_dim, int m)>;

// sum_{s'=0}^{s} n^{s'} * sum_{n_1+...+n_q = n-s'} multinomial * prod c_{n_i},
// with c_0 := 1; exact integer arithmetic throughout.
Integer upper_bound_series(const StructureAlgebra& acal, int n,
                           const CodimSource& codim_source);

std::string path_structures_json(const std::vector<PathStructure>& structures);
std::string upper_bound_csv(const StructureAlgebra& acal, int max_n,
                            const CodimSource& codim_source);

}  // namespace pialg
