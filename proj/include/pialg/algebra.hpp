#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "pialg/rational.hpp"

namespace pialg {

struct SparseTerm {
  int k;
  Rational c;
};
// Sorted by basis index, no zero coefficients.
using SparseVec = std::vector<SparseTerm>;

// Matrix units of one simple block of a lifted semisimple part.
// unit[a][b] is the basis index of e_{a,b} inside the ambient algebra.
struct BlockUnits {
  int d = 0;
  std::vector<std::vector<int>> unit;
};

// Construction-time structure retained by the builders. Searches use it when
// present; algebras loaded from plain files go without.
struct AlgebraMeta {
  std::vector<BlockUnits> blocks;
  std::vector<int> radical_basis;
};

// One basis word of an associated algebra: u_0 b_{l_1} u_1 ... b_{l_k} u_k
// with matrix-unit connectors u_* (global unit ids) and 1 <= k <= u.
struct AssociatedWord {
  std::vector<int> units;
  std::vector<int> bs;
};

struct AssociatedInfo {
  std::vector<int> block_dims;
  int r = 0;
  int u = 0;
  std::vector<AssociatedWord> words;  // basis index dim_ss + i holds words[i]
};

// A finite-dimensional associative algebra given by exact structure constants.
class StructureAlgebra {
 public:
  std::string name;
  int dim = 0;
  std::vector<std::string> basis_labels;
  std::optional<QVec> unit;
  std::optional<AlgebraMeta> meta;
  std::optional<AssociatedInfo> assoc;

  const SparseVec& product(int i, int j) const { return mul_[i * dim + j]; }
  void set_product(int i, int j, SparseVec v) { mul_[i * dim + j] = std::move(v); }
  void init_table() { mul_.assign(static_cast<size_t>(dim) * dim, {}); }

  QVec basis_vec(int i) const;
  QVec multiply(const QVec& x, const QVec& y) const;
  // x * e_j and e_i * x, the workhorses of chained monomial evaluation.
  QVec mult_basis_right(const QVec& x, int j) const;
  QVec mult_basis_left(int i, const QVec& x) const;

  bool check_associative() const;  // exhaustive over basis triples
  bool check_unit() const;

 private:
  std::vector<SparseVec> mul_;
};

// Row-reduced exact basis of a linear subspace. Rows are kept in reduced
// echelon form ordered by pivot; all operations are deterministic.
class Subspace {
 public:
  explicit Subspace(const StructureAlgebra* ambient = nullptr) : ambient_(ambient) {}
  static Subspace span(const StructureAlgebra& a, const std::vector<QVec>& gens);

  // Returns true when v was independent of the current rows.
  bool insert(QVec v);
  bool contains(const QVec& v) const;
  QVec reduce(QVec v) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  bool is_zero() const { return rows_.empty(); }
  const std::vector<QVec>& rows() const { return rows_; }
  const StructureAlgebra* ambient() const { return ambient_; }

 private:
  const StructureAlgebra* ambient_;
  std::vector<QVec> rows_;
  std::vector<int> pivots_;
};

struct ParValue {
  int dim_ss = 0;
  int s = 0;
  auto operator<=>(const ParValue&) const = default;
};

struct WedderburnData {
  int q = 0;
  std::vector<int> block_dims;  // ascending
  int dim_ss = 0;
  Subspace radical;
  int nildeg = 1;
  // Idempotents of A lifting the primitive central idempotents of A/J,
  // in the same order as block_dims.
  std::vector<QVec> component_idempotents;
};

// Builders
StructureAlgebra build_matrix_algebra(int d);
StructureAlgebra build_ut_algebra(const std::vector<int>& dims);
StructureAlgebra build_associated_algebra(const std::vector<int>& block_dims, int r, int u);
StructureAlgebra direct_product(const StructureAlgebra& a, const StructureAlgebra& b);

// Structural analysis
QVec multiply_elements(const StructureAlgebra& a, const QVec& x, const QVec& y);
Subspace radical(const StructureAlgebra& a);
int nilpotency_degree(const StructureAlgebra& a, const Subspace& j);
Subspace subspace_product(const Subspace& u, const Subspace& v);
WedderburnData wedderburn_data(const StructureAlgebra& a, std::uint64_t seed = 0,
                               int retries = 8);
ParValue par(const StructureAlgebra& a, std::uint64_t seed = 0);

// File format: JSON {name, dim, basis, unit, mul:[[i,j,k,"p/q"],...]},
// triples sorted for bit-exact round-tripping.
std::string algebra_to_json(const StructureAlgebra& a);
StructureAlgebra algebra_from_json(const std::string& text);

// Builder mini-language: mat:d | ut:d1,d2,... | assoc:d1,..;r;u | prod:SPECxSPEC
StructureAlgebra build_from_spec(const std::string& spec);

}  // namespace pialg
