#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pialg/algebra.hpp"

#include <random>

using namespace pialg;

// Independent dimension oracle for the associated algebra: matrix units plus
// all words u_0 b u_1 ... b u_k counted by brute enumeration.
static long assoc_dim_oracle(const std::vector<int>& block_dims, int r, int u) {
  long nu = 0;
  for (int d : block_dims) nu += static_cast<long>(d) * d;
  long total = nu;
  for (int k = 1; k <= u; ++k) {
    long words = 1;
    for (int i = 0; i <= k; ++i) words *= nu;
    for (int i = 0; i < k; ++i) words *= r;
    total += words;
  }
  return total;
}

TEST_CASE("matrix and triangular builders") {
  auto m2 = build_matrix_algebra(2);
  CHECK(m2.dim == 4);
  CHECK(m2.check_associative());
  CHECK(m2.check_unit());

  auto m3 = build_matrix_algebra(3);
  CHECK(m3.dim == 9);
  CHECK(m3.check_associative());

  auto ut11 = build_ut_algebra({1, 1});
  CHECK(ut11.dim == 3);
  CHECK(ut11.check_associative());
  CHECK(ut11.check_unit());

  auto ut12 = build_ut_algebra({1, 2});
  CHECK(ut12.dim == 7);
  CHECK(ut12.check_associative());

  auto ut22 = build_ut_algebra({2, 2});
  CHECK(ut22.dim == 12);
  CHECK(ut22.check_associative());
  CHECK(ut22.check_unit());

  CHECK_THROWS_AS(build_matrix_algebra(0), ContractError);
  CHECK_THROWS_AS(build_ut_algebra({}), ContractError);
  CHECK_THROWS_AS(build_ut_algebra({1, 0}), ContractError);
}

TEST_CASE("matrix units multiply as matrix units") {
  auto m2 = build_matrix_algebra(2);
  REQUIRE(m2.meta.has_value());
  const auto& un = m2.meta->blocks[0].unit;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          QVec p = m2.multiply(m2.basis_vec(un[i][j]), m2.basis_vec(un[k][l]));
          QVec expect(m2.dim, Rational(0));
          if (j == k) expect[un[i][l]] = 1;
          CHECK(p == expect);
        }
}

TEST_CASE("associated algebra dimensions and products") {
  struct Case {
    std::vector<int> blocks;
    int r, u;
  };
  for (const Case& c : {Case{{1}, 1, 1}, Case{{1, 1}, 1, 1}, Case{{2}, 1, 1},
                        Case{{1, 1}, 2, 2}, Case{{2}, 2, 2}}) {
    auto a = build_associated_algebra(c.blocks, c.r, c.u);
    CHECK(a.dim == assoc_dim_oracle(c.blocks, c.r, c.u));
    if (a.dim <= 50) {
      CHECK(a.check_associative());
    } else {
      // exhaustive check is cubic; sample triples for the big case
      std::mt19937_64 rng(7);
      for (int trial = 0; trial < 2000; ++trial) {
        int i = rng() % a.dim, j = rng() % a.dim, k = rng() % a.dim;
        QVec ij = a.multiply(a.basis_vec(i), a.basis_vec(j));
        QVec jk = a.multiply(a.basis_vec(j), a.basis_vec(k));
        CHECK(a.mult_basis_right(ij, k) == a.mult_basis_left(i, jk));
      }
    }
    CHECK(a.check_unit());
    REQUIRE(a.assoc.has_value());
    long nu = 0;
    for (int d : c.blocks) nu += static_cast<long>(d) * d;
    CHECK(static_cast<long>(a.assoc->words.size()) == a.dim - nu);
  }
  // spot check: blocks (2), r=1, u=1 has 4 matrix units and 4^2 words
  auto a = build_associated_algebra({2}, 1, 1);
  CHECK(a.dim == 20);
  CHECK_THROWS_AS(build_associated_algebra({}, 1, 1), ContractError);
  CHECK_THROWS_AS(build_associated_algebra({1}, 0, 1), ContractError);
}

TEST_CASE("direct products") {
  auto f = build_matrix_algebra(1);
  auto ff = direct_product(f, f);
  CHECK(ff.dim == 2);
  CHECK(ff.check_associative());
  CHECK(ff.check_unit());
  auto mixed = direct_product(build_matrix_algebra(2), build_ut_algebra({1, 1}));
  CHECK(mixed.dim == 7);
  CHECK(mixed.check_associative());
  // products in the two factors do not interact
  QVec p = mixed.multiply(mixed.basis_vec(0), mixed.basis_vec(4));
  CHECK(is_zero(p));
}

TEST_CASE("subspace arithmetic") {
  auto a = build_matrix_algebra(2);
  Subspace s(&a);
  CHECK(s.insert({Rational(1), Rational(0), Rational(0), Rational(0)}));
  CHECK(s.insert({Rational(1), Rational(2), Rational(0), Rational(0)}));
  CHECK(!s.insert({Rational(3), Rational(4), Rational(0), Rational(0)}));
  CHECK(s.dim() == 2);
  CHECK(s.contains({Rational(-5), Rational(7), Rational(0), Rational(0)}));
  CHECK(!s.contains({Rational(0), Rational(0), Rational(1), Rational(0)}));
}

TEST_CASE("radical matches combinatorial count for builders") {
  CHECK(radical(build_matrix_algebra(2)).is_zero());
  CHECK(radical(build_matrix_algebra(3)).is_zero());

  auto ut11 = build_ut_algebra({1, 1});
  auto j11 = radical(ut11);
  CHECK(j11.dim() == 1);
  CHECK(nilpotency_degree(ut11, j11) == 2);

  auto ut12 = build_ut_algebra({1, 2});
  auto j12 = radical(ut12);
  CHECK(j12.dim() == 2);
  CHECK(nilpotency_degree(ut12, j12) == 2);

  auto ut22 = build_ut_algebra({2, 2});
  CHECK(radical(ut22).dim() == 4);

  // the builder's tagged radical basis spans exactly the computed radical
  for (int idx : ut12.meta->radical_basis) CHECK(j12.contains(ut12.basis_vec(idx)));

  auto assoc = build_associated_algebra({1, 1}, 2, 2);
  auto ja = radical(assoc);
  CHECK(ja.dim() == assoc.dim - 2);
  CHECK(nilpotency_degree(assoc, ja) == 3);

  // radical of a product is the product of radicals
  auto prod = direct_product(ut11, ut12);
  CHECK(radical(prod).dim() == 3);
}

TEST_CASE("nilpotency degree conventions") {
  auto m2 = build_matrix_algebra(2);
  Subspace zero(&m2);
  CHECK(nilpotency_degree(m2, zero) == 1);
  Subspace full(&m2);
  for (int i = 0; i < 4; ++i) full.insert(m2.basis_vec(i));
  CHECK_THROWS_AS(nilpotency_degree(m2, full), ContractError);
}

TEST_CASE("wedderburn decomposition of standard algebras") {
  auto wd2 = wedderburn_data(build_matrix_algebra(2));
  CHECK(wd2.q == 1);
  CHECK(wd2.block_dims == std::vector<int>{2});
  CHECK(wd2.dim_ss == 4);
  CHECK(wd2.nildeg == 1);

  auto wd3 = wedderburn_data(build_matrix_algebra(3));
  CHECK(wd3.block_dims == std::vector<int>{3});

  auto ut12 = build_ut_algebra({1, 2});
  auto wd12 = wedderburn_data(ut12);
  CHECK(wd12.q == 2);
  CHECK(wd12.block_dims == std::vector<int>{1, 2});
  CHECK(wd12.dim_ss == 5);
  CHECK(wd12.nildeg == 2);
  // lifted idempotents are honest idempotents of the ambient algebra
  for (const auto& e : wd12.component_idempotents)
    CHECK(ut12.multiply(e, e) == e);

  auto ff = direct_product(build_matrix_algebra(1), build_matrix_algebra(1));
  auto wdff = wedderburn_data(ff);
  CHECK(wdff.q == 2);
  CHECK(wdff.block_dims == std::vector<int>{1, 1});

  auto wd22 = wedderburn_data(build_ut_algebra({2, 2}));
  CHECK(wd22.block_dims == std::vector<int>{2, 2});
  CHECK(wd22.nildeg == 2);
}

TEST_CASE("wedderburn output is seed independent") {
  auto ut12 = build_ut_algebra({1, 2});
  auto a = wedderburn_data(ut12, 0);
  auto b = wedderburn_data(ut12, 987654321);
  CHECK(a.block_dims == b.block_dims);
  CHECK(a.q == b.q);
  CHECK(a.nildeg == b.nildeg);
}

TEST_CASE("par values") {
  CHECK(par(build_matrix_algebra(2)) == ParValue{4, 0});
  CHECK(par(build_ut_algebra({1, 1})) == ParValue{2, 1});
  CHECK(par(build_ut_algebra({1, 2})) == ParValue{5, 1});
  CHECK(par(build_associated_algebra({2}, 1, 1)) == ParValue{4, 1});
  CHECK(par(build_associated_algebra({1, 1}, 2, 2)) == ParValue{2, 2});
  CHECK(par(direct_product(build_matrix_algebra(1), build_matrix_algebra(1))) ==
        ParValue{2, 0});
}

TEST_CASE("json round trip") {
  auto a = build_ut_algebra({1, 2});
  std::string text = algebra_to_json(a);
  auto b = algebra_from_json(text);
  CHECK(b.dim == a.dim);
  CHECK(b.name == a.name);
  CHECK(algebra_to_json(b) == text);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      QVec pa = a.multiply(a.basis_vec(i), a.basis_vec(j));
      QVec pb = b.multiply(b.basis_vec(i), b.basis_vec(j));
      CHECK(pa == pb);
    }
  CHECK_THROWS_AS(algebra_from_json("{\"name\":\"x\",\"dim\":0,\"basis\":[],"
                                    "\"unit\":null,\"mul\":[]}"),
                  ContractError);
}

TEST_CASE("builder mini-language") {
  CHECK(build_from_spec("mat:2").dim == 4);
  CHECK(build_from_spec("ut:1,1").dim == 3);
  CHECK(build_from_spec("assoc:1,1;1;1").dim == 2 + 4);
  CHECK(build_from_spec("prod:mat:1*mat:1").dim == 2);
  CHECK(build_from_spec("prod:mat:1\xc3\x97ut:1,1").dim == 4);
  CHECK(build_from_spec("prod:mat:1*prod:mat:1*mat:1").dim == 3);
  CHECK_THROWS_AS(build_from_spec("mat:0"), ContractError);
  CHECK_THROWS_AS(build_from_spec("bogus"), ContractError);
}
