#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pialg/paths.hpp"

#include "pialg/codim.hpp"

using namespace pialg;

namespace {

Integer fact(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Integer binom(int n, int k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

Integer multi(int n, const std::vector<int>& parts) {
  Integer out = 1;
  int left = n;
  for (int p : parts) {
    out *= binom(left, p);
    left -= p;
  }
  return out;
}

}  // namespace

TEST_CASE("symbol enumeration") {
  auto a1 = build_associated_algebra({1}, 1, 1);
  auto s1 = enumerate_symbols(a1);
  CHECK(s1.size() == 2);  // |W| = 1 plus one component
  CHECK(s1[0].kind == PathSymbol::sim_comp);
  CHECK(s1[0].index == 1);
  CHECK(s1[1].kind == PathSymbol::radical_word);

  auto a2 = build_associated_algebra({1, 1}, 1, 1);
  CHECK(enumerate_symbols(a2).size() == 6);  // |W| = 4, q = 2

  // d = 2 block: 4 units on each side of the connector, 16 words
  auto a3 = build_associated_algebra({2}, 1, 1);
  CHECK(enumerate_symbols(a3).size() == 17);

  CHECK_THROWS_AS(enumerate_symbols(build_matrix_algebra(2)), ContractError);
}

TEST_CASE("path structure enumeration") {
  auto a1 = build_associated_algebra({1}, 1, 1);
  auto ps = enumerate_path_structures(a1, 1);
  REQUIRE(ps.size() == 2);  // (A1) and (A1, w, A1)
  CHECK(ps[0].symbols.size() == 1);
  CHECK(ps[1].symbols.size() == 3);
  CHECK(ps[1].radical_count() == 1);
  for (const auto& p : ps) CHECK(!p.flagged());

  // s = 0 leaves exactly the single-component structures
  auto a2 = build_associated_algebra({1, 1}, 1, 1);
  CHECK(enumerate_path_structures(a2, 0).size() == 2);
  CHECK(enumerate_path_structures(a1, 0).size() == 1);

  // q = 2, |W| = 4, s = 1: q + q^2 |W| shapes
  CHECK(enumerate_path_structures(a2, 1).size() == 2 + 4 * 4);
}

TEST_CASE("path axioms hold for every emitted structure") {
  auto a = build_associated_algebra({1, 1}, 1, 2);
  for (int s = 0; s <= 2; ++s)
    for (bool fl : {false, true})
      for (const auto& p : enumerate_path_structures(a, s, fl)) {
        CHECK(p.radical_count() <= s);
        // alternation: no two adjacent symbols of the same kind
        for (size_t i = 0; i + 1 < p.symbols.size(); ++i)
          CHECK(p.symbols[i].kind != p.symbols[i + 1].kind);
        if (!p.flagged()) {
          CHECK(p.symbols.front().kind == PathSymbol::sim_comp);
          CHECK(p.symbols.back().kind == PathSymbol::sim_comp);
        }
      }
}

TEST_CASE("flagged leading and trailing radical variants") {
  auto a1 = build_associated_algebra({1}, 1, 1);
  auto all = enumerate_path_structures(a1, 1, true);
  // core (A1), (A1,w,A1) plus (w), (w,A1), (A1,w)
  CHECK(all.size() == 5);
  int flagged = 0;
  for (const auto& p : all)
    if (p.flagged()) {
      ++flagged;
      bool lead_ok = !p.leading_radical ||
                     p.symbols.front().kind == PathSymbol::radical_word;
      bool trail_ok = !p.trailing_radical ||
                      p.symbols.back().kind == PathSymbol::radical_word;
      CHECK(lead_ok);
      CHECK(trail_ok);
    }
  CHECK(flagged == 3);
}

TEST_CASE("structure counts stay below the symbol-power sum") {
  for (auto dims : std::vector<std::vector<int>>{{1}, {1, 1}, {2}})
    for (int r = 1; r <= 2; ++r)
      for (int u = 1; u <= 2; ++u) {
        auto a = build_associated_algebra(dims, r, u);
        int symb = static_cast<int>(enumerate_symbols(a).size());
        for (int s = 0; s <= u; ++s) {
          auto core = enumerate_path_structures(a, s);
          auto all = enumerate_path_structures(a, s, true);
          CHECK(Integer(static_cast<long>(core.size())) <= path_count_bound(symb, s));
          CHECK(Integer(static_cast<long>(all.size())) <= path_count_bound(symb, s));
        }
      }
}

TEST_CASE("path count bound arithmetic") {
  CHECK(path_count_bound(2, 1) == 14);
  CHECK(path_count_bound(6, 1) == 258);
  CHECK(path_count_bound(5, 0) == 5);
  CHECK(path_count_bound(1, 3) == 7);
  CHECK_THROWS_AS(path_count_bound(0, 1), ContractError);
  CHECK_THROWS_AS(path_count_bound(2, -1), ContractError);
}

TEST_CASE("monomial class bound arithmetic") {
  CHECK(monomial_class_bound(4, {3}, 1) == 4);
  CHECK(monomial_class_bound(5, {2, 2}, 1) == 30);
  for (int n = 1; n <= 6; ++n) CHECK(monomial_class_bound(n, {n}, 0) == 1);
  CHECK_THROWS_AS(monomial_class_bound(5, {2, 2}, 0), ContractError);
  CHECK_THROWS_AS(monomial_class_bound(5, {-1, 5}, 1), ContractError);
}

TEST_CASE("class bound dominates the exact class count") {
  // s'! C(n, s') multinomial <= n^{s'} multinomial, exhaustively on a small grid
  for (int n = 1; n <= 8; ++n)
    for (int sp = 0; sp <= std::min(3, n); ++sp) {
      int m = n - sp;
      for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b) {
          std::vector<int> parts{a, b, m - a - b};
          Integer lhs = fact(sp) * binom(n, sp) * multi(m, parts);
          CHECK(lhs <= monomial_class_bound(n, parts, sp));
        }
    }
}

TEST_CASE("upper bound series collapses for one block without radical") {
  auto a = build_matrix_algebra(2);
  a.assoc = AssociatedInfo{{2}, 1, 0, {}};  // q = 1, s = 0, empty word set
  CodimSource src = [](int d, int m) -> Integer {
    CHECK(d == 2);
    unsigned long long table[] = {1, 2, 6, 23, 91, 346};
    return Integer(std::to_string(table[m - 1]));
  };
  unsigned long long table[] = {1, 2, 6, 23, 91, 346};
  for (int n = 1; n <= 6; ++n) CHECK(upper_bound_series(a, n, src) == Integer(std::to_string(table[n - 1])));
}

TEST_CASE("series closed form for the two-field shape") {
  auto a = build_associated_algebra({1, 1}, 1, 1);
  CodimSource ones = [](int, int) { return Integer(1); };
  for (int n = 1; n <= 8; ++n) {
    Integer expect = (Integer(1) << n) + Integer(n) * (Integer(1) << (n - 1));
    CHECK(upper_bound_series(a, n, ones) == expect);
  }
}

TEST_CASE("series dominates the computed codimensions") {
  auto a = build_associated_algebra({1, 1}, 1, 1);
  CodimSource ones = [](int, int) { return Integer(1); };
  for (int n = 1; n <= 6; ++n) {
    auto rec = codimension_modular(a, n, 11);
    CHECK(upper_bound_series(a, n, ones) >= Integer(std::to_string(rec.c_n)));
  }
}

TEST_CASE("series is monotone in the supplied codimensions") {
  auto a = build_associated_algebra({1, 1}, 1, 1);
  CodimSource ones = [](int, int) { return Integer(1); };
  CodimSource twos = [](int, int m) { return Integer(m == 0 ? 1 : 2); };
  for (int n = 2; n <= 6; ++n)
    CHECK(upper_bound_series(a, n, twos) > upper_bound_series(a, n, ones));
}

TEST_CASE("artifact formats") {
  auto a = build_associated_algebra({1}, 1, 1);
  auto ps = enumerate_path_structures(a, 1, true);
  std::string j1 = path_structures_json(ps);
  std::string j2 = path_structures_json(enumerate_path_structures(a, 1, true));
  CHECK(j1 == j2);
  CHECK(j1.find("\"sim_comp\"") != std::string::npos);
  CHECK(j1.find("\"radical_word\"") != std::string::npos);

  CodimSource ones = [](int, int) { return Integer(1); };
  std::string csv = upper_bound_csv(a, 4, ones);
  CHECK(csv.rfind("n,upper_bound\n", 0) == 0);
  CHECK(csv.find("\n4,") != std::string::npos);
}
