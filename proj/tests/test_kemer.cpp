#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pialg/kemer.hpp"

#include "json.hpp"

using namespace pialg;

namespace {

StructureAlgebra ffield2() {
  return direct_product(build_matrix_algebra(1), build_matrix_algebra(1));
}

void check_witness_valid(const StructureAlgebra& a, const KemerWitness& w) {
  CHECK(!is_zero(w.value));
  if (w.polynomial) {
    REQUIRE(w.named_assignment.has_value());
    QVec re = evaluate(*w.polynomial, a, *w.named_assignment);
    CHECK(re == w.value);
    REQUIRE(w.polynomial->shape.has_value());
    const auto& sh = *w.polynomial->shape;
    CHECK(static_cast<int>(sh.small_sets.size()) == w.nu);
    CHECK(static_cast<int>(sh.big_sets.size()) == w.big_sets);
    std::set<int> seen;
    for (const auto& s : sh.all_sets()) {
      for (int v : s) CHECK(seen.insert(v).second);  // disjoint
      CHECK(is_alternating_in(*w.polynomial, s));
    }
    for (const auto& s : sh.small_sets) CHECK(static_cast<int>(s.size()) == w.r);
    for (const auto& s : sh.big_sets) CHECK(static_cast<int>(s.size()) == w.r + 1);
  } else {
    QVec re = evaluate_structured(a, w.family, w.assignment);
    CHECK(re == w.value);
  }
}

}  // namespace

TEST_CASE("exponent of matrix algebras") {
  for (int d = 1; d <= 3; ++d) CHECK(exp_gz(build_matrix_algebra(d)) == d * d);
}

TEST_CASE("exponent of triangular block algebras") {
  CHECK(exp_gz(build_ut_algebra({1, 1})) == 2);
  CHECK(exp_gz(build_ut_algebra({1, 2})) == 5);
  CHECK(exp_gz(build_ut_algebra({2, 2})) == 8);
  CHECK(exp_gz(build_ut_algebra({2, 1})) == 5);
}

TEST_CASE("exponent kills disconnected components") {
  CHECK(exp_gz(ffield2()) == 1);
  auto three = direct_product(ffield2(), build_matrix_algebra(1));
  CHECK(exp_gz(three) == 1);
}

TEST_CASE("exponent of direct products is the max") {
  auto ab = direct_product(build_ut_algebra({1, 1}), build_matrix_algebra(2));
  CHECK(exp_gz(ab) == 4);
  auto cd = direct_product(build_ut_algebra({1, 2}), ffield2());
  CHECK(exp_gz(cd) == 5);
  CHECK(exp_gz(direct_product(build_matrix_algebra(2), build_matrix_algebra(2))) == 4);
}

TEST_CASE("exponent is seed independent") {
  auto ut12 = build_ut_algebra({1, 2});
  CHECK(exp_gz(ut12, 1) == exp_gz(ut12, 42));
}

TEST_CASE("structured evaluation matches full expansion") {
  auto ut11 = build_ut_algebra({1, 1});
  auto est = kemer_lower_bound_search(ut11, 2);
  REQUIRE(est.witnesses.size() == 1);
  const auto& w = est.witnesses[0];
  REQUIRE(w.polynomial.has_value());  // small enough to expand
  QVec expanded = evaluate(*w.polynomial, ut11, *w.named_assignment);
  QVec structured = evaluate_structured(ut11, w.family, w.assignment);
  CHECK(expanded == structured);
  CHECK(!is_zero(structured));
}

TEST_CASE("structured evaluation respects its combination budget") {
  auto m2 = build_matrix_algebra(2);
  auto est = kemer_lower_bound_search(m2, 2);
  REQUIRE(!est.witnesses.empty());
  const auto& w = est.witnesses[0];
  CHECK_THROWS_AS(evaluate_structured(m2, w.family, w.assignment, 0), ContractError);
}

TEST_CASE("lower bound search on the standard examples") {
  auto m2 = build_matrix_algebra(2);
  auto e1 = kemer_lower_bound_search(m2, 2);
  CHECK(e1.d_lower == 4);
  CHECK(e1.s_lower == 0);

  auto ut11 = build_ut_algebra({1, 1});
  auto e2 = kemer_lower_bound_search(ut11, 2);
  CHECK(e2.d_lower == 2);
  CHECK(e2.s_lower == 1);

  auto f = build_matrix_algebra(1);
  for (int nu = 1; nu <= 4; ++nu) {
    auto e3 = kemer_lower_bound_search(f, nu);
    CHECK(e3.d_lower == 1);
    CHECK(e3.s_lower == 0);
  }

  auto e4 = kemer_lower_bound_search(ffield2(), 2);
  CHECK(e4.d_lower == 1);
  CHECK(e4.s_lower == 0);
}

TEST_CASE("witness validity") {
  for (const auto& a : {build_matrix_algebra(2), build_ut_algebra({1, 1}),
                        build_ut_algebra({1, 2}), ffield2()}) {
    auto est = kemer_lower_bound_search(a, 2);
    REQUIRE(!est.witnesses.empty());
    for (const auto& w : est.witnesses) check_witness_valid(a, w);
  }
}

TEST_CASE("lower bounds never exceed the upper bound") {
  for (const auto& a :
       {build_matrix_algebra(1), build_matrix_algebra(2), build_ut_algebra({1, 1}),
        build_ut_algebra({1, 2}), ffield2(),
        build_associated_algebra({1, 1}, 1, 1)}) {
    auto est = kemer_lower_bound_search(a, 2);
    bool le = est.d_lower < est.par.dim_ss ||
              (est.d_lower == est.par.dim_ss && est.s_lower <= est.par.s);
    CHECK(le);
    CHECK((est.status == "certified_basic") ==
          (est.d_lower == est.par.dim_ss && est.s_lower == est.par.s));
  }
}

TEST_CASE("d_lower is nonincreasing in nu") {
  std::vector<StructureAlgebra> algs;
  algs.push_back(build_matrix_algebra(1));
  algs.push_back(build_ut_algebra({1, 1}));
  algs.push_back(ffield2());
  for (const auto& a : algs) {
    int prev = -1;
    for (int nu = 1; nu <= 3; ++nu) {
      auto est = kemer_lower_bound_search(a, nu);
      if (prev >= 0) CHECK(est.d_lower <= prev);
      prev = est.d_lower;
    }
  }
}

TEST_CASE("exhaustive refutation of alternating strata") {
  auto ff = ffield2();
  // commutative: every polynomial alternating in a size-2 set vanishes
  CHECK(refute_alternating(ff, 1, 2, 0));
  CHECK(refute_alternating(ff, 1, 2, 2));
  CHECK(refute_alternating(ff, 2, 2, 2));
  // a standard-identity counterexample stratum on noncommutative algebras
  CHECK(!refute_alternating(build_matrix_algebra(2), 1, 2, 0));
  CHECK(!refute_alternating(build_ut_algebra({1, 1}), 1, 2, 1));
  CHECK_THROWS_AS(refute_alternating(ff, 3, 3, 3), ContractError);
}

TEST_CASE("index estimates and certification") {
  auto e1 = kemer_index_estimate(build_ut_algebra({1, 1}));
  CHECK(e1.status == "certified_basic");
  CHECK(e1.d_lower == 2);
  CHECK(e1.s_lower == 1);

  auto e2 = kemer_index_estimate(build_matrix_algebra(2));
  CHECK(e2.status == "certified_basic");
  CHECK(e2.d_lower == 4);
  CHECK(e2.s_lower == 0);

  auto e3 = kemer_index_estimate(build_ut_algebra({1, 2}));
  CHECK(e3.status == "certified_basic");
  CHECK(e3.d_lower == 5);
  CHECK(e3.s_lower == 1);

  auto e4 = kemer_index_estimate(ffield2(), 2, 200000, 2);
  CHECK(e4.status == "lower_bound_only");
  CHECK(e4.d_lower == 1);
  CHECK(e4.s_lower == 0);
  CHECK(e4.par.dim_ss == 2);
  CHECK(e4.par.s == 0);
  REQUIRE(e4.refuted_up_to_extra_vars.has_value());
  CHECK(*e4.refuted_up_to_extra_vars == 2);
}

TEST_CASE("basicness check") {
  CHECK(basicness_check(build_ut_algebra({1, 2})).certified);
  CHECK(basicness_check(build_matrix_algebra(3)).certified);
  auto r = basicness_check(ffield2());
  CHECK(!r.certified);
  CHECK(r.details.find("not certified") != std::string::npos);
  CHECK(r.details.find("not basic") == std::string::npos);  // never disproves
  CHECK(r.estimate.d_lower == 1);
}

TEST_CASE("certified triangular algebras match the block data") {
  auto est = kemer_index_estimate(build_ut_algebra({2, 2}));
  CHECK(est.status == "certified_basic");
  CHECK(est.d_lower == 8);
  CHECK(est.s_lower == 1);
}

TEST_CASE("report json") {
  auto a = build_ut_algebra({1, 1});
  auto est = kemer_index_estimate(a);
  int e = exp_gz(a);
  std::string s1 = kemer_report_json(a, est, e, 0, 200000);
  std::string s2 = kemer_report_json(a, est, e, 0, 200000);
  CHECK(s1 == s2);
  auto j = nlohmann::json::parse(s1);
  CHECK(j["exp"] == 2);
  CHECK(j["par"] == nlohmann::json({2, 1}));
  CHECK(j["kemer_lower"] == nlohmann::json({2, 1}));
  CHECK(j["status"] == "certified_basic");
  CHECK(j["seed"] == 0);
  CHECK(j["budget"] == 200000);
  REQUIRE(j["witnesses"].size() == 1);
  CHECK(j["witnesses"][0]["r"] == 2);
  CHECK(j["witnesses"][0]["big_sets"] == 1);
}
