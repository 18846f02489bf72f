#include <doctest.h>

#include <map>

#include "hecurve/decomp.hpp"

using namespace hecurve;

TEST_CASE("prym_dimension") {
  CHECK(prym_dimension(5, 0) == 2);
  CHECK(prym_dimension(4, 0) == 0);
  CHECK(prym_dimension(7, 2) == 2);
  CHECK(prym_dimension(6, 1) == 2);
  CHECK(prym_dimension(6, 0) == 0);
}

TEST_CASE("decompose small types") {
  DecompositionReport r3 = decompose(3);
  CHECK(r3.factors.size() == 1);
  CHECK(r3.factors[0].subset == 0);
  CHECK(r3.factors[0].prym_dim == 1);
  CHECK(r3.genus == 1);

  DecompositionReport r4 = decompose(4);
  CHECK(r4.counts_by_dim.at(1) == 5);
  CHECK(r4.factors.size() == 5);
  CHECK(r4.total_dim == 5);
  CHECK(r4.genus == 5);

  DecompositionReport r5 = decompose(5);
  CHECK(r5.counts_by_dim.at(1) == 15);
  CHECK(r5.counts_by_dim.at(2) == 1);
  CHECK(r5.total_dim == 17);
  CHECK(r5.genus == 17);

  CHECK_THROWS_AS((void)decompose(2), std::invalid_argument);
}

TEST_CASE("decompose factors are sorted and deterministic") {
  DecompositionReport r = decompose(6);
  for (size_t i = 1; i < r.factors.size(); ++i) {
    int pa = popcount(r.factors[i - 1].subset), pb = popcount(r.factors[i].subset);
    CHECK((pa < pb || (pa == pb && r.factors[i - 1].subset < r.factors[i].subset)));
  }
}

TEST_CASE("total dimension equals the genus up to n = 64") {
  for (int n = 3; n <= 64; ++n) {
    DecompositionReport r = decompose(n, /*factor_limit=*/16);
    CHECK(r.total_dim == r.genus);
    CHECK(r.isogeny_degree_check);
  }
}

TEST_CASE("kernel order") {
  CHECK(kernel_order(3) == 1);
  CHECK(kernel_order(4) == 32);
  CHECK(kernel_order(5) == (mpz_class(1) << 34));
}

TEST_CASE("Prym-Tyurin exponent and polarization type") {
  CHECK(pt_exponent(3) == 1);
  CHECK(pt_polarization_type(3, 1) == std::vector<mpz_class>{1});  // principal
  CHECK(pt_exponent(4) == 2);
  CHECK(pt_polarization_type(6, 2) == std::vector<mpz_class>({8, 8}));
}

TEST_CASE("character dimensions") {
  // full support, odd n
  CHECK(character_dimension(5, Character{0b111111}) == 2);
  CHECK(character_dimension(3, Character{0b1111}) == 1);
  CHECK(character_dimension(5, Character{0b000011}) == 0);
  CHECK(character_dimension(5, Character{0b001111}) == 1);
  CHECK(character_dimension(5, Character{0}) == 0);
  CHECK_THROWS_AS((void)character_dimension(5, Character{0b000111}), std::invalid_argument);
}

TEST_CASE("character decomposition matches the subset side under complement") {
  for (int n = 3; n <= 12; ++n) {
    auto chars = character_decompose(n);
    CHECK(chars.size() == (size_t{1} << n));

    const SubsetMask all = (SubsetMask{1} << (n + 1)) - 1;
    DecompositionReport rep = decompose(n);
    std::map<SubsetMask, int> subset_dims;
    for (const auto& f : rep.factors) subset_dims[f.subset] = f.prym_dim;

    mpz_class char_total = 0;
    for (const auto& c : chars) {
      char_total += c.dim;
      if (popcount(c.support) >= 4) {
        // U <-> T = complement(U)
        SubsetMask t = all & ~c.support;
        REQUIRE(subset_dims.count(t) == 1);
        CHECK(subset_dims[t] == c.dim);
      } else {
        CHECK(c.dim == 0);
      }
    }
    CHECK(char_total == rep.genus);
  }
}

TEST_CASE("n=4: the five weight-4 supports have dimension 1") {
  auto chars = character_decompose(4);
  int weight4 = 0;
  for (const auto& c : chars)
    if (popcount(c.support) == 4) {
      ++weight4;
      CHECK(c.dim == 1);
    }
  CHECK(weight4 == 5);
  // full support has odd weight 5 and is not a character
  for (const auto& c : chars) CHECK(c.support != 0b11111);
}

TEST_CASE("identity suite") {
  auto results = identity_suite(64);
  CHECK(results.size() == 62);
  for (const auto& r : results) {
    CHECK(r.genus_sum_ok);
    CHECK(r.etale_ok);
    CHECK(r.kernel_ok);
  }
  // worked rows: n=7 gives 70 + 2*28 + 3*1 = 129 = 2^5*4 + 1
  mpz_class s7 = 70 + 2 * 28 + 3 * 1;
  CHECK(s7 == 129);
  CHECK(genus_of_type(7) == 129);
  // n=5 unramified-cover identity: 2^3 * 2 = 2^4 * (2 - 1)
  CHECK((1 << 3) * 2 == (1 << 4) * 1);
}

TEST_CASE("positive-dimensional factor counts match the closed form") {
  for (int n = 3; n <= 12; ++n) {
    DecompositionReport r = decompose(n);
    mpz_class positive = 0, expected = 0;
    for (const auto& f : r.factors)
      if (f.prym_dim > 0) positive += 1;
    for (const auto& [m, c] : r.counts_by_dim) expected += c;
    CHECK(positive == expected);
  }
}

TEST_CASE("report serialization is diff-stable") {
  CHECK(report_to_text(decompose(5)) == report_to_text(decompose(5)));
  CHECK(report_to_text(decompose(4)).find("\"kernel_order\": \"32\"") != std::string::npos);
}
