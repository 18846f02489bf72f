#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hecurve/counting.hpp"
#include "hecurve/decomp.hpp"

using namespace hecurve;

namespace {

CurveMatrix make(int n, int64_t p, std::vector<std::vector<int64_t>> rows) {
  CurveMatrix m;
  m.n = n;
  m.p = p;
  m.rows = std::move(rows);
  return m;
}

bool weil_ok(int64_t n_points, uint64_t q, const mpz_class& g) {
  mpz_class a = mpz_class(static_cast<uint64_t>(q)) + 1 - n_points;
  return a * a <= 4 * g * g * mpz_class(static_cast<uint64_t>(q));
}

}  // namespace

TEST_CASE("conic counts: q + 1 points") {
  CurveMatrix conic = make(2, 5, {{1, 1, 1}});
  ExtField f5 = ExtField::make(PrimeField(5), 1, 0);
  CHECK(count_naive(conic, f5) == 6);
  CHECK(count_charsum(conic, f5) == 6);

  CurveMatrix conic3 = make(2, 3, {{1, 1, 1}});
  ExtField f3 = ExtField::make(PrimeField(3), 1, 0);
  CHECK(count_naive(conic3, f3) == 4);
  CHECK(count_charsum(conic3, f3) == 4);
}

TEST_CASE("elliptic quartic over F_5") {
  CurveMatrix e = make(3, 5, {{1, 1, 1, 0}, {0, 1, 2, 3}});
  ExtField f5 = ExtField::make(PrimeField(5), 1, 0);
  int64_t n = count_naive(e, f5);
  CHECK(n >= 2);   // q + 1 - 2 sqrt(q)
  CHECK(n <= 10);  // q + 1 + 2 sqrt(q)
  CHECK(count_charsum(e, f5) == n);
}

TEST_CASE("oracle equivalence over many seeded curves and fields") {
  std::vector<std::pair<int64_t, int>> fields = {{3, 1}, {5, 1}, {7, 1}, {3, 2},
                                                 {11, 1}, {13, 1}, {5, 2}, {7, 2}};
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    for (int n : {2, 3}) {
      for (auto [p, k] : fields) {
        CurveMatrix a = random_smooth_curve(n, p, seed);
        ExtField f = ExtField::make(PrimeField(p), k, seed);
        int64_t naive = count_naive(a, f);
        CHECK(count_charsum(a, f) == naive);
        CHECK(weil_ok(naive, f.q(), genus_of_type(n)));
      }
    }
  }
}

TEST_CASE("row scaling leaves counts unchanged") {
  CurveMatrix a = random_smooth_curve(4, 7, 3);
  ExtField f = ExtField::make(PrimeField(7), 1, 0);
  int64_t base = count_charsum(a, f);
  for (int64_t scale : {2, 3, 6}) {
    CurveMatrix scaled = a;
    for (auto& e : scaled.rows[2]) e = e * scale % 7;
    CHECK(count_charsum(scaled, f) == base);
    CHECK(count_naive(scaled, f) == base);
  }
}

TEST_CASE("thread count does not change the result") {
  CurveMatrix a = random_smooth_curve(4, 11, 9);
  ExtField f = ExtField::make(PrimeField(11), 1, 0);
  int64_t one = count_charsum(a, f, {}, 1);
  CHECK(count_charsum(a, f, {}, 4) == one);
  CHECK(count_naive(a, f, {}, 4) == count_naive(a, f, {}, 1));
}

TEST_CASE("trace records") {
  CurveMatrix a = random_smooth_curve(4, 7, 5);

  SUBCASE("type-2 quotients have trace 0") {
    for (SubsetMask t : {SubsetMask{0b00011}, SubsetMask{0b10100}}) {
      CountRecord rec = trace(a, t, 7, 1);
      CHECK(rec.trace == 0);
      CHECK(rec.n_points == 8);
    }
  }
  SUBCASE("empty subset counts the full curve") {
    ExtField f = ExtField::make(PrimeField(7), 1, 0);
    CountRecord rec = trace(a, 0, 7, 1);
    CHECK(rec.n_points == count_naive(canonicalize(a), f));
    CHECK(rec.weil_ok);
  }
  SUBCASE("type-3 quotient satisfies the genus-1 Weil bound") {
    CountRecord rec = trace(a, SubsetMask{0b00001}, 7, 2);
    CHECK(rec.trace * rec.trace <= 4 * 49);
    CHECK(rec.weil_ok);
  }
  SUBCASE("type below 2 is rejected") {
    CHECK_THROWS_AS((void)trace(a, SubsetMask{0b00111}, 7, 1), std::invalid_argument);
  }
}

TEST_CASE("budget enforcement") {
  CurveMatrix a = random_smooth_curve(3, 13, 1);
  ExtField f = ExtField::make(PrimeField(13), 3, 0);
  CountBudget tiny;
  tiny.max_tuples = 1000;
  tiny.max_lines = 10;
  CHECK_THROWS_AS((void)count_naive(a, f, tiny), budget_error);
  CHECK_THROWS_AS((void)count_charsum(a, f, tiny), budget_error);
}

TEST_CASE("fixed locus counts are 2^{n-1}") {
  for (auto [n, p, seed] : std::vector<std::tuple<int, int64_t, uint64_t>>{
           {3, 5, 1}, {3, 7, 2}, {4, 7, 3}, {5, 7, 4}, {6, 11, 5}}) {
    CurveMatrix a = random_smooth_curve(n, p, seed);
    for (int i = 0; i <= n; ++i)
      CHECK(fixed_locus_count(a, i) == (int64_t{1} << (n - 1)));
  }
}

TEST_CASE("fixed locus agrees with direct enumeration over F_{p^2}") {
  // oracle: enumerate the hyperplane section x_i = 0 as a projective system
  for (auto [n, p, seed] : std::vector<std::tuple<int, int64_t, uint64_t>>{
           {3, 5, 7}, {3, 7, 8}, {4, 5, 9}}) {
    CurveMatrix a = random_smooth_curve(n, p, seed);
    ExtField f2 = ExtField::make(PrimeField(p), 2, 0);
    for (int i = 0; i <= n; ++i) {
      std::vector<std::vector<int64_t>> rows;
      for (const auto& r : a.rows) {
        std::vector<int64_t> row;
        for (int c = 0; c <= n; ++c)
          if (c != i) row.push_back(r[c]);
        rows.push_back(std::move(row));
      }
      CHECK(fixed_locus_count(a, i, 0) == count_projective_system(rows, n, f2));
    }
  }
}

TEST_CASE("count cache") {
  std::string path = "test_cache.tmp";
  std::remove(path.c_str());
  {
    CountCache cache(path);
    CurveMatrix a = random_smooth_curve(3, 5, 1);
    CountRecord first = trace(a, 0, 5, 1, CountMethod::auto_select, &cache);
    CHECK(cache.misses() == 1);
    CountRecord second = trace(a, 0, 5, 1, CountMethod::auto_select, &cache);
    CHECK(second.n_points == first.n_points);
    CHECK(cache.hits() == 1);
  }
  {
    // reload from disk, then corrupt the tail
    std::ofstream app(path, std::ios::app);
    app << "garbage line that should be ignored\n";
    app.close();
    CountCache cache(path);
    CHECK(cache.size() == 1);
    CurveMatrix a = random_smooth_curve(3, 5, 1);
    (void)trace(a, 0, 5, 1, CountMethod::auto_select, &cache);
    CHECK(cache.hits() == 1);
  }
  std::remove(path.c_str());
}

TEST_CASE("gauss accumulator combines componentwise") {
  GaussAccumulator a, b;
  a.a = 10;
  a.b = 0;
  b.a = -4;
  b.b = 0;
  a.combine(b);
  CHECK(a.a == 6);
  CHECK(a.b == 0);
}
