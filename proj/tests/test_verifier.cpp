#include <doctest.h>

#include "hecurve/decomp.hpp"
#include "hecurve/verifier.hpp"

using namespace hecurve;

namespace {

bool all_zero(const std::vector<Residual>& rs) {
  for (const auto& r : rs)
    if (r.value != 0) return false;
  return true;
}

// closed forms for the lattice shape
int odd_type_subsets(int n) {
  int count = 0;
  for (int size = 0; size <= n - 3; ++size)
    if ((n - size) % 2 == 1) {
      int64_t c = 1;
      for (int i = 0; i < size; ++i) c = c * (n + 1 - i) / (i + 1);
      count += static_cast<int>(c);
    }
  return count;
}

int even_type_ge4_subsets(int n) {
  int count = 0;
  for (int size = 0; size <= n - 4; ++size)
    if ((n - size) % 2 == 0) {
      int64_t c = 1;
      for (int i = 0; i < size; ++i) c = c * (n + 1 - i) / (i + 1);
      count += static_cast<int>(c);
    }
  return count;
}

}  // namespace

TEST_CASE("trace table covers the whole tower") {
  CurveMatrix a = random_smooth_curve(4, 7, 1);
  TraceTable table = build_trace_table(a, 7, 2);
  // C(5,0) + C(5,1) + C(5,2) = 16 quotients of type >= 2, two levels each
  CHECK(table.entries.size() == 32);
  for (const auto& [key, rec] : table.entries) {
    if (4 - popcount(key.first) == 2) CHECK(rec.trace == 0);
    CHECK(rec.weil_ok);
  }
}

TEST_CASE("type-3 subsets read their trace directly") {
  CurveMatrix a = random_smooth_curve(4, 5, 2);
  TraceTable table = build_trace_table(a, 5, 2);
  for (int k = 1; k <= 2; ++k) {
    NewTraceMap nt = solve_new_traces(table, k);
    for (const auto& [t, val] : nt)
      if (4 - popcount(t) == 3) CHECK(val == table.trace_at(t, k));
  }
}

TEST_CASE("n=4 top-level identity: JX_4 ~ product of five elliptic Jacobians") {
  for (int64_t p : {5, 7, 11}) {
    CurveMatrix a = random_smooth_curve(4, p, 7);
    TraceTable table = build_trace_table(a, p, 2);
    for (int k = 1; k <= 2; ++k) {
      int64_t sum = 0;
      for (int i = 0; i <= 4; ++i) sum += table.trace_at(SubsetMask{1} << i, k);
      CHECK(table.trace_at(0, k) == sum);
    }
  }
}

TEST_CASE("lattice shape matches closed forms") {
  for (int n : {4, 5, 6}) {
    CurveMatrix a = random_smooth_curve(n, 7, 3);
    TraceTable table = build_trace_table(a, 7, 1);
    NewTraceMap nt = solve_new_traces(table, 1);
    CHECK(static_cast<int>(nt.size()) == odd_type_subsets(n));
    auto residuals = check_consistency(table, nt, 1);
    CHECK(static_cast<int>(residuals.size()) == even_type_ge4_subsets(n));
  }
}

TEST_CASE("full verification passes on seeded curves") {
  for (auto [n, p] : std::vector<std::pair<int, int64_t>>{{4, 5}, {4, 7}, {5, 5}}) {
    CurveMatrix a = random_smooth_curve(n, p, 11);
    VerificationReport rep = full_verify(a, p, 2);
    CHECK(rep.pass);
    CHECK(all_zero(rep.residuals));
    CHECK(rep.weil_violations.empty());
    CHECK(rep.fixed_locus_ok);
    for (int64_t c : rep.fixed_locus_counts) CHECK(c == (int64_t{1} << (n - 1)));
  }
}

TEST_CASE("method independence") {
  CurveMatrix a = random_smooth_curve(4, 5, 13);
  VerificationReport naive = full_verify(a, 5, 2, CountMethod::naive);
  VerificationReport charsum = full_verify(a, 5, 2, CountMethod::charsum);
  CHECK(naive.pass == charsum.pass);
  REQUIRE(naive.residuals.size() == charsum.residuals.size());
  for (size_t i = 0; i < naive.residuals.size(); ++i)
    CHECK(naive.residuals[i].value == charsum.residuals[i].value);
}

TEST_CASE("negative control: any single perturbation flips the verdict") {
  CurveMatrix a = random_smooth_curve(4, 5, 17);
  TraceTable table = build_trace_table(a, 5, 1);

  NewTraceMap clean = solve_new_traces(table, 1);
  CHECK(all_zero(check_consistency(table, clean, 1)));

  for (int64_t delta : {int64_t{1}, int64_t{-1}, int64_t{5}}) {
    for (auto& [key, rec] : table.entries) {
      int64_t saved = rec.trace;
      rec.trace += delta;
      NewTraceMap nt = solve_new_traces(table, 1);
      bool verdict = all_zero(check_consistency(table, nt, 1)) && table_invariants_ok(table);
      CHECK_FALSE(verdict);
      rec.trace = saved;
    }
  }
}

TEST_CASE("verification report serialization carries the verdict") {
  CurveMatrix a = random_smooth_curve(4, 5, 19);
  VerificationReport rep = full_verify(a, 5, 1);
  std::string text = verification_to_text(rep);
  CHECK(text.find("\"verdict\": \"pass\"") != std::string::npos);
  CHECK(verification_to_text(rep) == text);  // deterministic
}

TEST_CASE("solved new traces satisfy the genus-m Weil bound") {
  CurveMatrix a = random_smooth_curve(5, 5, 23);
  TraceTable table = build_trace_table(a, 5, 2);
  for (int k = 1; k <= 2; ++k) {
    NewTraceMap nt = solve_new_traces(table, k);
    uint64_t qk = 1;
    for (int i = 0; i < k; ++i) qk *= 5;
    for (const auto& [t, val] : nt) {
      int m = prym_dimension(5, popcount(t));
      CHECK(mpz_class(val) * val <= 4 * mpz_class(m) * m * mpz_class(qk));
    }
  }
}
