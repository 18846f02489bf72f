#ifndef HECURVE_VERIFIER_HPP
#define HECURVE_VERIFIER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hecurve/counting.hpp"
#include "hecurve/curve.hpp"

namespace hecurve {

/// Frobenius traces over the full quotient tower: one CountRecord per
/// (T, k) with type n-|T| >= 2 and 1 <= k <= kmax.
struct TraceTable {
  CurveMatrix base;
  int64_t p = 0;
  int kmax = 0;
  std::map<std::pair<SubsetMask, int>, CountRecord> entries;

  int n() const { return base.n; }
  int64_t trace_at(SubsetMask t, int k) const { return entries.at({t, k}).trace; }
};

/// Solved traces of the new parts JX_T^-, keyed by T (odd type >= 3).
using NewTraceMap = std::map<SubsetMask, int64_t>;

struct Residual {
  SubsetMask subset = 0;  // even type >= 4
  int k = 0;
  int64_t value = 0;
};

struct WeilViolation {
  SubsetMask subset = 0;
  int k = 0;
  int64_t value = 0;  // solved new trace violating t^2 <= 4 m^2 q^k
};

struct VerificationReport {
  CurveMatrix curve;
  int64_t p = 0;
  int kmax = 0;
  std::map<std::pair<SubsetMask, int>, CountRecord> counts;
  std::map<std::pair<SubsetMask, int>, int64_t> new_traces;
  std::vector<Residual> residuals;  // every check equation, with its value
  std::vector<WeilViolation> weil_violations;
  std::vector<int64_t> fixed_locus_counts;  // per involution 0..n
  bool fixed_locus_ok = false;
  bool pass = false;
};

/// Counts every quotient of type >= 3 by the selected method; type-2
/// entries are filled with the conic law N = q^k + 1 (a = 0), with a
/// seeded 10% sample counted anyway as a spot check.
TraceTable build_trace_table(const CurveMatrix& a, int64_t p, int kmax,
                             CountMethod method = CountMethod::auto_select,
                             CountCache* cache = nullptr, const CountBudget& budget = {},
                             int threads = 1, uint64_t seed = 0);

/// Downward recursion on the subset lattice at level k: type-3 subsets
/// read their trace directly, odd types >= 5 subtract the already-solved
/// strictly larger subsets.
NewTraceMap solve_new_traces(const TraceTable& table, int k);

/// TraceTable invariant: every type-2 entry has trace 0 (a smooth conic
/// has q+1 points over every field).
bool table_invariants_ok(const TraceTable& table);

/// One exact integer equation per even-type (>= 4) subset:
/// a_k(X_T) - sum over strictly larger odd-type subsets of t_k(T').
std::vector<Residual> check_consistency(const TraceTable& table, const NewTraceMap& nt, int k);

VerificationReport full_verify(const CurveMatrix& a, int64_t p, int kmax,
                               CountMethod method = CountMethod::auto_select,
                               CountCache* cache = nullptr, const CountBudget& budget = {},
                               int threads = 1, uint64_t seed = 0);

std::string verification_to_text(const VerificationReport& r);

}  // namespace hecurve

#endif
