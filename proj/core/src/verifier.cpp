#include "hecurve/verifier.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "hecurve/decomp.hpp"

namespace hecurve {

namespace {

uint64_t upow(uint64_t b, int e) {
  uint64_t v = 1;
  while (e-- > 0) v *= b;
  return v;
}

std::vector<int> mask_to_indices(SubsetMask m) {
  std::vector<int> out;
  for (int i = 0; m >> i; ++i)
    if (m & (SubsetMask{1} << i)) out.push_back(i);
  return out;
}

// Strict supersets T' of t within n+1 bits with odd type >= 3, i.e.
// |T'| <= n-3 and n-|T'| odd.
template <class Fn>
void for_each_odd_superset(int n, SubsetMask t, Fn&& fn) {
  const SubsetMask all = (SubsetMask{1} << (n + 1)) - 1;
  const SubsetMask free_bits = all & ~t;
  // iterate nonempty sub-masks of free_bits
  for (SubsetMask s = free_bits; s != 0; s = (s - 1) & free_bits) {
    SubsetMask sup = t | s;
    int size = popcount(sup);
    int type = n - size;
    if (type >= 3 && type % 2 == 1) fn(sup);
  }
}

}  // namespace

TraceTable build_trace_table(const CurveMatrix& a, int64_t p, int kmax, CountMethod method,
                             CountCache* cache, const CountBudget& budget, int threads,
                             uint64_t seed) {
  if (a.p != p) throw std::invalid_argument("build_trace_table: curve is not defined over F_p");
  if (kmax < 1) throw std::invalid_argument("build_trace_table: kmax must be >= 1");
  Validation v = validate_curve(a);
  if (!v.ok) throw std::invalid_argument("build_trace_table: invalid curve: " + v.message);

  TraceTable table;
  table.base = canonicalize(a);
  table.p = p;
  table.kmax = kmax;

  const int n = a.n;
  const uint64_t h = curve_hash(table.base);
  std::mt19937_64 spot_rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const SubsetMask top = SubsetMask{1} << (n + 1);
  for (SubsetMask t = 0; t < top; ++t) {
    int type = n - popcount(t);
    if (type < 2) continue;
    for (int k = 1; k <= kmax; ++k) {
      CountRecord rec;
      if (type == 2) {
        uint64_t q = upow(static_cast<uint64_t>(p), k);
        rec.curve_hash = h;
        rec.subset = t;
        rec.p = p;
        rec.k = k;
        rec.n_points = static_cast<int64_t>(q) + 1;
        rec.trace = 0;
        rec.weil_ok = true;
        if (unit(spot_rng) < 0.1) {
          CountRecord counted =
              trace(table.base, t, p, k, CountMethod::auto_select, cache, budget, threads, seed);
          if (counted.n_points != rec.n_points)
            throw std::logic_error("build_trace_table: conic spot check failed, a type-2 "
                                   "quotient has N != q+1");
        }
      } else {
        rec = trace(table.base, t, p, k, method, cache, budget, threads, seed);
      }
      table.entries.emplace(std::make_pair(t, k), std::move(rec));
    }
  }
  return table;
}

bool table_invariants_ok(const TraceTable& table) {
  const int n = table.n();
  for (const auto& [key, rec] : table.entries)
    if (n - popcount(key.first) == 2 && rec.trace != 0) return false;
  return true;
}

NewTraceMap solve_new_traces(const TraceTable& table, int k) {
  const int n = table.n();
  NewTraceMap nt;
  // descending |T|: larger subsets are solved before their subsets need them
  for (int size = n - 3; size >= 0; --size) {
    int type = n - size;
    if (type % 2 == 0) continue;
    const SubsetMask top = SubsetMask{1} << (n + 1);
    for (SubsetMask t = 0; t < top; ++t) {
      if (popcount(t) != size) continue;
      int64_t value = table.trace_at(t, k);
      for_each_odd_superset(n, t, [&](SubsetMask sup) { value -= nt.at(sup); });
      nt.emplace(t, value);
    }
  }
  return nt;
}

std::vector<Residual> check_consistency(const TraceTable& table, const NewTraceMap& nt, int k) {
  const int n = table.n();
  std::vector<Residual> out;
  const SubsetMask top = SubsetMask{1} << (n + 1);
  for (SubsetMask t = 0; t < top; ++t) {
    int type = n - popcount(t);
    if (type < 4 || type % 2 != 0) continue;
    int64_t value = table.trace_at(t, k);
    for_each_odd_superset(n, t, [&](SubsetMask sup) { value -= nt.at(sup); });
    out.push_back(Residual{t, k, value});
  }
  return out;
}

VerificationReport full_verify(const CurveMatrix& a, int64_t p, int kmax, CountMethod method,
                               CountCache* cache, const CountBudget& budget, int threads,
                               uint64_t seed) {
  TraceTable table = build_trace_table(a, p, kmax, method, cache, budget, threads, seed);
  const int n = table.n();

  VerificationReport rep;
  rep.curve = table.base;
  rep.p = p;
  rep.kmax = kmax;
  rep.counts = table.entries;

  for (int k = 1; k <= kmax; ++k) {
    NewTraceMap nt = solve_new_traces(table, k);
    const uint64_t qk = upow(static_cast<uint64_t>(p), k);
    for (const auto& [t, val] : nt) {
      rep.new_traces[{t, k}] = val;
      int m = prym_dimension(n, popcount(t));
      mpz_class bound = 4 * mpz_class(m) * m * mpz_class(qk);
      if (mpz_class(val) * val > bound) rep.weil_violations.push_back(WeilViolation{t, k, val});
    }
    for (const auto& r : check_consistency(table, nt, k)) rep.residuals.push_back(r);
    // direct counts must satisfy the curve-level Weil bound too
    for (const auto& [key, rec] : table.entries)
      if (key.second == k && !rec.weil_ok)
        rep.weil_violations.push_back(WeilViolation{key.first, k, rec.trace});
  }

  rep.fixed_locus_ok = true;
  mpz_class expected = fixed_point_degree(n);
  for (int i = 0; i <= n; ++i) {
    int64_t c = fixed_locus_count(table.base, i, seed);
    rep.fixed_locus_counts.push_back(c);
    if (expected != c) rep.fixed_locus_ok = false;
  }

  bool residuals_zero =
      std::all_of(rep.residuals.begin(), rep.residuals.end(), [](const Residual& r) {
        return r.value == 0;
      });
  rep.pass = residuals_zero && rep.weil_violations.empty() && rep.fixed_locus_ok &&
             table_invariants_ok(table);
  return rep;
}

std::string verification_to_text(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["curve"] = nlohmann::ordered_json::parse(curve_to_text(r.curve));
  j["p"] = r.p;
  j["kmax"] = r.kmax;

  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (const auto& [key, rec] : r.counts) {
    nlohmann::ordered_json c;
    c["T"] = mask_to_indices(key.first);
    c["k"] = key.second;
    c["N"] = rec.n_points;
    c["a"] = rec.trace;
    counts.push_back(std::move(c));
  }
  j["counts"] = counts;

  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  for (const auto& [key, val] : r.new_traces) {
    nlohmann::ordered_json t;
    t["T"] = mask_to_indices(key.first);
    t["k"] = key.second;
    t["t"] = val;
    traces.push_back(std::move(t));
  }
  j["new_traces"] = traces;

  nlohmann::ordered_json residuals = nlohmann::ordered_json::array();
  for (const auto& res : r.residuals) {
    nlohmann::ordered_json e;
    e["T"] = mask_to_indices(res.subset);
    e["k"] = res.k;
    e["residual"] = res.value;
    residuals.push_back(std::move(e));
  }
  j["residuals"] = residuals;

  nlohmann::ordered_json weil = nlohmann::ordered_json::array();
  for (const auto& w : r.weil_violations) {
    nlohmann::ordered_json e;
    e["T"] = mask_to_indices(w.subset);
    e["k"] = w.k;
    e["t"] = w.value;
    weil.push_back(std::move(e));
  }
  j["weil_violations"] = weil;
  j["fixed_locus_counts"] = r.fixed_locus_counts;
  j["verdict"] = r.pass ? "pass" : "fail";
  return j.dump(2);
}

}  // namespace hecurve
