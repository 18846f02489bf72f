#ifndef HECURVE_COUNTING_HPP
#define HECURVE_COUNTING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include <gmpxx.h>

#include "hecurve/curve.hpp"
#include "hecurve/field.hpp"

namespace hecurve {

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CountBudget {
  uint64_t max_tuples = 1'000'000'000;  // naive enumeration, q^{nu+1}
  uint64_t max_lines = 1'000'000'000;   // character-sum line iteration, q^{nu-1}
  uint64_t naive_cutoff = 10'000'000;   // auto: naive when q^{nu+1} <= cutoff
};

enum class CountMethod { naive, charsum, auto_select };

/// a + b*G with G the quadratic Gauss sum, reduced via G^2 = chi(-1) q.
/// Combines componentwise; combination order never changes the result.
struct GaussAccumulator {
  mpz_class a = 0;
  mpz_class b = 0;
  void combine(const GaussAccumulator& o) {
    a += o.a;
    b += o.b;
  }
};

struct CountRecord {
  uint64_t curve_hash = 0;
  SubsetMask subset = 0;
  int64_t p = 0;
  int k = 0;
  int64_t n_points = 0;  // #X_T(F_{p^k})
  int64_t trace = 0;     // p^k + 1 - N
  bool weil_ok = false;  // trace^2 <= 4 g^2 q^k
};

/// Append-only count cache keyed by (curve hash, T, p, k). An empty path
/// keeps the cache purely in memory.
class CountCache {
 public:
  CountCache() = default;
  explicit CountCache(std::string path);

  std::optional<int64_t> lookup(uint64_t hash, SubsetMask t, int64_t p, int k) const;
  void insert(uint64_t hash, SubsetMask t, int64_t p, int k, int64_t n_points);

  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }
  size_t size() const { return map_.size(); }

 private:
  std::string path_;
  std::unordered_map<std::string, int64_t> map_;
  mutable uint64_t hits_ = 0, misses_ = 0;
};

/// Projective points of the diagonal complete intersection by direct
/// enumeration of P^nu(F): first-nonzero-coordinate-1 representatives.
int64_t count_naive(const CurveMatrix& a, const ExtField& f,
                    const CountBudget& budget = {}, int threads = 1);

/// Same count through the exact character-sum engine. All arithmetic is
/// exact integer arithmetic in Z[G]/(G^2 - chi(-1) q); both final
/// divisions must be exact or the input is defective.
int64_t count_charsum(const CurveMatrix& a, const ExtField& f,
                      const CountBudget& budget = {}, int threads = 1);

/// Count on the quotient X_T over F_{p^k} and extract the Frobenius trace.
/// The quotient must have type >= 2. Uses and updates the cache when given.
CountRecord trace(const CurveMatrix& a, SubsetMask t, int64_t p, int k,
                  CountMethod method = CountMethod::auto_select,
                  CountCache* cache = nullptr, const CountBudget& budget = {},
                  int threads = 1, uint64_t field_seed = 0);

/// Projective solutions of an arbitrary diagonal system rows * x^2 = 0
/// in P^{ncoords-1}(F) by direct enumeration.
int64_t count_projective_system(const std::vector<std::vector<int64_t>>& rows, int ncoords,
                                const ExtField& f, const CountBudget& budget = {},
                                int threads = 1);

/// Points of X_n on the hyperplane x_i = 0 over F_{p^2}: the fixed locus
/// of sigma_i. The section is zero-dimensional, so the count is taken
/// from the one-dimensional kernel of the reduced system: the number of
/// square roots in F_{p^2} of each coordinate ratio. Expected value is
/// 2^{n-1}.
int64_t fixed_locus_count(const CurveMatrix& a, int involution, uint64_t field_seed = 0);

}  // namespace hecurve

#endif
