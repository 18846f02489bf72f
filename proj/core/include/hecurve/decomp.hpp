#ifndef HECURVE_DECOMP_HPP
#define HECURVE_DECOMP_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hecurve/curve.hpp"

namespace hecurve {

/// One isogeny factor pi_T^* JX_T^- of the decomposition.
struct FactorRecord {
  SubsetMask subset = 0;   // T
  int quotient_type = 0;   // n - |T|
  int prym_dim = 0;        // m; 0 iff quotient_type even
  mpz_class pt_exponent;   // 2^{n-3}
  std::vector<mpz_class> polarization_type;  // (2^{n-3}, ..., 2^{n-3}), length m
};

struct DecompositionReport {
  int n = 0;
  std::vector<FactorRecord> factors;  // sorted by (|T|, bits); empty beyond factor_limit
  std::map<int, mpz_class> counts_by_dim;  // m -> C(n+1, 2m+2)
  mpz_class total_dim;
  mpz_class genus;
  mpz_class pt_exponent;
  mpz_class kernel_order;      // (2^{n-3})^genus
  mpz_class kernel_exponent;   // kernel_order = 2^kernel_exponent
  bool isogeny_degree_check = false;
};

/// Rational character of E_n, given by its support on the generators.
/// Supports must have even weight (the product of all sigma_i is 1).
struct Character {
  SubsetMask support = 0;
};

struct CharacterFactor {
  SubsetMask support = 0;
  int dim = 0;
};

/// dim JX_T^- for |T| = t: zero when n-t is even, (n-t-1)/2 when odd.
int prym_dimension(int n, int t);

/// Full predicted decomposition for type n. Factors are materialized only
/// when n <= factor_limit (the count grows as ~2^n); the exact counts,
/// genus and kernel data are always computed.
DecompositionReport decompose(int n, int factor_limit = 24);

/// |ker phi| = (2^{n-3})^{g_n}.
mpz_class kernel_order(int n);

/// Prym-Tyurin exponent 2^{n-3} and the induced polarization type
/// (2^{n-3}, ..., 2^{n-3}) of an m-dimensional factor.
mpz_class pt_exponent(int n);
std::vector<mpz_class> pt_polarization_type(int n, int m);

/// dim B_chi for the character with support U: |U|/2 - 1 for U nonempty,
/// 0 for the trivial character. Throws on odd |U|.
int character_dimension(int n, Character u);

/// All 2^n even-weight supports with their dimensions.
std::vector<CharacterFactor> character_decompose(int n);

struct IdentityResult {
  int n;
  bool genus_sum_ok;      // sum_m m C(n+1, 2m+2) = 2^{n-2}(n-3)+1
  bool etale_ok;          // odd n: 2^{n-2}(n-3) = 2^{n-1}((n-1)/2 - 1); vacuous for even n
  bool kernel_ok;         // kernel_order = exponent^{total dim}
  bool all_ok() const { return genus_sum_ok && etale_ok && kernel_ok; }
};

/// Exact bignum identity checks for 3 <= n <= max_n.
std::vector<IdentityResult> identity_suite(int max_n);

/// Diff-stable structured serialization of a report.
std::string report_to_text(const DecompositionReport& r);

}  // namespace hecurve

#endif
