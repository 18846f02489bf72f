#ifndef HECURVE_CURVE_HPP
#define HECURVE_CURVE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hecurve/field.hpp"

namespace hecurve {

/// Subset of the n+1 involutions {sigma_0, ..., sigma_n} as a bitmask.
using SubsetMask = std::uint32_t;

int popcount(SubsetMask m);

/// Coefficient matrix of n-1 diagonal quadrics in P^n over F_p.
/// Row j holds the coefficients of sum_i a_{ji} x_i^2 = 0.
struct CurveMatrix {
  int n = 0;
  int64_t p = 0;
  std::vector<std::vector<int64_t>> rows;  // (n-1) x (n+1), residues mod p
};

struct Validation {
  bool ok = false;
  std::vector<int> bad_columns;  // column set of a vanishing maximal minor
  std::string message;
};

/// Smoothness certificate: every (n-1) x (n-1) minor nonzero mod p.
/// On rejection names one vanishing minor's column set.
Validation validate_curve(const CurveMatrix& a);

/// Reduced row echelon form with pivots on the lowest-index columns,
/// leading entries 1. Quotient functoriality is literal matrix equality
/// in this form.
CurveMatrix canonicalize(const CurveMatrix& a);

/// Result of quotienting by <T>. Type >= 2 carries an equational model;
/// type 1 is a rational curve marker with no equations.
struct QuotientCurve {
  int type = 0;
  std::optional<CurveMatrix> matrix;  // present iff type >= 2
};

/// X_T = X_n / <T>, a curve of type n - |T|. Eliminates the squared
/// variables x_i^2 for i in T by Gaussian elimination, pivoting on the
/// surviving row of smallest index with a nonzero column-i entry.
/// Requires |T| <= n-1.
QuotientCurve quotient(const CurveMatrix& a, SubsetMask t);

/// Genus of a type-nu curve: 2^{nu-2} (nu-3) + 1. Requires nu >= 2.
mpz_class genus_of_type(int nu);

/// Signature of the E_nu action: quotient genus 0 with nu+1 branch
/// points of order 2.
struct CurveSignature {
  int quotient_genus;
  int branch_count;
  int branch_order;
};
CurveSignature signature_of_type(int nu);

/// Number of geometric fixed points of each involution on a type-nu
/// curve: 2^{nu-1}. Requires nu >= 3.
mpz_class fixed_point_degree(int nu);

/// Element of E_n: an (n+1)-bit mask modulo the all-ones relation
/// sigma_0 ... sigma_n = 1. Canonical representative has bit n clear.
SubsetMask canonical_group_element(int n, SubsetMask mask);

/// Subgroup H_n generated by the double products sigma_i sigma_j:
/// order 2^{n-1} for odd n (index 2), all of E_n (order 2^n) for even n.
mpz_class h_subgroup_order(int n);
bool h_subgroup_contains(int n, SubsetMask mask);

/// Seeded rejection sampling over [all-ones row; random rows], with a
/// Vandermonde-style fallback. Deterministic in (n, p, seed); the result
/// always passes validate_curve.
CurveMatrix random_smooth_curve(int n, int64_t p, uint64_t seed);

/// Canonical curve file serialization: keys n, p, rows in that order,
/// rows in canonical form, base-10 integers.
std::string curve_to_text(const CurveMatrix& a);
CurveMatrix curve_from_text(const std::string& text);

/// FNV-1a over the canonical serialization.
uint64_t curve_hash(const CurveMatrix& a);

}  // namespace hecurve

#endif
