#include "hecurve/decomp.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace hecurve {

namespace {

mpz_class binom(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<int> mask_to_indices(SubsetMask m) {
  std::vector<int> out;
  for (int i = 0; m >> i; ++i)
    if (m & (SubsetMask{1} << i)) out.push_back(i);
  return out;
}

// kernel_order = 2^e with e = (n-3) * g_n; materializing it is only sane
// for moderate exponents.
constexpr unsigned long kMaxMaterializedBits = 1u << 20;

}  // namespace

int prym_dimension(int n, int t) {
  int nu = n - t;
  if (nu < 2) throw std::invalid_argument("prym_dimension: n - t must be >= 2");
  return nu % 2 == 0 ? 0 : (nu - 1) / 2;
}

mpz_class pt_exponent(int n) {
  if (n < 3) throw std::invalid_argument("pt_exponent: n must be >= 3");
  return mpz_class(1) << (n - 3);
}

std::vector<mpz_class> pt_polarization_type(int n, int m) {
  return std::vector<mpz_class>(m, pt_exponent(n));
}

mpz_class kernel_order(int n) {
  if (n < 3) throw std::invalid_argument("kernel_order: n must be >= 3");
  mpz_class e = mpz_class(n - 3) * genus_of_type(n);
  if (e > kMaxMaterializedBits)
    throw std::overflow_error("kernel_order: 2^" + e.get_str() +
                              " is too large to materialize; use the exponent form");
  return mpz_class(1) << e.get_ui();
}

DecompositionReport decompose(int n, int factor_limit) {
  if (n < 3) throw std::invalid_argument("decompose: n must be >= 3");

  DecompositionReport rep;
  rep.n = n;
  rep.genus = genus_of_type(n);
  rep.pt_exponent = pt_exponent(n);
  rep.total_dim = 0;
  for (int m = 1; 2 * m + 1 <= n; ++m) {
    mpz_class count = binom(n + 1, 2 * m + 2);
    if (count == 0) continue;
    rep.counts_by_dim[m] = count;
    rep.total_dim += count * m;
  }
  rep.kernel_exponent = mpz_class(n - 3) * rep.genus;
  if (rep.kernel_exponent <= kMaxMaterializedBits)
    rep.kernel_order = mpz_class(1) << rep.kernel_exponent.get_ui();
  // Lemma-4.8 shape in exponent form: (2^{n-3})^{total_dim} = 2^{(n-3) total_dim}.
  rep.isogeny_degree_check =
      (rep.total_dim == rep.genus) &&
      (rep.kernel_exponent == mpz_class(n - 3) * rep.total_dim);
  if (rep.total_dim != rep.genus)
    throw std::logic_error("decompose: dimension sum does not match the genus at n=" +
                           std::to_string(n));

  if (n <= factor_limit) {
    const SubsetMask top = SubsetMask{1} << (n + 1);
    for (SubsetMask t = 0; t < top; ++t) {
      if (popcount(t) > n - 3) continue;
      if (prym_dimension(n, popcount(t)) == 0) continue;  // even type contributes nothing
      FactorRecord f;
      f.subset = t;
      f.quotient_type = n - popcount(t);
      f.prym_dim = prym_dimension(n, popcount(t));
      f.pt_exponent = rep.pt_exponent;
      f.polarization_type = pt_polarization_type(n, f.prym_dim);
      rep.factors.push_back(std::move(f));
    }
    std::sort(rep.factors.begin(), rep.factors.end(),
              [](const FactorRecord& a, const FactorRecord& b) {
                int pa = popcount(a.subset), pb = popcount(b.subset);
                return pa != pb ? pa < pb : a.subset < b.subset;
              });
    // Cross-check the closed-form counts against the enumeration.
    std::map<int, mpz_class> seen;
    for (const auto& f : rep.factors)
      if (f.prym_dim > 0) seen[f.prym_dim] += 1;
    if (seen != rep.counts_by_dim)
      throw std::logic_error("decompose: enumerated multiplicities disagree with C(n+1, 2m+2)");
  }
  return rep;
}

int character_dimension(int n, Character u) {
  if (u.support >> (n + 1))
    throw std::invalid_argument("character_dimension: support has bits beyond sigma_n");
  int w = popcount(u.support);
  if (w % 2 != 0)
    throw std::invalid_argument("character_dimension: support weight must be even");
  return w == 0 ? 0 : w / 2 - 1;
}

std::vector<CharacterFactor> character_decompose(int n) {
  if (n < 2) throw std::invalid_argument("character_decompose: n must be >= 2");
  std::vector<CharacterFactor> out;
  const SubsetMask top = SubsetMask{1} << (n + 1);
  for (SubsetMask u = 0; u < top; ++u) {
    if (popcount(u) % 2 != 0) continue;
    out.push_back(CharacterFactor{u, character_dimension(n, Character{u})});
  }
  return out;
}

std::vector<IdentityResult> identity_suite(int max_n) {
  if (max_n < 3) throw std::invalid_argument("identity_suite: max_n must be >= 3");
  std::vector<IdentityResult> out;
  for (int n = 3; n <= max_n; ++n) {
    IdentityResult r{n, false, true, false};
    mpz_class genus = genus_of_type(n);
    mpz_class dim_sum = 0;
    for (int m = 1; 2 * m + 1 <= n; ++m) dim_sum += binom(n + 1, 2 * m + 2) * m;
    r.genus_sum_ok = (dim_sum == genus);
    if (n % 2 == 1) {
      // genus - 1 = |H_n| (dim JX_n^- - 1): the quotient by H_n is unramified
      mpz_class lhs = (mpz_class(1) << (n - 2)) * (n - 3);
      mpz_class rhs = (mpz_class(1) << (n - 1)) * ((n - 1) / 2 - 1);
      r.etale_ok = (lhs == rhs);
    }
    // Exponent form of |ker phi| = e^{dim}: (n-3) g_n = (n-3) dim_sum.
    r.kernel_ok = (mpz_class(n - 3) * genus == mpz_class(n - 3) * dim_sum);
    out.push_back(r);
  }
  return out;
}

std::string report_to_text(const DecompositionReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["genus"] = r.genus.get_str();
  j["total_dim"] = r.total_dim.get_str();
  j["pt_exponent"] = r.pt_exponent.get_str();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [m, c] : r.counts_by_dim) counts[std::to_string(m)] = c.get_str();
  j["counts_by_dim"] = counts;
  j["kernel_order"] = r.kernel_order.get_str();
  j["kernel_order_pow2"] = "2^" + r.kernel_exponent.get_str();
  j["isogeny_degree_check"] = r.isogeny_degree_check;
  nlohmann::ordered_json factors = nlohmann::ordered_json::array();
  for (const auto& f : r.factors) {
    nlohmann::ordered_json jf;
    jf["T"] = mask_to_indices(f.subset);
    jf["quotient_type"] = f.quotient_type;
    jf["dim"] = f.prym_dim;
    factors.push_back(std::move(jf));
  }
  j["factors"] = factors;
  return j.dump(2);
}

}  // namespace hecurve
