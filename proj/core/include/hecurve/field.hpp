#ifndef HECURVE_FIELD_HPP
#define HECURVE_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecurve {

using std::int64_t;
using std::uint64_t;

bool is_prime(int64_t m);

/// Odd prime base field F_p, 3 <= p < 2^31.
struct PrimeField {
  int64_t p;

  explicit PrimeField(int64_t p_) : p(p_) {
    if (p < 3 || p >= (int64_t{1} << 31) || p % 2 == 0 || !is_prime(p))
      throw std::invalid_argument("PrimeField: modulus must be an odd prime in [3, 2^31), got " +
                                  std::to_string(p_));
  }
};

/// Element of F_{p^k} in polynomial representation: coeffs[i] is the
/// coefficient of x^i, all residues in [0, p). Always length k.
struct Elem {
  std::vector<int64_t> coeffs;

  bool operator==(const Elem&) const = default;
};

/// F_{p^k} = F_p[x]/(f) for a monic irreducible f of degree k.
/// Immutable after construction; all operations are pure.
class ExtField {
 public:
  /// Deterministic in (p, k, seed): tries x^k + a for small a, then
  /// seeded random monic polynomials, certifying irreducibility each time.
  static ExtField make(PrimeField base, int k, uint64_t seed);

  int64_t p() const { return p_; }
  int k() const { return k_; }
  uint64_t q() const { return q_; }

  /// Non-leading coefficients of the modulus, low to high (length k).
  const std::vector<int64_t>& modulus() const { return mod_; }

  Elem zero() const { return Elem{std::vector<int64_t>(k_, 0)}; }
  Elem one() const { return embed_base(1); }
  bool is_zero(const Elem& a) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, uint64_t e) const;
  /// Throws std::domain_error on zero input.
  Elem inv(const Elem& a) const;

  /// The unique ring embedding F_p -> F_{p^k} (constant polynomials).
  Elem embed_base(int64_t residue) const;

  /// Quadratic character: 0 for zero, +1 for nonzero squares, -1 otherwise.
  int chi(const Elem& a) const;

  /// Lexicographic enumeration order over coefficient vectors
  /// (coeffs[0] most significant); index 0 is the zero element.
  Elem element_at(uint64_t index) const;
  uint64_t index_of(const Elem& a) const;

 private:
  ExtField(int64_t p, int k, std::vector<int64_t> mod);
  void check_elem(const Elem& a) const;

  int64_t p_;
  int k_;
  uint64_t q_;
  std::vector<int64_t> mod_;
};

}  // namespace hecurve

#endif
