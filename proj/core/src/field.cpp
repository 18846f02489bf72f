#include "hecurve/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hecurve {

bool is_prime(int64_t m) {
  if (m < 2) return false;
  for (int64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

namespace {

int64_t mulmod(int64_t a, int64_t b, int64_t p) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b) %
                              static_cast<uint64_t>(p));
}

// Dense polynomials over F_p, low-to-high coefficients, no trailing zeros.
using Poly = std::vector<int64_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Reduce g modulo the monic polynomial x^k + mod (mod holds the k lower coeffs).
void reduce_mod(Poly& g, const std::vector<int64_t>& mod, int k, int64_t p) {
  for (int d = static_cast<int>(g.size()) - 1; d >= k; --d) {
    int64_t t = g[d];
    if (t == 0) continue;
    g[d] = 0;
    for (int i = 0; i < k; ++i) {
      int64_t v = g[d - k + i] - mulmod(t, mod[i], p);
      g[d - k + i] = (v % p + p) % p;
    }
  }
  g.resize(k);
}

Poly polymul_mod(const Poly& a, const Poly& b, const std::vector<int64_t>& mod, int k, int64_t p) {
  Poly out(2 * k - 1, 0);
  for (int i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < k; ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  reduce_mod(out, mod, k, p);
  return out;
}

// x^e modulo (x^k + mod) over F_p.
Poly x_powmod(uint64_t e, const std::vector<int64_t>& mod, int k, int64_t p) {
  Poly result(k, 0);
  result[0] = 1;
  Poly base(k, 0);
  if (k == 1) {
    // x == -mod[0] in F_p[x]/(x + mod[0])
    base[0] = ((-mod[0]) % p + p) % p;
  } else {
    base[1] = 1;
  }
  while (e > 0) {
    if (e & 1) result = polymul_mod(result, base, mod, k, p);
    base = polymul_mod(base, base, mod, k, p);
    e >>= 1;
  }
  return result;
}

// Monic gcd of two polynomials over F_p.
Poly polygcd(Poly a, Poly b, int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    int64_t lead = b.back();
    // lead^{-1} via Fermat
    int64_t inv = 1, base = lead, e = p - 2;
    while (e > 0) {
      if (e & 1) inv = mulmod(inv, base, p);
      base = mulmod(base, base, p);
      e >>= 1;
    }
    while (a.size() >= b.size()) {
      int64_t c = mulmod(a.back(), inv, p);
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) {
        int64_t v = a[shift + i] - mulmod(c, b[i], p);
        a[shift + i] = (v % p + p) % p;
      }
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  if (!a.empty() && a.back() != 1) {
    int64_t lead = a.back();
    int64_t inv = 1, base = lead, e = p - 2;
    while (e > 0) {
      if (e & 1) inv = mulmod(inv, base, p);
      base = mulmod(base, base, p);
      e >>= 1;
    }
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

std::vector<int64_t> prime_factors(int k) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= k; ++d) {
    if (k % d == 0) {
      out.push_back(d);
      while (k % d == 0) k /= static_cast<int>(d);
    }
  }
  if (k > 1) out.push_back(k);
  return out;
}

uint64_t checked_pow(int64_t p, int k) {
  uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    if (q > UINT64_MAX / static_cast<uint64_t>(p))
      throw std::overflow_error("ExtField: p^k exceeds 64 bits");
    q *= static_cast<uint64_t>(p);
  }
  return q;
}

// Irreducibility certificate: x^{p^k} == x mod f, and for every prime l | k,
// gcd(x^{p^{k/l}} - x, f) = 1.
bool is_irreducible(const std::vector<int64_t>& mod, int k, int64_t p) {
  uint64_t q = checked_pow(p, k);
  Poly xq = x_powmod(q, mod, k, p);
  Poly x(k, 0);
  if (k == 1)
    x[0] = ((-mod[0]) % p + p) % p;
  else
    x[1] = 1;
  if (xq != x) return false;
  for (int64_t l : prime_factors(k)) {
    uint64_t e = checked_pow(p, static_cast<int>(k / l));
    Poly h = x_powmod(e, mod, k, p);
    // h - x
    for (int i = 0; i < k; ++i) h[i] = ((h[i] - x[i]) % p + p) % p;
    Poly f(mod);
    f.push_back(1);
    Poly g = polygcd(std::move(h), std::move(f), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

ExtField::ExtField(int64_t p, int k, std::vector<int64_t> mod)
    : p_(p), k_(k), q_(checked_pow(p, k)), mod_(std::move(mod)) {}

ExtField ExtField::make(PrimeField base, int k, uint64_t seed) {
  if (k < 1) throw std::invalid_argument("ExtField: degree must be >= 1");
  int64_t p = base.p;
  if (k == 1) return ExtField(p, 1, {0});  // modulus x

  int64_t cap = 4 * k * static_cast<int64_t>(std::log2(static_cast<double>(p))) + 64;
  int64_t attempts = 0;

  // Binomials x^k + a first.
  for (int64_t a = 1; a < p && attempts < cap; ++a, ++attempts) {
    std::vector<int64_t> mod(k, 0);
    mod[0] = a;
    if (is_irreducible(mod, k, p)) return ExtField(p, k, std::move(mod));
  }

  std::mt19937_64 rng(seed ^ (static_cast<uint64_t>(p) << 16) ^ static_cast<uint64_t>(k));
  std::uniform_int_distribution<int64_t> dist(0, p - 1);
  for (; attempts < cap; ++attempts) {
    std::vector<int64_t> mod(k);
    for (auto& c : mod) c = dist(rng);
    if (is_irreducible(mod, k, p)) return ExtField(p, k, std::move(mod));
  }
  throw std::runtime_error("ExtField: irreducible search exhausted for p=" + std::to_string(p) +
                           " k=" + std::to_string(k) + " after " + std::to_string(cap) +
                           " attempts");
}

void ExtField::check_elem(const Elem& a) const {
  if (static_cast<int>(a.coeffs.size()) != k_)
    throw std::invalid_argument("Elem: wrong coefficient count for this field");
}

bool ExtField::is_zero(const Elem& a) const {
  check_elem(a);
  return std::all_of(a.coeffs.begin(), a.coeffs.end(), [](int64_t c) { return c == 0; });
}

Elem ExtField::add(const Elem& a, const Elem& b) const {
  check_elem(a);
  check_elem(b);
  Elem r = a;
  for (int i = 0; i < k_; ++i) r.coeffs[i] = (r.coeffs[i] + b.coeffs[i]) % p_;
  return r;
}

Elem ExtField::sub(const Elem& a, const Elem& b) const {
  check_elem(a);
  check_elem(b);
  Elem r = a;
  for (int i = 0; i < k_; ++i) r.coeffs[i] = ((r.coeffs[i] - b.coeffs[i]) % p_ + p_) % p_;
  return r;
}

Elem ExtField::neg(const Elem& a) const { return sub(zero(), a); }

Elem ExtField::mul(const Elem& a, const Elem& b) const {
  check_elem(a);
  check_elem(b);
  return Elem{polymul_mod(a.coeffs, b.coeffs, mod_, k_, p_)};
}

Elem ExtField::pow(const Elem& a, uint64_t e) const {
  check_elem(a);
  Elem result = one();
  Elem base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Elem ExtField::inv(const Elem& a) const {
  if (is_zero(a)) throw std::domain_error("ExtField::inv: zero has no inverse");
  return pow(a, q_ - 2);
}

Elem ExtField::embed_base(int64_t residue) const {
  Elem r = zero();
  r.coeffs[0] = (residue % p_ + p_) % p_;
  return r;
}

int ExtField::chi(const Elem& a) const {
  if (is_zero(a)) return 0;
  Elem v = pow(a, (q_ - 1) / 2);
  if (v == one()) return 1;
  if (v == neg(one())) return -1;
  throw std::logic_error("ExtField::chi: a^((q-1)/2) is not +-1; field is corrupt");
}

Elem ExtField::element_at(uint64_t index) const {
  if (index >= q_) throw std::out_of_range("ExtField::element_at: index >= q");
  Elem r = zero();
  for (int i = k_ - 1; i >= 0; --i) {
    r.coeffs[i] = static_cast<int64_t>(index % static_cast<uint64_t>(p_));
    index /= static_cast<uint64_t>(p_);
  }
  return r;
}

uint64_t ExtField::index_of(const Elem& a) const {
  check_elem(a);
  uint64_t idx = 0;
  for (int i = 0; i < k_; ++i) idx = idx * static_cast<uint64_t>(p_) + static_cast<uint64_t>(a.coeffs[i]);
  return idx;
}

}  // namespace hecurve
