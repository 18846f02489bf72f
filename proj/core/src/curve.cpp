#include "hecurve/curve.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include <json.hpp>

namespace hecurve {

int popcount(SubsetMask m) { return std::popcount(m); }

namespace {

int64_t mulmod(int64_t a, int64_t b, int64_t p) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b) %
                              static_cast<uint64_t>(p));
}

int64_t modinv(int64_t a, int64_t p) {
  int64_t r = 1, base = ((a % p) + p) % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    e >>= 1;
  }
  return r;
}

int64_t det_mod(std::vector<std::vector<int64_t>> m, int64_t p) {
  const int d = static_cast<int>(m.size());
  int64_t det = 1;
  for (int col = 0; col < d; ++col) {
    int pivot = -1;
    for (int r = col; r < d; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = p - det;
    }
    det = mulmod(det, m[col][col], p);
    int64_t inv = modinv(m[col][col], p);
    for (int r = col + 1; r < d; ++r) {
      if (m[r][col] == 0) continue;
      int64_t f = mulmod(m[r][col], inv, p);
      for (int c = col; c < d; ++c) m[r][c] = ((m[r][c] - mulmod(f, m[col][c], p)) % p + p) % p;
    }
  }
  return det % p;
}

void next_combination(std::vector<int>& comb, int limit) {
  // lexicographic successor of a k-combination of {0,...,limit-1}; empties on wrap
  int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[i] == limit - k + i) --i;
  if (i < 0) {
    comb.clear();
    return;
  }
  ++comb[i];
  for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
}

}  // namespace

Validation validate_curve(const CurveMatrix& a) {
  Validation v;
  if (a.n < 2) {
    v.message = "type must be >= 2";
    return v;
  }
  if (a.p < 3 || a.p % 2 == 0 || !is_prime(a.p)) {
    v.message = "p must be an odd prime";
    return v;
  }
  const int rows = a.n - 1, cols = a.n + 1;
  if (static_cast<int>(a.rows.size()) != rows) {
    v.message = "expected " + std::to_string(rows) + " rows";
    return v;
  }
  for (const auto& r : a.rows) {
    if (static_cast<int>(r.size()) != cols) {
      v.message = "expected " + std::to_string(cols) + " columns per row";
      return v;
    }
    for (int64_t e : r)
      if (e < 0 || e >= a.p) {
        v.message = "entries must be reduced mod p";
        return v;
      }
  }
  // All maximal minors nonzero.
  std::vector<int> comb(rows);
  for (int i = 0; i < rows; ++i) comb[i] = i;
  while (!comb.empty()) {
    std::vector<std::vector<int64_t>> sub(rows, std::vector<int64_t>(rows));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < rows; ++c) sub[r][c] = a.rows[r][comb[c]];
    if (det_mod(std::move(sub), a.p) == 0) {
      v.bad_columns = comb;
      v.message = "vanishing maximal minor";
      return v;
    }
    next_combination(comb, cols);
  }
  v.ok = true;
  return v;
}

CurveMatrix canonicalize(const CurveMatrix& a) {
  CurveMatrix m = a;
  const int rows = static_cast<int>(m.rows.size());
  const int cols = rows ? static_cast<int>(m.rows[0].size()) : 0;
  int prow = 0;
  for (int col = 0; col < cols && prow < rows; ++col) {
    int pivot = -1;
    for (int r = prow; r < rows; ++r)
      if (m.rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m.rows[pivot], m.rows[prow]);
    int64_t inv = modinv(m.rows[prow][col], m.p);
    for (int c = 0; c < cols; ++c) m.rows[prow][c] = mulmod(m.rows[prow][c], inv, m.p);
    for (int r = 0; r < rows; ++r) {
      if (r == prow || m.rows[r][col] == 0) continue;
      int64_t f = m.rows[r][col];
      for (int c = 0; c < cols; ++c)
        m.rows[r][c] = ((m.rows[r][c] - mulmod(f, m.rows[prow][c], m.p)) % m.p + m.p) % m.p;
    }
    ++prow;
  }
  return m;
}

QuotientCurve quotient(const CurveMatrix& a, SubsetMask t) {
  const int n = a.n;
  const int tsize = popcount(t);
  if (tsize > n - 1) throw std::invalid_argument("quotient: |T| must be <= n-1");
  if (t >> (n + 1)) throw std::invalid_argument("quotient: mask has bits beyond sigma_n");

  std::vector<std::vector<int64_t>> work = a.rows;
  std::vector<bool> row_alive(work.size(), true), col_alive(n + 1, true);

  for (int i = 0; i <= n; ++i) {
    if (!(t & (SubsetMask{1} << i))) continue;
    int pivot = -1;
    for (size_t r = 0; r < work.size(); ++r)
      if (row_alive[r] && work[r][i] != 0) {
        pivot = static_cast<int>(r);
        break;
      }
    if (pivot < 0)
      throw std::logic_error("quotient: no pivot for column " + std::to_string(i) +
                             " (matrix fails the minor invariant)");
    int64_t inv = modinv(work[pivot][i], a.p);
    for (size_t r = 0; r < work.size(); ++r) {
      if (!row_alive[r] || static_cast<int>(r) == pivot || work[r][i] == 0) continue;
      int64_t f = mulmod(work[r][i], inv, a.p);
      for (int c = 0; c <= n; ++c)
        work[r][c] = ((work[r][c] - mulmod(f, work[pivot][c], a.p)) % a.p + a.p) % a.p;
    }
    row_alive[pivot] = false;
    col_alive[i] = false;
  }

  QuotientCurve out;
  out.type = n - tsize;
  if (out.type < 2) return out;  // rational curve, no equations

  CurveMatrix q;
  q.n = out.type;
  q.p = a.p;
  for (size_t r = 0; r < work.size(); ++r) {
    if (!row_alive[r]) continue;
    std::vector<int64_t> row;
    for (int c = 0; c <= n; ++c)
      if (col_alive[c]) row.push_back(work[r][c]);
    q.rows.push_back(std::move(row));
  }
  out.matrix = canonicalize(q);
  return out;
}

mpz_class genus_of_type(int nu) {
  if (nu < 2) throw std::invalid_argument("genus_of_type: type must be >= 2");
  mpz_class g = mpz_class(1) << (nu - 2);
  return g * (nu - 3) + 1;
}

CurveSignature signature_of_type(int nu) {
  if (nu < 2) throw std::invalid_argument("signature_of_type: type must be >= 2");
  return CurveSignature{0, nu + 1, 2};
}

mpz_class fixed_point_degree(int nu) {
  if (nu < 3) throw std::invalid_argument("fixed_point_degree: type must be >= 3");
  return mpz_class(1) << (nu - 1);
}

SubsetMask canonical_group_element(int n, SubsetMask mask) {
  const SubsetMask all = (SubsetMask{1} << (n + 1)) - 1;
  mask &= all;
  if (mask & (SubsetMask{1} << n)) mask ^= all;
  return mask;
}

mpz_class h_subgroup_order(int n) {
  if (n < 2) throw std::invalid_argument("h_subgroup_order: n must be >= 2");
  return mpz_class(1) << (n % 2 == 1 ? n - 1 : n);
}

bool h_subgroup_contains(int n, SubsetMask mask) {
  SubsetMask c = canonical_group_element(n, mask);
  const SubsetMask all = (SubsetMask{1} << (n + 1)) - 1;
  return popcount(c) % 2 == 0 || popcount(c ^ all) % 2 == 0;
}

CurveMatrix random_smooth_curve(int n, int64_t p, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_smooth_curve: n must be >= 2");
  PrimeField base(p);  // validates p

  std::mt19937_64 rng(seed ^ (static_cast<uint64_t>(n) << 40) ^ (static_cast<uint64_t>(p) << 8));
  std::uniform_int_distribution<int64_t> dist(0, p - 1);

  const int attempts_cap = 256;
  for (int attempt = 0; attempt < attempts_cap; ++attempt) {
    CurveMatrix m;
    m.n = n;
    m.p = p;
    m.rows.assign(n - 1, std::vector<int64_t>(n + 1, 1));
    for (int r = 1; r < n - 1; ++r)
      for (int c = 0; c <= n; ++c) m.rows[r][c] = dist(rng);
    if (validate_curve(m).ok) return m;
  }

  // A normalized top row needs n+1 distinct (1 : x) columns, which runs out
  // when p < n + 1; retry with every row free before giving up.
  for (int attempt = 0; attempt < attempts_cap; ++attempt) {
    CurveMatrix m;
    m.n = n;
    m.p = p;
    m.rows.assign(n - 1, std::vector<int64_t>(n + 1, 0));
    for (int r = 0; r < n - 1; ++r)
      for (int c = 0; c <= n; ++c) m.rows[r][c] = dist(rng);
    if (validate_curve(m).ok) return m;
  }

  // Vandermonde witness: rows b_i^j with distinct b_i; every maximal minor
  // is a Vandermonde determinant, nonzero when the b_i are distinct.
  if (p >= n + 1) {
    CurveMatrix m;
    m.n = n;
    m.p = p;
    m.rows.assign(n - 1, std::vector<int64_t>(n + 1, 1));
    for (int r = 1; r < n - 1; ++r)
      for (int c = 0; c <= n; ++c) m.rows[r][c] = mulmod(m.rows[r - 1][c], c % p, p);
    if (validate_curve(m).ok) return m;
  }
  throw std::runtime_error("random_smooth_curve: sampling exhausted for n=" + std::to_string(n) +
                           " p=" + std::to_string(p) + " seed=" + std::to_string(seed));
}

std::string curve_to_text(const CurveMatrix& a) {
  CurveMatrix c = canonicalize(a);
  nlohmann::ordered_json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["rows"] = c.rows;
  return j.dump();
}

CurveMatrix curve_from_text(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  CurveMatrix m;
  m.n = j.at("n").get<int>();
  m.p = j.at("p").get<int64_t>();
  m.rows = j.at("rows").get<std::vector<std::vector<int64_t>>>();
  return m;
}

uint64_t curve_hash(const CurveMatrix& a) {
  std::string s = curve_to_text(a);
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace hecurve
