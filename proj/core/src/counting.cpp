#include "hecurve/counting.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

namespace hecurve {

namespace {

using i128 = __int128;

// q^e, throwing once the running value exceeds `limit`.
uint64_t pow_within(uint64_t q, int e, uint64_t limit, const char* what) {
  uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > limit / q)
      throw budget_error(std::string(what) + ": q^" + std::to_string(e) +
                         " exceeds the configured budget");
    v *= q;
  }
  if (v > limit)
    throw budget_error(std::string(what) + ": q^" + std::to_string(e) +
                       " exceeds the configured budget");
  return v;
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<uint64_t>(u >> 64));
  mpz_class out = (hi << 64) + static_cast<uint64_t>(u);
  return neg ? mpz_class(-out) : out;
}

// ---- field policies for the hot loops -------------------------------------

// Prime field, elements are residues.
struct ModField {
  int64_t p;
  std::vector<int8_t> chit;  // empty when p is too large to table

  using E = int64_t;
  explicit ModField(int64_t p_) : p(p_) {
    if (p <= (1 << 22)) {
      chit.assign(p, -1);
      chit[0] = 0;
      for (int64_t r = 1; r < p; ++r) chit[r * r % p] = 1;
    }
  }
  E from_index(uint64_t i) const { return static_cast<int64_t>(i); }
  E zero() const { return 0; }
  E one() const { return 1; }
  bool is_zero(E a) const { return a == 0; }
  E add(E a, E b) const { return (a + b) % p; }
  E mul(E a, E b) const {
    return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b) %
                                static_cast<uint64_t>(p));
  }
  E embed(int64_t r) const { return ((r % p) + p) % p; }
  int chi(E a) const {
    if (!chit.empty()) return chit[a];
    if (a == 0) return 0;
    int64_t r = 1, base = a, e = (p - 1) / 2;
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r == 1 ? 1 : -1;
  }
};

// Extension field with full add/mul tables, elements are indices.
struct TableField {
  uint64_t q;
  std::vector<uint32_t> addt, mult, embt;
  std::vector<int8_t> chit;

  using E = uint32_t;
  explicit TableField(const ExtField& f) : q(f.q()) {
    addt.resize(q * q);
    mult.resize(q * q);
    chit.resize(q);
    std::vector<Elem> el(q);
    for (uint64_t i = 0; i < q; ++i) el[i] = f.element_at(i);
    for (uint64_t i = 0; i < q; ++i) {
      chit[i] = static_cast<int8_t>(f.chi(el[i]));
      for (uint64_t j = 0; j < q; ++j) {
        addt[i * q + j] = static_cast<uint32_t>(f.index_of(f.add(el[i], el[j])));
        mult[i * q + j] = static_cast<uint32_t>(f.index_of(f.mul(el[i], el[j])));
      }
    }
    embt.resize(f.p());
    for (int64_t r = 0; r < f.p(); ++r)
      embt[r] = static_cast<uint32_t>(f.index_of(f.embed_base(r)));
  }
  E from_index(uint64_t i) const { return static_cast<uint32_t>(i); }
  E zero() const { return 0; }
  bool is_zero(E a) const { return a == 0; }
  E add(E a, E b) const { return addt[static_cast<uint64_t>(a) * q + b]; }
  E mul(E a, E b) const { return mult[static_cast<uint64_t>(a) * q + b]; }
  E embed(int64_t r) const { return embt[((r % static_cast<int64_t>(embt.size())) + embt.size()) % embt.size()]; }
  int chi(E a) const { return chit[a]; }
};

// Generic fallback, elements are coefficient vectors. Slow but unbounded.
struct PolyField {
  const ExtField* f;

  using E = Elem;
  explicit PolyField(const ExtField& f_) : f(&f_) {}
  E from_index(uint64_t i) const { return f->element_at(i); }
  E zero() const { return f->zero(); }
  bool is_zero(const E& a) const { return f->is_zero(a); }
  E add(const E& a, const E& b) const { return f->add(a, b); }
  E mul(const E& a, const E& b) const { return f->mul(a, b); }
  E embed(int64_t r) const { return f->embed_base(r); }
  int chi(const E& a) const { return f->chi(a); }
};

template <class Fn>
int64_t with_field(const ExtField& f, Fn&& fn) {
  if (f.k() == 1) return fn(ModField(f.p()));
  if (f.q() <= 2048) return fn(TableField(f));
  return fn(PolyField(f));
}

// Decode the idx-th first-nonzero-coordinate-1 representative of
// P^{ncoords-1}(F_q) into `coords`. Blocks by position of the leading 1;
// trailing coordinates are base-q digits, most significant first.
template <class FF>
void decode_rep(const FF& f, uint64_t q, int ncoords, uint64_t idx,
                std::vector<typename FF::E>& coords) {
  int j = 0;
  uint64_t block = 1;
  for (int i = 0; i < ncoords - 1; ++i) block *= q;  // q^{ncoords-1}
  while (idx >= block) {
    idx -= block;
    block /= q;
    ++j;
  }
  for (int i = 0; i < j; ++i) coords[i] = f.zero();
  coords[j] = f.embed(1);
  for (int i = ncoords - 1; i > j; --i) {
    coords[i] = f.from_index(idx % q);
    idx /= q;
  }
}

// (q^ncoords - 1)/(q - 1) representatives, throwing past `limit`.
uint64_t projective_rep_count(uint64_t q, int ncoords, uint64_t limit, const char* what) {
  uint64_t total = 0, block = 1;
  for (int i = 0; i < ncoords; ++i) {
    if (total > limit - block || (i + 1 < ncoords && block > limit / q))
      throw budget_error(std::string(what) + ": projective representative count exceeds the "
                                             "configured budget");
    total += block;
    block *= q;
  }
  return total;
}

// Points of the system rows * x^2 = 0 in P^{ncoords-1}(F).
template <class FF>
int64_t count_system(const std::vector<std::vector<int64_t>>& rows, int ncoords, const FF& f,
                     uint64_t q, uint64_t total_reps, int threads) {
  using E = typename FF::E;
  std::vector<std::vector<E>> er(rows.size(), std::vector<E>(ncoords));
  for (size_t r = 0; r < rows.size(); ++r)
    for (int i = 0; i < ncoords; ++i) er[r][i] = f.embed(rows[r][i]);

  auto worker = [&](uint64_t begin, uint64_t end) -> int64_t {
    std::vector<E> x(ncoords, f.zero()), sq(ncoords, f.zero());
    int64_t hits = 0;
    for (uint64_t idx = begin; idx < end; ++idx) {
      decode_rep(f, q, ncoords, idx, x);
      for (int i = 0; i < ncoords; ++i) sq[i] = f.mul(x[i], x[i]);
      bool on = true;
      for (size_t r = 0; r < er.size() && on; ++r) {
        E acc = f.zero();
        for (int i = 0; i < ncoords; ++i) acc = f.add(acc, f.mul(er[r][i], sq[i]));
        on = f.is_zero(acc);
      }
      if (on) ++hits;
    }
    return hits;
  };

  if (threads <= 1 || total_reps < 4096) return worker(0, total_reps);
  std::vector<int64_t> partial(threads, 0);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    uint64_t b = total_reps * t / threads, e = total_reps * (t + 1) / threads;
    pool.emplace_back([&, t, b, e] { partial[t] = worker(b, e); });
  }
  for (auto& th : pool) th.join();
  int64_t sum = 0;
  for (int64_t v : partial) sum += v;
  return sum;
}

// One chunk of the character-sum line iteration. Lines whose nonzero
// support has odd size cancel over scalings and are skipped, so the
// G-component of the accumulator stays 0.
template <class FF>
GaussAccumulator charsum_chunk(const std::vector<std::vector<typename FF::E>>& er, int nu,
                               const FF& f, uint64_t q, int eps, const std::vector<i128>& powq,
                               uint64_t begin, uint64_t end, std::atomic<bool>& minor_violation) {
  using E = typename FF::E;
  const int nlines_coords = nu - 1;
  std::vector<E> t(nlines_coords, f.zero());
  i128 acc = 0;
  for (uint64_t idx = begin; idx < end; ++idx) {
    decode_rep(f, q, nlines_coords, idx, t);
    int z = 0, chiprod = 1;
    for (int i = 0; i <= nu; ++i) {
      E c = f.zero();
      for (int r = 0; r < nlines_coords; ++r) c = f.add(c, f.mul(t[r], er[r][i]));
      int ch = f.chi(c);
      if (ch == 0)
        ++z;
      else
        chiprod *= ch;
    }
    if (z > nu - 2) {
      minor_violation = true;
      return {};
    }
    int s = nu + 1 - z;
    if (s % 2 != 0) continue;  // cancels over the q-1 scalings of t
    int sign = chiprod;
    if (eps == -1 && (s / 2) % 2 == 1) sign = -sign;
    i128 term = powq[z + s / 2] * static_cast<int64_t>(q - 1);
    acc += sign > 0 ? term : -term;
  }
  GaussAccumulator g;
  g.a = to_mpz(acc);
  return g;
}

template <class FF>
int64_t charsum_total(const CurveMatrix& a, const FF& f, uint64_t q, uint64_t total_lines,
                      int threads) {
  using E = typename FF::E;
  const int nu = a.n;
  std::vector<std::vector<E>> er(a.rows.size(), std::vector<E>(nu + 1));
  for (size_t r = 0; r < a.rows.size(); ++r)
    for (int i = 0; i <= nu; ++i) er[r][i] = f.embed(a.rows[r][i]);

  const int eps = f.chi(f.embed(-1));
  std::vector<i128> powq(nu + 2);
  powq[0] = 1;
  for (int i = 1; i <= nu + 1; ++i) powq[i] = powq[i - 1] * static_cast<int64_t>(q);

  std::atomic<bool> minor_violation{false};
  GaussAccumulator total_acc;
  if (threads <= 1 || total_lines < 4096) {
    total_acc = charsum_chunk(er, nu, f, q, eps, powq, 0, total_lines, minor_violation);
  } else {
    std::vector<GaussAccumulator> partial(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      uint64_t b = total_lines * t / threads, e = total_lines * (t + 1) / threads;
      pool.emplace_back([&, t, b, e] {
        partial[t] = charsum_chunk(er, nu, f, q, eps, powq, b, e, minor_violation);
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& g : partial) total_acc.combine(g);
  }
  if (minor_violation)
    throw std::logic_error("count_charsum: a line annihilated more than nu-2 coefficient "
                           "columns; the matrix fails the minor invariant");
  if (total_acc.b != 0)
    throw std::logic_error("count_charsum: Gauss-sum component did not cancel");

  mpz_class total = to_mpz(powq[nu + 1]) + total_acc.a;
  mpz_class qpow = to_mpz(powq[nu - 1]);
  mpz_class n_affine, rem;
  mpz_fdiv_qr(n_affine.get_mpz_t(), rem.get_mpz_t(), total.get_mpz_t(), qpow.get_mpz_t());
  if (rem != 0)
    throw std::logic_error("count_charsum: affine total not divisible by q^{nu-1}");
  mpz_class n_proj;
  mpz_class denom = static_cast<int64_t>(q - 1);
  mpz_class numer = n_affine - 1;
  mpz_fdiv_qr(n_proj.get_mpz_t(), rem.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
  if (rem != 0)
    throw std::logic_error("count_charsum: (N_affine - 1) not divisible by q - 1");
  return static_cast<int64_t>(mpz_get_si(n_proj.get_mpz_t()));
}

}  // namespace

int64_t count_naive(const CurveMatrix& a, const ExtField& f, const CountBudget& budget,
                    int threads) {
  if (a.p != f.p()) throw std::invalid_argument("count_naive: field characteristic mismatch");
  pow_within(f.q(), a.n + 1, budget.max_tuples, "count_naive");
  uint64_t total_reps = projective_rep_count(f.q(), a.n + 1, budget.max_tuples, "count_naive");
  return with_field(f, [&](const auto& ff) {
    return count_system(a.rows, a.n + 1, ff, f.q(), total_reps, threads);
  });
}

int64_t count_charsum(const CurveMatrix& a, const ExtField& f, const CountBudget& budget,
                      int threads) {
  if (a.p != f.p()) throw std::invalid_argument("count_charsum: field characteristic mismatch");
  // budget meters the representatives actually iterated, ~q^{nu-2}
  uint64_t total_lines = projective_rep_count(f.q(), a.n - 1, budget.max_lines, "count_charsum");
  return with_field(f, [&](const auto& ff) {
    return charsum_total(a, ff, f.q(), total_lines, threads);
  });
}

CountRecord trace(const CurveMatrix& a, SubsetMask t, int64_t p, int k, CountMethod method,
                  CountCache* cache, const CountBudget& budget, int threads,
                  uint64_t field_seed) {
  QuotientCurve qc = quotient(a, t);
  if (qc.type < 2) throw std::invalid_argument("trace: quotient has type < 2");

  CountRecord rec;
  rec.curve_hash = curve_hash(a);
  rec.subset = t;
  rec.p = p;
  rec.k = k;

  ExtField f = ExtField::make(PrimeField(p), k, field_seed);
  const uint64_t q = f.q();

  int64_t n_points;
  if (auto hit = cache ? cache->lookup(rec.curve_hash, t, p, k) : std::nullopt) {
    n_points = *hit;
  } else {
    CountMethod m = method;
    if (m == CountMethod::auto_select) {
      bool small = true;
      uint64_t v = 1;
      for (int i = 0; i < qc.type + 1 && small; ++i) {
        if (v > budget.naive_cutoff / q)
          small = false;
        else
          v *= q;
      }
      m = small ? CountMethod::naive : CountMethod::charsum;
    }
    n_points = (m == CountMethod::naive) ? count_naive(*qc.matrix, f, budget, threads)
                                         : count_charsum(*qc.matrix, f, budget, threads);
    if (cache) cache->insert(rec.curve_hash, t, p, k, n_points);
  }

  rec.n_points = n_points;
  rec.trace = static_cast<int64_t>(q) + 1 - n_points;
  mpz_class g = genus_of_type(qc.type);
  rec.weil_ok = mpz_class(rec.trace) * rec.trace <= 4 * g * g * mpz_class(static_cast<uint64_t>(q));
  return rec;
}

int64_t count_projective_system(const std::vector<std::vector<int64_t>>& rows, int ncoords,
                                const ExtField& f, const CountBudget& budget, int threads) {
  pow_within(f.q(), ncoords, budget.max_tuples, "count_projective_system");
  uint64_t total_reps =
      projective_rep_count(f.q(), ncoords, budget.max_tuples, "count_projective_system");
  return with_field(f, [&](const auto& ff) {
    return count_system(rows, ncoords, ff, f.q(), total_reps, threads);
  });
}

namespace {

int64_t det_mod_p(std::vector<std::vector<int64_t>> m, int64_t p) {
  const int d = static_cast<int>(m.size());
  auto mulp = [p](int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b) %
                                static_cast<uint64_t>(p));
  };
  auto invp = [&](int64_t a) {
    int64_t r = 1, base = a, e = p - 2;
    while (e > 0) {
      if (e & 1) r = mulp(r, base);
      base = mulp(base, base);
      e >>= 1;
    }
    return r;
  };
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
    det = mulp(det, m[col][col]);
    int64_t inv = invp(m[col][col]);
    for (int r = col + 1; r < d; ++r) {
      if (m[r][col] == 0) continue;
      int64_t f = mulp(m[r][col], inv);
      for (int c = col; c < d; ++c) m[r][c] = ((m[r][c] - mulp(f, m[col][c])) % p + p) % p;
    }
  }
  return det % p;
}

}  // namespace

int64_t fixed_locus_count(const CurveMatrix& a, int involution, uint64_t field_seed) {
  if (a.n < 3) throw std::invalid_argument("fixed_locus_count: curve type must be >= 3");
  if (involution < 0 || involution > a.n)
    throw std::invalid_argument("fixed_locus_count: involution index out of range");
  const int64_t p = a.p;
  const int nu = a.n;

  // Reduced system: A with column `involution` dropped, (nu-1) x nu, rank
  // nu-1 with one-dimensional kernel spanned by signed maximal minors.
  std::vector<std::vector<int64_t>> rows;
  for (const auto& r : a.rows) {
    std::vector<int64_t> row;
    for (int c = 0; c <= nu; ++c)
      if (c != involution) row.push_back(r[c]);
    rows.push_back(std::move(row));
  }
  std::vector<int64_t> kernel(nu);
  for (int j = 0; j < nu; ++j) {
    std::vector<std::vector<int64_t>> sub(nu - 1, std::vector<int64_t>(nu - 1));
    for (int r = 0; r < nu - 1; ++r) {
      int cc = 0;
      for (int c = 0; c < nu; ++c)
        if (c != j) sub[r][cc++] = rows[r][c];
    }
    int64_t d = det_mod_p(std::move(sub), p);
    kernel[j] = (j % 2 == 0) ? d : (p - d) % p;
  }
  for (int64_t v : kernel)
    if (v == 0)
      throw std::logic_error("fixed_locus_count: degenerate hyperplane section (matrix fails "
                             "the minor invariant)");

  // y_j^2 = kernel[j]/kernel[0], y_0 = 1; multiply the square-root counts.
  ExtField f2 = ExtField::make(PrimeField(p), 2, field_seed);
  auto invp = [p](int64_t a) {
    int64_t r = 1, base = a, e = p - 2;
    while (e > 0) {
      if (e & 1)
        r = static_cast<int64_t>(static_cast<uint64_t>(r) * base % static_cast<uint64_t>(p));
      base = static_cast<int64_t>(static_cast<uint64_t>(base) * base % static_cast<uint64_t>(p));
      e >>= 1;
    }
    return r;
  };
  int64_t inv0 = invp(kernel[0]);
  int64_t count = 1;
  for (int j = 1; j < nu; ++j) {
    int64_t ratio =
        static_cast<int64_t>(static_cast<uint64_t>(kernel[j]) * inv0 % static_cast<uint64_t>(p));
    count *= 1 + f2.chi(f2.embed_base(ratio));
  }
  return count;
}

// ---- cache ----------------------------------------------------------------

namespace {

std::string cache_key(uint64_t hash, SubsetMask t, int64_t p, int k) {
  return std::to_string(hash) + '|' + std::to_string(t) + '|' + std::to_string(p) + '|' +
         std::to_string(k);
}

std::string subset_field(SubsetMask t) {
  if (t == 0) return "-";
  std::string s;
  for (int i = 0; t >> i; ++i)
    if (t & (SubsetMask{1} << i)) {
      if (!s.empty()) s += ',';
      s += std::to_string(i);
    }
  return s;
}

bool parse_subset_field(const std::string& s, SubsetMask& out) {
  out = 0;
  if (s == "-") return true;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      int i = std::stoi(part);
      if (i < 0 || i > 31) return false;
      out |= SubsetMask{1} << i;
    } catch (...) {
      return false;
    }
  }
  return true;
}

}  // namespace

CountCache::CountCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string hs, ts;
    int64_t p, n;
    int k;
    uint64_t hash;
    SubsetMask t;
    if (ss >> hs >> ts >> p >> k >> n) {
      try {
        hash = std::stoull(hs);
      } catch (...) {
        std::cerr << "cache: ignoring corrupt line " << lineno << "\n";
        continue;
      }
      if (!parse_subset_field(ts, t)) {
        std::cerr << "cache: ignoring corrupt line " << lineno << "\n";
        continue;
      }
      map_[cache_key(hash, t, p, k)] = n;
    } else {
      std::cerr << "cache: ignoring corrupt line " << lineno << "\n";
    }
  }
}

std::optional<int64_t> CountCache::lookup(uint64_t hash, SubsetMask t, int64_t p, int k) const {
  auto it = map_.find(cache_key(hash, t, p, k));
  if (it == map_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void CountCache::insert(uint64_t hash, SubsetMask t, int64_t p, int k, int64_t n_points) {
  auto [it, fresh] = map_.emplace(cache_key(hash, t, p, k), n_points);
  if (!fresh) return;
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    out << hash << ' ' << subset_field(t) << ' ' << p << ' ' << k << ' ' << n_points << '\n';
  }
}

}  // namespace hecurve
