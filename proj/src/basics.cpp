#include "basics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace horolab {

const char* err_name(Err e) {
  switch (e) {
    case Err::NotIrreducible: return "NotIrreducible";
    case Err::DeterminantTooSmall: return "DeterminantTooSmall";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NonCanonicalInput: return "NonCanonicalInput";
    case Err::ZeroIdeal: return "ZeroIdeal";
    case Err::NotMaximalAtP: return "NotMaximalAtP";
    case Err::FactorizationMismatch: return "FactorizationMismatch";
    case Err::ZeroElement: return "ZeroElement";
    case Err::NotIncident: return "NotIncident";
    case Err::FactorizationUnavailable: return "FactorizationUnavailable";
    case Err::InvalidPolyline: return "InvalidPolyline";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::NotAchieved: return "NotAchieved";
    case Err::Inconclusive: return "Inconclusive";
    case Err::SingularMatrix: return "SingularMatrix";
    case Err::SingularConjugator: return "SingularConjugator";
    case Err::NotCoprime: return "NotCoprime";
    case Err::BadExponent: return "BadExponent";
    case Err::GroupTooLarge: return "GroupTooLarge";
    case Err::SearchExhausted: return "SearchExhausted";
    case Err::DegenerateSample: return "DegenerateSample";
    case Err::ConfigInvalid: return "ConfigInvalid";
    case Err::FieldRejected: return "FieldRejected";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

double to_double(const Int& x) { return x.convert_to<double>(); }
double to_double(const Rat& q) { return q.convert_to<double>(); }

std::string int_to_string(const Int& x) { return x.str(); }

std::string rat_to_string(const Rat& q) {
  if (rat_den(q) == 1) return rat_num(q).str();
  return rat_num(q).str() + "/" + rat_den(q).str();
}

// ---------------------------------------------------------------------------
// Matrices

IntMat IntMat::identity(std::size_t n) {
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::from(const IntMat& m) {
  RatMat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
  return r;
}

IntMat mat_mul(const IntMat& x, const IntMat& y) {
  check(x.cols == y.rows, Err::DimensionMismatch, "matrix product");
  IntMat r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Int& xik = x.at(i, k);
      if (xik == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += xik * y.at(k, j);
    }
  return r;
}

IntVec vec_mul(const IntVec& v, const IntMat& m) {
  check(v.size() == m.rows, Err::DimensionMismatch, "vector-matrix product");
  IntVec r(m.cols);
  for (std::size_t k = 0; k < m.rows; ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < m.cols; ++j) r[j] += v[k] * m.at(k, j);
  }
  return r;
}

IntMat mat_pow(const IntMat& m, unsigned e) {
  IntMat r = IntMat::identity(m.rows), b = m;
  while (e) {
    if (e & 1) r = mat_mul(r, b);
    e >>= 1;
    if (e) b = mat_mul(b, b);
  }
  return r;
}

Int mat_det(const IntMat& m) {
  check(m.rows == m.cols, Err::DimensionMismatch, "determinant");
  std::size_t n = m.rows;
  IntMat w = m;
  Int prev = 1, sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (w.at(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && w.at(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
    prev = w.at(k, k);
  }
  return n ? sign * w.at(n - 1, n - 1) : Int(1);
}

RatMat mat_mul(const RatMat& x, const RatMat& y) {
  check(x.cols == y.rows, Err::DimensionMismatch, "matrix product");
  RatMat r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Rat& xik = x.at(i, k);
      if (xik == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += xik * y.at(k, j);
    }
  return r;
}

RatVec vec_mul(const RatVec& v, const RatMat& m) {
  check(v.size() == m.rows, Err::DimensionMismatch, "vector-matrix product");
  RatVec r(m.cols);
  for (std::size_t k = 0; k < m.rows; ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < m.cols; ++j) r[j] += v[k] * m.at(k, j);
  }
  return r;
}

RatMat mat_inverse(const RatMat& m) {
  check(m.rows == m.cols, Err::DimensionMismatch, "inverse");
  std::size_t n = m.rows;
  RatMat w = m, inv = RatMat::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && w.at(piv, k) == 0) ++piv;
    check(piv < n, Err::SingularMatrix, "matrix not invertible");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w.at(k, j), w.at(piv, j));
        std::swap(inv.at(k, j), inv.at(piv, j));
      }
    Rat d = w.at(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      w.at(k, j) /= d;
      inv.at(k, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || w.at(i, k) == 0) continue;
      Rat f = w.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        w.at(i, j) -= f * w.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

RatMat mat_pow_signed(const IntMat& m, long e) {
  if (e >= 0) return RatMat::from(mat_pow(m, static_cast<unsigned>(e)));
  RatMat inv = mat_inverse(RatMat::from(m));
  RatMat r = RatMat::identity(m.rows);
  for (long i = 0; i < -e; ++i) r = mat_mul(r, inv);
  return r;
}

IntVec char_poly(const IntMat& m) {
  check(m.rows == m.cols, Err::DimensionMismatch, "char poly");
  std::size_t n = m.rows;
  // Faddeev-LeVerrier; all divisions are exact for integer input.
  IntVec c(n + 1);
  c[n] = 1;
  IntMat b = IntMat::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    b = mat_mul(m, b);
    Int tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += b.at(i, i);
    check(tr % Int(k) == 0, Err::Internal, "char poly trace divisibility");
    c[n - k] = -tr / Int(k);
    for (std::size_t i = 0; i < n; ++i) b.at(i, i) += c[n - k];
  }
  return c;
}

// ---------------------------------------------------------------------------
// HNF / SNF

IntMat hnf_rows(const IntMat& gens) {
  std::size_t n = gens.cols;
  std::vector<IntVec> rows;
  rows.reserve(gens.rows);
  for (std::size_t i = 0; i < gens.rows; ++i) {
    IntVec r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = gens.at(i, j);
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    // Euclid on the column below the current pivot row.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = rank; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) break;  // column clear below
      std::swap(rows[rank], rows[best]);
      bool clear = true;
      for (std::size_t i = rank + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Int q = rows[i][col] / rows[rank][col];
        if (q != 0)
          for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[rank][j];
        if (rows[i][col] != 0) clear = false;
      }
      if (clear) break;
    }
    if (rows[rank][col] == 0) continue;
    if (rows[rank][col] < 0)
      for (std::size_t j = 0; j < n; ++j) rows[rank][j] = -rows[rank][j];
    for (std::size_t i = 0; i < rank; ++i) {
      Int q = floor_div(rows[i][col], rows[rank][col]);
      if (q != 0)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[rank][j];
    }
    ++rank;
  }
  IntMat h(rank, n);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < n; ++j) h.at(i, j) = rows[i][j];
  return h;
}

IntMat hnf_full_rank(const IntMat& gens, Err on_fail, const std::string& what) {
  IntMat h = hnf_rows(gens);
  check(h.rows == gens.cols, on_fail, what);
  return h;
}

namespace {
// Pivot column of row i in an echelon HNF.
std::size_t pivot_col(const IntMat& h, std::size_t i) {
  for (std::size_t j = 0; j < h.cols; ++j)
    if (h.at(i, j) != 0) return j;
  fail(Err::Internal, "zero row in HNF");
}
}  // namespace

bool lattice_contains(const IntMat& hnf, const IntVec& v) {
  check(hnf.rows == hnf.cols && v.size() == hnf.cols, Err::DimensionMismatch, "lattice_contains");
  IntVec w = v;
  for (std::size_t i = 0; i < hnf.rows; ++i) {
    std::size_t p = pivot_col(hnf, i);
    Int q = w[p] / hnf.at(i, p);
    if (w[p] % hnf.at(i, p) != 0) return false;
    for (std::size_t j = p; j < hnf.cols; ++j) w[j] -= q * hnf.at(i, j);
  }
  for (const Int& x : w)
    if (x != 0) return false;
  return true;
}

IntVec lattice_reduce(const IntMat& hnf, IntVec v) {
  check(hnf.rows == hnf.cols && v.size() == hnf.cols, Err::DimensionMismatch, "lattice_reduce");
  for (std::size_t i = 0; i < hnf.rows; ++i) {
    std::size_t p = pivot_col(hnf, i);
    Int q = floor_div(v[p], hnf.at(i, p));
    if (q != 0)
      for (std::size_t j = p; j < hnf.cols; ++j) v[j] -= q * hnf.at(i, j);
  }
  return v;
}

std::vector<IntVec> lattice_box(const IntMat& hnf) {
  check(hnf.rows == hnf.cols, Err::DimensionMismatch, "lattice_box");
  std::size_t n = hnf.rows;
  std::vector<Int> diag(n, Int(1));
  for (std::size_t i = 0; i < n; ++i) diag[pivot_col(hnf, i)] = hnf.at(i, pivot_col(hnf, i));
  std::vector<IntVec> out;
  IntVec cur(n, Int(0));
  while (true) {
    out.push_back(lattice_reduce(hnf, cur));
    std::size_t j = 0;
    while (j < n) {
      cur[j] += 1;
      if (cur[j] < diag[j]) break;
      cur[j] = 0;
      ++j;
    }
    if (j == n) break;
  }
  return out;
}

IntVec snf_diagonal(IntMat m) {
  std::size_t n = std::min(m.rows, m.cols);
  IntVec d;
  std::size_t r0 = 0, c0 = 0;
  while (r0 < m.rows && c0 < m.cols) {
    // find smallest nonzero entry in the remaining block
    std::size_t bi = m.rows, bj = 0;
    for (std::size_t i = r0; i < m.rows; ++i)
      for (std::size_t j = c0; j < m.cols; ++j)
        if (m.at(i, j) != 0 && (bi == m.rows || abs(m.at(i, j)) < abs(m.at(bi, bj)))) {
          bi = i;
          bj = j;
        }
    if (bi == m.rows) break;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(r0, j), m.at(bi, j));
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, c0), m.at(i, bj));
    bool again = false;
    for (std::size_t i = r0 + 1; i < m.rows; ++i) {
      Int q = m.at(i, c0) / m.at(r0, c0);
      if (q != 0)
        for (std::size_t j = c0; j < m.cols; ++j) m.at(i, j) -= q * m.at(r0, j);
      if (m.at(i, c0) != 0) again = true;
    }
    for (std::size_t j = c0 + 1; j < m.cols; ++j) {
      Int q = m.at(r0, j) / m.at(r0, c0);
      if (q != 0)
        for (std::size_t i = r0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, c0);
      if (m.at(r0, j) != 0) again = true;
    }
    if (again) continue;
    d.push_back(abs(m.at(r0, c0)));
    ++r0;
    ++c0;
  }
  while (d.size() < n) d.push_back(0);
  // enforce divisibility chain
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i] == 0 || d[j] == 0) continue;
      Int g = gcd_int(d[i], d[j]);
      Int l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  return d;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p

namespace {
std::int64_t mod_p(std::int64_t x, std::int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

std::int64_t pow_mod_i64(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1;
  b = mod_p(b, p);
  while (e) {
    if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % p);
    b = static_cast<std::int64_t>((__int128)b * b % p);
    e >>= 1;
  }
  return r;
}

void poly_trim(PolyP& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyP poly_monic_p(PolyP f, std::int64_t p) {
  poly_trim(f);
  if (f.empty()) return f;
  std::int64_t inv = pow_mod_i64(f.back(), p - 2, p);
  for (auto& c : f) c = static_cast<std::int64_t>((__int128)c * inv % p);
  return f;
}
}  // namespace

PolyP poly_mod_p(const IntVec& coeffs, std::int64_t p) {
  PolyP f(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    f[i] = (coeffs[i] % p).convert_to<std::int64_t>();
  for (auto& c : f) c = mod_p(c, p);
  poly_trim(f);
  return f;
}

PolyP poly_mul_p(const PolyP& f, const PolyP& g, std::int64_t p) {
  if (f.empty() || g.empty()) return {};
  PolyP r(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f[i]) continue;
    for (std::size_t j = 0; j < g.size(); ++j)
      r[i + j] = static_cast<std::int64_t>((r[i + j] + (__int128)f[i] * g[j]) % p);
  }
  poly_trim(r);
  return r;
}

PolyP poly_rem_p(PolyP f, const PolyP& g, std::int64_t p) {
  poly_trim(f);
  check(!g.empty(), Err::Internal, "poly division by zero");
  std::int64_t lead_inv = pow_mod_i64(g.back(), p - 2, p);
  while (f.size() >= g.size()) {
    std::int64_t c = static_cast<std::int64_t>((__int128)f.back() * lead_inv % p);
    std::size_t off = f.size() - g.size();
    for (std::size_t j = 0; j < g.size(); ++j)
      f[off + j] = mod_p(f[off + j] - static_cast<std::int64_t>((__int128)c * g[j] % p), p);
    poly_trim(f);
    if (f.size() < g.size()) break;
    if (!f.empty() && f.size() >= g.size() && f.back() == 0) poly_trim(f);
  }
  return f;
}

PolyP poly_gcd_p(PolyP f, PolyP g, std::int64_t p) {
  poly_trim(f);
  poly_trim(g);
  while (!g.empty()) {
    PolyP r = poly_rem_p(f, g, p);
    f = std::move(g);
    g = std::move(r);
  }
  return poly_monic_p(f, p);
}

PolyP poly_derivative_p(const PolyP& f, std::int64_t p) {
  if (f.size() <= 1) return {};
  PolyP d(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i)
    d[i - 1] = static_cast<std::int64_t>((__int128)f[i] * (i % p) % p);
  poly_trim(d);
  return d;
}

PolyP poly_powmod_p(PolyP base, Int e, const PolyP& mod, std::int64_t p) {
  PolyP r{1};
  base = poly_rem_p(std::move(base), mod, p);
  while (e > 0) {
    if ((e & 1) == 1) r = poly_rem_p(poly_mul_p(r, base, p), mod, p);
    e >>= 1;
    if (e > 0) base = poly_rem_p(poly_mul_p(base, base, p), mod, p);
  }
  return r;
}

// Exact quotient f / g (g | f), over F_p.
static PolyP poly_quot(const PolyP& f, const PolyP& g, std::int64_t p) {
  PolyP rem = f, q;
  poly_trim(rem);
  if (rem.size() < g.size()) {
    check(rem.empty(), Err::Internal, "poly_quot: not divisible");
    return {};
  }
  q.assign(rem.size() - g.size() + 1, 0);
  std::int64_t lead_inv = pow_mod_i64(g.back(), p - 2, p);
  while (rem.size() >= g.size() && !rem.empty()) {
    std::int64_t c = static_cast<std::int64_t>((__int128)rem.back() * lead_inv % p);
    std::size_t off = rem.size() - g.size();
    q[off] = c;
    for (std::size_t j = 0; j < g.size(); ++j)
      rem[off + j] = mod_p(rem[off + j] - static_cast<std::int64_t>((__int128)c * g[j] % p), p);
    poly_trim(rem);
  }
  check(rem.empty(), Err::Internal, "poly_quot: not divisible");
  poly_trim(q);
  return q;
}

namespace {

bool divides_p(const PolyP& g, const PolyP& f, std::int64_t p) {
  return poly_rem_p(f, g, p).empty();
}

// Enumerate monic polynomials of a given degree (coefficient odometer).
bool next_coeffs(PolyP& c, std::int64_t p) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (++c[i] < p) return true;
    c[i] = 0;
  }
  return false;
}

// Smallest monic irreducible divisor by exhaustive search (p^deg small).
PolyP smallest_factor_exhaustive(const PolyP& f, std::int64_t p) {
  std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    PolyP g(d + 1, 0);
    g[d] = 1;
    do {
      if (divides_p(g, f, p)) return g;
    } while (next_coeffs(g, p));
  }
  return f;  // irreducible
}

// Equal-degree splitting (Cantor-Zassenhaus).  Test elements come from a
// fixed counter-driven generator, so the output order is deterministic.
void equal_degree_split(const PolyP& f, std::size_t d, std::int64_t p, std::vector<PolyP>& out) {
  std::size_t deg = f.size() - 1;
  if (deg == d) {
    out.push_back(poly_monic_p(f, p));
    return;
  }
  Int e = (pow(Int(p), static_cast<unsigned>(d)) - 1) / 2;
  std::uint64_t counter = 1;
  while (true) {
    PolyP a(deg, 0);
    std::uint64_t s = counter++;
    for (std::size_t i = 0; i < deg; ++i) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      a[i] = static_cast<std::int64_t>((s >> 33) % static_cast<std::uint64_t>(p));
    }
    poly_trim(a);
    if (a.empty()) continue;
    PolyP g = poly_gcd_p(f, a, p);
    if (g.size() > 1 && g.size() < f.size()) {
      equal_degree_split(g, d, p, out);
      equal_degree_split(poly_monic_p(poly_quot(f, g, p), p), d, p, out);
      return;
    }
    PolyP b;
    if (p == 2) {
      // trace map in characteristic 2
      PolyP t = a, acc = a;
      for (std::size_t i = 1; i < d; ++i) {
        t = poly_rem_p(poly_mul_p(t, t, p), f, p);
        acc.resize(std::max(acc.size(), t.size()), 0);
        for (std::size_t j = 0; j < t.size(); ++j) acc[j] = mod_p(acc[j] + t[j], p);
        poly_trim(acc);
      }
      b = acc;
    } else {
      b = poly_powmod_p(a, e, f, p);
      if (b.empty()) b = PolyP{0};
      b.resize(std::max<std::size_t>(b.size(), 1), 0);
      b[0] = mod_p(b[0] - 1, p);
      poly_trim(b);
    }
    if (b.empty()) continue;
    PolyP h = poly_gcd_p(f, b, p);
    if (h.size() > 1 && h.size() < f.size()) {
      equal_degree_split(h, d, p, out);
      equal_degree_split(poly_monic_p(poly_quot(f, h, p), p), d, p, out);
      return;
    }
  }
}

// Distinct monic irreducible factors of f (any multiplicities).
std::vector<PolyP> distinct_irreducible_factors(PolyP f, std::int64_t p) {
  f = poly_monic_p(std::move(f), p);
  std::vector<PolyP> out;
  if (f.size() <= 1) return out;

  double size_est = static_cast<double>(f.size() - 1) * std::log10(static_cast<double>(p));
  if (size_est <= 6.0) {  // p^deg <= 10^6: exhaustive divisor search
    PolyP rest = f;
    while (rest.size() > 1) {
      PolyP g = smallest_factor_exhaustive(rest, p);
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
      rest = poly_quot(rest, g, p);
    }
    return out;
  }

  PolyP der = poly_derivative_p(f, p);
  if (der.empty()) {
    // f = h(x^p) = h(x)^p over F_p
    PolyP root((f.size() - 1) / static_cast<std::size_t>(p) + 1, 0);
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = f[i * static_cast<std::size_t>(p)];
    return distinct_irreducible_factors(root, p);
  }

  PolyP sf = poly_monic_p(poly_quot(f, poly_gcd_p(f, der, p), p), p);
  // distinct-degree factorization of the squarefree part, then EDF
  PolyP w = sf;
  PolyP h{0, 1};  // x
  for (std::size_t d = 1; w.size() > 1; ++d) {
    if (2 * d > w.size() - 1) {
      equal_degree_split(w, w.size() - 1, p, out);
      break;
    }
    h = poly_powmod_p(h, Int(p), w, p);
    PolyP hx = h;
    hx.resize(std::max<std::size_t>(hx.size(), 2), 0);
    hx[1] = mod_p(hx[1] - 1, p);
    poly_trim(hx);
    PolyP g = poly_gcd_p(w, hx, p);
    if (g.size() > 1) {
      equal_degree_split(g, d, p, out);
      w = poly_monic_p(poly_quot(w, g, p), p);
      h = poly_rem_p(h, w, p);
    }
  }
  // factors whose multiplicity is divisible by p are invisible in sf
  PolyP rest = f;
  for (const PolyP& g : out)
    while (rest.size() >= g.size() && divides_p(g, rest, p)) rest = poly_quot(rest, g, p);
  if (rest.size() > 1)
    for (PolyP& g : distinct_irreducible_factors(rest, p))
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::vector<std::pair<PolyP, int>> factor_poly_p(PolyP f, std::int64_t p) {
  f = poly_monic_p(std::move(f), p);
  check(!f.empty(), Err::Internal, "factoring zero polynomial");
  std::vector<std::pair<PolyP, int>> out;
  if (f.size() == 1) return out;

  std::vector<PolyP> distinct = distinct_irreducible_factors(f, p);
  std::sort(distinct.begin(), distinct.end());
  PolyP rest = f;
  for (const PolyP& g : distinct) {
    int e = 0;
    while (rest.size() >= g.size() && divides_p(g, rest, p)) {
      rest = poly_quot(rest, g, p);
      ++e;
    }
    check(e > 0, Err::Internal, "factor_poly_p: phantom factor");
    out.emplace_back(g, e);
  }
  check(rest.size() == 1, Err::Internal, "factor_poly_p: incomplete factorization");
  return out;
}

bool poly_irreducible_p(const PolyP& f, std::int64_t p) {
  PolyP m = f;
  poly_trim(m);
  if (m.size() <= 1) return false;
  if (m.size() == 2) return true;
  auto fac = factor_poly_p(m, p);
  return fac.size() == 1 && fac[0].second == 1;
}

// ---------------------------------------------------------------------------
// Irreducibility over Q

namespace {
// Integer polynomial division: returns true if g | f exactly
// (both with integer coefficients, g monic).
bool int_poly_divides(const IntVec& g, const IntVec& f) {
  IntVec rem = f;
  while (rem.size() >= g.size()) {
    Int c = rem.back();
    std::size_t off = rem.size() - g.size();
    for (std::size_t j = 0; j < g.size(); ++j) rem[off + j] -= c * g[j];
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
    if (rem.size() < g.size()) break;
  }
  return rem.empty();
}
}  // namespace

std::vector<std::int64_t> small_primes(std::size_t count) {
  std::vector<std::int64_t> ps;
  std::int64_t c = 2;
  while (ps.size() < count) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= c; ++d)
      if (c % d == 0) {
        prime = false;
        break;
      }
    if (prime) ps.push_back(c);
    ++c;
  }
  return ps;
}

std::vector<std::pair<Int, int>> factor_integer(Int n) {
  check(n > 0, Err::Internal, "factor_integer needs n > 0");
  std::vector<std::pair<Int, int>> out;
  Int d = 2;
  while (d * d <= n) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
    d += (d == 2) ? 1 : 2;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

Int gcd_int(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int inv_mod(const Int& a, const Int& m) {
  Int old_r = a % m, r = m;
  if (old_r < 0) old_r += m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  check(old_r == 1, Err::NotCoprime, "inv_mod: arguments not coprime");
  Int inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

bool irreducible_over_q(const IntVec& m) {
  std::size_t n = m.size() - 1;
  check(!m.empty() && m.back() == 1, Err::ConfigInvalid, "polynomial must be monic");
  if (n == 0) return false;
  if (n == 1) return true;
  if (m[0] == 0) return false;  // x divides

  // modular pre-test at primes where the reduction is squarefree
  for (std::int64_t p : small_primes(25)) {
    PolyP fp = poly_mod_p(m, p);
    if (fp.size() != m.size()) continue;  // leading coeff vanished (cannot: monic), degree drop guard
    PolyP der = poly_derivative_p(fp, p);
    if (der.empty() || poly_gcd_p(fp, der, p).size() != 1) continue;  // not squarefree mod p
    if (poly_irreducible_p(fp, p)) return true;
  }

  // bounded integer factor search (Mignotte-style coefficient bound)
  double norm2 = 0;
  for (const Int& c : m) {
    double cd = to_double(c);
    norm2 += cd * cd;
  }
  norm2 = std::sqrt(norm2);
  std::uint64_t budget = 20'000'000;  // candidate divisions, desk scale
  for (std::size_t d = 1; d <= n / 2; ++d) {
    // candidate monic factor x^d + c_{d-1} x^{d-1} + ... + c_0 with c_0 | m[0]
    Int bound_d = Int(static_cast<long long>(std::ceil(std::pow(2.0, double(d)) * norm2))) + 1;
    std::vector<Int> c0s;
    Int a0 = abs(m[0]);
    for (Int t = 1; t * t <= a0; ++t)
      if (a0 % t == 0) {
        c0s.push_back(t);
        c0s.push_back(-t);
        if (t * t != a0) {
          c0s.push_back(a0 / t);
          c0s.push_back(-a0 / t);
        }
      }
    std::sort(c0s.begin(), c0s.end());
    std::vector<Int> mid(d > 1 ? d - 1 : 0, -bound_d);
    while (true) {
      for (const Int& c0 : c0s) {
        check(budget-- > 0, Err::ConfigInvalid, "irreducibility search exceeds desk-scale budget");
        IntVec g(d + 1);
        g[0] = c0;
        for (std::size_t i = 0; i + 1 < d; ++i) g[i + 1] = mid[i];
        g[d] = 1;
        if (int_poly_divides(g, m)) return false;
      }
      std::size_t i = 0;
      while (i < mid.size()) {
        mid[i] += 1;
        if (mid[i] <= bound_d) break;
        mid[i] = -bound_d;
        ++i;
      }
      if (i == mid.size()) break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// RNG: xoshiro256** seeded via splitmix64.

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
  std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t n) {
  check(n > 0, Err::Internal, "Rng::below(0)");
  std::uint64_t limit = ~0ull - (~0ull % n);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double Rng::real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Rng Rng::fork(const std::string& tag) const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  Rng copy = *this;
  return Rng(copy.next() ^ h);
}

}  // namespace horolab
