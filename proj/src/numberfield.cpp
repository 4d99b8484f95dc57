#include "numberfield.hpp"

#include <algorithm>
#include <sstream>

namespace horolab {

std::string FieldDescriptor::poly_string() const {
  std::ostringstream os;
  os << "x^" << n;
  for (std::size_t i = n; i-- > 0;) {
    if (coeffs[i] == 0) continue;
    os << (coeffs[i] > 0 ? " + " : " - ") << Int(abs(coeffs[i])).str();
    if (i == 1) os << "*x";
    if (i > 1) os << "*x^" << i;
  }
  return os.str();
}

FieldDescriptor define_field(const IntVec& coeffs) {
  FieldDescriptor f;
  f.coeffs = coeffs;
  f.n = coeffs.size();
  check(f.n >= 1, Err::ConfigInvalid, "empty coefficient list");
  f.d = abs(coeffs[0]);
  check(f.d > 1, Err::DeterminantTooSmall, "|a_0| must exceed 1");

  IntVec monic = coeffs;
  monic.push_back(1);
  check(irreducible_over_q(monic), Err::NotIrreducible,
        "m(x) factors over Q");

  f.companion = IntMat(f.n, f.n);
  for (std::size_t i = 0; i + 1 < f.n; ++i) f.companion.at(i, i + 1) = 1;
  for (std::size_t j = 0; j < f.n; ++j) f.companion.at(f.n - 1, j) = -coeffs[j];

  check(abs(mat_det(f.companion)) == f.d, Err::Internal, "det(A_x) != +-a_0");
  check(char_poly(f.companion) == monic, Err::Internal, "char(A_x) != m");
  return f;
}

bool OrderElement::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Int& c) { return c == 0; });
}

OrderElement oe_zero(const FieldDescriptor& f) { return {IntVec(f.n)}; }

OrderElement oe_one(const FieldDescriptor& f) {
  OrderElement e = oe_zero(f);
  e.coords[0] = 1;
  return e;
}

OrderElement oe_basis(const FieldDescriptor& f, std::size_t i) {
  check(i < f.n, Err::DimensionMismatch, "basis index");
  OrderElement e = oe_zero(f);
  e.coords[i] = 1;
  return e;
}

OrderElement oe_from_int(const FieldDescriptor& f, const Int& c) {
  OrderElement e = oe_zero(f);
  e.coords[0] = c;
  return e;
}

namespace {
void same_size(const OrderElement& a, const OrderElement& b) {
  check(a.coords.size() == b.coords.size(), Err::DimensionMismatch, "order elements");
}
}  // namespace

OrderElement oe_add(const OrderElement& a, const OrderElement& b) {
  same_size(a, b);
  OrderElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
  return r;
}

OrderElement oe_sub(const OrderElement& a, const OrderElement& b) {
  same_size(a, b);
  OrderElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
  return r;
}

OrderElement oe_neg(const OrderElement& a) {
  OrderElement r = a;
  for (Int& c : r.coords) c = -c;
  return r;
}

OrderElement oe_scale(const Int& c, const OrderElement& a) {
  OrderElement r = a;
  for (Int& x : r.coords) x *= c;
  return r;
}

OrderElement oe_mul(const FieldDescriptor& f, const OrderElement& a, const OrderElement& b) {
  same_size(a, b);
  check(a.coords.size() == f.n, Err::DimensionMismatch, "element vs field");
  // polynomial product, then reduce alpha^j for j >= n via the recursion
  // alpha^n = -(a_0 + a_1 alpha + ... + a_{n-1} alpha^{n-1})
  IntVec prod(2 * f.n - 1);
  for (std::size_t i = 0; i < f.n; ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < f.n; ++j) prod[i + j] += a.coords[i] * b.coords[j];
  }
  for (std::size_t j = prod.size(); j-- > f.n;) {
    if (prod[j] == 0) continue;
    Int c = prod[j];
    prod[j] = 0;
    for (std::size_t i = 0; i < f.n; ++i) prod[j - f.n + i] -= c * f.coeffs[i];
  }
  prod.resize(f.n);
  return {std::move(prod)};
}

OrderElement mul_by_alpha(const FieldDescriptor& f, const OrderElement& a) {
  return {vec_mul(a.coords, f.companion)};
}

std::optional<OrderElement> x_divide(const FieldDescriptor& f, const OrderElement& a) {
  // Solve c * A_x = a using the companion structure:
  //   (c A)_0 = -a_0 c_{n-1},   (c A)_j = c_{j-1} - a_j c_{n-1}  (j >= 1)
  const Int& a0 = f.coeffs[0];
  if (a.coords[0] % a0 != 0) return std::nullopt;
  IntVec c(f.n);
  c[f.n - 1] = -a.coords[0] / a0;
  for (std::size_t j = 1; j < f.n; ++j) c[j - 1] = a.coords[j] + f.coeffs[j] * c[f.n - 1];
  return OrderElement{std::move(c)};
}

RingFraction rf_make(const FieldDescriptor& f, OrderElement a, long denom_exp) {
  check(denom_exp >= 0, Err::NonCanonicalInput, "negative denominator exponent");
  RingFraction r{std::move(a), denom_exp};
  if (r.numer.is_zero()) {
    r.denom_exp = 0;
    return r;
  }
  while (r.denom_exp > 0) {
    auto q = x_divide(f, r.numer);
    if (!q) break;
    r.numer = std::move(*q);
    --r.denom_exp;
  }
  return r;
}

RingFraction rf_from_order(const OrderElement& a) { return {a, 0}; }

RingFraction rf_zero(const FieldDescriptor& f) { return {oe_zero(f), 0}; }

RingFraction rf_add(const FieldDescriptor& f, const RingFraction& a, const RingFraction& b) {
  long l = std::max(a.denom_exp, b.denom_exp);
  OrderElement na = a.numer, nb = b.numer;
  for (long i = a.denom_exp; i < l; ++i) na = mul_by_alpha(f, na);
  for (long i = b.denom_exp; i < l; ++i) nb = mul_by_alpha(f, nb);
  return rf_make(f, oe_add(na, nb), l);
}

RingFraction rf_sub(const FieldDescriptor& f, const RingFraction& a, const RingFraction& b) {
  return rf_add(f, a, rf_neg(f, b));
}

RingFraction rf_neg(const FieldDescriptor& f, const RingFraction& a) {
  (void)f;
  return {oe_neg(a.numer), a.denom_exp};
}

RingFraction rf_shift(const FieldDescriptor& f, const RingFraction& a, long k) {
  if (a.is_zero()) return rf_zero(f);
  if (k >= 0) {
    OrderElement n = a.numer;
    for (long i = 0; i < k; ++i) n = mul_by_alpha(f, n);
    return rf_make(f, std::move(n), a.denom_exp);
  }
  return rf_make(f, a.numer, a.denom_exp - k);
}

RingFraction rf_scale(const FieldDescriptor& f, const Int& c, const RingFraction& a) {
  return rf_make(f, oe_scale(c, a.numer), a.denom_exp);
}

RatVec rf_coords(const FieldDescriptor& f, const RingFraction& a) {
  // coords(numer) * A_x^{-denom_exp}
  RatVec v(f.n);
  for (std::size_t i = 0; i < f.n; ++i) v[i] = Rat(a.numer.coords[i]);
  if (a.denom_exp > 0) {
    RatMat inv_pow = mat_pow_signed(f.companion, -a.denom_exp);
    v = vec_mul(v, inv_pow);
  }
  return v;
}

std::string rf_to_string(const FieldDescriptor& f, const RingFraction& a) {
  RatVec v = rf_coords(f, a);
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rat_to_string(v[i]);
  }
  return s;
}

GammaElement gamma_identity(const FieldDescriptor& f) { return {rf_zero(f), 0}; }

GammaElement gamma_make(const FieldDescriptor& f, RingFraction b, long k) {
  return {rf_make(f, std::move(b.numer), b.denom_exp), k};
}

GammaElement gamma_mul(const FieldDescriptor& f, const GammaElement& g1, const GammaElement& g2) {
  return {rf_add(f, g1.b, rf_shift(f, g2.b, g1.k)), g1.k + g2.k};
}

GammaElement gamma_inv(const FieldDescriptor& f, const GammaElement& g) {
  return {rf_shift(f, rf_neg(f, g.b), -g.k), -g.k};
}

CanonicalCosetRep coset_reduce(const FieldDescriptor& f, const RingFraction& b, long n) {
  // sigma = max(l, max(0, -n)); both d^sigma * coords(b) and d^sigma * A_x^n
  // are integral (entries of A_x^{-j} lie in d^{-j} Z).
  long sigma = std::max(b.denom_exp, std::max(0l, -n));
  Int scale = pow(f.d, static_cast<unsigned>(sigma));

  RatMat lat_q = mat_pow_signed(f.companion, n);
  IntMat lat(f.n, f.n);
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = 0; j < f.n; ++j) {
      Rat e = lat_q.at(i, j) * scale;
      check(rat_den(e) == 1, Err::Internal, "coset lattice not integral at sigma");
      lat.at(i, j) = rat_num(e);
    }
  IntMat hnf = hnf_full_rank(lat, Err::Internal, "coset lattice rank");

  RatVec coords = rf_coords(f, b);
  IntVec v(f.n);
  for (std::size_t i = 0; i < f.n; ++i) {
    Rat e = coords[i] * scale;
    check(rat_den(e) == 1, Err::NonCanonicalInput, "element not integral at sigma");
    v[i] = rat_num(e);
  }
  IntVec red = lattice_reduce(hnf, std::move(v));
  CanonicalCosetRep rep;
  rep.coords.resize(f.n);
  for (std::size_t i = 0; i < f.n; ++i) rep.coords[i] = Rat(red[i]) / scale;
  return rep;
}

RingFraction coset_rep_fraction(const FieldDescriptor& f, const CanonicalCosetRep& rep) {
  // The representative lies in O[1/x] by construction (it differs from the
  // input by a lattice element), so some x-power clears its denominators:
  // find the smallest l with coords * A_x^l integral.
  Int dpow = 1;
  long sigma = 0;
  for (const Rat& c : rep.coords) {
    Int den = rat_den(c);
    while (dpow % den != 0) {
      dpow *= f.d;
      ++sigma;
    }
  }
  IntVec v(f.n);
  for (std::size_t i = 0; i < f.n; ++i) {
    Rat scaled = rep.coords[i] * dpow;
    check(rat_den(scaled) == 1, Err::Internal, "coset rep denominators");
    v[i] = rat_num(scaled);
  }
  // rep * x^l = (v * A_x^l) / d^sigma
  long cap = sigma * static_cast<long>(f.n) + 8;
  for (long l = 0; l <= cap; ++l) {
    bool integral = true;
    for (const Int& c : v)
      if (c % dpow != 0) {
        integral = false;
        break;
      }
    if (integral) {
      IntVec a(f.n);
      for (std::size_t i = 0; i < f.n; ++i) a[i] = v[i] / dpow;
      return rf_make(f, OrderElement{std::move(a)}, l);
    }
    v = vec_mul(v, f.companion);
  }
  fail(Err::Internal, "coset representative outside O[1/x]");
}

std::string coset_to_string(const CanonicalCosetRep& rep) {
  std::string s;
  for (std::size_t i = 0; i < rep.coords.size(); ++i) {
    if (i) s += ",";
    s += rat_to_string(rep.coords[i]);
  }
  return s;
}

bool same_coset(const FieldDescriptor& f, const RingFraction& a, const RingFraction& b, long n) {
  RingFraction diff = rf_sub(f, a, b);
  RingFraction shifted = rf_shift(f, diff, -n);
  return shifted.denom_exp == 0;
}

RatVec affine_action(const FieldDescriptor& f, const GammaElement& g, const RatVec& w) {
  check(w.size() == f.n, Err::DimensionMismatch, "affine action");
  RatMat ak = mat_pow_signed(f.companion, g.k);
  RatVec r = vec_mul(w, ak);
  RatVec bc = rf_coords(f, g.b);
  for (std::size_t i = 0; i < f.n; ++i) r[i] += bc[i];
  return r;
}

std::vector<double> affine_action_d(const FieldDescriptor& f, const GammaElement& g,
                                    const std::vector<double>& w) {
  RatVec wq(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) wq[i] = Rat(w[i]);
  RatVec r = affine_action(f, g, wq);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = to_double(r[i]);
  return out;
}

std::pair<RatVec, long> Embedding::apply(const RatVec& b, long k) const {
  check(b.size() == target.n, Err::DimensionMismatch, "embedding argument");
  return {vec_mul(b, conjugator_inv), k};
}

Embedding build_embedding(const IntMat& m) {
  check(m.rows == m.cols, Err::DimensionMismatch, "embedding source");
  std::size_t n = m.rows;
  IntVec cp = char_poly(m);
  Int det = mat_det(m);
  check(abs(det) > 1, Err::DeterminantTooSmall, "|det M| must exceed 1");

  IntVec field_coeffs(cp.begin(), cp.end() - 1);
  Embedding e;
  e.source_matrix = m;
  e.target = define_field(field_coeffs);

  // T has rows v, vM, ..., vM^{n-1} for v = e_1; any nonzero vector is cyclic
  // because the characteristic polynomial is irreducible.
  RatMat t(n, n);
  IntVec row(n);
  row[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = Rat(row[j]);
    if (i + 1 < n) row = vec_mul(row, m);
  }
  e.conjugator = t;
  try {
    e.conjugator_inv = mat_inverse(t);
  } catch (const Error&) {
    fail(Err::SingularConjugator, "cyclic vector produced singular T");
  }

  // T M T^{-1} = companion(char M)
  RatMat lhs = mat_mul(mat_mul(t, RatMat::from(m)), e.conjugator_inv);
  check(lhs == RatMat::from(e.target.companion), Err::Internal, "conjugation identity");
  return e;
}

std::pair<RatVec, long> k_semidirect_mul(const FieldDescriptor& f, const std::pair<RatVec, long>& a,
                                         const std::pair<RatVec, long>& b) {
  RatMat ak = mat_pow_signed(f.companion, a.second);
  RatVec shifted = vec_mul(b.first, ak);
  RatVec sum = a.first;
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += shifted[i];
  return {sum, a.second + b.second};
}

}  // namespace horolab
