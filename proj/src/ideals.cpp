#include "ideals.hpp"

#include <algorithm>

namespace horolab {

Int IdealHNF::norm() const {
  Int n = 1;
  for (std::size_t i = 0; i < basis.rows; ++i) {
    Int diag = 0;
    for (std::size_t j = 0; j < basis.cols; ++j)
      if (basis.at(i, j) != 0) {
        diag = basis.at(i, j);
        break;
      }
    n *= diag;
  }
  return n;
}

IdealHNF ideal_from_generators(const FieldDescriptor& f, const std::vector<OrderElement>& gens) {
  bool all_zero = std::all_of(gens.begin(), gens.end(),
                              [](const OrderElement& g) { return g.is_zero(); });
  check(!gens.empty() && !all_zero, Err::ZeroIdeal, "no nonzero generator");
  // lattice spanned by g * alpha^j for every generator g and 0 <= j < n
  IntMat rows(gens.size() * f.n, f.n);
  std::size_t r = 0;
  for (const OrderElement& g : gens) {
    OrderElement cur = g;
    for (std::size_t j = 0; j < f.n; ++j) {
      for (std::size_t c = 0; c < f.n; ++c) rows.at(r, c) = cur.coords[c];
      ++r;
      if (j + 1 < f.n) cur = mul_by_alpha(f, cur);
    }
  }
  return {hnf_full_rank(rows, Err::ZeroIdeal, "generators span a rank-deficient lattice")};
}

IdealHNF ideal_one(const FieldDescriptor& f) { return {IntMat::identity(f.n)}; }

IdealHNF ideal_mul(const FieldDescriptor& f, const IdealHNF& i, const IdealHNF& j) {
  std::size_t n = f.n;
  check(i.basis.cols == n && j.basis.cols == n, Err::DimensionMismatch, "ideal product");
  IntMat rows(n * n, n);
  for (std::size_t a = 0; a < n; ++a) {
    OrderElement ea{IntVec(i.basis.a.begin() + a * n, i.basis.a.begin() + (a + 1) * n)};
    for (std::size_t b = 0; b < n; ++b) {
      OrderElement eb{IntVec(j.basis.a.begin() + b * n, j.basis.a.begin() + (b + 1) * n)};
      OrderElement prod = oe_mul(f, ea, eb);
      for (std::size_t c = 0; c < n; ++c) rows.at(a * n + b, c) = prod.coords[c];
    }
  }
  return {hnf_full_rank(rows, Err::Internal, "ideal product rank")};
}

IdealHNF ideal_pow(const FieldDescriptor& f, const IdealHNF& i, unsigned e) {
  IdealHNF r = ideal_one(f);
  for (unsigned t = 0; t < e; ++t) r = ideal_mul(f, r, i);
  return r;
}

bool contains(const IdealHNF& i, const OrderElement& a) {
  return lattice_contains(i.basis, a.coords);
}

bool dedekind_p_maximal(const FieldDescriptor& fd, const Int& p) {
  std::int64_t pp = p.convert_to<std::int64_t>();
  IntVec monic = fd.coeffs;
  monic.push_back(1);
  PolyP mbar = poly_mod_p(monic, pp);
  auto factors = factor_poly_p(mbar, pp);

  // g = prod g_i, h = prod g_i^{e_i - 1}, F = (g*h - m)/p; maximal at p
  // iff gcd(F mod p, g, h) = 1.
  PolyP gbar{1}, hbar{1};
  for (auto& [gi, ei] : factors) {
    gbar = poly_mul_p(gbar, gi, pp);
    for (int t = 1; t < ei; ++t) hbar = poly_mul_p(hbar, gi, pp);
  }
  // integer lifts with coefficients in [0, p)
  auto lift = [&](const PolyP& q) {
    IntVec v(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) v[i] = q[i];
    return v;
  };
  IntVec g = lift(gbar), h = lift(hbar);
  // integer product g*h minus m, divided by p
  IntVec prod(g.size() + h.size() - 1);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) prod[i + j] += g[i] * h[j];
  IntVec diff = prod;
  diff.resize(std::max(diff.size(), monic.size()));
  for (std::size_t i = 0; i < monic.size(); ++i) diff[i] -= monic[i];
  IntVec fvec(diff.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    check(diff[i] % p == 0, Err::Internal, "Dedekind criterion: g*h != m mod p");
    fvec[i] = diff[i] / p;
  }
  PolyP fbar = poly_mod_p(fvec, pp);
  PolyP g1 = poly_gcd_p(fbar, gbar, pp);
  PolyP g2 = poly_gcd_p(g1, hbar, pp);
  return g2.size() == 1;
}

namespace {
OrderElement eval_poly_at_alpha(const FieldDescriptor& fd, const IntVec& poly) {
  OrderElement acc = oe_zero(fd);
  OrderElement apow = oe_one(fd);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    acc = oe_add(acc, oe_scale(poly[i], apow));
    if (i + 1 < poly.size()) apow = mul_by_alpha(fd, apow);
  }
  return acc;
}

constexpr int kPowerLadderDepth = 48;
}  // namespace

int prime_valuation_order(const FieldDescriptor& fd, const PrimeFactor& P, const OrderElement& a) {
  check(!a.is_zero(), Err::ZeroElement, "valuation of zero");
  int v = 0;
  IdealHNF beyond;  // P^{v+1} once v is past the eager ladder (P stays const)
  bool beyond_valid = false;
  while (true) {
    const IdealHNF* pw;
    if (v < static_cast<int>(P.powers.size())) {
      pw = &P.powers[v];
    } else {
      if (!beyond_valid) {
        beyond = P.powers.empty() ? ideal_pow(fd, P.ideal, static_cast<unsigned>(v) + 1)
                                  : ideal_mul(fd, P.powers.back(), P.ideal);
        beyond_valid = true;
      } else {
        beyond = ideal_mul(fd, beyond, P.ideal);
      }
      pw = &beyond;
    }
    if (!contains(*pw, a)) return v;
    ++v;
  }
}

int prime_valuation(const FieldDescriptor& fd, const PrimeFactor& P, const RingFraction& b) {
  check(!b.is_zero(), Err::ZeroElement, "valuation of zero");
  return prime_valuation_order(fd, P, b.numer) - static_cast<int>(b.denom_exp) * P.k;
}

std::vector<PrimeFactor> factor_x(const FieldDescriptor& fd) {
  std::vector<PrimeFactor> out;
  auto dfac = factor_integer(fd.d);
  for (auto& [p, e_unused] : dfac) {
    check(dedekind_p_maximal(fd, p), Err::NotMaximalAtP,
          "Z[alpha] is not maximal at " + p.str() + " for m = " + fd.poly_string());
    std::int64_t pp = p.convert_to<std::int64_t>();
    IntVec monic = fd.coeffs;
    monic.push_back(1);
    auto factors = factor_poly_p(poly_mod_p(monic, pp), pp);
    for (auto& [gbar, mult] : factors) {
      PrimeFactor pf;
      pf.p = p;
      pf.gpoly.assign(gbar.begin(), gbar.end());
      pf.e = mult;
      pf.f = static_cast<int>(gbar.size()) - 1;
      OrderElement galpha = eval_poly_at_alpha(fd, pf.gpoly);
      std::vector<OrderElement> gens{oe_from_int(fd, p)};
      if (!galpha.is_zero()) gens.push_back(galpha);
      pf.ideal = ideal_from_generators(fd, gens);
      check(pf.ideal.norm() == pow(p, static_cast<unsigned>(pf.f)), Err::FactorizationMismatch,
            "Norm(P) != p^f");
      // ladder P^1..P^depth, eager so later reads are lock-free
      pf.powers.push_back(pf.ideal);
      for (int t = 1; t < kPowerLadderDepth; ++t)
        pf.powers.push_back(ideal_mul(fd, pf.powers.back(), pf.ideal));
      OrderElement alpha = fd.n > 1 ? oe_basis(fd, 1) : oe_from_int(fd, -fd.coeffs[0]);
      pf.k = prime_valuation_order(fd, pf, alpha);
      if (pf.k > 0) out.push_back(std::move(pf));
    }
  }
  // consistency: prod Norm(P_i)^{k_i} = d = |O/xO|
  Int prod = 1;
  for (const auto& pf : out) prod *= pow(pf.residue_norm(), static_cast<unsigned>(pf.k));
  check(prod == fd.d, Err::FactorizationMismatch, "prod Norm(P_i)^{k_i} != d");
  return out;
}

std::vector<OrderElement> residue_reps(const FieldDescriptor& fd, const PrimeFactor& P) {
  (void)fd;
  std::vector<OrderElement> reps;
  for (IntVec& v : lattice_box(P.ideal.basis)) reps.push_back({std::move(v)});
  return reps;
}

RingFraction uniformizer_power(const FieldDescriptor& fd, const PrimeFactor& P, long s) {
  if (s == 0) return rf_from_order(oe_one(fd));
  // find a basis row of P with valuation exactly 1 (one exists: otherwise
  // every generator would lie in P^2-locally and P could not have v_P = 1)
  OrderElement pi;
  bool found = false;
  for (std::size_t i = 0; i < P.ideal.basis.rows && !found; ++i) {
    OrderElement cand{IntVec(P.ideal.basis.a.begin() + i * fd.n,
                             P.ideal.basis.a.begin() + (i + 1) * fd.n)};
    if (prime_valuation_order(fd, P, cand) == 1) {
      pi = cand;
      found = true;
    }
  }
  check(found, Err::Internal, "no valuation-1 generator in prime basis");
  if (s > 0) {
    OrderElement r = oe_one(fd);
    for (long t = 0; t < s; ++t) r = oe_mul(fd, r, pi);
    return rf_from_order(r);
  }
  // s < 0: pi^{s + L*k} / x^L with L minimal making the exponent nonnegative
  long L = (-s + P.k - 1) / P.k;
  long expo = s + L * P.k;
  OrderElement r = oe_one(fd);
  for (long t = 0; t < expo; ++t) r = oe_mul(fd, r, pi);
  RingFraction out{r, L};  // intentionally not canonicalized via rf_make:
  // v_P(out) = expo - L*k = s by construction, but rf_make would not change
  // that; canonicalize anyway for uniqueness of representation
  return rf_make(fd, out.numer, out.denom_exp);
}

}  // namespace horolab
