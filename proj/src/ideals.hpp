#pragma once

// Integral ideals of Z[alpha] as Hermite-normal-form lattices, the
// factorization of x Z[alpha] into primes above x (Kummer-Dedekind at
// p-maximal primes only), and prime valuations on O[1/x].

#include <vector>

#include "basics.hpp"
#include "numberfield.hpp"

namespace horolab {

/// Integral ideal represented by the row-HNF basis of its coordinate lattice.
struct IdealHNF {
  IntMat basis;  // n x n, full rank

  Int norm() const;  // product of the diagonal = index in the order
  bool operator==(const IdealHNF& o) const = default;
};

IdealHNF ideal_from_generators(const FieldDescriptor& f, const std::vector<OrderElement>& gens);
IdealHNF ideal_one(const FieldDescriptor& f);
IdealHNF ideal_mul(const FieldDescriptor& f, const IdealHNF& i, const IdealHNF& j);
IdealHNF ideal_pow(const FieldDescriptor& f, const IdealHNF& i, unsigned e);
bool contains(const IdealHNF& i, const OrderElement& a);

/// One prime above x: p rational prime, g an irreducible factor of m mod p
/// (lifted), P = (p, g(alpha)), with ramification e, residue degree f, and
/// k = v_P(alpha) > 0.
struct PrimeFactor {
  Int p;
  IntVec gpoly;  // integer lift of the monic factor mod p
  int e = 0;
  int f = 0;
  int k = 0;
  IdealHNF ideal;

  // power ladder ideal^1..ideal^t, grown eagerly to a working bound;
  // read-only after construction, so sharing across threads is safe.
  std::vector<IdealHNF> powers;

  Int residue_norm() const { return ideal.norm(); }  // p^f
};

/// Dedekind's criterion: is Z[alpha] maximal at p?
bool dedekind_p_maximal(const FieldDescriptor& fd, const Int& p);

/// Factor x O = prod P_i^{k_i}; rejects fields that are not p-maximal at some
/// p | d and verifies prod Norm(P_i)^{k_i} = d.
std::vector<PrimeFactor> factor_x(const FieldDescriptor& fd);

/// v_P(a) for a nonzero order element, by membership in the power ladder.
int prime_valuation_order(const FieldDescriptor& fd, const PrimeFactor& P, const OrderElement& a);

/// v_P(b) = v_P(numer) - denom_exp * k for nonzero b in O[1/x].
int prime_valuation(const FieldDescriptor& fd, const PrimeFactor& P, const RingFraction& b);

/// Representatives of O/P (HNF box of the prime's lattice), |.| = p^f.
std::vector<OrderElement> residue_reps(const FieldDescriptor& fd, const PrimeFactor& P);

/// An element pi_s of O[1/x] with v_P(pi_s) = s exactly (any sign of s).
RingFraction uniformizer_power(const FieldDescriptor& fd, const PrimeFactor& P, long s);

}  // namespace horolab
