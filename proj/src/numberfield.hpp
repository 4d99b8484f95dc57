#pragma once

// Exact arithmetic in K = Q[x]/m(x) and the order Z[alpha]: field descriptors,
// order elements, elements of O[1/x], the group O[1/x]^+ x| Z with its affine
// action, canonical coset representatives mod x^n O, and the conjugation
// embedding (Z[1/d])^n x|_M Z -> K^+ x|_x Z.

#include <optional>
#include <string>
#include <vector>

#include "basics.hpp"

namespace horolab {

/// Monic integer polynomial m(x) = x^n + a_{n-1}x^{n-1} + ... + a_0 together
/// with the derived data every module needs.  Immutable after construction.
struct FieldDescriptor {
  IntVec coeffs;   // a_0 .. a_{n-1}
  std::size_t n = 0;
  Int d;           // |a_0|
  IntMat companion;  // A_x, row convention: coords(u * alpha) = coords(u) * A_x

  std::string poly_string() const;
};

/// define_field: validates monic/irreducible/|a_0| > 1 and builds A_x.
FieldDescriptor define_field(const IntVec& coeffs);

/// Element of the order Z[alpha], coordinates w.r.t. 1, alpha, ..., alpha^{n-1}.
struct OrderElement {
  IntVec coords;

  bool is_zero() const;
  bool operator==(const OrderElement& o) const = default;
};

OrderElement oe_zero(const FieldDescriptor& f);
OrderElement oe_one(const FieldDescriptor& f);
OrderElement oe_basis(const FieldDescriptor& f, std::size_t i);  // alpha^i
OrderElement oe_from_int(const FieldDescriptor& f, const Int& c);
OrderElement oe_add(const OrderElement& a, const OrderElement& b);
OrderElement oe_sub(const OrderElement& a, const OrderElement& b);
OrderElement oe_neg(const OrderElement& a);
OrderElement oe_scale(const Int& c, const OrderElement& a);
OrderElement oe_mul(const FieldDescriptor& f, const OrderElement& a, const OrderElement& b);
OrderElement mul_by_alpha(const FieldDescriptor& f, const OrderElement& a);

/// Exact division by alpha: returns c with c*alpha = a, or nothing.
std::optional<OrderElement> x_divide(const FieldDescriptor& f, const OrderElement& a);

/// b = numer / x^denom_exp, an element of O[1/x].  Canonical form: denom_exp
/// is 0 or numer is not divisible by alpha.
struct RingFraction {
  OrderElement numer;
  long denom_exp = 0;

  bool is_zero() const { return numer.is_zero(); }
  bool operator==(const RingFraction& o) const = default;
};

RingFraction rf_make(const FieldDescriptor& f, OrderElement a, long denom_exp);
RingFraction rf_from_order(const OrderElement& a);
RingFraction rf_zero(const FieldDescriptor& f);
RingFraction rf_add(const FieldDescriptor& f, const RingFraction& a, const RingFraction& b);
RingFraction rf_sub(const FieldDescriptor& f, const RingFraction& a, const RingFraction& b);
RingFraction rf_neg(const FieldDescriptor& f, const RingFraction& a);
/// Multiply by x^k (k of either sign).
RingFraction rf_shift(const FieldDescriptor& f, const RingFraction& a, long k);
/// Multiply by an integer scalar.
RingFraction rf_scale(const FieldDescriptor& f, const Int& c, const RingFraction& a);
/// Coordinates in Q^n (denominators are powers of d).
RatVec rf_coords(const FieldDescriptor& f, const RingFraction& a);
std::string rf_to_string(const FieldDescriptor& f, const RingFraction& a);

/// Group element g = (b, k) of O[1/x]^+ x| Z; the matrix picture is
/// [[x^k, b], [0, 1]] and the law is (b1,k1)(b2,k2) = (b1 + x^{k1} b2, k1+k2).
struct GammaElement {
  RingFraction b;
  long k = 0;

  bool operator==(const GammaElement& o) const = default;
};

GammaElement gamma_identity(const FieldDescriptor& f);
GammaElement gamma_make(const FieldDescriptor& f, RingFraction b, long k);
GammaElement gamma_mul(const FieldDescriptor& f, const GammaElement& g1, const GammaElement& g2);
GammaElement gamma_inv(const FieldDescriptor& f, const GammaElement& g);

/// Canonical representative of b modulo x^n O.  Stored as the coordinate
/// vector of the representative (an element of O[1/x], denominators d-powers).
struct CanonicalCosetRep {
  RatVec coords;

  bool operator==(const CanonicalCosetRep& o) const = default;
};

CanonicalCosetRep coset_reduce(const FieldDescriptor& f, const RingFraction& b, long n);
RingFraction coset_rep_fraction(const FieldDescriptor& f, const CanonicalCosetRep& rep);
std::string coset_to_string(const CanonicalCosetRep& rep);

/// Do b and b' lie in the same coset of x^n O (i.e. x^{-n}(b - b') integral)?
bool same_coset(const FieldDescriptor& f, const RingFraction& a, const RingFraction& b, long n);

/// Affine action (*) on row vectors: w -> w * A_x^k + coords(b).
RatVec affine_action(const FieldDescriptor& f, const GammaElement& g, const RatVec& w);
std::vector<double> affine_action_d(const FieldDescriptor& f, const GammaElement& g,
                                    const std::vector<double>& w);

/// Conjugation embedding of (Z[1/d])^n x|_M Z into K^+ x|_x Z for an integer
/// matrix M with |det M| = d > 1 and irreducible characteristic polynomial.
struct Embedding {
  IntMat source_matrix;   // M
  RatMat conjugator;      // T with T M T^{-1} = companion(char M)
  RatMat conjugator_inv;  // rows are the new basis in alpha-power coordinates
  FieldDescriptor target;

  /// Image of (b, k): coordinates of the K-element plus the shift.
  std::pair<RatVec, long> apply(const RatVec& b, long k) const;
};

Embedding build_embedding(const IntMat& m);

/// Group law on embedding images, (b1,k1)(b2,k2) = (b1 + b2 A^{k1}, k1+k2),
/// for vectors of K-coordinates.
std::pair<RatVec, long> k_semidirect_mul(const FieldDescriptor& f, const std::pair<RatVec, long>& a,
                                         const std::pair<RatVec, long>& b);

}  // namespace horolab
