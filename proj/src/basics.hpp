#pragma once

// Exact integer/rational linear algebra and small number-theory helpers
// shared by every module: HNF/SNF, determinants, characteristic polynomials,
// factorization of univariate polynomials over F_p and over Q (desk scale),
// and a deterministic RNG used by all sampling suites.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace horolab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

/// Floor division (round toward minus infinity); b > 0 assumed.
Int floor_div(const Int& a, const Int& b);

double to_double(const Int& x);
double to_double(const Rat& q);

// ---------------------------------------------------------------------------
// Dense row-major matrices over Int / Rat.  Row-vector convention throughout:
// vectors multiply matrices from the left, v' = v * M.

struct IntMat {
  std::size_t rows = 0, cols = 0;
  IntVec a;

  IntMat() = default;
  IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static IntMat identity(std::size_t n);
  bool operator==(const IntMat& o) const = default;
};

struct RatMat {
  std::size_t rows = 0, cols = 0;
  RatVec a;

  RatMat() = default;
  RatMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Rat& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static RatMat identity(std::size_t n);
  static RatMat from(const IntMat& m);
  bool operator==(const RatMat& o) const = default;
};

IntMat mat_mul(const IntMat& x, const IntMat& y);
IntVec vec_mul(const IntVec& v, const IntMat& m);  // v * m
IntMat mat_pow(const IntMat& m, unsigned e);
Int mat_det(const IntMat& m);  // fraction-free (Bareiss)

RatMat mat_mul(const RatMat& x, const RatMat& y);
RatVec vec_mul(const RatVec& v, const RatMat& m);
RatMat mat_inverse(const RatMat& m);  // throws SingularMatrix
RatMat mat_pow_signed(const IntMat& m, long e);  // m^e over Q, e may be negative

/// Coefficients c_0..c_n of det(xI - M) = c_0 + c_1 x + ... + c_n x^n (c_n = 1).
IntVec char_poly(const IntMat& m);

// ---------------------------------------------------------------------------
// Lattices: rows of an IntMat span a sublattice of Z^n.

/// Row Hermite normal form of the lattice spanned by the input rows.
/// Result rows are echelon (pivot of row i strictly right of row i-1), pivots
/// positive, entries above each pivot reduced into [0, pivot).  Zero rows are
/// dropped, so the result has `rank` rows.
IntMat hnf_rows(const IntMat& gens);

/// Full-rank n x n HNF; throws if the rows do not span a finite-index lattice.
IntMat hnf_full_rank(const IntMat& gens, Err on_fail, const std::string& what);

/// Membership of v in the row lattice of a full-rank upper-triangular HNF.
bool lattice_contains(const IntMat& hnf, const IntVec& v);

/// Unique representative of v modulo the row lattice, inside the half-open
/// fundamental box of the HNF basis.
IntVec lattice_reduce(const IntMat& hnf, IntVec v);

/// All |det| representatives of Z^n modulo the row lattice (HNF box).
std::vector<IntVec> lattice_box(const IntMat& hnf);

/// Diagonal of the Smith normal form (nonnegative, divisibility chain).
IntVec snf_diagonal(IntMat m);

// ---------------------------------------------------------------------------
// Polynomials over F_p (p small) and integer polynomial utilities.
// A polynomial is a coefficient vector c[0] + c[1] x + ..., normalized so the
// leading coefficient is nonzero (empty vector = zero polynomial).

using PolyP = std::vector<std::int64_t>;

PolyP poly_mod_p(const IntVec& coeffs, std::int64_t p);
PolyP poly_mul_p(const PolyP& f, const PolyP& g, std::int64_t p);
PolyP poly_rem_p(PolyP f, const PolyP& g, std::int64_t p);
PolyP poly_gcd_p(PolyP f, PolyP g, std::int64_t p);  // monic result
PolyP poly_derivative_p(const PolyP& f, std::int64_t p);
PolyP poly_powmod_p(PolyP base, Int e, const PolyP& mod, std::int64_t p);

/// Monic irreducible factors with multiplicities, deterministic order.
/// Exhaustive divisor search when p^deg(f) <= 10^6, else distinct-degree plus
/// equal-degree splitting (derandomized by enumerating sparse test elements).
std::vector<std::pair<PolyP, int>> factor_poly_p(PolyP f, std::int64_t p);

bool poly_irreducible_p(const PolyP& f, std::int64_t p);

/// Irreducibility over Q of a monic integer polynomial: reductions mod small
/// primes not dividing disc(m) first, bounded integer factor search fallback.
bool irreducible_over_q(const IntVec& coeffs_with_leading_one);

std::vector<std::int64_t> small_primes(std::size_t count);
std::vector<std::pair<Int, int>> factor_integer(Int n);  // n > 0, trial division
Int gcd_int(Int a, Int b);

/// Inverse of a modulo m (gcd(a, m) = 1), in [0, m).
Int inv_mod(const Int& a, const Int& m);

// ---------------------------------------------------------------------------
// Deterministic RNG.  std::mt19937_64 has a pinned algorithm; the helpers
// below avoid std::uniform_*_distribution, whose output is
// implementation-defined, so fixed seeds give identical streams everywhere.

class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double real01();
  /// Derive an independent stream (suite isolation).
  Rng fork(const std::string& tag) const;

private:
  std::uint64_t s_[4];
};

std::string int_to_string(const Int& x);
std::string rat_to_string(const Rat& q);

}  // namespace horolab
