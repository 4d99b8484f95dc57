#pragma once

// The tree T_d of height/coset pairs with its group action, distances and
// stabilizers; explicit finite trees with elementary Stallings folds; the
// per-prime trees T_{P^k} via the closed-form coarsening map; and the
// diagonal-subspace identification with T_d.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ideals.hpp"
#include "numberfield.hpp"

namespace horolab {

// ---------------------------------------------------------------------------
// T_d

/// Vertex (height n, canonical coset of b mod x^n O).  The end e_x sits at
/// height -> -infinity; each vertex has one parent below and d children above.
struct TreeVertex {
  long height = 0;
  CanonicalCosetRep coset;

  bool operator==(const TreeVertex& o) const = default;
};

TreeVertex base_vertex(const FieldDescriptor& f);
TreeVertex vertex(const FieldDescriptor& f, long n, const RingFraction& b);
TreeVertex parent(const FieldDescriptor& f, const TreeVertex& v);
std::vector<TreeVertex> children(const FieldDescriptor& f, const TreeVertex& v);
std::string vertex_key(const TreeVertex& v);

/// (n, [b]) -> (n + k, [x^k b + b0]).
TreeVertex act_vertex(const FieldDescriptor& f, const GammaElement& g, const TreeVertex& v);

/// Scalar part of the bigger ambient group: (n, [b]) -> (n, [u b]), u coprime
/// to d (acts as a tree automorphism fixing heights).
TreeVertex scalar_mul_vertex(const FieldDescriptor& f, const Int& u, const TreeVertex& v);
/// Inverse of scalar_mul_vertex.
TreeVertex scalar_div_vertex(const FieldDescriptor& f, const Int& u, const TreeVertex& v);

long busemann(const TreeVertex& v);
TreeVertex meet(const FieldDescriptor& f, TreeVertex a, TreeVertex b);
long tree_distance(const FieldDescriptor& f, const TreeVertex& u, const TreeVertex& v);

bool stabilizer_test(const FieldDescriptor& f, const GammaElement& g, const TreeVertex& v);
std::vector<GammaElement> stabilizer_basis(const FieldDescriptor& f, const TreeVertex& v);
GammaElement transitive_witness(const FieldDescriptor& f, const TreeVertex& u,
                                const TreeVertex& v);

/// Ancestor `steps` levels below v (iterated parent).
TreeVertex ancestor(const FieldDescriptor& f, TreeVertex v, long steps);

/// Uniform random vertex reachable from the base in `steps` parent/child moves.
TreeVertex random_vertex(const FieldDescriptor& f, Rng& rng, long steps);

/// Random group element with denominator exponent <= lmax and |shift| <= kmax.
GammaElement random_gamma(const FieldDescriptor& f, Rng& rng, long lmax, long kmax,
                          long coeff_range = 9);

/// Breadth-first ball in T_d.
struct TreeBall {
  std::vector<TreeVertex> verts;
  std::vector<long> parent_idx;  // -1 for vertices whose parent is outside
  std::map<std::string, std::size_t> index;
};

TreeBall build_ball(const FieldDescriptor& f, const TreeVertex& center, long radius);

/// DOT digraph of the ball, edges oriented parent -> child.
std::string export_tree_dot(const FieldDescriptor& f, long radius);

// ---------------------------------------------------------------------------
// Explicit finite trees and elementary folds

struct FiniteTree {
  std::size_t n_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::size_t> degrees() const;
  bool is_tree() const;  // connected and acyclic
};

/// Identify edges e1 and e2 (indices into edges), which must share a vertex;
/// the far endpoints merge.  The quotient of a tree is again a tree.
FiniteTree elementary_fold(const FiniteTree& t, std::size_t e1, std::size_t e2);

// ---------------------------------------------------------------------------
// Per-prime trees T_{P^k}

/// Vertex of the tree T_{P^k} associated with one prime above x: level t and
/// a representative b, where two representatives agree iff
/// v_P(b - b') >= k*t - k + 1.  fold_k = 1 gives the plain tree T_P.
struct PrimeTreeVertex {
  long level = 0;
  RingFraction rep;
};

/// One prime tree (fixed prime and folding exponent).
struct PrimeTree {
  const FieldDescriptor* field;
  const PrimeFactor* prime;
  int fold_k = 1;

  long rep_threshold(long level) const {
    return static_cast<long>(fold_k) * level - fold_k + 1;
  }
  bool equal(const PrimeTreeVertex& a, const PrimeTreeVertex& b) const;
  PrimeTreeVertex base() const;
  PrimeTreeVertex parent(const PrimeTreeVertex& v) const;
  std::vector<PrimeTreeVertex> children(const PrimeTreeVertex& v) const;
  /// Action of [[a, c],[0,1]] with a = u * x^j (u integer, v_P(u) = 0):
  /// level shift v_P(a)/fold_k, rep -> a*rep + c.
  PrimeTreeVertex act(const Int& u, long j, const RingFraction& c,
                      const PrimeTreeVertex& v) const;
};

/// The coarsening map T_P -> T_{P^k}: (t, b) -> (ceil(t/k), b).
PrimeTreeVertex fold_to_power_image(const PrimeTree& folded, const PrimeTreeVertex& v);

/// Graph distance in a prime tree (meet level via valuations).
long prime_tree_distance(const PrimeTree& t, const PrimeTreeVertex& a, const PrimeTreeVertex& b);

/// Explicit vertex map on the radius-`radius` ball of T_P around its base.
std::vector<std::pair<PrimeTreeVertex, PrimeTreeVertex>> fold_to_power(
    const FieldDescriptor& f, const PrimeFactor& P, int k, long radius);

// ---------------------------------------------------------------------------
// Diagonal subspace of the product of the T_{P_i^{k_i}}

struct DiagonalTuple {
  long level = 0;
  std::vector<PrimeTreeVertex> parts;
};

struct DiagonalModel {
  const FieldDescriptor* field;
  std::vector<PrimeTree> trees;  // one per prime, fold_k = k_i

  bool equal(const DiagonalTuple& a, const DiagonalTuple& b) const;
  DiagonalTuple base() const;
  DiagonalTuple parent(const DiagonalTuple& v) const;
  std::vector<DiagonalTuple> children(const DiagonalTuple& v) const;
  DiagonalTuple act(const GammaElement& g, const DiagonalTuple& v) const;
  /// b |-> (b, ..., b): the candidate isomorphism T_d -> diagonal subspace.
  DiagonalTuple embed(const TreeVertex& v) const;
};

DiagonalModel make_diagonal_model(const FieldDescriptor& f,
                                  const std::vector<PrimeFactor>& primes);

struct DiagonalCheckReport {
  bool isomorphic = false;
  std::size_t ball_size = 0;
  std::size_t diagonal_ball_size = 0;
  long checked_valence = 0;
  std::size_t action_samples = 0;
  bool action_commutes = false;
};

DiagonalCheckReport diagonal_iso_check(const FieldDescriptor& f,
                                       const std::vector<PrimeFactor>& primes, long radius,
                                       Rng& rng, std::size_t action_samples = 100);

}  // namespace horolab
