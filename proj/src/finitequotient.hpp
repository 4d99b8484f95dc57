#pragma once

// Finite-quotient machinery: the groups (Z/s)^n x|_{M_s} Z/r, the reduction
// homomorphism from the arithmetic group, subgroup enumeration up to
// conjugacy, hyper-elementary witnesses, the trichotomy check, the (s, r)
// search, and the two contraction certificates.

#include <optional>
#include <vector>

#include "flowspace.hpp"

namespace horolab {

/// Multiplication table of a finite group; elements are 0..size-1, id = 0.
struct GroupTable {
  std::size_t size = 0;
  std::vector<std::uint32_t> mul;
  std::vector<std::uint32_t> inv;

  std::uint32_t times(std::uint32_t a, std::uint32_t b) const { return mul[a * size + b]; }
};

/// Order of GL_n(Z/s): multiplicative over prime powers,
/// |GL_n(Z/p^e)| = p^{(e-1) n^2} prod_{i<n} (p^n - p^i).
Int gl_order(std::size_t n, const Int& s);

struct FiniteAffineGroup {
  long s = 0, r = 0;
  std::size_t n = 0;
  IntMat m_s;                  // A_x reduced mod s
  std::vector<IntMat> m_pow;   // M_s^t, t in [0, r)
  GroupTable table;

  std::uint32_t encode(const std::vector<long>& v, long t) const;
  void decode(std::uint32_t e, std::vector<long>& v, long& t) const;
  std::uint32_t identity() const { return 0; }
};

/// Requires gcd(s, d) = 1 and M_s^r = 1.
FiniteAffineGroup build_quotient(const FieldDescriptor& f, long s, long r);

/// alpha_m on elements: (a/x^l, k) -> (coords(a) M_s^{-l} mod s, k mod r).
std::uint32_t reduce_element(const FiniteAffineGroup& g, const FieldDescriptor& f,
                             const GammaElement& gamma);

struct SubgroupRecord {
  std::vector<std::uint32_t> elements;  // sorted; the class representative
  std::size_t class_size = 1;          // conjugates of this subgroup
};

/// One record per conjugacy class of subgroups (cyclic extension method).
std::vector<SubgroupRecord> subgroup_enumerate(const GroupTable& g,
                                               std::size_t element_bound = 50000);

/// All subgroups, no conjugacy bookkeeping; oracle for small groups.
std::vector<std::vector<std::uint32_t>> subgroup_enumerate_naive(const GroupTable& g);

struct HyperWitness {
  std::vector<std::uint32_t> cyclic_normal;
  long p = 0;
};

/// Searches cyclic normal C with H/C a p-group and gcd(|C|, p) = 1.
std::optional<HyperWitness> is_hyperelementary(const GroupTable& g,
                                               const std::vector<std::uint32_t>& h);

struct TrichotomyRow {
  std::size_t class_id = 0;
  std::size_t order = 0;
  bool hyper = false;
  std::size_t pr_order = 0;
  long pr_index = 0;
  long k_max = 0;       // largest k | s with H cap translations inside k(Z/s)^n
  char case_label = '-';  // 'a', 'b', '-' failing, 'x' exempt (not hyper-elementary)
};

struct HgpReport {
  bool pass = false;
  long n_required = 0;
  std::vector<TrichotomyRow> rows;
  long failing_class = -1;
};

HgpReport hgp_check(const FiniteAffineGroup& g, long n_required,
                    std::size_t element_bound = 50000);

struct SrBounds {
  long s_max = 4000;
  long group_bound = 5000;  // |G| cap for the search (the full multiplication
                            // table is materialized per candidate)
};

/// Smallest s = 1 mod d with r = gl_order(n, s) passing hgp_check at level N.
std::pair<long, long> find_sr(const FieldDescriptor& f, long n_required, const SrBounds& bounds);

struct CaseAReport {
  bool pass = false;
  long m = 0;
  double cell_scale = 0;
  double max_scaled_displacement = 0;
  std::size_t samples = 0;
  bool generators_unit_shift = false;  // each generator moves k by at most 1
};

/// Projection-to-shift certificate: words of length < m displace the scaled
/// line coordinate by less than 1/m (cell scale 1/(m^2 c0)).
CaseAReport case_a_certificate(const FieldDescriptor& f, long m, std::size_t samples, Rng& rng,
                               double c0 = 1.0);

struct CaseBReport {
  long k = 0;
  double tau = 0;
  double max_distance = 0;  // max certified upper fs-distance over the sample
  std::size_t samples = 0;
};

/// Distances of flowed embeddings of contracted orbit points: eta(g) mapped
/// through the inverse k-scaling, then the flowed embedding; the sample is
/// seeded, so runs with different k on the same seed are comparable.
CaseBReport case_b_contraction_probe(const FieldDescriptor& f, const FiberForms& forms, long m,
                                     long k, double tau, std::size_t samples, Rng rng,
                                     const QuadratureSpec& q, const DistParams& par);

/// Psi_tau(F_k^{-1}(eta(g))), the composite the case (b) probe measures.
HorizontalGeodesic case_b_embed(const FieldDescriptor& f, const GammaElement& g, long k,
                                double tau);

/// Smallest r >= 1 with M_s^r = 1 (throws BadExponent past the cap).
long order_of_reduction(const FieldDescriptor& f, long s, long cap = 100000);

/// Random word of length < m in the standard generators (+-e_i, 0), (0, +-1).
GammaElement random_word(const FieldDescriptor& f, long m, Rng& rng);

}  // namespace horolab
