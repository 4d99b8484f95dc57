#include "tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace horolab {

TreeVertex base_vertex(const FieldDescriptor& f) {
  return vertex(f, 0, rf_zero(f));
}

TreeVertex vertex(const FieldDescriptor& f, long n, const RingFraction& b) {
  return {n, coset_reduce(f, b, n)};
}

TreeVertex parent(const FieldDescriptor& f, const TreeVertex& v) {
  return vertex(f, v.height - 1, coset_rep_fraction(f, v.coset));
}

std::vector<TreeVertex> children(const FieldDescriptor& f, const TreeVertex& v) {
  // children = (n+1, [b + x^n c]) for c ranging over O/xO
  RingFraction b = coset_rep_fraction(f, v.coset);
  IdealHNF xo = ideal_from_generators(
      f, {f.n > 1 ? oe_basis(f, 1) : oe_from_int(f, -f.coeffs[0])});
  std::vector<TreeVertex> out;
  for (IntVec& c : lattice_box(xo.basis)) {
    RingFraction offs = rf_shift(f, rf_from_order(OrderElement{std::move(c)}), v.height);
    out.push_back(vertex(f, v.height + 1, rf_add(f, b, offs)));
  }
  return out;
}

std::string vertex_key(const TreeVertex& v) {
  return std::to_string(v.height) + "|" + coset_to_string(v.coset);
}

TreeVertex act_vertex(const FieldDescriptor& f, const GammaElement& g, const TreeVertex& v) {
  RingFraction b = coset_rep_fraction(f, v.coset);
  RingFraction moved = rf_add(f, rf_shift(f, b, g.k), g.b);
  return vertex(f, v.height + g.k, moved);
}

TreeVertex scalar_mul_vertex(const FieldDescriptor& f, const Int& u, const TreeVertex& v) {
  check(gcd_int(u, f.d) == 1, Err::NotCoprime, "scalar must be coprime to d");
  RingFraction b = coset_rep_fraction(f, v.coset);
  return vertex(f, v.height, rf_scale(f, u, b));
}

TreeVertex scalar_div_vertex(const FieldDescriptor& f, const Int& u, const TreeVertex& v) {
  check(gcd_int(u, f.d) == 1, Err::NotCoprime, "scalar must be coprime to d");
  RingFraction b = coset_rep_fraction(f, v.coset);
  // solve u*c = b mod x^n O: c = u^{-1 mod d^M} * b with M = max(0, n + l)
  long m_exp = std::max(0l, v.height + b.denom_exp);
  if (m_exp == 0) return vertex(f, v.height, rf_zero(f));
  Int modulus = pow(f.d, static_cast<unsigned>(m_exp));
  Int uinv = inv_mod(u, modulus);
  return vertex(f, v.height, rf_scale(f, uinv, b));
}

long busemann(const TreeVertex& v) { return v.height; }

TreeVertex meet(const FieldDescriptor& f, TreeVertex a, TreeVertex b) {
  while (a.height > b.height) a = parent(f, a);
  while (b.height > a.height) b = parent(f, b);
  while (!(a == b)) {
    a = parent(f, a);
    b = parent(f, b);
  }
  return a;
}

long tree_distance(const FieldDescriptor& f, const TreeVertex& u, const TreeVertex& v) {
  TreeVertex m = meet(f, u, v);
  return (u.height - m.height) + (v.height - m.height);
}

bool stabilizer_test(const FieldDescriptor& f, const GammaElement& g, const TreeVertex& v) {
  return act_vertex(f, g, v) == v;
}

GammaElement transitive_witness(const FieldDescriptor& f, const TreeVertex& u,
                                const TreeVertex& v) {
  // h_w = (b_w, n_w) maps the base vertex to w; the witness is h_v h_u^{-1}.
  GammaElement hu = gamma_make(f, coset_rep_fraction(f, u.coset), u.height);
  GammaElement hv = gamma_make(f, coset_rep_fraction(f, v.coset), v.height);
  return gamma_mul(f, hv, gamma_inv(f, hu));
}

std::vector<GammaElement> stabilizer_basis(const FieldDescriptor& f, const TreeVertex& v) {
  std::vector<GammaElement> basis;
  if (v == base_vertex(f)) {
    for (std::size_t i = 0; i < f.n; ++i)
      basis.push_back(gamma_make(f, rf_from_order(oe_basis(f, i)), 0));
    return basis;
  }
  GammaElement h = transitive_witness(f, base_vertex(f), v);
  GammaElement hinv = gamma_inv(f, h);
  for (std::size_t i = 0; i < f.n; ++i) {
    GammaElement e = gamma_make(f, rf_from_order(oe_basis(f, i)), 0);
    basis.push_back(gamma_mul(f, gamma_mul(f, h, e), hinv));
  }
  return basis;
}

TreeVertex ancestor(const FieldDescriptor& f, TreeVertex v, long steps) {
  for (long i = 0; i < steps; ++i) v = parent(f, v);
  return v;
}

TreeVertex random_vertex(const FieldDescriptor& f, Rng& rng, long steps) {
  TreeVertex v = base_vertex(f);
  std::uint64_t d = f.d.convert_to<std::uint64_t>();
  for (long i = 0; i < steps; ++i) {
    std::uint64_t pick = rng.below(d + 1);
    if (pick == 0) {
      v = parent(f, v);
    } else {
      v = children(f, v)[pick - 1];
    }
  }
  return v;
}

GammaElement random_gamma(const FieldDescriptor& f, Rng& rng, long lmax, long kmax,
                          long coeff_range) {
  OrderElement a = oe_zero(f);
  for (std::size_t i = 0; i < f.n; ++i) a.coords[i] = rng.range(-coeff_range, coeff_range);
  long l = lmax > 0 ? rng.range(0, lmax) : 0;
  long k = kmax > 0 ? rng.range(-kmax, kmax) : 0;
  return gamma_make(f, rf_make(f, a, l), k);
}

TreeBall build_ball(const FieldDescriptor& f, const TreeVertex& center, long radius) {
  TreeBall ball;
  std::deque<std::pair<std::size_t, long>> queue;
  ball.verts.push_back(center);
  ball.index[vertex_key(center)] = 0;
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [idx, dist] = queue.front();
    queue.pop_front();
    if (dist == radius) continue;
    TreeVertex cur = ball.verts[idx];
    std::vector<TreeVertex> nbrs = children(f, cur);
    nbrs.push_back(parent(f, cur));
    for (TreeVertex& w : nbrs) {
      std::string key = vertex_key(w);
      if (ball.index.count(key)) continue;
      std::size_t wi = ball.verts.size();
      ball.index[key] = wi;
      ball.verts.push_back(std::move(w));
      queue.emplace_back(wi, dist + 1);
    }
  }
  ball.parent_idx.assign(ball.verts.size(), -1);
  for (std::size_t i = 0; i < ball.verts.size(); ++i) {
    auto it = ball.index.find(vertex_key(parent(f, ball.verts[i])));
    if (it != ball.index.end()) ball.parent_idx[i] = static_cast<long>(it->second);
  }
  return ball;
}

std::string export_tree_dot(const FieldDescriptor& f, long radius) {
  TreeBall ball = build_ball(f, base_vertex(f), radius);
  std::ostringstream os;
  os << "digraph tree {\n";
  for (std::size_t i = 0; i < ball.verts.size(); ++i) {
    os << "  v" << i << " [label=\"(" << ball.verts[i].height << "|"
       << coset_to_string(ball.verts[i].coset) << ")\"];\n";
  }
  // oriented parent -> child
  for (std::size_t i = 0; i < ball.verts.size(); ++i) {
    if (ball.parent_idx[i] >= 0)
      os << "  v" << ball.parent_idx[i] << " -> v" << i << ";\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Finite trees and folds

std::vector<std::size_t> FiniteTree::degrees() const {
  std::vector<std::size_t> deg(n_vertices, 0);
  for (auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

bool FiniteTree::is_tree() const {
  if (n_vertices == 0) return false;
  if (edges.size() != n_vertices - 1) return false;
  std::vector<std::vector<std::size_t>> adj(n_vertices);
  for (auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n_vertices, false);
  std::deque<std::size_t> q{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push_back(w);
      }
  }
  return count == n_vertices;
}

FiniteTree elementary_fold(const FiniteTree& t, std::size_t e1, std::size_t e2) {
  check(e1 < t.edges.size() && e2 < t.edges.size(), Err::NotIncident, "edge index");
  if (e1 == e2) return t;
  auto [a1, b1] = t.edges[e1];
  auto [a2, b2] = t.edges[e2];
  std::size_t shared, far1, far2;
  if (a1 == a2) {
    shared = a1;
    far1 = b1;
    far2 = b2;
  } else if (a1 == b2) {
    shared = a1;
    far1 = b1;
    far2 = a2;
  } else if (b1 == a2) {
    shared = b1;
    far1 = a1;
    far2 = b2;
  } else if (b1 == b2) {
    shared = b1;
    far1 = a1;
    far2 = a2;
  } else {
    fail(Err::NotIncident, "edges do not share a vertex");
  }
  (void)shared;
  // merge far2 into far1, relabel, dedupe edges
  std::vector<std::size_t> label(t.n_vertices);
  for (std::size_t i = 0; i < t.n_vertices; ++i) label[i] = i;
  label[std::max(far1, far2)] = std::min(far1, far2);
  // compress labels to 0..m-1
  std::vector<std::size_t> remap(t.n_vertices, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t i = 0; i < t.n_vertices; ++i)
    if (label[i] == i) remap[i] = next++;
  FiniteTree out;
  out.n_vertices = next;
  std::vector<std::pair<std::size_t, std::size_t>> raw;
  for (auto& [a, b] : t.edges) {
    std::size_t ra = remap[label[a]], rb = remap[label[b]];
    if (ra > rb) std::swap(ra, rb);
    raw.emplace_back(ra, rb);
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  out.edges = std::move(raw);
  check(out.is_tree(), Err::Internal, "fold of a tree must be a tree");
  return out;
}

// ---------------------------------------------------------------------------
// Prime trees

bool PrimeTree::equal(const PrimeTreeVertex& a, const PrimeTreeVertex& b) const {
  if (a.level != b.level) return false;
  RingFraction diff = rf_sub(*field, a.rep, b.rep);
  if (diff.is_zero()) return true;
  return prime_valuation(*field, *prime, diff) >= rep_threshold(a.level);
}

PrimeTreeVertex PrimeTree::base() const { return {0, rf_zero(*field)}; }

PrimeTreeVertex PrimeTree::parent(const PrimeTreeVertex& v) const {
  return {v.level - 1, v.rep};
}

std::vector<PrimeTreeVertex> PrimeTree::children(const PrimeTreeVertex& v) const {
  // Children are the classes at level t+1 inside the class of v.  The
  // quotient has digit coordinates at valuations k*t-k+1 .. k*t, so the
  // offsets are sum_s delta_s pi_s over all digit vectors: q^k children.
  std::vector<OrderElement> digits = residue_reps(*field, *prime);
  long lo = rep_threshold(v.level);
  std::vector<RingFraction> pis;
  for (int j = 0; j < fold_k; ++j)
    pis.push_back(uniformizer_power(*field, *prime, lo + j));
  std::vector<PrimeTreeVertex> out;
  std::vector<std::size_t> idx(fold_k, 0);
  while (true) {
    RingFraction offs = rf_zero(*field);
    for (int j = 0; j < fold_k; ++j) {
      RingFraction prod =
          rf_make(*field, oe_mul(*field, digits[idx[j]], pis[j].numer), pis[j].denom_exp);
      offs = rf_add(*field, offs, prod);
    }
    out.push_back({v.level + 1, rf_add(*field, v.rep, offs)});
    int j = 0;
    while (j < fold_k) {
      if (++idx[j] < digits.size()) break;
      idx[j] = 0;
      ++j;
    }
    if (j == fold_k) break;
  }
  return out;
}

PrimeTreeVertex PrimeTree::act(const Int& u, long j, const RingFraction& c,
                               const PrimeTreeVertex& v) const {
  check(gcd_int(u, Int(prime->p)) == 1, Err::NotCoprime, "type II scalar");
  long val = j * prime->k;  // v_P(u x^j)
  check(val % fold_k == 0, Err::BadExponent, "level shift must be divisible by fold exponent");
  RingFraction moved = rf_add(*field, rf_scale(*field, u, rf_shift(*field, v.rep, j)), c);
  return {v.level + val / fold_k, moved};
}

PrimeTreeVertex fold_to_power_image(const PrimeTree& folded, const PrimeTreeVertex& v) {
  long k = folded.fold_k;
  long t = v.level;
  long folded_level = (t >= 0) ? (t + k - 1) / k : -((-t) / k);  // ceil(t/k)
  return {folded_level, v.rep};
}

long prime_tree_distance(const PrimeTree& t, const PrimeTreeVertex& a, const PrimeTreeVertex& b) {
  long meet_level = std::min(a.level, b.level);
  RingFraction diff = rf_sub(*t.field, a.rep, b.rep);
  if (!diff.is_zero()) {
    long v = prime_valuation(*t.field, *t.prime, diff);
    // ancestors agree at level T iff v >= k T - k + 1, i.e. T <= ceil(v / k)
    long k = t.fold_k;
    long junction = (v >= 0) ? (v + k - 1) / k : -((-v) / k);
    meet_level = std::min(meet_level, junction);
  }
  return (a.level - meet_level) + (b.level - meet_level);
}

std::vector<std::pair<PrimeTreeVertex, PrimeTreeVertex>> fold_to_power(
    const FieldDescriptor& f, const PrimeFactor& P, int k, long radius) {
  check(k >= 1, Err::BadExponent, "fold exponent");
  PrimeTree unfolded{&f, &P, 1};
  PrimeTree folded{&f, &P, k};
  // BFS ball of T_P around the base
  std::vector<PrimeTreeVertex> verts{unfolded.base()};
  std::vector<long> dist{0};
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (dist[i] == radius) continue;
    std::vector<PrimeTreeVertex> nbrs = unfolded.children(verts[i]);
    nbrs.push_back(unfolded.parent(verts[i]));
    for (PrimeTreeVertex& w : nbrs) {
      bool known = false;
      for (std::size_t j = 0; j < verts.size() && !known; ++j)
        if (unfolded.equal(verts[j], w)) known = true;
      if (!known) {
        verts.push_back(w);
        dist.push_back(dist[i] + 1);
      }
    }
  }
  std::vector<std::pair<PrimeTreeVertex, PrimeTreeVertex>> mapping;
  mapping.reserve(verts.size());
  for (const PrimeTreeVertex& v : verts)
    mapping.emplace_back(v, fold_to_power_image(folded, v));
  return mapping;
}

// ---------------------------------------------------------------------------
// Diagonal model

DiagonalModel make_diagonal_model(const FieldDescriptor& f,
                                  const std::vector<PrimeFactor>& primes) {
  DiagonalModel m;
  m.field = &f;
  for (const PrimeFactor& p : primes) m.trees.push_back(PrimeTree{&f, &p, p.k});
  return m;
}

bool DiagonalModel::equal(const DiagonalTuple& a, const DiagonalTuple& b) const {
  if (a.level != b.level) return false;
  for (std::size_t i = 0; i < trees.size(); ++i)
    if (!trees[i].equal(a.parts[i], b.parts[i])) return false;
  return true;
}

DiagonalTuple DiagonalModel::base() const {
  DiagonalTuple t;
  t.level = 0;
  for (const PrimeTree& tr : trees) t.parts.push_back(tr.base());
  return t;
}

DiagonalTuple DiagonalModel::parent(const DiagonalTuple& v) const {
  DiagonalTuple t;
  t.level = v.level - 1;
  for (std::size_t i = 0; i < trees.size(); ++i) t.parts.push_back(trees[i].parent(v.parts[i]));
  return t;
}

std::vector<DiagonalTuple> DiagonalModel::children(const DiagonalTuple& v) const {
  std::vector<std::vector<PrimeTreeVertex>> per;
  for (std::size_t i = 0; i < trees.size(); ++i) per.push_back(trees[i].children(v.parts[i]));
  std::vector<DiagonalTuple> out;
  std::vector<std::size_t> idx(trees.size(), 0);
  while (true) {
    DiagonalTuple t;
    t.level = v.level + 1;
    for (std::size_t i = 0; i < trees.size(); ++i) t.parts.push_back(per[i][idx[i]]);
    out.push_back(std::move(t));
    std::size_t i = 0;
    while (i < trees.size()) {
      if (++idx[i] < per[i].size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == trees.size()) break;
  }
  return out;
}

DiagonalTuple DiagonalModel::act(const GammaElement& g, const DiagonalTuple& v) const {
  DiagonalTuple t;
  t.level = v.level + g.k;
  for (std::size_t i = 0; i < trees.size(); ++i)
    t.parts.push_back(trees[i].act(Int(1), g.k, g.b, v.parts[i]));
  return t;
}

DiagonalTuple DiagonalModel::embed(const TreeVertex& v) const {
  RingFraction b = coset_rep_fraction(*field, v.coset);
  DiagonalTuple t;
  t.level = v.height;
  for (std::size_t i = 0; i < trees.size(); ++i) t.parts.push_back({v.height, b});
  return t;
}

DiagonalCheckReport diagonal_iso_check(const FieldDescriptor& f,
                                       const std::vector<PrimeFactor>& primes, long radius,
                                       Rng& rng, std::size_t action_samples) {
  check(!primes.empty(), Err::FactorizationUnavailable, "factorization required");
  DiagonalModel model = make_diagonal_model(f, primes);
  DiagonalCheckReport rep;

  TreeBall ball = build_ball(f, base_vertex(f), radius);
  rep.ball_size = ball.verts.size();

  // build the diagonal-subspace ball of the same radius by BFS
  std::vector<DiagonalTuple> dverts{model.base()};
  std::vector<long> ddist{0};
  for (std::size_t i = 0; i < dverts.size(); ++i) {
    if (ddist[i] == radius) continue;
    std::vector<DiagonalTuple> nbrs = model.children(dverts[i]);
    nbrs.push_back(model.parent(dverts[i]));
    for (DiagonalTuple& w : nbrs) {
      bool known = false;
      for (std::size_t j = 0; j < dverts.size() && !known; ++j)
        if (model.equal(dverts[j], w)) known = true;
      if (!known) {
        dverts.push_back(std::move(w));
        ddist.push_back(ddist[i] + 1);
      }
    }
  }
  rep.diagonal_ball_size = dverts.size();

  // embed is injective on the ball, lands in the diagonal ball, and preserves
  // the parent relation
  bool ok = (rep.ball_size == rep.diagonal_ball_size);
  std::vector<DiagonalTuple> images;
  images.reserve(ball.verts.size());
  for (const TreeVertex& v : ball.verts) images.push_back(model.embed(v));
  for (std::size_t i = 0; i < images.size() && ok; ++i)
    for (std::size_t j = i + 1; j < images.size() && ok; ++j)
      if (model.equal(images[i], images[j])) ok = false;
  for (std::size_t i = 0; i < images.size() && ok; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < dverts.size() && !found; ++j)
      if (model.equal(images[i], dverts[j])) found = true;
    if (!found) ok = false;
  }
  for (std::size_t i = 0; i < ball.verts.size() && ok; ++i) {
    if (ball.parent_idx[i] < 0) continue;
    DiagonalTuple p1 = model.parent(images[i]);
    if (!model.equal(p1, images[static_cast<std::size_t>(ball.parent_idx[i])])) ok = false;
  }

  // valence of the diagonal model at the base: product of residue sizes
  rep.checked_valence = static_cast<long>(model.children(model.base()).size()) + 1;

  // action compatibility on random pairs
  rep.action_samples = action_samples;
  bool commutes = true;
  for (std::size_t s = 0; s < action_samples && commutes; ++s) {
    TreeVertex v = random_vertex(f, rng, std::min(radius, 3l));
    GammaElement g = random_gamma(f, rng, 2, 2);
    DiagonalTuple lhs = model.embed(act_vertex(f, g, v));
    DiagonalTuple rhs = model.act(g, model.embed(v));
    if (!model.equal(lhs, rhs)) commutes = false;
  }
  rep.action_commutes = commutes;
  rep.isomorphic = ok && commutes;
  return rep;
}

}  // namespace horolab
