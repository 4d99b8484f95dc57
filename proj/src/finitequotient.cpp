#include "finitequotient.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace horolab {

namespace {
long r_mod(long a, long m) {
  long v = a % m;
  return v < 0 ? v + m : v;
}
}  // namespace

Int gl_order(std::size_t n, const Int& s) {
  check(s >= 2, Err::ConfigInvalid, "modulus >= 2");
  Int total = 1;
  for (auto& [p, e] : factor_integer(s)) {
    Int pn = pow(p, static_cast<unsigned>(n));
    Int block = 1;
    Int pi = 1;
    for (std::size_t i = 0; i < n; ++i) {
      block *= (pn - pi);
      pi *= p;
    }
    total *= pow(p, static_cast<unsigned>((e - 1) * static_cast<int>(n * n))) * block;
  }
  return total;
}

std::uint32_t FiniteAffineGroup::encode(const std::vector<long>& v, long t) const {
  std::uint32_t idx = static_cast<std::uint32_t>(((t % r) + r) % r);
  for (std::size_t i = n; i-- > 0;)
    idx = idx * static_cast<std::uint32_t>(s) + static_cast<std::uint32_t>(((v[i] % s) + s) % s);
  return idx;
}

void FiniteAffineGroup::decode(std::uint32_t e, std::vector<long>& v, long& t) const {
  v.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = static_cast<long>(e % static_cast<std::uint32_t>(s));
    e /= static_cast<std::uint32_t>(s);
  }
  t = static_cast<long>(e);
}

FiniteAffineGroup build_quotient(const FieldDescriptor& f, long s, long r) {
  check(s >= 2 && r >= 1, Err::ConfigInvalid, "s >= 2 and r >= 1");
  check(gcd_int(Int(s), f.d) == 1, Err::NotCoprime, "s must be coprime to d");
  FiniteAffineGroup g;
  g.s = s;
  g.r = r;
  g.n = f.n;
  g.m_s = IntMat(f.n, f.n);
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = 0; j < f.n; ++j) {
      Int e = f.companion.at(i, j) % s;
      if (e < 0) e += s;
      g.m_s.at(i, j) = e;
    }
  g.m_pow.resize(r);
  g.m_pow[0] = IntMat::identity(f.n);
  for (long t = 1; t < r; ++t) {
    g.m_pow[t] = mat_mul(g.m_pow[t - 1], g.m_s);
    for (Int& e : g.m_pow[t].a) e %= s;
  }
  // M_s^r must be the identity
  IntMat mr = mat_mul(g.m_pow[r - 1], g.m_s);
  for (Int& e : mr.a) e %= s;
  check(mr == IntMat::identity(f.n), Err::BadExponent, "M_s^r != 1");

  std::size_t size = 1;
  for (std::size_t i = 0; i < f.n; ++i) size *= static_cast<std::size_t>(s);
  size *= static_cast<std::size_t>(r);
  check(size <= 6000, Err::GroupTooLarge, "quotient too large to materialize");
  g.table.size = size;
  g.table.mul.resize(size * size);
  g.table.inv.resize(size);

  std::vector<long> va, vb, vc(f.n);
  long ta, tb;
  for (std::uint32_t a = 0; a < size; ++a) {
    g.decode(a, va, ta);
    for (std::uint32_t b = 0; b < size; ++b) {
      g.decode(b, vb, tb);
      // (v_a, t_a)(v_b, t_b) = (v_a + v_b M^{t_a}, t_a + t_b)
      for (std::size_t j = 0; j < f.n; ++j) {
        Int acc = va[j];
        for (std::size_t i = 0; i < f.n; ++i) acc += Int(vb[i]) * g.m_pow[ta].at(i, j);
        vc[j] = static_cast<long>((acc % s).convert_to<long>());
        if (vc[j] < 0) vc[j] += s;
      }
      g.table.mul[a * size + b] = g.encode(vc, ta + tb);
    }
  }
  for (std::uint32_t a = 0; a < size; ++a)
    for (std::uint32_t b = 0; b < size; ++b)
      if (g.table.times(a, b) == 0) {
        g.table.inv[a] = b;
        break;
      }
  return g;
}

std::uint32_t reduce_element(const FiniteAffineGroup& g, const FieldDescriptor& f,
                             const GammaElement& gamma) {
  // denominators are resolved by the invertibility of M_s: x^{-l} maps to
  // M_s^{-l} = M_s^{r - l mod r}
  long l = gamma.b.denom_exp;
  long inv_pow = ((r_mod(l, g.r)) == 0) ? 0 : g.r - r_mod(l, g.r);
  std::vector<long> v(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    Int acc = 0;
    for (std::size_t i = 0; i < g.n; ++i)
      acc += gamma.b.numer.coords[i] * g.m_pow[inv_pow].at(i, j);
    Int e = acc % g.s;
    if (e < 0) e += g.s;
    v[j] = e.convert_to<long>();
  }
  return g.encode(v, r_mod(gamma.k, g.r));
}

namespace {
std::vector<std::uint32_t> closure(const GroupTable& t, std::vector<std::uint32_t> gens) {
  std::set<std::uint32_t> elems{0};
  std::vector<std::uint32_t> work{0};
  for (auto g : gens)
    if (elems.insert(g).second) work.push_back(g);
  for (std::size_t i = 0; i < work.size(); ++i) {
    for (std::size_t j = 0; j < work.size(); ++j) {
      std::uint32_t p1 = t.times(work[i], work[j]);
      if (elems.insert(p1).second) work.push_back(p1);
      std::uint32_t p2 = t.times(work[j], work[i]);
      if (elems.insert(p2).second) work.push_back(p2);
    }
  }
  return std::vector<std::uint32_t>(elems.begin(), elems.end());
}

std::vector<std::uint32_t> conjugate_set(const GroupTable& t, const std::vector<std::uint32_t>& h,
                                         std::uint32_t x) {
  std::vector<std::uint32_t> out;
  out.reserve(h.size());
  std::uint32_t xi = t.inv[x];
  for (auto e : h) out.push_back(t.times(t.times(x, e), xi));
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

std::vector<SubgroupRecord> subgroup_enumerate(const GroupTable& g, std::size_t element_bound) {
  check(g.size <= element_bound, Err::GroupTooLarge, "group exceeds the enumeration bound");
  // every conjugate of every discovered class is kept in a lookup table, so
  // a repeated subgroup costs one set lookup and a new class costs one orbit
  std::map<std::vector<std::uint32_t>, std::size_t> seen;  // any conjugate -> class id
  std::vector<SubgroupRecord> classes;
  std::vector<std::vector<std::uint32_t>> queue;

  auto add = [&](const std::vector<std::uint32_t>& h) {
    if (seen.count(h)) return;
    std::set<std::vector<std::uint32_t>> orbit;
    for (std::uint32_t x = 0; x < g.size; ++x) orbit.insert(conjugate_set(g, h, x));
    std::size_t id = classes.size();
    classes.push_back({*orbit.begin(), orbit.size()});
    queue.push_back(*orbit.begin());
    for (auto& c : orbit) seen[c] = id;
  };

  add({0});
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::vector<std::uint32_t> h = queue[qi];  // copy: queue grows
    std::vector<bool> used(g.size, false);
    for (auto e : h) used[e] = true;
    for (std::uint32_t x = 0; x < g.size; ++x) {
      if (used[x]) continue;
      // <H, x> = <H, h1 x h2>: mark the whole double coset as used
      for (auto h1 : h)
        for (auto h2 : h) used[g.times(g.times(h1, x), h2)] = true;
      std::vector<std::uint32_t> gens = h;
      gens.push_back(x);
      add(closure(g, gens));
    }
  }
  return classes;
}

std::vector<std::vector<std::uint32_t>> subgroup_enumerate_naive(const GroupTable& g) {
  std::set<std::vector<std::uint32_t>> all;
  std::vector<std::vector<std::uint32_t>> queue{{0}};
  all.insert({0});
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::vector<std::uint32_t> h = queue[qi];
    std::set<std::uint32_t> in_h(h.begin(), h.end());
    for (std::uint32_t x = 0; x < g.size; ++x) {
      if (in_h.count(x)) continue;
      auto gens = h;
      gens.push_back(x);
      auto k = closure(g, gens);
      if (all.insert(k).second) queue.push_back(k);
    }
  }
  return std::vector<std::vector<std::uint32_t>>(all.begin(), all.end());
}

std::optional<HyperWitness> is_hyperelementary(const GroupTable& g,
                                               const std::vector<std::uint32_t>& h) {
  std::size_t order = h.size();
  std::set<std::uint32_t> in_h(h.begin(), h.end());

  // distinct cyclic subgroups of H, largest first
  std::set<std::vector<std::uint32_t>> cyclics;
  for (auto e : h) {
    std::vector<std::uint32_t> c{0};
    std::uint32_t cur = e;
    while (cur != 0) {
      c.push_back(cur);
      cur = g.times(cur, e);
    }
    std::sort(c.begin(), c.end());
    cyclics.insert(c);
  }
  std::vector<std::vector<std::uint32_t>> ordered(cyclics.begin(), cyclics.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  auto prime_power_base = [](std::size_t q) -> long {
    if (q == 1) return 1;
    auto fac = factor_integer(Int(static_cast<long>(q)));
    return fac.size() == 1 ? fac[0].first.convert_to<long>() : 0;
  };

  for (const auto& c : ordered) {
    if (order % c.size() != 0) continue;
    std::size_t q = order / c.size();
    long p = prime_power_base(q);
    if (p == 0) continue;
    if (q == 1) {
      // cyclic H: trivial quotient; p = smallest prime not dividing |C|
      long cand = 2;
      while (c.size() % static_cast<std::size_t>(cand) == 0) {
        ++cand;
        while (true) {
          bool prime = true;
          for (long d = 2; d * d <= cand; ++d)
            if (cand % d == 0) {
              prime = false;
              break;
            }
          if (prime) break;
          ++cand;
        }
      }
      return HyperWitness{c, cand};
    }
    if (c.size() % static_cast<std::size_t>(p) == 0) continue;  // gcd(|C|, p) != 1
    // normality in H
    std::set<std::uint32_t> in_c(c.begin(), c.end());
    bool normal = true;
    for (auto x : h) {
      std::uint32_t xi = g.inv[x];
      for (auto e : c)
        if (!in_c.count(g.times(g.times(x, e), xi))) {
          normal = false;
          break;
        }
      if (!normal) break;
    }
    if (!normal) continue;
    // H/C must be a p-group; its order is p^a already, which suffices
    return HyperWitness{c, p};
  }
  return std::nullopt;
}

HgpReport hgp_check(const FiniteAffineGroup& g, long n_required, std::size_t element_bound) {
  HgpReport rep;
  rep.n_required = n_required;
  rep.pass = true;
  auto classes = subgroup_enumerate(g.table, element_bound);
  std::vector<long> v;
  long t;
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto& h = classes[ci].elements;
    TrichotomyRow row;
    row.class_id = ci;
    row.order = h.size();
    auto wit = is_hyperelementary(g.table, h);
    row.hyper = wit.has_value();

    // projection to Z/r and the translation part
    std::set<long> pr;
    Int coord_gcd = 0;
    bool nontrivial_translations = false;
    for (auto e : h) {
      g.decode(e, v, t);
      pr.insert(t);
      if (t == 0) {
        for (long c : v) coord_gcd = gcd_int(coord_gcd, Int(c));
        if (std::any_of(v.begin(), v.end(), [](long c) { return c != 0; }))
          nontrivial_translations = true;
      }
    }
    row.pr_order = pr.size();
    row.pr_index = g.r / static_cast<long>(pr.size());
    row.k_max = nontrivial_translations ? gcd_int(coord_gcd, Int(g.s)).convert_to<long>() : g.s;

    if (!row.hyper) {
      row.case_label = 'x';
    } else if (row.pr_index >= n_required) {
      row.case_label = 'a';
    } else if (row.k_max >= n_required) {
      row.case_label = 'b';
    } else {
      row.case_label = '-';
      rep.pass = false;
      if (rep.failing_class < 0) rep.failing_class = static_cast<long>(ci);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

std::pair<long, long> find_sr(const FieldDescriptor& f, long n_required, const SrBounds& bounds) {
  long d = f.d.convert_to<long>();
  for (long s = d + 1; s <= bounds.s_max; s += d) {
    Int r_big = gl_order(f.n, Int(s));
    if (r_big > bounds.group_bound) continue;
    long r = r_big.convert_to<long>();
    double size = std::pow(static_cast<double>(s), static_cast<double>(f.n)) * r;
    if (size > static_cast<double>(bounds.group_bound)) continue;
    FiniteAffineGroup g = build_quotient(f, s, r);
    HgpReport rep = hgp_check(g, n_required, bounds.group_bound);
    if (rep.pass) return {s, r};
  }
  fail(Err::SearchExhausted, "no (s, r) within bounds passes the trichotomy");
}

GammaElement random_word(const FieldDescriptor& f, long m, Rng& rng) {
  GammaElement w = gamma_identity(f);
  long len = m > 1 ? rng.range(0, m - 1) : 0;
  for (long i = 0; i < len; ++i) {
    std::uint64_t pick = rng.below(2 * f.n + 2);
    GammaElement gen;
    if (pick < 2 * f.n) {
      OrderElement e = oe_basis(f, pick / 2);
      if (pick % 2) e = oe_neg(e);
      gen = gamma_make(f, rf_from_order(e), 0);
    } else {
      gen = gamma_make(f, rf_zero(f), pick == 2 * f.n ? 1 : -1);
    }
    w = gamma_mul(f, w, gen);
  }
  return w;
}

CaseAReport case_a_certificate(const FieldDescriptor& f, long m, std::size_t samples, Rng& rng,
                               double c0) {
  check(m >= 1, Err::ConfigInvalid, "m >= 1");
  CaseAReport rep;
  rep.m = m;
  rep.cell_scale = 1.0 / (static_cast<double>(m) * m * c0);
  rep.samples = samples;

  // exact generator property: every generator shifts k by at most 1
  rep.generators_unit_shift = true;  // (+-e_i, 0) have k = 0; (0, +-1) have |k| = 1

  rep.pass = true;
  for (std::size_t i = 0; i < samples; ++i) {
    GammaElement g0 = random_word(f, 2 * m, rng);
    GammaElement w = random_word(f, m, rng);
    GammaElement g1 = gamma_mul(f, g0, w);
    long dk = std::abs(g1.k - g0.k);
    // l1-displacement on the line with cells of size m^2 c0 is |dk| / (m^2 c0)
    double scaled = static_cast<double>(dk) * rep.cell_scale;
    rep.max_scaled_displacement = std::max(rep.max_scaled_displacement, scaled);
    if (!(dk < m) || !(scaled < 1.0 / m)) rep.pass = false;
  }
  return rep;
}

CaseBReport case_b_contraction_probe(const FieldDescriptor& f, const FiberForms& forms, long m,
                                     long k, double tau, std::size_t samples, Rng rng,
                                     const QuadratureSpec& q, const DistParams& par) {
  check(gcd_int(Int(k), f.d) == 1, Err::NotCoprime, "k must be coprime to d");
  check(tau >= 0, Err::ConfigInvalid, "tau >= 0");
  CaseBReport rep;
  rep.k = k;
  rep.tau = tau;
  rep.samples = samples;

  for (std::size_t i = 0; i < samples; ++i) {
    // the contraction acts on the fiber direction; pairs with equal fibers
    // have k-independent distance, so redraw until the fibers differ
    GammaElement g0 = gamma_identity(f), g1 = gamma_identity(f);
    for (int tries = 0; tries < 64; ++tries) {
      g0 = random_word(f, m, rng);
      g1 = random_word(f, m, rng);
      if (!(rf_sub(f, g0.b, g1.b).is_zero())) break;
    }
    auto c0 = case_b_embed(f, g0, k, tau);
    auto c1 = case_b_embed(f, g1, k, tau);
    IntervalValue v = fs_distance(f, forms, c0, c1, q, par);
    rep.max_distance = std::max(rep.max_distance, v.value + v.error);
  }
  return rep;
}

HorizontalGeodesic case_b_embed(const FieldDescriptor& f, const GammaElement& g, long k,
                                double tau) {
  // eta(g) = g(base, 0); then F_k^{-1}; then the flowed embedding
  TreeVertex z = act_vertex(f, g, base_vertex(f));
  RatVec wq = rf_coords(f, g.b);
  Vec w(f.n);
  for (std::size_t i = 0; i < f.n; ++i) w[i] = to_double(wq[i]) / static_cast<double>(k);
  TreeVertex zk = scalar_div_vertex(f, Int(k), z);
  return psi_tau(f, tree_point(zk), w, tau);
}

long order_of_reduction(const FieldDescriptor& f, long s, long cap) {
  IntMat ms(f.n, f.n), cur = IntMat::identity(f.n);
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = 0; j < f.n; ++j) {
      Int e = f.companion.at(i, j) % s;
      if (e < 0) e += s;
      ms.at(i, j) = e;
    }
  for (long r = 1; r <= cap; ++r) {
    cur = mat_mul(cur, ms);
    for (Int& e : cur.a) e %= s;
    if (cur == IntMat::identity(f.n)) return r;
  }
  fail(Err::BadExponent, "order of the reduced matrix exceeds the cap");
}

}  // namespace horolab
