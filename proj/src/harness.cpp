#include "harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>

namespace horolab {

using json = nlohmann::ordered_json;

std::vector<std::string> all_suite_names() {
  return {"tree", "folding", "diagonal", "metric", "flow", "periodic", "quotient", "embedding"};
}

namespace {

long get_long(const json& j, const char* key, long fallback) {
  return j.contains(key) ? j.at(key).get<long>() : fallback;
}
double get_double(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}
std::size_t get_size(const json& j, const char* key, std::size_t fallback) {
  return j.contains(key) ? j.at(key).get<std::size_t>() : fallback;
}

}  // namespace

SuiteConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(Err::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  check(j.is_object() && j.contains("m") && j.at("m").is_array(), Err::ConfigInvalid,
        "config requires an integer array \"m\"");
  static const std::set<std::string> known{"m",       "suites",  "seed",
                                           "budgets", "samples", "tolerances"};
  for (auto& [key, _] : j.items())
    check(known.count(key) > 0, Err::ConfigInvalid, "unknown config key: " + key);

  SuiteConfig c;
  for (auto& v : j.at("m")) {
    check(v.is_number_integer(), Err::ConfigInvalid, "coefficients must be integers");
    c.m_coeffs.push_back(Int(v.get<long long>()));
  }
  if (j.contains("suites")) {
    auto names = all_suite_names();
    for (auto& v : j.at("suites")) {
      std::string s = v.get<std::string>();
      check(std::find(names.begin(), names.end(), s) != names.end(), Err::ConfigInvalid,
            "unknown suite: " + s);
      c.suites.push_back(s);
    }
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("budgets")) {
    const json& b = j.at("budgets");
    c.budgets.ball_radius = get_long(b, "ball_radius", c.budgets.ball_radius);
    c.budgets.fold_radius = get_long(b, "fold_radius", c.budgets.fold_radius);
    c.budgets.diagonal_radius = get_long(b, "diagonal_radius", c.budgets.diagonal_radius);
    c.budgets.n_max = get_long(b, "n_max", c.budgets.n_max);
    c.budgets.forms_range = get_long(b, "forms_range", c.budgets.forms_range);
    c.budgets.subgroup_bound = get_size(b, "subgroup_bound", c.budgets.subgroup_bound);
    c.budgets.overshoot = static_cast<int>(get_long(b, "overshoot", c.budgets.overshoot));
    c.budgets.undershoot = static_cast<int>(get_long(b, "undershoot", c.budgets.undershoot));
    c.budgets.quad_nodes = static_cast<int>(get_long(b, "quad_nodes", c.budgets.quad_nodes));
    c.budgets.quad_nodes_flow =
        static_cast<int>(get_long(b, "quad_nodes_flow", c.budgets.quad_nodes_flow));
    c.budgets.quad_tmax = get_double(b, "quad_tmax", c.budgets.quad_tmax);
    c.budgets.workers = static_cast<int>(get_long(b, "workers", c.budgets.workers));
  }
  if (j.contains("samples")) {
    const json& s = j.at("samples");
    c.samples.residue = get_size(s, "residue", c.samples.residue);
    c.samples.witness = get_size(s, "witness", c.samples.witness);
    c.samples.stabilizer = get_size(s, "stabilizer", c.samples.stabilizer);
    c.samples.action = get_size(s, "action", c.samples.action);
    c.samples.fold_equivariance = get_size(s, "fold_equivariance", c.samples.fold_equivariance);
    c.samples.diagonal_action = get_size(s, "diagonal_action", c.samples.diagonal_action);
    c.samples.dd_pairs = get_size(s, "dd_pairs", c.samples.dd_pairs);
    c.samples.ddc_pairs = get_size(s, "ddc_pairs", c.samples.ddc_pairs);
    c.samples.rads = get_size(s, "rads", c.samples.rads);
    c.samples.control = get_size(s, "control", c.samples.control);
    c.samples.isometry = get_size(s, "isometry", c.samples.isometry);
    c.samples.inq = get_size(s, "inq", c.samples.inq);
    c.samples.hom_pairs = get_size(s, "hom_pairs", c.samples.hom_pairs);
    c.samples.embedding_pairs = get_size(s, "embedding_pairs", c.samples.embedding_pairs);
    c.samples.case_a = get_size(s, "case_a", c.samples.case_a);
    c.samples.case_b = get_size(s, "case_b", c.samples.case_b);
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    c.tol.distance = get_double(t, "distance", c.tol.distance);
    c.tol.probe_stability = get_double(t, "probe_stability", c.tol.probe_stability);
    c.tol.fiber_equivariance = get_double(t, "fiber_equivariance", c.tol.fiber_equivariance);
    c.tol.vl_eps = get_double(t, "vl_eps", c.tol.vl_eps);
    c.tol.vl_threshold = get_long(t, "vl_threshold", c.tol.vl_threshold);
    c.tol.lpar_eps = get_double(t, "lpar_eps", c.tol.lpar_eps);
  }
  return c;
}

namespace {

struct Workbench {
  SuiteConfig cfg;
  FieldDescriptor field;
  std::vector<PrimeFactor> primes;
  FiberForms forms;
  DistParams par;
  QuadratureSpec quad;
  QuadratureSpec quad_flow;
};

Workbench make_workbench(const SuiteConfig& cfg) {
  Workbench wb;
  wb.cfg = cfg;
  try {
    wb.field = define_field(cfg.m_coeffs);
  } catch (const Error& e) {
    fail(Err::FieldRejected, e.what());
  }
  try {
    wb.primes = factor_x(wb.field);
  } catch (const Error& e) {
    if (e.code() == Err::NotMaximalAtP) fail(Err::FieldRejected, e.what());
    throw;
  }
  wb.forms = FiberForms(wb.field, cfg.budgets.forms_range);
  wb.par.overshoot = cfg.budgets.overshoot;
  wb.par.undershoot = cfg.budgets.undershoot;
  wb.quad.nodes = cfg.budgets.quad_nodes;
  wb.quad.t_max = cfg.budgets.quad_tmax;
  wb.quad_flow = wb.quad;
  wb.quad_flow.nodes = cfg.budgets.quad_nodes_flow;
  return wb;
}

CheckRecord record(std::string name, std::string lemma, long samples, double worst, double tol,
                   bool pass) {
  return {std::move(name), std::move(lemma), samples, worst, tol, pass};
}

void finish(SuiteReport& rep) {
  for (const CheckRecord& c : rep.checks) rep.pass = rep.pass && c.pass;
}

// --------------------------------------------------------------- tree suite

SuiteReport suite_tree(const Workbench& wb, Rng rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "tree";
  long d = wb.field.d.convert_to<long>();

  {  // children per vertex = d, exactly
    long worst = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.residue; ++i) {
      TreeVertex v = random_vertex(f, rng, wb.cfg.budgets.ball_radius);
      std::set<std::string> keys;
      for (auto& c : children(f, v)) keys.insert(vertex_key(c));
      worst = std::max(worst, std::labs(static_cast<long>(keys.size()) - d));
    }
    rep.checks.push_back(record("residue-count", "residue", wb.cfg.samples.residue,
                                static_cast<double>(worst), 0.0, worst == 0));
  }
  {  // transitivity witnesses
    std::size_t fails = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.witness; ++i) {
      TreeVertex u = random_vertex(f, rng, wb.cfg.budgets.ball_radius);
      TreeVertex v = random_vertex(f, rng, wb.cfg.budgets.ball_radius);
      if (!(act_vertex(f, transitive_witness(f, u, v), u) == v)) ++fails;
    }
    rep.checks.push_back(record("transitive-witness", "actree", wb.cfg.samples.witness,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  {  // base stabilizer = {(b, 0): b integral}, both inclusions
    std::size_t fails = 0;
    TreeVertex base = base_vertex(f);
    for (std::size_t i = 0; i < wb.cfg.samples.stabilizer; ++i) {
      GammaElement g = random_gamma(f, rng, 3, 2);
      bool expected = (g.k == 0) && (g.b.denom_exp == 0);
      if (stabilizer_test(f, g, base) != expected) ++fails;
    }
    for (const GammaElement& g : stabilizer_basis(f, base))
      if (!stabilizer_test(f, g, base)) ++fails;
    rep.checks.push_back(record("base-stabilizer", "actree", wb.cfg.samples.stabilizer,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  {  // action properties: homomorphism, busemann shift, adjacency, isometry
    std::size_t fails = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.action; ++i) {
      GammaElement g1 = random_gamma(f, rng, 3, 3);
      GammaElement g2 = random_gamma(f, rng, 3, 3);
      TreeVertex v = random_vertex(f, rng, 4);
      TreeVertex u = random_vertex(f, rng, 4);
      if (!(act_vertex(f, gamma_mul(f, g1, g2), v) == act_vertex(f, g1, act_vertex(f, g2, v))))
        ++fails;
      if (busemann(act_vertex(f, g1, v)) != busemann(v) + g1.k) ++fails;
      if (!(parent(f, act_vertex(f, g1, v)) == act_vertex(f, g1, parent(f, v)))) ++fails;
      if (tree_distance(f, act_vertex(f, g1, u), act_vertex(f, g1, v)) != tree_distance(f, u, v))
        ++fails;
    }
    rep.checks.push_back(record("action-properties", "actree", wb.cfg.samples.action,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  {  // the end is fixed: parent chains merge
    std::size_t fails = 0;
    for (std::size_t i = 0; i < 50; ++i) {
      TreeVertex v = random_vertex(f, rng, 3);
      GammaElement g = random_gamma(f, rng, 2, 2);
      TreeVertex a = ancestor(f, v, 8);
      TreeVertex b = ancestor(f, act_vertex(f, g, v), 8 + g.k);
      if (!(a == b)) ++fails;
    }
    rep.checks.push_back(record("end-fixed", "busemann", 50, static_cast<double>(fails), 0.0,
                                fails == 0));
  }
  finish(rep);
  return rep;
}

// ------------------------------------------------------------ folding suite

SuiteReport suite_folding(const Workbench& wb, Rng rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "folding";
  const PrimeFactor& P = wb.primes.front();
  int k = 2;
  long radius = wb.cfg.budgets.fold_radius;
  Int card = pow(P.residue_norm(), static_cast<unsigned>(k));
  rep.notes.push_back("prime p=" + P.p.str() + ", fold k=2, card(O/P^k)=" + card.str());

  {  // elementary folds on explicit finite trees
    FiniteTree star3{4, {{0, 1}, {0, 2}, {0, 3}}};
    FiniteTree folded = elementary_fold(star3, 0, 1);
    bool ok = folded.n_vertices == 3 && folded.is_tree();
    FiniteTree slab{7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}};
    FiniteTree shape = elementary_fold(slab, 0, 1);
    auto deg = shape.degrees();
    ok = ok && shape.n_vertices == 6 &&
         std::count(deg.begin(), deg.end(), 5u) == 1 &&
         std::count(deg.begin(), deg.end(), 1u) == 5;
    rep.checks.push_back(record("elementary-fold", "fold", 2, ok ? 0.0 : 1.0, 0.0, ok));
  }
  {  // image valence card(O/P^k) + 1 on the folded ball
    PrimeTree unfolded{&f, &P, 1};
    PrimeTree folded{&f, &P, k};
    auto mapping = fold_to_power(f, P, k, radius);
    long expect = card.convert_to<long>();
    bool ok = !mapping.empty();
    double worst = 0;
    long checked = 0;
    for (auto& [src, img] : mapping) {
      // distinct children, q^k of them, each with the right parent
      auto kids = folded.children(img);
      if (static_cast<long>(kids.size()) != expect) ok = false;
      for (std::size_t i = 0; i < kids.size() && ok; ++i) {
        if (!folded.equal(folded.parent(kids[i]), img)) ok = false;
        for (std::size_t j = i + 1; j < kids.size(); ++j)
          if (folded.equal(kids[i], kids[j])) ok = false;
      }
      // surjectivity of the coarsening where the ball provably determines it:
      // child sources sit within 2k-1 of the source vertex
      if (prime_tree_distance(unfolded, unfolded.base(), src) <= radius - (2 * k - 1)) {
        ++checked;
        long hit = 0;
        for (auto& kid : kids)
          for (auto& [s2, i2] : mapping)
            if (folded.equal(i2, kid)) {
              ++hit;
              break;
            }
        worst = std::max(worst, static_cast<double>(expect - hit));
        if (hit != expect) ok = false;
      }
    }
    if (checked == 0) ok = false;
    rep.checks.push_back(
        record("fold-image-valence", "fold", static_cast<long>(mapping.size()), worst, 0.0, ok));
  }
  {  // equivariance for the slab-preserving generators
    PrimeTree unfolded{&f, &P, 1};
    PrimeTree folded{&f, &P, k};
    auto mapping = fold_to_power(f, P, k, radius);
    std::size_t fails = 0;
    for (std::size_t s = 0; s < wb.cfg.samples.fold_equivariance; ++s) {
      int kind = static_cast<int>(rng.below(3));
      Int u = 1;
      long j = 0;
      RingFraction c = rf_zero(f);
      if (kind == 0) j = (k * P.k) / P.k;  // type I for the folded tree
      if (kind == 1) {
        long cand = 1 + static_cast<long>(rng.below(6));
        while (gcd_int(Int(cand), Int(P.p)) != 1) ++cand;
        u = cand;
      }
      if (kind == 2) {
        OrderElement b = oe_zero(f);
        for (std::size_t i = 0; i < f.n; ++i) b.coords[i] = rng.range(-4, 4);
        c = rf_from_order(b);
      }
      const auto& [src, img] = mapping[rng.below(mapping.size())];
      if (kind == 0 && (j * P.k) % k != 0) continue;
      auto lhs = fold_to_power_image(folded, unfolded.act(u, kind == 0 ? k : 0, c, src));
      auto rhs = folded.act(u, kind == 0 ? k : 0, c, img);
      if (!folded.equal(lhs, rhs)) ++fails;
    }
    rep.checks.push_back(record("fold-equivariance", "fold", wb.cfg.samples.fold_equivariance,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  finish(rep);
  return rep;
}

// ----------------------------------------------------------- diagonal suite

SuiteReport suite_diagonal(const Workbench& wb, Rng rng) {
  SuiteReport rep;
  rep.suite = "diagonal";
  long radius = wb.cfg.budgets.diagonal_radius;
  auto res = diagonal_iso_check(wb.field, wb.primes, radius, rng, wb.cfg.samples.diagonal_action);
  long expected_valence = wb.field.d.convert_to<long>() + 1;
  rep.notes.push_back("radius " + std::to_string(radius) + ", ball " +
                      std::to_string(res.ball_size) + " vs diagonal " +
                      std::to_string(res.diagonal_ball_size));
  rep.checks.push_back(record("diagonal-isomorphism", "diagonal",
                              static_cast<long>(res.ball_size),
                              res.isomorphic ? 0.0 : 1.0, 0.0, res.isomorphic));
  rep.checks.push_back(record("diagonal-valence", "diagonal", 1,
                              static_cast<double>(res.checked_valence - expected_valence), 0.0,
                              res.checked_valence == expected_valence));
  rep.checks.push_back(record("diagonal-action", "diagonal",
                              static_cast<long>(res.action_samples),
                              res.action_commutes ? 0.0 : 1.0, 0.0, res.action_commutes));
  finish(rep);
  return rep;
}

// ------------------------------------------------------------- metric suite

SuiteReport suite_metric(const Workbench& wb, Rng rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "metric";

  {  // lemma dd sandwich on same-fiber pairs
    double worst = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.dd_pairs; ++i) {
      TreeVertex u = random_vertex(f, rng, 4);
      TreeVertex v = random_vertex(f, rng, 4);
      Vec w(f.n);
      for (auto& c : w) c = 2 * rng.real01() - 1;
      ModelPoint p{tree_point(u), w}, q{tree_point(v), w};
      Interval iv = distance_bounds(f, wb.forms, p, q, wb.par);
      double dt = static_cast<double>(tree_distance(f, u, v));
      worst = std::max({worst, std::abs(iv.lo - dt), std::abs(iv.hi - dt)});
    }
    rep.checks.push_back(record("dd-sandwich", "dd", wb.cfg.samples.dd_pairs, worst,
                                wb.cfg.tol.distance, worst <= wb.cfg.tol.distance));
  }
  {  // corollary ddc within certified bounds
    double worst = 0;  // most negative margin
    std::size_t fails = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.ddc_pairs; ++i) {
      TreePoint z1 = tree_point(random_vertex(f, rng, 3));
      TreePoint z2 = tree_point(random_vertex(f, rng, 3));
      Vec w1(f.n), w2(f.n);
      for (auto& c : w1) c = 2 * rng.real01() - 1;
      for (auto& c : w2) c = 2 * rng.real01() - 1;
      Interval lhs = certified_distance_frame(wb.forms, pair_frame(f, z1, z2), w1, w2, wb.par);
      Interval rhs = certified_distance_frame(wb.forms, pair_frame(f, z1, z1), w1, w2, wb.par);
      double margin = lhs.hi - 0.5 * rhs.lo;
      worst = std::min(worst, margin);
      if (margin < -1e-9) ++fails;
    }
    rep.checks.push_back(record("ddc-half", "ddc", wb.cfg.samples.ddc_pairs, worst, 1e-9,
                                fails == 0));
  }
  {  // lemma rads probe: positive separation, stable under doubling
    auto res = probe_rads(wb.forms, 1.0, wb.cfg.samples.rads, rng, wb.par,
                          wb.cfg.tol.probe_stability);
    rep.checks.push_back(record("rads-separation", "rads", wb.cfg.samples.rads, res.eps_prime,
                                0.0, res.eps_prime > 0 && res.stable));
  }
  {  // lemma control probe
    auto res =
        probe_control(wb.forms, 3, wb.cfg.samples.control, rng, wb.par, wb.cfg.tol.probe_stability);
    bool ok = res.beta_hat >= 1.0 && res.stable && res.used > 0;
    if (f.n == 1 && f.d == 2) ok = ok && res.beta_hat <= 8.0 * (1 + 5e-3);
    rep.checks.push_back(
        record("control-ratio", "control", wb.cfg.samples.control, res.beta_hat, 8.0, ok));
  }
  {  // fiber form equivariance; the wide sweep gets a conditioning allowance
     // (the identity is exact, verification is limited by cancellation in
     // the quadratic form)
    double worst_mild = 0, worst_wide = 0;
    for (int i = 0; i < 100; ++i) {
      bool mild = (i % 2 == 0);
      double fh = mild ? rng.real01() : 6 * rng.real01() - 3;
      long kk = mild ? 2 : rng.range(-3, 3);
      Vec w(f.n);
      for (auto& c : w) c = 2 * rng.real01() - 1;
      RatMat ak = mat_pow_signed(f.companion, kk);
      Vec wk(f.n, 0.0);
      for (std::size_t a = 0; a < f.n; ++a)
        for (std::size_t b = 0; b < f.n; ++b) wk[b] += w[a] * to_double(ak.at(a, b));
      double q1 = wb.forms.quad_at(fh + kk, wk);
      double q0 = wb.forms.quad_at(fh, w);
      double err = std::abs(q1 - q0) / (1 + std::abs(q0));
      (mild ? worst_mild : worst_wide) = std::max(mild ? worst_mild : worst_wide, err);
    }
    bool ok = worst_mild <= wb.cfg.tol.fiber_equivariance && worst_wide <= 1e-9;
    rep.checks.push_back(record("fiber-equivariance", "metric-gluing", 100,
                                std::max(worst_mild, worst_wide),
                                wb.cfg.tol.fiber_equivariance, ok));
  }
  {  // isometric action: interval overlap plus exact polyline images
    std::size_t fails = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.isometry; ++i) {
      ModelPoint p{tree_point(random_vertex(f, rng, 3)), Vec(f.n)};
      ModelPoint q{tree_point(random_vertex(f, rng, 3)), Vec(f.n)};
      for (auto& c : p.w) c = 2 * rng.real01() - 1;
      for (auto& c : q.w) c = 2 * rng.real01() - 1;
      GammaElement g = random_gamma(f, rng, 2, 2);
      Interval a = distance_bounds(f, wb.forms, p, q, wb.par);
      Interval b = distance_bounds(f, wb.forms, act_point(f, wb.forms, g, p),
                                   act_point(f, wb.forms, g, q), wb.par);
      if (b.lo > a.hi + 1e-6 || a.lo > b.hi + 1e-6) ++fails;

      PathPolyline pl;
      TreeVertex v = random_vertex(f, rng, 2);
      ModelPoint cur{tree_point(v), Vec(f.n)};
      for (auto& c : cur.w) c = 2 * rng.real01() - 1;
      pl.push_back(cur);
      for (int s = 0; s < 3; ++s) {
        TreeVertex next =
            rng.below(2) ? parent(f, pl.back().z.anchor) : children(f, pl.back().z.anchor)[0];
        ModelPoint mp{tree_point(next), Vec(f.n)};
        for (auto& c : mp.w) c = 2 * rng.real01() - 1;
        pl.push_back(mp);
      }
      PathPolyline gpl;
      for (auto& mp : pl) gpl.push_back(act_point(f, wb.forms, g, mp));
      double l1 = path_length(f, wb.forms, pl, 8);
      double l2 = path_length(f, wb.forms, gpl, 8);
      if (std::abs(l1 - l2) > 1e-9 * (1 + l1)) ++fails;
    }
    rep.checks.push_back(record("action-isometry", "metric-gluing", wb.cfg.samples.isometry,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  finish(rep);
  return rep;
}

// --------------------------------------------------------------- flow suite

HorizontalGeodesic random_flow_geodesic(const FieldDescriptor& f, Rng& rng) {
  TreePoint z = tree_point(random_vertex(f, rng, 3), 0.9 * rng.real01());
  Vec w(f.n);
  for (auto& c : w) c = 2 * rng.real01() - 1;
  std::uint64_t kind = rng.below(3);
  if (kind == 0) return constant_geodesic(z, w);
  if (kind == 1) {
    auto c = psi(z, w);
    c.c_minus = 2 * rng.real01() - 1;
    return c;
  }
  OrderElement b = oe_zero(f);
  for (std::size_t i = 0; i < f.n; ++i) b.coords[i] = rng.range(-3, 3);
  return line_geodesic(f, rf_make(f, b, rng.range(0, 2)), height_of(z), w);
}

SuiteReport suite_flow(const Workbench& wb, Rng rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "flow";

  {  // lemma vl probe
    Vec w1(f.n, 0.0), w2(f.n, 0.0);
    w2[0] = 1.0;
    try {
      VlReport res = probe_vl(wb.forms, 0.0, w1, w2, wb.cfg.tol.vl_eps, wb.cfg.budgets.n_max,
                              wb.par);
      bool ok = res.achieved && res.threshold_n <= wb.cfg.tol.vl_threshold && res.monotone_ok;
      rep.checks.push_back(record("vl-threshold", "vl", wb.cfg.budgets.n_max,
                                  static_cast<double>(res.threshold_n),
                                  static_cast<double>(wb.cfg.tol.vl_threshold), ok));
    } catch (const Error&) {
      rep.checks.push_back(record("vl-threshold", "vl", wb.cfg.budgets.n_max,
                                  static_cast<double>(wb.cfg.budgets.n_max),
                                  static_cast<double>(wb.cfg.tol.vl_threshold), false));
    }
  }
  {  // lemma lpar probe
    Vec w1(f.n, 0.0), w2(f.n, 0.0);
    w2[0] = 1.0;
    try {
      LparReport res = lpar_probe(f, wb.forms, tree_point(base_vertex(f)), w1, w2,
                                  wb.cfg.tol.lpar_eps, wb.cfg.budgets.n_max, wb.quad, wb.par, rng);
      bool ok = res.achieved && res.worst_tail_fs <= wb.cfg.tol.lpar_eps &&
                res.worst_tail_dx < wb.cfg.tol.lpar_eps / 4 && res.beta_hat >= 1.0;
      rep.checks.push_back(record("lpar-threshold", "lpar", wb.cfg.budgets.n_max,
                                  static_cast<double>(res.threshold_n),
                                  static_cast<double>(wb.cfg.budgets.n_max), ok));
    } catch (const Error&) {
      rep.checks.push_back(record("lpar-threshold", "lpar", wb.cfg.budgets.n_max,
                                  static_cast<double>(wb.cfg.budgets.n_max), 0.0, false));
    }
  }
  {  // lemma inq: flow Lipschitz inequalities
    std::size_t fails = 0, inconclusive = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.inq; ++i) {
      auto c1 = random_flow_geodesic(f, rng);
      auto c2 = random_flow_geodesic(f, rng);
      double tau = 4 * rng.real01() - 2;
      LipschitzReport lr = lipschitz_check(f, wb.forms, c1, c2, tau, wb.quad_flow, wb.par);
      if (!lr.pass) ++fails;
      if (lr.inconclusive) ++inconclusive;
    }
    rep.notes.push_back("inq inconclusive-bar samples: " + std::to_string(inconclusive));
    rep.checks.push_back(record("inq-lipschitz", "inq", wb.cfg.samples.inq,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  {  // flow group law and embedding identities (exact representations)
    std::size_t fails = 0;
    for (int i = 0; i < 50; ++i) {
      auto c = random_flow_geodesic(f, rng);
      double t1 = 3 * rng.real01() - 1.5, t2 = 3 * rng.real01() - 1.5;
      auto a = flow(f, flow(f, c, t1), t2);
      auto b = flow(f, c, t1 + t2);
      if (std::abs(geodesic_height(a, 0.4) - geodesic_height(b, 0.4)) > 1e-9) ++fails;
      TreePoint z = tree_point(random_vertex(f, rng, 3), 0.9 * rng.real01());
      if (tree_point_distance(f, geodesic_eval(f, psi(z, Vec(f.n)), 0.0), z) > 1e-9) ++fails;
    }
    rep.checks.push_back(record("flow-group-law", "flow", 50, static_cast<double>(fails), 0.0,
                                fails == 0));
  }
  {  // the action is isometric on the flow space (within bars)
    std::size_t fails = 0;
    for (int i = 0; i < 8; ++i) {
      auto c1 = random_flow_geodesic(f, rng);
      auto c2 = random_flow_geodesic(f, rng);
      GammaElement g = random_gamma(f, rng, 2, 2);
      auto d1 = fs_distance(f, wb.forms, c1, c2, wb.quad_flow, wb.par);
      auto d2 = fs_distance(f, wb.forms, act_geodesic(f, wb.forms, g, c1),
                            act_geodesic(f, wb.forms, g, c2), wb.quad_flow, wb.par);
      if (std::abs(d1.value - d2.value) > d1.error + d2.error + 1e-6) ++fails;
    }
    rep.checks.push_back(record("flow-action-isometry", "inq", 8, static_cast<double>(fails), 0.0,
                                fails == 0));
  }
  finish(rep);
  return rep;
}

// ----------------------------------------------------------- periodic suite

SuiteReport suite_periodic(const Workbench& wb, Rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "periodic";
  std::size_t fails = 0;
  double worst = 0;
  for (long m = 1; m <= 4; ++m) {
    PeriodicCount pc = periodic_count(f, m);
    Int brute = periodic_count_bruteforce(f, m, pc.lattice_solutions);
    if (pc.lattice_solutions != brute) {
      ++fails;
      worst = std::max(worst, std::abs(to_double(Int(pc.lattice_solutions - brute))));
    }
    if (pc.total != pc.lattice_solutions * pow(f.d, static_cast<unsigned>(m))) ++fails;
  }
  rep.checks.push_back(record("lattice-solutions", "l3ii", 4, worst, 0.0, fails == 0));
  finish(rep);
  return rep;
}

// ----------------------------------------------------------- quotient suite

SuiteReport suite_quotient(const Workbench& wb, Rng rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "quotient";
  long d = f.d.convert_to<long>();

  {  // reduction homomorphism, surjectivity (s = d+1, minimal exponent)
    long s_hom = d + 1;
    long r_hom = order_of_reduction(f, s_hom);
    FiniteAffineGroup g = build_quotient(f, s_hom, r_hom);
    rep.notes.push_back("hom check at s=" + std::to_string(s_hom) +
                        ", r=" + std::to_string(r_hom));
    std::size_t fails = 0;
    for (std::size_t i = 0; i < wb.cfg.samples.hom_pairs; ++i) {
      GammaElement a = random_gamma(f, rng, 3, 3);
      GammaElement b = random_gamma(f, rng, 3, 3);
      if (g.table.times(reduce_element(g, f, a), reduce_element(g, f, b)) !=
          reduce_element(g, f, gamma_mul(f, a, b)))
        ++fails;
    }
    // surjectivity: generator images generate
    std::set<std::uint32_t> span{0};
    std::vector<std::uint32_t> work{0};
    std::vector<GammaElement> gens;
    for (std::size_t i = 0; i < f.n; ++i)
      gens.push_back(gamma_make(f, rf_from_order(oe_basis(f, i)), 0));
    gens.push_back(gamma_make(f, rf_zero(f), 1));
    for (auto& ge : gens) {
      auto x = reduce_element(g, f, ge);
      if (span.insert(x).second) work.push_back(x);
    }
    for (std::size_t i = 0; i < work.size(); ++i)
      for (std::size_t j = 0; j < work.size(); ++j) {
        auto p2 = g.table.times(work[i], work[j]);
        if (span.insert(p2).second) work.push_back(p2);
      }
    if (span.size() != g.table.size) ++fails;
    rep.checks.push_back(record("alpha-homomorphism", "hgp", wb.cfg.samples.hom_pairs,
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  {  // trichotomy
    if (f.n == 1) {
      try {
        auto [s, r] = find_sr(f, 3, SrBounds{});
        FiniteAffineGroup g = build_quotient(f, s, r);
        HgpReport hr = hgp_check(g, 3, wb.cfg.budgets.subgroup_bound);
        bool exact_r = Int(r) == gl_order(f.n, Int(s));
        rep.notes.push_back("trichotomy at s=" + std::to_string(s) + ", r=" + std::to_string(r) +
                            ", N=3, classes=" + std::to_string(hr.rows.size()) +
                            (exact_r ? "" : ", relaxed-r"));
        rep.checks.push_back(record("hgp-trichotomy", "hgp", static_cast<long>(hr.rows.size()),
                                    hr.pass ? 0.0 : 1.0, 0.0, hr.pass && exact_r));
      } catch (const Error& e) {
        rep.notes.push_back(std::string("find_sr: ") + e.what());
        rep.checks.push_back(record("hgp-trichotomy", "hgp", 0, 1.0, 0.0, false));
      }
    } else if (gcd_int(Int(3), f.d) == 1) {
      long r = gl_order(f.n, Int(3)).convert_to<long>();
      FiniteAffineGroup g = build_quotient(f, 3, r);
      HgpReport hr = hgp_check(g, 3, wb.cfg.budgets.subgroup_bound);
      rep.notes.push_back("trichotomy at s=3, r=" + std::to_string(r) +
                          ", N=3, classes=" + std::to_string(hr.rows.size()));
      rep.checks.push_back(record("hgp-trichotomy", "hgp", static_cast<long>(hr.rows.size()),
                                  hr.pass ? 0.0 : 1.0, 0.0, hr.pass));
    } else {
      // the full order of GL_n(Z/s) is infeasible at desk scale here; run the
      // relaxed-exponent variant at N = 1 and flag it
      long s = d + 1;
      long r = order_of_reduction(f, s);
      FiniteAffineGroup g = build_quotient(f, s, r);
      HgpReport hr = hgp_check(g, 1, wb.cfg.budgets.subgroup_bound);
      rep.notes.push_back("trichotomy at s=" + std::to_string(s) + ", r=" + std::to_string(r) +
                          ", N=1, relaxed-r (full GL order infeasible)");
      rep.checks.push_back(record("hgp-trichotomy", "hgp", static_cast<long>(hr.rows.size()),
                                  hr.pass ? 0.0 : 1.0, 0.0, hr.pass));
    }
  }
  {  // case (a) certificates for m <= 8
    std::size_t fails = 0;
    double worst = 0;
    for (long m = 1; m <= 8; ++m) {
      CaseAReport ca = case_a_certificate(f, m, wb.cfg.samples.case_a, rng);
      if (!ca.pass) ++fails;
      worst = std::max(worst, ca.max_scaled_displacement * m);  // must stay < 1
    }
    rep.checks.push_back(record("fhm-case-a", "fhm", 8 * static_cast<long>(wb.cfg.samples.case_a),
                                worst, 1.0, fails == 0));
  }
  {  // case (b) contraction: strictly decreasing max distance over k^1..k^3
    long k0 = 3;
    while (gcd_int(Int(k0), f.d) != 1) k0 += 2;
    std::uint64_t probe_seed = rng.next();
    double prev = std::numeric_limits<double>::infinity();
    bool strict = true;
    std::string dists;
    for (long k : {k0, k0 * k0, k0 * k0 * k0}) {
      CaseBReport cb = case_b_contraction_probe(f, wb.forms, 3, k, 2.0, wb.cfg.samples.case_b,
                                                Rng(probe_seed), wb.quad_flow, wb.par);
      if (!(cb.max_distance < prev)) strict = false;
      prev = cb.max_distance;
      dists += (dists.empty() ? "" : ", ") + std::to_string(cb.max_distance);
    }
    rep.notes.push_back("case-b max distances over k in {" + std::to_string(k0) + "^1..^3}: " +
                        dists);
    rep.checks.push_back(record("fhm-case-b", "fhm", 3 * static_cast<long>(wb.cfg.samples.case_b),
                                prev, 0.0, strict));
  }
  finish(rep);
  return rep;
}

// ---------------------------------------------------------- embedding suite

SuiteReport suite_embedding(const Workbench& wb, Rng rng) {
  const FieldDescriptor& f = wb.field;
  SuiteReport rep;
  rep.suite = "embedding";

  {  // companion matrix embeds with T = identity
    Embedding e = build_embedding(f.companion);
    bool ok = e.conjugator == RatMat::identity(f.n);
    rep.checks.push_back(record("companion-identity", "two", 1, ok ? 0.0 : 1.0, 0.0, ok));
  }
  {  // the [[3,1],[1,1]] example: exact conjugation and homomorphism
    IntMat m(2, 2);
    m.at(0, 0) = 3;
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    m.at(1, 1) = 1;
    Embedding e = build_embedding(m);
    bool conj_ok =
        mat_mul(mat_mul(e.conjugator, RatMat::from(m)), e.conjugator_inv) ==
        RatMat::from(e.target.companion);
    std::size_t fails = conj_ok ? 0 : 1;
    for (std::size_t i = 0; i < wb.cfg.samples.embedding_pairs; ++i) {
      RatVec b1{Rat(rng.range(-8, 8), 2), Rat(rng.range(-8, 8), 2)};
      RatVec b2{Rat(rng.range(-8, 8), 2), Rat(rng.range(-8, 8), 2)};
      long k1 = rng.range(-2, 2), k2 = rng.range(-2, 2);
      RatMat mk = mat_pow_signed(m, k1);
      RatVec src = vec_mul(b2, mk);
      for (int t = 0; t < 2; ++t) src[t] += b1[t];
      auto lhs = e.apply(src, k1 + k2);
      auto rhs = k_semidirect_mul(e.target, e.apply(b1, k1), e.apply(b2, k2));
      if (!(lhs == rhs)) ++fails;
      if (!(b1 == b2) && e.apply(b1, 0) == e.apply(b2, 0)) ++fails;  // injectivity
    }
    rep.checks.push_back(record("embedding-homomorphism", "two",
                                static_cast<long>(wb.cfg.samples.embedding_pairs),
                                static_cast<double>(fails), 0.0, fails == 0));
  }
  finish(rep);
  return rep;
}

}  // namespace

Report run_suite(const SuiteConfig& config) {
  Workbench wb = make_workbench(config);
  Report rep;
  rep.config = config;
  rep.field_poly = wb.field.poly_string();
  rep.n = wb.field.n;
  rep.d = wb.field.d;
  rep.factorization = wb.primes;

  std::vector<std::string> wanted = config.suites.empty() ? all_suite_names() : config.suites;
  using SuiteFn = SuiteReport (*)(const Workbench&, Rng);
  auto pick = [](const std::string& name) -> SuiteFn {
    if (name == "tree") return suite_tree;
    if (name == "folding") return suite_folding;
    if (name == "diagonal") return suite_diagonal;
    if (name == "metric") return suite_metric;
    if (name == "flow") return suite_flow;
    if (name == "periodic") return suite_periodic;
    if (name == "quotient") return suite_quotient;
    if (name == "embedding") return suite_embedding;
    fail(Err::ConfigInvalid, "unknown suite " + name);
  };

  Rng root(config.seed);
  std::vector<Rng> rngs;
  for (const std::string& name : wanted) rngs.push_back(Rng(config.seed).fork(name));

  if (config.budgets.workers > 1) {
    std::vector<std::future<SuiteReport>> futs;
    for (std::size_t i = 0; i < wanted.size(); ++i)
      futs.push_back(std::async(std::launch::async, pick(wanted[i]), std::cref(wb), rngs[i]));
    for (auto& fu : futs) rep.suites.push_back(fu.get());
  } else {
    for (std::size_t i = 0; i < wanted.size(); ++i)
      rep.suites.push_back(pick(wanted[i])(wb, rngs[i]));
  }
  for (const SuiteReport& s : rep.suites) rep.pass = rep.pass && s.pass;
  return rep;
}

std::string report_to_json(const Report& rep) {
  json j;
  j["config"] = json::object();
  {
    json m = json::array();
    for (const Int& c : rep.config.m_coeffs) m.push_back(c.convert_to<long long>());
    j["config"]["m"] = m;
    j["config"]["seed"] = rep.config.seed;
    json suites = json::array();
    for (auto& s : rep.config.suites.empty() ? all_suite_names() : rep.config.suites)
      suites.push_back(s);
    j["config"]["suites"] = suites;
  }
  j["field"] = json::object();
  j["field"]["poly"] = rep.field_poly;
  j["field"]["degree"] = rep.n;
  j["field"]["d"] = rep.d.convert_to<long long>();
  {
    json fac = json::array();
    for (const PrimeFactor& p : rep.factorization) {
      json e = json::object();
      e["p"] = p.p.convert_to<long long>();
      json g = json::array();
      for (const Int& c : p.gpoly) g.push_back(c.convert_to<long long>());
      e["g"] = g;
      e["e"] = p.e;
      e["f"] = p.f;
      e["k"] = p.k;
      e["norm"] = p.residue_norm().convert_to<long long>();
      fac.push_back(e);
    }
    j["field"]["factorization"] = fac;
  }
  {
    json suites = json::array();
    for (const SuiteReport& s : rep.suites) {
      json sj = json::object();
      sj["suite"] = s.suite;
      sj["pass"] = s.pass;
      json notes = json::array();
      for (auto& n : s.notes) notes.push_back(n);
      sj["notes"] = notes;
      json checks = json::array();
      for (const CheckRecord& c : s.checks) {
        json cj = json::object();
        cj["name"] = c.name;
        cj["lemma"] = c.lemma;
        cj["samples"] = c.samples;
        cj["worst_case"] = c.worst_case;
        cj["tolerance"] = c.tolerance;
        cj["pass"] = c.pass;
        checks.push_back(cj);
      }
      sj["checks"] = checks;
      suites.push_back(sj);
    }
    j["suites"] = suites;
  }
  j["pass"] = rep.pass;
  return j.dump(2) + "\n";
}

std::string export_tree(const SuiteConfig& config, long radius) {
  check(radius >= 0 && radius <= config.budgets.ball_radius + 2, Err::BudgetExceeded,
        "radius exceeds the ball budget");
  FieldDescriptor f;
  try {
    f = define_field(config.m_coeffs);
  } catch (const Error& e) {
    fail(Err::FieldRejected, e.what());
  }
  return export_tree_dot(f, radius);
}

std::string periodic_csv(const SuiteConfig& config, long max_m) {
  check(max_m >= 1, Err::ConfigInvalid, "max_m >= 1");
  FieldDescriptor f;
  try {
    f = define_field(config.m_coeffs);
  } catch (const Error& e) {
    fail(Err::FieldRejected, e.what());
  }
  std::ostringstream os;
  os << "m,lattice_solutions,total\n";
  for (long m = 1; m <= max_m; ++m) {
    PeriodicCount pc = periodic_count(f, m);
    os << m << "," << pc.lattice_solutions.str() << "," << pc.total.str() << "\n";
  }
  return os.str();
}

std::string trichotomy_csv(const SuiteConfig& config, long s, long r, long n_required) {
  FieldDescriptor f;
  try {
    f = define_field(config.m_coeffs);
  } catch (const Error& e) {
    fail(Err::FieldRejected, e.what());
  }
  FiniteAffineGroup g = build_quotient(f, s, r);
  HgpReport rep = hgp_check(g, n_required, config.budgets.subgroup_bound);
  std::ostringstream os;
  os << "class_id,order,class_size,hyperelementary,pr_order,pr_index,k_max,case\n";
  auto classes = subgroup_enumerate(g.table, config.budgets.subgroup_bound);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const TrichotomyRow& row = rep.rows[i];
    os << row.class_id << "," << row.order << "," << classes[i].class_size << ","
       << (row.hyper ? 1 : 0) << "," << row.pr_order << "," << row.pr_index << "," << row.k_max
       << "," << row.case_label << "\n";
  }
  return os.str();
}

}  // namespace horolab
