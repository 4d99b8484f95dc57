#include "flowspace.hpp"

#include <algorithm>
#include <cmath>

namespace horolab {

namespace {
constexpr double kSameChain = 1e18;
}

HorizontalGeodesic constant_geodesic(const TreePoint& z, const Vec& w) {
  HorizontalGeodesic c;
  c.kind = GeodesicKind::Constant;
  c.anchor = z;
  c.fiber = w;
  return c;
}

HorizontalGeodesic psi(const TreePoint& z, const Vec& w) {
  HorizontalGeodesic c;
  c.kind = GeodesicKind::RayToEnd;
  c.anchor = z;
  c.c_minus = 0.0;
  c.fiber = w;
  return c;
}

HorizontalGeodesic line_geodesic(const FieldDescriptor& f, const RingFraction& b, double h0,
                                 const Vec& w) {
  HorizontalGeodesic c;
  c.kind = GeodesicKind::LineThroughEnd;
  c.line = b;
  long up = static_cast<long>(std::ceil(h0));
  c.anchor = {vertex(f, up, b), static_cast<double>(up) - h0};
  c.fiber = w;
  return c;
}

double geodesic_height(const HorizontalGeodesic& c, double t) {
  double f0 = height_of(c.anchor);
  switch (c.kind) {
    case GeodesicKind::Constant: return f0;
    case GeodesicKind::RayToEnd: return f0 - std::max(0.0, t - c.c_minus);
    case GeodesicKind::LineThroughEnd: return f0 + t;
  }
  return f0;
}

namespace {
// Point at height y on the descending chain through p (y <= height(p)).
TreePoint descend_to(const FieldDescriptor& f, const TreePoint& p, double y) {
  double drop = height_of(p) - y;
  double total = p.t + drop;
  long steps = static_cast<long>(std::floor(total + 1e-12));
  double frac = total - static_cast<double>(steps);
  if (frac < 0) {
    frac = 0;
  }
  return {ancestor(f, p.anchor, steps), frac};
}
}  // namespace

TreePoint geodesic_eval(const FieldDescriptor& f, const HorizontalGeodesic& c, double t) {
  switch (c.kind) {
    case GeodesicKind::Constant: return c.anchor;
    case GeodesicKind::RayToEnd: {
      if (t <= c.c_minus) return c.anchor;
      return descend_to(f, c.anchor, height_of(c.anchor) - (t - c.c_minus));
    }
    case GeodesicKind::LineThroughEnd: {
      double y = height_of(c.anchor) + t;
      long up = static_cast<long>(std::ceil(y - 1e-12));
      return {vertex(f, up, c.line), static_cast<double>(up) - y};
    }
  }
  return c.anchor;
}

HorizontalGeodesic flow(const FieldDescriptor& f, const HorizontalGeodesic& c, double tau) {
  HorizontalGeodesic out = c;
  switch (c.kind) {
    case GeodesicKind::Constant: break;
    case GeodesicKind::RayToEnd: out.c_minus = c.c_minus - tau; break;
    case GeodesicKind::LineThroughEnd: out.anchor = geodesic_eval(f, c, tau); break;
  }
  return out;
}

HorizontalGeodesic act_geodesic(const FieldDescriptor& f, const FiberForms& forms,
                                const GammaElement& g, const HorizontalGeodesic& c) {
  HorizontalGeodesic out = c;
  out.anchor = {act_vertex(f, g, c.anchor.anchor), c.anchor.t};
  out.fiber = forms.affine(f, g, c.fiber);
  if (c.kind == GeodesicKind::LineThroughEnd)
    out.line = rf_add(f, rf_shift(f, c.line, g.k), g.b);
  return out;
}

HorizontalGeodesic psi_tau(const FieldDescriptor& f, const TreePoint& z, const Vec& w,
                           double tau) {
  return flow(f, psi(z, w), tau);
}

namespace {
// Height of the junction of a vertical chain with the descending chain of a
// tree point (the chains merge at and below the junction vertex).
double junction_with_line(const FieldDescriptor& f, const TreePoint& p, const RingFraction& b) {
  TreeVertex on_line = vertex(f, p.anchor.height, b);
  return static_cast<double>(meet(f, p.anchor, on_line).height);
}
}  // namespace

double junction_height(const FieldDescriptor& f, const HorizontalGeodesic& a,
                       const HorizontalGeodesic& b) {
  bool la = a.kind == GeodesicKind::LineThroughEnd;
  bool lb = b.kind == GeodesicKind::LineThroughEnd;
  if (!la && !lb)
    return static_cast<double>(meet(f, a.anchor.anchor, b.anchor.anchor).height);
  if (la && lb) {
    RingFraction diff = rf_sub(f, a.line, b.line);
    if (diff.is_zero()) return kSameChain;
    if (diff.denom_exp > 0) return -static_cast<double>(diff.denom_exp);
    long v = 0;
    OrderElement cur = diff.numer;
    while (true) {
      auto q = x_divide(f, cur);
      if (!q) break;
      cur = *q;
      ++v;
    }
    return static_cast<double>(v);
  }
  return la ? junction_with_line(f, b.anchor, a.line) : junction_with_line(f, a.anchor, b.line);
}

namespace {
bool geodesic_identical(const HorizontalGeodesic& a, const HorizontalGeodesic& b) {
  if (a.kind != b.kind || a.fiber != b.fiber) return false;
  if (!(a.anchor.anchor == b.anchor.anchor) || a.anchor.t != b.anchor.t) return false;
  if (a.kind == GeodesicKind::RayToEnd && a.c_minus != b.c_minus) return false;
  if (a.kind == GeodesicKind::LineThroughEnd && !(a.line == b.line)) return false;
  return true;
}

// deterministic order on geodesics: makes fs_distance exactly symmetric
bool geodesic_before(const HorizontalGeodesic& a, const HorizontalGeodesic& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  double ha = height_of(a.anchor), hb = height_of(b.anchor);
  if (ha != hb) return ha < hb;
  if (a.c_minus != b.c_minus) return a.c_minus < b.c_minus;
  for (std::size_t i = 0; i < a.fiber.size() && i < b.fiber.size(); ++i)
    if (a.fiber[i] != b.fiber[i]) return a.fiber[i] < b.fiber[i];
  return vertex_key(a.anchor.anchor) < vertex_key(b.anchor.anchor);
}
}  // namespace

IntervalValue fs_distance(const FieldDescriptor& f, const FiberForms& forms,
                          const HorizontalGeodesic& c1_in, const HorizontalGeodesic& c2_in,
                          const QuadratureSpec& q, const DistParams& par) {
  if (geodesic_identical(c1_in, c2_in)) return {0.0, 0.0};
  const bool swap = geodesic_before(c2_in, c1_in);
  const HorizontalGeodesic& c1 = swap ? c2_in : c1_in;
  const HorizontalGeodesic& c2 = swap ? c1_in : c2_in;
  double fj = junction_height(f, c1, c2);

  auto frame_at = [&](double t) {
    double y1 = geodesic_height(c1, t);
    double y2 = geodesic_height(c2, t);
    return PairFrame{y1, y2, std::min({fj, y1, y2})};
  };
  auto dist_at = [&](double t) {
    // far nodes carry weight e^{-|t|}; a leaner profile search there keeps
    // the bounds certified and only widens a strongly damped term
    DistParams local = par;
    int cut = static_cast<int>(std::abs(t) / 2.0);
    local.overshoot = std::max(2, par.overshoot - cut);
    if (std::abs(t) > 6.0) {
      local.undershoot = std::min(par.undershoot, 1);
      local.max_sweeps = std::min(par.max_sweeps, 12);
    }
    return certified_distance_frame(forms, frame_at(t), c1.fiber, c2.fiber, local);
  };

  double t_max = q.t_max;
  check(t_max >= 1.0, Err::ConfigInvalid, "t_max >= 1");
  double h_base = 6.0 * (1.0 - std::exp(-t_max / 3.0)) / std::max(8, q.nodes);

  double value = 0.0, err = 0.0;
  // graded midpoint panels, symmetric around 0; the integrand is
  // (2+D)-Lipschitz times the weight, certified per panel
  for (int side = -1; side <= 1; side += 2) {
    double t0 = 0.0;
    while (t0 < t_max) {
      double h = std::min(h_base * std::exp(t0 / 3.0), t_max - t0);
      double mid = side * (t0 + 0.5 * h);
      Interval d = dist_at(mid);
      double wmid = 0.5 * std::exp(-std::abs(mid));
      value += 0.5 * (d.lo + d.hi) * wmid * h;
      err += 0.5 * (d.hi - d.lo) * wmid * h;  // sandwich width
      // |g'| <= (2 + D) e^{-|t|} / 2 on the panel (d is 2-Lipschitz in t)
      double dmax = d.hi + h;
      double lip = 0.5 * (2.0 + dmax) * std::exp(-t0);
      err += 0.25 * lip * h * h;
      t0 += h;
    }
  }
  double d_plus = dist_at(t_max).hi;
  double d_minus = dist_at(-t_max).hi;
  err += (d_plus + 2.0) * std::exp(-t_max) + (d_minus + 2.0) * std::exp(-t_max);
  return {value, err};
}

LipschitzReport lipschitz_check(const FieldDescriptor& f, const FiberForms& forms,
                                const HorizontalGeodesic& c1, const HorizontalGeodesic& c2,
                                double tau, const QuadratureSpec& q, const DistParams& par) {
  LipschitzReport rep;
  rep.tau = tau;
  rep.base = fs_distance(f, forms, c1, c2, q, par);
  rep.flowed = fs_distance(f, forms, flow(f, c1, tau), flow(f, c2, tau), q, par);
  double lo0 = rep.base.value - rep.base.error, hi0 = rep.base.value + rep.base.error;
  double lot = rep.flowed.value - rep.flowed.error, hit = rep.flowed.value + rep.flowed.error;
  double e = std::exp(std::abs(tau));
  bool violated = (lot > e * hi0) || (hit < (1.0 / e) * lo0);
  rep.pass = !violated;
  rep.inconclusive =
      (rep.base.error + rep.flowed.error) > 0.25 * (rep.base.value + rep.flowed.value) + 0.02;
  return rep;
}

PeriodicCount periodic_count(const FieldDescriptor& f, long m) {
  check(m >= 1, Err::ConfigInvalid, "m >= 1");
  IntMat am = mat_pow(f.companion, static_cast<unsigned>(m));
  for (std::size_t i = 0; i < f.n; ++i) am.at(i, i) -= 1;
  IntVec diag = snf_diagonal(am);
  Int prod = 1;
  for (const Int& di : diag) prod *= di;
  check(prod != 0, Err::SingularMatrix, "A^m - I is singular");
  Int det = abs(mat_det(am));
  check(prod == det, Err::Internal, "SNF diagonal vs determinant");
  PeriodicCount out;
  out.lattice_solutions = det;
  out.total = det * pow(f.d, static_cast<unsigned>(m));
  return out;
}

Int periodic_count_bruteforce(const FieldDescriptor& f, long m, const Int& q) {
  IntMat am = mat_pow(f.companion, static_cast<unsigned>(m));
  // count k in [0, q)^n with (k/q) A^m = k/q mod Z^n, i.e. k A^m = k mod q Z^n
  std::size_t n = f.n;
  IntVec k(n, Int(0));
  Int count = 0;
  while (true) {
    IntVec img = vec_mul(k, am);
    bool fixed = true;
    for (std::size_t i = 0; i < n && fixed; ++i)
      if ((img[i] - k[i]) % q != 0) fixed = false;
    if (fixed) ++count;
    std::size_t j = 0;
    while (j < n) {
      k[j] += 1;
      if (k[j] < q) break;
      k[j] = 0;
      ++j;
    }
    if (j == n) break;
  }
  return count;
}

LparReport lpar_probe(const FieldDescriptor& f, const FiberForms& forms, const TreePoint& z0,
                      const Vec& w1, const Vec& w2, double eps, long n_max,
                      const QuadratureSpec& q, const DistParams& par, Rng& rng) {
  check(eps > 0, Err::ConfigInvalid, "eps > 0");
  LparReport rep;
  rep.t_const = static_cast<int>(std::floor(std::log(4.0 / eps))) + 1;
  if (rep.t_const < 1) rep.t_const = 1;
  Rng sub = rng.fork("lpar-control");
  rep.beta_hat = probe_control(forms, rep.t_const, 48, sub, par).beta_hat;

  double f0 = height_of(z0);
  long threshold = 0;
  std::vector<double> fs_vals(n_max + 1, 0.0), dx_vals(n_max + 1, 0.0);
  for (long n = 1; n <= n_max; ++n) {
    Vec a(w1.size()), b(w2.size());
    for (std::size_t i = 0; i < w1.size(); ++i) {
      a[i] = w1[i] / n;
      b[i] = w2[i] / n;
    }
    IntervalValue fsd = fs_distance(f, forms, psi(z0, a), psi(z0, b), q, par);
    Interval dx = certified_distance_frame(forms, {f0, f0, f0}, a, b, par);
    fs_vals[n] = fsd.value + fsd.error;
    dx_vals[n] = dx.hi;
    if (fs_vals[n] > eps || dx_vals[n] >= eps / 4.0) threshold = n;
  }
  rep.threshold_n = threshold;
  rep.achieved = threshold < n_max;
  if (!rep.achieved) fail(Err::NotAchieved, "lpar_probe: n_max reached");
  for (long n = threshold + 1; n <= n_max; ++n) {
    rep.worst_tail_fs = std::max(rep.worst_tail_fs, fs_vals[n]);
    rep.worst_tail_dx = std::max(rep.worst_tail_dx, dx_vals[n]);
  }
  return rep;
}

}  // namespace horolab
