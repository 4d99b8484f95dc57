#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geometry.hpp"

using namespace horolab;

namespace {
FieldDescriptor bs2() { return define_field({Int(-2)}); }
FieldDescriptor sqrt2() { return define_field({Int(-2), Int(0)}); }
FieldDescriptor shift2() { return define_field({Int(2), Int(-4)}); }

constexpr long kRange = 96;
}  // namespace

TEST_CASE("fiber forms") {
  auto f = bs2();
  FiberForms forms(f, kRange);

  // identity at height 0
  auto q0 = fiber_form(forms, 0.0);
  CHECK(q0.matrix[0] == doctest::Approx(1.0));

  // x - 2, f = 1: Q_1(u) = (u/2)^2
  Vec u{1.0};
  CHECK(forms.quad(1, u) == doctest::Approx(0.25));
  CHECK(forms.quad(-1, u) == doctest::Approx(4.0));
  CHECK(forms.quad_at(0.5, u) == doctest::Approx(0.5 * 1.0 + 0.5 * 0.25));

  // equivariance: Q_{f+k}(u A^k) = Q_f(u)
  auto f2 = sqrt2();
  FiberForms forms2(f2, kRange);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    double fh = rng.real01() * 6 - 3;
    long k = rng.range(-3, 3);
    Vec w{2 * rng.real01() - 1, 2 * rng.real01() - 1};
    // w * A^k in doubles via the exact rational matrix
    RatMat ak = mat_pow_signed(f2.companion, k);
    Vec wk(2, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) wk[j] += w[i] * to_double(ak.at(i, j));
    CHECK(forms2.quad_at(fh + k, wk) == doctest::Approx(forms2.quad_at(fh, w)).epsilon(1e-12));
  }
}

TEST_CASE("path_length") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  auto base = base_vertex(f);

  // purely horizontal path over 3 tree edges: length exactly 3
  PathPolyline horiz;
  TreeVertex v = base;
  horiz.push_back({tree_point(v), {0.0}});
  for (int i = 0; i < 3; ++i) {
    v = children(f, v)[0];
    horiz.push_back({tree_point(v), {0.0}});
  }
  CHECK(path_length(f, forms, horiz, 1) == doctest::Approx(3.0));
  CHECK(path_length(f, forms, horiz, 64) == doctest::Approx(3.0));

  // zero-length path
  PathPolyline zero{{tree_point(base), {0.0}}};
  CHECK(path_length(f, forms, zero, 4) == 0.0);

  // straight fiber segment at constant height 0 from w=0 to w=1: length 1
  PathPolyline fiber{{tree_point(base), {0.0}}, {tree_point(base), {1.0}}};
  CHECK(path_length(f, forms, fiber, 1) == doctest::Approx(1.0).epsilon(1e-9));

  // monotone non-increasing under subdivision on a slanted segment
  PathPolyline slant{{tree_point(base), {0.0}}, {tree_point(children(f, base)[1]), {0.7}}};
  double prev = path_length(f, forms, slant, 1);
  for (int s : {2, 4, 8, 16, 32}) {
    double cur = path_length(f, forms, slant, s);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }

  // invalid: breakpoints not on a common edge
  TreeVertex far = children(f, children(f, base)[0])[0];
  PathPolyline bad{{tree_point(base), {0.0}}, {tree_point(far), {0.0}}};
  CHECK_THROWS_WITH_AS((void)path_length(f, forms, bad, 1), doctest::Contains("InvalidPolyline"),
                       Error);
}

TEST_CASE("distance bounds: sandwich basics") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  auto base = base_vertex(f);

  // p = q
  ModelPoint p{tree_point(base), {0.0}};
  auto same = distance_bounds(f, forms, p, p, par);
  CHECK(same.lo == 0.0);
  CHECK(same.hi <= 1e-9);

  // same fiber, tree distance 3: sandwich closes exactly
  TreeVertex v = base;
  for (int i = 0; i < 3; ++i) v = children(f, v)[1];
  ModelPoint q{tree_point(v), {0.0}};
  auto iv = distance_bounds(f, forms, p, q, par);
  CHECK(iv.lo == doctest::Approx(3.0));
  CHECK(iv.hi == doctest::Approx(3.0).epsilon(1e-6));

  // fiber separation 8 at the base: rising into the contracting region beats
  // the flat chord, so the upper bound is well below 8
  ModelPoint r{tree_point(base), {8.0}};
  auto iv2 = distance_bounds(f, forms, p, r, par);
  CHECK(iv2.hi < 8.0);
  CHECK(iv2.lo > 0.0);
  CHECK(iv2.lo <= iv2.hi);

  // and an explicit competitor: the test polyline through height 3
  // f1=0 up to 3, move fiber, come back: 3 + 8/8 + 3 = 7 is an upper bound
  CHECK(iv2.hi <= 7.0 + 1e-6);
}

TEST_CASE("distance bounds: lemma-dd lower bound and action isometry") {
  for (auto fld : {bs2(), sqrt2()}) {
    FiberForms forms(fld, kRange);
    DistParams par;
    Rng rng(17);
    for (int t = 0; t < 25; ++t) {
      ModelPoint p{tree_point(random_vertex(fld, rng, 3)), Vec(fld.n)};
      ModelPoint q{tree_point(random_vertex(fld, rng, 3)), Vec(fld.n)};
      for (auto& c : p.w) c = 2 * rng.real01() - 1;
      for (auto& c : q.w) c = 2 * rng.real01() - 1;
      auto iv = distance_bounds(fld, forms, p, q, par);
      double dt = tree_point_distance(fld, p.z, q.z);
      CHECK(iv.lo >= dt - 1e-9);  // d >= tree distance of projections
      CHECK(iv.lo <= iv.hi + 1e-12);

      // intervals of g-translated pairs overlap and uppers agree to twice the
      // optimizer tolerance
      auto g = random_gamma(fld, rng, 2, 2);
      auto gp = act_point(fld, forms, g, p);
      auto gq = act_point(fld, forms, g, q);
      auto gv = distance_bounds(fld, forms, gp, gq, par);
      CHECK(gv.lo <= iv.hi + 1e-6);
      CHECK(iv.lo <= gv.hi + 1e-6);
      CHECK(std::abs(gv.hi - iv.hi) <= 1e-2 * (1 + iv.hi));
    }

    // the action maps polylines to polylines of exactly equal length
    Rng rng2(31);
    for (int t = 0; t < 20; ++t) {
      TreeVertex v = random_vertex(fld, rng2, 2);
      PathPolyline pl;
      ModelPoint cur{tree_point(v), Vec(fld.n)};
      for (auto& c : cur.w) c = 2 * rng2.real01() - 1;
      pl.push_back(cur);
      for (int s = 0; s < 4; ++s) {
        TreeVertex next = rng2.below(2) ? parent(fld, pl.back().z.anchor)
                                        : children(fld, pl.back().z.anchor)[0];
        ModelPoint mp{tree_point(next), Vec(fld.n)};
        for (auto& c : mp.w) c = 2 * rng2.real01() - 1;
        pl.push_back(mp);
      }
      auto g = random_gamma(fld, rng2, 2, 2);
      PathPolyline gpl;
      for (auto& mp : pl) gpl.push_back(act_point(fld, forms, g, mp));
      double l1 = path_length(fld, forms, pl, 16);
      double l2 = path_length(fld, forms, gpl, 16);
      CHECK(l1 == doctest::Approx(l2).epsilon(1e-9));
    }
  }
}

TEST_CASE("corollary ddc inequality against certified bounds") {
  auto fld = sqrt2();
  FiberForms forms(fld, kRange);
  DistParams par;
  Rng rng(19);
  for (int t = 0; t < 25; ++t) {
    TreePoint z1 = tree_point(random_vertex(fld, rng, 3));
    TreePoint z2 = tree_point(random_vertex(fld, rng, 3));
    Vec w1{2 * rng.real01() - 1, 2 * rng.real01() - 1};
    Vec w2{2 * rng.real01() - 1, 2 * rng.real01() - 1};
    auto lhs = distance_bounds(fld, forms, {z1, w1}, {z2, w2}, par);
    auto rhs = distance_bounds(fld, forms, {z1, w1}, {z1, w2}, par);
    CHECK(lhs.hi >= 0.5 * rhs.lo - 1e-9);
  }
}

TEST_CASE("probe_vl") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;

  // w1 = w2: D_n = 0 for all n
  auto trivial = probe_vl(forms, 0.0, {1.0}, {1.0}, 0.1, 32, par);
  CHECK(trivial.threshold_n == 0);

  // unit separation at the base: threshold at most 10 for eps = 0.1
  auto rep = probe_vl(forms, 0.0, {0.0}, {1.0}, 0.1, 64, par);
  CHECK(rep.achieved);
  CHECK(rep.threshold_n <= 10);
  CHECK(rep.monotone_ok);
  CHECK(rep.worst_tail < 0.1);
}

TEST_CASE("probe_control") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  Rng rng(23);
  auto rep = probe_control(forms, 3, 160, rng, par);
  CHECK(rep.beta_hat >= 1.0);
  // fiber expansion by 2 per step toward the end bounds the ratio by 2^T
  CHECK(rep.beta_hat <= 8.0 + 1e-6);
  CHECK(rep.used > 0);
  CHECK(rep.stable);
}

TEST_CASE("probe_rads") {
  auto f = shift2();
  FiberForms forms(f, kRange);
  DistParams par;
  Rng rng(29);
  auto rep = probe_rads(forms, 1.0, 80, rng, par);
  CHECK(rep.eps_prime > 0.0);
  CHECK(rep.stable);
}
