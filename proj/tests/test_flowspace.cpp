#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flowspace.hpp"

using namespace horolab;

namespace {
FieldDescriptor bs2() { return define_field({Int(-2)}); }
FieldDescriptor sqrt2() { return define_field({Int(-2), Int(0)}); }

constexpr long kRange = 96;

bool same_tree_point(const FieldDescriptor& f, const TreePoint& a, const TreePoint& b) {
  return tree_point_distance(f, a, b) < 1e-9;
}

HorizontalGeodesic random_geodesic(const FieldDescriptor& f, Rng& rng) {
  TreePoint z = tree_point(random_vertex(f, rng, 3), 0.5 * rng.real01());
  Vec w(f.n);
  for (auto& c : w) c = 2 * rng.real01() - 1;
  if (rng.below(2)) {
    auto c = psi(z, w);
    c.c_minus = rng.real01() * 2 - 1;
    return c;
  }
  return constant_geodesic(z, w);
}
}  // namespace

TEST_CASE("psi evaluation") {
  auto f = bs2();
  auto base = tree_point(base_vertex(f));
  Vec w{0.5};
  auto c = psi(base, w);

  // constant before time 0
  CHECK(same_tree_point(f, geodesic_eval(f, c, -5.0), base));
  CHECK(same_tree_point(f, geodesic_eval(f, c, 0.0), base));

  // at time 2: height -2 on the spine
  auto p2 = geodesic_eval(f, c, 2.0);
  CHECK(height_of(p2) == doctest::Approx(-2.0));
  CHECK(p2.anchor == ancestor(f, base_vertex(f), 2));

  // unit speed between samples
  for (double t : {0.25, 1.5, 3.75}) {
    auto pa = geodesic_eval(f, c, t);
    auto pb = geodesic_eval(f, c, t + 0.5);
    CHECK(tree_point_distance(f, pa, pb) == doctest::Approx(0.5));
  }
}

TEST_CASE("psi equivariance") {
  for (auto f : {bs2(), sqrt2()}) {
    FiberForms forms(f, kRange);
    Rng rng(5);
    for (int s = 0; s < 100; ++s) {
      TreePoint z = tree_point(random_vertex(f, rng, 3));
      Vec w(f.n);
      for (auto& c : w) c = 2 * rng.real01() - 1;
      auto g = random_gamma(f, rng, 2, 2);
      auto lhs = act_geodesic(f, forms, g, psi(z, w));
      TreePoint gz{act_vertex(f, g, z.anchor), z.t};
      auto rhs = psi(gz, forms.affine(f, g, w));
      for (double t : {-1.0, 0.0, 1.0, 3.0}) {
        CHECK(same_tree_point(f, geodesic_eval(f, lhs, t), geodesic_eval(f, rhs, t)));
      }
      for (std::size_t i = 0; i < f.n; ++i)
        CHECK(lhs.fiber[i] == doctest::Approx(rhs.fiber[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("flow properties") {
  auto f = bs2();
  auto base = tree_point(base_vertex(f));
  auto c = psi(base, {1.0});

  // tau = 0 identity
  auto c0 = flow(f, c, 0.0);
  CHECK(c0.c_minus == c.c_minus);

  // flow(psi(z,w), tau)(0) = psi(z,w)(tau)
  for (double tau : {-2.0, 0.5, 3.25}) {
    auto flowed = flow(f, c, tau);
    CHECK(same_tree_point(f, geodesic_eval(f, flowed, 0.0), geodesic_eval(f, c, tau)));
  }

  // group property on the representation
  Rng rng(9);
  for (int s = 0; s < 50; ++s) {
    auto g = random_geodesic(f, rng);
    double t1 = 4 * rng.real01() - 2, t2 = 4 * rng.real01() - 2;
    auto a = flow(f, flow(f, g, t1), t2);
    auto b = flow(f, g, t1 + t2);
    CHECK(geodesic_height(a, 0.37) == doctest::Approx(geodesic_height(b, 0.37)));
    CHECK(same_tree_point(f, geodesic_eval(f, a, 1.3), geodesic_eval(f, b, 1.3)));
  }

  // psi followed by evaluation at 0 is the identity on model points
  for (int s = 0; s < 20; ++s) {
    TreePoint z = tree_point(random_vertex(f, rng, 3), rng.real01() * 0.9);
    CHECK(same_tree_point(f, geodesic_eval(f, psi(z, {0.0}), 0.0), z));
  }
}

TEST_CASE("fs_distance basics") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  QuadratureSpec q;

  auto base = tree_point(base_vertex(f));
  auto c = psi(base, {0.25});
  auto d0 = fs_distance(f, forms, c, c, q, par);
  CHECK(d0.value == 0.0);
  CHECK(d0.error == 0.0);

  // nearly identical pair: small value inside the certified bars
  auto c_eps = psi(base, {0.25 + 1e-6});
  auto d_eps = fs_distance(f, forms, c, c_eps, q, par);
  CHECK(d_eps.value <= 1e-5);
  CHECK(d_eps.error < 0.05);

  // two constants at X-distance D: integral weight is exactly 1
  TreeVertex v = base_vertex(f);
  for (int i = 0; i < 3; ++i) v = children(f, v)[0];
  auto ca = constant_geodesic(base, {0.0});
  auto cb = constant_geodesic(tree_point(v), {0.0});
  auto dv = fs_distance(f, forms, ca, cb, q, par);
  CHECK(std::abs(dv.value - 3.0) <= dv.error + 1e-9);
  CHECK(dv.error < 0.05);

  // two vertical lines diverging at unit speed after their junction:
  // d(t) = 2t for t >= 0, integral = 1
  auto l1 = line_geodesic(f, rf_zero(f), 0.0, {0.0});
  auto l2 = line_geodesic(f, rf_from_order(oe_one(f)), 0.0, {0.0});
  auto dl = fs_distance(f, forms, l1, l2, q, par);
  CHECK(std::abs(dl.value - 1.0) <= dl.error + 1e-9);
  CHECK(dl.error < 0.05);
}

TEST_CASE("fs_distance is a pseudo-metric on samples") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  QuadratureSpec q;
  q.nodes = 120;
  Rng rng(21);
  for (int s = 0; s < 8; ++s) {
    auto a = random_geodesic(f, rng);
    auto b = random_geodesic(f, rng);
    auto c = random_geodesic(f, rng);
    auto dab = fs_distance(f, forms, a, b, q, par);
    auto dba = fs_distance(f, forms, b, a, q, par);
    CHECK(dab.value == doctest::Approx(dba.value).epsilon(1e-9));  // symmetry exact
    auto dac = fs_distance(f, forms, a, c, q, par);
    auto dcb = fs_distance(f, forms, c, b, q, par);
    CHECK(dab.value - dab.error <= dac.value + dcb.value + dac.error + dcb.error + 1e-9);
  }
}

TEST_CASE("gamma acts isometrically on the flow space") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  QuadratureSpec q;
  q.nodes = 120;
  Rng rng(23);
  for (int s = 0; s < 6; ++s) {
    auto a = random_geodesic(f, rng);
    auto b = random_geodesic(f, rng);
    auto g = random_gamma(f, rng, 2, 2);
    auto d1 = fs_distance(f, forms, a, b, q, par);
    auto d2 = fs_distance(f, forms, act_geodesic(f, forms, g, a), act_geodesic(f, forms, g, b), q,
                          par);
    CHECK(std::abs(d1.value - d2.value) <= d1.error + d2.error + 1e-6);
  }
}

TEST_CASE("lipschitz_check") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  QuadratureSpec q;
  q.nodes = 120;

  auto base = tree_point(base_vertex(f));
  auto c = psi(base, {0.5});

  // tau = 0: equality within bars
  auto r0 = lipschitz_check(f, forms, c, c, 0.0, q, par);
  CHECK(r0.pass);

  Rng rng(25);
  for (int s = 0; s < 10; ++s) {
    auto a = random_geodesic(f, rng);
    auto b = random_geodesic(f, rng);
    double tau = 3 * rng.real01() - 1.5;
    auto rep = lipschitz_check(f, forms, a, b, tau, q, par);
    CHECK(rep.pass);
  }
}

TEST_CASE("periodic counts") {
  auto f = bs2();
  auto c1 = periodic_count(f, 1);
  CHECK(c1.lattice_solutions == 1);
  CHECK(c1.total == 2);
  auto c2 = periodic_count(f, 2);
  CHECK(c2.lattice_solutions == 3);
  CHECK(c2.total == 12);

  auto f2 = sqrt2();
  auto s2 = periodic_count(f2, 2);
  CHECK(s2.lattice_solutions == 1);
  CHECK(s2.total == 4);

  // brute-force grid oracle, all shipped fields, m <= 4
  for (auto fld : {bs2(), sqrt2(), define_field({Int(-6), Int(0)}), define_field({Int(2), Int(-4)})}) {
    for (long m = 1; m <= 4; ++m) {
      auto pc = periodic_count(fld, m);
      CHECK(pc.lattice_solutions == periodic_count_bruteforce(fld, m, pc.lattice_solutions));
    }
  }
}

TEST_CASE("lpar_probe") {
  auto f = bs2();
  FiberForms forms(f, kRange);
  DistParams par;
  QuadratureSpec q;
  q.nodes = 160;
  Rng rng(31);

  auto base = tree_point(base_vertex(f));

  // w1 = w2: threshold 0
  auto triv = lpar_probe(f, forms, base, {1.0}, {1.0}, 0.2, 16, q, par, rng);
  CHECK(triv.threshold_n == 0);

  auto rep = lpar_probe(f, forms, base, {0.0}, {1.0}, 0.2, 64, q, par, rng);
  CHECK(rep.achieved);
  CHECK(rep.threshold_n < 64);
  CHECK(rep.worst_tail_fs <= 0.2);
  CHECK(rep.worst_tail_dx < 0.05);
  CHECK(rep.t_const == static_cast<int>(std::floor(std::log(20.0))) + 1);
  CHECK(rep.beta_hat >= 1.0);

  // independence: a different base point at the same height gives a
  // threshold within a factor 2
  auto z2 = tree_point(children(f, ancestor(f, base_vertex(f), 1))[1]);
  REQUIRE(z2.anchor.height == 0);
  auto rep2 = lpar_probe(f, forms, z2, {0.0}, {1.0}, 0.2, 64, q, par, rng);
  long lo = std::max(1l, std::min(rep.threshold_n, rep2.threshold_n));
  long hi = std::max({1l, rep.threshold_n, rep2.threshold_n});
  CHECK(hi <= 2 * lo);
}
