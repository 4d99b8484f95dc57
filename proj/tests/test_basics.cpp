#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "basics.hpp"

using namespace horolab;

TEST_CASE("floor_div rounds toward minus infinity") {
  CHECK(floor_div(Int(7), Int(2)) == 3);
  CHECK(floor_div(Int(-7), Int(2)) == -4);
  CHECK(floor_div(Int(-6), Int(2)) == -3);
  CHECK(floor_div(Int(-1), Int(4)) == -1);
}

TEST_CASE("Bareiss determinant") {
  IntMat m(2, 2);
  m.at(0, 0) = 0;
  m.at(0, 1) = 1;
  m.at(1, 0) = 6;
  m.at(1, 1) = 0;
  CHECK(mat_det(m) == -6);

  IntMat m3(3, 3);
  Int vals[9] = {2, 0, 1, 1, 3, -1, 0, 4, 5};
  for (int i = 0; i < 9; ++i) m3.a[i] = vals[i];
  // cofactor expansion by hand: 2*(15+4) - 0 + 1*(4-0) = 42
  CHECK(mat_det(m3) == 42);
}

TEST_CASE("char_poly matches companion recursion") {
  IntMat m(2, 2);
  m.at(0, 0) = 3;
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  m.at(1, 1) = 1;
  IntVec cp = char_poly(m);  // x^2 - 4x + 2
  REQUIRE(cp.size() == 3);
  CHECK(cp[0] == 2);
  CHECK(cp[1] == -4);
  CHECK(cp[2] == 1);
}

TEST_CASE("HNF of a rank-2 lattice and membership") {
  // lattice spanned by (0,1) and (6,0)
  IntMat g(2, 2);
  g.at(0, 0) = 0;
  g.at(0, 1) = 1;
  g.at(1, 0) = 6;
  g.at(1, 1) = 0;
  IntMat h = hnf_full_rank(g, Err::Internal, "rank");
  CHECK(h.at(0, 0) == 6);
  CHECK(h.at(0, 1) == 0);
  CHECK(h.at(1, 0) == 0);
  CHECK(h.at(1, 1) == 1);

  CHECK(lattice_contains(h, {Int(12), Int(5)}));
  CHECK_FALSE(lattice_contains(h, {Int(3), Int(0)}));

  IntVec r = lattice_reduce(h, {Int(13), Int(-2)});
  CHECK(r[0] == 1);
  CHECK(r[1] == 0);

  auto box = lattice_box(h);
  CHECK(box.size() == 6);
}

TEST_CASE("SNF diagonal counts lattice points") {
  IntMat m(2, 2);
  m.at(0, 0) = 2;
  m.at(0, 1) = 0;
  m.at(1, 0) = 0;
  m.at(1, 1) = 6;
  IntVec d = snf_diagonal(m);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == 2);
  CHECK(d[1] == 6);
  CHECK(d[1] % d[0] == 0);
}

TEST_CASE("factor_poly_p exhaustive and structured agree") {
  // x^2 mod 2
  auto f1 = factor_poly_p({0, 0, 1}, 2);
  REQUIRE(f1.size() == 1);
  CHECK(f1[0].first == PolyP{0, 1});
  CHECK(f1[0].second == 2);

  // x^2 - 6 mod 7 = x^2 + 1, irreducible
  CHECK(poly_irreducible_p({1, 0, 1}, 7));
  // x^2 - 6 mod 5 = (x-1)(x+1)
  auto f2 = factor_poly_p({-6 % 5 + 5, 0, 1}, 5);
  CHECK(f2.size() == 2);

  // larger prime path (DDF/EDF): x^4 - 1 mod 10007 has 2 linear + 1 quadratic
  auto f3 = factor_poly_p({10006, 0, 0, 0, 1}, 10007);
  int total_deg = 0;
  for (auto& [g, e] : f3) total_deg += (int(g.size()) - 1) * e;
  CHECK(total_deg == 4);
}

TEST_CASE("irreducibility over Q") {
  CHECK(irreducible_over_q({-2, 1}));            // x - 2
  CHECK(irreducible_over_q({-6, 0, 1}));         // x^2 - 6
  CHECK(irreducible_over_q({2, -4, 1}));         // x^2 - 4x + 2
  CHECK_FALSE(irreducible_over_q({-4, 0, 1}));   // (x-2)(x+2)
  CHECK_FALSE(irreducible_over_q({0, -4, 0, 1}));  // x(x^2-4)
  // Swinnerton-Dyer style: x^4 - 10x^2 + 1 is irreducible over Q but
  // reducible mod every prime; exercises the integer-search fallback.
  CHECK(irreducible_over_q({1, 0, -10, 0, 1}));
  CHECK_FALSE(irreducible_over_q({1, 2, 3, 2, 1}));  // (x^2+x+1)^2
}

TEST_CASE("rng determinism and bounds") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    auto v = c.below(10);
    CHECK(v < 10);
    auto r = c.range(-3, 3);
    CHECK(r >= -3);
    CHECK(r <= 3);
    auto x = c.real01();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  Rng d1 = Rng(5).fork("alpha");
  Rng d2 = Rng(5).fork("beta");
  CHECK(d1.next() != d2.next());
}

TEST_CASE("mat_pow_signed with negative exponents") {
  IntMat a(1, 1);
  a.at(0, 0) = 2;
  RatMat inv = mat_pow_signed(a, -3);
  CHECK(inv.at(0, 0) == Rat(1, 8));
}

TEST_CASE("inv_mod") {
  CHECK(inv_mod(Int(2), Int(3)) == 2);
  CHECK(inv_mod(Int(7), Int(13)) == 2);
  CHECK_THROWS_AS((void)inv_mod(Int(4), Int(6)), Error);
}
