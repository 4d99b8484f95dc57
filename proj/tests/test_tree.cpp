#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "tree.hpp"

using namespace horolab;

namespace {
FieldDescriptor bs2() { return define_field({Int(-2)}); }
FieldDescriptor sqrt6() { return define_field({Int(-6), Int(0)}); }

RingFraction rf_int(const FieldDescriptor& f, long v) {
  return rf_from_order(oe_from_int(f, Int(v)));
}

// independent BFS distance oracle on a ball
long bfs_distance(const FieldDescriptor& f, const TreeVertex& u, const TreeVertex& v,
                  long radius) {
  TreeBall ball = build_ball(f, u, radius);
  // BFS from u over the ball adjacency
  std::vector<std::vector<std::size_t>> adj(ball.verts.size());
  for (std::size_t i = 0; i < ball.verts.size(); ++i)
    if (ball.parent_idx[i] >= 0) {
      adj[i].push_back(static_cast<std::size_t>(ball.parent_idx[i]));
      adj[static_cast<std::size_t>(ball.parent_idx[i])].push_back(i);
    }
  std::vector<long> dist(ball.verts.size(), -1);
  dist[0] = 0;
  std::vector<std::size_t> q{0};
  for (std::size_t h = 0; h < q.size(); ++h) {
    std::size_t c = q[h];
    for (std::size_t w : adj[c])
      if (dist[w] < 0) {
        dist[w] = dist[c] + 1;
        q.push_back(w);
      }
  }
  auto it = ball.index.find(vertex_key(v));
  REQUIRE(it != ball.index.end());
  return dist[it->second];
}
}  // namespace

TEST_CASE("children and parent") {
  auto f = bs2();
  auto base = base_vertex(f);
  auto ch = children(f, base);
  REQUIRE(ch.size() == 2);
  std::set<std::string> keys;
  for (auto& c : ch) keys.insert(vertex_key(c));
  CHECK(keys == std::set<std::string>{"1|0", "1|1"});

  CHECK(parent(f, vertex(f, 1, rf_int(f, 1))) == base);

  auto f6 = sqrt6();
  CHECK(children(f6, base_vertex(f6)).size() == 6);
  // children are distinct and their parent is the original vertex
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    auto v = random_vertex(f6, rng, 3);
    auto cs = children(f6, v);
    CHECK(cs.size() == 6);
    std::set<std::string> ck;
    for (auto& c : cs) {
      ck.insert(vertex_key(c));
      CHECK(parent(f6, c) == v);
    }
    CHECK(ck.size() == 6);
  }
}

TEST_CASE("act_vertex basic properties") {
  auto f = bs2();
  auto base = base_vertex(f);

  // translation along the spine raises the height
  auto g01 = gamma_make(f, rf_zero(f), 1);
  auto moved = act_vertex(f, g01, base);
  CHECK(moved.height == 1);
  CHECK(moved == vertex(f, 1, rf_zero(f)));

  // integral translations fix the horoball: (1,0) fixes the base
  auto g10 = gamma_make(f, rf_int(f, 1), 0);
  CHECK(act_vertex(f, g10, base) == base);

  // but move the level-1 vertex above it
  CHECK(act_vertex(f, g10, vertex(f, 1, rf_zero(f))) == vertex(f, 1, rf_int(f, 1)));

  // group action: (g1 g2) v = g1 (g2 v); busemann additivity
  for (auto fld : {bs2(), sqrt6()}) {
    Rng rng(7);
    for (int t = 0; t < 80; ++t) {
      auto g1 = random_gamma(fld, rng, 3, 3);
      auto g2 = random_gamma(fld, rng, 3, 3);
      auto v = random_vertex(fld, rng, 4);
      CHECK(act_vertex(fld, gamma_mul(fld, g1, g2), v) ==
            act_vertex(fld, g1, act_vertex(fld, g2, v)));
      CHECK(busemann(act_vertex(fld, g1, v)) == busemann(v) + g1.k);
      // adjacency preserved: parent(g v) = g parent(v)
      CHECK(parent(fld, act_vertex(fld, g1, v)) == act_vertex(fld, g1, parent(fld, v)));
    }
  }
}

TEST_CASE("tree_distance examples and oracle") {
  auto f = bs2();
  auto base = base_vertex(f);
  CHECK(tree_distance(f, base, base) == 0);
  CHECK(tree_distance(f, base, vertex(f, 2, rf_int(f, 1))) == 2);
  CHECK(tree_distance(f, vertex(f, 1, rf_zero(f)), vertex(f, 1, rf_int(f, 1))) == 2);

  // BFS oracle on the radius-5 ball
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    auto u = random_vertex(f, rng, 2);
    auto v = random_vertex(f, rng, 2);
    long d = tree_distance(f, u, v);
    CHECK(d == bfs_distance(f, u, v, 5));
    CHECK(d == tree_distance(f, v, u));
  }

  // isometry of the action
  for (int t = 0; t < 40; ++t) {
    auto u = random_vertex(f, rng, 3);
    auto v = random_vertex(f, rng, 3);
    auto g = random_gamma(f, rng, 3, 3);
    CHECK(tree_distance(f, act_vertex(f, g, u), act_vertex(f, g, v)) == tree_distance(f, u, v));
  }
}

TEST_CASE("stabilizer of the base vertex") {
  auto f6 = sqrt6();
  auto basis = stabilizer_basis(f6, base_vertex(f6));
  REQUIRE(basis.size() == 2);
  for (auto& g : basis) CHECK(stabilizer_test(f6, g, base_vertex(f6)));

  // (0,1) never stabilizes (height shifts)
  auto f = bs2();
  auto shift = gamma_make(f, rf_zero(f), 1);
  Rng rng(13);
  for (int t = 0; t < 10; ++t)
    CHECK_FALSE(stabilizer_test(f, shift, random_vertex(f, rng, 3)));

  // (1/2, 0) moves the base
  auto half = gamma_make(f, rf_make(f, oe_from_int(f, 1), 1), 0);
  CHECK_FALSE(stabilizer_test(f, half, base_vertex(f)));

  // exact characterization: (b, k) stabilizes the base iff k = 0 and b in O
  for (auto fld : {bs2(), sqrt6()}) {
    Rng r2(17);
    for (int t = 0; t < 200; ++t) {
      auto g = random_gamma(fld, r2, 3, 2);
      bool expected = (g.k == 0) && (g.b.denom_exp == 0);
      CHECK(stabilizer_test(fld, g, base_vertex(fld)) == expected);
    }
    // conjugated basis stabilizes an arbitrary vertex
    auto v = random_vertex(fld, r2, 3);
    for (auto& g : stabilizer_basis(fld, v)) CHECK(stabilizer_test(fld, g, v));
  }
}

TEST_CASE("transitive_witness") {
  for (auto f : {bs2(), sqrt6()}) {
    auto base = base_vertex(f);
    CHECK(act_vertex(f, transitive_witness(f, base, base), base) == base);
    Rng rng(19);
    for (int t = 0; t < 100; ++t) {
      auto u = random_vertex(f, rng, 3);
      auto v = random_vertex(f, rng, 3);
      auto g = transitive_witness(f, u, v);
      CHECK(act_vertex(f, g, u) == v);
    }
  }
}

TEST_CASE("scalar action and its inverse") {
  auto f = bs2();
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    auto v = random_vertex(f, rng, 4);
    for (long u : {3l, 5l, 9l, 27l}) {
      auto w = scalar_mul_vertex(f, Int(u), v);
      CHECK(w.height == v.height);
      CHECK(scalar_div_vertex(f, Int(u), w) == v);
      CHECK(scalar_mul_vertex(f, Int(u), scalar_div_vertex(f, Int(u), v)) == v);
    }
  }
  CHECK_THROWS_WITH_AS((void)scalar_mul_vertex(f, Int(2), base_vertex(f)),
                       doctest::Contains("NotCoprime"), Error);
  // scalar action is a tree automorphism: preserves adjacency and distances
  for (int t = 0; t < 30; ++t) {
    auto u = random_vertex(f, rng, 3);
    auto v = random_vertex(f, rng, 3);
    CHECK(tree_distance(f, scalar_mul_vertex(f, Int(3), u), scalar_mul_vertex(f, Int(3), v)) ==
          tree_distance(f, u, v));
    CHECK(parent(f, scalar_mul_vertex(f, Int(5), u)) ==
          scalar_mul_vertex(f, Int(5), parent(f, u)));
  }
}

TEST_CASE("end e_x is fixed: parent chains merge after height shift") {
  auto f = bs2();
  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    auto v = random_vertex(f, rng, 3);
    auto g = random_gamma(f, rng, 2, 2);
    auto gv = act_vertex(f, g, v);
    // descend far enough; the parent chains of v and g*v merge
    auto a = ancestor(f, v, 8);
    auto b = ancestor(f, gv, 8 + g.k);
    CHECK(a == b);
  }
}

TEST_CASE("elementary folds") {
  // 3-star: fold two leaf edges -> 2-star
  FiniteTree star3{4, {{0, 1}, {0, 2}, {0, 3}}};
  auto folded = elementary_fold(star3, 0, 1);
  CHECK(folded.n_vertices == 3);
  CHECK(folded.edges.size() == 2);
  CHECK(folded.is_tree());

  // identical edge: unchanged
  auto same = elementary_fold(star3, 1, 1);
  CHECK(same.n_vertices == 4);
  CHECK(same.edges.size() == 3);

  CHECK_THROWS_WITH_AS((void)elementary_fold(FiniteTree{4, {{0, 1}, {1, 2}, {2, 3}}}, 0, 2),
                       doctest::Contains("NotIncident"), Error);

  // depth-2 binary slab: root r(0), children 1,2, grandchildren 3,4 (under 1)
  // and 5,6 (under 2); folding the sibling pair at the root merges 1 and 2,
  // giving a vertex of degree 5: the folded picture is a path with 4 leaves.
  FiniteTree slab{7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}};
  auto shape = elementary_fold(slab, 0, 1);
  CHECK(shape.n_vertices == 6);
  CHECK(shape.is_tree());
  auto deg = shape.degrees();
  std::multiset<std::size_t> degs(deg.begin(), deg.end());
  CHECK(degs == std::multiset<std::size_t>{1, 1, 1, 1, 1, 5});
}

TEST_CASE("prime tree structure for the x-2 field") {
  auto f = bs2();
  auto primes = factor_x(f);
  REQUIRE(primes.size() == 1);
  PrimeTree t{&f, &primes[0], 1};

  auto base = t.base();
  auto ch = t.children(base);
  CHECK(ch.size() == 2);
  CHECK(t.equal(t.parent(ch[0]), base));
  CHECK(t.equal(t.parent(ch[1]), base));
  CHECK_FALSE(t.equal(ch[0], ch[1]));
}

TEST_CASE("fold_to_power") {
  auto f = bs2();
  auto primes = factor_x(f);
  const auto& P = primes[0];

  SUBCASE("k = 1 is the identity map") {
    auto mapping = fold_to_power(f, P, 1, 3);
    PrimeTree t{&f, &P, 1};
    for (auto& [src, img] : mapping) {
      CHECK(src.level == img.level);
      CHECK(t.equal(src, img));
    }
  }

  SUBCASE("k = 2: image vertices have card(O/P^2) = 4 children") {
    PrimeTree folded{&f, &P, 2};
    auto ch = folded.children(folded.base());
    CHECK(ch.size() == 4);
    for (std::size_t i = 0; i < ch.size(); ++i) {
      CHECK(folded.equal(folded.parent(ch[i]), folded.base()));
      for (std::size_t j = i + 1; j < ch.size(); ++j) CHECK_FALSE(folded.equal(ch[i], ch[j]));
    }

    // the coarsening map respects levels: ceil(t/2)
    auto mapping = fold_to_power(f, P, 2, 4);
    for (auto& [src, img] : mapping) {
      long expected = src.level >= 0 ? (src.level + 1) / 2 : -((-src.level) / 2);
      CHECK(img.level == expected);
    }
  }

  SUBCASE("equivariance of the coarsening for the slab-preserving subgroup") {
    PrimeTree unfolded{&f, &P, 1};
    PrimeTree folded{&f, &P, 2};
    Rng rng(31);
    auto mapping = fold_to_power(f, P, 2, 4);
    int checked = 0;
    for (int s = 0; s < 50; ++s) {
      // generators of the subgroup: type I with v = 2 (shift by 2), type II
      // scalars, type III integral translations
      int kind = static_cast<int>(rng.below(3));
      Int u = 1;
      long j = 0;
      RingFraction c = rf_zero(f);
      if (kind == 0) j = 2;
      if (kind == 1) u = Int(1 + 2 * rng.range(1, 4));
      if (kind == 2) c = rf_from_order(oe_from_int(f, rng.range(-4, 4)));
      const auto& [src, img] = mapping[rng.below(mapping.size())];
      auto lhs = fold_to_power_image(folded, unfolded.act(u, j, c, src));
      auto rhs = folded.act(u, j, c, img);
      CHECK(folded.equal(lhs, rhs));
      ++checked;
    }
    CHECK(checked == 50);
  }
}

TEST_CASE("diagonal model") {
  SUBCASE("single prime: trivially isomorphic") {
    auto f = bs2();
    auto primes = factor_x(f);
    Rng rng(37);
    auto rep = diagonal_iso_check(f, primes, 3, rng, 30);
    CHECK(rep.isomorphic);
    CHECK(rep.ball_size == rep.diagonal_ball_size);
  }

  SUBCASE("x^2 - 6: valence 7 and isomorphism at radius 2") {
    auto f = sqrt6();
    auto primes = factor_x(f);
    REQUIRE(primes.size() == 2);
    Rng rng(41);
    auto rep = diagonal_iso_check(f, primes, 2, rng, 30);
    CHECK(rep.isomorphic);
    CHECK(rep.checked_valence == 7);
    CHECK(rep.action_commutes);
  }
}

TEST_CASE("DOT export") {
  auto f = bs2();
  auto dot0 = export_tree_dot(f, 0);
  CHECK(dot0.find("v0") != std::string::npos);
  CHECK(dot0.find("->") == std::string::npos);

  auto dot2 = export_tree_dot(f, 2);
  // radius-2 ball: base + 2 children + 4 grandchildren + parent chain up 2
  // and the sibling below the parent
  CHECK(dot2.find("(0|0)") != std::string::npos);
  CHECK(dot2.find("->") != std::string::npos);
}
