#include <catch2/catch_amalgamated.hpp>

#include "su/corpus.hpp"
#include "su/semigroup.hpp"
#include "testutil.hpp"

using namespace su;
using corpus::tc_bot;
using corpus::tc_one;
using corpus::tc_pair;

TEST_CASE("three-class product") {
  Semigroup s = corpus::three_class_semigroup();
  CHECK(value_eq(s.mul(tc_pair(1, 2), tc_pair(3, 7)), tc_pair(1, 7)));
  CHECK(value_eq(s.mul(tc_pair(1, 2), tc_pair(2, 5)), tc_bot()));
  CHECK(value_eq(s.mul(tc_one(), tc_pair(4, 5)), tc_pair(4, 5)));
  CHECK(value_eq(s.mul(tc_pair(4, 5), tc_one()), tc_pair(4, 5)));
  CHECK(value_eq(s.mul(tc_bot(), tc_pair(4, 5)), tc_bot()));
}

TEST_CASE("presentation laws hold on representatives") {
  Semigroup s = corpus::three_class_semigroup();
  Desc triple = prod_desc(s.carrier, prod_desc(s.carrier, s.carrier));
  for (const Val& t : enumerate_orbit_reps(triple, s.consts)) {
    const Val &a = t->a, &b = t->b->a, &c = t->b->b;
    CHECK(s.eq(s.mul(s.mul(a, b), c), s.mul(a, s.mul(b, c))));
  }
  // eq is an equivalence and a congruence for the unordered-pair semigroup
  Semigroup u = corpus::unordered_pair_semigroup();
  AtomSet pool{Atom{0}, Atom{1}, Atom{2}, Atom{3}};
  auto elems = enumerate_values(u.carrier, pool);
  for (const Val& x : elems) CHECK(u.eq(x, x));
  for (const Val& x : elems)
    for (const Val& y : elems) {
      CHECK(u.eq(x, y) == u.eq(y, x));
      if (!u.eq(x, y)) continue;
      for (const Val& z : elems) {
        CHECK(u.eq(u.mul(x, z), u.mul(y, z)));
        CHECK(u.eq(u.mul(z, x), u.mul(z, y)));
      }
    }
}

TEST_CASE("element keys") {
  Semigroup s = corpus::three_class_semigroup();
  // structural eq: key is plain canonicalization
  CHECK(value_eq(element_key(s, tc_pair(7, 7), {}), tc_pair(0, 0)));

  Semigroup u = corpus::unordered_pair_semigroup();
  Val k1 = element_key(u, vpair(vatom(9), vatom(4)), {});
  Val k2 = element_key(u, vpair(vatom(4), vatom(9)), {});
  CHECK(value_eq(k1, vpair(vatom(0), vatom(1))));
  CHECK(value_eq(k2, k1));
  // idempotent
  CHECK(value_eq(element_key(u, k1, {}), k1));
}

TEST_CASE("generate") {
  Semigroup s = corpus::three_class_semigroup();
  // from an off-diagonal pair: products reach diagonal pairs ((a,b)(c,a) has
  // b != c, giving (a,a)) and bot ((a,b)(b,c)); three canonical keys total
  auto g1 = generate(s, {tc_pair(0, 1)});
  CHECK(g1.size() == 3);

  // the identity alone generates itself
  auto g2 = generate(s, {tc_one()});
  REQUIRE(g2.size() == 1);
  CHECK(value_eq(g2[0], tc_one()));

  // diagonal pairs: (a,a)(a,a) = bot, (a,a)(b,b) = (a,b); three keys again
  auto g3 = generate(s, {tc_pair(4, 4)});
  CHECK(g3.size() == 3);
}

TEST_CASE("idempotents") {
  Semigroup s = corpus::three_class_semigroup();
  CHECK(is_idempotent(s, tc_pair(1, 2)));  // (1,2)(1,2) = (1,2) since 2 != 1
  CHECK(value_eq(idempotent_power(s, tc_pair(1, 2)), tc_pair(1, 2)));
  CHECK_FALSE(is_idempotent(s, tc_pair(3, 3)));  // (3,3)(3,3) = bot
  CHECK(value_eq(idempotent_power(s, tc_pair(3, 3)), tc_bot()));
  CHECK(value_eq(idempotent_power(s, tc_one()), tc_one()));
}

TEST_CASE("green relations on the three-class semigroup") {
  Semigroup s = corpus::three_class_semigroup();
  CHECK(is_infix(s, tc_one(), tc_pair(0, 1)));
  CHECK(is_infix(s, tc_pair(0, 1), tc_bot()));
  CHECK_FALSE(is_infix(s, tc_bot(), tc_pair(0, 1)));
  CHECK_FALSE(is_infix(s, tc_pair(0, 1), tc_one()));
  CHECK(h_equivalent(s, tc_pair(0, 1), tc_pair(0, 1)));

  // diagonal and off-diagonal pairs share a J-class
  CHECK(j_equivalent(s, tc_pair(0, 0), tc_pair(0, 1)));

  std::vector<Val> carrier_elems{tc_one(), tc_pair(0, 1), tc_pair(2, 2), tc_bot()};
  auto classes = j_classes(s, carrier_elems);
  CHECK(classes.size() == 3);
  CHECK(j_height(s, carrier_elems) == 3);  // 1 < pairs < bot
}

TEST_CASE("infix matches brute force on the atomless 8-element semigroup") {
  Semigroup s = corpus::union_semilattice8();
  auto elems = enumerate_values(s.carrier, {});
  REQUIRE(elems.size() == 8);
  // brute force over the full carrier, with the adjoined identity
  auto brute_infix = [&](size_t x, size_t y) {
    for (size_t a = 0; a <= 8; ++a)
      for (size_t b = 0; b <= 8; ++b) {
        size_t v = x;
        if (a < 8) v = static_cast<size_t>((a | v));
        if (b < 8) v = static_cast<size_t>((v | b));
        if (v == y) return true;
      }
    return false;
  };
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = 0; j < 8; ++j) {
      CHECK(is_infix(s, elems[i], elems[j]) == brute_infix(i, j));
      bool brute_pref = false;
      for (size_t b = 0; b <= 8; ++b)
        brute_pref |= ((b < 8 ? (i | b) : i) == j);
      CHECK(is_prefix(s, elems[i], elems[j]) == brute_pref);
    }
  // inclusion order: 8 singleton J-classes, height 4 along {} < {a} < {a,b} < {a,b,c}
  CHECK(j_classes(s, elems).size() == 8);
  CHECK(j_height(s, elems) == 4);
}

TEST_CASE("infix is reflexive and transitive; same-orbit elements comparable or not at all") {
  Semigroup s = corpus::three_class_semigroup();
  std::vector<Val> elems{tc_one(), tc_pair(0, 1), tc_pair(1, 0), tc_pair(2, 2), tc_bot()};
  for (const Val& x : elems) CHECK(is_infix(s, x, x));
  for (const Val& x : elems)
    for (const Val& y : elems)
      for (const Val& z : elems)
        if (is_infix(s, x, y) && is_infix(s, y, z)) CHECK(is_infix(s, x, z));
  // elements of one orbit are J-equivalent or J-incomparable
  for (const Val& x : {tc_pair(0, 1), tc_pair(5, 5)}) {
    for (const Val& y : {tc_pair(2, 3), tc_pair(3, 2), tc_pair(7, 7)}) {
      bool xy = is_infix(s, x, y), yx = is_infix(s, y, x);
      CHECK(xy == yx);
    }
  }
}

TEST_CASE("green antichain instance: xy infix of x implies xy prefix of x") {
  for (const Semigroup& s : {corpus::three_class_semigroup(), corpus::union_semilattice8()}) {
    Desc pair = prod_desc(s.carrier, s.carrier);
    AtomSet frozen = s.consts;
    for (const Val& t : enumerate_orbit_reps(pair, frozen)) {
      Val xy = s.mul(t->a, t->b);
      if (is_infix(s, xy, t->a)) CHECK(is_prefix(s, xy, t->a));
    }
  }
}

TEST_CASE("elements of J-height one are pairwise J-equivalent") {
  Semigroup s = corpus::three_class_semigroup();
  std::vector<Val> elems{tc_one(), tc_pair(0, 1), tc_pair(2, 2), tc_bot()};
  std::vector<Val> height_one;
  for (const Val& x : elems)
    if (j_height_of(s, x, elems) == 1) height_one.push_back(x);
  REQUIRE(!height_one.empty());
  for (const Val& x : height_one)
    for (const Val& y : height_one) CHECK(j_equivalent(s, x, y));
}

TEST_CASE("smoothness examples") {
  Semigroup s = corpus::three_class_semigroup();
  std::vector<Val> smooth{tc_pair(1, 2), tc_pair(3, 7), tc_pair(4, 9), tc_pair(7, 19)};
  CHECK(is_smooth(s, smooth));
  std::vector<Val> bad1{tc_pair(1, 3), tc_bot(), tc_pair(2, 9), tc_pair(7, 3)};
  CHECK_FALSE(is_smooth(s, bad1));
  std::vector<Val> bad2{tc_pair(7, 3), tc_one(), tc_pair(4, 8)};
  CHECK_FALSE(is_smooth(s, bad2));
  std::vector<Val> bad3{tc_pair(1, 2), tc_pair(3, 7), tc_pair(7, 9), tc_pair(1, 3)};
  CHECK_FALSE(is_smooth(s, bad3));
}

TEST_CASE("smooth factorization trees") {
  Semigroup s = corpus::three_class_semigroup();
  std::vector<Val> smooth{tc_pair(1, 2), tc_pair(3, 7), tc_pair(4, 9), tc_pair(7, 19)};
  FactTree t = smooth_tree(s, smooth);
  CHECK(t.kind == FactTree::Kind::Smooth);
  CHECK(t.children.size() == 4);
  CHECK(value_eq(t.value, tc_pair(1, 19)));
  std::string diag;
  INFO(diag);
  CHECK(validate_fact_tree(s, t, smooth, &diag));

  std::vector<Val> single{tc_pair(3, 4)};
  FactTree leaf = smooth_tree(s, single);
  CHECK(leaf.kind == FactTree::Kind::Leaf);

  // random sequences stay within the height bound 3*H + 2
  test::Rng rng(2718);
  GreensCache cache(s);
  const int bound = 3 * 3 + 2;
  for (int round = 0; round < 200; ++round) {
    size_t len = 1 + rng.next(40);
    std::vector<Val> seq;
    for (size_t i = 0; i < len; ++i) {
      switch (rng.next(8)) {
        case 0: seq.push_back(tc_one()); break;
        case 1: seq.push_back(tc_bot()); break;
        default:
          seq.push_back(tc_pair(static_cast<int>(rng.next(4)), static_cast<int>(rng.next(4))));
      }
    }
    FactTree tree = smooth_tree(cache, seq);
    std::string d;
    INFO(d);
    CHECK(validate_fact_tree(cache, tree, seq, &d));
    CHECK(fact_height(tree) <= bound);
    // root value equals the sequence product
    Val prod = seq[0];
    for (size_t i = 1; i < seq.size(); ++i) prod = s.mul(prod, seq[i]);
    CHECK(s.eq(tree.value, prod));
  }
}
