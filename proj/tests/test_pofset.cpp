#include <catch2/catch_amalgamated.hpp>

#include "su/pofset.hpp"
#include "testutil.hpp"

using namespace su;

namespace {

Desc atoms_pow(int k) { return pow_desc(atoms_desc(), k); }

// Independent oracle: number of equality patterns of A^k with constants from
// `frozen` = number of functions from positions to frozen-or-blocks, counted
// by direct enumeration of assignments.
long long count_patterns_brute(int k, int frozen_count) {
  // Each position gets either one of frozen_count named atoms or joins a
  // block of fresh atoms (restricted growth string).
  long long total = 0;
  std::vector<int> code(static_cast<size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int pos, int used_fresh) {
    if (pos == k) {
      ++total;
      return;
    }
    for (int c = 0; c < frozen_count; ++c) rec(pos + 1, used_fresh);
    for (int j = 0; j <= used_fresh && j < k; ++j) rec(pos + 1, std::max(used_fresh, j + 1));
  };
  rec(0, 0);
  return total;
}

}  // namespace

TEST_CASE("check") {
  Desc aa = prod_desc(atoms_desc(), atoms_desc());
  CHECK(check(aa, vpair(vatom(1), vatom(2))));
  CHECK(check(sum_desc(unit_desc(), atoms_desc()), vinr(vatom(5))));
  CHECK_FALSE(check(atoms_desc(), vunit()));
  CHECK_FALSE(check(aa, vpair(vatom(1), vunit())));
}

TEST_CASE("normal form arities") {
  auto arities = [](const Desc& d) {
    NormalForm nf = normal_form(d);
    std::vector<int> out;
    for (size_t b = 0; b < nf.branch_count(); ++b) out.push_back(nf.arity(b));
    return out;
  };
  CHECK(arities(prod_desc(atoms_desc(), atoms_desc())) == std::vector<int>{2});
  CHECK(arities(sum_desc(atoms_desc(), prod_desc(atoms_desc(), atoms_desc()))) ==
        std::vector<int>{1, 2});
  CHECK(arities(prod_desc(sum_desc(unit_desc(), atoms_desc()), atoms_desc())) ==
        std::vector<int>{1, 2});
  CHECK(dim(atoms_desc()) == 1);
  CHECK(dim(prod_desc(atoms_desc(), sum_desc(unit_desc(), atoms_desc()))) == 2);
  CHECK(dim(unit_desc()) == 0);
}

TEST_CASE("encode examples") {
  Desc aa = prod_desc(atoms_desc(), atoms_desc());
  auto [b, t] = encode_atoms(aa, vpair(vatom(1), vatom(2)));
  CHECK(b == 0);
  CHECK(t == std::vector<Atom>{{1}, {2}});

  Desc d = prod_desc(sum_desc(unit_desc(), atoms_desc()), atoms_desc());
  auto [b2, t2] = encode_atoms(d, vpair(vinl(vunit()), vatom(3)));
  CHECK(b2 == 0);
  CHECK(t2 == std::vector<Atom>{{3}});
}

TEST_CASE("encode/decode round trip on random values") {
  test::Rng rng(11);
  for (int round = 0; round < 40; ++round) {
    Desc d = test::random_desc(rng, 6);
    for (int i = 0; i < 500 / 40 + 1; ++i) {
      Val v = test::random_value(rng, d, 5);
      auto [b, t] = encode_atoms(d, v);
      CHECK(value_eq(decode_atoms(d, b, t), v));
    }
  }
}

TEST_CASE("support and action") {
  CHECK(support(vpair(vatom(3), vatom(3))) == AtomSet{Atom{3}});
  CHECK(support(vinl(vunit())).empty());
  CHECK(support(vpair(vatom(1), vpair(vatom(4), vatom(1)))) == (AtomSet{Atom{1}, Atom{4}}));

  Perm s = Perm::swap(Atom{1}, Atom{2});
  CHECK(value_eq(act(s, vpair(vatom(1), vatom(3))), vpair(vatom(2), vatom(3))));
  CHECK(value_eq(act(Perm::identity(), vinl(vunit())), vinl(vunit())));
  CHECK(value_eq(act(s, vinl(vunit())), vinl(vunit())));

  test::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Desc d = test::random_desc(rng, 5);
    Val v = test::random_value(rng, d, 6);
    Perm p = test::random_perm(rng, 6);
    AtomSet expect;
    for (Atom a : support(v)) expect.insert(p(a));
    CHECK(support(act(p, v)) == expect);
  }
}

TEST_CASE("count_supported") {
  AtomSet b3{Atom{0}, Atom{1}, Atom{2}};
  CHECK(count_supported(atoms_desc(), b3) == 3);
  AtomSet b2{Atom{1}, Atom{2}};
  CHECK(count_supported(prod_desc(atoms_desc(), sum_desc(unit_desc(), atoms_desc())), b2) == 6);
  CHECK(count_supported(unit_desc(), AtomSet{}) == 1);

  // agrees with brute-force enumeration for small descriptors and pools
  test::Rng rng(77);
  for (int i = 0; i < 60; ++i) {
    Desc d = test::random_desc(rng, 5);
    if (dim(d) > 3) continue;
    AtomSet pool;
    for (uint64_t j = 0, n = rng.next(4); j < n; ++j) pool.insert(Atom{static_cast<int>(j)});
    CHECK(count_supported(d, pool) == static_cast<long long>(enumerate_values(d, pool).size()));
  }
}

TEST_CASE("orbit enumeration") {
  Desc aa = prod_desc(atoms_desc(), atoms_desc());
  auto reps = enumerate_orbit_reps(aa, {});
  REQUIRE(reps.size() == 2);
  CHECK(value_eq(reps[0], vpair(vatom(0), vatom(0))));
  CHECK(value_eq(reps[1], vpair(vatom(0), vatom(1))));

  CHECK(enumerate_orbit_reps(prod_desc(atoms_desc(), aa), {}).size() == 5);  // Bell(3)

  auto reps_a = enumerate_orbit_reps(atoms_desc(), AtomSet{Atom{5}});
  REQUIRE(reps_a.size() == 2);
  CHECK(value_eq(reps_a[0], vatom(5)));
  CHECK(value_eq(reps_a[1], vatom(0)));
}

TEST_CASE("orbit counts match Bell numbers") {
  const long long bell[] = {1, 1, 2, 5, 15, 52};
  for (int k = 1; k <= 4; ++k) {
    CHECK(static_cast<long long>(enumerate_orbit_reps(atoms_pow(k), {}).size()) == bell[k]);
    CHECK(count_patterns_brute(k, 0) == bell[k]);
  }
  // with one frozen atom the count grows accordingly, cross-checked brute
  for (int k = 1; k <= 3; ++k) {
    AtomSet f{Atom{9}};
    CHECK(static_cast<long long>(enumerate_orbit_reps(atoms_pow(k), f).size()) ==
          count_patterns_brute(k, 1));
  }
}

TEST_CASE("canon") {
  Desc aa = prod_desc(atoms_desc(), atoms_desc());
  CHECK(value_eq(canon(aa, vpair(vatom(7), vatom(7)), {}), vpair(vatom(0), vatom(0))));
  CHECK(value_eq(canon(aa, vpair(vatom(5), vatom(9)), AtomSet{Atom{5}}), vpair(vatom(5), vatom(0))));
  Desc d = sum_desc(unit_desc(), aa);
  CHECK(value_eq(canon(d, vinr(vpair(vatom(4), vatom(2))), {}), vinr(vpair(vatom(0), vatom(1)))));
}

TEST_CASE("canon is idempotent and constant on orbits") {
  test::Rng rng(123);
  for (int i = 0; i < 100; ++i) {
    Desc d = test::random_desc(rng, 5);
    Val v = test::random_value(rng, d, 6);
    AtomSet frozen;
    if (rng.coin()) frozen.insert(Atom{static_cast<int>(rng.next(6))});
    Val c = canon(d, v, frozen);
    CHECK(value_eq(canon(d, c, frozen), c));
    for (int j = 0; j < 20; ++j) {
      Perm p = test::random_perm(rng, 8);
      if (!p.fixes(frozen)) continue;
      CHECK(value_eq(canon(d, act(p, v), frozen), c));
    }
  }
}

TEST_CASE("enumerate_orbit_reps covers and separates orbits") {
  // every value canonicalizes to exactly one listed representative
  test::Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Desc d = test::random_desc(rng, 5);
    AtomSet frozen;
    if (rng.coin()) frozen.insert(Atom{1});
    auto reps = enumerate_orbit_reps(d, frozen);
    for (size_t a = 0; a < reps.size(); ++a) {
      CHECK(value_eq(canon(d, reps[a], frozen), reps[a]));
      for (size_t b = a + 1; b < reps.size(); ++b) CHECK_FALSE(value_eq(reps[a], reps[b]));
    }
    for (int j = 0; j < 20; ++j) {
      Val v = test::random_value(rng, d, 5);
      Val c = canon(d, v, frozen);
      bool found = false;
      for (const Val& r : reps) found |= value_eq(r, c);
      CHECK(found);
    }
  }
}
