#include <catch2/catch_amalgamated.hpp>

#include "su/atoms.hpp"
#include "testutil.hpp"

using namespace su;

TEST_CASE("permutation application") {
  Perm s = Perm::swap(Atom{3}, Atom{7});
  CHECK(s(Atom{3}) == Atom{7});
  CHECK(s(Atom{7}) == Atom{3});
  CHECK(s(Atom{5}) == Atom{5});
  CHECK(Perm::identity()(Atom{9}) == Atom{9});
}

TEST_CASE("composition and inverse") {
  Perm s12 = Perm::swap(Atom{1}, Atom{2});
  Perm s23 = Perm::swap(Atom{2}, Atom{3});
  CHECK(s12.after(s12).is_identity());
  CHECK(s12.after(s23)(Atom{3}) == Atom{1});  // p(q(3)) = p(2) = 1
  CHECK(s23.after(s12)(Atom{3}) == Atom{2});  // p(q(3)) = q fixes 3... s12(3)=3, s23(3)=2
  CHECK(s12.after(Perm::identity())(Atom{1}) == Atom{2});
  CHECK(s12.inverse()(Atom{2}) == Atom{1});
  CHECK(Perm::identity().inverse().is_identity());

  // cycle 1->2->3->1
  Perm cyc = Perm::from_pairs({{Atom{1}, Atom{2}}, {Atom{2}, Atom{3}}, {Atom{3}, Atom{1}}});
  Perm inv = cyc.inverse();
  for (int i = 0; i < 6; ++i) {
    CHECK(inv(cyc(Atom{i})) == Atom{i});
    CHECK(cyc(inv(Atom{i})) == Atom{i});
  }
  CHECK(inv(Atom{1}) == Atom{3});
}

TEST_CASE("group action laws on random permutations") {
  test::Rng rng(42);
  for (int round = 0; round < 200; ++round) {
    Perm p = test::random_perm(rng, 6);
    Perm q = test::random_perm(rng, 6);
    Atom a{static_cast<int>(rng.next(8))};
    CHECK(p.after(q)(a) == p(q(a)));
    CHECK(p.inverse()(p(a)) == a);
  }
}

TEST_CASE("canonical rename basics") {
  AtomSet none;
  auto [r1, p1] = canonical_rename(std::vector<Atom>{{7}, {3}, {7}}, none);
  CHECK(r1 == std::vector<Atom>{{0}, {1}, {0}});
  CHECK(p1(Atom{7}) == Atom{0});
  CHECK(p1(Atom{3}) == Atom{1});

  AtomSet f5{Atom{5}};
  auto [r2, p2] = canonical_rename(std::vector<Atom>{{5}, {9}}, f5);
  CHECK(r2 == std::vector<Atom>{{5}, {0}});

  AtomSet f4{Atom{4}};
  auto [r3, p3] = canonical_rename(std::vector<Atom>{{2}, {2}, {4}}, f4);
  CHECK(r3 == std::vector<Atom>{{0}, {0}, {4}});
}

TEST_CASE("renaming permutation maps input to output") {
  test::Rng rng(7);
  for (int round = 0; round < 300; ++round) {
    AtomSet frozen;
    for (int i = 0; i < 2; ++i)
      if (rng.next(2)) frozen.insert(Atom{static_cast<int>(rng.next(6))});
    std::vector<Atom> seq;
    for (size_t i = 0, n = rng.next(5); i < n; ++i) seq.push_back(Atom{static_cast<int>(rng.next(6))});
    auto [out, p] = canonical_rename(seq, frozen);
    REQUIRE(out.size() == seq.size());
    for (size_t i = 0; i < seq.size(); ++i) CHECK(p(seq[i]) == out[i]);
    CHECK(p.fixes(frozen));
  }
}

TEST_CASE("canonical rename characterizes frozen orbits") {
  // Brute force: sequences of length <= 4 over atoms 0..5 rename equally iff
  // some frozen-fixing permutation maps one onto the other.
  AtomSet frozen{Atom{1}, Atom{4}};
  std::vector<std::vector<Atom>> seqs;
  for (int len = 0; len <= 3; ++len) {
    std::vector<Atom> cur(static_cast<size_t>(len));
    std::function<void(int)> rec = [&](int pos) {
      if (pos == len) {
        seqs.push_back(cur);
        return;
      }
      for (int a = 0; a < 5; ++a) {
        cur[static_cast<size_t>(pos)] = Atom{a};
        rec(pos + 1);
      }
    };
    rec(0);
  }
  // All permutations of atoms 0..5 fixing the frozen set.
  std::vector<Perm> perms;
  std::vector<Atom> base;
  for (int i = 0; i < 6; ++i)
    if (!frozen.contains(Atom{i})) base.push_back(Atom{i});
  std::vector<Atom> img = base;
  std::sort(img.begin(), img.end());
  do {
    std::map<Atom, Atom> m;
    for (size_t i = 0; i < base.size(); ++i) m[base[i]] = img[i];
    perms.push_back(Perm::extending(m));
  } while (std::next_permutation(img.begin(), img.end()));

  auto same_orbit = [&](const std::vector<Atom>& a, const std::vector<Atom>& b) {
    if (a.size() != b.size()) return false;
    for (const Perm& p : perms) {
      bool ok = true;
      for (size_t i = 0; i < a.size() && ok; ++i) ok = p(a[i]) == b[i];
      if (ok) return true;
    }
    return false;
  };

  for (const auto& a : seqs)
    for (const auto& b : seqs) {
      if (a.size() != b.size()) continue;
      bool eq_canon = canonical_rename(a, frozen).first == canonical_rename(b, frozen).first;
      CHECK(eq_canon == same_orbit(a, b));
    }
}
