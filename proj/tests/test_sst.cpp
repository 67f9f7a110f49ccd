#include <catch2/catch_amalgamated.hpp>

#include "su/corpus.hpp"
#include "su/sst.hpp"
#include "testutil.hpp"

using namespace su;

namespace {

std::vector<Val> hash_word(std::initializer_list<int> letters) {
  std::vector<Val> w;
  for (int a : letters) w.push_back(a < 0 ? vinr(vunit()) : vinl(vatom(a)));
  return w;
}

void check_word(const std::vector<Val>& got, const std::vector<Val>& expect) {
  REQUIRE(got.size() == expect.size());
  for (size_t i = 0; i < got.size(); ++i) {
    INFO("position " << i);
    CHECK(value_eq(got[i], expect[i]));
  }
}

}  // namespace

TEST_CASE("validator accepts the block-duplicating transducer") {
  SSTransducer t = corpus::map_dup_sst(atoms_desc());
  std::string diag;
  INFO(diag);
  CHECK(validate_sst(t, &diag));
}

TEST_CASE("validator rejects register reuse") {
  SSTransducer t = corpus::map_dup_sst(atoms_desc());
  // output tree emitting R0 R0
  RegTree bad = t.out;
  bad.branches = {reg_leaf(0, {reg_out({reg_item(0), reg_item(0)})})};
  t.out = bad;
  std::string diag;
  CHECK_FALSE(validate_sst(t, &diag));
  CHECK(diag.find("copyless") != std::string::npos);
}

TEST_CASE("validator rejects atom reuse across query and constructor") {
  Desc A = atoms_desc();
  RegTree t;
  t.dom = prod_desc(A, reg_desc());
  t.cod = reg_desc();
  t.gamma = A;
  t.branches = {reg_query(0, oconst(3),
                          reg_leaf(0, {reg_out({reg_item(0), letter_item(0, {ovar(0)})})}),
                          reg_leaf(0, {reg_out({reg_item(0)})}))};
  std::string diag;
  CHECK_FALSE(validate_reg_tree(t, &diag));
}

TEST_CASE("block duplication runs") {
  SSTransducer t = corpus::map_dup_sst(atoms_desc());
  check_word(sst_run(t, hash_word({1, 2, 3, -1, 5, 7, -1, 1, 2})),
             hash_word({1, 2, 3, 1, 2, 3, -1, 5, 7, 5, 7, -1, 1, 2, 1, 2}));
  CHECK(sst_run(t, std::vector<Val>{}).empty());
  check_word(sst_run(t, hash_word({1, -1})), hash_word({1, 1, -1}));
}

TEST_CASE("copyless growth law") {
  SSTransducer t = corpus::map_dup_sst(atoms_desc());
  size_t regs = sst_register_count(t);
  size_t maxc = std::max(sst_max_constructor(t.delta), sst_max_constructor(t.out));
  test::Rng rng(5);
  for (int round = 0; round < 60; ++round) {
    std::vector<Val> w;
    for (uint64_t i = 0, n = rng.next(12); i < n; ++i)
      w.push_back(rng.coin() ? vinr(vunit()) : vinl(vatom(static_cast<int>(rng.next(3)))));
    CHECK(sst_run(t, w).size() <= regs * maxc * (w.size() + 1));
  }
}

TEST_CASE("atom multiplicity bound for sst runs") {
  SSTransducer t = corpus::map_dup_sst(atoms_desc());
  test::Rng rng(6);
  for (int round = 0; round < 60; ++round) {
    std::vector<Val> w;
    for (uint64_t i = 0, n = rng.next(10); i < n; ++i)
      w.push_back(rng.coin() ? vinr(vunit()) : vinl(vatom(static_cast<int>(rng.next(3)))));
    auto out = sst_run(t, w);
    std::map<int, int> in_c, out_c;
    for (const Val& v : w)
      for (Atom a : support(v)) ++in_c[a.id];
    for (const Val& v : out)
      for (Atom a : support(v)) ++out_c[a.id];
    for (auto& [id, n] : out_c) CHECK(n <= t.k * in_c[id]);
  }
}
