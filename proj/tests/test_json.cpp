#include <catch2/catch_amalgamated.hpp>

#include "su/corpus.hpp"
#include "su/json_io.hpp"
#include "testutil.hpp"

using namespace su;

TEST_CASE("value and descriptor round trips") {
  test::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    Desc d = test::random_desc(rng, 6);
    CHECK(desc_equal(desc_from_json(desc_to_json(d)), d));
    Val v = test::random_value(rng, d, 6);
    CHECK(value_eq(value_from_json(value_to_json(v)), v));
  }
  // words as arrays of values
  std::vector<Val> w{vatom(1), vinl(vunit()), vpair(vatom(2), vatom(2))};
  auto w2 = word_from_json(word_to_json(w));
  REQUIRE(w2.size() == w.size());
  for (size_t i = 0; i < w.size(); ++i) CHECK(value_eq(w2[i], w[i]));
}

TEST_CASE("automata survive serialization") {
  SUAutomaton a = corpus::no_twice_automaton();
  SUAutomaton b = automaton_from_json(automaton_to_json(a));
  std::vector<Val> letters{vatom(0), vatom(1), vatom(2)};
  for (const auto& w : test::all_words(letters, 3)) CHECK(run(a, w) == run(b, w));
}

TEST_CASE("two-way machines survive serialization") {
  TwoWayMachine m = corpus::map_dup_transducer(atoms_desc());
  TwoWayMachine m2 = twoway_from_json(twoway_to_json(m));
  std::vector<Val> letters{vinl(vatom(0)), vinl(vatom(1)), vinr(vunit())};
  for (const auto& w : test::all_words(letters, 3)) {
    auto r1 = run_transducer(m, w), r2 = run_transducer(m2, w);
    REQUIRE(r1.output.size() == r2.output.size());
    for (size_t i = 0; i < r1.output.size(); ++i) CHECK(value_eq(r1.output[i], r2.output[i]));
  }
}

TEST_CASE("transductions survive serialization") {
  SemigroupTransduction t = corpus::f_cmp_transduction();
  SemigroupTransduction t2 = transduction_from_json(transduction_to_json(t));
  std::vector<Val> w{vatom(1), vatom(2), vatom(1)};
  auto o1 = transduction_eval(t, w), o2 = transduction_eval(t2, w);
  REQUIRE(o1.size() == o2.size());
  for (size_t i = 0; i < o1.size(); ++i) CHECK(value_eq(o1[i], o2[i]));
  CHECK_FALSE(is_local(t2).local);

  RationalTransduction r = corpus::swap_first_last_rational();
  RationalTransduction r2 = rational_from_json(rational_to_json(r));
  auto q1 = rational_eval(r, w), q2 = rational_eval(r2, w);
  for (size_t i = 0; i < q1.size(); ++i) CHECK(value_eq(q1[i], q2[i]));
}

TEST_CASE("ssts and shapes survive serialization") {
  SSTransducer t = corpus::map_dup_sst(atoms_desc());
  SSTransducer t2 = sst_from_json(sst_to_json(t));
  std::vector<Val> w{vinl(vatom(1)), vinr(vunit()), vinl(vatom(2))};
  auto o1 = sst_run(t, w), o2 = sst_run(t2, w);
  REQUIRE(o1.size() == o2.size());
  for (size_t i = 0; i < o1.size(); ++i) CHECK(value_eq(o1[i], o2[i]));

  std::vector<Val> aw{vatom(1), vatom(2), vatom(3)};
  auto shape = run_shape(corpus::reverse_transducer(), aw);
  REQUIRE(shape.has_value());
  RunShape s2 = shape_from_json(shape_to_json(*shape));
  auto u1 = untangle(*shape), u2 = untangle(s2);
  REQUIRE(u1.size() == u2.size());
  for (size_t i = 0; i < u1.size(); ++i) CHECK(value_eq(u1[i], u2[i]));
}

TEST_CASE("list programs survive serialization") {
  for (const char* name : {"map_reverse", "su_propagation"}) {
    LibraryProgram p = library_program(name);
    LE e2 = le_from_json(le_to_json(p.expr));
    CHECK(pt_equal(typecheck(e2, p.input), typecheck(p.expr, p.input)));
    test::Rng rng(9);
    for (int i = 0; i < 20; ++i) {
      // build a random input of the program's type
      std::function<Val(const PT&)> rand_of = [&](const PT& t) -> Val {
        switch (t->tag) {
          case PolyType::Tag::Unit: return vunit();
          case PolyType::Tag::Atoms: return vatom(static_cast<int>(rng.next(4)));
          case PolyType::Tag::Sum:
            return rng.coin() ? vinl(rand_of(t->left)) : vinr(rand_of(t->right));
          case PolyType::Tag::Prod: return vpair(rand_of(t->left), rand_of(t->right));
          case PolyType::Tag::Star: {
            std::vector<Val> items;
            for (uint64_t n = rng.next(6), c = 0; c < n; ++c) items.push_back(rand_of(t->elem));
            return vword(std::move(items));
          }
        }
        throw InternalError("rand_of");
      };
      Val v = rand_of(p.input);
      CHECK(value_eq(list_eval(e2, v), list_eval(p.expr, v)));
    }
  }
}

TEST_CASE("schema errors carry diagnostics") {
  CHECK_THROWS_AS(desc_from_json(json::parse(R"({"nope":0})")), SchemaError);
  CHECK_THROWS_AS(value_from_json(json::parse(R"({"a":-3})")), SchemaError);
  // a non-single-use tree is rejected at load
  json bad = sutree_to_json(basics::id(prod_desc(atoms_desc(), atoms_desc())));
  bad["branches"][0]["leaf"]["o"] = json::array({json{{"v", 0}}, json{{"v", 0}}});
  CHECK_THROWS_AS(sutree_from_json(bad), SchemaError);
}
