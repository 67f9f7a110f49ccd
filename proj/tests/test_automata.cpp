#include <catch2/catch_amalgamated.hpp>

#include "su/automaton.hpp"
#include "su/corpus.hpp"
#include "testutil.hpp"

using namespace su;

namespace {

std::vector<Val> word_of(std::initializer_list<int> atoms) {
  std::vector<Val> w;
  for (int a : atoms) w.push_back(vatom(a));
  return w;
}

bool no_twice_semantics(const std::vector<Val>& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (value_eq(w[i], w[i + 1])) return false;
  return true;
}

std::vector<Val> atom_letters(int n) {
  std::vector<Val> ls;
  for (int i = 0; i < n; ++i) ls.push_back(vatom(i));
  return ls;
}

}  // namespace

TEST_CASE("no-twice automaton accepts and rejects per definition") {
  SUAutomaton a = corpus::no_twice_automaton();
  CHECK(run(a, word_of({1, 2, 1})));
  CHECK_FALSE(run(a, word_of({1, 1, 2})));
  CHECK(run(a, word_of({})));

  // brute-force semantic oracle on all words of length <= 4 over atoms 0..2
  for (const auto& w : test::all_words(atom_letters(3), 4))
    CHECK(run(a, w) == no_twice_semantics(w));
}

TEST_CASE("step") {
  SUAutomaton a = corpus::no_twice_automaton();
  Val start = vinl(vunit());
  Val prev1 = vinr(vinl(vatom(1)));
  Val fail = vinr(vinr(vunit()));
  CHECK(value_eq(step(a, prev1, vatom(1)), fail));
  CHECK(value_eq(step(a, start, vatom(7)), vinr(vinl(vatom(7)))));
  CHECK(value_eq(step(a, fail, vatom(3)), fail));
}

TEST_CASE("reachable canonical states") {
  SUAutomaton a = corpus::no_twice_automaton();
  auto rs = reachable(a);
  REQUIRE(rs.size() == 3);  // start, prev(0), fail
  CHECK(value_eq(rs[0].state, vinl(vunit())));
  CHECK(value_eq(rs[1].state, vinr(vinl(vatom(0)))));
  CHECK(value_eq(rs[2].state, vinr(vinr(vunit()))));

  CHECK(reachable(corpus::accept_all_automaton()).size() == 1);
}

TEST_CASE("reachability is invariant under renaming atoms outside consts") {
  // rename the constant-free no-twice machine: nothing changes
  SUAutomaton a = corpus::no_twice_automaton();
  auto rs1 = reachable(a);
  SUAutomaton b = a;
  b.delta = rename_tree(a.delta, Perm::swap(Atom{0}, Atom{5}));
  b.accept = rename_tree(a.accept, Perm::swap(Atom{0}, Atom{5}));
  auto rs2 = reachable(b);
  REQUIRE(rs1.size() == rs2.size());
  for (size_t i = 0; i < rs1.size(); ++i) CHECK(value_eq(rs1[i].state, rs2[i].state));

  // a machine with a constant keeps it frozen
  SUAutomaton f5 = corpus::first_letter_is_automaton(Atom{5});
  auto rs3 = reachable(f5);
  CHECK(rs3.size() == 3);
}

TEST_CASE("emptiness") {
  CHECK_FALSE(is_empty(corpus::no_twice_automaton()));  // epsilon accepted
  CHECK(is_empty(corpus::reject_all_automaton()));

  SUAutomaton f5 = corpus::first_letter_is_automaton(Atom{5});
  auto wit = find_accepted_word(f5);
  REQUIRE(wit.has_value());
  REQUIRE(wit->size() == 1);
  CHECK(value_eq((*wit)[0], vatom(5)));
  CHECK(run(f5, *wit));
}

TEST_CASE("emptiness agrees with brute-force language enumeration") {
  auto words = test::all_words(atom_letters(4), 3);
  auto brute_nonempty = [&](const SUAutomaton& a) {
    for (const auto& w : words)
      if (run(a, w)) return true;
    return false;
  };
  for (const SUAutomaton& a :
       {corpus::no_twice_automaton(), corpus::reject_all_automaton(),
        corpus::accept_all_automaton(), corpus::first_letter_is_automaton(Atom{2})}) {
    CHECK(!is_empty(a) == brute_nonempty(a));
  }
}

TEST_CASE("xor product and equivalence") {
  SUAutomaton nt = corpus::no_twice_automaton();
  CHECK(equivalent(nt, nt));
  CHECK_FALSE(equivalent(nt, corpus::reject_all_automaton()));  // epsilon separates
  CHECK(equivalent(nt, corpus::no_twice_automaton_shuffled()));

  // brute-force language comparison of the xor product
  auto words = test::all_words(atom_letters(4), 3);
  SUAutomaton x = xor_product(nt, corpus::first_letter_is_automaton(Atom{0}));
  for (const auto& w : words) {
    bool lhs = run(nt, w) != run(corpus::first_letter_is_automaton(Atom{0}), w);
    CHECK(run(x, w) == lhs);
  }
}

TEST_CASE("behaviour composes and matches runs") {
  SUAutomaton a = corpus::no_twice_automaton();
  // empty word: identity behaviour
  CHECK(equivalent(behaviour(a, std::vector<Val>{}).rep, mt_from_su(basics::id(a.q)), {}));

  auto u = word_of({1, 2});
  auto v = word_of({2});
  auto uv = u;
  uv.insert(uv.end(), v.begin(), v.end());
  AtomSet frozen = support_word(uv);
  CHECK(equivalent(behaviour(a, uv).rep,
                   mt_compose(behaviour(a, v).rep, behaviour(a, u).rep), frozen));

  // acceptance through the behaviour equals the direct run
  test::Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    std::vector<Val> w;
    for (uint64_t j = 0, n = rng.next(7); j < n; ++j)
      w.push_back(vatom(static_cast<int>(rng.next(4))));
    Val last = lift_multi(behaviour(a, w).rep, a.q0);
    CHECK(accepts_state(a, last) == run(a, w));
  }
}

TEST_CASE("behaviour compositionality, exhaustive and random") {
  SUAutomaton a = corpus::no_twice_automaton();
  auto words = test::all_words(atom_letters(3), 2);
  for (const auto& u : words)
    for (const auto& v : words) {
      auto uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      AtomSet frozen = set_union(a.consts, support_word(uv));
      CHECK(fingerprint(behaviour(a, uv).rep, frozen) ==
            fingerprint(mt_compose(behaviour(a, v).rep, behaviour(a, u).rep), frozen));
    }
}

TEST_CASE("multi-use acceptance is compiled away") {
  // "the last letter is 0 or 1": storing the last letter is single-use, but
  // the acceptance needs two comparisons, hence two copies of the state
  Desc A = atoms_desc();
  Desc q = sum_desc(A, unit_desc());  // last(a) + start
  SUTree delta{automaton_delta_dom(A, q, 1), q,
               {make_leaf(0, {ovar(0)}), make_leaf(0, {ovar(0)})}};
  Desc yn = sum_desc(unit_desc(), unit_desc());
  // two copies of the state: branches over (last+start) x (last+start)
  Desc q2 = pow_desc(q, 2);
  std::vector<TT> acc_branches;
  acc_branches.push_back(make_query(ovar(0), oconst(0), make_leaf(0, {}),
                                    make_query(ovar(1), oconst(1), make_leaf(0, {}),
                                               make_leaf(1, {}))));
  acc_branches.push_back(make_leaf(1, {}));  // (last, start): unreachable
  acc_branches.push_back(make_leaf(1, {}));  // (start, last): unreachable
  acc_branches.push_back(make_leaf(1, {}));  // (start, start): empty word
  MultiTree acc = mt_make(2, q, SUTree{q2, yn, acc_branches});
  SUAutomaton a =
      compile_multi_acceptance(A, q, vinr(vunit()), 1, delta, acc, AtomSet{Atom{0}, Atom{1}});
  CHECK(validate_single_use(a.accept));
  for (const auto& w : test::all_words(atom_letters(3), 3)) {
    bool expect = !w.empty() && (value_eq(w.back(), vatom(0)) || value_eq(w.back(), vatom(1)));
    CHECK(run(a, w) == expect);
  }
  CHECK_FALSE(is_empty(a));
}

TEST_CASE("behaviour monoid saturates") {
  SUAutomaton a = corpus::no_twice_automaton();
  BehaviourMonoid m = behaviour_monoid(a);
  REQUIRE(!m.elements.empty());
  // identity present and neutral
  const FnElem& id_elem = m.elements[0];
  CHECK(equivalent(id_elem.rep, mt_from_su(basics::id(a.q)), {}));
  for (const FnElem& e : m.elements) {
    AtomSet frozen = tree_constants(e.rep.tree);
    CHECK(equivalent(mt_compose(e.rep, id_elem.rep), e.rep, frozen));
    CHECK(equivalent(mt_compose(id_elem.rep, e.rep), e.rep, frozen));
  }
  // every element's accepting flag equals the run on its witness word
  for (size_t i = 0; i < m.elements.size(); ++i)
    CHECK(m.accepting[i] == run(a, m.elements[i].witness));

  // delta ignoring letters: one element beyond (and equal to) the identity
  BehaviourMonoid triv = behaviour_monoid(corpus::accept_all_automaton());
  CHECK(triv.elements.size() == 1);
}
