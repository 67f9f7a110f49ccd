#pragma once

#include "su/automaton.hpp"
#include "su/primes.hpp"
#include "su/semigroup.hpp"
#include "su/sst.hpp"
#include "su/transduce.hpp"
#include "su/twoway.hpp"

namespace su::corpus {

// The prime alphabets and prime Mealy machines live in primes.hpp; re-expose
// them here since the corpus machines are built from them.
using su::bit_eps;
using su::bit_filled;
using su::bit_hollow;
using su::bit_prop_mealy;
using su::bits_desc;
using su::monoid_prefix_mealy;
using su::out_atom;
using su::out_eps;
using su::prop_down;
using su::prop_eps;
using su::prop_gamma_desc;
using su::prop_sigma_desc;
using su::prop_store;
using su::su_prop_mealy;

// Machines used across the test corpus and shipped as JSON examples.

/// "No letter appears twice in a row" over the atoms alphabet.
/// States: start + prev(a) + fail, encoded as 1 + (A + 1).
inline SUAutomaton no_twice_automaton() {
  Desc A = atoms_desc();
  Desc q = sum_desc(unit_desc(), sum_desc(A, unit_desc()));
  SUAutomaton a;
  a.sigma = A;
  a.q = q;
  a.q0 = vinl(vunit());
  a.k = 2;
  a.consts = {};
  // tuple layout per q-branch: [letter copy 0, letter copy 1, state atoms...]
  // start: store the letter (one copy), drop the other
  TT from_start = make_leaf(1, {ovar(0)});
  // prev(b): compare one copy against b; equal -> fail, else store other copy
  TT from_prev = make_query(ovar(1), ovar(2), make_leaf(2, {}), make_leaf(1, {ovar(0)}));
  // fail: stay
  TT from_fail = make_leaf(2, {});
  a.delta = SUTree{automaton_delta_dom(A, q, 2), q, {from_start, from_prev, from_fail}};
  Desc yn = sum_desc(unit_desc(), unit_desc());
  // accept everything except fail
  a.accept = SUTree{q, yn, {make_leaf(0, {}), make_leaf(0, {}), make_leaf(1, {})}};
  validate_automaton(a);
  return a;
}

/// Same language, states shuffled to (A + 1) + 1 with prev first.
inline SUAutomaton no_twice_automaton_shuffled() {
  Desc A = atoms_desc();
  Desc q = sum_desc(sum_desc(A, unit_desc()), unit_desc());
  SUAutomaton a;
  a.sigma = A;
  a.q = q;
  a.q0 = vinr(vunit());
  a.k = 2;
  a.consts = {};
  TT from_prev = make_query(ovar(1), ovar(2), make_leaf(1, {}), make_leaf(0, {ovar(0)}));
  TT from_fail = make_leaf(1, {});
  TT from_start = make_leaf(0, {ovar(0)});
  a.delta = SUTree{automaton_delta_dom(A, q, 2), q, {from_prev, from_fail, from_start}};
  Desc yn = sum_desc(unit_desc(), unit_desc());
  a.accept = SUTree{q, yn, {make_leaf(0, {}), make_leaf(1, {}), make_leaf(0, {})}};
  validate_automaton(a);
  return a;
}

/// Rejects every word.
inline SUAutomaton reject_all_automaton() {
  Desc A = atoms_desc();
  Desc q = unit_desc();
  SUAutomaton a;
  a.sigma = A;
  a.q = q;
  a.q0 = vunit();
  a.k = 1;
  a.delta = SUTree{automaton_delta_dom(A, q, 1), q, {make_leaf(0, {})}};
  a.accept = SUTree{q, sum_desc(unit_desc(), unit_desc()), {make_leaf(1, {})}};
  validate_automaton(a);
  return a;
}

/// Accepts exactly the words whose first letter is the given constant.
inline SUAutomaton first_letter_is_automaton(Atom c) {
  Desc A = atoms_desc();
  // states: start + yes + no
  Desc q = sum_desc(unit_desc(), sum_desc(unit_desc(), unit_desc()));
  SUAutomaton a;
  a.sigma = A;
  a.q = q;
  a.q0 = vinl(vunit());
  a.k = 1;
  a.consts = {c};
  TT from_start = make_query(ovar(0), oconst(c), make_leaf(1, {}), make_leaf(2, {}));
  a.delta = SUTree{automaton_delta_dom(A, q, 1), q,
                   {from_start, make_leaf(1, {}), make_leaf(2, {})}};
  Desc yn = sum_desc(unit_desc(), unit_desc());
  a.accept = SUTree{q, yn, {make_leaf(1, {}), make_leaf(0, {}), make_leaf(1, {})}};
  validate_automaton(a);
  return a;
}

/// Streaming string transducer duplicating every #-separated block: two
/// copies of the current block plus the finished output, as word registers.
inline SSTransducer map_dup_sst(const Desc& sigma) {
  SSTransducer t;
  Desc sig_hash = sum_desc(sigma, unit_desc());
  t.sigma = sig_hash;
  t.gamma = sig_hash;
  t.q = prod_desc(reg_desc(), prod_desc(reg_desc(), reg_desc()));  // cur1, cur2, out
  t.q0 = vpair(vword({}), vpair(vword({}), vword({})));
  t.k = 2;
  NormalForm signf = normal_form(sig_hash);
  size_t nsig = signf.branch_count();

  RegTree delta;
  delta.dom = sst_delta_dom(t);
  delta.cod = t.q;
  delta.gamma = sig_hash;
  // branch (i, j) over the two letter copies; only the diagonal is reachable
  for (size_t i = 0; i < nsig; ++i)
    for (size_t j = 0; j < nsig; ++j) {
      bool hash = i + 1 == nsig;  // the separator is the last branch of sigma+#
      if (hash || i != j) {
        // on #: flush out <- out cur1 cur2 #; clear the block registers
        delta.branches.push_back(reg_leaf(
            0, {reg_out({}), reg_out({}),
                reg_out({reg_item(2), reg_item(0), reg_item(1),
                         letter_item(nsig - 1, {})})}));
        continue;
      }
      // on a letter: append one copy to each block register
      int arity = signf.atom_arity(i);
      std::vector<Operand> copy1, copy2;
      for (int a = 0; a < arity; ++a) {
        copy1.push_back(ovar(a));
        copy2.push_back(ovar(arity + a));
      }
      delta.branches.push_back(
          reg_leaf(0, {reg_out({reg_item(0), letter_item(i, copy1)}),
                       reg_out({reg_item(1), letter_item(i, copy2)}), reg_out({reg_item(2)})}));
    }
  t.delta = std::move(delta);

  RegTree out;
  out.dom = t.q;
  out.cod = reg_desc();
  out.gamma = sig_hash;
  out.branches.push_back(reg_leaf(0, {reg_out({reg_item(2), reg_item(0), reg_item(1)})}));
  t.out = std::move(out);

  std::string diag;
  if (!validate_sst(t, &diag)) throw InternalError("map_dup_sst: " + diag);
  return t;
}

/// Two-way transducer reversing its input: one silent sweep to the right
/// marker, then a left sweep emitting every letter, finishing at the left
/// marker. States: forward + emit.
inline TwoWayMachine reverse_transducer() {
  TwoWayMachine m;
  m.transducer = true;
  m.sigma = atoms_desc();
  m.gamma = atoms_desc();
  m.q = sum_desc(unit_desc(), unit_desc());
  m.q0 = vinl(vunit());
  m.k = 1;
  Desc dom = twoway_delta_dom(m), cod = twoway_delta_cod(m);
  Val fwd = vinl(vunit()), emit = vinr(vunit());
  m.delta = tree_from_map(dom, cod, [&](const Val& v) {
    const Val& letter = v->a;
    bool is_fwd = v->b->tag == Value::Tag::InL;
    auto move = [](Val qv, Val out, Val dir) { return vinl(vpair(qv, vpair(out, dir))); };
    if (letter->tag == Value::Tag::InL) {  // an atom
      if (is_fwd) return move(fwd, out_epsilon(), dir_right());
      return move(emit, out_letter(letter->a), dir_left());
    }
    bool at_left = letter->a->tag == Value::Tag::InL;
    if (at_left) return vinr(vunit());  // finish at the left marker
    if (is_fwd) return move(emit, out_epsilon(), dir_left());
    return vinr(vunit());
  });
  validate_twoway(m);
  return m;
}

/// Two-way transducer duplicating every #-separated block over Sigma + #.
/// States: first pass (emitting), walk back, second pass (emitting, then
/// emitting the separator).
inline TwoWayMachine map_dup_transducer(const Desc& sigma) {
  TwoWayMachine m;
  m.transducer = true;
  Desc sig_hash = sum_desc(sigma, unit_desc());
  m.sigma = sig_hash;
  m.gamma = sig_hash;
  m.q = sum_desc(unit_desc(), sum_desc(unit_desc(), unit_desc()));
  m.q0 = vinl(vunit());
  m.k = 1;
  Desc dom = twoway_delta_dom(m), cod = twoway_delta_cod(m);
  Val p1 = vinl(vunit()), back = vinr(vinl(vunit())), p2 = vinr(vinr(vunit()));
  m.delta = tree_from_map(dom, cod, [&](const Val& v) {
    const Val& letter = v->a;
    const Val& state = v->b;
    bool in_p1 = value_eq(state, p1), in_back = value_eq(state, back);
    auto move = [](Val qv, Val out, Val dir) { return vinl(vpair(qv, vpair(out, dir))); };
    if (letter->tag == Value::Tag::InL) {
      const Val& sl = letter->a;  // Sigma + #
      bool is_hash = sl->tag == Value::Tag::InR;
      if (in_p1)
        return is_hash ? move(back, out_epsilon(), dir_left())
                       : move(p1, out_letter(sl), dir_right());
      if (in_back)
        return is_hash ? move(p2, out_epsilon(), dir_right())
                       : move(back, out_epsilon(), dir_left());
      return is_hash ? move(p1, out_letter(sl), dir_right())
                     : move(p2, out_letter(sl), dir_right());
    }
    bool at_left = letter->a->tag == Value::Tag::InL;
    if (at_left) return move(p2, out_epsilon(), dir_right());  // only reached walking back
    if (in_p1) return move(back, out_epsilon(), dir_left());
    return vinr(vunit());  // finish at the right marker
  });
  validate_twoway(m);
  return m;
}

/// The bit-register monoid over the bits alphabet (0 = filled, 1 = hollow,
/// 2 = eps = identity): x*y = y unless y is eps. Its prefix function is bit
/// propagation shifted one position right.
inline std::vector<std::vector<int>> bit_monoid_table() {
  return {{0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
}
inline size_t bit_monoid_identity() { return 2; }

/// f_cmp: replaces every letter equal to the first one by "=", the rest by
/// "!=". A semigroup transduction over A^2 that is not local.
inline SemigroupTransduction f_cmp_transduction() {
  Desc A = atoms_desc();
  Desc carrier = prod_desc(A, A);
  SUTree prod_t{prod_desc(carrier, carrier), carrier, {make_leaf(0, {ovar(0), ovar(3)})}};
  Semigroup s = presentation_semigroup(carrier, mt_from_su(prod_t), std::nullopt, {});
  // h(a) = (a, a): needs two copies of the letter
  SUTree h_t{pow_desc(A, 2), carrier, {make_leaf(0, {ovar(0), ovar(1)})}};
  MultiTree h = mt_make(2, A, h_t);
  // lambda(a, b) = InL if a = b else InR
  MultiTree lambda = mt_from_su(basics::eq());
  return presentation_transduction(std::move(s), A, sum_desc(unit_desc(), unit_desc()), h, lambda);
}

/// The atom-propagation semigroup eps + A + bot + down + A-down with the
/// paper's multiplication table; a local transduction computing single-use
/// atom propagation.
inline Semigroup su_prop_semigroup() {
  Desc A = atoms_desc();
  // branches: eps(0), a(1), bot(0), down(0), a-down(1)
  Desc carrier =
      sum_desc(unit_desc(),
               sum_desc(A, sum_desc(unit_desc(), sum_desc(unit_desc(), A))));
  Desc dom = prod_desc(carrier, carrier);
  std::vector<TT> branches;
  auto leaf = [](size_t b, std::vector<Operand> o) { return make_leaf(b, std::move(o)); };
  // tuple layout: x's atoms then y's atoms
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      int xa = (i == 1 || i == 4) ? 1 : 0;  // arity of x
      switch (j) {
        case 0:  // y = eps: x. eps = x except down,adown -> bot
          if (i == 3 || i == 4) branches.push_back(leaf(2, {}));
          else if (xa == 1) branches.push_back(leaf(static_cast<size_t>(i), {ovar(0)}));
          else branches.push_back(leaf(static_cast<size_t>(i), {}));
          break;
        case 1:  // y = b: result b
          branches.push_back(leaf(1, {ovar(xa)}));
          break;
        case 2:  // y = bot
          branches.push_back(leaf(2, {}));
          break;
        case 3:  // y = down: a.down = a-down; eps.down = down; others bot
          if (i == 1) branches.push_back(leaf(4, {ovar(0)}));
          else if (i == 0) branches.push_back(leaf(3, {}));
          else branches.push_back(leaf(2, {}));
          break;
        default:  // y = b-down: result b-down
          branches.push_back(leaf(4, {ovar(xa)}));
          break;
      }
    }
  SUTree product{dom, carrier, branches};
  return presentation_semigroup(carrier, mt_from_su(product), std::nullopt, {});
}

inline SemigroupTransduction su_prop_transduction() {
  Semigroup s = su_prop_semigroup();
  Desc carrier = s.carrier;
  Desc sigma = prop_sigma_desc();
  Desc gamma = prop_gamma_desc();
  // h: injection of A + down + eps into the carrier
  SUTree h_t = tree_from_map(sigma, carrier, [](const Val& v) {
    if (v->tag == Value::Tag::InL) return vinr(vinl(v->a));               // atom
    if (v->a->tag == Value::Tag::InL) return vinr(vinr(vinr(vinl(vunit()))));  // down
    return vinl(vunit());                                                 // eps
  });
  // lambda: a-down -> a, otherwise eps
  SUTree l_t = tree_from_map(carrier, gamma, [](const Val& v) {
    if (v->tag == Value::Tag::InR && v->a->tag == Value::Tag::InR &&
        v->a->a->tag == Value::Tag::InR && v->a->a->a->tag == Value::Tag::InR)
      return vinl(v->a->a->a->a);
    return vinr(vunit());
  });
  return presentation_transduction(std::move(s), sigma, gamma, mt_from_su(h_t),
                                   mt_from_su(l_t));
}

/// "Swap the first and the last letter" as a rational transduction over A.
inline RationalTransduction swap_first_last_rational() {
  Desc A = atoms_desc();
  Desc carrier = prod_desc(A, A);
  SUTree prod_t{prod_desc(carrier, carrier), carrier, {make_leaf(0, {ovar(0), ovar(3)})}};
  Semigroup s = presentation_semigroup(carrier, mt_from_su(prod_t), std::nullopt, {});
  SUTree h_t{pow_desc(A, 2), carrier, {make_leaf(0, {ovar(0), ovar(1)})}};
  MultiTree h = mt_make(2, A, h_t);
  // lambda3 over (S+1) x (A x (S+1)): prefix marker -> suffix's second
  // coordinate, suffix marker -> prefix's first coordinate, else the letter
  Desc dom = lambda3_dom(carrier, A);
  std::vector<TT> branches;
  branches.push_back(make_leaf(0, {ovar(2)}));  // (pair, a, pair): the letter
  branches.push_back(make_leaf(0, {ovar(0)}));  // (pair, a, -|): prefix first
  branches.push_back(make_leaf(0, {ovar(2)}));  // (|-, a, pair): suffix second
  branches.push_back(make_leaf(0, {ovar(0)}));  // (|-, a, -|): the letter
  SUTree l_t{dom, A, branches};
  return presentation_rational(std::move(s), A, A, h, mt_from_su(l_t));
}

/// The three-infix-class semigroup 1 + A^2 + bot: pairs compose by
/// (x1,x2)(y1,y2) = (x1,y2) when x2 != y1 and collapse to bot otherwise.
inline Semigroup three_class_semigroup() {
  Desc A = atoms_desc();
  Desc carrier = sum_desc(unit_desc(), sum_desc(prod_desc(A, A), unit_desc()));
  Desc dom = prod_desc(carrier, carrier);
  // branches of dom: (i, j) over {1, pair, bot}^2, left-major
  std::vector<TT> branches;
  auto leaf_one = [] { return make_leaf(0, {}); };
  auto leaf_bot = [] { return make_leaf(2, {}); };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 2 || j == 2) {
        branches.push_back(leaf_bot());
      } else if (i == 0 && j == 0) {
        branches.push_back(leaf_one());
      } else if (i == 0) {  // 1 * pair
        branches.push_back(make_leaf(1, {ovar(0), ovar(1)}));
      } else if (j == 0) {  // pair * 1
        branches.push_back(make_leaf(1, {ovar(0), ovar(1)}));
      } else {  // pair * pair: tuple (x1, x2, y1, y2)
        branches.push_back(
            make_query(ovar(1), ovar(2), leaf_bot(), make_leaf(1, {ovar(0), ovar(3)})));
      }
    }
  SUTree product{dom, carrier, branches};
  return presentation_semigroup(carrier, mt_from_su(product), std::nullopt, {});
}

inline Val tc_one() { return vinl(vunit()); }
inline Val tc_pair(int a, int b) { return vinr(vinl(vpair(vatom(a), vatom(b)))); }
inline Val tc_bot() { return vinr(vinr(vunit())); }

/// The union semilattice on subsets of a 3-element set: an atomless
/// 8-element semigroup whose infix order is set inclusion.
inline Semigroup union_semilattice8() {
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) table[static_cast<size_t>(i)][static_cast<size_t>(j)] = i | j;
  return table_semigroup(table);
}

/// A^2 with first-projection product and unordered-pair equality:
/// (a,b) ~ (c,d) iff {a,b} = {c,d}. Exercises non-injective representations.
inline Semigroup unordered_pair_semigroup() {
  Desc A = atoms_desc();
  Desc carrier = prod_desc(A, A);
  SUTree prod_t = basics::proj1(carrier, carrier);
  // eq needs two copies of the argument pair: vars per copy (a b c d)
  Desc yn = sum_desc(unit_desc(), unit_desc());
  Desc dom2 = pow_desc(prod_desc(carrier, carrier), 2);
  TT same = make_query(ovar(0), ovar(2),
                       make_query(ovar(1), ovar(3), make_leaf(0, {}), make_leaf(1, {})),
                       make_query(ovar(4), ovar(7),
                                  make_query(ovar(5), ovar(6), make_leaf(0, {}), make_leaf(1, {})),
                                  make_leaf(1, {})));
  SUTree eq_t{dom2, yn, {same}};
  MultiTree eq_mt = mt_make(2, prod_desc(carrier, carrier), eq_t);
  return presentation_semigroup(carrier, mt_from_su(prod_t), eq_mt, {});
}

/// Ignores its letters entirely and accepts everything.
inline SUAutomaton accept_all_automaton() {
  Desc A = atoms_desc();
  Desc q = unit_desc();
  SUAutomaton a;
  a.sigma = A;
  a.q = q;
  a.q0 = vunit();
  a.k = 1;
  a.delta = SUTree{automaton_delta_dom(A, q, 1), q, {make_leaf(0, {})}};
  a.accept = SUTree{q, sum_desc(unit_desc(), unit_desc()), {make_leaf(0, {})}};
  validate_automaton(a);
  return a;
}

}  // namespace su::corpus
