#pragma once

#include "su/fnsat.hpp"

namespace su {

// ---------------------------------------------------------------------------
// One-way single-use automata. The transition tree takes k copies of the
// input letter and one copy of the state: Sigma^k x Q -o Q. Acceptance is a
// single-use tree Q -o Yes+No with InL = Yes.
// ---------------------------------------------------------------------------

struct SUAutomaton {
  Desc sigma, q;
  Val q0;
  int k = 1;
  SUTree delta;   // Sigma^k x Q -o Q
  SUTree accept;  // Q -o 1 + 1
  AtomSet consts;
};

inline Desc automaton_delta_dom(const Desc& sigma, const Desc& q, int k) {
  Desc d = q;
  for (int i = 0; i < k; ++i) d = prod_desc(sigma, d);
  return d;
}

inline void validate_automaton(const SUAutomaton& a) {
  if (!check(a.q, a.q0)) throw TypeError("automaton: initial state ill-typed");
  for (Atom at : support(a.q0))
    if (!a.consts.contains(at)) throw TypeError("automaton: q0 atom outside consts");
  if (!(normal_form(a.delta.dom) == normal_form(automaton_delta_dom(a.sigma, a.q, a.k))) ||
      !(normal_form(a.delta.cod) == normal_form(a.q)))
    throw TypeError("automaton: delta type mismatch");
  if (!(normal_form(a.accept.dom) == normal_form(a.q)) ||
      !(normal_form(a.accept.cod) == normal_form(sum_desc(unit_desc(), unit_desc()))))
    throw TypeError("automaton: accept type mismatch");
  std::string diag;
  if (!validate_single_use(a.delta, &diag)) throw TypeError("automaton: delta not single-use: " + diag);
  if (!validate_single_use(a.accept, &diag))
    throw TypeError("automaton: accept not single-use: " + diag);
  AtomSet used = tree_constants(a.delta);
  used.insert_all(tree_constants(a.accept));
  for (Atom at : used)
    if (!a.consts.contains(at)) throw TypeError("automaton: tree constant outside consts");
}

inline Val step(const SUAutomaton& a, const Val& state, const Val& letter) {
  if (!check(a.sigma, letter)) throw TypeError("step: ill-typed letter");
  return eval(a.delta, pack_letter_state(letter, a.k, state));
}

inline bool accepts_state(const SUAutomaton& a, const Val& state) {
  return eval(a.accept, state)->tag == Value::Tag::InL;
}

inline bool run(const SUAutomaton& a, std::span<const Val> word) {
  Val state = a.q0;
  for (const Val& letter : word) state = step(a, state, letter);
  return accepts_state(a, state);
}

/// Partial application of delta to a concrete letter: the behaviour b_letter
/// as a single-use state transformation Q -o Q.
inline SUTree letter_behaviour_tree(const SUAutomaton& a, const Val& letter) {
  int k = a.k;
  SUTree pairing = tree_from_map(a.q, a.delta.dom,
                                 [&](const Val& q) { return pack_letter_state(letter, k, q); });
  return compose(a.delta, pairing);
}

/// Admits a k-fold-use acceptance function by raising the automaton's state
/// set to Q^ka and feeding every copy in parallel; the acceptance tree then
/// reads one copy of the enlarged state.
inline SUAutomaton compile_multi_acceptance(const Desc& sigma, const Desc& q, const Val& q0,
                                            int k, const SUTree& delta,
                                            const MultiTree& accept, AtomSet consts) {
  int ka = accept.k;
  if (!(normal_form(accept.dom0) == normal_form(q)))
    throw TypeError("multi acceptance: domain mismatch");
  if (ka == 1) {
    SUAutomaton a{sigma, q, q0, k, delta, rewrap(accept.tree, q, accept.tree.cod), consts};
    validate_automaton(a);
    return a;
  }
  SUAutomaton a;
  a.sigma = sigma;
  a.q = pow_desc(q, ka);
  a.q0 = replicate(q0, ka);
  a.k = k * ka;
  a.consts = std::move(consts);
  // Sigma^(k*ka) x Q^ka -> (Sigma^k x Q) x ... x (Sigma^k x Q)
  Desc dom = automaton_delta_dom(sigma, a.q, a.k);
  Desc group = automaton_delta_dom(sigma, q, k);
  std::vector<Desc> groups(static_cast<size_t>(ka), group);
  Desc split = prod_all(groups);
  SUTree rearr = tree_from_map(dom, split, [&](const Val& v) {
    std::vector<Val> letters;
    Val cur = v;
    for (int i = 0; i < k * ka; ++i) {
      letters.push_back(cur->a);
      cur = cur->b;
    }
    std::vector<Val> qs;
    for (int i = 0; i < ka - 1; ++i) {
      qs.push_back(cur->a);
      cur = cur->b;
    }
    qs.push_back(cur);
    std::vector<Val> packed;
    for (int g = 0; g < ka; ++g) {
      Val p = qs[static_cast<size_t>(g)];
      for (int i = k; i-- > 0;) p = vpair(letters[static_cast<size_t>(g * k + i)], p);
      packed.push_back(p);
    }
    Val r = packed.back();
    for (size_t i = packed.size() - 1; i-- > 0;) r = vpair(packed[i], r);
    return r;
  });
  SUTree dpow = delta;
  for (int i = 1; i < ka; ++i) dpow = product(delta, dpow);
  a.delta = compose(rewrap(dpow, split, a.q), rearr);
  a.accept = rewrap(accept.tree, a.q, accept.tree.cod);
  validate_automaton(a);
  return a;
}

struct BehaviourElem {
  MultiTree rep;  // Q -o_k Q
  Fingerprint key;
};

/// Behaviour of a word: left-to-right composition of per-letter behaviours,
/// fingerprinted over consts plus the word's atoms.
inline BehaviourElem behaviour(const SUAutomaton& a, std::span<const Val> word) {
  MultiTree b = mt_from_su(basics::id(a.q));
  for (const Val& letter : word) b = mt_compose(mt_from_su(letter_behaviour_tree(a, letter)), b);
  AtomSet frozen = a.consts;
  frozen.insert_all(support_word(word));
  return BehaviourElem{b, fingerprint(b, frozen)};
}

struct ReachableState {
  Val state;                  // canonical w.r.t. consts
  std::vector<Val> witness;   // letters of a word reaching this orbit
};

/// Canonical reachable states: fixpoint from canon(q0), stepping each
/// representative by one letter representative per orbit of letters frozen at
/// consts plus the state's support.
inline std::vector<ReachableState> reachable(const SUAutomaton& a) {
  std::vector<ReachableState> out;
  std::set<std::string> seen;
  auto push = [&](const Val& s, std::vector<Val> wit) {
    std::string key = value_to_string(s);
    if (seen.insert(key).second) out.push_back(ReachableState{s, std::move(wit)});
  };
  push(canon(a.q, a.q0, a.consts), {});
  for (size_t i = 0; i < out.size(); ++i) {
    ReachableState cur = out[i];
    AtomSet frozen = a.consts;
    frozen.insert_all(support(cur.state));
    for (const Val& letter : enumerate_orbit_reps(a.sigma, frozen)) {
      Val next = canon(a.q, step(a, cur.state, letter), a.consts);
      std::vector<Val> wit = cur.witness;
      wit.push_back(letter);
      push(next, std::move(wit));
    }
  }
  return out;
}

/// A word accepted by the automaton, if any. Acceptance is invariant on
/// consts-orbits, so checking canonical representatives suffices.
inline std::optional<std::vector<Val>> find_accepted_word(const SUAutomaton& a) {
  for (const ReachableState& r : reachable(a))
    if (accepts_state(a, r.state)) return r.witness;
  return std::nullopt;
}

inline bool is_empty(const SUAutomaton& a) { return !find_accepted_word(a).has_value(); }

/// Product automaton accepting the symmetric difference of the two languages.
/// Needs k_a + k_b letter copies: the composed transition feeds each machine
/// its own copies, and single-use functions cannot duplicate them.
inline SUAutomaton xor_product(const SUAutomaton& a, const SUAutomaton& b) {
  if (!(normal_form(a.sigma) == normal_form(b.sigma)))
    throw TypeError("xor_product: alphabet mismatch");
  SUAutomaton p;
  p.sigma = a.sigma;
  p.q = prod_desc(a.q, b.q);
  p.q0 = vpair(a.q0, b.q0);
  p.k = a.k + b.k;
  p.consts = set_union(a.consts, b.consts);

  // Sigma^(ka+kb) x (Qa x Qb)  ->  (Sigma^ka x Qa) x (Sigma^kb x Qb)
  Desc dom = automaton_delta_dom(p.sigma, p.q, p.k);
  Desc split = prod_desc(automaton_delta_dom(a.sigma, a.q, a.k),
                         automaton_delta_dom(b.sigma, b.q, b.k));
  int ka = a.k, kb = b.k;
  SUTree rearr = tree_from_map(dom, split, [&](const Val& v) {
    std::vector<Val> letters;
    Val cur = v;
    for (int i = 0; i < ka + kb; ++i) {
      letters.push_back(cur->a);
      cur = cur->b;
    }
    Val qa = cur->a, qb = cur->b;
    Val left = qa, right = qb;
    for (int i = ka; i-- > 0;) left = vpair(letters[static_cast<size_t>(i)], left);
    for (int i = ka + kb; i-- > ka;) right = vpair(letters[static_cast<size_t>(i)], right);
    return vpair(left, right);
  });
  p.delta = compose(product(a.delta, b.delta), rearr);

  Desc yn = sum_desc(unit_desc(), unit_desc());
  SUTree xor_tree = tree_from_map(prod_desc(yn, yn), yn, [](const Val& v) {
    bool l = v->a->tag == Value::Tag::InL, r = v->b->tag == Value::Tag::InL;
    return l != r ? vinl(vunit()) : vinr(vunit());
  });
  p.accept = compose(xor_tree, product(a.accept, b.accept));
  return p;
}

inline bool equivalent(const SUAutomaton& a, const SUAutomaton& b) {
  return is_empty(xor_product(a, b));
}

struct BehaviourMonoid {
  std::vector<FnElem> elements;   // canonical representatives, identity first
  std::vector<bool> accepting;    // accept(f(q0)) per element
};

/// Saturates the letter behaviours under composition. Elements are canonical
/// function representatives; each carries a witness word.
inline BehaviourMonoid behaviour_monoid(const SUAutomaton& a) {
  std::vector<std::pair<MultiTree, std::vector<Val>>> gens;
  for (const Val& letter : enumerate_orbit_reps(a.sigma, a.consts))
    gens.emplace_back(mt_from_su(letter_behaviour_tree(a, letter)), std::vector<Val>{letter});
  FnMul mul = [](const MultiTree& f, const MultiTree& g) { return mt_compose(g, f); };
  FnSaturation sat = fn_saturate(gens, a.consts, mul, mt_from_su(basics::id(a.q)));
  BehaviourMonoid m;
  m.elements = sat.elems();
  for (const FnElem& e : m.elements)
    m.accepting.push_back(accepts_state(a, lift_multi(e.rep, a.q0)));
  return m;
}

}  // namespace su
