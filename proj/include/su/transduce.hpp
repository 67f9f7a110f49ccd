#pragma once

#include "su/fnsat.hpp"
#include "su/semigroup.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Single-use Mealy machines
// ---------------------------------------------------------------------------

struct MealyMachine {
  Desc sigma, gamma, q;
  Val q0;
  int k = 1;
  SUTree delta;  // Sigma^k x Q -o Q x Gamma
  AtomSet consts;
};

inline Desc mealy_delta_dom(const MealyMachine& m) {
  Desc d = m.q;
  for (int i = 0; i < m.k; ++i) d = prod_desc(m.sigma, d);
  return d;
}

inline void validate_mealy(const MealyMachine& m) {
  if (!check(m.q, m.q0)) throw TypeError("mealy: initial state ill-typed");
  for (Atom a : support(m.q0))
    if (!m.consts.contains(a)) throw TypeError("mealy: q0 atom outside consts");
  if (!(normal_form(m.delta.dom) == normal_form(mealy_delta_dom(m))) ||
      !(normal_form(m.delta.cod) == normal_form(prod_desc(m.q, m.gamma))))
    throw TypeError("mealy: delta type mismatch");
  std::string diag;
  if (!validate_single_use(m.delta, &diag)) throw TypeError("mealy: delta not single-use: " + diag);
  for (Atom a : tree_constants(m.delta))
    if (!m.consts.contains(a)) throw TypeError("mealy: tree constant outside consts");
}

inline std::vector<Val> mealy_run(const MealyMachine& m, std::span<const Val> word) {
  std::vector<Val> out;
  out.reserve(word.size());
  Val state = m.q0;
  for (const Val& letter : word) {
    if (!check(m.sigma, letter)) throw TypeError("mealy_run: ill-typed letter");
    Val r = eval(m.delta, pack_letter_state(letter, m.k, state));
    state = r->a;
    out.push_back(r->b);
  }
  return out;
}

/// Per-letter behaviour Q -o Q x Gamma.
inline SUTree mealy_letter_behaviour(const MealyMachine& m, const Val& letter) {
  int k = m.k;
  SUTree pairing = tree_from_map(m.q, m.delta.dom,
                                 [&](const Val& q) { return pack_letter_state(letter, k, q); });
  return compose(m.delta, pairing);
}

/// Sequential composition: runs m1, feeds its outputs to m2. The composite
/// keeps k2 parallel copies of m1 so that m2 receives its k2 letter copies.
inline MealyMachine mealy_seq(const MealyMachine& m2, const MealyMachine& m1) {
  if (!(normal_form(m1.gamma) == normal_form(m2.sigma)))
    throw TypeError("mealy_seq: alphabet mismatch");
  MealyMachine m;
  m.sigma = m1.sigma;
  m.gamma = m2.gamma;
  int c = m2.k;  // copies of m1
  std::vector<Desc> q1s(static_cast<size_t>(c), m1.q);
  Desc q1pow = prod_all(q1s);
  m.q = prod_desc(q1pow, m2.q);
  std::vector<Val> q01s(static_cast<size_t>(c), m1.q0);
  Val q01 = q01s.back();
  for (size_t i = q01s.size() - 1; i-- > 0;) q01 = vpair(m1.q0, q01);
  m.q0 = vpair(q01, m2.q0);
  m.k = m1.k * m2.k;
  m.consts = set_union(m1.consts, m2.consts);

  // Sigma^(k1*c) x ((Q1^c) x Q2)  ->  ((Sigma^k1 x Q1) x ... ) x Q2
  Desc dom = mealy_delta_dom(m);
  Desc step1_dom = mealy_delta_dom(m1);
  std::vector<Desc> grp(static_cast<size_t>(c), step1_dom);
  Desc regrouped = prod_desc(prod_all(grp), m2.q);
  int k1 = m1.k;
  SUTree rearr = tree_from_map(dom, regrouped, [&](const Val& v) {
    std::vector<Val> letters;
    Val cur = v;
    for (int i = 0; i < k1 * c; ++i) {
      letters.push_back(cur->a);
      cur = cur->b;
    }
    Val q1 = cur->a, q2 = cur->b;
    std::vector<Val> q1parts;
    for (int i = 0; i < c - 1; ++i) {
      q1parts.push_back(q1->a);
      q1 = q1->b;
    }
    q1parts.push_back(q1);
    std::vector<Val> groups;
    for (int g = 0; g < c; ++g) {
      Val packed = q1parts[static_cast<size_t>(g)];
      for (int i = k1; i-- > 0;) packed = vpair(letters[static_cast<size_t>(g * k1 + i)], packed);
      groups.push_back(packed);
    }
    Val gv = groups.back();
    for (size_t i = groups.size() - 1; i-- > 0;) gv = vpair(groups[i], gv);
    return vpair(gv, q2);
  });

  // apply m1 in all copies: ((Q1 x Gamma1) x ...) x Q2
  SUTree d1pow = m1.delta;
  for (int i = 1; i < c; ++i) d1pow = product(m1.delta, d1pow);
  SUTree step1 = product(d1pow, basics::id(m2.q));

  // regroup to (Q1^c) x (Gamma1^k2 x Q2), feed m2, then assemble
  Desc after1 = step1.cod;
  std::vector<Desc> g1s(static_cast<size_t>(c), m1.gamma);
  Desc step2_in = prod_desc(q1pow, prod_desc(prod_all(g1s), m2.q));
  SUTree rearr2 = tree_from_map(after1, step2_in, [&](const Val& v) {
    std::vector<Val> qs, gs;
    Val cur = v->a;
    for (int i = 0; i < c - 1; ++i) {
      qs.push_back(cur->a->a);
      gs.push_back(cur->a->b);
      cur = cur->b;
    }
    qs.push_back(cur->a);
    gs.push_back(cur->b);
    Val qv = qs.back(), gvv = gs.back();
    for (size_t i = qs.size() - 1; i-- > 0;) qv = vpair(qs[i], qv);
    for (size_t i = gs.size() - 1; i-- > 0;) gvv = vpair(gs[i], gvv);
    return vpair(qv, vpair(gvv, v->b));
  });

  SUTree step2 = product(basics::id(q1pow), rewrap(m2.delta, prod_desc(prod_all(g1s), m2.q),
                                                   m2.delta.cod));
  // (Q1^c) x (Q2 x Gamma2) -> ((Q1^c) x Q2) x Gamma2
  SUTree rearr3 = tree_from_map(step2.cod, prod_desc(m.q, m.gamma), [&](const Val& v) {
    return vpair(vpair(v->a, v->b->a), v->b->b);
  });
  m.delta = compose(rearr3, compose(step2, compose(rearr2, compose(step1, rearr))));
  validate_mealy(m);
  return m;
}

/// Parallel composition on the product alphabet.
inline MealyMachine mealy_par(const MealyMachine& m1, const MealyMachine& m2) {
  MealyMachine m;
  m.sigma = prod_desc(m1.sigma, m2.sigma);
  m.gamma = prod_desc(m1.gamma, m2.gamma);
  m.q = prod_desc(m1.q, m2.q);
  m.q0 = vpair(m1.q0, m2.q0);
  m.k = m1.k + m2.k;
  m.consts = set_union(m1.consts, m2.consts);
  Desc dom = mealy_delta_dom(m);
  Desc split = prod_desc(mealy_delta_dom(m1), mealy_delta_dom(m2));
  int k1 = m1.k, k2 = m2.k;
  SUTree rearr = tree_from_map(dom, split, [&](const Val& v) {
    std::vector<Val> pairs;
    Val cur = v;
    for (int i = 0; i < k1 + k2; ++i) {
      pairs.push_back(cur->a);
      cur = cur->b;
    }
    Val left = cur->a, right = cur->b;
    for (int i = k1; i-- > 0;) left = vpair(pairs[static_cast<size_t>(i)]->a, left);
    for (int i = k1 + k2; i-- > k1;) right = vpair(pairs[static_cast<size_t>(i)]->b, right);
    return vpair(left, right);
  });
  SUTree both = compose(product(m1.delta, m2.delta), rearr);
  // (Q1 x Gamma1) x (Q2 x Gamma2) -> (Q1 x Q2) x (Gamma1 x Gamma2)
  SUTree rearr2 = tree_from_map(both.cod, prod_desc(m.q, m.gamma), [](const Val& v) {
    return vpair(vpair(v->a->a, v->b->a), vpair(v->a->b, v->b->b));
  });
  m.delta = compose(rearr2, both);
  validate_mealy(m);
  return m;
}

// ---------------------------------------------------------------------------
// Semigroup transductions
// ---------------------------------------------------------------------------

struct SemigroupTransduction {
  Semigroup s;
  Desc sigma, gamma;
  std::function<Val(const Val&)> h_fn;
  std::function<Val(const Val&)> lambda_fn;
  std::optional<MultiTree> h_tree, lambda_tree;  // loaded presentations only

  Val h(const Val& letter) const { return h_fn(letter); }
  Val out(const Val& elem) const { return lambda_fn(elem); }
};

inline SemigroupTransduction presentation_transduction(Semigroup s, Desc sigma, Desc gamma,
                                                       MultiTree h, MultiTree lambda) {
  SemigroupTransduction t;
  t.s = std::move(s);
  t.sigma = std::move(sigma);
  t.gamma = std::move(gamma);
  t.h_tree = h;
  t.lambda_tree = lambda;
  t.h_fn = [h](const Val& a) { return lift_multi(h, a); };
  t.lambda_fn = [lambda](const Val& x) { return lift_multi(lambda, x); };
  return t;
}

inline std::vector<Val> transduction_eval(const SemigroupTransduction& t,
                                          std::span<const Val> word) {
  std::vector<Val> out;
  out.reserve(word.size());
  std::optional<Val> prefix;
  for (const Val& letter : word) {
    if (!check(t.sigma, letter)) throw TypeError("transduction_eval: ill-typed letter");
    prefix = prefix ? t.s.mul(*prefix, t.h(letter)) : t.h(letter);
    out.push_back(t.out(*prefix));
  }
  return out;
}

/// The full subsemigroup reachable from the letter images.
inline std::vector<Val> fullification(const SemigroupTransduction& t) {
  std::vector<Val> gens;
  for (const Val& letter : enumerate_orbit_reps(t.sigma, t.s.consts)) gens.push_back(t.h(letter));
  return generate(t.s, gens);
}

struct LocalityVerdict {
  bool local = true;
  // counterexample, when not local
  Val x, x_prime, y, z;
};

/// Decides locality of the output function on the fullified semigroup.
/// For every canonical triple (x, y, z) of generated elements with e := y z
/// idempotent, every supp(e)-orbit mate x' of x must satisfy
/// lambda(x e y) = lambda(x' e y). With `paper_algorithm_variant` the check
/// is the literal lambda(x y z) = lambda(x' y z) from the decision
/// procedure's prose instead of the definition's instance.
namespace detail {

/// Memoized membership-in-generated-set test, keyed by the value itself
/// (canonical keys can be expensive for derived semigroups).
struct GeneratedSet {
  const Semigroup* s;
  std::set<std::string> keys;
  std::map<std::string, bool> memo;

  GeneratedSet(const Semigroup& sg, const std::vector<Val>& elems) : s(&sg) {
    for (const Val& e : elems) keys.insert(value_to_string(e));
  }

  bool contains(const Val& x) {
    std::string vk = value_to_string(canon(s->carrier, x, s->consts));
    auto it = memo.find(vk);
    if (it != memo.end()) return it->second;
    bool r = keys.count(value_to_string(element_key(*s, x, {}))) > 0;
    memo[vk] = r;
    return r;
  }
};

}  // namespace detail

inline LocalityVerdict is_local(const SemigroupTransduction& t,
                                bool paper_algorithm_variant = false) {
  const Semigroup& s = t.s;
  detail::GeneratedSet gen(s, fullification(t));
  auto generated = [&](const Val& x) { return gen.contains(x); };

  Desc triple = prod_desc(s.carrier, prod_desc(s.carrier, s.carrier));
  for (const Val& rep : enumerate_orbit_reps(triple, s.consts)) {
    const Val &x = rep->a, &y = rep->b->a, &z = rep->b->b;
    if (!generated(x) || !generated(y) || !generated(z)) continue;
    Val e = s.mul(y, z);
    if (!s.eq(s.mul(e, e), e)) continue;
    AtomSet frozen_e = set_union(support(e), s.consts);
    AtomSet pool = set_union(set_union(support(x), support(e)), s.consts);
    pool = pool_with_fresh(pool, dim(s.carrier));
    Val canon_x = canon(s.carrier, x, frozen_e);
    Val lhs = t.out(paper_algorithm_variant ? s.mul(s.mul(x, y), z) : s.mul(s.mul(x, e), y));
    for (const Val& xp : enumerate_values(s.carrier, pool)) {
      if (!value_eq(canon(s.carrier, xp, frozen_e), canon_x)) continue;
      Val rhs = t.out(paper_algorithm_variant ? s.mul(s.mul(xp, y), z) : s.mul(s.mul(xp, e), y));
      if (!value_eq(lhs, rhs)) return LocalityVerdict{false, x, xp, y, z};
    }
  }
  return LocalityVerdict{};
}

// ---------------------------------------------------------------------------
// Mealy machine -> semigroup transduction (behaviour semigroup)
// ---------------------------------------------------------------------------

namespace detail {

inline TT subst_constants_node(const TT& t, const std::function<Atom(Atom)>& f) {
  auto sub = [&](Operand o) {
    if (!o.is_var) o.cnst = f(o.cnst);
    return o;
  };
  if (t->is_leaf) {
    std::vector<Operand> outs;
    for (const Operand& o : t->outs) outs.push_back(sub(o));
    return make_leaf(t->branch, std::move(outs));
  }
  return make_query(ovar(t->lhs), sub(t->rhs), subst_constants_node(t->yes, f),
                    subst_constants_node(t->no, f));
}

/// Replaces tree constants by an arbitrary (not necessarily injective) map.
inline MultiTree subst_constants(const MultiTree& m, const std::function<Atom(Atom)>& f) {
  SUTree t = m.tree;
  std::vector<TT> branches;
  for (const TT& b : t.branches) branches.push_back(subst_constants_node(b, f));
  t.branches = std::move(branches);
  return MultiTree{m.k, m.dom0, std::move(t)};
}

}  // namespace detail

/// Derives the behaviour semigroup of a Mealy machine: elements are the
/// saturated behaviours Q -o Q x Gamma up to consts-permutations, the carrier
/// is A^e1 + ... + A^em (one branch per canonical behaviour, one coordinate
/// per support atom), equality is extensional, and the product composes the
/// instantiated trees. Tuples with repeated atoms may denote functions
/// outside the semigroup; they are only ever used through the eq relation.
inline SemigroupTransduction mealy_to_transduction(const MealyMachine& m) {
  // behaviour composition drops the Gamma component: g . proj1 . f
  SUTree proj_state = basics::proj1(m.q, m.gamma);
  FnMul comp = [proj_state](const MultiTree& f, const MultiTree& g) {
    return mt_compose(g, mt_compose(mt_from_su(proj_state), f));
  };
  std::vector<std::pair<MultiTree, std::vector<Val>>> gens;
  for (const Val& letter : enumerate_orbit_reps(m.sigma, m.consts))
    gens.emplace_back(mt_from_su(mealy_letter_behaviour(m, letter)), std::vector<Val>{letter});
  FnSaturation sat = fn_saturate(gens, m.consts, comp);

  auto elems = std::make_shared<std::vector<FnElem>>(sat.elems());
  auto key_index = std::make_shared<std::map<std::string, size_t>>();
  std::vector<Desc> branches;
  for (size_t i = 0; i < elems->size(); ++i) {
    (*key_index)[(*elems)[i].key] = i;
    int e = static_cast<int>((*elems)[i].extra.size());
    branches.push_back(e == 0 ? unit_desc() : pow_desc(atoms_desc(), e));
  }
  Desc carrier = sum_all(branches);
  AtomSet consts = m.consts;

  // value (i, atoms) -> instantiated behaviour tree
  auto to_fn = [elems, carrier](const Val& v) {
    auto [branch, atoms] = encode_atoms(carrier, v);
    const FnElem& e = (*elems)[branch];
    std::map<Atom, Atom> sub;
    for (size_t r = 0; r < e.extra.size(); ++r) sub[e.extra[r]] = atoms[r];
    return detail::subst_constants(e.rep, [sub](Atom a) {
      auto it = sub.find(a);
      return it == sub.end() ? a : it->second;
    });
  };
  // behaviour tree -> value (i, atoms)
  auto to_val = [elems, key_index, carrier, consts](const MultiTree& f) {
    FnKey k = canonical_fn_key(f, consts);
    auto it = key_index->find(k.bytes);
    if (it == key_index->end())
      throw InternalError("behaviour semigroup: product left the generated carrier");
    // k.rep = p(f) with p mapping the semantic extra onto the canonical pool;
    // recover the instantiation atoms from p's inverse
    const FnElem& e = (*elems)[it->second];
    std::vector<Atom> atoms;
    // find the renaming from the canonical rep to f by matching fingerprints
    // over all alignments of the pool atoms
    AtomSet extra_f = semantic_extra(f, consts);
    for (const Perm& rho : detail::value_alignments(
             [&] {
               AtomSet ms;
               for (Atom a : e.extra) ms.insert(a);
               return ms;
             }(),
             extra_f, consts, 0)) {
      MultiTree cand = rename_mt(e.rep, rho);
      AtomSet frozen = set_union(consts, extra_f);
      for (Atom a : e.extra) frozen.insert(rho(a));
      if (fingerprint(cand, frozen, false) == fingerprint(f, frozen, false)) {
        atoms.clear();
        for (Atom a : e.extra) atoms.push_back(rho(a));
        std::vector<Val> slots;
        for (Atom a : atoms) slots.push_back(vatom(a));
        return decode(carrier, it->second, slots);
      }
    }
    throw InternalError("behaviour semigroup: could not align canonical representative");
  };

  Semigroup s;
  s.carrier = carrier;
  s.consts = consts;
  s.mul_fn = [to_fn, to_val, comp](const Val& x, const Val& y) {
    return to_val(comp(to_fn(x), to_fn(y)));
  };
  s.eq_fn = [to_fn, consts](const Val& x, const Val& y) {
    MultiTree f = to_fn(x), g = to_fn(y);
    AtomSet frozen = set_union(set_union(support(x), support(y)), consts);
    return fingerprint(f, frozen, false) == fingerprint(g, frozen, false);
  };

  SemigroupTransduction t;
  t.s = std::move(s);
  t.sigma = m.sigma;
  t.gamma = m.gamma;
  MealyMachine mm = m;
  t.h_fn = [mm, to_val](const Val& letter) {
    return to_val(mt_from_su(mealy_letter_behaviour(mm, letter)));
  };
  Val q0 = m.q0;
  t.lambda_fn = [to_fn, q0](const Val& x) { return lift_multi(to_fn(x), q0)->b; };
  return t;
}

// ---------------------------------------------------------------------------
// Rational semigroup transductions
// ---------------------------------------------------------------------------

struct RationalTransduction {
  Semigroup s;
  Desc sigma, gamma;
  std::function<Val(const Val&)> h_fn;
  // prefix/suffix absent = the corresponding end marker
  std::function<Val(const std::optional<Val>&, const Val&, const std::optional<Val>&)> lambda3_fn;
  std::optional<MultiTree> h_tree, lambda3_tree;

  Val h(const Val& letter) const { return h_fn(letter); }
  Val out(const std::optional<Val>& p, const Val& a, const std::optional<Val>& sfx) const {
    return lambda3_fn(p, a, sfx);
  }
};

/// lambda3 as a tree over (S+1) x (Sigma x (S+1)), markers encoded as InR.
inline Desc lambda3_dom(const Desc& carrier, const Desc& sigma) {
  Desc s1 = sum_desc(carrier, unit_desc());
  return prod_desc(s1, prod_desc(sigma, s1));
}

inline RationalTransduction presentation_rational(Semigroup s, Desc sigma, Desc gamma, MultiTree h,
                                                  MultiTree lambda3) {
  RationalTransduction t;
  t.s = std::move(s);
  t.sigma = std::move(sigma);
  t.gamma = std::move(gamma);
  t.h_tree = h;
  t.lambda3_tree = lambda3;
  t.h_fn = [h](const Val& a) { return lift_multi(h, a); };
  t.lambda3_fn = [lambda3](const std::optional<Val>& p, const Val& a,
                           const std::optional<Val>& sfx) {
    Val pv = p ? vinl(*p) : vinr(vunit());
    Val sv = sfx ? vinl(*sfx) : vinr(vunit());
    return lift_multi(lambda3, vpair(pv, vpair(a, sv)));
  };
  return t;
}

inline std::vector<Val> rational_eval(const RationalTransduction& t, std::span<const Val> word) {
  size_t n = word.size();
  std::vector<Val> out;
  out.reserve(n);
  // suffix products, right to left
  std::vector<std::optional<Val>> suffix(n + 1);
  for (size_t i = n; i-- > 0;) {
    Val hi = t.h(word[i]);
    suffix[i] = suffix[i + 1] ? t.s.mul(hi, *suffix[i + 1]) : hi;
  }
  std::optional<Val> prefix;
  for (size_t i = 0; i < n; ++i) {
    if (!check(t.sigma, word[i])) throw TypeError("rational_eval: ill-typed letter");
    out.push_back(t.out(prefix, word[i], suffix[i + 1]));
    Val hi = t.h(word[i]);
    prefix = prefix ? t.s.mul(*prefix, hi) : hi;
  }
  return out;
}

inline std::vector<Val> rational_fullification(const RationalTransduction& t) {
  std::vector<Val> gens;
  for (const Val& letter : enumerate_orbit_reps(t.sigma, t.s.consts)) gens.push_back(t.h(letter));
  return generate(t.s, gens);
}

/// lambda3 ignores its suffix argument on all representatives (including -|).
inline bool is_future_independent(const RationalTransduction& t) {
  const Semigroup& s = t.s;
  detail::GeneratedSet gen(s, rational_fullification(t));
  auto generated = [&](const Val& x) { return gen.contains(x); };
  Desc s1 = sum_desc(s.carrier, unit_desc());
  Desc d = prod_desc(s1, prod_desc(t.sigma, prod_desc(s1, s1)));
  for (const Val& rep : enumerate_orbit_reps(d, s.consts)) {
    Val pv = rep->a;
    const Val& a = rep->b->a;
    Val sv1 = rep->b->b->a, sv2 = rep->b->b->b;
    auto unmark = [](const Val& v) -> std::optional<Val> {
      if (v->tag == Value::Tag::InR) return std::nullopt;
      return v->a;
    };
    std::optional<Val> p = unmark(pv), s1v = unmark(sv1), s2v = unmark(sv2);
    if (p && !generated(*p)) continue;
    if (s1v && !generated(*s1v)) continue;
    if (s2v && !generated(*s2v)) continue;
    if (!value_eq(t.out(p, a, s1v), t.out(p, a, s2v))) return false;
  }
  return true;
}

/// Locality for rational transductions: for canonical (x1, y1, a, x2, y2)
/// with e := y1 h(a) x2 idempotent, jointly renaming (x1, y2) by a
/// supp(e)-permutation must not change lambda3(x1 e y1, a, x2 e y2).
struct RationalLocalityVerdict {
  bool local = true;
  Val x1, y1, a, x2, y2, x1_prime, y2_prime;
};

inline RationalLocalityVerdict is_local_rational(const RationalTransduction& t) {
  const Semigroup& s = t.s;
  detail::GeneratedSet gen(s, rational_fullification(t));
  auto generated = [&](const Val& x) { return gen.contains(x); };
  Desc c = s.carrier;
  Desc mid = prod_desc(c, prod_desc(t.sigma, c));  // (y1, a, x2)
  Desc pair = prod_desc(c, c);
  for (const Val& rep : enumerate_orbit_reps(mid, s.consts)) {
    const Val& y1 = rep->a;
    const Val& a = rep->b->a;
    const Val& x2 = rep->b->b;
    if (!generated(y1) || !generated(x2)) continue;
    Val e = s.mul(y1, s.mul(t.h(a), x2));
    if (!s.eq(s.mul(e, e), e)) continue;
    AtomSet frozen_e = set_union(support(e), s.consts);
    // all (x1, y2) pairs over the pool, grouped into supp(e)-orbits: lambda3
    // must be constant on each orbit of generated pairs
    AtomSet pool = set_union(set_union(support(rep), support(e)), s.consts);
    pool = pool_with_fresh(pool, 4 * dim(c));
    std::map<std::string, std::pair<Val, Val>> first_of_orbit;  // canon -> (pair, lhs)
    for (const Val& cand : enumerate_values(pair, pool)) {
      const Val &x1 = cand->a, &y2 = cand->b;
      if (!generated(x1) || !generated(y2)) continue;
      Val v = t.out(s.mul(s.mul(x1, e), y1), a, s.mul(s.mul(x2, e), y2));
      std::string key = value_to_string(canon(pair, cand, frozen_e));
      auto [it, fresh] = first_of_orbit.emplace(key, std::make_pair(cand, v));
      if (!fresh && !value_eq(it->second.second, v))
        return RationalLocalityVerdict{false,       it->second.first->a, y1, a, x2,
                                       it->second.first->b, x1,           y2};
    }
  }
  return RationalLocalityVerdict{};
}

/// Embeds a semigroup transduction as a (future-independent) rational one:
/// lambda'(x, a, y) = lambda(x h(a)).
inline RationalTransduction to_rational(const SemigroupTransduction& t) {
  RationalTransduction r;
  r.s = t.s;
  r.sigma = t.sigma;
  r.gamma = t.gamma;
  r.h_fn = t.h_fn;
  SemigroupTransduction base = t;
  r.lambda3_fn = [base](const std::optional<Val>& p, const Val& a, const std::optional<Val>&) {
    Val ha = base.h(a);
    return base.out(p ? base.s.mul(*p, ha) : ha);
  };
  return r;
}

/// Converts a future-independent rational transduction to a plain semigroup
/// transduction over (S + 1) x Sigma, which tracks the last letter.
inline SemigroupTransduction to_oneway(const RationalTransduction& t) {
  if (!is_future_independent(t)) throw TypeError("to_oneway: transduction is not future independent");
  Semigroup s2;
  Desc s1 = sum_desc(t.s.carrier, unit_desc());
  s2.carrier = prod_desc(s1, t.sigma);
  s2.consts = t.s.consts;
  Semigroup base = t.s;
  RationalTransduction rt = t;
  auto unmark = [](const Val& v) -> std::optional<Val> {
    if (v->tag == Value::Tag::InR) return std::nullopt;
    return v->a;
  };
  s2.mul_fn = [base, rt, unmark](const Val& x, const Val& y) {
    std::optional<Val> xs = unmark(x->a), ys = unmark(y->a);
    Val h1 = rt.h(x->b);
    Val mid = xs ? base.mul(*xs, h1) : h1;
    Val all = ys ? base.mul(mid, *ys) : mid;
    return vpair(vinl(all), y->b);
  };
  if (base.eq_fn) {
    s2.eq_fn = [base, unmark](const Val& x, const Val& y) {
      std::optional<Val> xs = unmark(x->a), ys = unmark(y->a);
      if (xs.has_value() != ys.has_value()) return false;
      if (xs && !base.eq(*xs, *ys)) return false;
      return value_eq(x->b, y->b);
    };
  }
  SemigroupTransduction out;
  out.s = std::move(s2);
  out.sigma = t.sigma;
  out.gamma = t.gamma;
  out.h_fn = [](const Val& a) { return vpair(vinr(vunit()), a); };
  out.lambda_fn = [rt, unmark](const Val& v) {
    return rt.out(unmark(v->a), v->b, std::nullopt);
  };
  return out;
}

}  // namespace su
