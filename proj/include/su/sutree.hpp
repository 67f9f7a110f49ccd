#pragma once

#include <set>

#include "su/pofset.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Single-use decision trees
//
// A tree of type X -o Y is a tuple of branch trees, one per branch of X's
// normal form A^k1 + ... + A^kn. Branch trees query their tuple variables
// (x_i = x_j or x_i = a) and end in leaves that pick a codomain branch and
// fill its tuple from variables and constants. The single-use restriction:
// on every root-to-leaf path each variable appears at most once, counting
// queries and the leaf.
// ---------------------------------------------------------------------------

struct Operand {
  bool is_var = true;
  int var = 0;
  Atom cnst{};

  friend bool operator==(const Operand& a, const Operand& b) {
    return a.is_var == b.is_var && (a.is_var ? a.var == b.var : a.cnst == b.cnst);
  }
};

inline Operand ovar(int i) { return Operand{true, i, {}}; }
inline Operand oconst(Atom a) { return Operand{false, 0, a}; }
inline Operand oconst(int id) { return oconst(Atom{id}); }

struct TupleTree;
using TT = std::shared_ptr<const TupleTree>;

struct TupleTree {
  bool is_leaf = true;
  // leaf
  size_t branch = 0;
  std::vector<Operand> outs;
  // query: lhs is always a variable index
  int lhs = 0;
  Operand rhs;
  TT yes, no;
};

inline TT make_leaf(size_t branch, std::vector<Operand> outs) {
  auto n = std::make_shared<TupleTree>();
  n->is_leaf = true;
  n->branch = branch;
  n->outs = std::move(outs);
  return n;
}

/// Builds a query node, resolving it on the spot when both operands are
/// constants or both are the same variable (reflexivity).
inline TT make_query(Operand a, Operand b, TT yes, TT no) {
  if (!a.is_var && !b.is_var) return a.cnst == b.cnst ? yes : no;
  if (!a.is_var) std::swap(a, b);
  if (b.is_var && a.var == b.var) return yes;
  auto n = std::make_shared<TupleTree>();
  n->is_leaf = false;
  n->lhs = a.var;
  n->rhs = b;
  n->yes = std::move(yes);
  n->no = std::move(no);
  return n;
}

struct SUTree {
  Desc dom, cod;
  std::vector<TT> branches;  // one per branch of normal_form(dom)
};

namespace detail {

inline bool validate_branch(const TT& t, int arity, const NormalForm& cod_nf,
                            std::vector<bool> used, std::string* diag) {
  auto fail = [&](const std::string& msg) {
    if (diag) *diag = msg;
    return false;
  };
  auto take = [&](int v) {
    if (v < 0 || v >= arity) return false;
    if (used[static_cast<size_t>(v)]) return false;
    used[static_cast<size_t>(v)] = true;
    return true;
  };
  if (!t) return fail("null node");
  if (t->is_leaf) {
    if (t->branch >= cod_nf.branch_count()) return fail("leaf branch out of range");
    if (t->outs.size() != static_cast<size_t>(cod_nf.arity(t->branch)))
      return fail("leaf arity mismatch");
    for (const Operand& o : t->outs)
      if (o.is_var && !take(o.var)) return fail("variable reused or out of range in leaf");
    return true;
  }
  if (!take(t->lhs)) return fail("query lhs reused or out of range");
  if (t->rhs.is_var && !take(t->rhs.var)) return fail("query rhs reused or out of range");
  return validate_branch(t->yes, arity, cod_nf, used, diag) &&
         validate_branch(t->no, arity, cod_nf, used, diag);
}

}  // namespace detail

inline bool validate_single_use(const SUTree& t, std::string* diag = nullptr) {
  NormalForm dom_nf = normal_form(t.dom), cod_nf = normal_form(t.cod);
  if (t.branches.size() != dom_nf.branch_count()) {
    if (diag) *diag = "branch count mismatch";
    return false;
  }
  for (size_t b = 0; b < t.branches.size(); ++b) {
    int k = dom_nf.arity(b);
    std::vector<bool> used(static_cast<size_t>(k), false);
    if (!detail::validate_branch(t.branches[b], k, cod_nf, used, diag)) return false;
  }
  return true;
}

inline Val eval(const SUTree& t, const Val& v) {
  auto [branch, tuple] = encode_atoms(t.dom, v);
  const TupleTree* node = t.branches[branch].get();
  auto resolve = [&](const Operand& o) { return o.is_var ? tuple[static_cast<size_t>(o.var)] : o.cnst; };
  while (!node->is_leaf) {
    Atom l = tuple[static_cast<size_t>(node->lhs)];
    Atom r = resolve(node->rhs);
    node = (l == r) ? node->yes.get() : node->no.get();
  }
  std::vector<Atom> outs;
  outs.reserve(node->outs.size());
  for (const Operand& o : node->outs) outs.push_back(resolve(o));
  return decode_atoms(t.cod, node->branch, outs);
}

namespace detail {

inline void tree_constants_into(const TT& t, AtomSet& out) {
  if (t->is_leaf) {
    for (const Operand& o : t->outs)
      if (!o.is_var) out.insert(o.cnst);
    return;
  }
  if (!t->rhs.is_var) out.insert(t->rhs.cnst);
  tree_constants_into(t->yes, out);
  tree_constants_into(t->no, out);
}

}  // namespace detail

/// Atomic constants mentioned anywhere in the tree.
inline AtomSet tree_constants(const SUTree& t) {
  AtomSet s;
  for (const TT& b : t.branches) detail::tree_constants_into(b, s);
  return s;
}

namespace detail {

inline TT rename_node(const TT& t, const Perm& p) {
  auto ren = [&](Operand o) {
    if (!o.is_var) o.cnst = p(o.cnst);
    return o;
  };
  if (t->is_leaf) {
    std::vector<Operand> outs;
    outs.reserve(t->outs.size());
    for (const Operand& o : t->outs) outs.push_back(ren(o));
    return make_leaf(t->branch, std::move(outs));
  }
  return make_query(ovar(t->lhs), ren(t->rhs), rename_node(t->yes, p), rename_node(t->no, p));
}

}  // namespace detail

/// Applies an atom permutation to the tree's constants.
inline SUTree rename_tree(const SUTree& t, const Perm& p) {
  SUTree r{t.dom, t.cod, {}};
  r.branches.reserve(t.branches.size());
  for (const TT& b : t.branches) r.branches.push_back(detail::rename_node(b, p));
  return r;
}

/// Re-labels the dom/cod descriptors of a tree; the normal forms must match.
inline SUTree rewrap(const SUTree& t, Desc dom, Desc cod) {
  if (!(normal_form(dom) == normal_form(t.dom)) || !(normal_form(cod) == normal_form(t.cod)))
    throw TypeError("rewrap: normal form mismatch");
  return SUTree{std::move(dom), std::move(cod), t.branches};
}

// ---------------------------------------------------------------------------
// Composition and monoidal structure
// ---------------------------------------------------------------------------

namespace detail {

/// Substitutes tuple variables by operands and resolves decided queries.
inline TT subst_node(const TT& t, const std::vector<Operand>& sub) {
  auto app = [&](const Operand& o) { return o.is_var ? sub[static_cast<size_t>(o.var)] : o; };
  if (t->is_leaf) {
    std::vector<Operand> outs;
    outs.reserve(t->outs.size());
    for (const Operand& o : t->outs) outs.push_back(app(o));
    return make_leaf(t->branch, std::move(outs));
  }
  return make_query(app(ovar(t->lhs)), app(t->rhs), subst_node(t->yes, sub), subst_node(t->no, sub));
}

/// Replaces every leaf of `t` by `graft(leaf)`.
inline TT graft_leaves(const TT& t, const std::function<TT(const TupleTree&)>& graft) {
  if (t->is_leaf) return graft(*t);
  auto n = std::make_shared<TupleTree>();
  n->is_leaf = false;
  n->lhs = t->lhs;
  n->rhs = t->rhs;
  n->yes = graft_leaves(t->yes, graft);
  n->no = graft_leaves(t->no, graft);
  return n;
}

}  // namespace detail

/// Tree composition: substitute g into the leaves of f and resolve all
/// queries that become decided. eval(compose(g,f), v) = eval(g, eval(f, v)).
inline SUTree compose(const SUTree& g, const SUTree& f) {
  if (!(normal_form(f.cod) == normal_form(g.dom))) throw TypeError("compose: type mismatch");
  SUTree r{f.dom, g.cod, {}};
  r.branches.reserve(f.branches.size());
  for (const TT& fb : f.branches) {
    r.branches.push_back(detail::graft_leaves(fb, [&](const TupleTree& leaf) {
      return detail::subst_node(g.branches[leaf.branch], leaf.outs);
    }));
  }
  return r;
}

/// Pairing: eval(product(f,g), (a,b)) = (eval(f,a), eval(g,b)).
inline SUTree product(const SUTree& f, const SUTree& g) {
  NormalForm fd = normal_form(f.dom), gd = normal_form(g.dom);
  NormalForm gc = normal_form(g.cod);
  SUTree r{prod_desc(f.dom, g.dom), prod_desc(f.cod, g.cod), {}};
  for (size_t i = 0; i < fd.branch_count(); ++i) {
    int ki = fd.arity(i);
    for (size_t j = 0; j < gd.branch_count(); ++j) {
      // Shift g's variables past f's tuple.
      std::vector<Operand> shift;
      shift.reserve(static_cast<size_t>(gd.arity(j)));
      for (int v = 0; v < gd.arity(j); ++v) shift.push_back(ovar(v + ki));
      TT gj = detail::subst_node(g.branches[j], shift);
      r.branches.push_back(detail::graft_leaves(f.branches[i], [&](const TupleTree& fleaf) {
        return detail::graft_leaves(gj, [&](const TupleTree& gleaf) {
          std::vector<Operand> outs = fleaf.outs;
          outs.insert(outs.end(), gleaf.outs.begin(), gleaf.outs.end());
          return make_leaf(fleaf.branch * gc.branch_count() + gleaf.branch, std::move(outs));
        });
      }));
    }
  }
  return r;
}

/// Branchwise sum: acts as f on the left summand, g on the right.
inline SUTree sum_trees(const SUTree& f, const SUTree& g) {
  NormalForm fc = normal_form(f.cod);
  SUTree r{sum_desc(f.dom, g.dom), sum_desc(f.cod, g.cod), {}};
  r.branches = f.branches;
  for (const TT& gb : g.branches) {
    r.branches.push_back(detail::graft_leaves(gb, [&](const TupleTree& leaf) {
      return make_leaf(leaf.branch + fc.branch_count(), leaf.outs);
    }));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Structural tree builders
// ---------------------------------------------------------------------------

namespace detail {
constexpr int kMarkerBase = 1 << 20;
}

/// Builds the tree of a function that only rearranges its input (projections,
/// injections, shuffles, distributions) or emits constants, by evaluating it
/// symbolically on marker atoms. `sem` must not compare atoms.
inline SUTree tree_from_map(const Desc& dom, const Desc& cod,
                            const std::function<Val(const Val&)>& sem) {
  NormalForm dn = normal_form(dom);
  SUTree t{dom, cod, {}};
  for (size_t b = 0; b < dn.branch_count(); ++b) {
    int k = dn.arity(b);
    std::vector<Atom> markers;
    std::vector<Val> slots;
    for (int i = 0; i < k; ++i) {
      markers.push_back(Atom{detail::kMarkerBase + i});
      slots.push_back(vatom(markers.back()));
    }
    Val w = sem(decode(dom, b, slots));
    auto [cb, outs_atoms] = encode_atoms(cod, w);
    std::vector<Operand> outs;
    for (Atom a : outs_atoms) {
      if (a.id >= detail::kMarkerBase) {
        outs.push_back(ovar(a.id - detail::kMarkerBase));
      } else {
        outs.push_back(oconst(a));
      }
    }
    t.branches.push_back(make_leaf(cb, std::move(outs)));
  }
  return t;
}

namespace basics {

inline SUTree id(const Desc& x) {
  return tree_from_map(x, x, [](const Val& v) { return v; });
}

/// eq : A x A -> 1 + 1, InL = equal.
inline SUTree eq() {
  Desc dom = prod_desc(atoms_desc(), atoms_desc());
  Desc cod = sum_desc(unit_desc(), unit_desc());
  SUTree t{dom, cod, {}};
  t.branches.push_back(make_query(ovar(0), ovar(1), make_leaf(0, {}), make_leaf(1, {})));
  return t;
}

inline SUTree const_atom(Atom a) {
  SUTree t{unit_desc(), atoms_desc(), {}};
  t.branches.push_back(make_leaf(0, {oconst(a)}));
  return t;
}

/// const_x : 1 -> X for any concrete value x.
inline SUTree const_value(const Desc& x, const Val& v) {
  if (!check(x, v)) throw TypeError("const_value: ill-typed");
  auto [b, atoms] = encode_atoms(x, v);
  std::vector<Operand> outs;
  for (Atom a : atoms) outs.push_back(oconst(a));
  SUTree t{unit_desc(), x, {}};
  t.branches.push_back(make_leaf(b, std::move(outs)));
  return t;
}

inline SUTree proj1(const Desc& x, const Desc& y) {
  return tree_from_map(prod_desc(x, y), x, [](const Val& v) { return v->a; });
}
inline SUTree proj2(const Desc& x, const Desc& y) {
  return tree_from_map(prod_desc(x, y), y, [](const Val& v) { return v->b; });
}
inline SUTree sym(const Desc& x, const Desc& y) {
  return tree_from_map(prod_desc(x, y), prod_desc(y, x),
                       [](const Val& v) { return vpair(v->b, v->a); });
}
inline SUTree assoc(const Desc& x, const Desc& y, const Desc& z) {
  return tree_from_map(prod_desc(prod_desc(x, y), z), prod_desc(x, prod_desc(y, z)),
                       [](const Val& v) { return vpair(v->a->a, vpair(v->a->b, v->b)); });
}
inline SUTree assoc_inv(const Desc& x, const Desc& y, const Desc& z) {
  return tree_from_map(prod_desc(x, prod_desc(y, z)), prod_desc(prod_desc(x, y), z),
                       [](const Val& v) { return vpair(vpair(v->a, v->b->a), v->b->b); });
}
inline SUTree left_i(const Desc& x) {
  return tree_from_map(x, prod_desc(unit_desc(), x),
                       [](const Val& v) { return vpair(vunit(), v); });
}
inline SUTree left_i_inv(const Desc& x) { return proj2(unit_desc(), x); }
inline SUTree right_i(const Desc& x) {
  return tree_from_map(x, prod_desc(x, unit_desc()),
                       [](const Val& v) { return vpair(v, vunit()); });
}
inline SUTree coproj1(const Desc& x, const Desc& y) {
  return tree_from_map(x, sum_desc(x, y), [](const Val& v) { return vinl(v); });
}
inline SUTree coproj2(const Desc& x, const Desc& y) {
  return tree_from_map(y, sum_desc(x, y), [](const Val& v) { return vinr(v); });
}
inline SUTree cosym(const Desc& x, const Desc& y) {
  return tree_from_map(sum_desc(x, y), sum_desc(y, x), [](const Val& v) {
    return v->tag == Value::Tag::InL ? vinr(v->a) : vinl(v->a);
  });
}
inline SUTree coassoc(const Desc& x, const Desc& y, const Desc& z) {
  return tree_from_map(sum_desc(sum_desc(x, y), z), sum_desc(x, sum_desc(y, z)),
                       [](const Val& v) {
                         if (v->tag == Value::Tag::InR) return vinr(vinr(v->a));
                         return v->a->tag == Value::Tag::InL ? vinl(v->a->a) : vinr(vinl(v->a->a));
                       });
}
inline SUTree coassoc_inv(const Desc& x, const Desc& y, const Desc& z) {
  return tree_from_map(sum_desc(x, sum_desc(y, z)), sum_desc(sum_desc(x, y), z),
                       [](const Val& v) {
                         if (v->tag == Value::Tag::InL) return vinl(vinl(v->a));
                         return v->a->tag == Value::Tag::InL ? vinl(vinr(v->a->a)) : vinr(v->a->a);
                       });
}
inline SUTree merge(const Desc& x) {
  return tree_from_map(sum_desc(x, x), x, [](const Val& v) { return v->a; });
}
inline SUTree distr(const Desc& x, const Desc& y, const Desc& z) {
  return tree_from_map(prod_desc(x, sum_desc(y, z)),
                       sum_desc(prod_desc(x, y), prod_desc(x, z)), [](const Val& v) {
                         if (v->b->tag == Value::Tag::InL) return vinl(vpair(v->a, v->b->a));
                         return vinr(vpair(v->a, v->b->a));
                       });
}
inline SUTree distr_inv(const Desc& x, const Desc& y, const Desc& z) {
  return tree_from_map(sum_desc(prod_desc(x, y), prod_desc(x, z)),
                       prod_desc(x, sum_desc(y, z)), [](const Val& v) {
                         if (v->tag == Value::Tag::InL) return vpair(v->a->a, vinl(v->a->b));
                         return vpair(v->a->a, vinr(v->a->b));
                       });
}
inline SUTree const_i(const Desc& x) {
  return tree_from_map(x, unit_desc(), [](const Val&) { return vunit(); });
}

/// Rebracketing isomorphism between two descriptors with the same normal
/// form: assoc*, coassoc* and distr* are all instances (products distribute
/// over sums when flattening to A^k1 + ... + A^kn).
inline SUTree rebracket(const Desc& dom, const Desc& cod) { return rewrap(id(dom), dom, cod); }

/// shuffle_p over a right-associated product of `parts`; p maps output
/// position i to input position p[i].
inline SUTree shuffle(const std::vector<Desc>& parts, const std::vector<size_t>& p) {
  Desc dom = prod_all(parts);
  std::vector<Desc> out_parts;
  for (size_t i : p) out_parts.push_back(parts[i]);
  Desc cod = prod_all(out_parts);
  size_t n = parts.size();
  return tree_from_map(dom, cod, [n, &p](const Val& v) {
    std::vector<Val> comp;
    Val cur = v;
    for (size_t i = 0; i + 1 < n; ++i) {
      comp.push_back(cur->a);
      cur = cur->b;
    }
    comp.push_back(cur);
    std::vector<Val> out;
    for (size_t i : p) out.push_back(comp[i]);
    Val r = out.back();
    for (size_t i = out.size() - 1; i-- > 0;) r = vpair(out[i], r);
    return r;
  });
}

}  // namespace basics

// ---------------------------------------------------------------------------
// k-fold use and fingerprints
// ---------------------------------------------------------------------------

/// A k-fold-use function: a single-use tree applied to k identical copies of
/// the logical domain dom0. tree.dom is the right-associated k-fold product.
struct MultiTree {
  int k = 1;
  Desc dom0;
  SUTree tree;

  const Desc& cod() const { return tree.cod; }
};

inline MultiTree mt_from_su(SUTree t) {
  MultiTree m;
  m.k = 1;
  m.dom0 = t.dom;
  m.tree = std::move(t);
  return m;
}

inline MultiTree mt_make(int k, const Desc& dom0, SUTree t) {
  if (!(normal_form(t.dom) == normal_form(pow_desc(dom0, k))))
    throw TypeError("mt_make: dom is not the k-fold power of dom0");
  return MultiTree{k, dom0, std::move(t)};
}

inline Val replicate(const Val& v, int k) {
  Val r = v;
  for (int i = 1; i < k; ++i) r = vpair(v, r);
  return r;
}

/// k copies of a letter packed in front of a state: (a, (a, ... (a, q))).
inline Val pack_letter_state(const Val& letter, int k, const Val& state) {
  Val v = state;
  for (int i = 0; i < k; ++i) v = vpair(letter, v);
  return v;
}

inline Val lift_multi(const MultiTree& m, const Val& v) {
  if (!check(m.dom0, v)) throw TypeError("lift_multi: ill-typed input");
  return eval(m.tree, replicate(v, m.k));
}

/// Composition of k-fold-use functions: (g . f) is (kf*kg)-fold.
inline MultiTree mt_compose(const MultiTree& g, const MultiTree& f) {
  if (!(normal_form(f.cod()) == normal_form(g.dom0))) throw TypeError("mt_compose: type mismatch");
  // X^(kf*kg) regroups as (X^kf)^kg without any tree work: the normal forms agree.
  SUTree fpow = f.tree;
  for (int i = 1; i < g.k; ++i) fpow = product(f.tree, fpow);
  Desc dom = pow_desc(f.dom0, f.k * g.k);
  fpow = rewrap(fpow, dom, fpow.cod);
  SUTree gt = rewrap(g.tree, fpow.cod, g.tree.cod);
  return MultiTree{f.k * g.k, f.dom0, compose(gt, fpow)};
}

inline MultiTree rename_mt(const MultiTree& m, const Perm& p) {
  return MultiTree{m.k, m.dom0, rename_tree(m.tree, p)};
}

/// Semantic table of a k-fold-use function on the canonical orbit
/// representatives of its domain. Valid as an equality key whenever the
/// function is supported by `frozen`.
struct Fingerprint {
  AtomSet frozen;
  std::vector<std::pair<Val, Val>> table;

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    if (!(a.frozen == b.frozen) || a.table.size() != b.table.size()) return false;
    for (size_t i = 0; i < a.table.size(); ++i)
      if (!value_eq(a.table[i].first, b.table[i].first) ||
          !value_eq(a.table[i].second, b.table[i].second))
        return false;
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (auto& [in, out] : table) s += value_to_string(in) + ">" + value_to_string(out) + ";";
    return s;
  }
};

inline Fingerprint fingerprint(const MultiTree& m, const AtomSet& frozen,
                               bool check_constants = true) {
  if (check_constants) {
    for (Atom a : tree_constants(m.tree))
      if (!frozen.contains(a)) throw TypeError("fingerprint: constant outside frozen set");
  }
  Fingerprint fp;
  fp.frozen = frozen;
  for (const Val& rep : enumerate_orbit_reps(m.dom0, frozen))
    fp.table.emplace_back(rep, lift_multi(m, rep));
  return fp;
}

/// Extensional equality of two k-fold-use functions with the same logical
/// domain and codomain, decided on orbit representatives.
inline bool equivalent(const MultiTree& m1, const MultiTree& m2, const AtomSet& frozen) {
  if (!(normal_form(m1.dom0) == normal_form(m2.dom0)) ||
      !(normal_form(m1.cod()) == normal_form(m2.cod())))
    throw TypeError("equivalent: type mismatch");
  return fingerprint(m1, frozen) == fingerprint(m2, frozen);
}

// ---------------------------------------------------------------------------
// Canonical keys for functions modulo renaming
// ---------------------------------------------------------------------------

/// Least set E of non-base atoms genuinely supporting the function (together
/// with base). Starts from the tree's constants and drops atoms whose swap
/// with a fresh atom leaves the function unchanged.
inline AtomSet semantic_extra(const MultiTree& m, const AtomSet& base) {
  AtomSet extra;
  for (Atom a : tree_constants(m.tree))
    if (!base.contains(a)) extra.insert(a);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Atom a : extra.members()) {
      AtomSet all = set_union(base, extra);
      Atom z = all.fresh();
      AtomSet frozen = all;
      frozen.insert(z);
      MultiTree swapped = rename_mt(m, Perm::swap(a, z));
      if (fingerprint(m, frozen, false) == fingerprint(swapped, frozen, false)) {
        AtomSet reduced;
        for (Atom b : extra)
          if (b != a) reduced.insert(b);
        extra = reduced;
        changed = true;
        break;
      }
    }
  }
  return extra;
}

/// Canonical form of a function modulo permutations fixing `consts`:
/// the semantic extra support is renamed onto the smallest free ids, taking
/// the ordering that minimizes the fingerprint serialization.
struct FnKey {
  std::string bytes;
  MultiTree rep;
  std::vector<Atom> extra;  // canonical extra support of rep, in pool order
};

inline FnKey canonical_fn_key(const MultiTree& m, const AtomSet& consts) {
  AtomSet extra = semantic_extra(m, consts);
  std::string shape = desc_to_string(m.dom0) + "->" + desc_to_string(m.cod()) + "#" +
                      std::to_string(extra.size()) + "|";
  if (extra.empty()) {
    FnKey k;
    k.bytes = shape + fingerprint(m, consts, false).to_string();
    k.rep = m;
    return k;
  }
  std::vector<Atom> pool;
  {
    int id = 0;
    while (pool.size() < extra.size()) {
      Atom a{id++};
      if (!consts.contains(a)) pool.push_back(a);
    }
  }
  AtomSet frozen = consts;
  for (Atom a : pool) frozen.insert(a);
  std::vector<Atom> order = extra.members();
  std::sort(order.begin(), order.end());
  std::optional<FnKey> best;
  do {
    std::map<Atom, Atom> partial;
    for (size_t i = 0; i < order.size(); ++i) partial[order[i]] = pool[i];
    Perm p = Perm::extending(partial);
    MultiTree cand = rename_mt(m, p);
    std::string bytes = shape + fingerprint(cand, frozen, false).to_string();
    if (!best || bytes < best->bytes) best = FnKey{bytes, cand, pool};
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

}  // namespace su
