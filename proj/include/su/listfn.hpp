#pragma once

#include "su/pofset.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Regular list functions with atoms: a typed AST closed under compose, x, +,
// and map, over the single-use basics plus copying and list primitives.
// List values reuse the Word constructor of Value.
// ---------------------------------------------------------------------------

struct PolyType;
using PT = std::shared_ptr<const PolyType>;

struct PolyType {
  enum class Tag { Unit, Atoms, Sum, Prod, Star };
  Tag tag;
  PT left, right, elem;
};

inline PT pt_unit() {
  static const PT t = std::make_shared<PolyType>(PolyType{PolyType::Tag::Unit, nullptr, nullptr, nullptr});
  return t;
}
inline PT pt_atoms() {
  static const PT t = std::make_shared<PolyType>(PolyType{PolyType::Tag::Atoms, nullptr, nullptr, nullptr});
  return t;
}
inline PT pt_sum(PT l, PT r) {
  return std::make_shared<PolyType>(PolyType{PolyType::Tag::Sum, std::move(l), std::move(r), nullptr});
}
inline PT pt_prod(PT l, PT r) {
  return std::make_shared<PolyType>(PolyType{PolyType::Tag::Prod, std::move(l), std::move(r), nullptr});
}
inline PT pt_star(PT e) {
  return std::make_shared<PolyType>(PolyType{PolyType::Tag::Star, nullptr, nullptr, std::move(e)});
}

inline PT pt_finite(int n) {
  PT t = pt_unit();
  for (int i = 1; i < n; ++i) t = pt_sum(pt_unit(), t);
  return t;
}

inline bool pt_equal(const PT& a, const PT& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case PolyType::Tag::Sum:
    case PolyType::Tag::Prod:
      return pt_equal(a->left, b->left) && pt_equal(a->right, b->right);
    case PolyType::Tag::Star:
      return pt_equal(a->elem, b->elem);
    default:
      return true;
  }
}

inline std::string pt_to_string(const PT& t) {
  switch (t->tag) {
    case PolyType::Tag::Unit: return "1";
    case PolyType::Tag::Atoms: return "A";
    case PolyType::Tag::Sum: return "(" + pt_to_string(t->left) + "+" + pt_to_string(t->right) + ")";
    case PolyType::Tag::Prod: return "(" + pt_to_string(t->left) + "x" + pt_to_string(t->right) + ")";
    case PolyType::Tag::Star: return pt_to_string(t->elem) + "*";
  }
  return "?";
}

inline bool check_pt(const PT& t, const Val& v) {
  switch (t->tag) {
    case PolyType::Tag::Unit: return v->tag == Value::Tag::Unit;
    case PolyType::Tag::Atoms: return v->tag == Value::Tag::Atom;
    case PolyType::Tag::Sum:
      if (v->tag == Value::Tag::InL) return check_pt(t->left, v->a);
      if (v->tag == Value::Tag::InR) return check_pt(t->right, v->a);
      return false;
    case PolyType::Tag::Prod:
      return v->tag == Value::Tag::Pair && check_pt(t->left, v->a) && check_pt(t->right, v->b);
    case PolyType::Tag::Star: {
      if (v->tag != Value::Tag::Word && v->tag != Value::Tag::Cat) return false;
      for (const Val& it : flatten_word(v))
        if (!check_pt(t->elem, it)) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

struct ListExpr;
using LE = std::shared_ptr<const ListExpr>;

struct ListExpr {
  enum class Kind {
    // basics (types inferred from the input)
    Id, Eq, ConstAtom, Proj1, Proj2, Sym, Assoc, AssocInv, LeftI, LeftIInv, RightI, RightIInv,
    Coproj1, Coproj2, Cosym, Coassoc, CoassocInv, Merge, Distr, DistrInv, ConstI,
    // copying
    CopyAtom, CopyStar,
    // lists
    ConstEps, Cons, Destruct, Concat, Reverse, Blocks, Group,
    // combinators
    Compose, Times, Plus, Map,
  };
  Kind kind;
  Atom cnst{};                           // ConstAtom
  PT other;                              // Coproj1/Coproj2: the missing summand
  PT elem;                               // ConstEps: element type
  std::vector<std::vector<int>> cayley;  // Group
  bool blocks_maximal = false;           // Blocks: drop empty segments
  LE f, g;                               // Compose(f then g), Times, Plus; Map uses f
};

inline LE le(ListExpr::Kind k) { return std::make_shared<ListExpr>(ListExpr{k}); }
inline LE le_const_atom(Atom a) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::ConstAtom});
  e->cnst = a;
  return e;
}
inline LE le_coproj1(PT other) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Coproj1});
  e->other = std::move(other);
  return e;
}
inline LE le_coproj2(PT other) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Coproj2});
  e->other = std::move(other);
  return e;
}
inline LE le_const_eps(PT elem) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::ConstEps});
  e->elem = std::move(elem);
  return e;
}
inline LE le_group(std::vector<std::vector<int>> cayley) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Group});
  e->cayley = std::move(cayley);
  return e;
}
inline LE le_blocks(bool maximal = false) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Blocks});
  e->blocks_maximal = maximal;
  return e;
}
inline LE le_compose(LE f, LE then_g) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Compose});
  e->f = std::move(f);
  e->g = std::move(then_g);
  return e;
}
inline LE le_times(LE f, LE g) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Times});
  e->f = std::move(f);
  e->g = std::move(g);
  return e;
}
inline LE le_plus(LE f, LE g) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Plus});
  e->f = std::move(f);
  e->g = std::move(g);
  return e;
}
inline LE le_map(LE f) {
  auto e = std::make_shared<ListExpr>(ListExpr{ListExpr::Kind::Map});
  e->f = std::move(f);
  return e;
}

/// Left-to-right composition chain.
inline LE le_pipe(std::initializer_list<LE> stages) {
  LE r;
  for (const LE& s : stages) r = r ? le_compose(r, s) : s;
  if (!r) throw InternalError("le_pipe: empty");
  return r;
}

// ---------------------------------------------------------------------------
// Typecheck (checking mode: output type computed from the input type)
// ---------------------------------------------------------------------------

inline PT typecheck(const LE& e, const PT& in, const std::string& path = "e") {
  auto err = [&](const std::string& msg) -> PT {
    throw TypeError(path + ": " + msg + " (input " + pt_to_string(in) + ")");
  };
  auto need = [&](bool cond, const char* msg) {
    if (!cond) err(msg);
  };
  using K = ListExpr::Kind;
  switch (e->kind) {
    case K::Id: return in;
    case K::Eq:
      need(in->tag == PolyType::Tag::Prod && in->left->tag == PolyType::Tag::Atoms &&
               in->right->tag == PolyType::Tag::Atoms,
           "eq expects A x A");
      return pt_sum(pt_unit(), pt_unit());
    case K::ConstAtom:
      need(in->tag == PolyType::Tag::Unit, "const expects 1");
      return pt_atoms();
    case K::Proj1:
      need(in->tag == PolyType::Tag::Prod, "proj1 expects a product");
      return in->left;
    case K::Proj2:
      need(in->tag == PolyType::Tag::Prod, "proj2 expects a product");
      return in->right;
    case K::Sym:
      need(in->tag == PolyType::Tag::Prod, "sym expects a product");
      return pt_prod(in->right, in->left);
    case K::Assoc:
      need(in->tag == PolyType::Tag::Prod && in->left->tag == PolyType::Tag::Prod,
           "assoc expects (X x Y) x Z");
      return pt_prod(in->left->left, pt_prod(in->left->right, in->right));
    case K::AssocInv:
      need(in->tag == PolyType::Tag::Prod && in->right->tag == PolyType::Tag::Prod,
           "assoc-inv expects X x (Y x Z)");
      return pt_prod(pt_prod(in->left, in->right->left), in->right->right);
    case K::LeftI: return pt_prod(pt_unit(), in);
    case K::LeftIInv:
      need(in->tag == PolyType::Tag::Prod && in->left->tag == PolyType::Tag::Unit,
           "left-i-inv expects 1 x X");
      return in->right;
    case K::RightI: return pt_prod(in, pt_unit());
    case K::RightIInv:
      need(in->tag == PolyType::Tag::Prod && in->right->tag == PolyType::Tag::Unit,
           "right-i-inv expects X x 1");
      return in->left;
    case K::Coproj1: return pt_sum(in, e->other);
    case K::Coproj2: return pt_sum(e->other, in);
    case K::Cosym:
      need(in->tag == PolyType::Tag::Sum, "cosym expects a sum");
      return pt_sum(in->right, in->left);
    case K::Coassoc:
      need(in->tag == PolyType::Tag::Sum && in->left->tag == PolyType::Tag::Sum,
           "coassoc expects (X + Y) + Z");
      return pt_sum(in->left->left, pt_sum(in->left->right, in->right));
    case K::CoassocInv:
      need(in->tag == PolyType::Tag::Sum && in->right->tag == PolyType::Tag::Sum,
           "coassoc-inv expects X + (Y + Z)");
      return pt_sum(pt_sum(in->left, in->right->left), in->right->right);
    case K::Merge:
      need(in->tag == PolyType::Tag::Sum && pt_equal(in->left, in->right),
           "merge expects X + X");
      return in->left;
    case K::Distr:
      need(in->tag == PolyType::Tag::Prod && in->right->tag == PolyType::Tag::Sum,
           "distr expects X x (Y + Z)");
      return pt_sum(pt_prod(in->left, in->right->left), pt_prod(in->left, in->right->right));
    case K::DistrInv:
      need(in->tag == PolyType::Tag::Sum && in->left->tag == PolyType::Tag::Prod &&
               in->right->tag == PolyType::Tag::Prod &&
               pt_equal(in->left->left, in->right->left),
           "distr-inv expects X x Y + X x Z");
      return pt_prod(in->left->left, pt_sum(in->left->right, in->right->right));
    case K::ConstI: return pt_unit();
    case K::CopyAtom:
      need(in->tag == PolyType::Tag::Atoms, "copy expects A");
      return pt_prod(pt_atoms(), pt_atoms());
    case K::CopyStar:
      need(in->tag == PolyType::Tag::Star, "copy-star expects a list");
      return pt_prod(in, in);
    case K::ConstEps:
      need(in->tag == PolyType::Tag::Unit, "const-eps expects 1");
      return pt_star(e->elem);
    case K::Cons:
      need(in->tag == PolyType::Tag::Prod && in->right->tag == PolyType::Tag::Star &&
               pt_equal(in->left, in->right->elem),
           "cons expects X x X*");
      return in->right;
    case K::Destruct:
      need(in->tag == PolyType::Tag::Star, "destruct expects a list");
      return pt_sum(pt_prod(in->elem, in), pt_unit());
    case K::Concat:
      need(in->tag == PolyType::Tag::Star && in->elem->tag == PolyType::Tag::Star,
           "concat expects a list of lists");
      return in->elem;
    case K::Reverse:
      need(in->tag == PolyType::Tag::Star, "reverse expects a list");
      return in;
    case K::Blocks:
      need(in->tag == PolyType::Tag::Star && in->elem->tag == PolyType::Tag::Sum &&
               in->elem->right->tag == PolyType::Tag::Unit,
           "blocks expects (X + 1)*");
      return pt_star(pt_star(in->elem->left));
    case K::Group: {
      need(in->tag == PolyType::Tag::Star && in->elem->tag == PolyType::Tag::Prod,
           "group expects (G x X)*");
      // the G component must be a sum of 1s with as many branches as the table
      PT g = in->elem->left;
      size_t n = 1;
      while (g->tag == PolyType::Tag::Sum && g->left->tag == PolyType::Tag::Unit) {
        ++n;
        g = g->right;
      }
      need(g->tag == PolyType::Tag::Unit, "group component must be a sum of units");
      need(n == e->cayley.size(), "group arity does not match the table");
      return in;
    }
    case K::Compose: {
      PT mid = typecheck(e->f, in, path + ".l");
      return typecheck(e->g, mid, path + ".r");
    }
    case K::Times: {
      need(in->tag == PolyType::Tag::Prod, "x expects a product");
      return pt_prod(typecheck(e->f, in->left, path + ".l"),
                     typecheck(e->g, in->right, path + ".r"));
    }
    case K::Plus: {
      need(in->tag == PolyType::Tag::Sum, "+ expects a sum");
      return pt_sum(typecheck(e->f, in->left, path + ".l"),
                    typecheck(e->g, in->right, path + ".r"));
    }
    case K::Map: {
      need(in->tag == PolyType::Tag::Star, "map expects a list");
      return pt_star(typecheck(e->f, in->elem, path + ".f"));
    }
  }
  throw InternalError("typecheck");
}

// ---------------------------------------------------------------------------
// Evaluation (assumes a typechecked expression and a well-typed input)
// ---------------------------------------------------------------------------

namespace detail {

inline size_t finite_index(const Val& v) {
  size_t i = 0;
  const Value* cur = v.get();
  while (cur->tag == Value::Tag::InR) {
    ++i;
    cur = cur->a.get();
  }
  return i;
}

inline Val finite_value(size_t index, size_t n) {
  Val v = vunit();
  if (index + 1 < n) v = vinl(vunit());
  for (size_t i = 0; i < index; ++i) v = vinr(v);
  return v;
}

}  // namespace detail

inline Val list_eval(const LE& e, const Val& v) {
  using K = ListExpr::Kind;
  switch (e->kind) {
    case K::Id: return v;
    case K::Eq: return value_eq(v->a, v->b) ? vinl(vunit()) : vinr(vunit());
    case K::ConstAtom: return vatom(e->cnst);
    case K::Proj1: return v->a;
    case K::Proj2: return v->b;
    case K::Sym: return vpair(v->b, v->a);
    case K::Assoc: return vpair(v->a->a, vpair(v->a->b, v->b));
    case K::AssocInv: return vpair(vpair(v->a, v->b->a), v->b->b);
    case K::LeftI: return vpair(vunit(), v);
    case K::LeftIInv: return v->b;
    case K::RightI: return vpair(v, vunit());
    case K::RightIInv: return v->a;
    case K::Coproj1: return vinl(v);
    case K::Coproj2: return vinr(v);
    case K::Cosym: return v->tag == Value::Tag::InL ? vinr(v->a) : vinl(v->a);
    case K::Coassoc:
      if (v->tag == Value::Tag::InR) return vinr(vinr(v->a));
      return v->a->tag == Value::Tag::InL ? vinl(v->a->a) : vinr(vinl(v->a->a));
    case K::CoassocInv:
      if (v->tag == Value::Tag::InL) return vinl(vinl(v->a));
      return v->a->tag == Value::Tag::InL ? vinl(vinr(v->a->a)) : vinr(v->a->a);
    case K::Merge: return v->a;
    case K::Distr:
      return v->b->tag == Value::Tag::InL ? vinl(vpair(v->a, v->b->a))
                                          : vinr(vpair(v->a, v->b->a));
    case K::DistrInv:
      return v->tag == Value::Tag::InL ? vpair(v->a->a, vinl(v->a->b))
                                       : vpair(v->a->a, vinr(v->a->b));
    case K::ConstI: return vunit();
    case K::CopyAtom:
    case K::CopyStar: return vpair(v, v);
    case K::ConstEps: return vword({});
    case K::Cons: {
      std::vector<Val> items{v->a};
      flatten_word_into(v->b, items);
      return vword(std::move(items));
    }
    case K::Destruct: {
      std::vector<Val> items = flatten_word(v);
      if (items.empty()) return vinr(vunit());
      Val head = items.front();
      items.erase(items.begin());
      return vinl(vpair(head, vword(std::move(items))));
    }
    case K::Concat: {
      std::vector<Val> out;
      for (const Val& inner : flatten_word(v)) flatten_word_into(inner, out);
      return vword(std::move(out));
    }
    case K::Reverse: {
      std::vector<Val> items = flatten_word(v);
      std::reverse(items.begin(), items.end());
      return vword(std::move(items));
    }
    case K::Blocks: {
      std::vector<std::vector<Val>> segs(1);
      for (const Val& it : flatten_word(v)) {
        if (it->tag == Value::Tag::InR)
          segs.emplace_back();
        else
          segs.back().push_back(it->a);
      }
      std::vector<Val> out;
      for (auto& s : segs) {
        if (e->blocks_maximal && s.empty()) continue;
        out.push_back(vword(std::move(s)));
      }
      return vword(std::move(out));
    }
    case K::Group: {
      size_t n = e->cayley.size();
      std::vector<Val> out;
      std::optional<size_t> acc;
      for (const Val& it : flatten_word(v)) {
        size_t g = detail::finite_index(it->a);
        acc = acc ? static_cast<size_t>(e->cayley[*acc][g]) : g;
        out.push_back(vpair(detail::finite_value(*acc, n), it->b));
      }
      return vword(std::move(out));
    }
    case K::Compose: return list_eval(e->g, list_eval(e->f, v));
    case K::Times: return vpair(list_eval(e->f, v->a), list_eval(e->g, v->b));
    case K::Plus:
      return v->tag == Value::Tag::InL ? vinl(list_eval(e->f, v->a))
                                       : vinr(list_eval(e->g, v->a));
    case K::Map: {
      std::vector<Val> out;
      for (const Val& it : flatten_word(v)) out.push_back(list_eval(e->f, it));
      return vword(std::move(out));
    }
  }
  throw InternalError("list_eval");
}

// ---------------------------------------------------------------------------
// Derived builders
// ---------------------------------------------------------------------------

/// copy_X for an arbitrary polynomial type, assembled from copy_A, copy_star
/// and structural plumbing.
inline LE le_copy(const PT& t) {
  using K = ListExpr::Kind;
  switch (t->tag) {
    case PolyType::Tag::Atoms: return le(K::CopyAtom);
    case PolyType::Tag::Star: return le(K::CopyStar);
    case PolyType::Tag::Unit: return le(K::RightI);  // 1 -> 1 x 1
    case PolyType::Tag::Sum: {
      // copy+copy, then inject componentwise
      LE inj1 = le_times(le_coproj1(t->right), le_coproj1(t->right));
      LE inj2 = le_times(le_coproj2(t->left), le_coproj2(t->left));
      return le_pipe({le_plus(le_copy(t->left), le_copy(t->right)), le_plus(inj1, inj2),
                      le(K::Merge)});
    }
    case PolyType::Tag::Prod: {
      // (X x X) x (Y x Y) -> (X x Y) x (X x Y) via the middle shuffle
      LE mid = le_pipe({le(K::AssocInv), le_times(le(K::Sym), le(K::Id)), le(K::Assoc)});
      return le_pipe({le_times(le_copy(t->left), le_copy(t->right)), le(K::Assoc),
                      le_times(le(K::Id), mid), le(K::AssocInv)});
    }
  }
  throw InternalError("le_copy");
}

/// Pairing through an explicit copy of the (copyable) input type.
inline LE le_fanout(const PT& in, LE f, LE g) {
  return le_pipe({le_copy(in), le_times(std::move(f), std::move(g))});
}

/// (X + Y) x Z -> X x Z + Y x Z.
inline LE le_right_distr() {
  return le_pipe({le(ListExpr::Kind::Sym), le(ListExpr::Kind::Distr),
                  le_plus(le(ListExpr::Kind::Sym), le(ListExpr::Kind::Sym))});
}

/// Singleton list: X -> X*.
inline LE le_singleton(const PT& elem) {
  return le_pipe({le(ListExpr::Kind::RightI), le_times(le(ListExpr::Kind::Id), le_const_eps(elem)),
                  le(ListExpr::Kind::Cons)});
}

/// Appends a fixed element at the back of a list: X* -> X*.
inline LE le_append_const(LE mk_elem) {
  using K = ListExpr::Kind;
  return le_pipe({le(K::Reverse), le(K::LeftI), le_times(std::move(mk_elem), le(K::Id)),
                  le(K::Cons), le(K::Reverse)});
}

/// Drops the last element (identity on the empty list): X* -> X*.
inline LE le_drop_last(const PT& elem) {
  using K = ListExpr::Kind;
  return le_pipe({le(K::Reverse), le(K::Destruct),
                  le_plus(le(K::Proj2), le_const_eps(elem)), le(K::Merge), le(K::Reverse)});
}

/// Prepends a fixed element: X* -> X*.
inline LE le_cons_const(LE mk_elem) {
  using K = ListExpr::Kind;
  return le_pipe({le(K::LeftI), le_times(std::move(mk_elem), le(K::Id)), le(K::Cons)});
}

/// X + (Y + Z) with all three summands mapped into W, then collapsed.
inline LE le_case3(LE f, LE g, LE h) {
  using K = ListExpr::Kind;
  return le_pipe({le_plus(std::move(f), le_plus(std::move(g), std::move(h))),
                  le_plus(le(K::Id), le(K::Merge)), le(K::Merge)});
}

// ---------------------------------------------------------------------------
// Library programs
// ---------------------------------------------------------------------------

namespace listlib {

using K = ListExpr::Kind;

inline PT hashed(const PT& sigma) { return pt_sum(sigma, pt_unit()); }

/// Joins (X*)* with # separators and restores the original separator count
/// (blocks produces n+1 segments for n separators).
inline LE join_with_hash(const PT& sigma) {
  PT sp1 = hashed(sigma);
  LE mk_hash = le_coproj2(sigma);  // 1 -> X + 1
  LE wrap_segment = le_pipe({le_map(le_coproj1(pt_unit())), le_append_const(mk_hash)});
  return le_pipe({le_map(wrap_segment), le(K::Concat), le_drop_last(sp1)});
}

/// Independently reverses every #-separated block of (A + 1)*.
inline LE map_reverse() {
  return le_pipe({le_blocks(), le_map(le(K::Reverse)), join_with_hash(pt_atoms())});
}

/// Duplicates every #-separated block of (A + 1)*.
inline LE map_duplicate() {
  PT a_star = pt_star(pt_atoms());
  LE dup = le_pipe({le(K::CopyStar), le_times(le(K::Id), le_singleton(a_star)), le(K::Cons),
                    le(K::Concat)});
  return le_pipe({le_blocks(), le_map(dup), join_with_hash(pt_atoms())});
}

/// Single-use atom propagation over (A + down + eps)*, via separator
/// insertion, blocks, and a per-block output function.
inline LE su_propagation() {
  PT sigma = pt_sum(pt_atoms(), pt_sum(pt_unit(), pt_unit()));
  PT sp1 = hashed(sigma);
  PT gamma = pt_sum(pt_atoms(), pt_unit());

  // letter makers 1 -> Sigma + 1
  LE mk_hash = le_coproj2(sigma);
  LE mk_down = le_pipe({le_coproj1(pt_unit()), le_coproj2(pt_atoms()), le_coproj1(pt_unit())});
  LE mk_eps = le_pipe({le_coproj2(pt_unit()), le_coproj2(pt_atoms()), le_coproj1(pt_unit())});

  // h: a -> [#, a], down -> [down, #], eps -> [eps]
  LE h_atom = le_pipe({le_coproj1(pt_sum(pt_unit(), pt_unit())), le_coproj1(pt_unit()),
                       le_singleton(sp1), le_cons_const(mk_hash)});
  LE h_down = le_pipe({mk_hash, le_singleton(sp1), le_cons_const(mk_down)});
  LE h_eps = le_pipe({mk_eps, le_singleton(sp1)});
  LE hom = le_pipe({le_map(le_case3(h_atom, h_down, h_eps)), le(K::Concat)});

  // per-block output
  LE sigma_to_gamma = le_plus(le(K::Id), le(K::Merge));        // A+(1+1) -> A+1
  LE const_gamma_eps = le_pipe({le(K::ConstI), le_coproj2(pt_atoms())});  // any -> eps

  // last letter was the output instruction: emit [eps, eps..., head-atom]
  LE flush_case = le_pipe({le_times(le(K::RightIInv), le_map(const_gamma_eps)),
                           le_times(sigma_to_gamma, le(K::Id)), le(K::Cons),
                           le_append_const(le_coproj2(pt_atoms())), le(K::Reverse)});
  // no output instruction: all positions are silent
  LE silent_tail = le_pipe({le_times(le(K::ConstI), le_map(const_gamma_eps)), le(K::LeftIInv),
                            le_cons_const(le_coproj2(pt_atoms())),
                            le_append_const(le_coproj2(pt_atoms()))});

  // block with >= 2 letters: split off head and last, dispatch on the last
  LE long_block = le_pipe(
      {le(K::AssocInv),  // (head, (last, mid-rev)) -> ((head, last), mid-rev)
       le_times(le(K::Distr), le(K::Id)),
       le_right_distr(),
       le_plus(silent_tail,  // last is an atom: unreachable, silent
               le_pipe({le_times(le(K::Distr), le(K::Id)), le_right_distr(),
                        le_plus(flush_case, silent_tail), le(K::Merge)})),
       le(K::Merge)});

  LE single_block = le_pipe({le(K::ConstI), le_coproj2(pt_atoms()), le_singleton(gamma)});
  LE nonempty = le_pipe({le_times(le(K::Id), le_pipe({le(K::Reverse), le(K::Destruct)})),
                         le(K::Distr), le_plus(long_block, single_block), le(K::Merge)});
  LE block_out = le_pipe({le(K::Destruct), le_plus(nonempty, le_const_eps(gamma)), le(K::Merge)});

  return le_pipe({hom, le_blocks(), le_map(block_out), le(K::Concat)});
}

/// Multiple-use bit propagation over (filled + hollow + eps)*: group each
/// register value with its run, replace the run by the value, then shift one
/// position right.
inline LE bit_propagation() {
  PT bits = pt_sum(pt_unit(), pt_sum(pt_unit(), pt_unit()));
  PT bp1 = hashed(bits);

  // letter makers 1 -> bits
  LE u_filled = le_coproj1(pt_sum(pt_unit(), pt_unit()));
  LE u_hollow = le_pipe({le_coproj1(pt_unit()), le_coproj2(pt_unit())});
  LE u_eps = le_pipe({le_coproj2(pt_unit()), le_coproj2(pt_unit())});
  LE mk_hash = le_coproj2(bits);  // 1 -> bits + 1
  auto hash_letter = [&](const LE& u) { return le_pipe({u, le_coproj1(pt_unit())}); };

  // h: set instructions get a separator in front, eps stays
  LE h_set1 = le_pipe({hash_letter(u_filled), le_singleton(bp1), le_cons_const(mk_hash)});
  LE h_set2 = le_pipe({hash_letter(u_hollow), le_singleton(bp1), le_cons_const(mk_hash)});
  LE h_eps = le_pipe({hash_letter(u_eps), le_singleton(bp1)});
  LE hom = le_pipe({le_map(le_case3(h_set1, h_set2, h_eps)), le(K::Concat)});

  // replace a block [m, eps...] by m repeated; finite m is rebuilt per case
  auto fill_with = [&](const LE& mk) {
    return le_pipe({le(K::LeftIInv), le_map(le_pipe({le(K::ConstI), mk})),
                    le_cons_const(mk)});
  };
  LE per_pair = le_pipe(
      {le_right_distr(),
       le_plus(fill_with(u_filled),
               le_pipe({le_right_distr(),
                        le_plus(fill_with(u_hollow), fill_with(u_eps)), le(K::Merge)})),
       le(K::Merge)});
  LE replace = le_pipe({le(K::Destruct), le_plus(per_pair, le_const_eps(bits)), le(K::Merge)});

  return le_pipe({hom, le_blocks(), le_map(replace), le(K::Concat),
                  le_cons_const(u_eps), le_drop_last(bits)});
}

}  // namespace listlib

/// Bundled programs with their input types.
struct LibraryProgram {
  LE expr;
  PT input;
};

inline LibraryProgram library_program(const std::string& name) {
  if (name == "map_reverse")
    return {listlib::map_reverse(), pt_star(pt_sum(pt_atoms(), pt_unit()))};
  if (name == "map_duplicate")
    return {listlib::map_duplicate(), pt_star(pt_sum(pt_atoms(), pt_unit()))};
  if (name == "su_propagation")
    return {listlib::su_propagation(),
            pt_star(pt_sum(pt_atoms(), pt_sum(pt_unit(), pt_unit())))};
  if (name == "bit_propagation")
    return {listlib::bit_propagation(),
            pt_star(pt_sum(pt_unit(), pt_sum(pt_unit(), pt_unit())))};
  throw SchemaError("unknown library program: " + name);
}

}  // namespace su
