#pragma once

#include "su/sutree.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Orbit-finite semigroups over a polynomial carrier, with a possibly
// non-injective equality relation (the carrier then represents a quotient).
// Loaded presentations back mul/eq by k-fold-use trees; derived semigroups
// (e.g. Mealy behaviours) supply closures directly.
// ---------------------------------------------------------------------------

struct Semigroup {
  Desc carrier;
  AtomSet consts;
  std::function<Val(const Val&, const Val&)> mul_fn;
  std::function<bool(const Val&, const Val&)> eq_fn;  // null: structural equality
  std::optional<MultiTree> product_tree;              // loaded presentations only
  std::optional<MultiTree> eq_tree;

  Val mul(const Val& x, const Val& y) const { return mul_fn(x, y); }

  bool eq(const Val& x, const Val& y) const {
    return eq_fn ? eq_fn(x, y) : value_eq(x, y);
  }
};

inline Semigroup presentation_semigroup(Desc carrier, MultiTree product,
                                        std::optional<MultiTree> eq, AtomSet consts) {
  Semigroup s;
  s.carrier = carrier;
  s.consts = std::move(consts);
  s.product_tree = product;
  s.eq_tree = eq;
  Desc pair_desc = prod_desc(carrier, carrier);
  s.mul_fn = [product, pair_desc](const Val& x, const Val& y) {
    return lift_multi(product, vpair(x, y));
  };
  if (eq) {
    MultiTree eq_mt = *eq;
    s.eq_fn = [eq_mt](const Val& x, const Val& y) {
      return lift_multi(eq_mt, vpair(x, y))->tag == Value::Tag::InL;
    };
  }
  return s;
}

/// Atomless semigroup from an explicit multiplication table; carrier is
/// 1 + ... + 1 with one branch per element.
inline Semigroup table_semigroup(const std::vector<std::vector<int>>& table) {
  size_t n = table.size();
  for (auto& row : table) {
    if (row.size() != n) throw SchemaError("table_semigroup: ragged table");
    for (int v : row)
      if (v < 0 || static_cast<size_t>(v) >= n) throw SchemaError("table_semigroup: entry range");
  }
  Desc carrier = finite_desc(static_cast<int>(n));
  Desc dom = prod_desc(carrier, carrier);
  SUTree t = tree_from_map(dom, carrier, [&](const Val& v) {
    size_t i = encode(carrier, v->a).branch;
    size_t j = encode(carrier, v->b).branch;
    return decode(carrier, static_cast<size_t>(table[i][j]), {});
  });
  return presentation_semigroup(carrier, mt_from_su(t), std::nullopt, {});
}

// ---------------------------------------------------------------------------
// Canonical element keys and generated subsemigroups
// ---------------------------------------------------------------------------

/// Pool used by witness searches: base atoms plus `fresh` new ids.
inline AtomSet pool_with_fresh(AtomSet base, int fresh) {
  int id = 0;
  for (int i = 0; i < fresh; ++i) {
    Atom a{id};
    while (base.contains(a)) a.id++;
    id = a.id + 1;
    base.insert(a);
  }
  return base;
}

/// Canonical key of the eq-class of x modulo frozen-permutations: the least
/// canonical form over the class members drawn from the element's support,
/// the frozen atoms, and dim(carrier) fresh atoms.
inline Val element_key(const Semigroup& s, const Val& x, AtomSet frozen) {
  frozen.insert_all(s.consts);
  if (!s.eq_fn) return canon(s.carrier, x, frozen);
  AtomSet pool = set_union(support(x), frozen);
  pool = pool_with_fresh(pool, dim(s.carrier));
  std::optional<Val> best;
  for (const Val& y : enumerate_values(s.carrier, pool)) {
    if (!s.eq(x, y)) continue;
    Val c = canon(s.carrier, y, frozen);
    if (!best || value_lt(c, *best)) best = c;
  }
  if (!best) throw InternalError("element_key: element not in its own pool");
  return *best;
}

namespace detail {

/// Injective renamings of `moving` into `target_base` plus fresh atoms
/// avoiding `avoid`. The resulting permutations fix everything outside the
/// moved atoms and their images; in particular they fix `avoid`.
inline std::vector<Perm> value_alignments(const AtomSet& moving, const AtomSet& target_base,
                                          const AtomSet& avoid, int fresh_budget) {
  std::vector<Atom> src = moving.members();
  std::vector<Atom> targets = target_base.members();
  {
    AtomSet blocked = set_union(set_union(avoid, target_base), moving);
    int id = 0;
    for (int i = 0; i < fresh_budget; ++i) {
      Atom a{id};
      while (blocked.contains(a)) a.id++;
      id = a.id + 1;
      targets.push_back(a);
      blocked.insert(a);
    }
  }
  std::vector<Perm> out;
  std::function<void(size_t, std::vector<Atom>&)> rec = [&](size_t pos, std::vector<Atom>& chosen) {
    if (pos == src.size()) {
      std::map<Atom, Atom> m;
      for (size_t i = 0; i < src.size(); ++i) m[src[i]] = chosen[i];
      out.push_back(Perm::extending(m));
      return;
    }
    for (Atom t : targets) {
      if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
      chosen.push_back(t);
      rec(pos + 1, chosen);
      chosen.pop_back();
    }
  };
  std::vector<Atom> chosen;
  rec(0, chosen);
  return out;
}

}  // namespace detail

/// Closure of the consts-orbits of the generators under the product, as a
/// deterministic list of canonical element keys. Products of two canonical
/// representatives are taken over every relative alignment of their supports.
inline std::vector<Val> generate(const Semigroup& s, const std::vector<Val>& gens) {
  std::vector<Val> elems;
  std::set<std::string> seen;
  auto push = [&](const Val& x) {
    Val key = element_key(s, x, {});
    std::string k = value_to_string(key);
    if (seen.insert(k).second) elems.push_back(key);
  };
  for (const Val& g : gens) push(g);
  size_t done = 0;
  while (done < elems.size()) {
    size_t n = elems.size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (i < done && j < done) continue;
        Val x = elems[i];
        AtomSet x_supp;
        for (Atom a : support(x))
          if (!s.consts.contains(a)) x_supp.insert(a);
        AtomSet y_moving;
        for (Atom a : support(elems[j]))
          if (!s.consts.contains(a)) y_moving.insert(a);
        for (const Perm& rho :
             detail::value_alignments(y_moving, x_supp, s.consts, dim(s.carrier))) {
          Val y = act(rho, elems[j]);
          push(s.mul(x, y));
          push(s.mul(y, x));
        }
      }
    done = n;
  }
  return elems;
}

inline bool is_idempotent(const Semigroup& s, const Val& e) { return s.eq(s.mul(e, e), e); }

/// The idempotent in the cyclic subsemigroup generated by x.
inline Val idempotent_power(const Semigroup& s, const Val& x) {
  AtomSet frozen = set_union(s.consts, support(x));
  std::vector<Val> powers{x};
  std::vector<std::string> keys{value_to_string(element_key(s, x, frozen))};
  while (true) {
    Val next = s.mul(powers.back(), x);
    std::string k = value_to_string(element_key(s, next, frozen));
    for (size_t i = 0; i < keys.size(); ++i) {
      if (keys[i] == k) {
        // cycle of period p starting at index i; the idempotent is x^m with
        // m a multiple of p, m >= i+1
        size_t p = powers.size() - i;
        size_t m = ((i + p) / p) * p;
        Val e = powers[m - 1];
        if (!is_idempotent(s, e)) throw InternalError("idempotent_power: cycle gave no idempotent");
        return e;
      }
    }
    powers.push_back(next);
    keys.push_back(k);
  }
}

// ---------------------------------------------------------------------------
// Green's relations
// ---------------------------------------------------------------------------

namespace detail {

/// Witness pool elements of S^1: all carrier values over the pool, plus the
/// adjoined identity (represented as an absent optional).
inline std::vector<std::optional<Val>> with_identity_pool(const Semigroup& s, const AtomSet& pool) {
  std::vector<std::optional<Val>> out;
  out.emplace_back(std::nullopt);
  for (const Val& v : enumerate_values(s.carrier, pool)) out.emplace_back(v);
  return out;
}

inline Val mul_wi(const Semigroup& s, const std::optional<Val>& a, const Val& x,
                  const std::optional<Val>& b) {
  Val r = a ? s.mul(*a, x) : x;
  return b ? s.mul(r, *b) : r;
}

inline AtomSet greens_pool(const Semigroup& s, const Val& x, const Val& y) {
  AtomSet base = set_union(set_union(support(x), support(y)), s.consts);
  return pool_with_fresh(base, 2 * dim(s.carrier));
}

}  // namespace detail

/// x is a prefix of y: x b = y for some b in S^1.
inline bool is_prefix(const Semigroup& s, const Val& x, const Val& y) {
  AtomSet pool = detail::greens_pool(s, x, y);
  for (const auto& b : detail::with_identity_pool(s, pool))
    if (s.eq(b ? s.mul(x, *b) : x, y)) return true;
  return false;
}

inline bool is_suffix(const Semigroup& s, const Val& x, const Val& y) {
  AtomSet pool = detail::greens_pool(s, x, y);
  for (const auto& a : detail::with_identity_pool(s, pool))
    if (s.eq(a ? s.mul(*a, x) : x, y)) return true;
  return false;
}

/// x is an infix of y: a x b = y for some a, b in S^1.
inline bool is_infix(const Semigroup& s, const Val& x, const Val& y) {
  AtomSet pool = detail::greens_pool(s, x, y);
  auto wi = detail::with_identity_pool(s, pool);
  for (const auto& a : wi)
    for (const auto& b : wi)
      if (s.eq(detail::mul_wi(s, a, x, b), y)) return true;
  return false;
}

inline bool j_equivalent(const Semigroup& s, const Val& x, const Val& y) {
  return is_infix(s, x, y) && is_infix(s, y, x);
}

inline bool h_equivalent(const Semigroup& s, const Val& x, const Val& y) {
  return is_prefix(s, x, y) && is_prefix(s, y, x) && is_suffix(s, x, y) && is_suffix(s, y, x);
}

/// Partition of the given elements into J-classes (indices into elems).
inline std::vector<std::vector<size_t>> j_classes(const Semigroup& s,
                                                  const std::vector<Val>& elems) {
  std::vector<std::vector<size_t>> classes;
  std::vector<int> cls(elems.size(), -1);
  for (size_t i = 0; i < elems.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = static_cast<int>(classes.size());
    classes.push_back({i});
    for (size_t j = i + 1; j < elems.size(); ++j)
      if (cls[j] < 0 && j_equivalent(s, elems[i], elems[j])) {
        cls[j] = cls[i];
        classes.back().push_back(j);
      }
  }
  return classes;
}

/// Length of the longest strict infix chain among the given elements.
inline int j_height(const Semigroup& s, const std::vector<Val>& elems) {
  auto classes = j_classes(s, elems);
  size_t n = classes.size();
  // edge a -> b iff rep(a) is a proper infix of rep(b)
  std::vector<std::vector<size_t>> succ(n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if (is_infix(s, elems[classes[a][0]], elems[classes[b][0]])) succ[a].push_back(b);
    }
  std::vector<int> memo(n, 0);
  std::function<int(size_t)> longest = [&](size_t a) -> int {
    if (memo[a]) return memo[a];
    int best = 1;
    for (size_t b : succ[a]) best = std::max(best, 1 + longest(b));
    return memo[a] = best;
  };
  int h = 0;
  for (size_t a = 0; a < n; ++a) h = std::max(h, longest(a));
  return h;
}

/// J-height of a single element: the longest strict infix chain starting at
/// it inside the given element universe.
inline int j_height_of(const Semigroup& s, const Val& x, const std::vector<Val>& elems) {
  int best = 1;
  for (const Val& y : elems)
    if (is_infix(s, x, y) && !is_infix(s, y, x)) {
      // chain continues at y
      std::vector<Val> rest;
      for (const Val& z : elems)
        if (is_infix(s, y, z)) rest.push_back(z);
      best = std::max(best, 1 + j_height_of(s, y, rest));
    }
  return best;
}

// ---------------------------------------------------------------------------
// Smoothness and factorization trees
// ---------------------------------------------------------------------------

/// Memoizes Green's relation queries by the canonical form of the argument
/// pair; sound because all the operations involved are equivariant modulo
/// the semigroup's constants.
class GreensCache {
public:
  explicit GreensCache(const Semigroup& s)
      : s_(&s), pair_(prod_desc(s.carrier, s.carrier)) {}

  bool infix(const Val& x, const Val& y) {
    std::string k = key(x, y);
    auto it = infix_.find(k);
    if (it != infix_.end()) return it->second;
    bool r = is_infix(*s_, x, y);
    infix_[k] = r;
    return r;
  }

  bool j_equiv(const Val& x, const Val& y) { return infix(x, y) && infix(y, x); }

  bool smooth_pair(const Val& a, const Val& b) {
    std::string k = key(a, b);
    auto it = smooth_.find(k);
    if (it != smooth_.end()) return it->second;
    Val p = s_->mul(a, b);
    bool r = j_equiv(p, a) && j_equiv(p, b);
    smooth_[k] = r;
    return r;
  }

  const Semigroup& semigroup() const { return *s_; }

private:
  std::string key(const Val& x, const Val& y) {
    return value_to_string(canon(pair_, vpair(x, y), s_->consts));
  }

  const Semigroup* s_;
  Desc pair_;
  std::map<std::string, bool> infix_, smooth_;
};

/// A sequence is smooth iff every pair of consecutive elements multiplies to
/// something J-equivalent to both.
inline bool is_smooth_pair(const Semigroup& s, const Val& a, const Val& b) {
  Val p = s.mul(a, b);
  return j_equivalent(s, p, a) && j_equivalent(s, p, b);
}

inline bool is_smooth(GreensCache& cache, std::span<const Val> seq) {
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (!cache.smooth_pair(seq[i], seq[i + 1])) return false;
  return true;
}

inline bool is_smooth(const Semigroup& s, std::span<const Val> seq) {
  GreensCache cache(s);
  return is_smooth(cache, seq);
}

struct FactTree {
  enum class Kind { Leaf, Unary, Binary, Smooth } kind = Kind::Leaf;
  Val value;
  std::vector<FactTree> children;
};

inline int fact_height(const FactTree& t) {
  int h = 0;
  for (const FactTree& c : t.children) h = std::max(h, fact_height(c));
  return h + 1;
}

inline void collect_leaves(const FactTree& t, std::vector<Val>& out) {
  if (t.kind == FactTree::Kind::Leaf) {
    out.push_back(t.value);
    return;
  }
  for (const FactTree& c : t.children) collect_leaves(c, out);
}

/// Checks all structural invariants: leaves in input order, node values equal
/// the fold of their children, smooth nodes have smooth child sequences.
inline bool validate_fact_tree(GreensCache& cache, const FactTree& t, std::span<const Val> seq,
                               std::string* diag = nullptr) {
  const Semigroup& s = cache.semigroup();
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  std::vector<Val> leaves;
  collect_leaves(t, leaves);
  if (leaves.size() != seq.size()) return fail("leaf count mismatch");
  for (size_t i = 0; i < leaves.size(); ++i)
    if (!value_eq(leaves[i], seq[i])) return fail("leaves out of order");
  std::function<bool(const FactTree&)> rec = [&](const FactTree& node) -> bool {
    switch (node.kind) {
      case FactTree::Kind::Leaf:
        return node.children.empty() || fail("leaf with children");
      case FactTree::Kind::Unary:
        if (node.children.size() != 1) return fail("unary arity");
        break;
      case FactTree::Kind::Binary:
        if (node.children.size() != 2) return fail("binary arity");
        break;
      case FactTree::Kind::Smooth:
        if (node.children.size() < 2) return fail("smooth node with fewer than two children");
        break;
    }
    Val prod = node.children[0].value;
    for (size_t i = 1; i < node.children.size(); ++i) prod = s.mul(prod, node.children[i].value);
    if (!s.eq(prod, node.value)) return fail("node value is not the fold of its children");
    if (node.kind == FactTree::Kind::Smooth) {
      std::vector<Val> vals;
      for (const FactTree& c : node.children) vals.push_back(c.value);
      if (!is_smooth(cache, vals)) return fail("smooth node over a non-smooth sequence");
    }
    for (const FactTree& c : node.children)
      if (!rec(c)) return false;
    return true;
  };
  return rec(t);
}

inline bool validate_fact_tree(const Semigroup& s, const FactTree& t, std::span<const Val> seq,
                               std::string* diag = nullptr) {
  GreensCache cache(s);
  return validate_fact_tree(cache, t, seq, diag);
}

namespace detail {

inline FactTree smooth_or_single(const Semigroup& s, std::vector<FactTree> run) {
  if (run.size() == 1) return std::move(run[0]);
  FactTree node;
  node.kind = FactTree::Kind::Smooth;
  node.value = run[0].value;
  for (size_t i = 1; i < run.size(); ++i) node.value = s.mul(node.value, run[i].value);
  node.children = std::move(run);
  return node;
}

inline FactTree binary_node(const Semigroup& s, FactTree l, FactTree r) {
  FactTree node;
  node.kind = FactTree::Kind::Binary;
  node.value = s.mul(l.value, r.value);
  node.children.push_back(std::move(l));
  node.children.push_back(std::move(r));
  return node;
}

}  // namespace detail

/// Bounded-height smooth factorization tree. Each level groups the current
/// sequence into maximal smooth runs; a run together with the element
/// breaking it forms a block whose product sits strictly lower in the infix
/// order, so the number of levels is bounded by the J-height.
inline FactTree smooth_tree(GreensCache& cache, std::span<const Val> seq) {
  const Semigroup& s = cache.semigroup();
  if (seq.empty()) throw TypeError("smooth_tree: empty sequence");
  std::vector<FactTree> nodes;
  for (const Val& v : seq) nodes.push_back(FactTree{FactTree::Kind::Leaf, v, {}});
  while (nodes.size() > 1) {
    std::vector<FactTree> next;
    std::vector<FactTree> run;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (run.empty() || cache.smooth_pair(run.back().value, nodes[i].value)) {
        run.push_back(std::move(nodes[i]));
        continue;
      }
      // nodes[i] breaks the run: close the block (run, breaker)
      FactTree run_node = detail::smooth_or_single(s, std::move(run));
      run.clear();
      next.push_back(detail::binary_node(s, std::move(run_node), std::move(nodes[i])));
    }
    if (!run.empty()) next.push_back(detail::smooth_or_single(s, std::move(run)));
    nodes = std::move(next);
  }
  return std::move(nodes[0]);
}

inline FactTree smooth_tree(const Semigroup& s, std::span<const Val> seq) {
  GreensCache cache(s);
  return smooth_tree(cache, seq);
}

}  // namespace su
