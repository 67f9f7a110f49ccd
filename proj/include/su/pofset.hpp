#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include "su/atoms.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Set descriptors
// ---------------------------------------------------------------------------

/// Descriptor of a polynomial orbit-finite set: 1, A, sums and products.
/// The extra Reg constructor describes one output-word register; it only
/// appears in streaming string transducer state descriptors.
struct SetDesc;
using Desc = std::shared_ptr<const SetDesc>;

struct SetDesc {
  enum class Tag { Unit, Atoms, Sum, Prod, Reg };
  Tag tag;
  Desc left, right;
};

inline Desc unit_desc() {
  static const Desc d = std::make_shared<SetDesc>(SetDesc{SetDesc::Tag::Unit, nullptr, nullptr});
  return d;
}
inline Desc atoms_desc() {
  static const Desc d = std::make_shared<SetDesc>(SetDesc{SetDesc::Tag::Atoms, nullptr, nullptr});
  return d;
}
inline Desc reg_desc() {
  static const Desc d = std::make_shared<SetDesc>(SetDesc{SetDesc::Tag::Reg, nullptr, nullptr});
  return d;
}
inline Desc sum_desc(Desc l, Desc r) {
  return std::make_shared<SetDesc>(SetDesc{SetDesc::Tag::Sum, std::move(l), std::move(r)});
}
inline Desc prod_desc(Desc l, Desc r) {
  return std::make_shared<SetDesc>(SetDesc{SetDesc::Tag::Prod, std::move(l), std::move(r)});
}

/// Right-associated sum X1 + (X2 + (... + Xn)).
inline Desc sum_all(const std::vector<Desc>& parts) {
  if (parts.empty()) throw InternalError("sum_all: empty");
  Desc d = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) d = sum_desc(parts[i], d);
  return d;
}

/// Right-associated product X1 x (X2 x (... x Xn)).
inline Desc prod_all(const std::vector<Desc>& parts) {
  if (parts.empty()) throw InternalError("prod_all: empty");
  Desc d = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) d = prod_desc(parts[i], d);
  return d;
}

/// 1 + 1 + ... + 1 with n branches.
inline Desc finite_desc(int n) {
  std::vector<Desc> parts(static_cast<size_t>(n), unit_desc());
  return sum_all(parts);
}

/// Right-associated k-fold product of d.
inline Desc pow_desc(const Desc& d, int k) {
  if (k <= 0) throw InternalError("pow_desc: k must be positive");
  std::vector<Desc> parts(static_cast<size_t>(k), d);
  return prod_all(parts);
}

inline bool desc_equal(const Desc& a, const Desc& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case SetDesc::Tag::Sum:
    case SetDesc::Tag::Prod:
      return desc_equal(a->left, b->left) && desc_equal(a->right, b->right);
    default:
      return true;
  }
}

inline bool desc_has_reg(const Desc& d) {
  switch (d->tag) {
    case SetDesc::Tag::Reg: return true;
    case SetDesc::Tag::Sum:
    case SetDesc::Tag::Prod: return desc_has_reg(d->left) || desc_has_reg(d->right);
    default: return false;
  }
}

inline std::string desc_to_string(const Desc& d) {
  switch (d->tag) {
    case SetDesc::Tag::Unit: return "1";
    case SetDesc::Tag::Atoms: return "A";
    case SetDesc::Tag::Reg: return "W";
    case SetDesc::Tag::Sum:
      return "(" + desc_to_string(d->left) + "+" + desc_to_string(d->right) + ")";
    case SetDesc::Tag::Prod:
      return "(" + desc_to_string(d->left) + "x" + desc_to_string(d->right) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

struct Value;
using Val = std::shared_ptr<const Value>;

/// Immutable value tree. Word holds register contents (a word over some
/// letter set); Cat is a lazy concatenation of two Word/Cat values so that
/// copyless register updates stay O(1).
struct Value {
  enum class Tag { Unit, Atom, InL, InR, Pair, Word, Cat };
  Tag tag;
  Atom atom{};               // Atom
  Val a, b;                  // InL/InR (a), Pair (a,b), Cat (a,b)
  std::vector<Val> items;    // Word
};

inline Val vunit() {
  static const Val v = std::make_shared<Value>(Value{Value::Tag::Unit, {}, nullptr, nullptr, {}});
  return v;
}
inline Val vatom(Atom x) {
  return std::make_shared<Value>(Value{Value::Tag::Atom, x, nullptr, nullptr, {}});
}
inline Val vatom(int id) { return vatom(Atom{id}); }
inline Val vinl(Val v) {
  return std::make_shared<Value>(Value{Value::Tag::InL, {}, std::move(v), nullptr, {}});
}
inline Val vinr(Val v) {
  return std::make_shared<Value>(Value{Value::Tag::InR, {}, std::move(v), nullptr, {}});
}
inline Val vpair(Val l, Val r) {
  return std::make_shared<Value>(Value{Value::Tag::Pair, {}, std::move(l), std::move(r), {}});
}
inline Val vword(std::vector<Val> items) {
  return std::make_shared<Value>(Value{Value::Tag::Word, {}, nullptr, nullptr, std::move(items)});
}
inline Val vcat(Val l, Val r) {
  return std::make_shared<Value>(Value{Value::Tag::Cat, {}, std::move(l), std::move(r), {}});
}

/// Flattens a Word/Cat value into the list of its letters.
inline void flatten_word_into(const Val& v, std::vector<Val>& out) {
  if (v->tag == Value::Tag::Word) {
    out.insert(out.end(), v->items.begin(), v->items.end());
  } else if (v->tag == Value::Tag::Cat) {
    flatten_word_into(v->a, out);
    flatten_word_into(v->b, out);
  } else {
    throw TypeError("flatten_word: not a word value");
  }
}

inline std::vector<Val> flatten_word(const Val& v) {
  std::vector<Val> out;
  flatten_word_into(v, out);
  return out;
}

inline int value_cmp(const Val& x, const Val& y);

inline int vec_cmp(const std::vector<Val>& x, const std::vector<Val>& y) {
  for (size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (int c = value_cmp(x[i], y[i])) return c;
  return x.size() < y.size() ? -1 : x.size() > y.size() ? 1 : 0;
}

inline int value_cmp(const Val& x, const Val& y) {
  auto rank = [](const Value& v) {
    // Word and Cat compare as the same kind.
    switch (v.tag) {
      case Value::Tag::Unit: return 0;
      case Value::Tag::Atom: return 1;
      case Value::Tag::InL: return 2;
      case Value::Tag::InR: return 3;
      case Value::Tag::Pair: return 4;
      default: return 5;
    }
  };
  int rx = rank(*x), ry = rank(*y);
  if (rx != ry) return rx < ry ? -1 : 1;
  switch (x->tag) {
    case Value::Tag::Unit: return 0;
    case Value::Tag::Atom:
      return x->atom.id < y->atom.id ? -1 : x->atom.id > y->atom.id ? 1 : 0;
    case Value::Tag::InL:
    case Value::Tag::InR:
      return value_cmp(x->a, y->a);
    case Value::Tag::Pair:
      if (int c = value_cmp(x->a, y->a)) return c;
      return value_cmp(x->b, y->b);
    default:
      return vec_cmp(flatten_word(x), flatten_word(y));
  }
}

inline bool value_eq(const Val& x, const Val& y) { return value_cmp(x, y) == 0; }
inline bool value_lt(const Val& x, const Val& y) { return value_cmp(x, y) < 0; }

struct ValLess {
  bool operator()(const Val& x, const Val& y) const { return value_lt(x, y); }
};

inline std::string value_to_string(const Val& v) {
  switch (v->tag) {
    case Value::Tag::Unit: return "*";
    case Value::Tag::Atom: return std::to_string(v->atom.id);
    case Value::Tag::InL: return "L" + value_to_string(v->a);
    case Value::Tag::InR: return "R" + value_to_string(v->a);
    case Value::Tag::Pair:
      return "(" + value_to_string(v->a) + "," + value_to_string(v->b) + ")";
    default: {
      std::string s = "[";
      bool first = true;
      for (const Val& it : flatten_word(v)) {
        if (!first) s += " ";
        s += value_to_string(it);
        first = false;
      }
      return s + "]";
    }
  }
}

/// Exactly the atoms occurring in the value; for polynomial carriers this is
/// the least support.
inline void support_into(const Val& v, AtomSet& out) {
  switch (v->tag) {
    case Value::Tag::Unit: return;
    case Value::Tag::Atom: out.insert(v->atom); return;
    case Value::Tag::InL:
    case Value::Tag::InR: support_into(v->a, out); return;
    case Value::Tag::Pair:
      support_into(v->a, out);
      support_into(v->b, out);
      return;
    case Value::Tag::Cat:
      support_into(v->a, out);
      support_into(v->b, out);
      return;
    case Value::Tag::Word:
      for (const Val& it : v->items) support_into(it, out);
      return;
  }
}

inline AtomSet support(const Val& v) {
  AtomSet s;
  support_into(v, s);
  return s;
}

inline AtomSet support_word(std::span<const Val> word) {
  AtomSet s;
  for (const Val& v : word) support_into(v, s);
  return s;
}

/// Applies an atom permutation to every atom in the value.
inline Val act(const Perm& p, const Val& v) {
  switch (v->tag) {
    case Value::Tag::Unit: return v;
    case Value::Tag::Atom: return vatom(p(v->atom));
    case Value::Tag::InL: return vinl(act(p, v->a));
    case Value::Tag::InR: return vinr(act(p, v->a));
    case Value::Tag::Pair: return vpair(act(p, v->a), act(p, v->b));
    case Value::Tag::Cat: return vcat(act(p, v->a), act(p, v->b));
    case Value::Tag::Word: {
      std::vector<Val> items;
      items.reserve(v->items.size());
      for (const Val& it : v->items) items.push_back(act(p, it));
      return vword(std::move(items));
    }
  }
  throw InternalError("act: bad tag");
}

/// Structural membership test of a value in a descriptor.
inline bool check(const Desc& d, const Val& v) {
  switch (d->tag) {
    case SetDesc::Tag::Unit: return v->tag == Value::Tag::Unit;
    case SetDesc::Tag::Atoms: return v->tag == Value::Tag::Atom;
    case SetDesc::Tag::Reg:
      return v->tag == Value::Tag::Word || v->tag == Value::Tag::Cat;
    case SetDesc::Tag::Sum:
      if (v->tag == Value::Tag::InL) return check(d->left, v->a);
      if (v->tag == Value::Tag::InR) return check(d->right, v->a);
      return false;
    case SetDesc::Tag::Prod:
      return v->tag == Value::Tag::Pair && check(d->left, v->a) && check(d->right, v->b);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Normal form A^k1 + ... + A^kn
// ---------------------------------------------------------------------------

enum class Slot : uint8_t { AtomSlot, RegSlot };

/// Branch layouts of the normal form, in canonical distribution order
/// (left-to-right expansion of + over x).
struct NormalForm {
  std::vector<std::vector<Slot>> branches;

  size_t branch_count() const { return branches.size(); }

  int arity(size_t b) const { return static_cast<int>(branches[b].size()); }

  int atom_arity(size_t b) const {
    int n = 0;
    for (Slot s : branches[b])
      if (s == Slot::AtomSlot) ++n;
    return n;
  }

  bool operator==(const NormalForm& o) const { return branches == o.branches; }
};

inline NormalForm normal_form(const Desc& d) {
  switch (d->tag) {
    case SetDesc::Tag::Unit: return NormalForm{{{}}};
    case SetDesc::Tag::Atoms: return NormalForm{{{Slot::AtomSlot}}};
    case SetDesc::Tag::Reg: return NormalForm{{{Slot::RegSlot}}};
    case SetDesc::Tag::Sum: {
      NormalForm l = normal_form(d->left), r = normal_form(d->right);
      l.branches.insert(l.branches.end(), r.branches.begin(), r.branches.end());
      return l;
    }
    case SetDesc::Tag::Prod: {
      NormalForm l = normal_form(d->left), r = normal_form(d->right);
      NormalForm out;
      for (const auto& lb : l.branches)
        for (const auto& rb : r.branches) {
          std::vector<Slot> row = lb;
          row.insert(row.end(), rb.begin(), rb.end());
          out.branches.push_back(std::move(row));
        }
      return out;
    }
  }
  throw InternalError("normal_form: bad tag");
}

/// Maximum atom-tuple arity over the branches of the normal form.
inline int dim(const Desc& d) {
  NormalForm nf = normal_form(d);
  int m = 0;
  for (size_t b = 0; b < nf.branch_count(); ++b) m = std::max(m, nf.atom_arity(b));
  return m;
}

struct Encoded {
  size_t branch = 0;
  std::vector<Val> slots;  // atom or word values, in slot order
};

namespace detail {

inline void encode_into(const Desc& d, const Val& v, size_t& branch, std::vector<Val>& slots) {
  switch (d->tag) {
    case SetDesc::Tag::Unit:
      if (v->tag != Value::Tag::Unit) throw TypeError("encode: expected unit");
      return;
    case SetDesc::Tag::Atoms:
      if (v->tag != Value::Tag::Atom) throw TypeError("encode: expected atom");
      slots.push_back(v);
      return;
    case SetDesc::Tag::Reg:
      if (v->tag != Value::Tag::Word && v->tag != Value::Tag::Cat)
        throw TypeError("encode: expected word");
      slots.push_back(v);
      return;
    case SetDesc::Tag::Sum: {
      size_t nl = normal_form(d->left).branch_count();
      if (v->tag == Value::Tag::InL) {
        encode_into(d->left, v->a, branch, slots);
      } else if (v->tag == Value::Tag::InR) {
        size_t sub = 0;
        encode_into(d->right, v->a, sub, slots);
        branch += nl + sub;
        return;
      } else {
        throw TypeError("encode: expected injection");
      }
      return;
    }
    case SetDesc::Tag::Prod: {
      if (v->tag != Value::Tag::Pair) throw TypeError("encode: expected pair");
      size_t bl = 0, br = 0;
      encode_into(d->left, v->a, bl, slots);
      encode_into(d->right, v->b, br, slots);
      branch += bl * normal_form(d->right).branch_count() + br;
      return;
    }
  }
  throw InternalError("encode: bad tag");
}

inline Val decode_from(const Desc& d, size_t branch, std::span<const Val> slots, size_t& pos) {
  switch (d->tag) {
    case SetDesc::Tag::Unit:
      return vunit();
    case SetDesc::Tag::Atoms: {
      if (pos >= slots.size()) throw TypeError("decode: tuple too short");
      const Val& s = slots[pos++];
      if (s->tag != Value::Tag::Atom) throw TypeError("decode: expected atom slot");
      return s;
    }
    case SetDesc::Tag::Reg: {
      if (pos >= slots.size()) throw TypeError("decode: tuple too short");
      const Val& s = slots[pos++];
      if (s->tag != Value::Tag::Word && s->tag != Value::Tag::Cat)
        throw TypeError("decode: expected word slot");
      return s;
    }
    case SetDesc::Tag::Sum: {
      size_t nl = normal_form(d->left).branch_count();
      if (branch < nl) return vinl(decode_from(d->left, branch, slots, pos));
      return vinr(decode_from(d->right, branch - nl, slots, pos));
    }
    case SetDesc::Tag::Prod: {
      size_t nr = normal_form(d->right).branch_count();
      Val l = decode_from(d->left, branch / nr, slots, pos);
      Val r = decode_from(d->right, branch % nr, slots, pos);
      return vpair(std::move(l), std::move(r));
    }
  }
  throw InternalError("decode: bad tag");
}

}  // namespace detail

inline Encoded encode(const Desc& d, const Val& v) {
  Encoded e;
  detail::encode_into(d, v, e.branch, e.slots);
  return e;
}

inline Val decode(const Desc& d, size_t branch, std::span<const Val> slots) {
  NormalForm nf = normal_form(d);
  if (branch >= nf.branch_count()) throw TypeError("decode: branch out of range");
  if (slots.size() != static_cast<size_t>(nf.arity(branch)))
    throw TypeError("decode: tuple arity mismatch");
  size_t pos = 0;
  return detail::decode_from(d, branch, slots, pos);
}

/// Encode to a plain atom tuple; requires a register-free descriptor.
inline std::pair<size_t, std::vector<Atom>> encode_atoms(const Desc& d, const Val& v) {
  Encoded e = encode(d, v);
  std::vector<Atom> atoms;
  atoms.reserve(e.slots.size());
  for (const Val& s : e.slots) {
    if (s->tag != Value::Tag::Atom) throw TypeError("encode_atoms: register slot present");
    atoms.push_back(s->atom);
  }
  return {e.branch, std::move(atoms)};
}

inline Val decode_atoms(const Desc& d, size_t branch, std::span<const Atom> atoms) {
  std::vector<Val> slots;
  slots.reserve(atoms.size());
  for (Atom a : atoms) slots.push_back(vatom(a));
  return decode(d, branch, slots);
}

// ---------------------------------------------------------------------------
// Counting, enumeration, canonicalization
// ---------------------------------------------------------------------------

/// Number of values of d supported by beta: N(1)=1, N(A)=|beta|,
/// N(+)=sum, N(x)=product.
inline long long count_supported(const Desc& d, const AtomSet& beta) {
  switch (d->tag) {
    case SetDesc::Tag::Unit: return 1;
    case SetDesc::Tag::Atoms: return static_cast<long long>(beta.size());
    case SetDesc::Tag::Sum: return count_supported(d->left, beta) + count_supported(d->right, beta);
    case SetDesc::Tag::Prod: return count_supported(d->left, beta) * count_supported(d->right, beta);
    case SetDesc::Tag::Reg: throw TypeError("count_supported: register descriptor");
  }
  throw InternalError("count_supported: bad tag");
}

/// All values of d whose atoms come from `pool`, branch-major and
/// tuple-lexicographic in pool order.
inline std::vector<Val> enumerate_values(const Desc& d, const AtomSet& pool) {
  NormalForm nf = normal_form(d);
  std::vector<Val> out;
  const auto& atoms = pool.members();
  for (size_t b = 0; b < nf.branch_count(); ++b) {
    int k = nf.atom_arity(b);
    if (nf.arity(b) != k) throw TypeError("enumerate_values: register descriptor");
    std::vector<size_t> idx(static_cast<size_t>(k), 0);
    if (k > 0 && atoms.empty()) continue;
    while (true) {
      std::vector<Atom> tuple;
      tuple.reserve(idx.size());
      for (size_t i : idx) tuple.push_back(atoms[i]);
      out.push_back(decode_atoms(d, b, tuple));
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] + 1 == atoms.size()) {
        idx[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
    }
  }
  return out;
}

namespace detail {

/// Enumerates canonical tuples of length k: each position is either a frozen
/// atom or the j-th fresh atom (smallest ids outside frozen, ascending), with
/// fresh atoms introduced in first-occurrence order. Lexicographic in the
/// code (frozen atoms first, then fresh by index).
inline void enumerate_patterns(int k, const AtomSet& frozen, std::vector<std::vector<Atom>>& out) {
  std::vector<Atom> fresh;
  {
    int id = 0;
    while (static_cast<int>(fresh.size()) < k) {
      Atom a{id++};
      if (!frozen.contains(a)) fresh.push_back(a);
    }
  }
  const auto& froz = frozen.members();
  std::vector<Atom> tuple;
  std::function<void(int, int)> rec = [&](int pos, int used_fresh) {
    if (pos == k) {
      out.push_back(tuple);
      return;
    }
    for (Atom a : froz) {
      tuple.push_back(a);
      rec(pos + 1, used_fresh);
      tuple.pop_back();
    }
    for (int j = 0; j <= used_fresh && j < k; ++j) {
      tuple.push_back(fresh[static_cast<size_t>(j)]);
      rec(pos + 1, std::max(used_fresh, j + 1));
      tuple.pop_back();
    }
  };
  rec(0, 0);
}

}  // namespace detail

/// One value per frozen-orbit of d: branch-major, pattern-lexicographic.
/// Every representative equals its own canonical renaming.
inline std::vector<Val> enumerate_orbit_reps(const Desc& d, const AtomSet& frozen) {
  NormalForm nf = normal_form(d);
  std::vector<Val> out;
  for (size_t b = 0; b < nf.branch_count(); ++b) {
    if (nf.atom_arity(b) != nf.arity(b)) throw TypeError("enumerate_orbit_reps: register descriptor");
    std::vector<std::vector<Atom>> tuples;
    detail::enumerate_patterns(nf.arity(b), frozen, tuples);
    for (const auto& t : tuples) out.push_back(decode_atoms(d, b, t));
  }
  return out;
}

/// Canonical representative of v's frozen-orbit (the one produced by
/// enumerate_orbit_reps).
inline Val canon(const Desc& d, const Val& v, const AtomSet& frozen) {
  if (!check(d, v)) throw TypeError("canon: ill-typed value");
  auto [branch, atoms] = encode_atoms(d, v);
  auto [renamed, perm] = canonical_rename(atoms, frozen);
  (void)perm;
  return decode_atoms(d, branch, renamed);
}

/// Canonical representative together with the renaming used, so callers can
/// carry results back through the inverse permutation.
inline std::pair<Val, Perm> canon_with_perm(const Desc& d, const Val& v, const AtomSet& frozen) {
  auto [branch, atoms] = encode_atoms(d, v);
  auto [renamed, perm] = canonical_rename(atoms, frozen);
  return {decode_atoms(d, branch, renamed), perm};
}

}  // namespace su
