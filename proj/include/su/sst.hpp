#pragma once

#include "su/pofset.hpp"
#include "su/sutree.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Single-use streaming string transducers: one-way machines whose states mix
// atom fields with write-only word registers over the output alphabet.
// State descriptors use the Reg constructor of SetDesc. Register trees mirror
// single-use decision trees, except that leaves may fill register slots with
// constructor sequences over {input register, output letter}, and queries
// touch atom slots only. The copyless restriction: on every path each atom
// slot and each register slot is used at most once.
// ---------------------------------------------------------------------------

struct RegItem {
  bool is_reg = true;
  int reg = 0;                      // input register slot index
  size_t letter_branch = 0;         // or a Gamma letter constructor
  std::vector<Operand> letter_outs;
};

inline RegItem reg_item(int reg) { return RegItem{true, reg, 0, {}}; }
inline RegItem letter_item(size_t branch, std::vector<Operand> outs) {
  return RegItem{false, 0, branch, std::move(outs)};
}

struct RegOut {
  bool is_reg_slot = false;
  Operand atom;                // atom slots
  std::vector<RegItem> items;  // register slots
};

inline RegOut atom_out(Operand o) { return RegOut{false, o, {}}; }
inline RegOut reg_out(std::vector<RegItem> items) { return RegOut{true, {}, std::move(items)}; }

struct RegNode;
using RegNodePtr = std::shared_ptr<const RegNode>;

struct RegNode {
  bool is_leaf = true;
  size_t branch = 0;
  std::vector<RegOut> outs;
  int lhs = 0;  // atom slot index
  Operand rhs;
  RegNodePtr yes, no;
};

inline RegNodePtr reg_leaf(size_t branch, std::vector<RegOut> outs) {
  auto n = std::make_shared<RegNode>();
  n->is_leaf = true;
  n->branch = branch;
  n->outs = std::move(outs);
  return n;
}

inline RegNodePtr reg_query(int lhs, Operand rhs, RegNodePtr yes, RegNodePtr no) {
  auto n = std::make_shared<RegNode>();
  n->is_leaf = false;
  n->lhs = lhs;
  n->rhs = rhs;
  n->yes = std::move(yes);
  n->no = std::move(no);
  return n;
}

struct RegTree {
  Desc dom, cod, gamma;
  std::vector<RegNodePtr> branches;
};

namespace detail {

struct SlotIndex {
  int atom_count = 0;
  int reg_count = 0;
  std::vector<int> slot_of_atom;  // atom index -> absolute slot
  std::vector<int> slot_of_reg;
};

inline SlotIndex index_slots(const NormalForm& nf, size_t branch) {
  SlotIndex s;
  for (size_t i = 0; i < nf.branches[branch].size(); ++i) {
    if (nf.branches[branch][i] == Slot::AtomSlot) {
      s.slot_of_atom.push_back(static_cast<int>(i));
      ++s.atom_count;
    } else {
      s.slot_of_reg.push_back(static_cast<int>(i));
      ++s.reg_count;
    }
  }
  return s;
}

inline bool validate_reg_branch(const RegNodePtr& t, const SlotIndex& in,
                                const NormalForm& cod_nf, const NormalForm& gamma_nf,
                                std::vector<bool> atom_used, std::vector<bool> reg_used,
                                std::string* diag) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  auto take_atom = [&](int v) {
    if (v < 0 || v >= in.atom_count || atom_used[static_cast<size_t>(v)]) return false;
    atom_used[static_cast<size_t>(v)] = true;
    return true;
  };
  if (!t) return fail("null node");
  if (!t->is_leaf) {
    if (!take_atom(t->lhs)) return fail("query lhs reused or out of range");
    if (t->rhs.is_var && !take_atom(t->rhs.var)) return fail("query rhs reused or out of range");
    return validate_reg_branch(t->yes, in, cod_nf, gamma_nf, atom_used, reg_used, diag) &&
           validate_reg_branch(t->no, in, cod_nf, gamma_nf, atom_used, reg_used, diag);
  }
  if (t->branch >= cod_nf.branch_count()) return fail("leaf branch out of range");
  const auto& slots = cod_nf.branches[t->branch];
  if (t->outs.size() != slots.size()) return fail("leaf arity mismatch");
  for (size_t i = 0; i < slots.size(); ++i) {
    const RegOut& o = t->outs[i];
    if ((slots[i] == Slot::RegSlot) != o.is_reg_slot) return fail("slot kind mismatch");
    if (!o.is_reg_slot) {
      if (o.atom.is_var && !take_atom(o.atom.var)) return fail("atom reused in leaf");
      continue;
    }
    for (const RegItem& it : o.items) {
      if (it.is_reg) {
        if (it.reg < 0 || it.reg >= in.reg_count) return fail("register index out of range");
        if (reg_used[static_cast<size_t>(it.reg)]) return fail("register reused (copyless violation)");
        reg_used[static_cast<size_t>(it.reg)] = true;
      } else {
        if (it.letter_branch >= gamma_nf.branch_count()) return fail("letter branch out of range");
        if (it.letter_outs.size() != static_cast<size_t>(gamma_nf.arity(it.letter_branch)))
          return fail("letter arity mismatch");
        for (const Operand& op : it.letter_outs)
          if (op.is_var && !take_atom(op.var)) return fail("atom reused in letter constructor");
      }
    }
  }
  return true;
}

}  // namespace detail

inline bool validate_reg_tree(const RegTree& t, std::string* diag = nullptr) {
  NormalForm dn = normal_form(t.dom), cn = normal_form(t.cod), gn = normal_form(t.gamma);
  if (t.branches.size() != dn.branch_count()) {
    if (diag) *diag = "branch count mismatch";
    return false;
  }
  for (size_t b = 0; b < t.branches.size(); ++b) {
    detail::SlotIndex idx = detail::index_slots(dn, b);
    std::vector<bool> atom_used(static_cast<size_t>(idx.atom_count), false);
    std::vector<bool> reg_used(static_cast<size_t>(idx.reg_count), false);
    if (!detail::validate_reg_branch(t.branches[b], idx, cn, gn, atom_used, reg_used, diag))
      return false;
  }
  return true;
}

inline Val eval_reg_tree(const RegTree& t, const Val& v) {
  Encoded e = encode(t.dom, v);
  NormalForm dn = normal_form(t.dom);
  detail::SlotIndex idx = detail::index_slots(dn, e.branch);
  auto atom_at = [&](int i) { return e.slots[static_cast<size_t>(idx.slot_of_atom[static_cast<size_t>(i)])]; };
  auto reg_at = [&](int i) { return e.slots[static_cast<size_t>(idx.slot_of_reg[static_cast<size_t>(i)])]; };
  const RegNode* node = t.branches[e.branch].get();
  while (!node->is_leaf) {
    Atom l = atom_at(node->lhs)->atom;
    Atom r = node->rhs.is_var ? atom_at(node->rhs.var)->atom : node->rhs.cnst;
    node = (l == r) ? node->yes.get() : node->no.get();
  }
  std::vector<Val> slots;
  for (const RegOut& o : node->outs) {
    if (!o.is_reg_slot) {
      slots.push_back(o.atom.is_var ? atom_at(o.atom.var) : vatom(o.atom.cnst));
      continue;
    }
    // concatenation tree keeps copyless updates O(1)
    Val word = vword({});
    for (const RegItem& it : o.items) {
      Val piece;
      if (it.is_reg) {
        piece = reg_at(it.reg);
      } else {
        std::vector<Val> louts;
        for (const Operand& op : it.letter_outs)
          louts.push_back(op.is_var ? atom_at(op.var) : vatom(op.cnst));
        piece = vword({decode(t.gamma, it.letter_branch, louts)});
      }
      word = vcat(word, piece);
    }
    slots.push_back(word);
  }
  return decode(t.cod, node->branch, slots);
}

// ---------------------------------------------------------------------------

struct SSTransducer {
  Desc sigma, gamma, q;
  Val q0;
  int k = 1;
  RegTree delta;  // Sigma^k x Q -o Q
  RegTree out;    // Q -o Reg
  AtomSet consts;
};

inline Desc sst_delta_dom(const SSTransducer& t) {
  Desc d = t.q;
  for (int i = 0; i < t.k; ++i) d = prod_desc(t.sigma, d);
  return d;
}

inline bool validate_sst(const SSTransducer& t, std::string* diag = nullptr) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  if (!check(t.q, t.q0)) return fail("initial state ill-typed");
  std::function<bool(const Val&)> regs_empty = [&](const Val& v) {
    if (v->tag == Value::Tag::Word || v->tag == Value::Tag::Cat)
      return flatten_word(v).empty();
    bool ok = true;
    if (v->a) ok &= regs_empty(v->a);
    if (v->b) ok &= regs_empty(v->b);
    return ok;
  };
  if (!regs_empty(t.q0)) return fail("initial registers must be empty");
  if (!(normal_form(t.delta.dom) == normal_form(sst_delta_dom(t))) ||
      !(normal_form(t.delta.cod) == normal_form(t.q)))
    return fail("delta type mismatch");
  if (!(normal_form(t.out.dom) == normal_form(t.q)) ||
      !(normal_form(t.out.cod) == normal_form(reg_desc())))
    return fail("output tree type mismatch");
  return validate_reg_tree(t.delta, diag) && validate_reg_tree(t.out, diag);
}

inline std::vector<Val> sst_run(const SSTransducer& t, std::span<const Val> word) {
  Val state = t.q0;
  for (const Val& letter : word) {
    if (!check(t.sigma, letter)) throw TypeError("sst_run: ill-typed letter");
    state = eval_reg_tree(t.delta, pack_letter_state(letter, t.k, state));
  }
  return flatten_word(eval_reg_tree(t.out, state));
}

/// Largest constructor length over all leaves, for the growth law.
inline size_t sst_max_constructor(const RegTree& t) {
  size_t best = 0;
  std::function<void(const RegNodePtr&)> walk = [&](const RegNodePtr& n) {
    if (!n->is_leaf) {
      walk(n->yes);
      walk(n->no);
      return;
    }
    for (const RegOut& o : n->outs)
      if (o.is_reg_slot) best = std::max(best, o.items.size());
  };
  for (const RegNodePtr& b : t.branches) walk(b);
  return best;
}

inline size_t sst_register_count(const SSTransducer& t) {
  NormalForm nf = normal_form(t.q);
  size_t best = 0;
  for (size_t b = 0; b < nf.branch_count(); ++b) {
    size_t regs = 0;
    for (Slot s : nf.branches[b]) regs += s == Slot::RegSlot;
    best = std::max(best, regs);
  }
  return best;
}

}  // namespace su
