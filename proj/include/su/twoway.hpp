#pragma once

#include "su/automaton.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Two-way single-use machines. The transition tree reads k copies of the
// current letter (or end marker) and one copy of the state:
//
//   acceptor:    (Sigma+|-+-|)^k x Q  -o  (Q x Dir) + (Yes + No)
//   transducer:  (Sigma+|-+-|)^k x Q  -o  (Q x (Out x Dir)) + finish
//
// Dir: InL = left, InR = right. Out = Gamma + epsilon (InR = epsilon).
// Machines are normalized when they finish on a marker and never output on
// markers; run shapes are only defined for normalized transducers.
// ---------------------------------------------------------------------------

struct TwoWayMachine {
  bool transducer = false;
  Desc sigma;
  Desc gamma;  // transducers only
  Desc q;
  Val q0;
  int k = 1;
  SUTree delta;
  AtomSet consts;
};

inline Desc marked_alphabet(const Desc& sigma) {
  return sum_desc(sigma, sum_desc(unit_desc(), unit_desc()));
}
inline Val mark_letter(const Val& a) { return vinl(a); }
inline Val left_marker() { return vinr(vinl(vunit())); }
inline Val right_marker() { return vinr(vinr(vunit())); }

inline Desc dir_desc() { return sum_desc(unit_desc(), unit_desc()); }
inline Val dir_left() { return vinl(vunit()); }
inline Val dir_right() { return vinr(vunit()); }

inline Desc out_desc(const Desc& gamma) { return sum_desc(gamma, unit_desc()); }
inline Val out_letter(const Val& g) { return vinl(g); }
inline Val out_epsilon() { return vinr(vunit()); }

inline Desc twoway_delta_dom(const TwoWayMachine& m) {
  Desc d = m.q;
  for (int i = 0; i < m.k; ++i) d = prod_desc(marked_alphabet(m.sigma), d);
  return d;
}

inline Desc twoway_delta_cod(const TwoWayMachine& m) {
  if (m.transducer)
    return sum_desc(prod_desc(m.q, prod_desc(out_desc(m.gamma), dir_desc())), unit_desc());
  return sum_desc(prod_desc(m.q, dir_desc()), sum_desc(unit_desc(), unit_desc()));
}

inline void validate_twoway(const TwoWayMachine& m) {
  if (!check(m.q, m.q0)) throw TypeError("two-way: initial state ill-typed");
  for (Atom a : support(m.q0))
    if (!m.consts.contains(a)) throw TypeError("two-way: q0 atom outside consts");
  if (!(normal_form(m.delta.dom) == normal_form(twoway_delta_dom(m))) ||
      !(normal_form(m.delta.cod) == normal_form(twoway_delta_cod(m))))
    throw TypeError("two-way: delta type mismatch");
  std::string diag;
  if (!validate_single_use(m.delta, &diag)) throw TypeError("two-way: delta not single-use: " + diag);
  for (Atom a : tree_constants(m.delta))
    if (!m.consts.contains(a)) throw TypeError("two-way: tree constant outside consts");
}

/// Decoded transition result.
struct TwoWayStep {
  enum class Kind { Move, Finish, Yes, No } kind;
  Val state;       // Move
  Val out;         // Move on transducers; null or epsilon otherwise
  bool move_right = false;
};

inline TwoWayStep twoway_step(const TwoWayMachine& m, const Val& state, const Val& marked_letter) {
  Val r = eval(m.delta, pack_letter_state(marked_letter, m.k, state));
  TwoWayStep s{};
  if (m.transducer) {
    if (r->tag == Value::Tag::InR) {
      s.kind = TwoWayStep::Kind::Finish;
      return s;
    }
    s.kind = TwoWayStep::Kind::Move;
    s.state = r->a->a;
    s.out = r->a->b->a;
    s.move_right = r->a->b->b->tag == Value::Tag::InR;
    return s;
  }
  if (r->tag == Value::Tag::InR) {
    s.kind = r->a->tag == Value::Tag::InL ? TwoWayStep::Kind::Yes : TwoWayStep::Kind::No;
    return s;
  }
  s.kind = TwoWayStep::Kind::Move;
  s.state = r->a->a;
  s.move_right = r->a->b->tag == Value::Tag::InR;
  return s;
}

/// Sound step budget: (|w|+2) positions times the number of states supported
/// by the atoms in play; exceeding it means the run loops.
inline long long step_cap(const TwoWayMachine& m, std::span<const Val> word) {
  AtomSet atoms = set_union(m.consts, support_word(word));
  return static_cast<long long>(word.size() + 2) * count_supported(m.q, atoms);
}

namespace detail {

inline Val letter_at(const TwoWayMachine& m, std::span<const Val> word, long long pos) {
  if (pos == 0) return left_marker();
  if (pos == static_cast<long long>(word.size()) + 1) return right_marker();
  Val l = word[static_cast<size_t>(pos - 1)];
  if (!check(m.sigma, l)) throw TypeError("two-way: ill-typed letter");
  return mark_letter(l);
}

}  // namespace detail

struct TransducerRun {
  bool looped = false;
  std::vector<Val> output;
};

inline TransducerRun run_transducer(const TwoWayMachine& m, std::span<const Val> word) {
  if (!m.transducer) throw TypeError("run_transducer: machine is an acceptor");
  TransducerRun res;
  Val state = m.q0;
  long long pos = 1, steps = 0, cap = step_cap(m, word);
  while (true) {
    if (++steps > cap || pos < 0) {
      res.looped = true;
      res.output.clear();
      return res;
    }
    TwoWayStep s = twoway_step(m, state, detail::letter_at(m, word, pos));
    if (s.kind == TwoWayStep::Kind::Finish) return res;
    if (s.out->tag == Value::Tag::InL) res.output.push_back(s.out->a);
    state = s.state;
    pos += s.move_right ? 1 : -1;
    if (pos > static_cast<long long>(word.size()) + 1) {
      res.looped = true;  // walked past the right marker
      res.output.clear();
      return res;
    }
  }
}

inline bool run_acceptor(const TwoWayMachine& m, std::span<const Val> word) {
  if (m.transducer) throw TypeError("run_acceptor: machine is a transducer");
  Val state = m.q0;
  long long pos = 1, steps = 0, cap = step_cap(m, word);
  while (true) {
    if (++steps > cap || pos < 0 || pos > static_cast<long long>(word.size()) + 1) return false;
    TwoWayStep s = twoway_step(m, state, detail::letter_at(m, word, pos));
    if (s.kind == TwoWayStep::Kind::Yes) return true;
    if (s.kind == TwoWayStep::Kind::No) return false;
    if (s.kind == TwoWayStep::Kind::Finish) return false;
    state = s.state;
    pos += s.move_right ? 1 : -1;
  }
}

// ---------------------------------------------------------------------------
// Behaviour tables
// ---------------------------------------------------------------------------

/// Outcome of entering a word segment in a given state from a given side.
struct SegOutcome {
  enum class Kind { ExitLeft, ExitRight, Yes, No } kind;
  Val state;  // exits only
};

/// b_w for an acceptor: canonical (entry state, side) -> outcome, closed
/// under frozen-permutations via canonicalization on lookup. The segment is
/// a word over the marked alphabet so that framed words |- w -| can be
/// tabulated with the same machinery.
struct BehaviourTable {
  Desc q;
  AtomSet frozen;
  std::vector<std::tuple<Val, bool, SegOutcome>> entries;  // (state, from_left, outcome)

  const SegOutcome* find_canonical(const Val& state, bool from_left) const {
    for (auto& [s, fl, o] : entries)
      if (fl == from_left && value_eq(s, state)) return &o;
    return nullptr;
  }

  /// Lookup for arbitrary entry states: canonicalize, consult the table, and
  /// rename the outcome back.
  SegOutcome lookup(const Val& state, bool from_left) const {
    auto [c, p] = canon_with_perm(q, state, frozen);
    const SegOutcome* o = find_canonical(c, from_left);
    if (!o) throw InternalError("behaviour table: missing entry");
    SegOutcome r = *o;
    if (r.state) r.state = act(p.inverse(), r.state);
    return r;
  }
};

/// Simulates the acceptor inside the segment only (no implicit markers).
inline SegOutcome simulate_segment(const TwoWayMachine& m, std::span<const Val> marked,
                                   const Val& entry, bool from_left, long long cap) {
  long long n = static_cast<long long>(marked.size());
  if (n == 0)
    return SegOutcome{from_left ? SegOutcome::Kind::ExitRight : SegOutcome::Kind::ExitLeft, entry};
  Val state = entry;
  long long pos = from_left ? 0 : n - 1, steps = 0;
  while (true) {
    if (++steps > cap) return SegOutcome{SegOutcome::Kind::No, nullptr};
    TwoWayStep s = twoway_step(m, state, marked[static_cast<size_t>(pos)]);
    if (s.kind == TwoWayStep::Kind::Yes) return SegOutcome{SegOutcome::Kind::Yes, nullptr};
    if (s.kind == TwoWayStep::Kind::No || s.kind == TwoWayStep::Kind::Finish)
      return SegOutcome{SegOutcome::Kind::No, nullptr};
    state = s.state;
    pos += s.move_right ? 1 : -1;
    if (pos < 0) return SegOutcome{SegOutcome::Kind::ExitLeft, state};
    if (pos >= n) return SegOutcome{SegOutcome::Kind::ExitRight, state};
  }
}

inline std::vector<Val> mark_word(std::span<const Val> word) {
  std::vector<Val> m;
  m.reserve(word.size());
  for (const Val& l : word) m.push_back(mark_letter(l));
  return m;
}

inline std::vector<Val> frame_word(std::span<const Val> word) {
  std::vector<Val> m;
  m.reserve(word.size() + 2);
  m.push_back(left_marker());
  for (const Val& l : word) m.push_back(mark_letter(l));
  m.push_back(right_marker());
  return m;
}

inline BehaviourTable behaviour2(const TwoWayMachine& m, std::span<const Val> marked) {
  if (m.transducer) throw TypeError("behaviour2: transducers have no acceptance table");
  BehaviourTable t;
  t.q = m.q;
  t.frozen = m.consts;
  for (const Val& l : marked) t.frozen.insert_all(support(l));
  long long cap = static_cast<long long>(marked.size() + 2) * count_supported(m.q, t.frozen) + 4;
  for (const Val& rep : enumerate_orbit_reps(m.q, t.frozen))
    for (bool from_left : {true, false})
      t.entries.emplace_back(rep, from_left, simulate_segment(m, marked, rep, from_left, cap));
  return t;
}

/// Composes two adjacent behaviour tables by bouncing between them, capping
/// the number of boundary crossings; exceeding the cap counts as a loop and
/// yields No.
inline BehaviourTable compose_behaviours(const BehaviourTable& bu, const BehaviourTable& bv) {
  if (!(normal_form(bu.q) == normal_form(bv.q)))
    throw TypeError("compose_behaviours: state descriptor mismatch");
  BehaviourTable t;
  t.q = bu.q;
  t.frozen = set_union(bu.frozen, bv.frozen);
  long long cross_cap = 2 * count_supported(bu.q, t.frozen) + 1;
  for (const Val& rep : enumerate_orbit_reps(bu.q, t.frozen)) {
    for (bool from_left : {true, false}) {
      bool in_u = from_left;
      Val state = rep;
      bool entering_left = from_left;
      long long crossings = 0;
      SegOutcome result{};
      while (true) {
        SegOutcome o = in_u ? bu.lookup(state, entering_left) : bv.lookup(state, entering_left);
        if (o.kind == SegOutcome::Kind::Yes || o.kind == SegOutcome::Kind::No) {
          result = o;
          break;
        }
        if (in_u && o.kind == SegOutcome::Kind::ExitLeft) {
          result = o;
          break;
        }
        if (!in_u && o.kind == SegOutcome::Kind::ExitRight) {
          result = o;
          break;
        }
        if (++crossings > cross_cap) {
          result = SegOutcome{SegOutcome::Kind::No, nullptr};
          break;
        }
        state = o.state;
        in_u = !in_u;
        entering_left = in_u ? false : true;  // entering u from its right / v from its left
      }
      t.entries.emplace_back(rep, from_left, result);
    }
  }
  return t;
}

inline bool tables_agree(const BehaviourTable& a, const BehaviourTable& b) {
  if (!(a.frozen == b.frozen) || a.entries.size() != b.entries.size()) return false;
  for (auto& [s, fl, o] : a.entries) {
    const SegOutcome* p = b.find_canonical(s, fl);
    if (!p || p->kind != o.kind) return false;
    if (o.state && (!p->state || !value_eq(o.state, p->state))) return false;
  }
  return true;
}

/// Acceptance read off the framed behaviour table.
inline bool accepts_via_table(const TwoWayMachine& m, std::span<const Val> word) {
  std::vector<Val> framed = frame_word(word);
  BehaviourTable t = behaviour2(m, framed);
  SegOutcome o = t.lookup(m.q0, true);
  return o.kind == SegOutcome::Kind::Yes;
}

// ---------------------------------------------------------------------------
// Run shapes and untangling
// ---------------------------------------------------------------------------

struct Visit {
  bool entered_right;  // direction of travel on entry (true = moving right)
  bool left_right;     // direction of travel on exit
  Val out;             // output letter, or null for epsilon
};

struct RunShape {
  size_t len = 0;  // number of word positions
  long long bound = 0;
  std::vector<std::vector<Visit>> visits;  // per position, chronological
};

/// Records every visit of a normalized transducer at the word's positions.
/// Throws on machines that output at markers or finish mid-word; returns
/// nullopt for looping runs.
inline std::optional<RunShape> run_shape(const TwoWayMachine& m, std::span<const Val> word) {
  if (!m.transducer) throw TypeError("run_shape: acceptors have no output shape");
  RunShape shape;
  shape.len = word.size();
  AtomSet atoms = set_union(m.consts, support_word(word));
  shape.bound = 2 * count_supported(m.q, atoms);
  shape.visits.assign(word.size(), {});
  Val state = m.q0;
  long long pos = 1, steps = 0, cap = step_cap(m, word);
  bool moving_right = true;  // the run enters position 1 from the left
  while (true) {
    if (++steps > cap || pos < 0 || pos > static_cast<long long>(word.size()) + 1)
      return std::nullopt;
    bool at_marker = pos == 0 || pos == static_cast<long long>(word.size()) + 1;
    TwoWayStep s = twoway_step(m, state, detail::letter_at(m, word, pos));
    if (s.kind == TwoWayStep::Kind::Finish) {
      if (!at_marker) throw TypeError("run_shape: machine finishes mid-word (not normalized)");
      return shape;
    }
    bool emits = s.out->tag == Value::Tag::InL;
    if (at_marker && emits) throw TypeError("run_shape: output at a marker (not normalized)");
    if (!at_marker) {
      Visit v{moving_right, s.move_right, emits ? s.out->a : Val{}};
      shape.visits[static_cast<size_t>(pos - 1)].push_back(v);
    }
    state = s.state;
    moving_right = s.move_right;
    pos += s.move_right ? 1 : -1;
  }
}

/// Reconstructs the output word from a run shape by retracing the visit path:
/// exits continue at the earliest unconsumed visit of the adjacent position
/// entering in the travel direction, bouncing at both ends of the word.
inline std::vector<Val> untangle(const RunShape& shape) {
  std::vector<Val> out;
  if (shape.len == 0) return out;
  std::vector<std::vector<bool>> used(shape.visits.size());
  for (size_t i = 0; i < shape.visits.size(); ++i)
    used[i].assign(shape.visits[i].size(), false);
  size_t total = 0, consumed = 0;
  for (const auto& vs : shape.visits) total += vs.size();

  auto next_at = [&](size_t pos, bool entering_right) -> std::optional<size_t> {
    for (size_t i = 0; i < shape.visits[pos].size(); ++i)
      if (!used[pos][i] && shape.visits[pos][i].entered_right == entering_right) return i;
    return std::nullopt;
  };

  size_t pos = 0;
  auto cur = next_at(0, true);
  if (!cur) throw TypeError("untangle: no initial visit entering position 1 from the left");
  while (true) {
    const Visit& v = shape.visits[pos][*cur];
    used[pos][*cur] = true;
    ++consumed;
    if (v.out) out.push_back(v.out);
    if (v.left_right) {
      if (pos + 1 < shape.len) {
        ++pos;
        cur = next_at(pos, true);
        if (!cur) throw TypeError("untangle: missing continuation to the right");
      } else {
        cur = next_at(pos, false);  // bounce at the right marker
        if (!cur) break;            // the run finished at the right end
      }
    } else {
      if (pos > 0) {
        --pos;
        cur = next_at(pos, false);
        if (!cur) throw TypeError("untangle: missing continuation to the left");
      } else {
        cur = next_at(pos, true);  // bounce at the left marker
        if (!cur) break;           // the run finished at the left end
      }
    }
  }
  if (consumed != total) throw TypeError("untangle: unconsumed visits remain");
  return out;
}

// ---------------------------------------------------------------------------
// One-way embedding
// ---------------------------------------------------------------------------

/// Embeds a one-way automaton as a two-way acceptor doing a single
/// left-to-right sweep and deciding at the right marker.
inline TwoWayMachine embed_oneway(const SUAutomaton& a) {
  TwoWayMachine m;
  m.transducer = false;
  m.sigma = a.sigma;
  m.q = a.q;
  m.q0 = a.q0;
  m.k = a.k;
  m.consts = a.consts;

  Desc dom = twoway_delta_dom(m);
  Desc cod = twoway_delta_cod(m);
  Desc dom1 = automaton_delta_dom(a.sigma, a.q, a.k);
  // classify: all-letter tuples go left, marker tuples keep only the state
  Desc split = sum_desc(dom1, sum_desc(a.q, a.q));
  int k = m.k;
  SUTree classify = tree_from_map(dom, split, [&](const Val& v) {
    std::vector<Val> letters;
    Val cur = v;
    for (int i = 0; i < k; ++i) {
      letters.push_back(cur->a);
      cur = cur->b;
    }
    for (const Val& l : letters)
      if (l->tag == Value::Tag::InR)
        return l->a->tag == Value::Tag::InL ? vinr(vinl(cur)) : vinr(vinr(cur));
    Val packed = cur;
    for (int i = k; i-- > 0;) packed = vpair(letters[static_cast<size_t>(i)]->a, packed);
    return vinl(packed);
  });
  SUTree move_right = tree_from_map(a.q, cod, [](const Val& qv) {
    return vinl(vpair(qv, dir_right()));
  });
  SUTree on_letter = compose(move_right, a.delta);
  Desc yn = sum_desc(unit_desc(), unit_desc());
  SUTree decide = compose(tree_from_map(yn, cod, [](const Val& r) {
                            return r->tag == Value::Tag::InL ? vinr(vinl(vunit()))
                                                             : vinr(vinr(vunit()));
                          }),
                          a.accept);
  SUTree cases = sum_trees(on_letter, sum_trees(move_right, decide));
  Desc c3 = sum_desc(cod, sum_desc(cod, cod));
  SUTree merge_all =
      compose(basics::merge(cod), sum_trees(basics::id(cod), basics::merge(cod)));
  merge_all = rewrap(merge_all, c3, cod);
  m.delta = compose(compose(merge_all, cases), classify);
  validate_twoway(m);
  return m;
}

}  // namespace su
