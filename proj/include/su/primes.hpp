#pragma once

#include "su/transduce.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Prime function alphabets
// ---------------------------------------------------------------------------

/// bit alphabet {filled, hollow, eps} as 1 + 1 + 1, in this order
inline Desc bits_desc() { return sum_desc(unit_desc(), sum_desc(unit_desc(), unit_desc())); }
inline Val bit_filled() { return vinl(vunit()); }
inline Val bit_hollow() { return vinr(vinl(vunit())); }
inline Val bit_eps() { return vinr(vinr(vunit())); }

/// atom-propagation instruction alphabet A + down + eps
inline Desc prop_sigma_desc() {
  return sum_desc(atoms_desc(), sum_desc(unit_desc(), unit_desc()));
}
inline Val prop_store(int a) { return vinl(vatom(a)); }
inline Val prop_down() { return vinr(vinl(vunit())); }
inline Val prop_eps() { return vinr(vinr(vunit())); }

/// atom-propagation output alphabet A + eps
inline Desc prop_gamma_desc() { return sum_desc(atoms_desc(), unit_desc()); }
inline Val out_atom(int a) { return vinl(vatom(a)); }
inline Val out_eps() { return vinr(vunit()); }

/// Sigma extended with the block separator #.
inline Desc hashed_desc(const Desc& sigma) { return sum_desc(sigma, unit_desc()); }
inline Val hash_letter() { return vinr(vunit()); }

// ---------------------------------------------------------------------------
// Finite group tables
// ---------------------------------------------------------------------------

/// Validates a Cayley table as a group: associative, with an identity and
/// inverses. Returns the identity index.
inline size_t validate_group(const std::vector<std::vector<int>>& t) {
  size_t n = t.size();
  if (n == 0) throw SchemaError("group: empty table");
  for (auto& row : t) {
    if (row.size() != n) throw SchemaError("group: ragged table");
    for (int v : row)
      if (v < 0 || static_cast<size_t>(v) >= n) throw SchemaError("group: entry out of range");
  }
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c)
        if (t[static_cast<size_t>(t[a][b])][c] != t[a][static_cast<size_t>(t[b][c])])
          throw SchemaError("group: not associative");
  std::optional<size_t> id;
  for (size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (size_t a = 0; a < n; ++a) ok &= t[e][a] == static_cast<int>(a) && t[a][e] == static_cast<int>(a);
    if (ok) {
      id = e;
      break;
    }
  }
  if (!id) throw SchemaError("group: no identity");
  for (size_t a = 0; a < n; ++a) {
    bool has_inv = false;
    for (size_t b = 0; b < n; ++b) has_inv |= t[a][b] == static_cast<int>(*id);
    if (!has_inv) throw SchemaError("group: missing inverse");
  }
  return *id;
}

inline std::vector<std::vector<int>> z2_table() { return {{0, 1}, {1, 0}}; }

// ---------------------------------------------------------------------------
// Prime specifications
// ---------------------------------------------------------------------------

struct PrimeSpec {
  enum class Kind {
    Hom,          // letter-to-word homomorphism, bounded output length
    SUPropL,      // single-use atom propagation, left-to-right
    SUPropR,      //   ... right-to-left
    BitPropL,     // multiple-use bit propagation
    BitPropR,
    GroupPrefix,  // group prefix products
    GroupSuffix,
    MapDup,       // duplicate every #-separated block
    MapRev,       // reverse every #-separated block
    EndMarker,    // append -| to the word
    ParId,        // prime on the first coordinate, identity on the pad
  };
  Kind kind = Kind::BitPropL;
  // Hom: tree Sigma -o_k (Gamma+1)^m with the declared output bound m
  std::optional<MultiTree> hom;
  int hom_m = 1;
  Desc hom_sigma, hom_gamma;
  std::vector<std::vector<int>> cayley;  // group primes
  Desc sigma;                            // MapDup/MapRev/EndMarker payload
  std::shared_ptr<PrimeSpec> inner;      // ParId
  Desc pad;
};

inline PrimeSpec prime_hom(Desc sigma, Desc gamma, int m, MultiTree tree) {
  Desc expected = pow_desc(sum_desc(gamma, unit_desc()), m);
  if (!(normal_form(tree.dom0) == normal_form(sigma)) ||
      !(normal_form(tree.cod()) == normal_form(expected)))
    throw TypeError("hom: tree type mismatch");
  PrimeSpec p;
  p.kind = PrimeSpec::Kind::Hom;
  p.hom = std::move(tree);
  p.hom_m = m;
  p.hom_sigma = std::move(sigma);
  p.hom_gamma = std::move(gamma);
  return p;
}

/// Letter-to-letter homomorphism from a plain tree Sigma -o_k Gamma.
inline PrimeSpec prime_hom_letter(Desc sigma, Desc gamma, const MultiTree& tree) {
  Desc out = sum_desc(gamma, unit_desc());
  MultiTree wrapped = mt_compose(mt_from_su(basics::coproj1(gamma, unit_desc())), tree);
  return prime_hom(std::move(sigma), gamma, 1, wrapped);
}

inline PrimeSpec prime_simple(PrimeSpec::Kind k) {
  PrimeSpec p;
  p.kind = k;
  return p;
}

inline PrimeSpec prime_group(PrimeSpec::Kind k, std::vector<std::vector<int>> cayley) {
  validate_group(cayley);
  PrimeSpec p;
  p.kind = k;
  p.cayley = std::move(cayley);
  return p;
}

inline PrimeSpec prime_blockwise(PrimeSpec::Kind k, Desc sigma) {
  PrimeSpec p;
  p.kind = k;
  p.sigma = std::move(sigma);
  return p;
}

inline PrimeSpec prime_end_marker(Desc sigma) {
  PrimeSpec p;
  p.kind = PrimeSpec::Kind::EndMarker;
  p.sigma = std::move(sigma);
  return p;
}

inline PrimeSpec prime_par_id(PrimeSpec inner, Desc pad) {
  PrimeSpec p;
  p.kind = PrimeSpec::Kind::ParId;
  p.inner = std::make_shared<PrimeSpec>(std::move(inner));
  p.pad = std::move(pad);
  return p;
}

inline Desc prime_in_desc(const PrimeSpec& p) {
  switch (p.kind) {
    case PrimeSpec::Kind::Hom: return p.hom_sigma;
    case PrimeSpec::Kind::SUPropL:
    case PrimeSpec::Kind::SUPropR: return prop_sigma_desc();
    case PrimeSpec::Kind::BitPropL:
    case PrimeSpec::Kind::BitPropR: return bits_desc();
    case PrimeSpec::Kind::GroupPrefix:
    case PrimeSpec::Kind::GroupSuffix: return finite_desc(static_cast<int>(p.cayley.size()));
    case PrimeSpec::Kind::MapDup:
    case PrimeSpec::Kind::MapRev: return hashed_desc(p.sigma);
    case PrimeSpec::Kind::EndMarker: return p.sigma;
    case PrimeSpec::Kind::ParId: return prod_desc(prime_in_desc(*p.inner), p.pad);
  }
  throw InternalError("prime_in_desc");
}

inline Desc prime_out_desc(const PrimeSpec& p) {
  switch (p.kind) {
    case PrimeSpec::Kind::Hom: return p.hom_gamma;
    case PrimeSpec::Kind::SUPropL:
    case PrimeSpec::Kind::SUPropR: return prop_gamma_desc();
    case PrimeSpec::Kind::BitPropL:
    case PrimeSpec::Kind::BitPropR: return bits_desc();
    case PrimeSpec::Kind::GroupPrefix:
    case PrimeSpec::Kind::GroupSuffix: return finite_desc(static_cast<int>(p.cayley.size()));
    case PrimeSpec::Kind::MapDup:
    case PrimeSpec::Kind::MapRev: return hashed_desc(p.sigma);
    case PrimeSpec::Kind::EndMarker: return hashed_desc(p.sigma);
    case PrimeSpec::Kind::ParId: return prod_desc(prime_out_desc(*p.inner), p.pad);
  }
  throw InternalError("prime_out_desc");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Val> su_prop_eval(std::span<const Val> word) {
  std::vector<Val> out;
  out.reserve(word.size());
  std::optional<Val> reg;
  for (const Val& v : word) {
    if (v->tag == Value::Tag::InL) {  // store
      reg = v->a;
      out.push_back(out_eps());
    } else if (v->a->tag == Value::Tag::InL) {  // down
      out.push_back(reg ? vinl(*reg) : out_eps());
      reg.reset();
    } else {
      out.push_back(out_eps());
    }
  }
  return out;
}

inline std::vector<Val> bit_prop_eval(std::span<const Val> word) {
  std::vector<Val> out;
  out.reserve(word.size());
  Val reg = bit_eps();
  for (const Val& v : word) {
    out.push_back(reg);
    if (!value_eq(v, bit_eps())) reg = v;
  }
  return out;
}

inline std::vector<Val> group_prefix_eval(const std::vector<std::vector<int>>& t, size_t id,
                                          const Desc& carrier, std::span<const Val> word) {
  std::vector<Val> out;
  out.reserve(word.size());
  size_t acc = id;
  for (const Val& v : word) {
    acc = static_cast<size_t>(t[acc][encode(carrier, v).branch]);
    out.push_back(decode(carrier, acc, {}));
  }
  return out;
}

/// Splits at separators into n+1 possibly-empty segments.
inline std::vector<std::vector<Val>> split_blocks(std::span<const Val> word) {
  std::vector<std::vector<Val>> segs(1);
  for (const Val& v : word) {
    if (v->tag == Value::Tag::InR)
      segs.emplace_back();
    else
      segs.back().push_back(v);
  }
  return segs;
}

inline std::vector<Val> join_blocks(const std::vector<std::vector<Val>>& segs) {
  std::vector<Val> out;
  for (size_t i = 0; i < segs.size(); ++i) {
    if (i) out.push_back(hash_letter());
    out.insert(out.end(), segs[i].begin(), segs[i].end());
  }
  return out;
}

}  // namespace detail

inline std::vector<Val> eval_prime(const PrimeSpec& p, std::span<const Val> word) {
  Desc in = prime_in_desc(p);
  for (const Val& v : word)
    if (!check(in, v)) throw TypeError("eval_prime: ill-typed letter");
  auto reversed = [](std::vector<Val> w) {
    std::reverse(w.begin(), w.end());
    return w;
  };
  switch (p.kind) {
    case PrimeSpec::Kind::Hom: {
      std::vector<Val> out;
      for (const Val& v : word) {
        Val tuple = lift_multi(*p.hom, v);
        Val cur = tuple;
        for (int i = 0; i < p.hom_m; ++i) {
          Val slot = (i + 1 < p.hom_m) ? cur->a : cur;
          if (i + 1 < p.hom_m) cur = cur->b;
          if (slot->tag == Value::Tag::InL) out.push_back(slot->a);
        }
      }
      return out;
    }
    case PrimeSpec::Kind::SUPropL: return detail::su_prop_eval(word);
    case PrimeSpec::Kind::SUPropR: {
      std::vector<Val> w(word.begin(), word.end());
      return reversed(detail::su_prop_eval(reversed(std::move(w))));
    }
    case PrimeSpec::Kind::BitPropL: return detail::bit_prop_eval(word);
    case PrimeSpec::Kind::BitPropR: {
      std::vector<Val> w(word.begin(), word.end());
      return reversed(detail::bit_prop_eval(reversed(std::move(w))));
    }
    case PrimeSpec::Kind::GroupPrefix: {
      size_t id = validate_group(p.cayley);
      return detail::group_prefix_eval(p.cayley, id, prime_in_desc(p), word);
    }
    case PrimeSpec::Kind::GroupSuffix: {
      size_t id = validate_group(p.cayley);
      std::vector<Val> w(word.begin(), word.end());
      return reversed(detail::group_prefix_eval(p.cayley, id, prime_in_desc(p),
                                                reversed(std::move(w))));
    }
    case PrimeSpec::Kind::MapDup: {
      auto segs = detail::split_blocks(word);
      for (auto& s : segs) {
        size_t n = s.size();
        for (size_t i = 0; i < n; ++i) s.push_back(s[i]);
      }
      return detail::join_blocks(segs);
    }
    case PrimeSpec::Kind::MapRev: {
      auto segs = detail::split_blocks(word);
      for (auto& s : segs) std::reverse(s.begin(), s.end());
      return detail::join_blocks(segs);
    }
    case PrimeSpec::Kind::EndMarker: {
      std::vector<Val> out;
      out.reserve(word.size() + 1);
      for (const Val& v : word) out.push_back(vinl(v));
      out.push_back(hash_letter());
      return out;
    }
    case PrimeSpec::Kind::ParId: {
      std::vector<Val> firsts, pads;
      for (const Val& v : word) {
        firsts.push_back(v->a);
        pads.push_back(v->b);
      }
      std::vector<Val> mapped = eval_prime(*p.inner, firsts);
      if (mapped.size() != pads.size())
        throw TypeError("par-id: inner prime is not length-preserving");
      std::vector<Val> out;
      for (size_t i = 0; i < mapped.size(); ++i) out.push_back(vpair(mapped[i], pads[i]));
      return out;
    }
  }
  throw InternalError("eval_prime");
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

struct Pipeline {
  std::vector<PrimeSpec> stages;  // applied left to right
  Desc input_hint;                // used by the empty pipeline
};

inline void validate_pipeline(const Pipeline& pl) {
  for (size_t i = 0; i + 1 < pl.stages.size(); ++i)
    if (!(normal_form(prime_out_desc(pl.stages[i])) == normal_form(prime_in_desc(pl.stages[i + 1]))))
      throw TypeError("pipeline: stage " + std::to_string(i + 1) +
                      " does not accept the previous stage's output");
}

inline std::vector<Val> eval_pipeline(const Pipeline& pl, std::span<const Val> word) {
  validate_pipeline(pl);
  std::vector<Val> cur(word.begin(), word.end());
  for (size_t i = 0; i < pl.stages.size(); ++i) {
    try {
      cur = eval_prime(pl.stages[i], cur);
    } catch (const TypeError& e) {
      throw TypeError("pipeline stage " + std::to_string(i) + ": " + e.what());
    }
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Prime Mealy machines and the pipeline -> Mealy compilation
// ---------------------------------------------------------------------------

/// Multiple-use bit propagation as a three-state Mealy machine.
inline MealyMachine bit_prop_mealy() {
  MealyMachine m;
  m.sigma = bits_desc();
  m.gamma = bits_desc();
  m.q = bits_desc();
  m.q0 = bit_eps();
  m.k = 1;
  Desc dom = mealy_delta_dom(m);
  m.delta = tree_from_map(dom, prod_desc(m.q, m.gamma), [](const Val& v) {
    const Val &inst = v->a, &q = v->b;
    bool is_eps = value_eq(inst, bit_eps());
    return vpair(is_eps ? q : inst, q);
  });
  validate_mealy(m);
  return m;
}

/// Single-use atom propagation as a Mealy machine with states A + empty.
inline MealyMachine su_prop_mealy() {
  MealyMachine m;
  m.sigma = prop_sigma_desc();
  m.gamma = prop_gamma_desc();
  m.q = sum_desc(atoms_desc(), unit_desc());
  m.q0 = vinr(vunit());
  m.k = 1;
  Desc dom = mealy_delta_dom(m);
  m.delta = tree_from_map(dom, prod_desc(m.q, m.gamma), [](const Val& v) {
    const Val &inst = v->a, &q = v->b;
    if (inst->tag == Value::Tag::InL) return vpair(vinl(inst->a), out_eps());
    bool is_down = inst->a->tag == Value::Tag::InL;
    if (is_down) {
      if (q->tag == Value::Tag::InL) return vpair(vinr(vunit()), vinl(q->a));
      return vpair(vinr(vunit()), out_eps());
    }
    return vpair(q, out_eps());
  });
  validate_mealy(m);
  return m;
}

/// M-prefix machine for a finite monoid given by its Cayley table and the
/// index of its identity element.
inline MealyMachine monoid_prefix_mealy(const std::vector<std::vector<int>>& table,
                                        size_t identity_index = 0) {
  size_t n = table.size();
  MealyMachine m;
  m.sigma = finite_desc(static_cast<int>(n));
  m.gamma = m.sigma;
  m.q = m.sigma;
  m.q0 = decode(m.q, identity_index, {});
  m.k = 1;
  Desc dom = mealy_delta_dom(m);
  Desc carrier = m.q;
  m.delta = tree_from_map(dom, prod_desc(m.q, m.gamma), [&, carrier](const Val& v) {
    size_t g = encode(carrier, v->a).branch;
    size_t q = encode(carrier, v->b).branch;
    Val out = decode(carrier, static_cast<size_t>(table[q][g]), {});
    return vpair(out, out);
  });
  validate_mealy(m);
  return m;
}

/// One-state machine copying its input.
inline MealyMachine identity_mealy(const Desc& sigma) {
  MealyMachine m;
  m.sigma = sigma;
  m.gamma = sigma;
  m.q = unit_desc();
  m.q0 = vunit();
  m.k = 1;
  m.delta = tree_from_map(mealy_delta_dom(m), prod_desc(m.q, m.gamma),
                          [](const Val& v) { return vpair(vunit(), v->a); });
  validate_mealy(m);
  return m;
}

/// Mealy machine of a letter-to-letter homomorphism. The hom tree must avoid
/// the epsilon constructor syntactically.
inline MealyMachine hom_mealy(const PrimeSpec& p) {
  if (p.kind != PrimeSpec::Kind::Hom || p.hom_m != 1)
    throw TypeError("hom_mealy: not a letter-to-letter homomorphism");
  const MultiTree& hom = *p.hom;
  size_t gamma_branches = normal_form(p.hom_gamma).branch_count();
  for (const TT& b : hom.tree.branches) {
    std::function<void(const TT&)> walk = [&](const TT& n) {
      if (n->is_leaf) {
        if (n->branch >= gamma_branches)
          throw TypeError("hom_mealy: homomorphism can emit epsilon, not length-preserving");
        return;
      }
      walk(n->yes);
      walk(n->no);
    };
    walk(b);
  }
  MealyMachine m;
  m.sigma = p.hom_sigma;
  m.gamma = p.hom_gamma;
  m.q = unit_desc();
  m.q0 = vunit();
  m.k = hom.k;
  m.consts = tree_constants(hom.tree);
  // Sigma^k x 1 -> Sigma^k -> Gamma -> 1 x Gamma
  Desc dom = mealy_delta_dom(m);
  SUTree drop = tree_from_map(dom, hom.tree.dom, [&](const Val& v) {
    std::vector<Val> letters;
    Val cur = v;
    for (int i = 0; i < m.k; ++i) {
      letters.push_back(cur->a);
      cur = cur->b;
    }
    Val packed = letters.back();
    for (size_t i = letters.size() - 1; i-- > 0;) packed = vpair(letters[i], packed);
    return packed;
  });
  SUTree narrowed = hom.tree;
  narrowed.cod = p.hom_gamma;  // leaves checked above to stay within Gamma
  m.delta = compose(basics::left_i(p.hom_gamma), compose(narrowed, drop));
  validate_mealy(m);
  return m;
}

/// Compiles a pipeline of length-preserving left-to-right primes into one
/// Mealy machine.
inline MealyMachine compile_lp_prime(const PrimeSpec& p) {
  switch (p.kind) {
    case PrimeSpec::Kind::Hom: return hom_mealy(p);
    case PrimeSpec::Kind::SUPropL: return su_prop_mealy();
    case PrimeSpec::Kind::BitPropL: return bit_prop_mealy();
    case PrimeSpec::Kind::GroupPrefix: {
      size_t id = validate_group(p.cayley);
      return monoid_prefix_mealy(p.cayley, id);
    }
    case PrimeSpec::Kind::ParId:
      return mealy_par(compile_lp_prime(*p.inner), identity_mealy(p.pad));
    default:
      throw TypeError("compile_lp_pipeline: stage is not a length-preserving left-to-right prime");
  }
}

inline MealyMachine compile_lp_pipeline(const Pipeline& pl) {
  validate_pipeline(pl);
  if (pl.stages.empty()) {
    if (!pl.input_hint) throw TypeError("compile_lp_pipeline: empty pipeline needs an alphabet");
    return identity_mealy(pl.input_hint);
  }
  MealyMachine m = compile_lp_prime(pl.stages[0]);
  for (size_t i = 1; i < pl.stages.size(); ++i)
    m = mealy_seq(compile_lp_prime(pl.stages[i]), m);
  return m;
}

}  // namespace su
