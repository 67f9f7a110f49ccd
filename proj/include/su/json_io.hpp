#pragma once

#include <json.hpp>

#include "su/automaton.hpp"
#include "su/listfn.hpp"
#include "su/primes.hpp"
#include "su/semigroup.hpp"
#include "su/sst.hpp"
#include "su/transduce.hpp"
#include "su/twoway.hpp"

namespace su {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Descriptors, values, atoms
// ---------------------------------------------------------------------------
// SetDesc: {"unit"} | {"atoms"} | {"reg"} | {"sum":[d,d]} | {"prod":[d,d]}
//   (single-key objects; shorthand strings "unit"/"atoms"/"reg" also parse)
// Value: {"u":0} | {"a":n} | {"l":v} | {"r":v} | {"p":[v,v]} | {"w":[v...]}
// Atom sets: sorted integer arrays. Permutations: arrays of [from,to] pairs.

inline json desc_to_json(const Desc& d) {
  switch (d->tag) {
    case SetDesc::Tag::Unit: return json{{"unit", 0}};
    case SetDesc::Tag::Atoms: return json{{"atoms", 0}};
    case SetDesc::Tag::Reg: return json{{"reg", 0}};
    case SetDesc::Tag::Sum: return json{{"sum", json::array({desc_to_json(d->left), desc_to_json(d->right)})}};
    case SetDesc::Tag::Prod:
      return json{{"prod", json::array({desc_to_json(d->left), desc_to_json(d->right)})}};
  }
  throw InternalError("desc_to_json");
}

inline Desc desc_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "unit") return unit_desc();
    if (s == "atoms") return atoms_desc();
    if (s == "reg") return reg_desc();
    throw SchemaError("descriptor: unknown name " + s);
  }
  if (!j.is_object() || j.size() != 1) throw SchemaError("descriptor: expected single-key object");
  if (j.contains("unit")) return unit_desc();
  if (j.contains("atoms")) return atoms_desc();
  if (j.contains("reg")) return reg_desc();
  if (j.contains("sum"))
    return sum_desc(desc_from_json(j["sum"][0]), desc_from_json(j["sum"][1]));
  if (j.contains("prod"))
    return prod_desc(desc_from_json(j["prod"][0]), desc_from_json(j["prod"][1]));
  throw SchemaError("descriptor: unknown constructor");
}

inline json value_to_json(const Val& v) {
  switch (v->tag) {
    case Value::Tag::Unit: return json{{"u", 0}};
    case Value::Tag::Atom: return json{{"a", v->atom.id}};
    case Value::Tag::InL: return json{{"l", value_to_json(v->a)}};
    case Value::Tag::InR: return json{{"r", value_to_json(v->a)}};
    case Value::Tag::Pair:
      return json{{"p", json::array({value_to_json(v->a), value_to_json(v->b)})}};
    default: {
      json items = json::array();
      for (const Val& it : flatten_word(v)) items.push_back(value_to_json(it));
      return json{{"w", items}};
    }
  }
}

inline Val value_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw SchemaError("value: expected single-key object");
  if (j.contains("u")) return vunit();
  if (j.contains("a")) {
    int id = j["a"].get<int>();
    if (id < 0) throw SchemaError("value: negative atom id");
    return vatom(id);
  }
  if (j.contains("l")) return vinl(value_from_json(j["l"]));
  if (j.contains("r")) return vinr(value_from_json(j["r"]));
  if (j.contains("p")) return vpair(value_from_json(j["p"][0]), value_from_json(j["p"][1]));
  if (j.contains("w")) {
    std::vector<Val> items;
    for (const json& it : j["w"]) items.push_back(value_from_json(it));
    return vword(std::move(items));
  }
  throw SchemaError("value: unknown constructor");
}

inline json word_to_json(std::span<const Val> w) {
  json out = json::array();
  for (const Val& v : w) out.push_back(value_to_json(v));
  return out;
}

inline std::vector<Val> word_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("word: expected an array");
  std::vector<Val> w;
  for (const json& it : j) w.push_back(value_from_json(it));
  return w;
}

inline json atomset_to_json(const AtomSet& s) {
  json out = json::array();
  for (Atom a : s) out.push_back(a.id);
  return out;
}

inline AtomSet atomset_from_json(const json& j) {
  AtomSet s;
  for (const json& it : j) s.insert(Atom{it.get<int>()});
  return s;
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------
// operand: {"v":i} | {"c":a}
// node: {"q":{"l":i,"r":op,"y":node,"n":node}} | {"leaf":{"b":j,"o":[op...]}}
// SUTree: {"dom":d,"cod":d,"branches":[node...]}
// MultiTree: {"k":k,"dom":d,"cod":d,"tree":[node...]}

inline json operand_to_json(const Operand& o) {
  return o.is_var ? json{{"v", o.var}} : json{{"c", o.cnst.id}};
}

inline Operand operand_from_json(const json& j) {
  if (j.contains("v")) return ovar(j["v"].get<int>());
  if (j.contains("c")) return oconst(j["c"].get<int>());
  throw SchemaError("operand: expected v or c");
}

inline json tt_to_json(const TT& t) {
  if (t->is_leaf) {
    json outs = json::array();
    for (const Operand& o : t->outs) outs.push_back(operand_to_json(o));
    return json{{"leaf", {{"b", t->branch}, {"o", outs}}}};
  }
  return json{{"q", {{"l", t->lhs}, {"r", operand_to_json(t->rhs)}, {"y", tt_to_json(t->yes)},
               {"n", tt_to_json(t->no)}}}};
}

inline TT tt_from_json(const json& j) {
  if (j.contains("leaf")) {
    const json& l = j["leaf"];
    std::vector<Operand> outs;
    for (const json& o : l["o"]) outs.push_back(operand_from_json(o));
    return make_leaf(l["b"].get<size_t>(), std::move(outs));
  }
  if (j.contains("q")) {
    const json& q = j["q"];
    return make_query(ovar(q["l"].get<int>()), operand_from_json(q["r"]), tt_from_json(q["y"]),
                      tt_from_json(q["n"]));
  }
  throw SchemaError("tree node: expected q or leaf");
}

inline json sutree_to_json(const SUTree& t) {
  json branches = json::array();
  for (const TT& b : t.branches) branches.push_back(tt_to_json(b));
  return json{{"dom", desc_to_json(t.dom)}, {"cod", desc_to_json(t.cod)}, {"branches", branches}};
}

inline SUTree sutree_from_json(const json& j) {
  SUTree t{desc_from_json(j.at("dom")), desc_from_json(j.at("cod")), {}};
  for (const json& b : j.at("branches")) t.branches.push_back(tt_from_json(b));
  std::string diag;
  if (!validate_single_use(t, &diag)) throw SchemaError("tree is not single-use: " + diag);
  return t;
}

inline json mt_to_json(const MultiTree& m) {
  json branches = json::array();
  for (const TT& b : m.tree.branches) branches.push_back(tt_to_json(b));
  return json{{"k", m.k},
              {"dom", desc_to_json(m.dom0)},
              {"cod", desc_to_json(m.cod())},
              {"tree", branches}};
}

inline MultiTree mt_from_json(const json& j) {
  int k = j.at("k").get<int>();
  Desc dom0 = desc_from_json(j.at("dom"));
  Desc cod = desc_from_json(j.at("cod"));
  SUTree t{pow_desc(dom0, k), cod, {}};
  for (const json& b : j.at("tree")) t.branches.push_back(tt_from_json(b));
  std::string diag;
  if (!validate_single_use(t, &diag)) throw SchemaError("multi tree is not single-use: " + diag);
  return mt_make(k, dom0, std::move(t));
}

// ---------------------------------------------------------------------------
// Machines
// ---------------------------------------------------------------------------

inline json automaton_to_json(const SUAutomaton& a) {
  return json{{"type", "su-automaton"}, {"version", 1},
              {"sigma", desc_to_json(a.sigma)}, {"q", desc_to_json(a.q)},
              {"k", a.k},           {"q0", value_to_json(a.q0)},
              {"delta", sutree_to_json(a.delta)}, {"accept", sutree_to_json(a.accept)},
              {"consts", atomset_to_json(a.consts)}};
}

inline SUAutomaton automaton_from_json(const json& j) {
  Desc sigma = desc_from_json(j.at("sigma"));
  Desc q = desc_from_json(j.at("q"));
  int k = j.at("k").get<int>();
  Val q0 = value_from_json(j.at("q0"));
  SUTree delta = sutree_from_json(j.at("delta"));
  AtomSet consts;
  if (j.contains("consts")) consts = atomset_from_json(j["consts"]);
  // a k-fold-use acceptance function is admitted and compiled away by
  // raising the state set to Q^k
  if (j.at("accept").contains("k")) {
    MultiTree acc = mt_from_json(j["accept"]);
    return compile_multi_acceptance(sigma, q, q0, k, delta, acc, consts);
  }
  SUAutomaton a{std::move(sigma), std::move(q), std::move(q0), k, std::move(delta),
                sutree_from_json(j.at("accept")), std::move(consts)};
  validate_automaton(a);
  return a;
}

inline json twoway_to_json(const TwoWayMachine& m) {
  json j{{"type", "two-way"},
         {"version", 1},
         {"role", m.transducer ? "transducer" : "acceptor"},
         {"sigma", desc_to_json(m.sigma)},
         {"q", desc_to_json(m.q)},
         {"k", m.k},
         {"q0", value_to_json(m.q0)},
         {"delta", sutree_to_json(m.delta)},
         {"consts", atomset_to_json(m.consts)}};
  if (m.transducer) j["gamma"] = desc_to_json(m.gamma);
  return j;
}

inline TwoWayMachine twoway_from_json(const json& j) {
  TwoWayMachine m;
  m.transducer = j.at("role").get<std::string>() == "transducer";
  m.sigma = desc_from_json(j.at("sigma"));
  if (m.transducer) m.gamma = desc_from_json(j.at("gamma"));
  m.q = desc_from_json(j.at("q"));
  m.k = j.at("k").get<int>();
  m.q0 = value_from_json(j.at("q0"));
  m.delta = sutree_from_json(j.at("delta"));
  if (j.contains("consts")) m.consts = atomset_from_json(j["consts"]);
  validate_twoway(m);
  return m;
}

inline json mealy_to_json(const MealyMachine& m) {
  return json{{"type", "mealy"},   {"version", 1},
              {"sigma", desc_to_json(m.sigma)}, {"gamma", desc_to_json(m.gamma)},
              {"q", desc_to_json(m.q)},         {"k", m.k},
              {"q0", value_to_json(m.q0)},      {"delta", sutree_to_json(m.delta)},
              {"consts", atomset_to_json(m.consts)}};
}

inline MealyMachine mealy_from_json(const json& j) {
  MealyMachine m;
  m.sigma = desc_from_json(j.at("sigma"));
  m.gamma = desc_from_json(j.at("gamma"));
  m.q = desc_from_json(j.at("q"));
  m.k = j.at("k").get<int>();
  m.q0 = value_from_json(j.at("q0"));
  m.delta = sutree_from_json(j.at("delta"));
  if (j.contains("consts")) m.consts = atomset_from_json(j["consts"]);
  validate_mealy(m);
  return m;
}

// ---------------------------------------------------------------------------
// Semigroups and transductions
// ---------------------------------------------------------------------------

/// Loader-time law checks for presentations: associativity modulo eq on
/// orbit-representative triples, and eq being a congruent equivalence.
inline void validate_semigroup_laws(const Semigroup& s) {
  Desc triple = prod_desc(s.carrier, prod_desc(s.carrier, s.carrier));
  for (const Val& t : enumerate_orbit_reps(triple, s.consts)) {
    const Val &a = t->a, &b = t->b->a, &c = t->b->b;
    if (!s.eq(s.mul(s.mul(a, b), c), s.mul(a, s.mul(b, c))))
      throw SchemaError("semigroup: product not associative (modulo eq)");
  }
  if (!s.eq_fn) return;
  Desc pair = prod_desc(s.carrier, s.carrier);
  for (const Val& p : enumerate_orbit_reps(pair, s.consts)) {
    if (!s.eq(p->a, p->a)) throw SchemaError("semigroup: eq not reflexive");
    if (s.eq(p->a, p->b) != s.eq(p->b, p->a)) throw SchemaError("semigroup: eq not symmetric");
  }
  Desc quad = prod_desc(pair, pair);
  for (const Val& q : enumerate_orbit_reps(quad, s.consts)) {
    const Val &a = q->a->a, &b = q->a->b, &x = q->b->a, &y = q->b->b;
    if (s.eq(a, b) && s.eq(x, y) && !s.eq(s.mul(a, x), s.mul(b, y)))
      throw SchemaError("semigroup: eq is not a congruence");
  }
}

inline json semigroup_to_json(const Semigroup& s) {
  if (!s.product_tree) throw TypeError("semigroup_to_json: derived semigroup has no presentation");
  json j{{"type", "semigroup"},
         {"version", 1},
         {"carrier", desc_to_json(s.carrier)},
         {"product", mt_to_json(*s.product_tree)},
         {"consts", atomset_to_json(s.consts)}};
  j["eq"] = s.eq_tree ? mt_to_json(*s.eq_tree) : json(nullptr);
  return j;
}

inline Semigroup semigroup_from_json(const json& j, bool check_laws = true) {
  Desc carrier = desc_from_json(j.at("carrier"));
  MultiTree product = mt_from_json(j.at("product"));
  std::optional<MultiTree> eq;
  if (j.contains("eq") && !j["eq"].is_null()) eq = mt_from_json(j["eq"]);
  AtomSet consts;
  if (j.contains("consts")) consts = atomset_from_json(j["consts"]);
  Semigroup s = presentation_semigroup(carrier, product, eq, consts);
  if (check_laws) validate_semigroup_laws(s);
  return s;
}

/// lambda must be constant on eq-classes, checked on representative pairs.
inline void validate_lambda_on_classes(const SemigroupTransduction& t) {
  if (!t.s.eq_fn) return;
  Desc pair = prod_desc(t.s.carrier, t.s.carrier);
  for (const Val& p : enumerate_orbit_reps(pair, t.s.consts))
    if (t.s.eq(p->a, p->b) && !value_eq(t.out(p->a), t.out(p->b)))
      throw SchemaError("transduction: lambda is not constant on eq-classes");
}

inline json transduction_to_json(const SemigroupTransduction& t) {
  if (!t.h_tree || !t.lambda_tree)
    throw TypeError("transduction_to_json: derived transduction has no presentation");
  return json{{"type", "sg-transduction"},
              {"version", 1},
              {"sigma", desc_to_json(t.sigma)},
              {"gamma", desc_to_json(t.gamma)},
              {"semigroup", semigroup_to_json(t.s)},
              {"h", mt_to_json(*t.h_tree)},
              {"lambda", mt_to_json(*t.lambda_tree)}};
}

inline SemigroupTransduction transduction_from_json(const json& j) {
  Semigroup s = semigroup_from_json(j.at("semigroup"));
  SemigroupTransduction t = presentation_transduction(
      std::move(s), desc_from_json(j.at("sigma")), desc_from_json(j.at("gamma")),
      mt_from_json(j.at("h")), mt_from_json(j.at("lambda")));
  validate_lambda_on_classes(t);
  return t;
}

inline json rational_to_json(const RationalTransduction& t) {
  if (!t.h_tree || !t.lambda3_tree)
    throw TypeError("rational_to_json: derived transduction has no presentation");
  return json{{"type", "rational"},
              {"version", 1},
              {"sigma", desc_to_json(t.sigma)},
              {"gamma", desc_to_json(t.gamma)},
              {"semigroup", semigroup_to_json(t.s)},
              {"h", mt_to_json(*t.h_tree)},
              {"lambda3", mt_to_json(*t.lambda3_tree)}};
}

inline RationalTransduction rational_from_json(const json& j) {
  Semigroup s = semigroup_from_json(j.at("semigroup"));
  return presentation_rational(std::move(s), desc_from_json(j.at("sigma")),
                               desc_from_json(j.at("gamma")), mt_from_json(j.at("h")),
                               mt_from_json(j.at("lambda3")));
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

inline json prime_to_json(const PrimeSpec& p) {
  switch (p.kind) {
    case PrimeSpec::Kind::Hom:
      return json{{"prime", "hom"}, {"sigma", desc_to_json(p.hom_sigma)},
                  {"gamma", desc_to_json(p.hom_gamma)}, {"m", p.hom_m},
                  {"tree", mt_to_json(*p.hom)}};
    case PrimeSpec::Kind::SUPropL: return json{{"prime", "su-prop-l"}};
    case PrimeSpec::Kind::SUPropR: return json{{"prime", "su-prop-r"}};
    case PrimeSpec::Kind::BitPropL: return json{{"prime", "bit-prop-l"}};
    case PrimeSpec::Kind::BitPropR: return json{{"prime", "bit-prop-r"}};
    case PrimeSpec::Kind::GroupPrefix: return json{{"prime", "group-prefix"}, {"cayley", p.cayley}};
    case PrimeSpec::Kind::GroupSuffix: return json{{"prime", "group-suffix"}, {"cayley", p.cayley}};
    case PrimeSpec::Kind::MapDup: return json{{"prime", "map-dup"}, {"sigma", desc_to_json(p.sigma)}};
    case PrimeSpec::Kind::MapRev: return json{{"prime", "map-rev"}, {"sigma", desc_to_json(p.sigma)}};
    case PrimeSpec::Kind::EndMarker:
      return json{{"prime", "end-marker"}, {"sigma", desc_to_json(p.sigma)}};
    case PrimeSpec::Kind::ParId:
      return json{{"prime", "par-id"}, {"inner", prime_to_json(*p.inner)},
                  {"pad", desc_to_json(p.pad)}};
  }
  throw InternalError("prime_to_json");
}

inline PrimeSpec prime_from_json(const json& j) {
  std::string kind = j.at("prime").get<std::string>();
  if (kind == "hom")
    return prime_hom(desc_from_json(j.at("sigma")), desc_from_json(j.at("gamma")),
                     j.at("m").get<int>(), mt_from_json(j.at("tree")));
  if (kind == "su-prop-l") return prime_simple(PrimeSpec::Kind::SUPropL);
  if (kind == "su-prop-r") return prime_simple(PrimeSpec::Kind::SUPropR);
  if (kind == "bit-prop-l") return prime_simple(PrimeSpec::Kind::BitPropL);
  if (kind == "bit-prop-r") return prime_simple(PrimeSpec::Kind::BitPropR);
  if (kind == "group-prefix")
    return prime_group(PrimeSpec::Kind::GroupPrefix, j.at("cayley").get<std::vector<std::vector<int>>>());
  if (kind == "group-suffix")
    return prime_group(PrimeSpec::Kind::GroupSuffix, j.at("cayley").get<std::vector<std::vector<int>>>());
  if (kind == "map-dup")
    return prime_blockwise(PrimeSpec::Kind::MapDup, desc_from_json(j.at("sigma")));
  if (kind == "map-rev")
    return prime_blockwise(PrimeSpec::Kind::MapRev, desc_from_json(j.at("sigma")));
  if (kind == "end-marker") return prime_end_marker(desc_from_json(j.at("sigma")));
  if (kind == "par-id")
    return prime_par_id(prime_from_json(j.at("inner")), desc_from_json(j.at("pad")));
  throw SchemaError("unknown prime: " + kind);
}

inline json pipeline_to_json(const Pipeline& pl) {
  json stages = json::array();
  for (const PrimeSpec& p : pl.stages) stages.push_back(prime_to_json(p));
  json j{{"type", "pipeline"}, {"version", 1}, {"stages", stages}};
  if (pl.input_hint) j["sigma"] = desc_to_json(pl.input_hint);
  return j;
}

inline Pipeline pipeline_from_json(const json& j) {
  Pipeline pl;
  for (const json& s : j.at("stages")) pl.stages.push_back(prime_from_json(s));
  if (j.contains("sigma")) pl.input_hint = desc_from_json(j["sigma"]);
  validate_pipeline(pl);
  return pl;
}

// ---------------------------------------------------------------------------
// Streaming string transducers
// ---------------------------------------------------------------------------
// reg tree leaves: {"leaf":{"b":j,"o":[ {"v":i}|{"c":a}|{"w":[items]} ...]}}
// items: {"r":i} | {"g":{"b":j,"o":[op...]}}

inline json reg_node_to_json(const RegNodePtr& n) {
  if (!n->is_leaf)
    return json{{"q", {{"l", n->lhs}, {"r", operand_to_json(n->rhs)},
                 {"y", reg_node_to_json(n->yes)}, {"n", reg_node_to_json(n->no)}}}};
  json outs = json::array();
  for (const RegOut& o : n->outs) {
    if (!o.is_reg_slot) {
      outs.push_back(operand_to_json(o.atom));
      continue;
    }
    json items = json::array();
    for (const RegItem& it : o.items) {
      if (it.is_reg) {
        items.push_back(json{{"r", it.reg}});
      } else {
        json louts = json::array();
        for (const Operand& op : it.letter_outs) louts.push_back(operand_to_json(op));
        items.push_back(json{{"g", {{"b", it.letter_branch}, {"o", louts}}}});
      }
    }
    outs.push_back(json{{"w", items}});
  }
  return json{{"leaf", {{"b", n->branch}, {"o", outs}}}};
}

inline RegNodePtr reg_node_from_json(const json& j) {
  if (j.contains("q")) {
    const json& q = j["q"];
    return reg_query(q["l"].get<int>(), operand_from_json(q["r"]), reg_node_from_json(q["y"]),
                     reg_node_from_json(q["n"]));
  }
  const json& l = j.at("leaf");
  std::vector<RegOut> outs;
  for (const json& o : l["o"]) {
    if (o.contains("w")) {
      std::vector<RegItem> items;
      for (const json& it : o["w"]) {
        if (it.contains("r")) {
          items.push_back(reg_item(it["r"].get<int>()));
        } else {
          const json& g = it.at("g");
          std::vector<Operand> louts;
          for (const json& op : g["o"]) louts.push_back(operand_from_json(op));
          items.push_back(letter_item(g["b"].get<size_t>(), std::move(louts)));
        }
      }
      outs.push_back(reg_out(std::move(items)));
    } else {
      outs.push_back(atom_out(operand_from_json(o)));
    }
  }
  return reg_leaf(l["b"].get<size_t>(), std::move(outs));
}

inline json reg_tree_to_json(const RegTree& t) {
  json branches = json::array();
  for (const RegNodePtr& b : t.branches) branches.push_back(reg_node_to_json(b));
  return json{{"dom", desc_to_json(t.dom)}, {"cod", desc_to_json(t.cod)},
              {"gamma", desc_to_json(t.gamma)}, {"branches", branches}};
}

inline RegTree reg_tree_from_json(const json& j) {
  RegTree t;
  t.dom = desc_from_json(j.at("dom"));
  t.cod = desc_from_json(j.at("cod"));
  t.gamma = desc_from_json(j.at("gamma"));
  for (const json& b : j.at("branches")) t.branches.push_back(reg_node_from_json(b));
  return t;
}

inline json sst_to_json(const SSTransducer& t) {
  return json{{"type", "sst"},     {"version", 1},
              {"sigma", desc_to_json(t.sigma)}, {"gamma", desc_to_json(t.gamma)},
              {"q", desc_to_json(t.q)},         {"k", t.k},
              {"q0", value_to_json(t.q0)},      {"delta", reg_tree_to_json(t.delta)},
              {"out", reg_tree_to_json(t.out)}, {"consts", atomset_to_json(t.consts)}};
}

inline SSTransducer sst_from_json(const json& j) {
  SSTransducer t;
  t.sigma = desc_from_json(j.at("sigma"));
  t.gamma = desc_from_json(j.at("gamma"));
  t.q = desc_from_json(j.at("q"));
  t.k = j.at("k").get<int>();
  t.q0 = value_from_json(j.at("q0"));
  t.delta = reg_tree_from_json(j.at("delta"));
  t.out = reg_tree_from_json(j.at("out"));
  if (j.contains("consts")) t.consts = atomset_from_json(j["consts"]);
  std::string diag;
  if (!validate_sst(t, &diag)) throw SchemaError("sst: " + diag);
  return t;
}

// ---------------------------------------------------------------------------
// Run shapes
// ---------------------------------------------------------------------------

inline json shape_to_json(const RunShape& s) {
  json positions = json::array();
  for (const auto& vs : s.visits) {
    json visits = json::array();
    for (const Visit& v : vs) {
      json out = v.out ? value_to_json(v.out) : json(nullptr);
      visits.push_back(json{{"in", v.entered_right ? "right" : "left"},
                            {"out", v.left_right ? "right" : "left"},
                            {"emit", out}});
    }
    positions.push_back(visits);
  }
  return json{{"type", "run-shape"}, {"version", 1}, {"bound", s.bound}, {"visits", positions}};
}

inline RunShape shape_from_json(const json& j) {
  RunShape s;
  s.bound = j.value("bound", 0);
  for (const json& pos : j.at("visits")) {
    std::vector<Visit> vs;
    for (const json& v : pos) {
      Visit visit{};
      visit.entered_right = v.at("in").get<std::string>() == "right";
      visit.left_right = v.at("out").get<std::string>() == "right";
      if (!v.at("emit").is_null()) visit.out = value_from_json(v["emit"]);
      vs.push_back(visit);
    }
    s.visits.push_back(std::move(vs));
  }
  s.len = s.visits.size();
  return s;
}

// ---------------------------------------------------------------------------
// List function ASTs and types
// ---------------------------------------------------------------------------

inline json pt_to_json(const PT& t) {
  switch (t->tag) {
    case PolyType::Tag::Unit: return json{{"unit", 0}};
    case PolyType::Tag::Atoms: return json{{"atoms", 0}};
    case PolyType::Tag::Sum: return json{{"sum", json::array({pt_to_json(t->left), pt_to_json(t->right)})}};
    case PolyType::Tag::Prod:
      return json{{"prod", json::array({pt_to_json(t->left), pt_to_json(t->right)})}};
    case PolyType::Tag::Star: return json{{"star", pt_to_json(t->elem)}};
  }
  throw InternalError("pt_to_json");
}

inline PT pt_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "unit") return pt_unit();
    if (s == "atoms") return pt_atoms();
    throw SchemaError("type: unknown name " + s);
  }
  if (j.contains("unit")) return pt_unit();
  if (j.contains("atoms")) return pt_atoms();
  if (j.contains("sum")) return pt_sum(pt_from_json(j["sum"][0]), pt_from_json(j["sum"][1]));
  if (j.contains("prod")) return pt_prod(pt_from_json(j["prod"][0]), pt_from_json(j["prod"][1]));
  if (j.contains("star")) return pt_star(pt_from_json(j["star"]));
  throw SchemaError("type: unknown constructor");
}

inline const std::map<std::string, ListExpr::Kind>& le_kind_names() {
  static const std::map<std::string, ListExpr::Kind> names{
      {"id", ListExpr::Kind::Id},           {"eq", ListExpr::Kind::Eq},
      {"proj1", ListExpr::Kind::Proj1},     {"proj2", ListExpr::Kind::Proj2},
      {"sym", ListExpr::Kind::Sym},         {"assoc", ListExpr::Kind::Assoc},
      {"assoc-inv", ListExpr::Kind::AssocInv}, {"left-i", ListExpr::Kind::LeftI},
      {"left-i-inv", ListExpr::Kind::LeftIInv}, {"right-i", ListExpr::Kind::RightI},
      {"right-i-inv", ListExpr::Kind::RightIInv}, {"cosym", ListExpr::Kind::Cosym},
      {"coassoc", ListExpr::Kind::Coassoc}, {"coassoc-inv", ListExpr::Kind::CoassocInv},
      {"merge", ListExpr::Kind::Merge},     {"distr", ListExpr::Kind::Distr},
      {"distr-inv", ListExpr::Kind::DistrInv}, {"const-i", ListExpr::Kind::ConstI},
      {"copy-atom", ListExpr::Kind::CopyAtom}, {"copy-star", ListExpr::Kind::CopyStar},
      {"cons", ListExpr::Kind::Cons},       {"destruct", ListExpr::Kind::Destruct},
      {"concat", ListExpr::Kind::Concat},   {"reverse", ListExpr::Kind::Reverse},
  };
  return names;
}

inline json le_to_json(const LE& e) {
  using K = ListExpr::Kind;
  for (auto& [name, kind] : le_kind_names())
    if (kind == e->kind) return json{{"op", name}};
  switch (e->kind) {
    case K::ConstAtom: return json{{"op", "const-atom"}, {"atom", e->cnst.id}};
    case K::Coproj1: return json{{"op", "coproj1"}, {"other", pt_to_json(e->other)}};
    case K::Coproj2: return json{{"op", "coproj2"}, {"other", pt_to_json(e->other)}};
    case K::ConstEps: return json{{"op", "const-eps"}, {"elem", pt_to_json(e->elem)}};
    case K::Blocks: return json{{"op", "blocks"}, {"maximal", e->blocks_maximal}};
    case K::Group: return json{{"op", "group"}, {"cayley", e->cayley}};
    case K::Compose:
      return json{{"op", "compose"}, {"f", le_to_json(e->f)}, {"g", le_to_json(e->g)}};
    case K::Times: return json{{"op", "times"}, {"f", le_to_json(e->f)}, {"g", le_to_json(e->g)}};
    case K::Plus: return json{{"op", "plus"}, {"f", le_to_json(e->f)}, {"g", le_to_json(e->g)}};
    case K::Map: return json{{"op", "map"}, {"f", le_to_json(e->f)}};
    default: throw InternalError("le_to_json");
  }
}

inline LE le_from_json(const json& j) {
  std::string op = j.at("op").get<std::string>();
  auto it = le_kind_names().find(op);
  if (it != le_kind_names().end()) return le(it->second);
  if (op == "const-atom") return le_const_atom(Atom{j.at("atom").get<int>()});
  if (op == "coproj1") return le_coproj1(pt_from_json(j.at("other")));
  if (op == "coproj2") return le_coproj2(pt_from_json(j.at("other")));
  if (op == "const-eps") return le_const_eps(pt_from_json(j.at("elem")));
  if (op == "blocks") return le_blocks(j.value("maximal", false));
  if (op == "group") return le_group(j.at("cayley").get<std::vector<std::vector<int>>>());
  if (op == "compose") return le_compose(le_from_json(j.at("f")), le_from_json(j.at("g")));
  if (op == "times") return le_times(le_from_json(j.at("f")), le_from_json(j.at("g")));
  if (op == "plus") return le_plus(le_from_json(j.at("f")), le_from_json(j.at("g")));
  if (op == "map") return le_map(le_from_json(j.at("f")));
  throw SchemaError("unknown list operation: " + op);
}

inline json listfn_file_to_json(const LE& e, const PT& input) {
  return json{{"type", "list-function"}, {"version", 1}, {"input", pt_to_json(input)},
              {"expr", le_to_json(e)}};
}

}  // namespace su
