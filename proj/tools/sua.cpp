// Command-line front end: load JSON machine files, run words, and invoke the
// decision and translation procedures.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "su/corpus.hpp"
#include "su/json_io.hpp"
#include "su/listfn.hpp"

using namespace su;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSchema = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string format = "pretty";
  std::string input_file;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return j;
}

json parse_word_arg(const Options& opt, const std::string& arg) {
  if (!opt.input_file.empty()) return load_json_file(opt.input_file);
  if (arg.empty()) throw SchemaError("missing word (inline JSON or --input file)");
  try {
    return json::parse(arg);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("word: ") + e.what());
  }
}

void emit(const Options& opt, const std::string& pretty, const json& machine_readable) {
  if (opt.format == "json")
    std::cout << machine_readable.dump() << "\n";
  else
    std::cout << pretty << "\n";
}

std::string machine_type(const json& j) {
  if (!j.contains("type")) throw SchemaError("machine file: missing type tag");
  return j["type"].get<std::string>();
}

json fact_tree_to_json(const FactTree& t) {
  const char* tag = nullptr;
  switch (t.kind) {
    case FactTree::Kind::Leaf: tag = "leaf"; break;
    case FactTree::Kind::Unary: tag = "unary"; break;
    case FactTree::Kind::Binary: tag = "binary"; break;
    case FactTree::Kind::Smooth: tag = "smooth"; break;
  }
  json node = json::array({tag, value_to_json(t.value)});
  if (!t.children.empty()) {
    json kids = json::array();
    for (const FactTree& c : t.children) kids.push_back(fact_tree_to_json(c));
    node.push_back(kids);
  }
  return node;
}

json behaviour_table_json(const BehaviourTable& t) {
  json entries = json::array();
  for (auto& [s, from_left, o] : t.entries) {
    json out;
    switch (o.kind) {
      case SegOutcome::Kind::Yes: out = "yes"; break;
      case SegOutcome::Kind::No: out = "no"; break;
      case SegOutcome::Kind::ExitLeft:
        out = json{{"exit", "left"}, {"state", value_to_json(o.state)}};
        break;
      case SegOutcome::Kind::ExitRight:
        out = json{{"exit", "right"}, {"state", value_to_json(o.state)}};
        break;
    }
    entries.push_back(json{{"state", value_to_json(s)},
                           {"enter", from_left ? "left" : "right"},
                           {"result", out}});
  }
  return json{{"frozen", atomset_to_json(t.frozen)}, {"entries", entries}};
}

int cmd_run(const Options& opt, const std::string& file, const std::string& word_arg) {
  json j = load_json_file(file);
  std::string type = machine_type(j);
  json wj = parse_word_arg(opt, word_arg);
  if (type == "su-automaton") {
    SUAutomaton a = automaton_from_json(j);
    bool acc = run(a, word_from_json(wj));
    emit(opt, acc ? "accept" : "reject", json{{"accept", acc}});
    return acc ? kExitTrue : kExitFalse;
  }
  if (type == "two-way") {
    TwoWayMachine m = twoway_from_json(j);
    auto w = word_from_json(wj);
    if (!m.transducer) {
      bool acc = run_acceptor(m, w);
      emit(opt, acc ? "accept" : "reject", json{{"accept", acc}});
      return acc ? kExitTrue : kExitFalse;
    }
    TransducerRun r = run_transducer(m, w);
    if (r.looped) {
      emit(opt, "loop", json{{"loop", true}});
      return kExitFalse;
    }
    emit(opt, word_to_json(r.output).dump(), json{{"output", word_to_json(r.output)}});
    return kExitTrue;
  }
  if (type == "mealy") {
    auto out = mealy_run(mealy_from_json(j), word_from_json(wj));
    emit(opt, word_to_json(out).dump(), json{{"output", word_to_json(out)}});
    return kExitTrue;
  }
  if (type == "sst") {
    auto out = sst_run(sst_from_json(j), word_from_json(wj));
    emit(opt, word_to_json(out).dump(), json{{"output", word_to_json(out)}});
    return kExitTrue;
  }
  if (type == "sg-transduction") {
    auto out = transduction_eval(transduction_from_json(j), word_from_json(wj));
    emit(opt, word_to_json(out).dump(), json{{"output", word_to_json(out)}});
    return kExitTrue;
  }
  if (type == "rational") {
    auto out = rational_eval(rational_from_json(j), word_from_json(wj));
    emit(opt, word_to_json(out).dump(), json{{"output", word_to_json(out)}});
    return kExitTrue;
  }
  throw SchemaError("run: unsupported machine type " + type);
}

int cmd_empty(const Options& opt, const std::string& file) {
  SUAutomaton a = automaton_from_json(load_json_file(file));
  auto witness = find_accepted_word(a);
  if (witness) {
    emit(opt, "nonempty " + word_to_json(*witness).dump(),
         json{{"empty", false}, {"witness", word_to_json(*witness)}});
    return kExitFalse;
  }
  emit(opt, "empty", json{{"empty", true}});
  return kExitTrue;
}

int cmd_equiv(const Options& opt, const std::string& f1, const std::string& f2) {
  SUAutomaton a = automaton_from_json(load_json_file(f1));
  SUAutomaton b = automaton_from_json(load_json_file(f2));
  SUAutomaton x = xor_product(a, b);
  auto witness = find_accepted_word(x);
  if (!witness) {
    emit(opt, "equivalent", json{{"equivalent", true}});
    return kExitTrue;
  }
  emit(opt, "not equivalent " + word_to_json(*witness).dump(),
       json{{"equivalent", false}, {"witness", word_to_json(*witness)}});
  return kExitFalse;
}

int cmd_monoid(const Options& opt, const std::string& file) {
  SUAutomaton a = automaton_from_json(load_json_file(file));
  BehaviourMonoid m = behaviour_monoid(a);
  json elems = json::array();
  for (size_t i = 0; i < m.elements.size(); ++i)
    elems.push_back(json{{"witness", word_to_json(m.elements[i].witness)},
                         {"accepting", m.accepting[i]},
                         {"support", static_cast<int>(m.elements[i].extra.size())}});
  emit(opt, "monoid with " + std::to_string(m.elements.size()) + " canonical elements",
       json{{"size", m.elements.size()}, {"elements", elems}});
  return kExitTrue;
}

int cmd_behaviour(const Options& opt, const std::string& file, const std::string& word_arg) {
  json j = load_json_file(file);
  std::string type = machine_type(j);
  json wj = parse_word_arg(opt, word_arg);
  if (type == "su-automaton") {
    SUAutomaton a = automaton_from_json(j);
    BehaviourElem b = behaviour(a, word_from_json(wj));
    json table = json::array();
    for (auto& [in, out] : b.key.table)
      table.push_back(json::array({value_to_json(in), value_to_json(out)}));
    emit(opt, table.dump(), json{{"frozen", atomset_to_json(b.key.frozen)}, {"table", table}});
    return kExitTrue;
  }
  if (type == "two-way") {
    TwoWayMachine m = twoway_from_json(j);
    if (m.transducer) throw SchemaError("behaviour: two-way transducers have no acceptance table");
    BehaviourTable t = behaviour2(m, mark_word(word_from_json(wj)));
    json out = behaviour_table_json(t);
    emit(opt, out.dump(), out);
    return kExitTrue;
  }
  throw SchemaError("behaviour: unsupported machine type " + type);
}

int cmd_locality(const Options& opt, const std::string& file, bool paper_variant) {
  json j = load_json_file(file);
  std::string type = machine_type(j);
  if (type == "sg-transduction") {
    SemigroupTransduction t = transduction_from_json(j);
    LocalityVerdict v = is_local(t, paper_variant);
    if (v.local) {
      emit(opt, "local", json{{"local", true}});
      return kExitTrue;
    }
    json witness{{"x", value_to_json(v.x)},
                 {"x_prime", value_to_json(v.x_prime)},
                 {"y", value_to_json(v.y)},
                 {"z", value_to_json(v.z)}};
    emit(opt, "not local " + witness.dump(), json{{"local", false}, {"witness", witness}});
    return kExitFalse;
  }
  if (type == "rational") {
    RationalTransduction t = rational_from_json(j);
    RationalLocalityVerdict v = is_local_rational(t);
    if (v.local) {
      emit(opt, "local", json{{"local", true}});
      return kExitTrue;
    }
    json witness{{"x1", value_to_json(v.x1)},       {"y1", value_to_json(v.y1)},
                 {"a", value_to_json(v.a)},         {"x2", value_to_json(v.x2)},
                 {"y2", value_to_json(v.y2)},       {"x1_prime", value_to_json(v.x1_prime)},
                 {"y2_prime", value_to_json(v.y2_prime)}};
    emit(opt, "not local " + witness.dump(), json{{"local", false}, {"witness", witness}});
    return kExitFalse;
  }
  if (type == "mealy") {
    SemigroupTransduction t = mealy_to_transduction(mealy_from_json(j));
    LocalityVerdict v = is_local(t, paper_variant);
    emit(opt, v.local ? "local" : "not local", json{{"local", v.local}});
    return v.local ? kExitTrue : kExitFalse;
  }
  throw SchemaError("locality: unsupported machine type " + type);
}

int cmd_factorize(const Options& opt, const std::string& file, const std::string& word_arg) {
  json j = load_json_file(file);
  if (machine_type(j) != "semigroup") throw SchemaError("factorize: expected a semigroup file");
  Semigroup s = semigroup_from_json(j);
  auto seq = word_from_json(parse_word_arg(opt, word_arg));
  for (const Val& v : seq)
    if (!check(s.carrier, v)) throw SchemaError("factorize: sequence element outside the carrier");
  FactTree t = smooth_tree(s, seq);
  json out = fact_tree_to_json(t);
  emit(opt, out.dump(), json{{"height", fact_height(t)}, {"tree", out}});
  return kExitTrue;
}

int cmd_pipeline_run(const Options& opt, const std::string& file, const std::string& word_arg) {
  Pipeline pl = pipeline_from_json(load_json_file(file));
  auto out = eval_pipeline(pl, word_from_json(parse_word_arg(opt, word_arg)));
  emit(opt, word_to_json(out).dump(), json{{"output", word_to_json(out)}});
  return kExitTrue;
}

int cmd_pipeline_compile(const Options& opt, const std::string& file) {
  Pipeline pl = pipeline_from_json(load_json_file(file));
  MealyMachine m = compile_lp_pipeline(pl);
  json out = mealy_to_json(m);
  std::cout << out.dump(opt.format == "json" ? -1 : 2) << "\n";
  return kExitTrue;
}

int cmd_shape(const Options& opt, const std::string& file, const std::string& word_arg) {
  TwoWayMachine m = twoway_from_json(load_json_file(file));
  auto shape = run_shape(m, word_from_json(parse_word_arg(opt, word_arg)));
  if (!shape) {
    emit(opt, "loop", json{{"loop", true}});
    return kExitFalse;
  }
  json out = shape_to_json(*shape);
  emit(opt, out.dump(), out);
  return kExitTrue;
}

int cmd_untangle(const Options& opt, const std::string& file) {
  RunShape s = shape_from_json(load_json_file(file));
  auto out = untangle(s);
  emit(opt, word_to_json(out).dump(), json{{"output", word_to_json(out)}});
  return kExitTrue;
}

int cmd_listfn_typecheck(const Options& opt, const std::string& file) {
  json j = load_json_file(file);
  LE e = le_from_json(j.at("expr"));
  PT in = pt_from_json(j.at("input"));
  PT out = typecheck(e, in);
  emit(opt, pt_to_string(in) + " -> " + pt_to_string(out),
       json{{"input", pt_to_json(in)}, {"output", pt_to_json(out)}});
  return kExitTrue;
}

int cmd_listfn_eval(const Options& opt, const std::string& file, const std::string& value_arg) {
  json j = load_json_file(file);
  LE e = le_from_json(j.at("expr"));
  PT in = pt_from_json(j.at("input"));
  typecheck(e, in);
  Val v = value_from_json(parse_word_arg(opt, value_arg));
  if (!check_pt(in, v)) throw SchemaError("listfn eval: value does not inhabit the input type");
  Val out = list_eval(e, v);
  json oj = value_to_json(out);
  emit(opt, oj.dump(), json{{"output", oj}});
  return kExitTrue;
}

int cmd_validate(const Options& opt, const std::string& file) {
  json j = load_json_file(file);
  std::string type = machine_type(j);
  if (type == "su-automaton") automaton_from_json(j);
  else if (type == "two-way") twoway_from_json(j);
  else if (type == "mealy") mealy_from_json(j);
  else if (type == "sst") sst_from_json(j);
  else if (type == "semigroup") semigroup_from_json(j);
  else if (type == "sg-transduction") transduction_from_json(j);
  else if (type == "rational") rational_from_json(j);
  else if (type == "pipeline") pipeline_from_json(j);
  else if (type == "run-shape") shape_from_json(j);
  else if (type == "list-function") {
    LE e = le_from_json(j.at("expr"));
    typecheck(e, pt_from_json(j.at("input")));
  } else {
    throw SchemaError("validate: unknown machine type " + type);
  }
  emit(opt, "ok", json{{"ok", true}, {"machine", type}});
  return kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-use automata toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"pretty", "json"}));
  app.add_option("--input", opt.input_file, "read the input word from a JSON file");
  uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for randomized checks (reserved)");

  std::string file, file2, word;
  bool paper_variant = false;

  auto* c_run = app.add_subcommand("run", "run a machine on a word");
  c_run->add_option("file", file)->required();
  c_run->add_option("word", word);

  auto* c_empty = app.add_subcommand("empty", "decide emptiness of an automaton");
  c_empty->add_option("file", file)->required();

  auto* c_equiv = app.add_subcommand("equiv", "decide equivalence of two automata");
  c_equiv->add_option("file1", file)->required();
  c_equiv->add_option("file2", file2)->required();

  auto* c_monoid = app.add_subcommand("monoid", "saturate the behaviour monoid");
  c_monoid->add_option("file", file)->required();

  auto* c_beh = app.add_subcommand("behaviour", "behaviour of a word");
  c_beh->add_option("file", file)->required();
  c_beh->add_option("word", word);

  auto* c_loc = app.add_subcommand("locality", "decide locality of a transduction");
  c_loc->add_option("file", file)->required();
  c_loc->add_flag("--paper-variant", paper_variant,
                  "check the literal lambda(xyz) = lambda(x'yz) equation instead");

  auto* c_fact = app.add_subcommand("factorize", "smooth factorization tree of a sequence");
  c_fact->add_option("file", file)->required();
  c_fact->add_option("word", word);

  auto* c_pipe = app.add_subcommand("pipeline", "pipeline operations");
  c_pipe->require_subcommand(1);
  auto* c_prun = c_pipe->add_subcommand("run", "evaluate a pipeline");
  c_prun->add_option("file", file)->required();
  c_prun->add_option("word", word);
  auto* c_pcomp = c_pipe->add_subcommand("compile", "compile a length-preserving pipeline");
  c_pcomp->add_option("file", file)->required();

  auto* c_shape = app.add_subcommand("shape", "run shape of a two-way transducer");
  c_shape->add_option("file", file)->required();
  c_shape->add_option("word", word);

  auto* c_unt = app.add_subcommand("untangle", "untangle a run shape into its output");
  c_unt->add_option("file", file)->required();

  auto* c_list = app.add_subcommand("listfn", "list function operations");
  c_list->require_subcommand(1);
  auto* c_ltc = c_list->add_subcommand("typecheck", "typecheck a list function");
  c_ltc->add_option("file", file)->required();
  auto* c_lev = c_list->add_subcommand("eval", "evaluate a list function");
  c_lev->add_option("file", file)->required();
  c_lev->add_option("value", word);

  auto* c_val = app.add_subcommand("validate", "validate a machine file");
  c_val->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_run->parsed()) return cmd_run(opt, file, word);
    if (c_empty->parsed()) return cmd_empty(opt, file);
    if (c_equiv->parsed()) return cmd_equiv(opt, file, file2);
    if (c_monoid->parsed()) return cmd_monoid(opt, file);
    if (c_beh->parsed()) return cmd_behaviour(opt, file, word);
    if (c_loc->parsed()) return cmd_locality(opt, file, paper_variant);
    if (c_fact->parsed()) return cmd_factorize(opt, file, word);
    if (c_pipe->parsed()) {
      if (c_prun->parsed()) return cmd_pipeline_run(opt, file, word);
      return cmd_pipeline_compile(opt, file);
    }
    if (c_shape->parsed()) return cmd_shape(opt, file, word);
    if (c_unt->parsed()) return cmd_untangle(opt, file);
    if (c_list->parsed()) {
      if (c_ltc->parsed()) return cmd_listfn_typecheck(opt, file);
      return cmd_listfn_eval(opt, file, word);
    }
    if (c_val->parsed()) return cmd_validate(opt, file);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const TypeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
