// Regenerates the JSON example corpus shipped with the repository.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "su/corpus.hpp"
#include "su/json_io.hpp"

using namespace su;

namespace {

void write(const std::filesystem::path& dir, const std::string& name, const json& j) {
  std::ofstream out(dir / name);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << (dir / name).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "corpus";
  std::filesystem::create_directories(dir);

  write(dir, "no_twice.json", automaton_to_json(corpus::no_twice_automaton()));
  write(dir, "no_twice_shuffled.json", automaton_to_json(corpus::no_twice_automaton_shuffled()));
  write(dir, "reject_all.json", automaton_to_json(corpus::reject_all_automaton()));
  write(dir, "accept_all.json", automaton_to_json(corpus::accept_all_automaton()));
  write(dir, "first_letter_5.json",
        automaton_to_json(corpus::first_letter_is_automaton(Atom{5})));

  write(dir, "reverse_twoway.json", twoway_to_json(corpus::reverse_transducer()));
  write(dir, "map_dup_twoway.json", twoway_to_json(corpus::map_dup_transducer(atoms_desc())));
  write(dir, "no_twice_twoway.json", twoway_to_json(embed_oneway(corpus::no_twice_automaton())));

  write(dir, "mealy_bit_prop.json", mealy_to_json(bit_prop_mealy()));
  write(dir, "mealy_su_prop.json", mealy_to_json(su_prop_mealy()));
  write(dir, "mealy_bit_prefix.json",
        mealy_to_json(monoid_prefix_mealy(corpus::bit_monoid_table(), corpus::bit_monoid_identity())));

  write(dir, "sg_three_class.json", semigroup_to_json(corpus::three_class_semigroup()));
  write(dir, "sgt_f_cmp.json", transduction_to_json(corpus::f_cmp_transduction()));
  write(dir, "sgt_su_prop.json", transduction_to_json(corpus::su_prop_transduction()));
  write(dir, "rational_swap.json", rational_to_json(corpus::swap_first_last_rational()));

  {
    Pipeline pl{{prime_simple(PrimeSpec::Kind::BitPropL)}, nullptr};
    write(dir, "pipeline_bit_prop.json", pipeline_to_json(pl));
  }
  {
    SUTree relabel = basics::cosym(atoms_desc(), unit_desc());
    PrimeSpec hom = prime_hom_letter(prop_gamma_desc(), sum_desc(unit_desc(), atoms_desc()),
                                     mt_from_su(relabel));
    Pipeline pl{{prime_simple(PrimeSpec::Kind::SUPropL), hom}, nullptr};
    write(dir, "pipeline_su_prop_relabel.json", pipeline_to_json(pl));
  }
  {
    Pipeline pl{{prime_blockwise(PrimeSpec::Kind::MapDup, atoms_desc()),
                 prime_blockwise(PrimeSpec::Kind::MapRev, atoms_desc())},
                nullptr};
    write(dir, "pipeline_map_dup_rev.json", pipeline_to_json(pl));
  }

  write(dir, "sst_map_dup.json", sst_to_json(corpus::map_dup_sst(atoms_desc())));

  for (const char* name :
       {"map_reverse", "map_duplicate", "su_propagation", "bit_propagation"}) {
    LibraryProgram p = library_program(name);
    write(dir, std::string("listfn_") + name + ".json", listfn_file_to_json(p.expr, p.input));
  }

  {
    auto shape = run_shape(corpus::reverse_transducer(),
                           std::vector<Val>{vatom(1), vatom(2)});
    write(dir, "shape_reverse_12.json", shape_to_json(*shape));
  }
  return 0;
}
