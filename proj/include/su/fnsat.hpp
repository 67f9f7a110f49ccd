#pragma once

#include "su/sutree.hpp"

namespace su {

// ---------------------------------------------------------------------------
// Saturation of function semigroups.
//
// Elements are k-fold-use trees kept as canonical representatives modulo
// permutations fixing `consts` (see canonical_fn_key). Products of two orbit
// representatives do not cover all products of orbit members, so the left
// factor is multiplied with every re-instantiation of the right factor whose
// extra atoms are drawn from the left factor's atoms plus a fresh pool.
// Termination follows from the orbit-finiteness of single-use function
// spaces.
// ---------------------------------------------------------------------------

struct FnElem {
  MultiTree rep;               // canonical representative
  std::vector<Atom> extra;     // its non-const support, in canonical order
  std::vector<Val> witness;    // a word of letters whose behaviour this is
  std::string key;
};

using FnMul = std::function<MultiTree(const MultiTree&, const MultiTree&)>;

namespace detail {

inline std::vector<Atom> extra_atoms_of_key(const FnKey& k) { return k.extra; }

/// All injective maps of `src` into `targets`, as atom permutations fixing
/// everything outside src and the chosen images.
inline std::vector<Perm> injective_renamings(const std::vector<Atom>& src,
                                             const std::vector<Atom>& targets) {
  std::vector<Perm> out;
  if (src.empty()) {
    out.push_back(Perm::identity());
    return out;
  }
  std::vector<int> idx(src.size(), 0);
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

/// The left factor's extra atoms plus enough fresh ids outside consts.
inline std::vector<Atom> alignment_targets(const std::vector<Atom>& left_extra,
                                           size_t right_count, const AtomSet& consts) {
  std::vector<Atom> targets = left_extra;
  AtomSet avoid = consts;
  for (Atom a : left_extra) avoid.insert(a);
  int id = 0;
  for (size_t i = 0; i < right_count; ++i) {
    Atom a{id};
    while (avoid.contains(a)) a.id++;
    id = a.id + 1;
    targets.push_back(a);
    avoid.insert(a);
  }
  return targets;
}

}  // namespace detail

class FnSaturation {
public:
  const std::vector<FnElem>& elems() const { return elems_; }

  /// Index of the element whose orbit contains m, if known.
  std::optional<size_t> find(const MultiTree& m, const AtomSet& consts) const {
    auto it = index_.find(canonical_fn_key(m, consts).bytes);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  size_t insert(const MultiTree& m, const AtomSet& consts, std::vector<Val> witness) {
    FnKey k = canonical_fn_key(m, consts);
    auto it = index_.find(k.bytes);
    if (it != index_.end()) return it->second;
    FnElem e;
    e.rep = k.rep;
    e.extra = k.extra;
    e.witness = std::move(witness);
    e.key = k.bytes;
    elems_.push_back(std::move(e));
    index_[elems_.back().key] = elems_.size() - 1;
    return elems_.size() - 1;
  }

  bool contains_key(const std::string& key) const { return index_.count(key) > 0; }

private:
  std::vector<FnElem> elems_;
  std::map<std::string, size_t> index_;
};

/// Closes the generators (given with witness words) under `mul` modulo
/// consts-permutations. mul(f, g) is "f then g".
inline FnSaturation fn_saturate(const std::vector<std::pair<MultiTree, std::vector<Val>>>& gens,
                                const AtomSet& consts, const FnMul& mul,
                                const std::optional<MultiTree>& identity = std::nullopt) {
  FnSaturation sat;
  if (identity) sat.insert(*identity, consts, {});
  for (const auto& [g, w] : gens) sat.insert(g, consts, w);

  // worklist over pairs of element indices; new elements extend the frontier
  size_t done = 0;
  while (done < sat.elems().size()) {
    size_t n = sat.elems().size();
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (i < done && j < done) continue;  // pair already processed
        const FnElem ei = sat.elems()[i];
        const FnElem ej = sat.elems()[j];
        auto targets = detail::alignment_targets(ei.extra, ej.extra.size(), consts);
        for (const Perm& rho : detail::injective_renamings(ej.extra, targets)) {
          MultiTree gj = rename_mt(ej.rep, rho);
          MultiTree prod = mul(ei.rep, gj);
          std::vector<Val> witness = ei.witness;
          for (const Val& l : ej.witness) witness.push_back(act(rho, l));
          sat.insert(prod, consts, std::move(witness));
        }
      }
    }
    done = n;
  }
  return sat;
}

}  // namespace su
