#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace su {

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An atom: an element of the countably infinite alphabet, comparable only
/// for equality. Ordering on ids exists solely so atoms can live in sorted
/// containers and canonicalization can break ties; it carries no meaning.
struct Atom {
  int id = 0;

  friend bool operator==(Atom a, Atom b) { return a.id == b.id; }
  friend bool operator!=(Atom a, Atom b) { return a.id != b.id; }
  friend bool operator<(Atom a, Atom b) { return a.id < b.id; }
};

/// Finite set of atoms, stored strictly increasing by id.
class AtomSet {
public:
  AtomSet() = default;
  AtomSet(std::initializer_list<Atom> atoms) {
    for (Atom a : atoms) insert(a);
  }

  bool contains(Atom a) const {
    return std::binary_search(members_.begin(), members_.end(), a);
  }

  void insert(Atom a) {
    auto it = std::lower_bound(members_.begin(), members_.end(), a);
    if (it == members_.end() || *it != a) members_.insert(it, a);
  }

  void insert_all(const AtomSet& other) {
    for (Atom a : other.members_) insert(a);
  }

  size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  const std::vector<Atom>& members() const { return members_; }

  friend AtomSet set_union(const AtomSet& a, const AtomSet& b) {
    AtomSet r = a;
    r.insert_all(b);
    return r;
  }

  friend bool operator==(const AtomSet& a, const AtomSet& b) {
    return a.members_ == b.members_;
  }

  /// Smallest id not in the set and >= from.
  Atom fresh(int from = 0) const {
    Atom a{from};
    while (contains(a)) ++a.id;
    return a;
  }

private:
  std::vector<Atom> members_;
};

/// A permutation of atoms that moves only finitely many of them.
/// Stored as the graph of its non-trivial part; keys and values coincide
/// as sets, so the map extends to a bijection of all atoms.
class Perm {
public:
  Perm() = default;

  static Perm identity() { return Perm(); }

  static Perm swap(Atom a, Atom b) {
    Perm p;
    if (a != b) {
      p.map_[a] = b;
      p.map_[b] = a;
    }
    return p;
  }

  /// Builds a permutation from (from, to) pairs. Throws if not injective
  /// or if the key set differs from the image set.
  static Perm from_pairs(const std::vector<std::pair<Atom, Atom>>& pairs) {
    Perm p;
    AtomSet keys, vals;
    for (auto& [a, b] : pairs) {
      if (p.map_.count(a)) throw SchemaError("permutation: duplicate source");
      if (vals.contains(b)) throw SchemaError("permutation: not injective");
      p.map_[a] = b;
      keys.insert(a);
      vals.insert(b);
    }
    if (!(keys == vals)) throw SchemaError("permutation: domain != image");
    p.strip_fixpoints();
    return p;
  }

  /// Extends a partial injective map to a permutation: unmatched sources
  /// and targets are paired up in ascending order.
  static Perm extending(const std::map<Atom, Atom>& partial) {
    AtomSet keys, vals;
    for (auto& [a, b] : partial) {
      keys.insert(a);
      vals.insert(b);
    }
    std::vector<Atom> spare_src, spare_dst;
    for (auto& [a, b] : partial) {
      if (!keys.contains(b)) spare_dst.push_back(b);  // hit but never a source
      if (!vals.contains(a)) spare_src.push_back(a);  // source but never hit
    }
    std::sort(spare_src.begin(), spare_src.end());
    std::sort(spare_dst.begin(), spare_dst.end());
    assert(spare_src.size() == spare_dst.size());
    Perm p;
    for (auto& [a, b] : partial) p.map_[a] = b;
    for (size_t i = 0; i < spare_dst.size(); ++i) p.map_[spare_dst[i]] = spare_src[i];
    p.strip_fixpoints();
    return p;
  }

  Atom operator()(Atom a) const {
    auto it = map_.find(a);
    return it == map_.end() ? a : it->second;
  }

  /// (p.after(q))(a) == p(q(a)).
  Perm after(const Perm& q) const {
    std::map<Atom, Atom> m;
    for (auto& [a, b] : q.map_) m[a] = (*this)(b);
    for (auto& [a, b] : map_)
      if (!m.count(a)) m[a] = b;
    Perm r;
    r.map_ = std::move(m);
    r.strip_fixpoints();
    return r;
  }

  Perm inverse() const {
    Perm r;
    for (auto& [a, b] : map_) r.map_[b] = a;
    return r;
  }

  bool is_identity() const { return map_.empty(); }

  const std::map<Atom, Atom>& mapping() const { return map_; }

  /// True iff the permutation fixes every atom of the set.
  bool fixes(const AtomSet& s) const {
    for (Atom a : s)
      if ((*this)(a) != a) return false;
    return true;
  }

private:
  void strip_fixpoints() {
    for (auto it = map_.begin(); it != map_.end();)
      it = (it->first == it->second) ? map_.erase(it) : std::next(it);
  }

  std::map<Atom, Atom> map_;
};

/// Renames the atoms of a sequence: atoms in `frozen` stay put, the rest are
/// sent, in order of first occurrence, to the smallest ids outside `frozen`.
/// Returns the renamed sequence and a permutation mapping input to output.
/// Two sequences rename equally iff some frozen-fixing permutation maps one
/// to the other.
inline std::pair<std::vector<Atom>, Perm> canonical_rename(
    std::span<const Atom> seq, const AtomSet& frozen) {
  std::map<Atom, Atom> assign;
  std::vector<Atom> out;
  out.reserve(seq.size());
  int next = 0;
  auto next_fresh = [&]() {
    Atom a{next};
    while (frozen.contains(a)) ++a.id;
    next = a.id + 1;
    return a;
  };
  for (Atom a : seq) {
    if (frozen.contains(a)) {
      out.push_back(a);
      continue;
    }
    auto it = assign.find(a);
    if (it == assign.end()) it = assign.emplace(a, next_fresh()).first;
    out.push_back(it->second);
  }
  return {out, Perm::extending(assign)};
}

}  // namespace su
