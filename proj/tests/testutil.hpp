#pragma once

#include <functional>

#include "su/pofset.hpp"
#include "su/sutree.hpp"

namespace su::test {

/// Deterministic splitmix64; tests must not depend on platform RNGs.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n); n = 0 yields 0.
  uint64_t next(uint64_t n) { return n == 0 ? 0 : next64() % n; }

  bool coin() { return next(2) == 1; }

private:
  uint64_t state_;
};

inline Perm random_perm(Rng& rng, int universe) {
  std::vector<Atom> src, dst;
  for (int i = 0; i < universe; ++i) src.push_back(Atom{i});
  dst = src;
  for (size_t i = dst.size(); i > 1; --i) std::swap(dst[i - 1], dst[rng.next(i)]);
  std::map<Atom, Atom> m;
  for (size_t i = 0; i < src.size(); ++i) m[src[i]] = dst[i];
  return Perm::extending(m);
}

/// Random descriptor of bounded size (no Reg).
inline Desc random_desc(Rng& rng, int max_nodes = 5) {
  if (max_nodes <= 1) return rng.coin() ? atoms_desc() : unit_desc();
  switch (rng.next(4)) {
    case 0: return unit_desc();
    case 1: return atoms_desc();
    case 2: {
      int l = 1 + static_cast<int>(rng.next(static_cast<uint64_t>(max_nodes - 1)));
      return sum_desc(random_desc(rng, l), random_desc(rng, max_nodes - l));
    }
    default: {
      int l = 1 + static_cast<int>(rng.next(static_cast<uint64_t>(max_nodes - 1)));
      return prod_desc(random_desc(rng, l), random_desc(rng, max_nodes - l));
    }
  }
}

/// Random value of a descriptor with atoms drawn from [0, atom_range).
inline Val random_value(Rng& rng, const Desc& d, int atom_range) {
  switch (d->tag) {
    case SetDesc::Tag::Unit: return vunit();
    case SetDesc::Tag::Atoms: return vatom(static_cast<int>(rng.next(static_cast<uint64_t>(atom_range))));
    case SetDesc::Tag::Sum:
      return rng.coin() ? vinl(random_value(rng, d->left, atom_range))
                        : vinr(random_value(rng, d->right, atom_range));
    case SetDesc::Tag::Prod:
      return vpair(random_value(rng, d->left, atom_range), random_value(rng, d->right, atom_range));
    default: throw TypeError("random_value: register descriptor");
  }
}

/// Random single-use tree between the given descriptors. Queries draw their
/// right-hand sides from unused variables and the constant pool.
inline SUTree random_tree(Rng& rng, const Desc& dom, const Desc& cod,
                          const std::vector<Atom>& const_pool, int query_budget = 3) {
  NormalForm dn = normal_form(dom), cn = normal_form(cod);
  SUTree t{dom, cod, {}};
  for (size_t b = 0; b < dn.branch_count(); ++b) {
    std::function<TT(std::vector<int>, int)> build = [&](std::vector<int> avail, int budget) -> TT {
      bool query = budget > 0 && !avail.empty() && rng.next(3) > 0;
      if (query) {
        size_t li = rng.next(avail.size());
        int lhs = avail[li];
        avail.erase(avail.begin() + static_cast<long>(li));
        Operand rhs;
        if (!avail.empty() && (const_pool.empty() || rng.coin())) {
          size_t ri = rng.next(avail.size());
          rhs = ovar(avail[ri]);
          avail.erase(avail.begin() + static_cast<long>(ri));
        } else if (!const_pool.empty()) {
          rhs = oconst(const_pool[rng.next(const_pool.size())]);
        } else {
          // no usable rhs; fall through to leaf below
          avail.push_back(lhs);
          query = false;
        }
        if (query) {
          TT yes = build(avail, budget - 1);
          TT no = build(avail, budget - 1);
          return make_query(ovar(lhs), rhs, yes, no);
        }
      }
      size_t cb = rng.next(cn.branch_count());
      std::vector<Operand> outs;
      for (int i = 0; i < cn.arity(cb); ++i) {
        if (!avail.empty() && (const_pool.empty() || rng.coin())) {
          size_t vi = rng.next(avail.size());
          outs.push_back(ovar(avail[vi]));
          avail.erase(avail.begin() + static_cast<long>(vi));
        } else if (!const_pool.empty()) {
          outs.push_back(oconst(const_pool[rng.next(const_pool.size())]));
        } else {
          return TT{};  // no way to fill the slot; signals retry
        }
      }
      return make_leaf(cb, std::move(outs));
    };
    std::vector<int> avail;
    for (int i = 0; i < dn.arity(b); ++i) avail.push_back(i);
    TT node;
    for (int attempt = 0; attempt < 64 && !node; ++attempt) node = build(avail, query_budget);
    if (!node) throw InternalError("random_tree: could not fill codomain slots");
    t.branches.push_back(node);
  }
  return t;
}

/// All words of length <= max_len over the given letters (shortest first).
inline std::vector<std::vector<Val>> all_words(const std::vector<Val>& letters, int max_len) {
  std::vector<std::vector<Val>> out{{}};
  size_t level_start = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_start; i < level_end; ++i)
      for (const Val& l : letters) {
        auto w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
    level_start = level_end;
  }
  return out;
}

}  // namespace su::test
