#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "optwist/graded.hpp"
#include "optwist/koszul.hpp"

namespace optwist {

// Sparse multilinear map A^{otimes n} -> A given by structure constants
// (basis input tuple -> output element). Symmetric maps store constants on
// non-decreasing tuples only; evaluation on other tuples applies the
// Koszul-signed symmetric group action.
struct MultilinearMap {
  int arity = 0;
  int map_degree = 0;
  bool symmetric = false;
  std::map<std::vector<int>, Element> entries;

  MultilinearMap() = default;
  MultilinearMap(int n, int deg, bool sym = false)
      : arity(n), map_degree(deg), symmetric(sym) {}

  bool is_zero() const { return entries.empty(); }

  // Koszul sign of stable-sorting `key`; sorted key returned through `key`.
  static int sort_sign(std::vector<int>& key, const FilteredGradedModule& mod) {
    const int n = static_cast<int>(key.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key[a] < key[b]; });
    std::vector<int> degs(n);
    Permutation perm(n);
    for (int target = 0; target < n; ++target) perm[order[target]] = target;
    for (int i = 0; i < n; ++i) degs[i] = mod.basis.degree(key[i]);
    int s = koszul_sign(degs, perm);
    std::vector<int> sorted(n);
    for (int t = 0; t < n; ++t) sorted[t] = key[order[t]];
    key = std::move(sorted);
    return s;
  }

  void add_entry(std::vector<int> key, const Element& out, const FilteredGradedModule& mod) {
    if (static_cast<int>(key.size()) != arity)
      throw LengthMismatch("entry tuple length != arity");
    if (out.is_zero()) return;
    int s = 1;
    if (symmetric) s = sort_sign(key, mod);
    auto it = entries.find(key);
    if (it == entries.end()) {
      Element e = out * Rational(s);
      if (!e.is_zero()) entries.emplace(std::move(key), std::move(e));
    } else {
      it->second += out * Rational(s);
      if (it->second.is_zero()) entries.erase(it);
    }
  }

  Element evaluate(std::vector<int> key, const FilteredGradedModule& mod) const {
    int s = 1;
    if (symmetric) s = sort_sign(key, mod);
    auto it = entries.find(key);
    if (it == entries.end()) return {};
    return it->second * Rational(s);
  }

  // evaluate on (possibly non-basis) elements; arity must match
  Element evaluate_elements(const std::vector<Element>& args,
                            const FilteredGradedModule& mod) const {
    if (static_cast<int>(args.size()) != arity)
      throw LengthMismatch("evaluate_elements: wrong argument count");
    Element acc;
    std::vector<int> key(arity);
    std::vector<std::map<int, Rational>::const_iterator> its;
    // iterate the product of supports
    std::function<void(int, Rational)> rec = [&](int pos, Rational c) {
      if (c == 0) return;
      if (pos == arity) {
        acc += evaluate(key, mod) * c;
        return;
      }
      for (const auto& [i, v] : args[pos].coeffs) {
        key[pos] = i;
        rec(pos + 1, c * v);
      }
    };
    rec(0, Rational(1));
    return acc;
  }

  MultilinearMap& operator+=(const MultilinearMap& o) {
    if (o.arity != arity || o.map_degree != map_degree || o.symmetric != symmetric)
      throw VariantMismatch("adding incompatible multilinear maps");
    for (const auto& [k, v] : o.entries) {
      auto it = entries.find(k);
      if (it == entries.end())
        entries.emplace(k, v);
      else {
        it->second += v;
        if (it->second.is_zero()) entries.erase(it);
      }
    }
    return *this;
  }
  friend MultilinearMap operator*(const MultilinearMap& m, const Rational& s) {
    MultilinearMap r(m.arity, m.map_degree, m.symmetric);
    if (s == 0) return r;
    for (const auto& [k, v] : m.entries) r.entries.emplace(k, v * s);
    return r;
  }
  bool operator==(const MultilinearMap& o) const {
    return arity == o.arity && map_degree == o.map_degree && symmetric == o.symmetric &&
           entries == o.entries;
  }

  // structure constants respect the grading: |out| = sum |in| + map_degree
  void check_degrees(const FilteredGradedModule& mod) const {
    for (const auto& [k, out] : entries) {
      int din = 0;
      for (int i : k) din += mod.basis.degree(i);
      for (const auto& [j, v] : out.coeffs)
        if (mod.basis.degree(j) != din + map_degree)
          throw DegreeMismatch("structure constant violates the map degree");
    }
  }

  // filtration of output >= sum of input filtrations + extra
  bool filtration_preserving(const FilteredGradedModule& mod, int extra = 0) const {
    for (const auto& [k, out] : entries) {
      int fin = 0;
      for (int i : k) fin += mod.basis.filtration(i);
      for (const auto& [j, v] : out.coeffs)
        if (mod.basis.filtration(j) < fin + extra) return false;
    }
    return true;
  }
};

// ns partial composition (f o_i g), 1-based slot i, with the mechanical
// Koszul sign (-1)^{|g| * (deg of the first i-1 inputs)}.
inline MultilinearMap compose_at(const MultilinearMap& f, int i, const MultilinearMap& g,
                                 const FilteredGradedModule& mod) {
  if (i < 1 || i > f.arity) throw IndexOutOfRange("compose_at: slot out of range");
  MultilinearMap r(f.arity + g.arity - 1, f.map_degree + g.map_degree, false);
  for (const auto& [gu, gout] : g.entries) {
    for (const auto& [gb, gc] : gout.coeffs) {
      for (const auto& [fu, fout] : f.entries) {
        if (fu[i - 1] != gb) continue;
        int pre = 0;
        for (int j = 0; j < i - 1; ++j) pre += mod.basis.degree(fu[j]);
        int sign = ((g.map_degree & 1) && (pre & 1)) ? -1 : 1;
        std::vector<int> key;
        key.reserve(r.arity);
        key.insert(key.end(), fu.begin(), fu.begin() + (i - 1));
        key.insert(key.end(), gu.begin(), gu.end());
        key.insert(key.end(), fu.begin() + i, fu.end());
        r.add_entry(std::move(key), fout * (gc * sign), mod);
      }
    }
  }
  return r;
}

// full symmetrisation: sum over all permutations of inputs, with Koszul signs,
// optionally weighted by sgn(sigma) (classical regime).
inline MultilinearMap symmetrize_map(const MultilinearMap& m, const FilteredGradedModule& mod,
                                     bool with_sgn) {
  MultilinearMap r(m.arity, m.map_degree, true);
  std::vector<int> idx(m.arity);
  for (int i = 0; i < m.arity; ++i) idx[i] = i;
  std::vector<int> perm(idx);
  std::sort(perm.begin(), perm.end());
  do {
    // sigma: position j receives input perm[j]
    for (const auto& [k, out] : m.entries) {
      std::vector<int> nk(m.arity);
      std::vector<int> degs(m.arity);
      Permutation p(m.arity);
      for (int j = 0; j < m.arity; ++j) {
        nk[j] = k[perm[j]];
        p[perm[j]] = j;
      }
      for (int j = 0; j < m.arity; ++j) degs[j] = mod.basis.degree(k[j]);
      int s = koszul_sign(degs, p);
      if (with_sgn) s *= permutation_sign(p);
      r.add_entry(std::move(nk), out * Rational(s), mod);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

}  // namespace optwist
